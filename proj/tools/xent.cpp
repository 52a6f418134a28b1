// Command-line front end for the xent library.
//
// Exit codes: 0 success or certified, 1 validation or audit failure, 2 usage error.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "xent/xent.hpp"

namespace fs = std::filesystem;
using namespace xent;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

bool g_bits = false;

double in_units(double nats) { return g_bits ? nats / std::log(2.0) : nats; }
const char* unit() { return g_bits ? "bits" : "nats"; }

Word parse_word(const std::string& text) {
  std::istringstream in(text);
  return read_path(in);
}

void print_vector(std::ostream& out, const Vector& v) {
  out << '[';
  for (Eigen::Index i = 0; i < v.size(); ++i) out << (i ? ", " : "") << std::setprecision(12) << v(i);
  out << ']';
}

void print_chain_summary(std::ostream& out, const FiniteMarkovChain& chain, const char* prefix) {
  out << prefix << "states: " << chain.size() << '\n';
  out << prefix << "irreducible: " << (chain.structure().irreducible ? "yes" : "no") << '\n';
  out << prefix << "period: " << chain.structure().period << '\n';
  out << prefix << "stationary: ";
  print_vector(out, chain.stationary());
  out << '\n';
  out << prefix << "entropy rate: " << std::setprecision(12) << in_units(entropy_rate(chain)) << ' ' << unit()
      << '\n';
}

// Runs the individual checks on a raw transition matrix so that every
// failing invariant is listed, not just the first one.
std::vector<std::string> matrix_failures(const Json& transitions) {
  std::vector<std::string> failures;
  Matrix p;
  try {
    p = detail::matrix_from_json(transitions);
  } catch (const Error& e) {
    failures.push_back(std::string(e.what()));
    return failures;
  }
  try {
    check_stochastic(p);
  } catch (const Error& e) {
    failures.push_back(std::string(e.what()));
  }
  try {
    stationary_distribution(p);
  } catch (const Error& e) {
    failures.push_back(std::string(e.what()));
  }
  return failures;
}

int cmd_validate(const std::string& file) {
  Json doc;
  try {
    doc = read_json_file(file);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  try {
    const Model model = model_from_json(doc);
    std::cout << "file: " << file << '\n' << "type: " << model_kind(model) << '\n';
    std::cout << "alphabet size: " << observed_alphabet(model).size() << '\n';
    if (const auto* fm = std::get_if<FunctionMarkovModel>(&model)) {
      print_chain_summary(std::cout, fm->hidden(), "hidden ");
    } else {
      print_chain_summary(std::cout, *as_markov(model), "");
    }
    if (const auto* ladder = std::get_if<LadderChain>(&model)) {
      std::cout << "truncation: [-" << ladder->truncation().minus << ", " << ladder->truncation().plus << "]\n"
                << "tail mass bound: " << ladder->tail_mass_bound() << " (tolerance " << ladder->tolerance() << ")\n";
    }
    std::cout << "valid\n";
    return kOk;
  } catch (const Error& e) {
    std::vector<std::string> failures;
    if (doc.is_object() && doc.value("type", std::string()) == "markov" && doc.contains("transitions"))
      failures = matrix_failures(doc.at("transitions"));
    if (failures.empty()) failures.push_back(std::string(e.what()));
    std::cout << "file: " << file << "\ninvalid\n";
    for (const auto& f : failures) std::cout << "  - " << f << '\n';
    return kFailure;
  }
}

int cmd_sample(const std::string& file, std::size_t length, std::uint64_t seed, const std::string& out_path) {
  const Model model = load_model(file);
  const SamplePath path = sample_path(model, length, seed, fs::path(file).stem().string());
  if (out_path.empty()) {
    write_path(std::cout, path.symbols);
  } else {
    std::ofstream out(out_path);
    require(static_cast<bool>(out), ErrorCode::Io, "cannot write " + out_path);
    write_path(out, path.symbols);
  }
  if (path.truncation_hit) std::cerr << "warning: the path touched the truncation boundary\n";
  return kOk;
}

std::optional<double> reference_value(const ExperimentSpec& spec) {
  if (spec.estimator == Estimator::Statistic) return 0.0;
  const FiniteMarkovChain* x = as_markov(*spec.model_x);
  const FiniteMarkovChain* y = as_markov(*spec.model_y);
  if (!x || !y) return std::nullopt;
  return cross_entropy_rate(*x, *y);
}

int cmd_estimate(const std::string& estimator, const std::string& spec_file, std::optional<unsigned> jobs) {
  Json doc = read_json_file(spec_file);
  if (doc.is_object() && !doc.contains("estimator")) doc["estimator"] = estimator;
  ExperimentSpec spec = spec_from_json(doc, fs::path(spec_file).parent_path());
  require(to_string(spec.estimator) == estimator, ErrorCode::InvalidSpec,
          "spec estimator '" + to_string(spec.estimator) + "' does not match subcommand '" + estimator + "'");
  if (jobs) spec.jobs = *jobs;
  if (g_bits) spec.log_base = LogBase::Bits;
  const AggregateSeries series = monte_carlo(spec);
  std::ostringstream csv;
  write_aggregate_csv(csv, series, spec.log_base);
  if (spec.output.empty()) {
    std::cout << csv.str();
  } else {
    const fs::path dir = spec.output_dir;
    fs::create_directories(dir);
    const fs::path out = dir / spec.output;
    write_text_file(out, csv.str());
    std::cout << "wrote " << out.string() << '\n';
    if (spec.plot) {
      const fs::path svg = fs::path(out).replace_extension(".svg");
      std::istringstream in(csv.str());
      std::optional<double> ref = reference_value(spec);
      if (ref && spec.log_base == LogBase::Bits) ref = *ref / std::log(2.0);
      const std::string y_label = spec.estimator == Estimator::Match  ? "log m / L_m"
                                  : spec.estimator == Estimator::Wait ? "log W_n / n"
                                                                      : "(1/n) log W_n P(x_1^n)";
      const Axis axis = spec.estimator == Estimator::Match ? Axis::M : Axis::N;
      write_text_file(svg, render_svg({{spec.model_x_id + " vs " + spec.model_y_id, read_aggregate_csv(in, axis), ref}},
                                      to_string(spec.estimator) + " estimator", y_label));
      std::cout << "wrote " << svg.string() << '\n';
    }
  }
  return kOk;
}

int cmd_cross_entropy(const std::string& fx, const std::string& fy, std::optional<std::size_t> n) {
  const Model x = load_model(fx);
  const Model y = load_model(fy);
  if (n) {
    std::cout << "partial cross entropy (n = " << *n << "): " << std::setprecision(12)
              << in_units(partial_cross_entropy(x, y, *n)) << ' ' << unit() << '\n';
    return kOk;
  }
  const FiniteMarkovChain* cx = as_markov(x);
  const FiniteMarkovChain* cy = as_markov(y);
  require(cx && cy, ErrorCode::InvalidArgument,
          "the closed-form rate needs two Markov models; use --n for the exact finite-n value");
  std::cout << "cross entropy rate: " << std::setprecision(12) << in_units(cross_entropy_rate(*cx, *cy)) << ' '
            << unit() << '\n';
  return kOk;
}

struct AuditArgs {
  std::string condition;
  std::string file;
  std::size_t n_max = 4;
  std::size_t m_max = 4;
  std::size_t tau = 2;
  std::optional<double> k;
  std::size_t ell_min = 1;
  std::size_t ell_max = 1;
  std::string a, b;
  std::size_t gap_budget = 1000;
  std::uint64_t pair_budget = kDefaultPairBudget;
  std::string json;
};

int cmd_audit(const AuditArgs& args) {
  const Model model = load_model(args.file);
  if (args.condition == "gap") {
    const Word a = parse_word(args.a);
    const Word b = parse_word(args.b);
    try {
      const std::size_t gap = minimal_positive_gap(model, a, b, args.gap_budget);
      std::cout << "minimal positive gap: " << gap << '\n';
      if (!args.json.empty()) {
        const Json j{{"condition", "GAP"}, {"a", a}, {"b", b}, {"gap", gap}, {"gap_budget", args.gap_budget}};
        if (args.json == "-") std::cout << j.dump(2) << '\n';
        else write_text_file(args.json, j.dump(2) + "\n");
      }
      return kOk;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoGapFound) throw;
      std::cout << "no admissible gap up to " << args.gap_budget << '\n';
      return kFailure;
    }
  }

  AuditOptions options;
  options.pair_budget = args.pair_budget;
  options.slack_k = args.k;
  DecouplingReport report;
  if (args.condition == "sld") {
    report = check_sld(model, args.n_max, args.m_max, args.tau, options);
  } else if (args.condition == "ild") {
    report = check_ild(model, args.n_max, args.m_max, options);
  } else if (args.condition == "ud") {
    report = check_ud(model, args.n_max, args.m_max, options);
  } else {
    const FiniteMarkovChain* chain = as_markov(model);
    require(chain != nullptr, ErrorCode::InvalidArgument, "psi audit needs a Markov model");
    report = psi_report(*chain, args.ell_min, std::max(args.ell_min, args.ell_max));
  }
  write_report_table(std::cout, report);
  if (!args.json.empty()) {
    const std::string text = report_to_json(report).dump(2) + "\n";
    if (args.json == "-") std::cout << text;
    else write_text_file(args.json, text);
  }
  return report.certified() ? kOk : kFailure;
}

int cmd_figure1(const Figure1Options& options, const std::string& out_dir, bool plot) {
  const Figure1Result r = run_figure1(options);
  const Figure1Files files = write_figure1(r, out_dir, plot);
  for (const auto* c : {&r.same, &r.diff}) {
    std::cout << c->name << ": reference " << std::setprecision(8) << in_units(c->reference) << ' ' << unit() << '\n';
    for (const auto& p : c->series.points) {
      std::cout << "  m = " << std::setw(8) << p.index << "  mean " << std::setw(12)
                << (p.mean ? format_number(in_units(*p.mean)) : "nan") << "  sem " << std::setw(12)
                << (p.sem ? format_number(in_units(*p.sem)) : "nan") << "  censored " << p.censored_count << '\n';
    }
  }
  std::cout << "wrote " << files.same_csv.string() << ", " << files.diff_csv.string() << ", " << files.meta.string();
  if (plot) std::cout << ", " << files.svg.string();
  std::cout << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"xent: cross-entropy estimation by waiting times and match lengths"};
  app.require_subcommand(1);
  app.add_flag("--bits", g_bits, "Report rates in bits instead of nats");

  // model validate
  auto* model_cmd = app.add_subcommand("model", "Model utilities");
  model_cmd->require_subcommand(1);
  std::string validate_file;
  auto* validate_cmd = model_cmd->add_subcommand("validate", "Check a model file and print its structure");
  validate_cmd->add_option("file", validate_file, "Model JSON")->required();

  // sample
  std::string sample_file, sample_out;
  std::size_t sample_length = 0;
  std::uint64_t sample_seed = 0;
  auto* sample_cmd = app.add_subcommand("sample", "Draw a stationary sample path");
  sample_cmd->add_option("file", sample_file, "Model JSON")->required();
  sample_cmd->add_option("--length", sample_length, "Path length")->required();
  sample_cmd->add_option("--seed", sample_seed, "Seed")->required();
  sample_cmd->add_option("--out", sample_out, "Output file (default stdout)");

  // estimate
  auto* estimate_cmd = app.add_subcommand("estimate", "Monte Carlo estimation run");
  estimate_cmd->require_subcommand(1);
  std::string spec_file, estimator_name;
  std::optional<unsigned> jobs;
  for (const char* name : {"wait", "match", "statistic"}) {
    auto* sub = estimate_cmd->add_subcommand(name, std::string(name) + " estimator");
    sub->add_option("--spec", spec_file, "Experiment spec JSON")->required();
    sub->add_option("--jobs", jobs, "Worker threads (default: all)");
    sub->callback([&estimator_name, name] { estimator_name = name; });
  }

  // exact cross-entropy
  auto* exact_cmd = app.add_subcommand("exact", "Exact quantities");
  exact_cmd->require_subcommand(1);
  std::string ce_x, ce_y;
  std::optional<std::size_t> ce_n;
  auto* ce_cmd = exact_cmd->add_subcommand("cross-entropy", "Cross-entropy rate, or its finite-n value with --n");
  ce_cmd->add_option("fileX", ce_x, "Model X")->required();
  ce_cmd->add_option("fileY", ce_y, "Model Y")->required();
  ce_cmd->add_option("--n", ce_n, "Word length for the exact finite-n value")->check(CLI::PositiveNumber);

  // audit
  auto* audit_cmd = app.add_subcommand("audit", "Decoupling audits");
  audit_cmd->require_subcommand(1);
  AuditArgs audit;
  for (const char* name : {"sld", "ild", "ud", "psi", "gap"}) {
    auto* sub = audit_cmd->add_subcommand(name, std::string(name) + " audit");
    sub->add_option("file", audit.file, "Model JSON")->required();
    sub->add_option("--json", audit.json, "Also write the report as JSON ('-' for stdout)");
    const std::string n(name);
    if (n == "sld" || n == "ild" || n == "ud") {
      sub->add_option("--n-max", audit.n_max, "Largest |a|")->check(CLI::PositiveNumber);
      sub->add_option("--m-max", audit.m_max, "Largest |b|")->check(CLI::PositiveNumber);
      sub->add_option("--budget", audit.pair_budget, "Maximum number of word pairs");
      sub->add_option("--K", audit.k, "Exempt pairs with P(a)P(b) <= exp(-K n)");
    }
    if (n == "sld") sub->add_option("--tau", audit.tau, "Gap budget");
    if (n == "psi") {
      sub->add_option("--ell", audit.ell_min, "Separation (or first separation with --ell-max)")
          ->check(CLI::PositiveNumber);
      sub->add_option("--ell-max", audit.ell_max, "Last separation");
    }
    if (n == "gap") {
      sub->add_option("--a", audit.a, "Left word, symbols separated by spaces")->required();
      sub->add_option("--b", audit.b, "Right word")->required();
      sub->add_option("--budget", audit.gap_budget, "Largest gap searched");
    }
    sub->callback([&audit, n] { audit.condition = n; });
  }

  // experiment figure1 / plot
  auto* experiment_cmd = app.add_subcommand("experiment", "Canned experiments");
  experiment_cmd->require_subcommand(1);
  Figure1Options fig;
  std::string fig_out = "figure1";
  bool no_plot = false;
  auto* fig_cmd = experiment_cmd->add_subcommand("figure1", "Match-length estimator on the periodic 4-letter chains");
  fig_cmd->add_option("--trials", fig.trials, "Trials per case")->check(CLI::PositiveNumber);
  fig_cmd->add_option("--seed", fig.seed, "Base seed");
  fig_cmd->add_option("--out", fig_out, "Output directory");
  fig_cmd->add_option("--jobs", fig.jobs, "Worker threads (default: all)");
  fig_cmd->add_flag("--no-plot", no_plot, "Skip the SVG");
  std::string plot_dir;
  auto* plot_cmd = experiment_cmd->add_subcommand("plot", "Re-render figure1.svg from the CSV files in a directory");
  plot_cmd->add_option("dir", plot_dir, "Output directory of a figure1 run")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (validate_cmd->parsed()) return cmd_validate(validate_file);
    if (sample_cmd->parsed()) return cmd_sample(sample_file, sample_length, sample_seed, sample_out);
    if (estimate_cmd->parsed()) return cmd_estimate(estimator_name, spec_file, jobs);
    if (ce_cmd->parsed()) return cmd_cross_entropy(ce_x, ce_y, ce_n);
    if (audit_cmd->parsed()) return cmd_audit(audit);
    if (fig_cmd->parsed()) return cmd_figure1(fig, fig_out, !no_plot);
    if (plot_cmd->parsed()) {
      const fs::path svg = fs::path(plot_dir) / "figure1.svg";
      write_text_file(svg, regenerate_figure1_svg(plot_dir));
      std::cout << "wrote " << svg.string() << '\n';
      return kOk;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}
