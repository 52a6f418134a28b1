// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "test_support.hpp"

using namespace xent;
using namespace xent::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// AC1: match-length estimator on the periodic 4-letter pair.
void ac1(Outcome& o) {
  const Figure1Result r = run_figure1();
  for (const Figure1Case* c : {&r.same, &r.diff}) {
    const auto& pts = c->series.points;
    const auto at = [&](std::uint64_t m) -> const AggregatePoint& {
      for (const auto& p : pts)
        if (p.index == m) return p;
      throw Error(ErrorCode::InvalidArgument, "grid point missing");
    };
    const auto& lo = at(1'000);
    const auto& hi = at(1'000'000);
    o.require(lo.mean.has_value() && hi.mean.has_value(), c->name + ": censored grid point");
    if (!lo.mean || !hi.mean) continue;
    const double err_hi = std::abs(*hi.mean - c->reference);
    const double err_lo = std::abs(*lo.mean - c->reference);
    o.detail << ' ' << c->name << ": ref " << fmt(c->reference) << " mean@1e6 " << fmt(*hi.mean) << " (rel err "
             << fmt(err_hi / c->reference) << ", |err|@1e3 " << fmt(err_lo) << ")";
    o.require(err_hi <= 0.1 * c->reference, c->name + " relative error above 10%");
    o.require(err_hi < err_lo, c->name + " error did not shrink");
  }
}

// AC2: normalized statistic with X = Y on the aperiodic two-state chain.
void ac2(Outcome& o) {
  const Model m = load_fixture("two_state.json");
  ExperimentSpec spec;
  spec.estimator = Estimator::Statistic;
  spec.model_x = spec.model_y = std::make_shared<const Model>(m);
  spec.grid = {10, 15, 20, 25};
  spec.trials = 100;
  spec.seed = 2;
  // W_25 is around exp(25 H) ~ 1e7 here; a generous cap keeps censoring negligible
  spec.reference_cap = 2'000'000'000;
  const auto trials = run_trials(spec);
  const auto agg = aggregate(trials);
  std::vector<double> below(spec.grid.size(), 0.0);
  for (const auto& t : trials)
    for (std::size_t i = 0; i < spec.grid.size(); ++i)
      if (t.points[i].value && *t.points[i].value < -0.2) below[i] += 1.0 / static_cast<double>(trials.size());
  const auto& p10 = agg.points.front();
  const auto& p25 = agg.points.back();
  o.require(p10.mean && p25.mean, "all trials censored");
  if (!p10.mean || !p25.mean) return;
  o.detail << " mean@10 " << fmt(*p10.mean) << " mean@25 " << fmt(*p25.mean) << " censored@25 " << p25.censored_count
           << " frac<-0.2";
  for (double f : below) o.detail << ' ' << fmt(f);
  o.require(std::abs(*p25.mean) <= 0.15, "|mean| at n = 25 above 0.15");
  o.require(std::abs(*p25.mean) <= std::abs(*p10.mean), "|mean| grew from n = 10 to 25");
  for (std::size_t i = 1; i < below.size(); ++i) o.require(below[i] <= below[i - 1], "lower-tail fraction increased");
}

// AC3: index and duality against the naive scans.
void ac3(Outcome& o) {
  Gen gen(3);
  std::size_t mismatches = 0, grid_points = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t k = gen.size(1, 4);
    const FiniteMarkovChain chain = gen.chain(k, gen.coin());
    const Model model = chain;
    const std::size_t ny = gen.size(1, 1000);
    const Word y = sample_path(model, ny, gen.size(0, 1u << 30)).symbols;
    Word x;
    if (gen.coin() && ny > 1) {
      const std::size_t start = gen.size(0, ny - 1);
      x.assign(y.begin() + static_cast<std::ptrdiff_t>(start),
               y.begin() + static_cast<std::ptrdiff_t>(std::min(ny, start + gen.size(1, 60))));
    } else {
      x = sample_path(model, gen.size(1, 60), gen.size(0, 1u << 30)).symbols;
    }
    const MatchIndex idx(y, k);
    const auto naive = waiting_profile_naive(x, y, x.size());
    const auto indexed = waiting_profile(idx, x, x.size());
    if (!(indexed == naive)) ++mismatches;
    std::vector<std::uint64_t> grid;
    for (std::uint64_t m = gen.size(1, 3); m <= ny; m += gen.size(1, 40)) grid.push_back(m);
    if (grid.empty()) grid.push_back(ny);
    const auto mp = match_profile_from_waiting(indexed, grid);
    for (std::uint64_t m : grid) {
      ++grid_points;
      if (mp.entries.at(m) != match_length_naive(x, y, m)) ++mismatches;
    }
  }
  o.detail << " 1000 fixtures, " << grid_points << " grid points, mismatches " << mismatches;
  o.require(mismatches == 0, "mismatch found");
}

// AC4: exact finite-n cross entropy against the rate.
void ac4(Outcome& o) {
  const Model a = load_fixture("two_state.json");
  const Model b = load_fixture("two_state_sticky.json");
  for (const auto& [x, y, name] : {std::tuple{&a, &b, "(two_state, sticky)"}, std::tuple{&b, &a, "(sticky, two_state)"}}) {
    const double rate = cross_entropy_rate(*as_markov(*x), *as_markov(*y));
    const double e4 = std::abs(partial_cross_entropy(*x, *y, 4) - rate);
    const double e12 = std::abs(partial_cross_entropy(*x, *y, 12) - rate);
    o.detail << ' ' << name << " rate " << fmt(rate) << " |err4| " << fmt(e4) << " |err12| " << fmt(e12);
    o.require(e12 < e4, std::string(name) + " n = 12 not closer than n = 4");
    o.require(e12 < 0.02, std::string(name) + " n = 12 off by 0.02 or more");
  }
}

// AC5: decoupling audits.
void ac5(Outcome& o) {
  const Model swap = load_fixture("swap.json");
  const auto ild = check_ild(swap, 8, 4);
  o.require(!ild.certified(), "ILD on the swap chain certified");
  const auto sld = check_sld(swap, 8, 4, 2);
  o.require(sld.certified(), "SLD on the swap chain not certified");
  for (const auto& row : sld.per_n) {
    o.require(row.tau <= 1, "swap tau above 1 at n = " + std::to_string(row.n));
    o.require(std::abs(row.constant - std::log(2.0)) <= 1e-9, "swap constant not log 2 at n = " + std::to_string(row.n));
  }
  o.detail << " (a) ILD violations " << ild.violation_count << ", SLD c = " << fmt(sld.per_n.back().constant)
           << " tau = " << sld.per_n.back().tau;

  const Model two = load_fixture("two_state.json");
  const FiniteMarkovChain& c = *as_markov(two);
  double closed = 0.0;
  for (Symbol x = 0; x < 2; ++x)
    for (Symbol y = 0; y < 2; ++y) closed = std::max(closed, std::log(c.pi(y) / c.p(x, y)));
  const auto sld2 = check_sld(two, 8, 4, 2);
  o.require(sld2.certified(), "SLD on the two-state chain not certified");
  for (const auto& row : sld2.per_n) {
    o.require(row.tau == 0, "two-state tau nonzero at n = " + std::to_string(row.n));
    o.require(std::abs(row.constant - closed) <= 1e-9, "two-state constant off at n = " + std::to_string(row.n));
  }
  o.detail << "; (b) c = " << fmt(sld2.per_n.back().constant) << " closed form " << fmt(closed);

  double worst_margin = kPosInf;
  for (const char* f : {"iid3.json", "two_state.json", "two_state_sticky.json", "swap.json", "figure1_y.json",
                        "figure1_x_diff.json"}) {
    const Model m = load_fixture(f);
    const double bound = -std::log(as_markov(m)->stationary().minCoeff());
    const auto ud = check_ud(m, 4, 4);
    for (const auto& row : ud.per_n) {
      o.require(row.constant <= bound + 1e-9, std::string("UD above bound on ") + f);
      worst_margin = std::min(worst_margin, bound - row.constant);
    }
  }
  o.detail << "; (c) smallest UD margin " << fmt(worst_margin);
}

// AC6: forced gaps on the sign-lumped identity ladder.
void ac6(Outcome& o) {
  const Model m = load_fixture("ladder_sign.json");
  const auto& fm = std::get<FunctionMarkovModel>(m);
  const Word b{0, 1};
  o.detail << " gaps";
  for (std::size_t n = 2; n <= 10; ++n) {
    const Word a(n, 1);
    const std::size_t gap = minimal_positive_gap(m, a, b, 1000);
    o.detail << ' ' << gap;
    o.require(gap >= n, "gap below n at n = " + std::to_string(n));
    if (n <= 6) o.require(brute_force_gap(fm, a, b, 1000) == std::optional<std::size_t>(gap),
                          "brute force disagrees at n = " + std::to_string(n));
  }
}

// AC7: process invariants on every bundled model file.
void ac7(Outcome& o) {
  std::size_t files = 0;
  double worst_consistency = 0.0, worst_norm = 0.0, worst_balance = 0.0;
  std::vector<std::filesystem::path> paths;
  for (const auto& e : std::filesystem::directory_iterator(XENT_FIXTURE_DIR))
    if (e.path().extension() == ".json") paths.push_back(e.path());
  std::sort(paths.begin(), paths.end());
  for (const auto& path : paths) {
    const Json doc = read_json_file(path);
    if (!doc.contains("type")) continue;  // experiment specs
    ++files;
    const Model m = model_from_json(doc);
    const std::string name = path.filename().string();
    const std::size_t k = observed_alphabet(m).size();

    // stationarity of the underlying chain
    const FiniteMarkovChain& chain = std::holds_alternative<FunctionMarkovModel>(m)
                                         ? std::get<FunctionMarkovModel>(m).hidden()
                                         : *as_markov(m);
    const Vector& pi = chain.stationary();
    const double balance = ((pi.transpose() * chain.transitions()) - pi.transpose()).cwiseAbs().maxCoeff();
    worst_balance = std::max(worst_balance, balance);
    o.require(balance <= 1e-10, name + ": balance");
    o.require(std::abs(pi.sum() - 1.0) <= 1e-12, name + ": stationary sum");
    o.require(pi.minCoeff() > 0.0, name + ": nonpositive stationary entry");
    if (const auto* ladder = std::get_if<LadderChain>(&m))
      o.require(ladder->tail_mass_bound() < ladder->tolerance(), name + ": tail mass");

    // consistency and normalization for n <= 6, walking only the support tree:
    // every word of length n+1 with positive probability extends one of length n
    std::vector<Word> level;
    for (Symbol s = 0; s < k; ++s)
      if (marginal_log_prob(m, Word{s}) > kNegInf) level.push_back(Word{s});
    for (std::size_t n = 1; n <= 6; ++n) {
      double total = 0.0;
      std::vector<Word> next;
      for (const Word& a : level) {
        const double pa = std::exp(marginal_log_prob(m, a));
        total += pa;
        double right = 0.0, left = 0.0;
        for (Symbol s = 0; s < k; ++s) {
          Word ab = concat(a, Word{s});
          const double p_right = std::exp(marginal_log_prob(m, ab));
          right += p_right;
          left += std::exp(marginal_log_prob(m, concat(Word{s}, a)));
          if (p_right > 0.0 && n < 6) next.push_back(std::move(ab));
        }
        const double dev = std::max(std::abs(right - pa), std::abs(left - pa));
        worst_consistency = std::max(worst_consistency, dev);
        if (dev > 1e-10) o.require(false, name + ": consistency at n = " + std::to_string(n));
      }
      worst_norm = std::max(worst_norm, std::abs(total - 1.0));
      if (std::abs(total - 1.0) > 1e-9) o.require(false, name + ": normalization at n = " + std::to_string(n));
      level = std::move(next);
    }
  }
  o.detail << ' ' << files << " model files, max consistency dev " << fmt(worst_consistency) << ", max |sum - 1| "
           << fmt(worst_norm) << ", max balance residual " << fmt(worst_balance);
}

}  // namespace

int main() {
  using Clock = std::chrono::steady_clock;
  const std::vector<std::pair<const char*, void (*)(Outcome&)>> criteria{
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5}, {"AC6", ac6}, {"AC7", ac7}};
  bool all = true;
  for (const auto& [id, run] : criteria) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
      run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    all = all && o.pass;
    std::cout << id << ' ' << (o.pass ? "PASS" : "FAIL") << o.detail.str() << " (" << fmt(secs) << " s)" << std::endl;
  }
  return all ? 0 : 1;
}
