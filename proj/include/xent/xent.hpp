#pragma once

#include "xent/audit/decoupling.hpp"
#include "xent/audit/report_io.hpp"
#include "xent/error.hpp"
#include "xent/estimation/estimators.hpp"
#include "xent/estimation/monte_carlo.hpp"
#include "xent/experiment/figure1.hpp"
#include "xent/experiment/spec_io.hpp"
#include "xent/experiment/svg.hpp"
#include "xent/matching/match_index.hpp"
#include "xent/matching/prefix_scanner.hpp"
#include "xent/matching/profiles.hpp"
#include "xent/matching/text_io.hpp"
#include "xent/models/function_markov.hpp"
#include "xent/models/ladder.hpp"
#include "xent/models/markov_chain.hpp"
#include "xent/models/model.hpp"
#include "xent/models/model_io.hpp"
#include "xent/models/sampler.hpp"
#include "xent/rng.hpp"
#include "xent/types.hpp"
