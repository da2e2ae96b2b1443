#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "roster/bnb.hpp"
#include "roster/scatter.hpp"

namespace roster {

enum class SolveMode : std::uint8_t { kHybrid, kMilpAlone };
enum class Phase : std::uint8_t { kRelaxFix, kBnb, kScatter };

const char* to_string(SolveMode mode);
const char* to_string(Phase phase);
std::optional<SolveMode> parse_solve_mode(const std::string& text);

struct HybridConfig {
  double gap_target = 0.01;
  double phase1_time_budget = 30.0;  // seconds
  double total_time_limit = 300.0;   // seconds
  bool use_relax_and_fix = true;     // hybrid mode only
  SolveMode mode = SolveMode::kHybrid;
  std::uint64_t seed = 1;

  int pool_size = 6;
  int refset_size = 5;
  // After scatter search stops short of the gap target, keep branching on
  // the full model with the best roster as incumbent to tighten the bound.
  bool close_bound = true;
  BnbConfig bnb;  // pool_size, time_limit and gap_target are overridden
  LocalSearchConfig local_search;  // rng_seed is derived from seed

  // Throws InvalidInputError.
  void validate() const;
};

struct ProgressEvent {
  double elapsed = 0.0;
  Phase phase = Phase::kBnb;
  double incumbent = kInf;
  double bound = -kInf;
  double gap = kInf;
  std::string detail;
};

using ProgressSink = std::function<void(const ProgressEvent&)>;

enum class OptimizationStatus : std::uint8_t {
  kOptimal,
  kGapReached,
  kTimeLimit,
  kCancelled,
  kInfeasible,  // proven: the relaxation or the search tree is empty
  kNoSolution,  // time ran out before any feasible roster was found
};

const char* to_string(OptimizationStatus status);

struct PhaseTimings {
  double relax_fix = 0.0;
  double bnb = 0.0;
  double scatter = 0.0;
  double total = 0.0;
};

struct OptimizationResult {
  OptimizationStatus status = OptimizationStatus::kNoSolution;
  std::optional<Roster> roster;
  ObjectiveBreakdown breakdown;
  double objective = kInf;
  double lower_bound = -kInf;
  double gap = kInf;
  PhaseTimings timings;
  std::vector<ProgressEvent> trace;
  std::vector<GenerationTrace> scatter_trace;
  std::vector<ScoredRoster> initial_population;  // phase-1 pool, best first
  bool reduced_model = false;   // phase 1 ran on the relax-and-fix model
  bool fell_back = false;       // the reduced model had no solution
  int fixed_columns = 0;
  long nodes = 0;
  std::string message;

  bool has_roster() const { return roster.has_value(); }
};

// Everything the pipeline needs besides the configuration. The model must
// encode the same objective as `search.evaluate`.
struct OptimizationProblem {
  SearchContext search;
  const BuiltModel* model = nullptr;
};

OptimizationResult optimize(const OptimizationProblem& problem, const HybridConfig& config,
                            const ProgressSink& sink = {}, const std::atomic<bool>* cancel = nullptr);

// Base model of `instance`.
OptimizationResult optimize(const RosterInstance& instance, const ObjectiveWeights& weights,
                            const HybridConfig& config, const ProgressSink& sink = {},
                            const std::atomic<bool>* cancel = nullptr);

}  // namespace roster
