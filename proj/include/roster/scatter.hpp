#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "roster/instance.hpp"
#include "roster/milp.hpp"

namespace roster {

struct ScoredRoster {
  Roster roster;
  double objective = 0.0;
};

struct RefSetMember {
  Roster roster;
  double objective = 0.0;
  bool is_new = true;
};

// Elite population: sorted ascending by objective, no two identical rosters.
class RefSet {
 public:
  explicit RefSet(int capacity = 5);

  // Inserts when below capacity, otherwise replaces the worst member when
  // strictly better. Duplicates are never inserted. Returns true on change.
  bool update(const Roster& roster, double objective);

  bool contains(const Roster& roster) const;
  int capacity() const { return capacity_; }
  int size() const { return static_cast<int>(members_.size()); }
  bool empty() const { return members_.empty(); }
  const std::vector<RefSetMember>& members() const { return members_; }
  const RefSetMember& best() const { return members_.front(); }
  std::vector<double> objectives() const;
  void mark_all_old();

 private:
  int capacity_;
  std::vector<RefSetMember> members_;
};

// Best `capacity` distinct rosters of the pool, all flagged new. Throws
// InvalidInputError on an empty pool.
RefSet diversify(std::vector<ScoredRoster> pool, int capacity = 5);

bool update_refset(RefSet& refset, const ScoredRoster& candidate);

struct LocalSearchConfig {
  int initial_stall_threshold = 0;  // 0: 50 * employees
  double escalation_factor = 2.0;
  std::uint64_t rng_seed = 1;
};

// Rosters are evaluated with the full objective, including the deviation and
// pattern terms when the context provides them. Days before `first_free_day`
// are never modified.
struct SearchContext {
  const RosterInstance* instance = nullptr;
  ObjectiveWeights weights;
  ObjectiveContext objective;
  int first_free_day = 0;

  double evaluate(const Roster& x) const;
};

// Day-swap local search. Stops after `stall_threshold` consecutive swaps that
// were infeasible or not strictly improving. Returns the improved roster.
ScoredRoster improve(const SearchContext& ctx, ScoredRoster start, int stall_threshold, std::mt19937_64& rng);

// Indices into refset.members(). Flips every member's flag to old.
std::vector<std::vector<int>> generate_subsets(RefSet& refset);

// Vote-based recombination with cover repair; nullopt when three repair
// passes fail to produce a feasible roster.
std::optional<Roster> combine(const SearchContext& ctx, const std::vector<const Roster*>& parents,
                              std::mt19937_64& rng);

struct ScatterConfig {
  double gap_target = 0.0;
  double time_limit = kInf;  // seconds
  int max_generations = -1;  // negative: unlimited
  LocalSearchConfig local_search;
};

enum class ScatterStatus : std::uint8_t { kGapReached, kStagnated, kTimeLimit, kGenerationLimit, kCancelled };

const char* to_string(ScatterStatus status);

struct GenerationTrace {
  int generation = 0;
  double best = kInf;
  double gap = kInf;
  std::vector<double> refset;
  int subsets = 0;
  int accepted = 0;
  int rejected = 0;  // repair failures plus offspring the RefSet turned down
  int stall_threshold = 0;
  std::vector<std::uint64_t> subseeds;
  double elapsed = 0.0;
};

struct ScatterResult {
  ScoredRoster best;
  RefSet refset;
  ScatterStatus status = ScatterStatus::kStagnated;
  std::vector<GenerationTrace> trace;
};

struct ScatterCallbacks {
  std::function<void(const GenerationTrace&)> on_generation;
  std::function<void(const ScoredRoster&, double elapsed)> on_improvement;
};

ScatterResult run_scatter_search(const SearchContext& ctx, RefSet init, double lower_bound,
                                 const ScatterConfig& config, const ScatterCallbacks& callbacks = {},
                                 const std::atomic<bool>* cancel = nullptr);

}  // namespace roster
