#include "roster/scatter.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <map>
#include <set>

#include "roster/bnb.hpp"
#include "roster/errors.hpp"

namespace roster {

namespace {

constexpr double kImprovementEps = 1e-9;
constexpr double kQualityEpsilon = 0.1;
constexpr int kRepairPasses = 3;
constexpr int kRepairRounds = 4;
constexpr int kMaxStallThreshold = 1 << 20;

std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Shift type per block of one (employee, day) cell, -1 for free.
using DayCells = std::array<int, kBlocksPerDay>;

DayCells day_cells(const Roster& x, int e, int d) {
  DayCells c{};
  for (int b = 0; b < kBlocksPerDay; ++b) c[b] = x.shift_at(e, d * kBlocksPerDay + b);
  return c;
}

void set_day(Roster& x, int e, int d, const DayCells& c) {
  for (int b = 0; b < kBlocksPerDay; ++b) {
    const int j = d * kBlocksPerDay + b;
    x.clear_block(e, j);
    if (c[b] >= 0) x.set(e, j, c[b], true);
  }
}

bool is_rest(const DayCells& c) {
  return std::all_of(c.begin(), c.end(), [](int k) { return k < 0; });
}

void swap_day(Roster& x, int a, int b, int d, int shift_types) {
  for (int o = 0; o < kBlocksPerDay; ++o) {
    const int j = d * kBlocksPerDay + o;
    for (int k = 0; k < shift_types; ++k) {
      const bool va = x(a, j, k);
      x.set(a, j, k, x(b, j, k));
      x.set(b, j, k, va);
    }
  }
}

// Violations that only removing work can fix; the weekly minimum is handled
// by transfers instead.
bool overloaded(const RosterInstance& in, const Roster& x, int e) {
  for (const Violation& v : employee_violations(in, x, e)) {
    if (v.constraint != ConstraintId::kMinShiftsPerWeek) return true;
  }
  return false;
}

// One unit of work: a single block for 8-hour types, a whole day otherwise.
struct Unit {
  int day = 0;
  int first = 0;  // first block
  int span = 1;
  int shift = 0;
};

class Repairer {
 public:
  Repairer(const SearchContext& ctx, const Matrix<std::uint8_t>& protect, std::mt19937_64& rng, bool randomize)
      : in_(*ctx.instance), protect_(protect), rng_(rng), randomize_(randomize) {}

  bool run(Roster& x) {
    for (int round = 0; round < kRepairRounds; ++round) {
      shed(x);
      fill(x);
      transfer(x);
      fill(x);
      if (check_feasibility(in_, x).feasible()) return true;
    }
    return false;
  }

 private:
  bool can_take(const Roster& x, int e, const Unit& u) const {
    if (protect_(e, u.day) || !in_.licensed(e, u.shift)) return false;
    for (int j = u.first; j < u.first + u.span; ++j) {
      if (!in_.availability(e, j) || in_.vacation(e, j) || x.works(e, j)) return false;
    }
    return true;
  }

  static void put(Roster& x, int e, const Unit& u, bool value) {
    for (int j = u.first; j < u.first + u.span; ++j) x.set(e, j, u.shift, value);
  }

  double total_workload(const Roster& x, int e) const {
    double w = 0.0;
    for (int k = 0; k < in_.num_shift_types(); ++k) w += workload(in_, x, e, k);
    return w;
  }

  std::vector<int> by_workload(const Roster& x) {
    std::vector<std::pair<double, int>> order;
    std::uniform_real_distribution<double> jitter(0.0, 1.0);
    for (int e = 0; e < in_.employees; ++e) {
      order.emplace_back(total_workload(x, e) + (randomize_ ? 0.5 * jitter(rng_) : 0.0), e);
    }
    std::sort(order.begin(), order.end());
    std::vector<int> out;
    for (const auto& [w, e] : order) out.push_back(e);
    return out;
  }

  // Clears unprotected worked days of overloaded employees, starting with the
  // day a violation points at.
  void shed(Roster& x) {
    for (int e = 0; e < in_.employees; ++e) {
      while (true) {
        const auto violations = employee_violations(in_, x, e);
        int target = -1;
        bool any = false;
        for (const Violation& v : violations) {
          if (v.constraint == ConstraintId::kMinShiftsPerWeek) continue;
          any = true;
          if (v.block >= 0 && clearable(x, e, day_of_block(v.block))) {
            target = day_of_block(v.block);
            break;
          }
        }
        if (!any) break;
        if (target < 0) {
          std::vector<int> days;
          for (int d = 0; d < in_.days(); ++d) {
            if (clearable(x, e, d)) days.push_back(d);
          }
          if (days.empty()) break;
          target = days[std::uniform_int_distribution<std::size_t>(0, days.size() - 1)(rng_)];
        }
        set_day(x, e, target, DayCells{-1, -1, -1});
      }
    }
  }

  bool clearable(const Roster& x, int e, int d) const {
    return !protect_(e, d) && !is_rest(day_cells(x, e, d));
  }

  std::vector<Unit> deficits(const Roster& x) const {
    std::vector<Unit> out;
    for (int k = 0; k < in_.num_shift_types(); ++k) {
      const int span = in_.shift_types[static_cast<std::size_t>(k)].span();
      for (int d = 0; d < in_.days(); ++d) {
        for (int b = 0; b < kBlocksPerDay; b += span) {
          const int j = d * kBlocksPerDay + b;
          int missing = 0;
          for (int t = j; t < j + span; ++t) {
            int covered = 0;
            for (int e = 0; e < in_.employees; ++e) covered += x(e, t, k);
            missing = std::max(missing, in_.cover(t, k) - covered);
          }
          for (int r = 0; r < missing; ++r) out.push_back(Unit{d, j, span, k});
        }
      }
    }
    return out;
  }

  void fill(Roster& x) {
    for (const Unit& u : deficits(x)) {
      for (int e : by_workload(x)) {
        if (!can_take(x, e, u)) continue;
        put(x, e, u, true);
        if (!overloaded(in_, x, e)) break;
        put(x, e, u, false);
      }
    }
  }

  // Moves a unit of work from a colleague to an employee below the weekly
  // minimum; cover is unchanged.
  void transfer(Roster& x) {
    for (int e = 0; e < in_.employees; ++e) {
      for (const Violation& v : employee_violations(in_, x, e)) {
        if (v.constraint != ConstraintId::kMinShiftsPerWeek) continue;
        const int k = v.shift;
        const int span = in_.shift_types[static_cast<std::size_t>(k)].span();
        const int week_start = v.block;
        const int week_end = std::min(week_start + kBlocksPerWeek, in_.blocks);
        bool moved = false;
        for (int j = week_start; j < week_end && !moved; j += span) {
          const Unit u{day_of_block(j), j, span, k};
          if (!can_take(x, e, u)) continue;
          for (int other : by_workload(x)) {
            if (other == e || protect_(other, u.day) || !x(other, j, k)) continue;
            put(x, other, u, false);
            put(x, e, u, true);
            if (!overloaded(in_, x, e) && employee_feasible(in_, x, other)) {
              moved = true;
              break;
            }
            put(x, e, u, false);
            put(x, other, u, true);
          }
        }
      }
    }
  }

  const RosterInstance& in_;
  const Matrix<std::uint8_t>& protect_;
  std::mt19937_64& rng_;
  bool randomize_;
};

}  // namespace

double SearchContext::evaluate(const Roster& x) const {
  return evaluate_objective(*instance, x, weights, objective).total;
}

RefSet::RefSet(int capacity) : capacity_(capacity) {
  if (capacity < 1) throw InvalidInputError("RefSet capacity must be positive");
}

bool RefSet::contains(const Roster& roster) const {
  return std::any_of(members_.begin(), members_.end(), [&](const RefSetMember& m) { return m.roster == roster; });
}

bool RefSet::update(const Roster& roster, double objective) {
  if (contains(roster)) return false;
  if (size() >= capacity_) {
    if (!(objective < members_.back().objective)) return false;
    members_.pop_back();
  }
  const auto pos = std::upper_bound(members_.begin(), members_.end(), objective,
                                    [](double v, const RefSetMember& m) { return v < m.objective; });
  members_.insert(pos, RefSetMember{roster, objective, true});
  return true;
}

std::vector<double> RefSet::objectives() const {
  std::vector<double> out;
  for (const auto& m : members_) out.push_back(m.objective);
  return out;
}

void RefSet::mark_all_old() {
  for (auto& m : members_) m.is_new = false;
}

RefSet diversify(std::vector<ScoredRoster> pool, int capacity) {
  if (pool.empty()) throw InvalidInputError("cannot build a reference set from an empty pool");
  std::stable_sort(pool.begin(), pool.end(),
                   [](const ScoredRoster& a, const ScoredRoster& b) { return a.objective < b.objective; });
  RefSet refset(capacity);
  for (const ScoredRoster& s : pool) {
    if (refset.size() >= capacity) break;
    refset.update(s.roster, s.objective);
  }
  return refset;
}

bool update_refset(RefSet& refset, const ScoredRoster& candidate) {
  return refset.update(candidate.roster, candidate.objective);
}

ScoredRoster improve(const SearchContext& ctx, ScoredRoster start, int stall_threshold, std::mt19937_64& rng) {
  const RosterInstance& in = *ctx.instance;
  const int n = in.employees;
  const int first_day = std::max(0, ctx.first_free_day);
  if (n < 2 || first_day >= in.days() || stall_threshold < 1) return start;

  Roster& x = start.roster;
  std::vector<double> weight(static_cast<std::size_t>(n));
  const auto refresh = [&] {
    for (int e = 0; e < n; ++e) weight[e] = employee_quality(in, x, e) + kQualityEpsilon;
  };
  refresh();
  std::uniform_int_distribution<int> pick_day(first_day, in.days() - 1);

  int stall = 0;
  while (stall < stall_threshold) {
    const int a = std::discrete_distribution<int>(weight.begin(), weight.end())(rng);
    std::vector<double> rest = weight;
    rest[a] = 0.0;
    const int b = std::discrete_distribution<int>(rest.begin(), rest.end())(rng);
    const int d = pick_day(rng);
    ++stall;
    if (day_cells(x, a, d) == day_cells(x, b, d)) continue;
    swap_day(x, a, b, d, in.num_shift_types());
    if (employee_feasible(in, x, a) && employee_feasible(in, x, b)) {
      const double value = ctx.evaluate(x);
      if (value < start.objective - kImprovementEps) {
        start.objective = value;
        stall = 0;
        refresh();
        continue;
      }
    }
    swap_day(x, a, b, d, in.num_shift_types());
  }
  return start;
}

std::vector<std::vector<int>> generate_subsets(RefSet& refset) {
  const int r = refset.size();
  std::vector<std::vector<int>> out;
  if (r < 2) {
    refset.mark_all_old();
    return out;
  }
  std::set<std::vector<int>> seen;
  std::vector<std::vector<int>> level;
  for (int i = 0; i < r; ++i) {
    for (int k = i + 1; k < r; ++k) level.push_back({i, k});
  }
  std::vector<std::vector<int>> all = level;
  seen.insert(level.begin(), level.end());
  for (int size = 3; size <= r; ++size) {
    std::vector<std::vector<int>> next;
    for (const auto& subset : level) {
      // Members are sorted, so the best non-member is the lowest missing index.
      int add = 0;
      while (std::find(subset.begin(), subset.end(), add) != subset.end()) ++add;
      std::vector<int> grown = subset;
      grown.insert(std::lower_bound(grown.begin(), grown.end(), add), add);
      if (seen.insert(grown).second) next.push_back(grown);
    }
    all.insert(all.end(), next.begin(), next.end());
    level = std::move(next);
  }
  const auto& members = refset.members();
  for (auto& subset : all) {
    if (std::any_of(subset.begin(), subset.end(), [&](int i) { return members[i].is_new; })) {
      out.push_back(std::move(subset));
    }
  }
  refset.mark_all_old();
  return out;
}

std::optional<Roster> combine(const SearchContext& ctx, const std::vector<const Roster*>& parents,
                              std::mt19937_64& rng) {
  const RosterInstance& in = *ctx.instance;
  if (parents.size() < 2) throw InvalidInputError("combine needs at least two parents");
  const int n = in.employees;
  const int days = in.days();
  const int votes_needed = static_cast<int>(parents.size());

  struct Candidate {
    int votes;
    int e;
    int d;
    std::uint64_t tie;
    DayCells cells;
  };
  std::vector<Candidate> candidates;
  Matrix<std::uint8_t> protect(n, days, 0);
  for (int e = 0; e < n; ++e) {
    for (int d = 0; d < days; ++d) {
      std::map<DayCells, int> votes;
      for (const Roster* p : parents) ++votes[day_cells(*p, e, d)];
      for (const auto& [cells, count] : votes) {
        candidates.push_back({count, e, d, rng(), cells});
        if (count == votes_needed || d < ctx.first_free_day) protect(e, d) = 1;
      }
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.votes != b.votes) return a.votes > b.votes;
    if (a.e != b.e) return a.e < b.e;
    if (a.d != b.d) return a.d < b.d;
    return a.tie < b.tie;
  });

  // Locked days keep the first parent's cells whatever the vote says.
  Roster voted = Roster::empty_for(in);
  Matrix<std::uint8_t> decided(n, days, 0);
  Matrix<int> covered(in.blocks, in.num_shift_types(), 0);
  for (int e = 0; e < n; ++e) {
    for (int d = 0; d < std::min(ctx.first_free_day, days); ++d) {
      const DayCells cells = day_cells(*parents.front(), e, d);
      set_day(voted, e, d, cells);
      decided(e, d) = 1;
      for (int b = 0; b < kBlocksPerDay; ++b) {
        if (cells[b] >= 0) ++covered(d * kBlocksPerDay + b, cells[b]);
      }
    }
  }
  for (const Candidate& c : candidates) {
    if (decided(c.e, c.d)) continue;
    bool fits = true;
    for (int b = 0; b < kBlocksPerDay && fits; ++b) {
      const int j = c.d * kBlocksPerDay + b;
      if (c.cells[b] >= 0 && covered(j, c.cells[b]) >= in.cover(j, c.cells[b])) fits = false;
    }
    if (!fits) continue;
    set_day(voted, c.e, c.d, c.cells);
    decided(c.e, c.d) = 1;
    for (int b = 0; b < kBlocksPerDay; ++b) {
      if (c.cells[b] >= 0) ++covered(c.d * kBlocksPerDay + b, c.cells[b]);
    }
  }

  for (int pass = 0; pass < kRepairPasses; ++pass) {
    Roster x = voted;
    Repairer repair(ctx, protect, rng, pass > 0);
    if (repair.run(x)) return x;
  }
  return std::nullopt;
}

const char* to_string(ScatterStatus status) {
  switch (status) {
    case ScatterStatus::kGapReached: return "gap_reached";
    case ScatterStatus::kStagnated: return "stagnated";
    case ScatterStatus::kTimeLimit: return "time_limit";
    case ScatterStatus::kGenerationLimit: return "generation_limit";
    case ScatterStatus::kCancelled: return "cancelled";
  }
  return "unknown";
}

ScatterResult run_scatter_search(const SearchContext& ctx, RefSet init, double lower_bound,
                                 const ScatterConfig& config, const ScatterCallbacks& callbacks,
                                 const std::atomic<bool>* cancel) {
  if (init.empty()) throw InvalidInputError("scatter search needs a nonempty reference set");
  const auto start = std::chrono::steady_clock::now();
  const auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
  const LocalSearchConfig& ls = config.local_search;
  if (ls.escalation_factor < 1.0) throw InvalidInputError("escalation factor must be at least 1");

  ScatterResult result;
  result.refset = std::move(init);
  RefSet& refset = result.refset;
  int threshold = ls.initial_stall_threshold > 0 ? ls.initial_stall_threshold : 50 * ctx.instance->employees;

  const auto record = [&](int generation, int subsets, int accepted, int rejected, std::vector<std::uint64_t> seeds) {
    GenerationTrace t;
    t.generation = generation;
    t.best = refset.best().objective;
    t.gap = compute_gap(t.best, lower_bound);
    t.refset = refset.objectives();
    t.subsets = subsets;
    t.accepted = accepted;
    t.rejected = rejected;
    t.stall_threshold = threshold;
    t.subseeds = std::move(seeds);
    t.elapsed = elapsed();
    result.trace.push_back(t);
    if (callbacks.on_generation) callbacks.on_generation(result.trace.back());
    return t.gap;
  };

  double gap = record(0, 0, 0, 0, {});
  result.status = ScatterStatus::kStagnated;
  for (int generation = 1;; ++generation) {
    if (gap <= config.gap_target) {
      result.status = ScatterStatus::kGapReached;
      break;
    }
    if (cancel && cancel->load()) {
      result.status = ScatterStatus::kCancelled;
      break;
    }
    if (elapsed() >= config.time_limit) {
      result.status = ScatterStatus::kTimeLimit;
      break;
    }
    if (config.max_generations >= 0 && generation > config.max_generations) {
      result.status = ScatterStatus::kGenerationLimit;
      break;
    }
    const std::vector<RefSetMember> snapshot = refset.members();
    const auto subsets = generate_subsets(refset);
    if (subsets.empty()) {
      result.status = ScatterStatus::kStagnated;
      break;
    }

    const double previous_best = refset.best().objective;
    std::vector<ScoredRoster> offspring;
    std::vector<std::uint64_t> seeds;
    int rejected = 0;
    int processed = 0;
    bool interrupted = false;
    for (std::size_t i = 0; i < subsets.size(); ++i) {
      if ((cancel && cancel->load()) || elapsed() >= config.time_limit) {
        interrupted = true;
        break;
      }
      const std::uint64_t seed = mix(ls.rng_seed ^ mix((static_cast<std::uint64_t>(generation) << 32) | i));
      seeds.push_back(seed);
      std::mt19937_64 rng(seed);
      std::vector<const Roster*> parents;
      for (int idx : subsets[i]) parents.push_back(&snapshot[static_cast<std::size_t>(idx)].roster);
      ++processed;
      std::optional<Roster> child = combine(ctx, parents, rng);
      if (!child) {
        ++rejected;
        continue;
      }
      const double value = ctx.evaluate(*child);
      offspring.push_back(improve(ctx, ScoredRoster{std::move(*child), value}, threshold, rng));
    }

    int accepted = 0;
    for (const ScoredRoster& child : offspring) {
      const double before = refset.best().objective;
      if (update_refset(refset, child)) {
        ++accepted;
        if (child.objective < before && callbacks.on_improvement) callbacks.on_improvement(child, elapsed());
      } else {
        ++rejected;
      }
    }

    const double best = refset.best().objective;
    const double improvement = (previous_best - best) / std::max(std::abs(previous_best), 1e-9);
    if (improvement < 0.10) {
      threshold = static_cast<int>(std::min<double>(kMaxStallThreshold, std::ceil(threshold * ls.escalation_factor)));
    }
    gap = record(generation, processed, accepted, rejected, std::move(seeds));
    if (interrupted) {
      result.status = (cancel && cancel->load()) ? ScatterStatus::kCancelled : ScatterStatus::kTimeLimit;
      if (gap <= config.gap_target) result.status = ScatterStatus::kGapReached;
      break;
    }
  }
  result.best = ScoredRoster{refset.best().roster, refset.best().objective};
  return result;
}

}  // namespace roster
