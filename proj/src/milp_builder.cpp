#include <algorithm>
#include <cmath>
#include <sstream>

#include "roster/milp.hpp"

namespace roster {

namespace {

std::string name(const char* prefix, std::initializer_list<int> idx) {
  std::string out(prefix);
  for (int i : idx) {
    out.push_back('_');
    out += std::to_string(i);
  }
  return out;
}

class RosterModelBuilder {
 public:
  explicit RosterModelBuilder(const RosterInstance& in) : in_(in), license_(in.license_matrix()) {
    const auto report = validate_instance(in);
    if (!report.ok()) throw InvalidInputError("invalid instance: " + report.issues.front());
    map_.employees = in.employees;
    map_.blocks = in.blocks;
    map_.shift_types = in.num_shift_types();
  }

  void add_columns(const ObjectiveWeights& w, double preference_weight) {
    const int n = in_.employees;
    const int m = in_.blocks;
    const int s = in_.num_shift_types();

    auto open = [&](VarRange& r) { r.begin = r.end = model_.num_cols(); };
    auto close = [&](VarRange& r) { r.end = model_.num_cols(); };

    open(map_.assignment);
    for (int e = 0; e < n; ++e) {
      for (int j = 0; j < m; ++j) {
        for (int k = 0; k < s; ++k) model_.add_column(0.0, 1.0, 0.0, true, name("x", {e, j, k}));
      }
    }
    close(map_.assignment);

    open(map_.free_block);
    for (int e = 0; e < n; ++e) {
      for (int j = 0; j < m; ++j) model_.add_column(0.0, 1.0, 0.0, false, name("u", {e, j}));
    }
    close(map_.free_block);

    // Rest windows: the interval structure of the overlap rows makes the
    // window polytope integral for integral X, so y stays continuous.
    open(map_.rest_window);
    for (int e = 0; e < n; ++e) {
      for (int t = 0; t + 2 < m; ++t) model_.add_column(0.0, 1.0, 0.0, false, name("y", {e, t}));
    }
    close(map_.rest_window);

    auto deviation_block = [&](VarRange& dev, VarRange& worst, const char* dname, const char* tname,
                               double l1_cost, double max_cost) {
      open(dev);
      for (int e = 0; e < n; ++e) {
        for (int k = 0; k < s; ++k) {
          model_.add_column(0.0, kInf, l1_cost, false, name(dname, {e, k, 0}));
          model_.add_column(0.0, kInf, l1_cost, false, name(dname, {e, k, 1}));
        }
      }
      close(dev);
      open(worst);
      for (int k = 0; k < s; ++k) model_.add_column(0.0, kInf, max_cost, false, name(tname, {k}));
      close(worst);
    };
    deviation_block(map_.workload_dev, map_.workload_max, "d1", "t1", w.lambda[0] * w.theta[0],
                    w.lambda[0] * (1.0 - w.theta[0]));
    deviation_block(map_.weekend_dev, map_.weekend_max, "d2", "t2", w.lambda[1] * w.theta[1],
                    w.lambda[1] * (1.0 - w.theta[1]));

    open(map_.preference_dev);
    for (int e = 0; e < n; ++e) {
      for (int j = 0; j < m; ++j) {
        if (in_.preferences(e, j) == Preference::kNone) continue;
        map_.preference_slots.emplace_back(e, j);
        model_.add_column(0.0, kInf, preference_weight, false, name("d3", {e, j, 0}));
        model_.add_column(0.0, kInf, preference_weight, false, name("d3", {e, j, 1}));
      }
    }
    close(map_.preference_dev);
    for (VarRange* r : {&map_.pattern_choice, &map_.pattern_slack, &map_.variant_balance}) open(*r);
  }

  void add_hard_rows() {
    const int n = in_.employees;
    const int m = in_.blocks;
    const int s = in_.num_shift_types();

    for (int e = 0; e < n; ++e) {
      for (int j = 0; j < m; ++j) {
        begin();
        for (int k = 0; k < s; ++k) term(map_.x(e, j, k), 1.0);
        term(map_.u(e, j), 1.0);
        row(1.0, 1.0, name("one", {e, j}));
      }
    }
    for (int k = 0; k < s; ++k) {
      for (int e = 0; e < n; ++e) {
        if (license_(e, k)) continue;
        for (int j = 0; j < m; ++j) model_.add_row({{map_.x(e, j, k), 1.0}}, -kInf, 0.0, name("lic", {e, j, k}));
      }
    }
    for (int k = 0; k < s; ++k) {
      if (in_.shift_types[static_cast<std::size_t>(k)].kind != ShiftKind::kAllDay) continue;
      for (int e = 0; e < n; ++e) {
        if (!license_(e, k)) continue;
        for (int d = 0; d < in_.days(); ++d) {
          const int j = d * kBlocksPerDay;
          for (int b = 1; b < kBlocksPerDay; ++b) {
            model_.add_row({{map_.x(e, j, k), 1.0}, {map_.x(e, j + b, k), -1.0}}, 0.0, 0.0,
                           name("allday", {e, d, k, b}));
          }
        }
      }
    }
    for (int e = 0; e < n; ++e) {
      for (int j = 0; j < m; ++j) {
        for (int k = 0; k < s; ++k) {
          model_.add_row({{map_.x(e, j, k), 1.0}}, -kInf, in_.availability(e, j), name("avail", {e, j, k}));
        }
      }
    }
    for (int e = 0; e < n; ++e) {
      for (int j = 0; j < m; ++j) {
        for (int k = 0; k < s; ++k) {
          model_.add_row({{map_.x(e, j, k), 1.0}}, -kInf, 1.0 - in_.vacation(e, j), name("vac", {e, j, k}));
        }
      }
    }
    for (int k = 0; k < s; ++k) {
      if (in_.shift_types[static_cast<std::size_t>(k)].kind != ShiftKind::kEightHour) continue;
      for (int e = 0; e < n; ++e) {
        if (!license_(e, k)) continue;
        for (int t = 0; t + 2 < m; ++t) {
          model_.add_row({{map_.x(e, t, k), 1.0}, {map_.x(e, t + 1, k), 1.0}, {map_.x(e, t + 2, k), 1.0}}, -kInf,
                         1.0, name("rest16", {e, t, k}));
        }
        for (int week = 0; week < in_.weeks; ++week) {
          begin();
          for (int j = week * kBlocksPerWeek; j < (week + 1) * kBlocksPerWeek; ++j) term(map_.x(e, j, k), 1.0);
          const auto saved_idx = idx_;
          const auto saved_val = val_;
          row(-kInf, in_.max_shifts_per_week, name("maxweek", {e, week, k}));
          idx_ = saved_idx;
          val_ = saved_val;
          row(in_.min_shifts_per_week, kInf, name("minweek", {e, week, k}));
        }
      }
    }
    for (int e = 0; e < n; ++e) {
      begin();
      for (int j : in_.sunday_blocks) {
        for (int k = 0; k < s; ++k) term(map_.x(e, j, k), 1.0 / in_.shift_types[static_cast<std::size_t>(k)].span());
      }
      row(-kInf, in_.weeks - in_.min_rest_sundays, name("sunday", {e}));
    }
    for (int j = 0; j < m; ++j) {
      for (int k = 0; k < s; ++k) {
        begin();
        for (int e = 0; e < n; ++e) term(map_.x(e, j, k), 1.0);
        row(in_.cover(j, k), in_.cover(j, k), name("cover", {j, k}));
      }
    }
    for (int e = 0; e < n; ++e) {
      for (int t = 0; t + 2 < m; ++t) {
        for (int i = 0; i < kBlocksPerDay; ++i) {
          model_.add_row({{map_.y(e, t), 1.0}, {map_.u(e, t + i), -1.0}}, -kInf, 0.0, name("restwin", {e, t, i}));
        }
      }
      for (int t = 0; t + 3 < m; ++t) {
        begin();
        for (int q = t; q <= std::min(t + 2, m - 3); ++q) term(map_.y(e, q), 1.0);
        row(-kInf, 1.0, name("restovl", {e, t}));
      }
      begin();
      for (int t = 0; t + 2 < m; ++t) term(map_.y(e, t), 1.0);
      row(in_.min_rest_days, kInf, name("restmin", {e}));
    }
    for (std::size_t f = 0; f < in_.forbidden_sequences.size(); ++f) {
      const auto& seq = in_.forbidden_sequences[f];
      const bool all_day = in_.shift_types[static_cast<std::size_t>(seq.previous)].kind == ShiftKind::kAllDay;
      for (int e = 0; e < n; ++e) {
        if (!license_(e, seq.previous) || !license_(e, seq.next_morning)) continue;
        for (int d = 0; d + 1 < in_.days(); ++d) {
          const int morning = (d + 1) * kBlocksPerDay;
          for (int b = 0; b < (all_day ? 1 : kBlocksPerDay); ++b) {
            model_.add_row({{map_.x(e, d * kBlocksPerDay + b, seq.previous), 1.0},
                            {map_.x(e, morning, seq.next_morning), 1.0}},
                           -kInf, 1.0, name("forbid", {e, d, b, static_cast<int>(f)}));
          }
        }
      }
    }
  }

  void add_objective_rows() {
    const int n = in_.employees;
    const int m = in_.blocks;
    const int s = in_.num_shift_types();
    for (int k = 0; k < s; ++k) {
      const double per_block = 1.0 / in_.shift_types[static_cast<std::size_t>(k)].span();
      for (int e = 0; e < n; ++e) {
        begin();
        for (int j = 0; j < m; ++j) term(map_.x(e, j, k), per_block);
        term(map_.d1(e, k, 0), 1.0);
        term(map_.d1(e, k, 1), -1.0);
        row(in_.workload_targets(e, k), in_.workload_targets(e, k), name("work", {e, k}));
        model_.add_row({{map_.t1(k), 1.0}, {map_.d1(e, k, 0), -1.0}, {map_.d1(e, k, 1), -1.0}}, 0.0, kInf,
                       name("workmax", {e, k}));
        rounding_row(map_.d1(e, k, 0), map_.d1(e, k, 1), in_.workload_targets(e, k), name("workrnd", {e, k}));

        begin();
        for (int j : in_.weekend_blocks) term(map_.x(e, j, k), per_block);
        term(map_.d2(e, k, 0), 1.0);
        term(map_.d2(e, k, 1), -1.0);
        row(in_.weekend_targets(e, k), in_.weekend_targets(e, k), name("wkend", {e, k}));
        model_.add_row({{map_.t2(k), 1.0}, {map_.d2(e, k, 0), -1.0}, {map_.d2(e, k, 1), -1.0}}, 0.0, kInf,
                       name("wkendmax", {e, k}));
        rounding_row(map_.d2(e, k, 0), map_.d2(e, k, 1), in_.weekend_targets(e, k), name("wkendrnd", {e, k}));
      }
    }
    for (std::size_t slot = 0; slot < map_.preference_slots.size(); ++slot) {
      const auto [e, j] = map_.preference_slots[slot];
      begin();
      for (int k = 0; k < s; ++k) term(map_.x(e, j, k), 1.0);
      term(map_.d3(static_cast<int>(slot), 0), 1.0);
      term(map_.d3(static_cast<int>(slot), 1), -1.0);
      const double p = static_cast<int>(in_.preferences(e, j));
      row(p, p, name("pref", {e, j}));
    }
  }

  BuiltModel finish() { return {std::move(model_), std::move(map_)}; }
  MilpModel& model() { return model_; }
  VariableMap& map() { return map_; }

 private:
  // Workloads are whole duties, so with f the fractional part of the target
  // the deviation pair satisfies (1 - f) d+ + f d- >= f (1 - f): the convex
  // hull of |target - W| over integer W.
  void rounding_row(int over, int under, double target, std::string n) {
    const double f = target - std::floor(target);
    if (f < 1e-9 || f > 1.0 - 1e-9) return;
    model_.add_row({{over, 1.0 - f}, {under, f}}, f * (1.0 - f), kInf, std::move(n));
  }

  void begin() {
    idx_.clear();
    val_.clear();
  }
  void term(int j, double a) {
    idx_.push_back(j);
    val_.push_back(a);
  }
  void row(double lo, double hi, std::string n) { model_.add_row(idx_, val_, lo, hi, std::move(n)); }

  const RosterInstance& in_;
  Matrix<std::uint8_t> license_;
  MilpModel model_;
  VariableMap map_;
  std::vector<int> idx_;
  std::vector<double> val_;
};

void require_weights(const ObjectiveWeights& w) {
  if (!w.valid()) throw InvalidInputError("objective weights outside their ranges");
}

// Adds weight * Hamming(X, reference) as linear X costs plus a constant.
void add_hamming_cost(MilpModel& model, const VariableMap& map, const Roster& reference, double weight) {
  if (weight == 0.0) return;
  for (int e = 0; e < map.employees; ++e) {
    for (int j = 0; j < map.blocks; ++j) {
      for (int k = 0; k < map.shift_types; ++k) {
        if (reference(e, j, k)) {
          model.cost[map.x(e, j, k)] -= weight;
          model.cost_offset += weight;
        } else {
          model.cost[map.x(e, j, k)] += weight;
        }
      }
    }
  }
}

}  // namespace

BuiltModel build_milp(const RosterInstance& instance, const ObjectiveWeights& weights) {
  require_weights(weights);
  RosterModelBuilder b(instance);
  b.add_columns(weights, weights.lambda[2] * weights.theta[2]);
  b.add_hard_rows();
  b.add_objective_rows();
  return b.finish();
}

void lock_prefix(MilpModel& model, const VariableMap& map, const Roster& roster, int lock_until) {
  for (int e = 0; e < map.employees; ++e) {
    for (int j = 0; j <= lock_until && j < map.blocks; ++j) {
      for (int k = 0; k < map.shift_types; ++k) {
        const double v = roster(e, j, k) ? 1.0 : 0.0;
        model.col_lower[map.x(e, j, k)] = v;
        model.col_upper[map.x(e, j, k)] = v;
      }
    }
  }
}

BuiltModel build_event_driven_milp(const RosterInstance& instance, const Roster& original,
                                   const ObjectiveWeights& weights, int lock_until) {
  if (!original.matches(instance)) throw InvalidInputError("original roster dimensions do not match");
  if (lock_until >= instance.blocks) throw InvalidInputError("lock_until must precede the horizon end");

  std::vector<std::array<int, 3>> conflicts;
  for (int e = 0; e < instance.employees; ++e) {
    for (int j = 0; j <= lock_until; ++j) {
      for (int k = 0; k < instance.num_shift_types(); ++k) {
        if (!original(e, j, k)) continue;
        if (instance.availability(e, j) == 0 || instance.vacation(e, j) == 1 || !instance.licensed(e, k)) {
          conflicts.push_back({e, j, k});
        }
      }
    }
  }
  if (!conflicts.empty()) {
    std::ostringstream os;
    os << conflicts.size() << " locked assignments conflict with the updated parameters, first at employee "
       << conflicts[0][0] << ", block " << conflicts[0][1] << ", shift " << conflicts[0][2];
    throw LockConflictError(os.str(), std::move(conflicts));
  }

  BuiltModel built = build_milp(instance, weights);
  add_hamming_cost(built.model, built.map, original, weights.deviation_weight);
  lock_prefix(built.model, built.map, original, lock_until);
  return built;
}

BuiltModel build_pattern_stage2(const RosterInstance& instance, const Roster& company,
                                const ObjectiveWeights& weights) {
  require_weights(weights);
  if (!company.matches(instance)) throw InvalidInputError("company preference dimensions do not match");
  const double pref = weights.lambda[2] * weights.theta[2];
  RosterModelBuilder b(instance);
  b.add_columns(weights, pref * weights.gamma);
  b.add_hard_rows();
  b.add_objective_rows();
  BuiltModel built = b.finish();
  if (weights.gamma != 1.0) add_hamming_cost(built.model, built.map, company, pref * (1.0 - weights.gamma));
  return built;
}

BuiltModel build_pattern_stage1(const RosterInstance& instance, const WorkPattern& pattern) {
  const auto report = validate_instance(instance);
  if (!report.ok()) throw InvalidInputError("invalid instance: " + report.issues.front());
  const int n = instance.employees;
  const int m = instance.blocks;
  const int variants = pattern.variants();
  std::vector<std::vector<int>> expanded;
  for (int v = 0; v < variants; ++v) expanded.push_back(expand_variant(instance, pattern, v));

  BuiltModel out;
  MilpModel& model = out.model;
  VariableMap& map = out.map;
  map.employees = n;
  map.blocks = m;
  map.shift_types = instance.num_shift_types();
  map.variants = variants;
  for (VarRange* r : {&map.assignment, &map.free_block, &map.rest_window, &map.workload_dev, &map.workload_max,
                      &map.weekend_dev, &map.weekend_max, &map.preference_dev}) {
    r->begin = r->end = 0;
  }

  map.pattern_choice.begin = model.num_cols();
  for (int e = 0; e < n; ++e) {
    for (int v = 0; v < variants; ++v) model.add_column(0.0, 1.0, 0.0, true, name("z", {e, v}));
  }
  map.pattern_choice.end = model.num_cols();

  std::vector<int> idx;
  std::vector<double> val;
  for (int e = 0; e < n; ++e) {
    idx.clear();
    val.clear();
    for (int v = 0; v < variants; ++v) {
      idx.push_back(map.z(e, v));
      val.push_back(1.0);
    }
    model.add_row(idx, val, 1.0, 1.0, name("assign", {e}));
  }

  map.pattern_slack.begin = model.num_cols();
  for (int e = 0; e < n; ++e) {
    for (int j = 0; j < m; ++j) {
      // Variants working block j, and those working it in a shift type e
      // is not licensed for.
      std::vector<int> working;
      std::vector<int> unlicensed;
      for (int v = 0; v < variants; ++v) {
        const int k = expanded[static_cast<std::size_t>(v)][static_cast<std::size_t>(j)];
        if (k < 0) continue;
        working.push_back(v);
        if (!instance.licensed(e, k)) unlicensed.push_back(v);
      }
      auto slack_row = [&](const std::vector<int>& vs, double rhs, const char* tag) {
        idx.clear();
        val.clear();
        for (int v : vs) {
          idx.push_back(map.z(e, v));
          val.push_back(1.0);
        }
        idx.push_back(model.add_column(0.0, kInf, 1.0, false, name(tag, {e, j})));
        val.push_back(-1.0);
        model.add_row(idx, val, -kInf, rhs, name(tag, {e, j}));
      };
      const bool blocked = instance.availability(e, j) == 0 || instance.vacation(e, j) == 1;
      if (!working.empty() && blocked) slack_row(working, 0.0, "sa");
      if (!unlicensed.empty()) slack_row(unlicensed, 0.0, "sl");
      const Preference p = instance.preferences(e, j);
      if (p != Preference::kNone) {
        idx.clear();
        val.clear();
        for (int v : working) {
          idx.push_back(map.z(e, v));
          val.push_back(1.0);
        }
        idx.push_back(model.add_column(0.0, kInf, 1.0, false, name("sp", {e, j, 0})));
        val.push_back(1.0);
        idx.push_back(model.add_column(0.0, kInf, 1.0, false, name("sp", {e, j, 1})));
        val.push_back(-1.0);
        const double target = static_cast<int>(p);
        model.add_row(idx, val, target, target, name("pref", {e, j}));
      }
    }
  }
  map.pattern_slack.end = model.num_cols();

  const double capacity = std::ceil(static_cast<double>(n) / variants);
  map.variant_balance.begin = model.num_cols();
  for (int v = 0; v < variants; ++v) {
    const int surplus = model.add_column(0.0, kInf, kVariantBalanceWeight, false, name("b", {v}));
    idx.clear();
    val.clear();
    for (int e = 0; e < n; ++e) {
      idx.push_back(map.z(e, v));
      val.push_back(1.0);
    }
    idx.push_back(surplus);
    val.push_back(-1.0);
    model.add_row(idx, val, -kInf, capacity, name("balance", {v}));
  }
  map.variant_balance.end = model.num_cols();
  return out;
}

std::vector<int> extract_variants(const VariableMap& map, std::span<const double> solution) {
  std::vector<int> out(static_cast<std::size_t>(map.employees), -1);
  for (int e = 0; e < map.employees; ++e) {
    for (int v = 0; v < map.variants; ++v) {
      const double z = solution[static_cast<std::size_t>(map.z(e, v))];
      if (std::abs(z - std::round(z)) > kIntegralityTolerance) {
        throw FractionalSolutionError("fractional pattern choice for employee " + std::to_string(e));
      }
      if (z > 0.5) out[static_cast<std::size_t>(e)] = v;
    }
    if (out[static_cast<std::size_t>(e)] < 0) throw InvalidInputError("employee without a pattern variant");
  }
  return out;
}

Roster extract_roster(const VariableMap& map, std::span<const double> solution) {
  if (static_cast<int>(solution.size()) < map.assignment.end) {
    throw InvalidInputError("solution vector shorter than the assignment block");
  }
  Roster x(map.employees, map.blocks, map.shift_types);
  for (int e = 0; e < map.employees; ++e) {
    for (int j = 0; j < map.blocks; ++j) {
      for (int k = 0; k < map.shift_types; ++k) {
        const double v = solution[static_cast<std::size_t>(map.x(e, j, k))];
        const double r = std::round(v);
        if (std::abs(v - r) > kIntegralityTolerance || (r != 0.0 && r != 1.0)) {
          std::ostringstream os;
          os << "assignment (" << e << ", " << j << ", " << k << ") = " << v << " is not binary";
          throw FractionalSolutionError(os.str());
        }
        x.set(e, j, k, r == 1.0);
      }
    }
  }
  return x;
}

std::vector<double> lift_roster(const RosterInstance& in, const VariableMap& map, const Roster& x) {
  if (!x.matches(in)) throw InvalidInputError("roster dimensions do not match the instance");
  std::vector<double> v(static_cast<std::size_t>(map.num_vars()), 0.0);
  const int n = in.employees;
  const int m = in.blocks;
  const int s = in.num_shift_types();
  for (int e = 0; e < n; ++e) {
    for (int j = 0; j < m; ++j) {
      int busy = 0;
      for (int k = 0; k < s; ++k) {
        v[map.x(e, j, k)] = x(e, j, k);
        busy += x(e, j, k);
      }
      v[map.u(e, j)] = 1.0 - busy;
    }
    // Leftmost greedy packing of fully free windows.
    int last = -kBlocksPerDay;
    for (int t = 0; t + 2 < m; ++t) {
      const bool free = v[map.u(e, t)] == 1.0 && v[map.u(e, t + 1)] == 1.0 && v[map.u(e, t + 2)] == 1.0;
      if (free && t - last >= kBlocksPerDay) {
        v[map.y(e, t)] = 1.0;
        last = t;
      }
    }
  }
  for (int k = 0; k < s; ++k) {
    double worst_total = 0.0;
    double worst_weekend = 0.0;
    for (int e = 0; e < n; ++e) {
      const double dev = in.workload_targets(e, k) - workload(in, x, e, k);
      v[map.d1(e, k, 0)] = std::max(dev, 0.0);
      v[map.d1(e, k, 1)] = std::max(-dev, 0.0);
      worst_total = std::max(worst_total, std::abs(dev));
      const double wdev = in.weekend_targets(e, k) - weekend_workload(in, x, e, k);
      v[map.d2(e, k, 0)] = std::max(wdev, 0.0);
      v[map.d2(e, k, 1)] = std::max(-wdev, 0.0);
      worst_weekend = std::max(worst_weekend, std::abs(wdev));
    }
    v[map.t1(k)] = worst_total;
    v[map.t2(k)] = worst_weekend;
  }
  for (std::size_t slot = 0; slot < map.preference_slots.size(); ++slot) {
    const auto [e, j] = map.preference_slots[slot];
    int busy = 0;
    for (int k = 0; k < s; ++k) busy += x(e, j, k);
    const double dev = static_cast<int>(in.preferences(e, j)) - busy;
    v[map.d3(static_cast<int>(slot), 0)] = std::max(dev, 0.0);
    v[map.d3(static_cast<int>(slot), 1)] = std::max(-dev, 0.0);
  }
  return v;
}

}  // namespace roster
