#include <algorithm>
#include <cmath>

#include "roster/errors.hpp"
#include "roster/instance.hpp"

namespace roster {

double workload(const RosterInstance& in, const Roster& x, int e, int k) {
  int blocks = 0;
  for (int j = 0; j < in.blocks; ++j) blocks += x(e, j, k);
  return static_cast<double>(blocks) / in.shift_types[static_cast<std::size_t>(k)].span();
}

double weekend_workload(const RosterInstance& in, const Roster& x, int e, int k) {
  int blocks = 0;
  for (int j : in.weekend_blocks) blocks += x(e, j, k);
  return static_cast<double>(blocks) / in.shift_types[static_cast<std::size_t>(k)].span();
}

namespace {

double preference_violation(const RosterInstance& in, const Roster& x, int e) {
  double total = 0.0;
  for (int j = 0; j < in.blocks; ++j) {
    const Preference p = in.preferences(e, j);
    if (p == Preference::kNone) continue;
    const int worked = x.works(e, j) ? 1 : 0;
    total += std::abs(worked - static_cast<int>(p));
  }
  return total;
}

}  // namespace

ObjectiveBreakdown evaluate_objective(const RosterInstance& in, const Roster& x,
                                      const ObjectiveWeights& w, const ObjectiveContext& ctx) {
  if (!x.matches(in)) throw InvalidInputError("roster dimensions do not match the instance");
  ObjectiveBreakdown out;
  const int n = in.employees;
  const int s = in.num_shift_types();
  for (int k = 0; k < s; ++k) {
    double worst_total = 0.0;
    double worst_weekend = 0.0;
    for (int e = 0; e < n; ++e) {
      const double dev = std::abs(in.workload_targets(e, k) - workload(in, x, e, k));
      const double wdev = std::abs(in.weekend_targets(e, k) - weekend_workload(in, x, e, k));
      out.f1 += dev;
      out.f2 += wdev;
      worst_total = std::max(worst_total, dev);
      worst_weekend = std::max(worst_weekend, wdev);
    }
    out.f1_max += worst_total;
    out.f2_max += worst_weekend;
  }
  for (int e = 0; e < n; ++e) out.f3 += preference_violation(in, x, e);

  out.total = w.lambda[0] * (w.theta[0] * out.f1 + (1.0 - w.theta[0]) * out.f1_max) +
              w.lambda[1] * (w.theta[1] * out.f2 + (1.0 - w.theta[1]) * out.f2_max);
  if (ctx.company) {
    if (!ctx.company->matches(in)) throw InvalidInputError("company pattern dimensions mismatch");
    const double f4 = x.hamming_distance(*ctx.company);
    out.f4 = f4;
    out.total += w.lambda[2] * w.theta[2] * (w.gamma * out.f3 + (1.0 - w.gamma) * f4);
  } else {
    out.total += w.lambda[2] * w.theta[2] * out.f3;
  }
  if (ctx.original) {
    if (!ctx.original->matches(in)) throw InvalidInputError("original roster dimensions mismatch");
    const double dev = x.hamming_distance(*ctx.original);
    out.deviation = dev;
    out.total += w.deviation_weight * dev;
  }
  return out;
}

double employee_quality(const RosterInstance& in, const Roster& x, int e) {
  double q = 0.0;
  for (int k = 0; k < in.num_shift_types(); ++k) {
    q += std::abs(in.workload_targets(e, k) - workload(in, x, e, k));
    q += std::abs(in.weekend_targets(e, k) - weekend_workload(in, x, e, k));
  }
  return q + preference_violation(in, x, e);
}

Targets default_targets(const RosterInstance& in) {
  const int n = in.employees;
  const int s = in.num_shift_types();
  Targets t{Matrix<double>(n, s, 0.0), Matrix<double>(n, s, 0.0)};
  const auto license = in.license_matrix();

  std::vector<bool> ever_available(static_cast<std::size_t>(n), false);
  for (int e = 0; e < n; ++e) {
    for (int j = 0; j < in.blocks; ++j) {
      if (in.availability(e, j) == 1 && in.vacation(e, j) == 0) {
        ever_available[static_cast<std::size_t>(e)] = true;
        break;
      }
    }
  }
  for (int k = 0; k < s; ++k) {
    const double span = in.shift_types[static_cast<std::size_t>(k)].span();
    double total = 0.0;
    for (int j = 0; j < in.blocks; ++j) total += in.cover(j, k);
    double weekend = 0.0;
    for (int j : in.weekend_blocks) weekend += in.cover(j, k);
    total /= span;
    weekend /= span;

    int eligible = 0;
    for (int e = 0; e < n; ++e) eligible += license(e, k) && ever_available[static_cast<std::size_t>(e)];
    if (eligible == 0) {
      if (total > 0.0) {
        throw InvalidInputError("shift type " + in.shift_types[static_cast<std::size_t>(k)].label +
                                " has demand but no licensed employee");
      }
      continue;
    }
    for (int e = 0; e < n; ++e) {
      if (!license(e, k) || !ever_available[static_cast<std::size_t>(e)]) continue;
      t.workload(e, k) = total / eligible;
      t.weekend(e, k) = weekend / eligible;
    }
  }
  return t;
}

RosterStatistics compute_statistics(const RosterInstance& in, const Roster& x) {
  RosterStatistics stats;
  const int s = in.num_shift_types();
  double rate_sum = 0.0;
  for (int e = 0; e < in.employees; ++e) {
    EmployeeStatistics es;
    es.duties.assign(static_cast<std::size_t>(s), 0.0);
    es.weekend_duties.assign(static_cast<std::size_t>(s), 0.0);
    for (int k = 0; k < s; ++k) {
      es.duties[static_cast<std::size_t>(k)] = workload(in, x, e, k);
      es.weekend_duties[static_cast<std::size_t>(k)] = weekend_workload(in, x, e, k);
      es.shifts += static_cast<int>(std::lround(es.duties[static_cast<std::size_t>(k)]));
      es.weekend_shifts += static_cast<int>(std::lround(es.weekend_duties[static_cast<std::size_t>(k)]));
    }
    es.rest_days = count_rest_days(in, x, e);
    for (int j = 0; j < in.blocks; ++j) {
      const Preference p = in.preferences(e, j);
      if (p == Preference::kNone) continue;
      ++es.preference_slots;
      es.preferences_met += (x.works(e, j) ? 1 : 0) == static_cast<int>(p);
    }
    const double rate = es.preference_rate();
    rate_sum += rate;
    if (stats.min_preference_employee < 0 || rate < stats.min_preference_rate) {
      stats.min_preference_rate = rate;
      stats.min_preference_employee = e;
    }
    stats.employees.push_back(std::move(es));
  }
  if (in.employees > 0) stats.mean_preference_rate = rate_sum / in.employees;
  return stats;
}

}  // namespace roster
