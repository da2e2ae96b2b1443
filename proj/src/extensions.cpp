#include "roster/extensions.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "roster/generator.hpp"

namespace roster {

const char* to_string(ChangeKind kind) {
  switch (kind) {
    case ChangeKind::kAvailability: return "availability";
    case ChangeKind::kVacation: return "vacation";
    case ChangeKind::kPreference: return "preference";
  }
  return "unknown";
}

std::optional<ChangeKind> parse_change_kind(const std::string& text) {
  if (text == "availability") return ChangeKind::kAvailability;
  if (text == "vacation") return ChangeKind::kVacation;
  if (text == "preference") return ChangeKind::kPreference;
  return std::nullopt;
}

namespace {

[[noreturn]] void reject(const std::string& what, int employee, int block) {
  std::ostringstream os;
  os << what << " (employee " << employee << ", block " << block << ")";
  throw ChangeConflictError(os.str(), {{employee, block}});
}

}  // namespace

RosterInstance apply_changes(const RosterInstance& instance, const std::vector<ChangeRequest>& changes) {
  RosterInstance out = instance;
  // (kind, employee, block) -> value, to spot contradictions between requests.
  std::map<std::array<int, 3>, int> seen;
  for (const ChangeRequest& c : changes) {
    if (c.employee < 0 || c.employee >= instance.employees) reject("employee out of range", c.employee, -1);
    if (c.blocks.size() != c.values.size()) reject("blocks and values differ in length", c.employee, -1);
    if (c.effective_from < 0 || c.effective_from >= instance.blocks) {
      reject("effective_from outside the horizon", c.employee, c.effective_from);
    }
    for (std::size_t i = 0; i < c.blocks.size(); ++i) {
      const int j = c.blocks[i];
      const int v = c.values[i];
      if (j < 0 || j >= instance.blocks) reject("block out of range", c.employee, j);
      if (j < c.effective_from) reject("block precedes effective_from", c.employee, j);
      const bool binary = v == 0 || v == 1;
      if (c.kind == ChangeKind::kPreference ? !(binary || v == -1) : !binary) {
        reject(std::string("invalid ") + to_string(c.kind) + " value " + std::to_string(v), c.employee, j);
      }
      const auto [it, inserted] = seen.emplace(std::array<int, 3>{static_cast<int>(c.kind), c.employee, j}, v);
      if (!inserted && it->second != v) reject("contradictory change requests", c.employee, j);
      switch (c.kind) {
        case ChangeKind::kAvailability: out.availability(c.employee, j) = static_cast<std::uint8_t>(v); break;
        case ChangeKind::kVacation: out.vacation(c.employee, j) = static_cast<std::uint8_t>(v); break;
        case ChangeKind::kPreference: out.preferences(c.employee, j) = static_cast<Preference>(v); break;
      }
    }
  }
  return out;
}

int lock_until(const std::vector<ChangeRequest>& changes, int blocks) {
  if (changes.empty()) return blocks - 1;
  int earliest = blocks;
  for (const ChangeRequest& c : changes) earliest = std::min(earliest, c.effective_from);
  return earliest - 1;
}

EventResult reoptimize_event(const RosterInstance& instance, const Roster& original,
                             const std::vector<ChangeRequest>& changes, const ObjectiveWeights& weights,
                             const HybridConfig& config, const ProgressSink& sink, const std::atomic<bool>* cancel) {
  if (!original.matches(instance)) throw InvalidInputError("original roster dimensions do not match");
  EventResult out;
  out.updated = apply_changes(instance, changes);
  out.lock_until = lock_until(changes, instance.blocks);

  if (out.updated == instance) {
    OptimizationResult& r = out.result;
    r.roster = original;
    ObjectiveContext ctx;
    ctx.original = &original;
    r.breakdown = evaluate_objective(instance, original, weights, ctx);
    r.objective = r.lower_bound = r.breakdown.total;
    r.gap = 0.0;
    r.status = OptimizationStatus::kOptimal;
    r.message = "no parameter changed; the original roster is kept";
    return out;
  }

  const BuiltModel built = build_event_driven_milp(out.updated, original, weights, out.lock_until);
  OptimizationProblem p;
  p.search.instance = &out.updated;
  p.search.weights = weights;
  p.search.objective.original = &original;
  p.search.first_free_day = out.lock_until < 0 ? 0 : day_of_block(out.lock_until) + 1;
  p.model = &built;
  out.result = optimize(p, config, sink, cancel);
  if (out.result.roster) out.deviation = out.result.roster->hamming_distance(original);
  return out;
}

Targets adjust_targets(const Targets& base, const Targets& cumulative_targets, const Targets& cumulative_actuals) {
  const auto same_shape = [&](const Matrix<double>& a) {
    return a.rows() == base.workload.rows() && a.cols() == base.workload.cols();
  };
  for (const Matrix<double>* m : {&base.weekend, &cumulative_targets.workload, &cumulative_targets.weekend,
                                  &cumulative_actuals.workload, &cumulative_actuals.weekend}) {
    if (!same_shape(*m)) throw InvalidInputError("target matrices differ in shape");
  }
  Targets out = base;
  for (int e = 0; e < base.workload.rows(); ++e) {
    for (int k = 0; k < base.workload.cols(); ++k) {
      out.workload(e, k) += cumulative_targets.workload(e, k) - cumulative_actuals.workload(e, k);
      out.weekend(e, k) += cumulative_targets.weekend(e, k) - cumulative_actuals.weekend(e, k);
    }
  }
  return out;
}

Targets realized_workloads(const RosterInstance& instance, const Roster& roster) {
  const int n = instance.employees;
  const int s = instance.num_shift_types();
  Targets out{Matrix<double>(n, s, 0.0), Matrix<double>(n, s, 0.0)};
  for (int e = 0; e < n; ++e) {
    for (int k = 0; k < s; ++k) {
      out.workload(e, k) = workload(instance, roster, e, k);
      out.weekend(e, k) = weekend_workload(instance, roster, e, k);
    }
  }
  return out;
}

namespace {

std::vector<double> annual_sum(const std::vector<PeriodPlan>& periods, bool weekend) {
  if (periods.empty()) return {};
  const int n = periods.front().actual.workload.rows();
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  for (const PeriodPlan& p : periods) {
    const Matrix<double>& m = weekend ? p.actual.weekend : p.actual.workload;
    for (int e = 0; e < n; ++e) {
      for (int k = 0; k < m.cols(); ++k) out[static_cast<std::size_t>(e)] += m(e, k);
    }
  }
  return out;
}

void accumulate(Matrix<double>& into, const Matrix<double>& add) {
  for (int e = 0; e < into.rows(); ++e) {
    for (int k = 0; k < into.cols(); ++k) into(e, k) += add(e, k);
  }
}

}  // namespace

std::vector<double> RollingPlan::annual_workload() const { return annual_sum(periods, false); }
std::vector<double> RollingPlan::annual_weekend_workload() const { return annual_sum(periods, true); }

double standard_deviation(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  return std::sqrt(sq / static_cast<double>(values.size()));
}

RollingPlan plan_rolling_horizon(const RosterInstance& annual, int periods, const ObjectiveWeights& weights,
                                 const HybridConfig& config, bool adaptive, const PeriodProgressSink& sink,
                                 const std::atomic<bool>* cancel) {
  if (periods < 1 || annual.weeks % periods != 0) {
    throw InvalidInputError("the horizon must split into equal periods of whole weeks");
  }
  const int weeks = annual.weeks / periods;
  const int n = annual.employees;
  const int s = annual.num_shift_types();
  Targets cumulative_targets{Matrix<double>(n, s, 0.0), Matrix<double>(n, s, 0.0)};
  Targets cumulative_actuals = cumulative_targets;

  RollingPlan plan;
  for (int p = 0; p < periods; ++p) {
    PeriodPlan period;
    period.period = p;
    period.instance = slice_weeks(annual, p * weeks, weeks);
    period.base_targets = Targets{period.instance.workload_targets, period.instance.weekend_targets};
    if (adaptive) {
      const Targets t = adjust_targets(period.base_targets, cumulative_targets, cumulative_actuals);
      period.instance.workload_targets = t.workload;
      period.instance.weekend_targets = t.weekend;
    }
    HybridConfig cfg = config;
    cfg.seed = config.seed + static_cast<std::uint64_t>(p);
    ProgressSink period_sink;
    if (sink) period_sink = [&sink, p](const ProgressEvent& ev) { sink(p, ev); };
    const OptimizationResult r = optimize(period.instance, weights, cfg, period_sink, cancel);
    if (!r.roster) {
      plan.failed_period = p;
      plan.error = "period " + std::to_string(p) + ": " + to_string(r.status) +
                   (r.message.empty() ? std::string() : " (" + r.message + ")");
      break;
    }
    period.roster = *r.roster;
    period.actual = realized_workloads(period.instance, period.roster);
    period.objective = r.objective;
    period.gap = r.gap;
    period.status = r.status;
    accumulate(cumulative_targets.workload, period.base_targets.workload);
    accumulate(cumulative_targets.weekend, period.base_targets.weekend);
    accumulate(cumulative_actuals.workload, period.actual.workload);
    accumulate(cumulative_actuals.weekend, period.actual.weekend);
    plan.periods.push_back(std::move(period));
  }
  return plan;
}

PatternResult optimize_with_patterns(const RosterInstance& instance, const WorkPattern& pattern,
                                     const ObjectiveWeights& weights, const HybridConfig& config,
                                     const ProgressSink& sink, const std::atomic<bool>* cancel) {
  if (!(weights.gamma >= 0.0 && weights.gamma <= 1.0)) throw InvalidInputError("gamma must lie in [0, 1]");
  PatternResult out;
  const BuiltModel stage1 = build_pattern_stage1(instance, pattern);
  BnbConfig bc = config.bnb;
  bc.pool_size = 1;
  bc.time_limit = config.total_time_limit;
  const BnbResult r1 = solve_bnb(stage1.model, bc, {}, cancel);
  out.variants = extract_variants(stage1.map, r1.incumbent()->x);
  out.stage1_objective = r1.incumbent()->objective;
  out.company = company_roster(instance, pattern, out.variants);

  const BuiltModel stage2 = build_pattern_stage2(instance, out.company, weights);
  OptimizationProblem p;
  p.search.instance = &instance;
  p.search.weights = weights;
  p.search.objective.company = &out.company;
  p.model = &stage2;
  out.result = optimize(p, config, sink, cancel);
  if (out.result.roster) out.f4 = out.result.roster->hamming_distance(out.company);
  return out;
}

}  // namespace roster
