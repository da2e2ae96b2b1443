#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "roster/errors.hpp"
#include "roster/hybrid.hpp"
#include "roster/pattern.hpp"

namespace roster {

enum class ChangeKind : std::uint8_t { kAvailability, kVacation, kPreference };

const char* to_string(ChangeKind kind);
std::optional<ChangeKind> parse_change_kind(const std::string& text);

// New values per affected block: 0/1 for availability and vacation, -1 (no
// preference), 0 or 1 for preferences.
struct ChangeRequest {
  int employee = 0;
  ChangeKind kind = ChangeKind::kVacation;
  std::vector<int> blocks;
  std::vector<int> values;
  int effective_from = 0;  // block index
};

// Malformed or mutually contradictory change requests. Coordinates are
// (employee, block) pairs.
class ChangeConflictError : public InvalidInputError {
 public:
  ChangeConflictError(std::string message, std::vector<std::array<int, 2>> coordinates)
      : InvalidInputError(std::move(message)), coordinates_(std::move(coordinates)) {}
  const std::vector<std::array<int, 2>>& coordinates() const { return coordinates_; }

 private:
  std::vector<std::array<int, 2>> coordinates_;
};

// Throws ChangeConflictError.
RosterInstance apply_changes(const RosterInstance& instance, const std::vector<ChangeRequest>& changes);

// Last locked block: one before the earliest effective_from (-1 for none).
int lock_until(const std::vector<ChangeRequest>& changes, int blocks);

struct EventResult {
  RosterInstance updated;
  OptimizationResult result;
  int lock_until = -1;
  int deviation = 0;  // Hamming distance to the original roster
};

// When the changes leave the instance as it was, the original roster is
// returned unchanged with deviation 0 and no solve.
EventResult reoptimize_event(const RosterInstance& instance, const Roster& original,
                             const std::vector<ChangeRequest>& changes, const ObjectiveWeights& weights,
                             const HybridConfig& config, const ProgressSink& sink = {},
                             const std::atomic<bool>* cancel = nullptr);

// T' = base + (cumulative targets - cumulative actuals), separately for the
// whole horizon and for weekends.
Targets adjust_targets(const Targets& base, const Targets& cumulative_targets, const Targets& cumulative_actuals);

// Realized duties per employee and shift type.
Targets realized_workloads(const RosterInstance& instance, const Roster& roster);

struct PeriodPlan {
  int period = 0;
  RosterInstance instance;  // with the targets actually used
  Targets base_targets;
  Roster roster;
  Targets actual;
  double objective = 0.0;
  double gap = 0.0;
  OptimizationStatus status = OptimizationStatus::kNoSolution;
};

struct RollingPlan {
  std::vector<PeriodPlan> periods;
  std::optional<int> failed_period;
  std::string error;

  bool complete() const { return !failed_period.has_value(); }
  // Duties of all types summed over periods, per employee.
  std::vector<double> annual_workload() const;
  std::vector<double> annual_weekend_workload() const;
};

// Population standard deviation.
double standard_deviation(const std::vector<double>& values);

using PeriodProgressSink = std::function<void(int period, const ProgressEvent&)>;

// Splits the annual instance into `periods` equal slices of whole weeks and
// solves them in order. With `adaptive`, each period's targets are adjusted
// by the cumulative deviation of earlier periods. Stops at the first period
// without a roster.
RollingPlan plan_rolling_horizon(const RosterInstance& annual, int periods, const ObjectiveWeights& weights,
                                 const HybridConfig& config, bool adaptive, const PeriodProgressSink& sink = {},
                                 const std::atomic<bool>* cancel = nullptr);

struct PatternResult {
  std::vector<int> variants;  // stage-1 choice per employee
  Roster company;             // X^c
  double stage1_objective = 0.0;
  OptimizationResult result;
  double f4 = 0.0;
};

// Stage 1 (variant choice) by branch-and-bound to optimality, stage 2 by the
// hybrid pipeline with the pattern-aware objective (weights.gamma).
PatternResult optimize_with_patterns(const RosterInstance& instance, const WorkPattern& pattern,
                                     const ObjectiveWeights& weights, const HybridConfig& config,
                                     const ProgressSink& sink = {}, const std::atomic<bool>* cancel = nullptr);

}  // namespace roster
