#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "roster/errors.hpp"
#include "roster/instance.hpp"
#include "roster/pattern.hpp"

namespace roster {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kIntegralityTolerance = 1e-6;

struct ModelStats {
  int continuous = 0;
  int integer = 0;
  int rows = 0;
  long nonzeros = 0;
};

// Minimization model: cost'x + offset subject to row_lower <= Ax <= row_upper,
// col_lower <= x <= col_upper, x integral where flagged. Rows in CSR form.
class MilpModel {
 public:
  int add_column(double lower, double upper, double cost, bool integral, std::string name = {});
  int add_row(std::span<const int> index, std::span<const double> value, double lower, double upper,
              std::string name = {});
  int add_row(std::initializer_list<std::pair<int, double>> terms, double lower, double upper,
              std::string name = {});

  int num_cols() const { return static_cast<int>(cost.size()); }
  int num_rows() const { return static_cast<int>(row_lower.size()); }
  long nonzeros() const { return static_cast<long>(row_index.size()); }
  ModelStats stats() const;

  std::span<const int> row_indices(int r) const {
    return {row_index.data() + row_start[r], static_cast<std::size_t>(row_start[r + 1] - row_start[r])};
  }
  std::span<const double> row_values(int r) const {
    return {row_value.data() + row_start[r], static_cast<std::size_t>(row_start[r + 1] - row_start[r])};
  }

  double objective_value(std::span<const double> x) const;
  double row_activity(int r, std::span<const double> x) const;
  // Largest bound, row or (optionally) integrality violation of x.
  double max_violation(std::span<const double> x, bool check_integrality = true) const;
  bool feasible(std::span<const double> x, double tolerance = kIntegralityTolerance) const {
    return max_violation(x) <= tolerance;
  }
  // Empty when the model's structural invariants hold.
  std::vector<std::string> validate() const;

  std::vector<double> cost;
  double cost_offset = 0.0;
  std::vector<double> col_lower;
  std::vector<double> col_upper;
  std::vector<std::uint8_t> integral;
  std::vector<std::string> col_names;

  std::vector<int> row_start{0};
  std::vector<int> row_index;
  std::vector<double> row_value;
  std::vector<double> row_lower;
  std::vector<double> row_upper;
  std::vector<std::string> row_names;
};

struct VarRange {
  std::string name;
  int begin = 0;
  int end = 0;
  int size() const { return end - begin; }
  bool contains(int v) const { return v >= begin && v < end; }
};

// Maps model columns back to roster semantics. Every column belongs to
// exactly one named range; layouts inside the known ranges are fixed by the
// accessors below.
class VariableMap {
 public:
  int employees = 0;
  int blocks = 0;
  int shift_types = 0;
  int variants = 0;  // pattern stage 1 only

  VarRange assignment{"x"};           // (e, j, k)
  VarRange free_block{"u"};           // (e, j): 1 when e works no shift in block j
  VarRange rest_window{"y"};          // (e, t), t < blocks - 2
  VarRange workload_dev{"d1"};        // (e, k, sign)
  VarRange workload_max{"t1"};        // k
  VarRange weekend_dev{"d2"};         // (e, k, sign)
  VarRange weekend_max{"t2"};         // k
  VarRange preference_dev{"d3"};      // (slot, sign)
  VarRange pattern_choice{"z"};       // (e, v)
  VarRange pattern_slack{"s"};        // stage 1 slack / surplus
  VarRange variant_balance{"b"};      // v
  std::vector<std::pair<int, int>> preference_slots;  // (e, j) per preference_dev pair

  int x(int e, int j, int k) const { return assignment.begin + (e * blocks + j) * shift_types + k; }
  int u(int e, int j) const { return free_block.begin + e * blocks + j; }
  int y(int e, int t) const { return rest_window.begin + e * (blocks - 2) + t; }
  int d1(int e, int k, int sign) const { return workload_dev.begin + 2 * (e * shift_types + k) + sign; }
  int t1(int k) const { return workload_max.begin + k; }
  int d2(int e, int k, int sign) const { return weekend_dev.begin + 2 * (e * shift_types + k) + sign; }
  int t2(int k) const { return weekend_max.begin + k; }
  int d3(int slot, int sign) const { return preference_dev.begin + 2 * slot + sign; }
  int z(int e, int v) const { return pattern_choice.begin + e * variants + v; }

  int num_vars() const;
  std::vector<const VarRange*> ranges() const;
  const VarRange* range(std::string_view name) const;
  // (e, j, k) of an assignment column.
  std::optional<std::array<int, 3>> decode(int column) const;
};

class FractionalSolutionError : public RosterError {
 public:
  using RosterError::RosterError;
};

// Locked-prefix entries that contradict the updated parameters.
class LockConflictError : public RosterError {
 public:
  LockConflictError(std::string message, std::vector<std::array<int, 3>> coordinates)
      : RosterError(std::move(message)), coordinates_(std::move(coordinates)) {}
  const std::vector<std::array<int, 3>>& coordinates() const { return coordinates_; }

 private:
  std::vector<std::array<int, 3>> coordinates_;
};

struct BuiltModel {
  MilpModel model;
  VariableMap map;
};

BuiltModel build_milp(const RosterInstance& instance, const ObjectiveWeights& weights);

// Blocks j <= lock_until are fixed to the original roster (lock_until < 0
// locks nothing). Adds mu * Hamming(X, original) to the objective.
BuiltModel build_event_driven_milp(const RosterInstance& instance, const Roster& original,
                                   const ObjectiveWeights& weights, int lock_until);

inline constexpr double kVariantBalanceWeight = 1e-3;

BuiltModel build_pattern_stage1(const RosterInstance& instance, const WorkPattern& pattern);

BuiltModel build_pattern_stage2(const RosterInstance& instance, const Roster& company,
                                const ObjectiveWeights& weights);

// Stage-1 solution to one variant per employee.
std::vector<int> extract_variants(const VariableMap& map, std::span<const double> solution);

Roster extract_roster(const VariableMap& map, std::span<const double> solution);

// Full model point for X with auxiliary columns at their tightest values.
// Feasible for the model iff X passes check_feasibility.
std::vector<double> lift_roster(const RosterInstance& instance, const VariableMap& map, const Roster& roster);

// Fixes X columns with j <= lock_until to the roster's values (bounds only).
void lock_prefix(MilpModel& model, const VariableMap& map, const Roster& roster, int lock_until);

// CPLEX LP text format.
void write_lp_format(const MilpModel& model, std::ostream& out);

}  // namespace roster
