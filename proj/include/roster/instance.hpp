#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "roster/matrix.hpp"

namespace roster {

inline constexpr int kBlocksPerDay = 3;
inline constexpr int kDaysPerWeek = 7;
inline constexpr int kBlocksPerWeek = kBlocksPerDay * kDaysPerWeek;

// Day index 0 is a Monday.
inline int day_of_block(int block) { return block / kBlocksPerDay; }
inline int weekday(int day) { return day % kDaysPerWeek; }
inline bool is_weekend_day(int day) { return weekday(day) >= 5; }
inline bool is_sunday(int day) { return weekday(day) == 6; }

enum class ShiftKind : std::uint8_t { kEightHour, kAllDay };

struct ShiftType {
  std::string label;
  ShiftKind kind = ShiftKind::kEightHour;

  // Number of 8-hour blocks one duty of this type occupies.
  int span() const { return kind == ShiftKind::kAllDay ? kBlocksPerDay : 1; }
  bool operator==(const ShiftType&) const = default;
};

enum class Preference : std::int8_t { kNone = -1, kAgainst = 0, kFor = 1 };

// Working shift type `previous` on some day forbids working `next_morning`
// in the morning block of the following day.
struct ForbiddenSequence {
  int previous = 0;
  int next_morning = 0;
  bool operator==(const ForbiddenSequence&) const = default;
};

struct RosterInstance {
  int weeks = 0;
  int employees = 0;
  int blocks = 0;  // must equal 21 * weeks
  std::vector<ShiftType> shift_types;

  int max_shifts_per_week = 0;
  int min_shifts_per_week = 0;
  int min_rest_days = 0;
  int min_rest_sundays = 0;

  Matrix<std::uint8_t> availability;  // employees x blocks
  Matrix<std::uint8_t> vacation;      // employees x blocks
  Matrix<Preference> preferences;     // employees x blocks
  Matrix<int> cover;                  // blocks x shift types
  Matrix<double> workload_targets;    // employees x shift types, in duties
  Matrix<double> weekend_targets;     // employees x shift types, in duties

  std::vector<std::vector<int>> no_license;  // per shift type
  std::vector<int> sunday_blocks;
  std::vector<int> weekend_blocks;
  std::vector<ForbiddenSequence> forbidden_sequences;

  int num_shift_types() const { return static_cast<int>(shift_types.size()); }
  int days() const { return blocks / kBlocksPerDay; }
  bool licensed(int employee, int shift) const;
  // employees x shift types, 1 where the employee holds the license.
  Matrix<std::uint8_t> license_matrix() const;
  // Index of the shift type with the given label, or -1.
  int shift_index(const std::string& label) const;

  bool operator==(const RosterInstance&) const = default;
};

// Binary assignment tensor X[e][j][k].
class Roster {
 public:
  Roster() = default;
  Roster(int employees, int blocks, int shift_types)
      : employees_(employees), blocks_(blocks), shift_types_(shift_types),
        x_(static_cast<std::size_t>(employees) * blocks * shift_types, 0) {}
  static Roster empty_for(const RosterInstance& instance) {
    return {instance.employees, instance.blocks, instance.num_shift_types()};
  }

  int employees() const { return employees_; }
  int blocks() const { return blocks_; }
  int shift_types() const { return shift_types_; }

  bool operator()(int e, int j, int k) const { return x_[index(e, j, k)] != 0; }
  void set(int e, int j, int k, bool value) { x_[index(e, j, k)] = value ? 1 : 0; }

  // Shift type worked by e in block j, or -1 when free. With more than one
  // type set (an infeasible roster) returns the lowest.
  int shift_at(int e, int j) const;
  bool works(int e, int j) const { return shift_at(e, j) >= 0; }
  void clear_block(int e, int j);

  bool matches(const RosterInstance& instance) const {
    return employees_ == instance.employees && blocks_ == instance.blocks &&
           shift_types_ == instance.num_shift_types();
  }

  // Number of (e, j, k) entries where the two rosters differ.
  int hamming_distance(const Roster& other) const;

  const std::vector<std::uint8_t>& data() const { return x_; }
  bool operator==(const Roster&) const = default;

 private:
  std::size_t index(int e, int j, int k) const {
    return (static_cast<std::size_t>(e) * blocks_ + j) * shift_types_ + k;
  }

  int employees_ = 0;
  int blocks_ = 0;
  int shift_types_ = 0;
  std::vector<std::uint8_t> x_;
};

struct ObjectiveWeights {
  std::array<double, 3> lambda{1.0, 1.0, 1.0};
  std::array<double, 3> theta{0.5, 0.5, 1.0};
  double gamma = 1.0;             // pattern mode only
  double deviation_weight = 1.0;  // event-driven mode only

  bool valid() const;
};

// Extra objective inputs for the extension modes. Pointers are non-owning and
// must outlive the evaluation.
struct ObjectiveContext {
  const Roster* original = nullptr;  // event-driven: Hamming deviation term
  const Roster* company = nullptr;   // pattern mode: company preference X^c
};

struct ObjectiveBreakdown {
  double total = 0.0;
  double f1 = 0.0;
  double f1_max = 0.0;
  double f2 = 0.0;
  double f2_max = 0.0;
  double f3 = 0.0;
  std::optional<double> f4;
  std::optional<double> deviation;
};

enum class ConstraintId : std::uint8_t {
  kOneShiftPerBlock,
  kLicense,
  kAllDayBlocks,
  kAvailability,
  kVacation,
  kMinRestHours,
  kMaxShiftsPerWeek,
  kMinShiftsPerWeek,
  kMinRestSundays,
  kCover,
  kMinRestDays,
  kForbiddenSequence,
};

const char* to_string(ConstraintId id);

struct Violation {
  ConstraintId constraint;
  int employee = -1;
  int block = -1;
  int shift = -1;
  std::string description;
};

struct FeasibilityReport {
  std::vector<Violation> violations;
  bool feasible() const { return violations.empty(); }
};

struct ValidationReport {
  std::vector<std::string> issues;
  bool ok() const { return issues.empty(); }
};

ValidationReport validate_instance(const RosterInstance& instance);

// Direct evaluation of every hard constraint on X. Throws InvalidInputError on
// a dimension mismatch.
FeasibilityReport check_feasibility(const RosterInstance& instance, const Roster& roster);

// Hard constraints that involve a single employee's row only (everything but
// cover). Returns false at the first violation.
bool employee_feasible(const RosterInstance& instance, const Roster& roster, int employee);
// Every violation of those single-employee constraints.
std::vector<Violation> employee_violations(const RosterInstance& instance, const Roster& roster, int employee);

// Disjoint 24-hour rest windows in the employee's row: sum over maximal free
// runs of floor(length / 3).
int count_rest_days(const RosterInstance& instance, const Roster& roster, int employee);

// Duties of shift type k worked by e (blocks divided by the type's span).
double workload(const RosterInstance& instance, const Roster& roster, int employee, int shift);
double weekend_workload(const RosterInstance& instance, const Roster& roster, int employee,
                        int shift);

ObjectiveBreakdown evaluate_objective(const RosterInstance& instance, const Roster& roster,
                                      const ObjectiveWeights& weights,
                                      const ObjectiveContext& context = {});

// Employee e's additive share of f1 + f2 + f3.
double employee_quality(const RosterInstance& instance, const Roster& roster, int employee);

struct Targets {
  Matrix<double> workload;  // T
  Matrix<double> weekend;   // G
};

// Fair-share duty targets per licensed, not fully unavailable employee.
Targets default_targets(const RosterInstance& instance);

struct EmployeeStatistics {
  std::vector<double> duties;          // per shift type
  std::vector<double> weekend_duties;  // per shift type
  int shifts = 0;                      // total duties, all types
  int weekend_shifts = 0;
  int rest_days = 0;
  int preference_slots = 0;
  int preferences_met = 0;
  double preference_rate() const {
    return preference_slots == 0 ? 1.0 : static_cast<double>(preferences_met) / preference_slots;
  }
};

struct RosterStatistics {
  std::vector<EmployeeStatistics> employees;
  double mean_preference_rate = 1.0;
  double min_preference_rate = 1.0;
  int min_preference_employee = -1;
};

RosterStatistics compute_statistics(const RosterInstance& instance, const Roster& roster);

}  // namespace roster
