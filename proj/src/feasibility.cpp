#include <sstream>

#include "roster/errors.hpp"
#include "roster/instance.hpp"

namespace roster {

namespace {

// Collects violations, or stops at the first one when no sink is attached.
class Collector {
 public:
  explicit Collector(std::vector<Violation>* sink) : sink_(sink) {}

  template <typename Describe>
  bool add(ConstraintId id, int e, int j, int k, Describe&& describe) {
    ok_ = false;
    if (!sink_) return false;
    sink_->push_back({id, e, j, k, describe()});
    return true;
  }
  bool ok() const { return ok_; }

 private:
  std::vector<Violation>* sink_;
  bool ok_ = true;
};

std::string at(int e, int j) {
  std::ostringstream os;
  os << "employee " << e << ", block " << j;
  return os.str();
}

// Returns false when the collector asked to stop.
bool check_employee(const RosterInstance& in, const Roster& x, int e,
                    const Matrix<std::uint8_t>& license, Collector& out) {
  const int m = in.blocks;
  const int s = in.num_shift_types();

  for (int j = 0; j < m; ++j) {
    int assigned = 0;
    for (int k = 0; k < s; ++k) {
      if (!x(e, j, k)) continue;
      ++assigned;
      if (!license(e, k) &&
          !out.add(ConstraintId::kLicense, e, j, k, [&] { return at(e, j) + ": no license for " + in.shift_types[k].label; })) {
        return false;
      }
      if (in.availability(e, j) == 0 &&
          !out.add(ConstraintId::kAvailability, e, j, k, [&] { return at(e, j) + ": assigned while unavailable"; })) {
        return false;
      }
      if (in.vacation(e, j) == 1 &&
          !out.add(ConstraintId::kVacation, e, j, k, [&] { return at(e, j) + ": assigned while on vacation"; })) {
        return false;
      }
    }
    if (assigned > 1 &&
        !out.add(ConstraintId::kOneShiftPerBlock, e, j, -1, [&] { return at(e, j) + ": more than one shift type"; })) {
      return false;
    }
  }

  for (int k = 0; k < s; ++k) {
    const ShiftType& type = in.shift_types[static_cast<std::size_t>(k)];
    if (type.kind == ShiftKind::kAllDay) {
      if (!license(e, k)) continue;
      for (int d = 0; d < m / kBlocksPerDay; ++d) {
        const int j = d * kBlocksPerDay;
        if ((x(e, j, k) != x(e, j + 1, k) || x(e, j, k) != x(e, j + 2, k)) &&
            !out.add(ConstraintId::kAllDayBlocks, e, j, k, [&] {
              return at(e, j) + ": " + type.label + " must cover the whole day";
            })) {
          return false;
        }
      }
      continue;
    }
    if (!license(e, k)) continue;
    for (int t = 0; t + 2 < m; ++t) {
      if (x(e, t, k) + x(e, t + 1, k) + x(e, t + 2, k) > 1 &&
          !out.add(ConstraintId::kMinRestHours, e, t, k, [&] {
            return at(e, t) + ": less than 16 hours between " + type.label + " shifts";
          })) {
        return false;
      }
    }
    for (int week = 0; week < in.weeks; ++week) {
      int count = 0;
      for (int j = week * kBlocksPerWeek; j < (week + 1) * kBlocksPerWeek && j < m; ++j) count += x(e, j, k);
      if (count > in.max_shifts_per_week &&
          !out.add(ConstraintId::kMaxShiftsPerWeek, e, week * kBlocksPerWeek, k, [&] {
            return "employee " + std::to_string(e) + ", week " + std::to_string(week) + ": " +
                   std::to_string(count) + " " + type.label + " shifts exceeds maximum";
          })) {
        return false;
      }
      if (count < in.min_shifts_per_week &&
          !out.add(ConstraintId::kMinShiftsPerWeek, e, week * kBlocksPerWeek, k, [&] {
            return "employee " + std::to_string(e) + ", week " + std::to_string(week) + ": " +
                   std::to_string(count) + " " + type.label + " shifts below minimum";
          })) {
        return false;
      }
    }
  }

  // Sunday work in duty units, scaled by 3 so that all-day blocks count 1/3.
  int sunday_thirds = 0;
  for (int j : in.sunday_blocks) {
    for (int k = 0; k < s; ++k) {
      sunday_thirds += x(e, j, k) * (kBlocksPerDay / in.shift_types[static_cast<std::size_t>(k)].span());
    }
  }
  if (kBlocksPerDay * (in.weeks - in.min_rest_sundays) < sunday_thirds &&
      !out.add(ConstraintId::kMinRestSundays, e, -1, -1, [&] {
        return "employee " + std::to_string(e) + ": rest Sundays below minimum";
      })) {
    return false;
  }

  const int rest = count_rest_days(in, x, e);
  if (rest < in.min_rest_days &&
      !out.add(ConstraintId::kMinRestDays, e, -1, -1, [&] {
        return "employee " + std::to_string(e) + ": " + std::to_string(rest) + " rest days below minimum";
      })) {
    return false;
  }

  // Like the other per-type rules, only checked where both licenses are held;
  // an unlicensed assignment is already a license violation.
  for (const auto& seq : in.forbidden_sequences) {
    if (!license(e, seq.previous) || !license(e, seq.next_morning)) continue;
    for (int d = 0; d + 1 < m / kBlocksPerDay; ++d) {
      const int morning = (d + 1) * kBlocksPerDay;
      if (!x(e, morning, seq.next_morning)) continue;
      for (int b = 0; b < kBlocksPerDay; ++b) {
        const int j = d * kBlocksPerDay + b;
        if (x(e, j, seq.previous)) {
          if (!out.add(ConstraintId::kForbiddenSequence, e, morning, seq.next_morning, [&] {
                return at(e, morning) + ": " + in.shift_types[seq.next_morning].label +
                       " morning after " + in.shift_types[seq.previous].label;
              })) {
            return false;
          }
          break;
        }
      }
    }
  }
  return true;
}

void require_dimensions(const RosterInstance& in, const Roster& x) {
  if (!x.matches(in)) {
    throw InvalidInputError("roster dimensions do not match the instance");
  }
}

}  // namespace

FeasibilityReport check_feasibility(const RosterInstance& in, const Roster& x) {
  require_dimensions(in, x);
  FeasibilityReport report;
  Collector out(&report.violations);
  const auto license = in.license_matrix();
  for (int e = 0; e < in.employees; ++e) check_employee(in, x, e, license, out);
  for (int j = 0; j < in.blocks; ++j) {
    for (int k = 0; k < in.num_shift_types(); ++k) {
      int covered = 0;
      for (int e = 0; e < in.employees; ++e) covered += x(e, j, k);
      if (covered != in.cover(j, k)) {
        out.add(ConstraintId::kCover, -1, j, k, [&] {
          std::ostringstream os;
          os << "block " << j << ", shift " << in.shift_types[static_cast<std::size_t>(k)].label
             << ": " << covered << " assigned, cover requires " << in.cover(j, k);
          return os.str();
        });
      }
    }
  }
  return report;
}

bool employee_feasible(const RosterInstance& in, const Roster& x, int e) {
  Collector out(nullptr);
  const auto license = in.license_matrix();
  check_employee(in, x, e, license, out);
  return out.ok();
}

std::vector<Violation> employee_violations(const RosterInstance& in, const Roster& x, int e) {
  require_dimensions(in, x);
  std::vector<Violation> found;
  Collector out(&found);
  check_employee(in, x, e, in.license_matrix(), out);
  return found;
}

int count_rest_days(const RosterInstance& in, const Roster& x, int e) {
  int rest = 0;
  int run = 0;
  for (int j = 0; j < in.blocks; ++j) {
    if (x.works(e, j)) {
      rest += run / kBlocksPerDay;
      run = 0;
    } else {
      ++run;
    }
  }
  return rest + run / kBlocksPerDay;
}

}  // namespace roster
