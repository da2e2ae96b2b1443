#include "roster/instance.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace roster {

bool RosterInstance::licensed(int employee, int shift) const {
  const auto& missing = no_license[static_cast<std::size_t>(shift)];
  return std::find(missing.begin(), missing.end(), employee) == missing.end();
}

Matrix<std::uint8_t> RosterInstance::license_matrix() const {
  Matrix<std::uint8_t> out(employees, num_shift_types(), 1);
  for (int k = 0; k < num_shift_types() && k < static_cast<int>(no_license.size()); ++k) {
    for (int e : no_license[static_cast<std::size_t>(k)]) {
      if (e >= 0 && e < employees) out(e, k) = 0;
    }
  }
  return out;
}

int RosterInstance::shift_index(const std::string& label) const {
  for (int k = 0; k < num_shift_types(); ++k) {
    if (shift_types[static_cast<std::size_t>(k)].label == label) return k;
  }
  return -1;
}

int Roster::shift_at(int e, int j) const {
  for (int k = 0; k < shift_types_; ++k) {
    if (x_[index(e, j, k)]) return k;
  }
  return -1;
}

void Roster::clear_block(int e, int j) {
  for (int k = 0; k < shift_types_; ++k) x_[index(e, j, k)] = 0;
}

int Roster::hamming_distance(const Roster& other) const {
  int d = 0;
  const std::size_t n = std::min(x_.size(), other.x_.size());
  for (std::size_t i = 0; i < n; ++i) d += x_[i] != other.x_[i];
  d += static_cast<int>(std::max(x_.size(), other.x_.size()) - n);
  return d;
}

bool ObjectiveWeights::valid() const {
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  return std::all_of(lambda.begin(), lambda.end(), in_unit) &&
         std::all_of(theta.begin(), theta.end(), in_unit) && in_unit(gamma) &&
         deviation_weight >= 0.0;
}

const char* to_string(ConstraintId id) {
  switch (id) {
    case ConstraintId::kOneShiftPerBlock: return "one_shift_per_block";
    case ConstraintId::kLicense: return "license";
    case ConstraintId::kAllDayBlocks: return "all_day_blocks";
    case ConstraintId::kAvailability: return "availability";
    case ConstraintId::kVacation: return "vacation";
    case ConstraintId::kMinRestHours: return "min_rest_hours";
    case ConstraintId::kMaxShiftsPerWeek: return "max_shifts_per_week";
    case ConstraintId::kMinShiftsPerWeek: return "min_shifts_per_week";
    case ConstraintId::kMinRestSundays: return "min_rest_sundays";
    case ConstraintId::kCover: return "cover";
    case ConstraintId::kMinRestDays: return "min_rest_days";
    case ConstraintId::kForbiddenSequence: return "forbidden_sequence";
  }
  return "unknown";
}

namespace {

template <typename T>
bool has_shape(const Matrix<T>& m, int rows, int cols) {
  return m.rows() == rows && m.cols() == cols;
}

}  // namespace

ValidationReport validate_instance(const RosterInstance& in) {
  ValidationReport report;
  auto issue = [&](std::string msg) { report.issues.push_back(std::move(msg)); };

  if (in.weeks < 1) issue("weeks must be at least 1");
  if (in.employees < 1) issue("employees must be at least 1");
  if (in.shift_types.empty()) issue("at least one shift type is required");
  if (in.blocks != kBlocksPerWeek * in.weeks) {
    std::ostringstream os;
    os << "block count " << in.blocks << " != 21 * weeks (" << kBlocksPerWeek * in.weeks << ")";
    issue(os.str());
  }
  if (in.max_shifts_per_week < 0 || in.min_shifts_per_week < 0 || in.min_rest_days < 0 ||
      in.min_rest_sundays < 0) {
    issue("labor-regulation scalars must be nonnegative");
  }
  if (in.min_shifts_per_week > in.max_shifts_per_week) {
    issue("min_shifts_per_week exceeds max_shifts_per_week");
  }

  const int n = in.employees;
  const int m = in.blocks;
  const int s = in.num_shift_types();
  bool shapes_ok = true;
  auto shape = [&](bool ok, const char* what) {
    if (!ok) {
      shapes_ok = false;
      issue(std::string(what) + " has inconsistent dimensions");
    }
  };
  shape(has_shape(in.availability, n, m), "availability");
  shape(has_shape(in.vacation, n, m), "vacation");
  shape(has_shape(in.preferences, n, m), "preferences");
  shape(has_shape(in.cover, m, s), "cover");
  shape(has_shape(in.workload_targets, n, s), "workload_targets");
  shape(has_shape(in.weekend_targets, n, s), "weekend_targets");
  shape(static_cast<int>(in.no_license.size()) == s, "no_license");

  for (std::size_t f = 0; f < in.forbidden_sequences.size(); ++f) {
    const auto& seq = in.forbidden_sequences[f];
    if (seq.previous < 0 || seq.previous >= s || seq.next_morning < 0 || seq.next_morning >= s) {
      issue("forbidden sequence " + std::to_string(f) + " references an unknown shift type");
    }
  }

  // Block index sets.
  std::set<int> weekend(in.weekend_blocks.begin(), in.weekend_blocks.end());
  if (weekend.size() != in.weekend_blocks.size()) issue("weekend_blocks contains duplicates");
  for (int j : in.weekend_blocks) {
    if (j < 0 || j >= m) issue("weekend block " + std::to_string(j) + " out of range");
  }
  std::set<int> sunday(in.sunday_blocks.begin(), in.sunday_blocks.end());
  if (sunday.size() != in.sunday_blocks.size()) issue("sunday_blocks contains duplicates");
  for (int j : in.sunday_blocks) {
    if (j < 0 || j >= m) issue("sunday block " + std::to_string(j) + " out of range");
    if (!weekend.count(j)) issue("sunday block " + std::to_string(j) + " is not a weekend block");
  }

  if (!shapes_ok || n < 1 || m < 1 || s < 1) return report;

  for (int k = 0; k < s; ++k) {
    for (int e : in.no_license[static_cast<std::size_t>(k)]) {
      if (e < 0 || e >= n) {
        issue("no_license for shift " + in.shift_types[static_cast<std::size_t>(k)].label +
              " references unknown employee " + std::to_string(e));
      }
    }
  }

  bool binary = true;
  for (int e = 0; e < n && binary; ++e) {
    for (int j = 0; j < m; ++j) {
      if (in.availability(e, j) > 1 || in.vacation(e, j) > 1) {
        binary = false;
        break;
      }
      const auto p = static_cast<int>(in.preferences(e, j));
      if (p < -1 || p > 1) {
        issue("preference entry out of range at employee " + std::to_string(e));
        break;
      }
    }
  }
  if (!binary) issue("availability and vacation must be binary");

  const auto license = in.license_matrix();
  for (int j = 0; j < m; ++j) {
    for (int k = 0; k < s; ++k) {
      const int demand = in.cover(j, k);
      if (demand < 0) {
        issue("negative cover at block " + std::to_string(j));
        continue;
      }
      if (demand == 0) continue;
      int eligible = 0;
      for (int e = 0; e < n; ++e) {
        eligible += license(e, k) && in.availability(e, j) == 1 && in.vacation(e, j) == 0;
      }
      if (eligible < demand) {
        std::ostringstream os;
        os << "unsatisfiable cover at block " << j << " for shift "
           << in.shift_types[static_cast<std::size_t>(k)].label << ": demand " << demand
           << ", eligible employees " << eligible;
        issue(os.str());
      }
    }
  }
  for (int k = 0; k < s; ++k) {
    if (in.shift_types[static_cast<std::size_t>(k)].kind != ShiftKind::kAllDay) continue;
    for (int d = 0; d < m / kBlocksPerDay; ++d) {
      const int first = in.cover(d * kBlocksPerDay, k);
      if (in.cover(d * kBlocksPerDay + 1, k) != first || in.cover(d * kBlocksPerDay + 2, k) != first) {
        issue("all-day shift " + in.shift_types[static_cast<std::size_t>(k)].label +
              " has non-constant cover on day " + std::to_string(d));
      }
    }
  }
  return report;
}

}  // namespace roster
