#include "roster/pattern.hpp"

#include <cstdlib>

#include "roster/errors.hpp"

namespace roster {

const char* to_string(DayLabel label) {
  switch (label) {
    case DayLabel::kRest: return "-";
    case DayLabel::kMorning: return "M";
    case DayLabel::kAfternoon: return "A";
    case DayLabel::kNight: return "N";
    case DayLabel::kOnCall: return "P";
    case DayLabel::kOutage: return "OM";
  }
  return "?";
}

DayLabel parse_day_label(const std::string& text) {
  if (text == "-" || text.empty()) return DayLabel::kRest;
  if (text == "M") return DayLabel::kMorning;
  if (text == "A") return DayLabel::kAfternoon;
  if (text == "N") return DayLabel::kNight;
  if (text == "P") return DayLabel::kOnCall;
  if (text == "OM") return DayLabel::kOutage;
  throw InvalidInputError("unknown day label '" + text + "'");
}

DayLabel WorkPattern::label(int variant, int horizon_day) const {
  const int week = (horizon_day / kDaysPerWeek + variant) % weeks();
  return grid[static_cast<std::size_t>(week)][static_cast<std::size_t>(horizon_day % kDaysPerWeek)];
}

namespace {

int eight_hour_type(const RosterInstance& in) {
  for (int k = 0; k < in.num_shift_types(); ++k) {
    if (in.shift_types[static_cast<std::size_t>(k)].kind == ShiftKind::kEightHour) return k;
  }
  return -1;
}

int require_type(int k, DayLabel label) {
  if (k < 0) {
    throw InvalidInputError(std::string("pattern label ") + to_string(label) +
                            " has no matching shift type in the instance");
  }
  return k;
}

}  // namespace

std::vector<int> expand_variant(const RosterInstance& in, const WorkPattern& pattern, int variant) {
  if (pattern.weeks() == 0) throw InvalidInputError("work pattern is empty");
  std::vector<int> shift(static_cast<std::size_t>(in.blocks), -1);
  for (int d = 0; d < in.days(); ++d) {
    const DayLabel label = pattern.label(variant, d);
    const int base = d * kBlocksPerDay;
    switch (label) {
      case DayLabel::kRest: break;
      case DayLabel::kMorning:
      case DayLabel::kAfternoon:
      case DayLabel::kNight: {
        const int k = require_type(eight_hour_type(in), label);
        const int offset = label == DayLabel::kMorning ? 0 : label == DayLabel::kAfternoon ? 1 : 2;
        shift[static_cast<std::size_t>(base + offset)] = k;
        break;
      }
      case DayLabel::kOnCall:
      case DayLabel::kOutage: {
        const int k = require_type(in.shift_index(label == DayLabel::kOnCall ? "P" : "OM"), label);
        for (int b = 0; b < kBlocksPerDay; ++b) shift[static_cast<std::size_t>(base + b)] = k;
        break;
      }
    }
  }
  return shift;
}

Roster company_roster(const RosterInstance& in, const WorkPattern& pattern,
                      const std::vector<int>& variant_of_employee) {
  if (static_cast<int>(variant_of_employee.size()) != in.employees) {
    throw InvalidInputError("one pattern variant per employee is required");
  }
  Roster x = Roster::empty_for(in);
  for (int e = 0; e < in.employees; ++e) {
    const auto shifts = expand_variant(in, pattern, variant_of_employee[static_cast<std::size_t>(e)]);
    for (int j = 0; j < in.blocks; ++j) {
      if (shifts[static_cast<std::size_t>(j)] >= 0) x.set(e, j, shifts[static_cast<std::size_t>(j)], true);
    }
  }
  return x;
}

int variant_conflicts(const RosterInstance& in, const std::vector<int>& expanded, int e) {
  int conflicts = 0;
  for (int j = 0; j < in.blocks; ++j) {
    const int k = expanded[static_cast<std::size_t>(j)];
    const bool works = k >= 0;
    if (works && (in.availability(e, j) == 0 || in.vacation(e, j) == 1)) ++conflicts;
    if (works && !in.licensed(e, k)) ++conflicts;
    const Preference p = in.preferences(e, j);
    if (p != Preference::kNone) conflicts += std::abs((works ? 1 : 0) - static_cast<int>(p));
  }
  return conflicts;
}

}  // namespace roster
