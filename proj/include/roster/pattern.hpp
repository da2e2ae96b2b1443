#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "roster/instance.hpp"

namespace roster {

enum class DayLabel : std::uint8_t { kRest, kMorning, kAfternoon, kNight, kOnCall, kOutage };

const char* to_string(DayLabel label);
DayLabel parse_day_label(const std::string& text);  // M, A, N, P, OM, -

// Company-defined work pattern: a base grid of weeks x 7 day labels. Variant
// v starts the grid at week v, so horizon week i follows base week (i + v)
// mod weeks().
struct WorkPattern {
  std::vector<std::array<DayLabel, kDaysPerWeek>> grid;

  int weeks() const { return static_cast<int>(grid.size()); }
  int variants() const { return weeks(); }
  DayLabel label(int variant, int horizon_day) const;
  bool operator==(const WorkPattern&) const = default;
};

// Resolved (block, shift type) assignments of one variant over an instance's
// horizon: shift type per block, -1 when resting. Throws InvalidInputError if
// the pattern uses a shift type the instance does not have.
std::vector<int> expand_variant(const RosterInstance& instance, const WorkPattern& pattern, int variant);

// X^c for a per-employee variant choice.
Roster company_roster(const RosterInstance& instance, const WorkPattern& pattern,
                      const std::vector<int>& variant_of_employee);

// Per-employee conflicts of a variant with availability/vacation, stated
// preferences and licenses.
int variant_conflicts(const RosterInstance& instance, const std::vector<int>& expanded, int employee);

}  // namespace roster
