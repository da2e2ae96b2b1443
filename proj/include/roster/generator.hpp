#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "roster/instance.hpp"

namespace roster {

// Randomized instance assumptions of the experimental harness. Cover is the
// twelve-employee base (one switching operator per block except weekend
// afternoons, one on-call duty per day, one outage planner per business day)
// scaled by employees / base_employees.
struct GeneratorConfig {
  int employees = 12;
  int weeks = 8;
  int shift_types = 3;  // 1: switching; 2: + on-call (P); 3: + outage planning (OM)
  double availability_rate = 0.95;
  double annual_vacation_days = 25.0;
  std::optional<int> vacation_days;  // per employee in the horizon; default prorated
  double preference_density = 0.2;
  int max_shifts_per_week = 5;
  int min_shifts_per_week = 1;
  std::optional<int> min_rest_days;     // default 2 per week
  std::optional<int> min_rest_sundays;  // default weeks / 4
  std::vector<int> holidays;            // day indices without outage planning
  int base_employees = 12;
};

int horizon_vacation_days(const GeneratorConfig& config);

// Deterministic for a fixed seed. Throws InvalidInputError for configurations
// that cannot be realized (e.g. more vacation days than the horizon has).
RosterInstance generate_instance(const GeneratorConfig& config, std::uint64_t seed);

// Base demand of the twelve-employee team, scaled and rounded so that every
// prefix of the horizon carries floor(scale * base units).
Matrix<int> scaled_cover(int weeks, int shift_types, double scale, const std::vector<int>& holidays);

// Weeks [first_week, first_week + weeks) of an instance as a standalone
// instance; rest-day scalars are prorated and targets recomputed.
RosterInstance slice_weeks(const RosterInstance& instance, int first_week, int weeks);

}  // namespace roster
