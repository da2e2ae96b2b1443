#include "roster/generator.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "roster/errors.hpp"

namespace roster {

namespace {

constexpr double kDaysPerYear = 365.0;

// Portable draws: the standard distributions are implementation-defined.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}
  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }
  int below(int n) { return static_cast<int>(uniform() * n); }

 private:
  std::mt19937_64 rng_;
};

std::vector<ShiftType> make_shift_types(int count) {
  std::vector<ShiftType> types{{"SW", ShiftKind::kEightHour}};
  if (count >= 2) types.push_back({"P", ShiftKind::kAllDay});
  if (count >= 3) types.push_back({"OM", ShiftKind::kAllDay});
  return types;
}

void fill_index_sets(RosterInstance& in) {
  in.sunday_blocks.clear();
  in.weekend_blocks.clear();
  for (int j = 0; j < in.blocks; ++j) {
    const int d = day_of_block(j);
    if (is_weekend_day(d)) in.weekend_blocks.push_back(j);
    if (is_sunday(d)) in.sunday_blocks.push_back(j);
  }
}

}  // namespace

int horizon_vacation_days(const GeneratorConfig& config) {
  if (config.vacation_days) return *config.vacation_days;
  return static_cast<int>(
      std::lround(config.annual_vacation_days * config.weeks * kDaysPerWeek / kDaysPerYear));
}

Matrix<int> scaled_cover(int weeks, int shift_types, double scale, const std::vector<int>& holidays) {
  const int days = weeks * kDaysPerWeek;
  Matrix<int> cover(days * kBlocksPerDay, shift_types, 0);
  auto is_holiday = [&](int d) { return std::find(holidays.begin(), holidays.end(), d) != holidays.end(); };

  // Base units per type in chronological order; unit i receives
  // floor((i+1) * scale) - floor(i * scale) employees.
  auto share = [&](long unit) {
    return static_cast<int>(std::floor((unit + 1) * scale + 1e-9) - std::floor(unit * scale + 1e-9));
  };
  long unit = 0;
  for (int d = 0; d < days; ++d) {
    for (int b = 0; b < kBlocksPerDay; ++b) {
      if (is_weekend_day(d) && b == 1) continue;  // 12-hour weekend shifts, no afternoon
      cover(d * kBlocksPerDay + b, 0) = share(unit++);
    }
  }
  if (shift_types >= 2) {
    unit = 0;
    for (int d = 0; d < days; ++d) {
      const int need = share(unit++);
      for (int b = 0; b < kBlocksPerDay; ++b) cover(d * kBlocksPerDay + b, 1) = need;
    }
  }
  if (shift_types >= 3) {
    unit = 0;
    for (int d = 0; d < days; ++d) {
      if (is_weekend_day(d) || is_holiday(d)) continue;
      const int need = share(unit++);
      for (int b = 0; b < kBlocksPerDay; ++b) cover(d * kBlocksPerDay + b, 2) = need;
    }
  }
  return cover;
}

RosterInstance generate_instance(const GeneratorConfig& cfg, std::uint64_t seed) {
  if (cfg.employees < 1 || cfg.weeks < 1) throw InvalidInputError("employees and weeks must be positive");
  if (cfg.shift_types < 1 || cfg.shift_types > 3) throw InvalidInputError("shift_types must be 1, 2 or 3");
  if (cfg.availability_rate < 0.0 || cfg.availability_rate > 1.0 || cfg.preference_density < 0.0 ||
      cfg.preference_density > 1.0) {
    throw InvalidInputError("rates must lie in [0, 1]");
  }
  const int days = cfg.weeks * kDaysPerWeek;
  const int vacation = horizon_vacation_days(cfg);
  if (vacation < 0 || vacation > days) {
    throw InvalidInputError("vacation days exceed the planning horizon");
  }

  RosterInstance in;
  in.weeks = cfg.weeks;
  in.employees = cfg.employees;
  in.blocks = cfg.weeks * kBlocksPerWeek;
  in.shift_types = make_shift_types(cfg.shift_types);
  in.max_shifts_per_week = cfg.max_shifts_per_week;
  in.min_shifts_per_week = cfg.min_shifts_per_week;
  in.min_rest_days = cfg.min_rest_days.value_or(2 * cfg.weeks);
  in.min_rest_sundays = cfg.min_rest_sundays.value_or(cfg.weeks / 4);
  in.cover = scaled_cover(cfg.weeks, cfg.shift_types, static_cast<double>(cfg.employees) / cfg.base_employees,
                          cfg.holidays);
  fill_index_sets(in);

  const int s = in.num_shift_types();
  in.no_license.assign(static_cast<std::size_t>(s), {});
  const int p_licensed = (cfg.employees + 1) / 2;
  for (int e = 0; e < cfg.employees; ++e) {
    const bool has_p = e < p_licensed;
    if (s >= 2 && !has_p) in.no_license[1].push_back(e);
    if (s >= 3 && has_p) in.no_license[2].push_back(e);
  }
  if (s >= 2) in.forbidden_sequences.push_back({1, 0});

  Draw draw(seed);
  constexpr int kAttempts = 200;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    in.availability = Matrix<std::uint8_t>(cfg.employees, in.blocks, 1);
    in.vacation = Matrix<std::uint8_t>(cfg.employees, in.blocks, 0);
    in.preferences = Matrix<Preference>(cfg.employees, in.blocks, Preference::kNone);
    for (int e = 0; e < cfg.employees; ++e) {
      for (int d = 0; d < days; ++d) {
        if (!draw.bernoulli(cfg.availability_rate)) {
          for (int b = 0; b < kBlocksPerDay; ++b) in.availability(e, d * kBlocksPerDay + b) = 0;
        }
      }
      if (vacation > 0) {
        const int start = draw.below(days - vacation + 1);
        for (int d = start; d < start + vacation; ++d) {
          for (int b = 0; b < kBlocksPerDay; ++b) in.vacation(e, d * kBlocksPerDay + b) = 1;
        }
      }
      for (int j = 0; j < in.blocks; ++j) {
        if (draw.bernoulli(cfg.preference_density)) {
          in.preferences(e, j) = draw.bernoulli(0.5) ? Preference::kFor : Preference::kAgainst;
        }
      }
    }
    in.workload_targets = Matrix<double>(cfg.employees, s, 0.0);
    in.weekend_targets = Matrix<double>(cfg.employees, s, 0.0);
    if (!validate_instance(in).ok()) continue;
    auto targets = default_targets(in);
    in.workload_targets = std::move(targets.workload);
    in.weekend_targets = std::move(targets.weekend);
    return in;
  }
  throw InvalidInputError("could not sample an instance satisfying the necessary cover conditions");
}

RosterInstance slice_weeks(const RosterInstance& in, int first_week, int weeks) {
  if (first_week < 0 || weeks < 1 || first_week + weeks > in.weeks) {
    throw InvalidInputError("week slice out of range");
  }
  RosterInstance out;
  out.weeks = weeks;
  out.employees = in.employees;
  out.blocks = weeks * kBlocksPerWeek;
  out.shift_types = in.shift_types;
  out.max_shifts_per_week = in.max_shifts_per_week;
  out.min_shifts_per_week = in.min_shifts_per_week;
  out.min_rest_days = in.min_rest_days * weeks / in.weeks;
  out.min_rest_sundays = in.min_rest_sundays * weeks / in.weeks;
  out.no_license = in.no_license;
  out.forbidden_sequences = in.forbidden_sequences;
  const int offset = first_week * kBlocksPerWeek;
  const int n = in.employees;
  const int s = in.num_shift_types();
  out.availability = Matrix<std::uint8_t>(n, out.blocks);
  out.vacation = Matrix<std::uint8_t>(n, out.blocks);
  out.preferences = Matrix<Preference>(n, out.blocks);
  out.cover = Matrix<int>(out.blocks, s);
  for (int j = 0; j < out.blocks; ++j) {
    for (int e = 0; e < n; ++e) {
      out.availability(e, j) = in.availability(e, offset + j);
      out.vacation(e, j) = in.vacation(e, offset + j);
      out.preferences(e, j) = in.preferences(e, offset + j);
    }
    for (int k = 0; k < s; ++k) out.cover(j, k) = in.cover(offset + j, k);
  }
  fill_index_sets(out);
  auto targets = default_targets(out);
  out.workload_targets = std::move(targets.workload);
  out.weekend_targets = std::move(targets.weekend);
  return out;
}

}  // namespace roster
