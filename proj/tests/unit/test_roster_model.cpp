#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "roster/errors.hpp"
#include "roster/generator.hpp"

using namespace roster;

namespace {

RosterInstance toy(std::uint64_t seed, int employees = 3, int weeks = 1, int shift_types = 2) {
  GeneratorConfig cfg;
  cfg.employees = employees;
  cfg.weeks = weeks;
  cfg.shift_types = shift_types;
  return generate_instance(cfg, seed);
}

// One employee, one week, a single eight-hour type, no demands.
RosterInstance single_row() {
  RosterInstance in;
  in.weeks = 1;
  in.employees = 1;
  in.blocks = 21;
  in.shift_types = {{"SW", ShiftKind::kEightHour}};
  in.max_shifts_per_week = 21;
  in.availability = Matrix<std::uint8_t>(1, 21, 1);
  in.vacation = Matrix<std::uint8_t>(1, 21, 0);
  in.preferences = Matrix<Preference>(1, 21, Preference::kNone);
  in.cover = Matrix<int>(21, 1, 0);
  in.workload_targets = Matrix<double>(1, 1, 0.0);
  in.weekend_targets = Matrix<double>(1, 1, 0.0);
  in.no_license = {{}};
  for (int j = 15; j < 21; ++j) in.weekend_blocks.push_back(j);
  for (int j = 18; j < 21; ++j) in.sunday_blocks.push_back(j);
  return in;
}

}  // namespace

TEST_CASE("rest days of the two three-day example schedules") {
  const RosterInstance in = single_row();
  // Blocks after the three-day window are occupied so only the window counts.
  auto window = [&](std::initializer_list<int> worked) {
    Roster x = Roster::empty_for(in);
    for (int j : worked) x.set(0, j, 0, true);
    for (int j = 9; j < 21; ++j) x.set(0, j, 0, true);
    return x;
  };
  // Morning of day 1 and afternoon of day 3: free blocks 2..7 and 9.
  CHECK(count_rest_days(in, window({0, 7}), 0) == 2);
  // Afternoons of days 1 and 3: free runs of length 1, 5 and 1.
  CHECK(count_rest_days(in, window({1, 7}), 0) == 1);
}

TEST_CASE("fully free horizon has one rest day per day") {
  for (int weeks : {1, 2, 3}) {
    const RosterInstance in = toy(5, 3, weeks);
    CHECK(count_rest_days(in, Roster::empty_for(in), 0) == 7 * weeks);
  }
}

TEST_CASE("rest-day count matches the disjoint-window DP on random rows") {
  std::mt19937_64 rng(11);
  const RosterInstance in = toy(1, 3, 2);
  for (int trial = 0; trial < 500; ++trial) {
    const Roster x = oracle::random_roster(in, rng, 0.1 + 0.8 * (trial % 10) / 10.0);
    for (int e = 0; e < in.employees; ++e) CHECK(count_rest_days(in, x, e) == oracle::rest_days(x, e));
  }
}

TEST_CASE("rest-day count depends only on occupancy") {
  std::mt19937_64 rng(3);
  const RosterInstance in = toy(2, 3, 1);
  for (int trial = 0; trial < 100; ++trial) {
    const Roster x = oracle::random_roster(in, rng, 0.5);
    Roster relabeled = Roster::empty_for(in);
    for (int e = 0; e < in.employees; ++e) {
      for (int j = 0; j < in.blocks; ++j) {
        if (x.works(e, j)) relabeled.set(e, j, (x.shift_at(e, j) + 1) % in.num_shift_types(), true);
      }
    }
    for (int e = 0; e < in.employees; ++e) CHECK(count_rest_days(in, x, e) == count_rest_days(in, relabeled, e));
  }
}

TEST_CASE("validate_instance") {
  SUBCASE("generated instance is well formed") { CHECK(validate_instance(toy(1, 12, 8, 3)).ok()); }
  SUBCASE("block count mismatch") {
    RosterInstance in = toy(1);
    in.blocks = 20;
    const auto report = validate_instance(in);
    REQUIRE_FALSE(report.ok());
    CHECK(std::any_of(report.issues.begin(), report.issues.end(),
                      [](const std::string& s) { return s.find("block count") != std::string::npos; }));
  }
  SUBCASE("nobody licensed for a demanded type") {
    RosterInstance in = toy(1, 3, 1, 2);
    in.no_license[1] = {0, 1, 2};
    const auto report = validate_instance(in);
    REQUIRE_FALSE(report.ok());
    CHECK(std::any_of(report.issues.begin(), report.issues.end(),
                      [](const std::string& s) { return s.find("unsatisfiable cover") != std::string::npos; }));
  }
  SUBCASE("sunday outside the weekend set") {
    RosterInstance in = toy(1);
    in.weekend_blocks.erase(std::find(in.weekend_blocks.begin(), in.weekend_blocks.end(), in.sunday_blocks[0]));
    CHECK_FALSE(validate_instance(in).ok());
  }
  SUBCASE("non-binary availability") {
    RosterInstance in = toy(1);
    in.availability(0, 0) = 2;
    CHECK_FALSE(validate_instance(in).ok());
  }
}

TEST_CASE("check_feasibility examples") {
  SUBCASE("empty roster without demands") {
    RosterInstance in = single_row();
    in.min_shifts_per_week = 0;
    CHECK(check_feasibility(in, Roster::empty_for(in)).feasible());
  }
  SUBCASE("single unlicensed assignment") {
    RosterInstance in = single_row();
    in.no_license = {{0}};
    Roster x = Roster::empty_for(in);
    x.set(0, 4, 0, true);
    in.cover(4, 0) = 1;
    const auto report = check_feasibility(in, x);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].constraint == ConstraintId::kLicense);
    CHECK(report.violations[0].employee == 0);
    CHECK(report.violations[0].block == 4);
    CHECK(report.violations[0].shift == 0);
  }
  SUBCASE("dimension mismatch is rejected") {
    const RosterInstance in = single_row();
    CHECK_THROWS_AS(check_feasibility(in, Roster(2, 21, 1)), InvalidInputError);
  }
}

TEST_CASE("hand-built two-employee week exercising every family") {
  RosterInstance in;
  in.weeks = 1;
  in.employees = 2;
  in.blocks = 21;
  in.shift_types = {{"SW", ShiftKind::kEightHour}, {"P", ShiftKind::kAllDay}};
  in.max_shifts_per_week = 2;
  in.min_shifts_per_week = 1;
  in.min_rest_days = 5;
  in.min_rest_sundays = 1;
  in.availability = Matrix<std::uint8_t>(2, 21, 1);
  in.vacation = Matrix<std::uint8_t>(2, 21, 0);
  in.preferences = Matrix<Preference>(2, 21, Preference::kNone);
  in.cover = Matrix<int>(21, 2, 0);
  in.workload_targets = Matrix<double>(2, 2, 0.0);
  in.weekend_targets = Matrix<double>(2, 2, 0.0);
  in.no_license = {{}, {1}};
  in.forbidden_sequences = {{1, 0}};
  for (int j = 15; j < 21; ++j) in.weekend_blocks.push_back(j);
  for (int j = 18; j < 21; ++j) in.sunday_blocks.push_back(j);
  in.availability(1, 9) = 0;
  in.vacation(1, 12) = 1;

  Roster x = Roster::empty_for(in);
  // Employee 0: P on Monday, switching the Tuesday morning (forbidden), a
  // partial P on Sunday (all-day rule and rest Sunday), two SW blocks 8h apart.
  for (int b = 0; b < 3; ++b) x.set(0, b, 1, true);
  x.set(0, 3, 0, true);
  x.set(0, 5, 0, true);
  x.set(0, 18, 1, true);
  // Employee 1: P without license, SW while unavailable and on vacation, two
  // types in one block.
  for (int b = 6; b < 9; ++b) x.set(1, b, 1, true);
  x.set(1, 9, 0, true);
  x.set(1, 12, 0, true);
  x.set(1, 12, 1, true);

  // Cover is set so that it matches the roster everywhere but block 20.
  for (int j = 0; j < 21; ++j) {
    for (int k = 0; k < 2; ++k) in.cover(j, k) = x(0, j, k) + x(1, j, k);
  }
  in.cover(20, 0) = 1;

  const auto report = check_feasibility(in, x);
  std::multiset<ConstraintId> got;
  for (const auto& v : report.violations) got.insert(v.constraint);

  // Hand enumeration: license on 3 blocks of day 2 plus block 12, availability
  // at 9, vacation at 12, one-shift at 12, all-day at Sunday, 16h rest for the
  // (3, 5) pair in windows starting 3, the weekly maximum (3 SW > 2), the rest
  // Sunday, forbidden sequence on day 0, rest days below 5, cover at 20.
  CHECK(got.count(ConstraintId::kLicense) == 4);
  CHECK(got.count(ConstraintId::kAvailability) == 1);
  CHECK(got.count(ConstraintId::kVacation) == 2);
  CHECK(got.count(ConstraintId::kOneShiftPerBlock) == 1);
  CHECK(got.count(ConstraintId::kAllDayBlocks) == 1);
  CHECK(got.count(ConstraintId::kMinRestHours) == 1);
  CHECK(got.count(ConstraintId::kMaxShiftsPerWeek) == 0);
  CHECK(got.count(ConstraintId::kMinRestSundays) == 1);
  CHECK(got.count(ConstraintId::kForbiddenSequence) == 1);
  CHECK(got.count(ConstraintId::kMinRestDays) >= 1);
  CHECK(got.count(ConstraintId::kCover) == 1);
  CHECK(got.count(ConstraintId::kMinShiftsPerWeek) == 0);
  const std::set<ConstraintId> distinct(got.begin(), got.end());
  CHECK_MESSAGE(oracle::violated(in, x) == distinct, oracle::describe(oracle::violated(in, x)) << " vs " << oracle::describe(distinct));
}

TEST_CASE("check_feasibility agrees with the naive re-verification") {
  std::mt19937_64 rng(2024);
  int feasible_seen = 0;
  for (int trial = 0; trial < 100; ++trial) {
    RosterInstance in = toy(static_cast<std::uint64_t>(trial), 1 + trial % 3, 1, 1 + trial % 2);
    in.min_rest_days = static_cast<int>(rng() % 6);
    in.max_shifts_per_week = 2 + static_cast<int>(rng() % 4);
    in.min_shifts_per_week = static_cast<int>(rng() % 2);
    in.min_rest_sundays = static_cast<int>(rng() % 2);
    for (int inner = 0; inner < 10; ++inner) {
      Roster x = oracle::random_roster(in, rng, 0.05 * inner);
      const auto report = check_feasibility(in, x);
      std::set<ConstraintId> got;
      for (const auto& v : report.violations) got.insert(v.constraint);
      const auto expected = oracle::violated(in, x);
      CHECK_MESSAGE(got == expected, "checker: " << oracle::describe(got) << " oracle: " << oracle::describe(expected));
      CHECK(report.feasible() == got.empty());
      for (int e = 0; e < in.employees; ++e) {
        auto others = oracle::violated(in, x);
        others.erase(ConstraintId::kCover);
        if (others.empty()) CHECK(employee_feasible(in, x, e));
      }
      feasible_seen += report.feasible();
    }
  }
  // Also cover the positive side with brute-force optima.
  for (int seed = 0; seed < 10; ++seed) {
    const RosterInstance in = toy(static_cast<std::uint64_t>(seed));
    const auto bf = oracle::brute_force(in, ObjectiveWeights{});
    REQUIRE(bf.best.has_value());
    CHECK(check_feasibility(in, *bf.best).feasible());
    ++feasible_seen;
  }
  CHECK(feasible_seen > 0);
}

TEST_CASE("objective evaluation") {
  SUBCASE("exact targets give zero") {
    const RosterInstance base = toy(4);
    const auto bf = oracle::brute_force(base, ObjectiveWeights{});
    REQUIRE(bf.best);
    RosterInstance in = base;
    for (int e = 0; e < in.employees; ++e) {
      for (int k = 0; k < in.num_shift_types(); ++k) {
        in.workload_targets(e, k) = workload(in, *bf.best, e, k);
        in.weekend_targets(e, k) = weekend_workload(in, *bf.best, e, k);
      }
      for (int j = 0; j < in.blocks; ++j) in.preferences(e, j) = Preference::kNone;
    }
    const auto f = evaluate_objective(in, *bf.best, ObjectiveWeights{});
    CHECK(f.total == 0.0);
    CHECK(f.f1 == 0.0);
    CHECK(f.f1_max == 0.0);
    CHECK(f.f2 == 0.0);
    CHECK(f.f3 == 0.0);
  }
  SUBCASE("five shifts against a target of three") {
    RosterInstance in = single_row();
    in.workload_targets(0, 0) = 3.0;
    Roster x = Roster::empty_for(in);
    for (int d = 0; d < 5; ++d) x.set(0, 3 * d, 0, true);
    const auto f = evaluate_objective(in, x, ObjectiveWeights{});
    CHECK(f.f1 == doctest::Approx(2.0));
    CHECK(f.f1_max == doctest::Approx(2.0));
  }
  SUBCASE("matches the naive evaluator on random rosters") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
      const RosterInstance in = toy(static_cast<std::uint64_t>(trial % 20), 4, 1 + trial % 2, 1 + trial % 3);
      const Roster x = oracle::random_roster(in, rng, u(rng));
      const Roster c = oracle::random_roster(in, rng, u(rng));
      ObjectiveWeights w;
      for (int i = 0; i < 3; ++i) {
        w.lambda[static_cast<std::size_t>(i)] = u(rng);
        w.theta[static_cast<std::size_t>(i)] = u(rng);
      }
      w.gamma = u(rng);
      w.deviation_weight = 3.0 * u(rng);
      const auto plain = evaluate_objective(in, x, w);
      CHECK(plain.total == doctest::Approx(oracle::total(in, x, w)).epsilon(1e-12));
      CHECK_FALSE(plain.f4.has_value());
      const auto t = oracle::terms(in, x, &c, &c);
      const auto pattern = evaluate_objective(in, x, w, ObjectiveContext{nullptr, &c});
      REQUIRE(pattern.f4.has_value());
      CHECK(*pattern.f4 == doctest::Approx(t.f4));
      CHECK(pattern.total == doctest::Approx(oracle::total(in, x, w, &c)).epsilon(1e-12));
      const auto event = evaluate_objective(in, x, w, ObjectiveContext{&c, nullptr});
      REQUIRE(event.deviation.has_value());
      CHECK(*event.deviation == doctest::Approx(t.deviation));
      CHECK(event.total == doctest::Approx(oracle::total(in, x, w, nullptr, &c)).epsilon(1e-12));
      CHECK(plain.total >= 0.0);
    }
  }
}

TEST_CASE("employee quality sums to the separable terms") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const RosterInstance in = toy(static_cast<std::uint64_t>(trial), 3 + trial % 3, 1, 3);
    const Roster x = oracle::random_roster(in, rng, 0.4);
    const auto t = oracle::terms(in, x);
    double sum = 0.0;
    for (int e = 0; e < in.employees; ++e) {
      const double q = employee_quality(in, x, e);
      CHECK(q >= 0.0);
      sum += q;
    }
    CHECK(sum == doctest::Approx(t.f1 + t.f2 + t.f3).epsilon(1e-12));
  }
}

TEST_CASE("objective is permutation equivariant") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const RosterInstance in = toy(static_cast<std::uint64_t>(trial), 4, 1, 3);
    const Roster x = oracle::random_roster(in, rng, 0.5);
    std::vector<int> perm(static_cast<std::size_t>(in.employees));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    RosterInstance pin = in;
    Roster px = Roster::empty_for(in);
    for (auto& lacking : pin.no_license) lacking.clear();
    for (int e = 0; e < in.employees; ++e) {
      const int to = perm[static_cast<std::size_t>(e)];
      for (int j = 0; j < in.blocks; ++j) {
        pin.availability(to, j) = in.availability(e, j);
        pin.vacation(to, j) = in.vacation(e, j);
        pin.preferences(to, j) = in.preferences(e, j);
        for (int k = 0; k < in.num_shift_types(); ++k) px.set(to, j, k, x(e, j, k));
      }
      for (int k = 0; k < in.num_shift_types(); ++k) {
        pin.workload_targets(to, k) = in.workload_targets(e, k);
        pin.weekend_targets(to, k) = in.weekend_targets(e, k);
        if (!in.licensed(e, k)) pin.no_license[static_cast<std::size_t>(k)].push_back(to);
      }
    }
    CHECK(evaluate_objective(pin, px, ObjectiveWeights{}).total ==
          doctest::Approx(evaluate_objective(in, x, ObjectiveWeights{}).total).epsilon(1e-12));
    CHECK(check_feasibility(pin, px).feasible() == check_feasibility(in, x).feasible());
  }
}

TEST_CASE("default targets") {
  SUBCASE("equal split of fourteen all-day duties") {
    RosterInstance in;
    in.weeks = 2;
    in.employees = 3;
    in.blocks = 42;
    in.shift_types = {{"P", ShiftKind::kAllDay}};
    in.availability = Matrix<std::uint8_t>(3, 42, 1);
    in.vacation = Matrix<std::uint8_t>(3, 42, 0);
    in.preferences = Matrix<Preference>(3, 42, Preference::kNone);
    in.cover = Matrix<int>(42, 1, 1);
    in.workload_targets = Matrix<double>(3, 1, 0.0);
    in.weekend_targets = Matrix<double>(3, 1, 0.0);
    in.no_license = {{2}};
    for (int j = 0; j < 42; ++j) {
      if (is_weekend_day(day_of_block(j))) in.weekend_blocks.push_back(j);
      if (is_sunday(day_of_block(j))) in.sunday_blocks.push_back(j);
    }
    const Targets t = default_targets(in);
    CHECK(t.workload(0, 0) == doctest::Approx(7.0));
    CHECK(t.workload(1, 0) == doctest::Approx(7.0));
    CHECK(t.workload(2, 0) == 0.0);
    CHECK(t.weekend(0, 0) == doctest::Approx(2.0));
  }
  SUBCASE("base instance targets sum to the demanded duties") {
    const RosterInstance in = toy(1, 12, 8, 3);
    for (int k = 0; k < 3; ++k) {
      double demand = 0.0;
      for (int j = 0; j < in.blocks; ++j) demand += in.cover(j, k);
      demand /= in.shift_types[static_cast<std::size_t>(k)].span();
      double sum = 0.0;
      for (int e = 0; e < in.employees; ++e) sum += in.workload_targets(e, k);
      CHECK(sum == doctest::Approx(demand));
    }
  }
  SUBCASE("demand without licensed employees throws") {
    RosterInstance in = toy(1, 3, 1, 2);
    in.no_license[1] = {0, 1, 2};
    CHECK_THROWS_AS(default_targets(in), InvalidInputError);
  }
}

TEST_CASE("instance generator") {
  SUBCASE("deterministic per seed") {
    CHECK(toy(42, 12, 8, 3) == toy(42, 12, 8, 3));
    CHECK_FALSE(toy(42, 12, 8, 3) == toy(43, 12, 8, 3));
  }
  SUBCASE("base cover") {
    const RosterInstance in = toy(1, 12, 8, 3);
    CHECK(in.num_shift_types() == 3);
    for (int j = 0; j < in.blocks; ++j) {
      const int d = day_of_block(j);
      const bool weekend = is_weekend_day(d);
      CHECK(in.cover(j, 0) == ((weekend && j % 3 == 1) ? 0 : 1));
      CHECK(in.cover(j, 1) == 1);
      CHECK(in.cover(j, 2) == (weekend ? 0 : 1));
    }
  }
  SUBCASE("doubled team doubles cover") {
    const RosterInstance base = toy(1, 12, 8, 3);
    const RosterInstance big = toy(1, 24, 8, 3);
    for (int j = 0; j < base.blocks; ++j) {
      for (int k = 0; k < 3; ++k) CHECK(big.cover(j, k) == 2 * base.cover(j, k));
    }
  }
  SUBCASE("no preferences at density zero") {
    GeneratorConfig cfg;
    cfg.preference_density = 0.0;
    const RosterInstance in = generate_instance(cfg, 3);
    CHECK(std::all_of(in.preferences.data().begin(), in.preferences.data().end(),
                      [](Preference p) { return p == Preference::kNone; }));
  }
  SUBCASE("densities near the configured rates") {
    GeneratorConfig cfg;
    cfg.employees = 24;
    cfg.weeks = 16;
    const RosterInstance in = generate_instance(cfg, 5);
    double unavailable = 0, pref = 0, favor = 0;
    for (int e = 0; e < in.employees; ++e) {
      for (int j = 0; j < in.blocks; ++j) {
        unavailable += in.availability(e, j) == 0;
        pref += in.preferences(e, j) != Preference::kNone;
        favor += in.preferences(e, j) == Preference::kFor;
      }
    }
    const double cells = static_cast<double>(in.employees) * in.blocks;
    CHECK(unavailable / cells == doctest::Approx(0.05).epsilon(0.4));
    CHECK(pref / cells == doctest::Approx(0.2).epsilon(0.1));
    CHECK(favor / pref == doctest::Approx(0.5).epsilon(0.1));
    const int vac = horizon_vacation_days(cfg);
    for (int e = 0; e < in.employees; ++e) {
      int days = 0;
      for (int j = 0; j < in.blocks; j += 3) days += in.vacation(e, j);
      CHECK(days == vac);
    }
  }
  SUBCASE("too much vacation is rejected") {
    GeneratorConfig cfg;
    cfg.weeks = 1;
    cfg.vacation_days = 8;
    CHECK_THROWS_AS(generate_instance(cfg, 1), InvalidInputError);
  }
  SUBCASE("week slices keep the data") {
    const RosterInstance in = toy(2, 6, 4, 3);
    const RosterInstance part = slice_weeks(in, 1, 2);
    CHECK(part.blocks == 42);
    CHECK(validate_instance(part).ok());
    for (int j = 0; j < part.blocks; ++j) {
      CHECK(part.availability(3, j) == in.availability(3, 21 + j));
      CHECK(part.cover(j, 0) == in.cover(21 + j, 0));
    }
  }
}

TEST_CASE("statistics") {
  const RosterInstance in = toy(6);
  const auto bf = oracle::brute_force(in, ObjectiveWeights{});
  REQUIRE(bf.best);
  const auto stats = compute_statistics(in, *bf.best);
  REQUIRE(stats.employees.size() == 3u);
  int met = 0, slots = 0;
  for (int e = 0; e < in.employees; ++e) {
    const auto& es = stats.employees[static_cast<std::size_t>(e)];
    CHECK(es.rest_days == count_rest_days(in, *bf.best, e));
    met += es.preferences_met;
    slots += es.preference_slots;
  }
  CHECK(slots - met == doctest::Approx(evaluate_objective(in, *bf.best, ObjectiveWeights{}).f3));
}
