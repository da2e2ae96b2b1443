// Acceptance run: one PASS/FAIL line per headline criterion. Exit status is
// nonzero when any criterion fails.
#include <chrono>
#include <cstdio>
#include <map>
#include <random>
#include <set>

#include "oracles.hpp"
#include "roster/bench.hpp"
#include "roster/extensions.hpp"
#include "roster/generator.hpp"
#include "roster/hybrid.hpp"

using namespace roster;

namespace {

// Tolerances and sizes.
constexpr int kOracleInstances = 20;
constexpr double kOracleGap = 0.01;
constexpr double kOracleSeconds = 60.0;
constexpr double kBoundSlack = 1e-7;
constexpr double kModelBand = 0.5;
constexpr double kReferenceContinuous = 6500, kReferenceInteger = 8000, kReferenceRows = 40000;
constexpr int kRelaxFixTrials = 10, kRelaxFixWins = 7;
constexpr double kRelaxFixPhase1 = 10.0;
constexpr int kPropertyCases = 1000;
constexpr int kRollingSeeds = 10;
constexpr int kEventToys = 10;
constexpr int kPatternToys = 5;
constexpr double kBenchMinutes = 30.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

RosterInstance toy(std::uint64_t seed, int employees = 3, int weeks = 1, int shift_types = 2) {
  GeneratorConfig cfg;
  cfg.employees = employees;
  cfg.weeks = weeks;
  cfg.shift_types = shift_types;
  return generate_instance(cfg, seed);
}

HybridConfig exact() {
  HybridConfig cfg;
  cfg.gap_target = 1e-7;
  cfg.total_time_limit = 60;
  return cfg;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Every roster any operation produced, checked by the independent oracle.
struct FeasibilityLedger {
  std::map<std::string, std::pair<int, int>> by_source;  // checked, infeasible

  void check(const std::string& source, const RosterInstance& in, const Roster& x) {
    auto& [checked, bad] = by_source[source];
    ++checked;
    if (!oracle::feasible(in, x)) ++bad;
  }
  Outcome outcome() const {
    Outcome o{true, ""};
    for (const auto& [source, counts] : by_source) {
      o.pass = o.pass && counts.second == 0 && counts.first > 0;
      o.detail += source + " " + std::to_string(counts.first - counts.second) + "/" + std::to_string(counts.first) + ", ";
    }
    for (const char* required : {"bnb-pool", "local-search", "offspring", "final", "event", "rolling", "pattern"}) {
      if (!by_source.count(required)) {
        o.pass = false;
        o.detail += std::string("no ") + required + " rosters, ";
      }
    }
    if (!o.detail.empty()) o.detail.resize(o.detail.size() - 2);
    return o;
  }
};

// Monotonicity of every trace seen, and bound validity where the optimum is known.
struct TraceLedger {
  int traces = 0, events = 0;
  std::vector<std::string> problems;

  void check(const std::string& name, const std::vector<ProgressEvent>& trace, double optimum = kInf) {
    ++traces;
    for (std::size_t i = 0; i < trace.size(); ++i) {
      ++events;
      const ProgressEvent& ev = trace[i];
      if (std::isfinite(optimum) && ev.bound > optimum + kBoundSlack * std::max(1.0, std::abs(optimum))) {
        problems.push_back(name + ": bound " + std::to_string(ev.bound) + " above optimum " + std::to_string(optimum));
      }
      if (i == 0) continue;
      if (ev.incumbent > trace[i - 1].incumbent) problems.push_back(name + ": incumbent rose at event " + std::to_string(i));
      if (ev.bound < trace[i - 1].bound) problems.push_back(name + ": bound fell at event " + std::to_string(i));
    }
  }
};

FeasibilityLedger g_feasible;
TraceLedger g_traces;

ProgressSink sink_into(std::vector<ProgressEvent>* trace) {
  return [trace](const ProgressEvent& ev) { trace->push_back(ev); };
}

// Brute-force optimum instances shared by several criteria.
struct Solved {
  RosterInstance instance;
  oracle::BruteForceResult exact;
};

const std::vector<Solved>& brute_forced() {
  static const std::vector<Solved> cache = [] {
    std::vector<Solved> out;
    for (std::uint64_t seed = 0; static_cast<int>(out.size()) < kOracleInstances && seed < 200; ++seed) {
      Solved s{toy(seed), {}};
      s.exact = oracle::brute_force(s.instance, ObjectiveWeights{});
      if (s.exact.best) out.push_back(std::move(s));
    }
    return out;
  }();
  return cache;
}

Outcome oracle_optimality() {
  const auto& solved = brute_forced();
  int within = 0;
  double slowest = 0.0, worst_gap = 0.0;
  for (const Solved& s : solved) {
    HybridConfig cfg;
    cfg.gap_target = kOracleGap;
    cfg.total_time_limit = kOracleSeconds;
    std::vector<ProgressEvent> trace;
    const auto start = Clock::now();
    const OptimizationResult r = optimize(s.instance, ObjectiveWeights{}, cfg, sink_into(&trace));
    const double took = seconds_since(start);
    slowest = std::max(slowest, took);
    g_traces.check("oracle instance", trace, s.exact.objective);
    g_traces.check("oracle result trace", r.trace, s.exact.objective);
    if (!r.roster) continue;
    g_feasible.check("final", s.instance, *r.roster);
    const double gap = compute_gap(r.objective, s.exact.objective);
    worst_gap = std::max(worst_gap, gap);
    if (gap <= kOracleGap + 1e-12 && took < kOracleSeconds) ++within;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d/%zu instances within %.0f%% of the brute-force optimum, worst gap %.4f%%, slowest %.2fs",
                within, solved.size(), 100 * kOracleGap, 100 * worst_gap, slowest);
  return {static_cast<int>(solved.size()) >= kOracleInstances && within == static_cast<int>(solved.size()), buf};
}

// Pool, local-search and offspring rosters on four-employee instances.
void operation_outputs() {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const RosterInstance in = toy(seed, 4, 1, 2);
    const BuiltModel built = build_milp(in, ObjectiveWeights{});
    BnbConfig cfg;
    cfg.node_limit = 400;
    BranchAndBound bnb(built.model, cfg);
    bnb.run();
    std::vector<Roster> pool;
    for (const auto& s : bnb.pool().members()) {
      pool.push_back(extract_roster(built.map, s.x));
      g_feasible.check("bnb-pool", in, pool.back());
    }
    if (pool.empty()) continue;
    SearchContext ctx;
    ctx.instance = &in;
    std::mt19937_64 rng(seed);
    for (const Roster& x : pool) {
      const ScoredRoster out = improve(ctx, ScoredRoster{x, ctx.evaluate(x)}, 200, rng);
      g_feasible.check("local-search", in, out.roster);
    }
    for (int t = 0; t < 30 && pool.size() >= 2; ++t) {
      std::vector<const Roster*> parents{&pool[rng() % pool.size()], &pool[rng() % pool.size()]};
      if (pool.size() > 2) parents.push_back(&pool[rng() % pool.size()]);
      if (const auto child = combine(ctx, parents, rng)) g_feasible.check("offspring", in, *child);
    }
  }
}

Outcome gap_semantics() {
  const double g = compute_gap(100, 80);
  Outcome o;
  o.pass = g == 0.20 && g_traces.problems.empty() && g_traces.traces > 0;
  o.detail = "compute_gap(100, 80) = " + std::to_string(g) + "; " + std::to_string(g_traces.traces) + " traces, " +
             std::to_string(g_traces.events) + " events, " + std::to_string(g_traces.problems.size()) + " violations";
  if (!g_traces.problems.empty()) o.detail += " (first: " + g_traces.problems.front() + ")";
  return o;
}

Outcome model_fidelity() {
  const BuiltModel built = build_milp(toy(1, 12, 8, 3), ObjectiveWeights{});
  const ModelStats st = built.model.stats();
  const auto near = [](double value, double reference) {
    return value >= (1 - kModelBand) * reference && value <= (1 + kModelBand) * reference;
  };
  char buf[200];
  std::snprintf(buf, sizeof buf, "continuous %d (vs %.0f), integer %d (vs %.0f), constraints %d (vs %.0f), band +/-%.0f%%",
                st.continuous, kReferenceContinuous, st.integer, kReferenceInteger, st.rows, kReferenceRows, 100 * kModelBand);
  return {near(st.continuous, kReferenceContinuous) && near(st.integer, kReferenceInteger) && near(st.rows, kReferenceRows), buf};
}

Outcome rest_days() {
  // One employee, one eight-hour type. Only the first three days are open;
  // the rest of the week is occupied.
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
  const auto schedule = [&](std::initializer_list<int> worked) {
    Roster x = Roster::empty_for(in);
    for (int j : worked) x.set(0, j, 0, true);
    for (int j = 9; j < 21; ++j) x.set(0, j, 0, true);
    return count_rest_days(in, x, 0);
  };
  const int morning_then_afternoon = schedule({0, 7});
  const int two_afternoons = schedule({1, 7});
  return {morning_then_afternoon == 2 && two_afternoons == 1,
          "morning day 1 + afternoon day 3: " + std::to_string(morning_then_afternoon) +
              " rest days; afternoons days 1 and 3: " + std::to_string(two_afternoons)};
}

// Best phase-1 population objective; the pipeline is stopped once scatter
// search starts.
std::optional<double> initial_best(const RosterInstance& in, bool relax_fix) {
  HybridConfig cfg;
  cfg.use_relax_and_fix = relax_fix;
  cfg.phase1_time_budget = kRelaxFixPhase1;
  cfg.total_time_limit = 4 * kRelaxFixPhase1;
  std::atomic<bool> stop{false};
  const OptimizationResult r = optimize(in, ObjectiveWeights{}, cfg, [&](const ProgressEvent& ev) {
    if (ev.phase == Phase::kScatter) stop = true;
  }, &stop);
  for (const ScoredRoster& s : r.initial_population) g_feasible.check("initial-population", in, s.roster);
  if (r.initial_population.empty()) return std::nullopt;
  return r.initial_population.front().objective;
}

Outcome relax_and_fix() {
  int trials = 0, wins = 0;
  std::string values;
  for (std::uint64_t seed = 1; trials < kRelaxFixTrials && seed < 40; ++seed) {
    const RosterInstance in = toy(seed, 6, 2, 3);
    const auto with = initial_best(in, true);
    const auto without = initial_best(in, false);
    if (!with && !without) continue;  // infeasible instance
    ++trials;
    const bool win = with && (!without || *with <= *without + 1e-9);
    wins += win;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s%.3f/%.3f", values.empty() ? "" : " ", with ? *with : kInf,
                  without ? *without : kInf);
    values += buf;
  }
  return {trials == kRelaxFixTrials && wins >= kRelaxFixWins,
          std::to_string(wins) + "/" + std::to_string(trials) + " trials with relax-and-fix no worse (with/without: " +
              values + ")"};
}

// The five scatter-search properties, each on randomized cases.
Outcome scatter_properties() {
  std::mt19937_64 rng(2024);
  std::map<std::string, std::pair<int, int>> stats;  // cases, failures
  const auto record = [&](const std::string& name, bool ok) {
    ++stats[name].first;
    if (!ok) ++stats[name].second;
  };
  const auto tiny = [&] {
    Roster x(2, 3, 1);
    for (int j = 0; j < 3; ++j) {
      if (rng() % 3 == 0) x.set(static_cast<int>(rng() % 2), j, 0, true);
    }
    return x;
  };

  // Replacement and duplicates against a naive reference set.
  while (stats["strictly-better replacement"].first < kPropertyCases ||
         stats["duplicate rejection"].first < kPropertyCases) {
    const int capacity = 1 + static_cast<int>(rng() % 5);
    RefSet refset(capacity);
    std::vector<std::pair<Roster, double>> naive;
    for (int step = 0; step < 12; ++step) {
      const Roster x = tiny();
      const double f = static_cast<double>(rng() % 8);
      bool duplicate = false;
      for (const auto& [r, v] : naive) duplicate = duplicate || r == x;
      const bool changed = update_refset(refset, ScoredRoster{x, f});
      if (duplicate) {
        record("duplicate rejection", !changed);
        continue;
      }
      if (static_cast<int>(naive.size()) < capacity) {
        naive.emplace_back(x, f);
        continue;
      }
      // Among equally bad members the latest one goes.
      auto worst = naive.begin();
      for (auto it = naive.begin(); it != naive.end(); ++it) {
        if (it->second >= worst->second) worst = it;
      }
      const bool expect = f < worst->second;
      record("strictly-better replacement", changed == expect);
      if (expect) {
        naive.erase(worst);
        naive.emplace_back(x, f);
      }
    }
  }

  // Subsets contain a new member and follow the size rule.
  for (int c = 0; c < kPropertyCases; ++c) {
    const int r = static_cast<int>(rng() % 7);
    std::vector<bool> is_new(static_cast<std::size_t>(r));
    RefSet refset(std::max(r, 1));
    for (int i = 0; i < r; ++i) is_new[i] = rng() % 3 == 0;
    std::vector<Roster> xs;
    for (int i = 0; i < r; ++i) {
      Roster x(1, 8, 1);
      x.set(0, i, 0, true);
      xs.push_back(x);
      if (!is_new[i]) refset.update(x, i);
    }
    generate_subsets(refset);
    for (int i = 0; i < r; ++i) {
      if (is_new[i]) refset.update(xs[i], i);
    }
    std::set<std::vector<int>> expected;
    for (int mask = 0; mask < (1 << r); ++mask) {
      std::vector<int> members;
      for (int i = 0; i < r; ++i) {
        if (mask & (1 << i)) members.push_back(i);
      }
      const int t = static_cast<int>(members.size());
      bool prefix = t >= 2, any_new = false;
      for (int i = 0; prefix && i < t - 2; ++i) prefix = mask & (1 << i);
      for (int i : members) any_new = any_new || is_new[i];
      if (prefix && any_new) expected.insert(members);
    }
    const auto got = generate_subsets(refset);
    record("new-flag subset filtering", std::set<std::vector<int>>(got.begin(), got.end()) == expected &&
                                            got.size() == expected.size());
  }

  // Offspring inheritance and swap invariance on enumerable instances.
  std::vector<std::pair<RosterInstance, std::vector<Roster>>> pools;
  for (std::uint64_t seed = 0; pools.size() < 6 && seed < 40; ++seed) {
    std::vector<Roster> all;
    const RosterInstance in = toy(seed);
    oracle::brute_force(in, ObjectiveWeights{}, nullptr, -1, nullptr, &all);
    if (all.size() >= 8) pools.emplace_back(in, std::move(all));
  }
  const auto day = [](const Roster& x, int e, int d) {
    return std::array<int, 3>{x.shift_at(e, 3 * d), x.shift_at(e, 3 * d + 1), x.shift_at(e, 3 * d + 2)};
  };
  const auto column_sums = [](const Roster& x) {
    std::vector<int> sums(static_cast<std::size_t>(x.blocks() * x.shift_types()), 0);
    for (int e = 0; e < x.employees(); ++e) {
      for (int j = 0; j < x.blocks(); ++j) {
        for (int k = 0; k < x.shift_types(); ++k) sums[j * x.shift_types() + k] += x(e, j, k);
      }
    }
    return sums;
  };
  for (int c = 0; !pools.empty() && stats["unanimous inheritance"].first < kPropertyCases; ++c) {
    const auto& [in, all] = pools[c % pools.size()];
    SearchContext ctx;
    ctx.instance = &in;
    std::vector<const Roster*> parents;
    const int count = 2 + static_cast<int>(rng() % 3);
    for (int i = 0; i < count; ++i) parents.push_back(&all[rng() % all.size()]);
    const auto child = combine(ctx, parents, rng);
    if (!child) continue;
    g_feasible.check("offspring", in, *child);
    bool ok = true;
    for (int e = 0; e < in.employees; ++e) {
      for (int d = 0; d < in.days(); ++d) {
        bool unanimous = true;
        for (const Roster* p : parents) unanimous = unanimous && day(*p, e, d) == day(*parents[0], e, d);
        if (unanimous) ok = ok && day(*child, e, d) == day(*parents[0], e, d);
      }
    }
    record("unanimous inheritance", ok);
  }
  for (int c = 0; !pools.empty() && c < kPropertyCases; ++c) {
    const auto& [in, all] = pools[c % pools.size()];
    SearchContext ctx;
    ctx.instance = &in;
    const Roster& start = all[rng() % all.size()];
    const double f0 = ctx.evaluate(start);
    const ScoredRoster out = improve(ctx, ScoredRoster{start, f0}, 1 + static_cast<int>(rng() % 60), rng);
    g_feasible.check("local-search", in, out.roster);
    record("swap cover invariance", column_sums(out.roster) == column_sums(start) && out.objective <= f0);
  }

  Outcome o{stats.size() == 5, ""};
  for (const auto& [name, counts] : stats) {
    o.pass = o.pass && counts.first >= kPropertyCases && counts.second == 0;
    o.detail += name + " " + std::to_string(counts.first - counts.second) + "/" + std::to_string(counts.first) + ", ";
  }
  o.detail.resize(o.detail.size() - 2);
  return o;
}

Outcome rolling_horizon() {
  double adaptive_sum = 0.0, fixed_sum = 0.0;
  int planned = 0;
  std::string failures;
  for (std::uint64_t seed = 1; planned < kRollingSeeds && seed < 40; ++seed) {
    const RosterInstance annual = toy(seed, 6, 8, 2);
    HybridConfig cfg;
    cfg.gap_target = 0.01;
    cfg.phase1_time_budget = 2;
    cfg.total_time_limit = 5;
    std::map<int, std::vector<ProgressEvent>> traces;
    const auto sink = [&](int period, const ProgressEvent& ev) { traces[period].push_back(ev); };
    const RollingPlan adaptive = plan_rolling_horizon(annual, 4, ObjectiveWeights{}, cfg, true, sink);
    for (const auto& [p, t] : traces) g_traces.check("rolling period", t);
    traces.clear();
    const RollingPlan fixed = plan_rolling_horizon(annual, 4, ObjectiveWeights{}, cfg, false, sink);
    for (const auto& [p, t] : traces) g_traces.check("rolling period", t);
    for (const RollingPlan* plan : {&adaptive, &fixed}) {
      for (const PeriodPlan& p : plan->periods) g_feasible.check("rolling", p.instance, p.roster);
    }
    if (!adaptive.complete() || !fixed.complete()) {
      failures += " seed " + std::to_string(seed);
      continue;
    }
    adaptive_sum += standard_deviation(adaptive.annual_weekend_workload());
    fixed_sum += standard_deviation(fixed.annual_weekend_workload());
    ++planned;
  }
  const double a = planned ? adaptive_sum / planned : kInf, f = planned ? fixed_sum / planned : kInf;
  char buf[200];
  std::snprintf(buf, sizeof buf, "mean weekend-workload std over %d seeds: adaptive %.4f, non-adaptive %.4f%s%s", planned,
                a, f, failures.empty() ? "" : "; skipped incomplete plans:", failures.c_str());
  return {planned == kRollingSeeds && a <= f + 1e-9, buf};
}

int first_worked_day(const Roster& x, int e, int from_day) {
  for (int d = from_day; d < x.blocks() / 3; ++d) {
    for (int b = 0; b < 3; ++b) {
      if (x.works(e, 3 * d + b)) return d;
    }
  }
  return -1;
}

Outcome event_driven() {
  const ObjectiveWeights w;
  // No-op: a change that restates the current value.
  int noop_zero = 0, noop_cases = 0;
  for (const Solved& s : brute_forced()) {
    if (noop_cases == 5) break;
    const RosterInstance& in = s.instance;
    const ChangeRequest same{0, ChangeKind::kVacation, {9}, {in.vacation(0, 9)}, 9};
    std::vector<ProgressEvent> trace;
    const EventResult r = reoptimize_event(in, *s.exact.best, {same}, w, exact(), sink_into(&trace));
    g_traces.check("event", trace);
    ++noop_cases;
    noop_zero += r.deviation == 0 && r.result.roster && *r.result.roster == *s.exact.best;
  }
  // Single vacation: deviation against a from-scratch optimum of the updated instance.
  int compared = 0, minimal = 0;
  for (const Solved& s : brute_forced()) {
    if (compared == kEventToys) break;
    const Roster& original = *s.exact.best;
    const int d = first_worked_day(original, 0, 2);
    if (d < 0) continue;
    const ChangeRequest c{0, ChangeKind::kVacation, {3 * d, 3 * d + 1, 3 * d + 2}, {1, 1, 1}, 3 * d};
    const RosterInstance updated = apply_changes(s.instance, {c});
    const auto scratch = oracle::brute_force(updated, w);
    if (!scratch.best) continue;
    std::vector<ProgressEvent> trace;
    const EventResult r = reoptimize_event(s.instance, original, {c}, w, exact(), sink_into(&trace));
    g_traces.check("event", trace);
    if (!r.result.roster) continue;
    g_feasible.check("event", updated, *r.result.roster);
    ++compared;
    minimal += r.deviation <= scratch.best->hamming_distance(original);
  }
  return {noop_cases > 0 && noop_zero == noop_cases && compared == kEventToys && minimal == compared,
          "no-op deviation 0 in " + std::to_string(noop_zero) + "/" + std::to_string(noop_cases) +
              "; vacation deviation <= from-scratch in " + std::to_string(minimal) + "/" + std::to_string(compared)};
}

WorkPattern mixed_pattern() {
  WorkPattern p;
  const DayLabel cycle[] = {DayLabel::kMorning, DayLabel::kAfternoon, DayLabel::kNight, DayLabel::kRest,
                            DayLabel::kOnCall,  DayLabel::kRest,      DayLabel::kMorning};
  for (int week = 0; week < 8; ++week) {
    std::array<DayLabel, 7> row{};
    for (int d = 0; d < 7; ++d) row[static_cast<std::size_t>(d)] = cycle[(d + week) % 7];
    p.grid.push_back(row);
  }
  return p;
}

bool same_coefficients(const MilpModel& a, const MilpModel& b) {
  return a.cost == b.cost && a.cost_offset == b.cost_offset && a.col_lower == b.col_lower &&
         a.col_upper == b.col_upper && a.integral == b.integral && a.row_start == b.row_start &&
         a.row_index == b.row_index && a.row_value == b.row_value && a.row_lower == b.row_lower &&
         a.row_upper == b.row_upper;
}

Outcome patterns() {
  int swept = 0, monotone = 0, identical = 0;
  std::string values;
  for (std::uint64_t seed = 0; swept < kPatternToys && seed < 40; ++seed) {
    const RosterInstance in = toy(seed, 4);
    std::vector<double> f4;
    for (double gamma : {0.0, 0.5, 1.0}) {
      ObjectiveWeights w;
      w.gamma = gamma;
      std::vector<ProgressEvent> trace;
      const PatternResult r = optimize_with_patterns(in, mixed_pattern(), w, exact(), sink_into(&trace));
      g_traces.check("pattern", trace);
      if (!r.result.roster) break;
      g_feasible.check("pattern", in, *r.result.roster);
      f4.push_back(r.f4);
      if (gamma == 1.0) identical += same_coefficients(build_pattern_stage2(in, r.company, w).model, build_milp(in, w).model);
    }
    if (f4.size() != 3) continue;
    ++swept;
    monotone += f4[0] <= f4[1] + 1e-9 && f4[1] <= f4[2] + 1e-9;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s%g<=%g<=%g", values.empty() ? "" : " ", f4[0], f4[1], f4[2]);
    values += buf;
  }
  return {swept == kPatternToys && monotone == swept && identical == swept,
          "f4 monotone in " + std::to_string(monotone) + "/" + std::to_string(swept) + " (" + values +
              "); gamma=1 model identical to base in " + std::to_string(identical) + "/" + std::to_string(swept)};
}

Outcome bench() {
  BenchConfig cfg;
  const auto start = Clock::now();
  const BenchReport report = run_benchmark(cfg, [](const BenchRun& run) {
    std::fprintf(stderr, "  bench %s trial %d: %s, gap %.4f%%, %.1fs\n", to_string(run.mode), run.trial,
                 to_string(run.status), 100 * run.gap, run.elapsed);
    g_traces.check("bench", run.trace);
  });
  const double minutes = seconds_since(start) / 60.0;
  bool ok = report.rows.size() == 6 && minutes < kBenchMinutes;
  const std::vector<double> thresholds{0.5, 0.2, 0.1, 0.05, 0.03, 0.01};
  const std::vector<BenchRow> recomputed = tabulate(report.config, report.runs);
  for (std::size_t i = 0; ok && i < report.rows.size(); ++i) {
    ok = report.rows[i].gap == thresholds[i] && report.rows[i].cells.size() == 2;
    for (std::size_t m = 0; ok && m < report.rows[i].cells.size(); ++m) {
      const BenchCell& cell = report.rows[i].cells[m];
      ok = cell.runs == cfg.trials && cell.reached == recomputed[i].cells[m].reached &&
           cell.mean_time == recomputed[i].cells[m].mean_time;
    }
  }
  for (const BenchRun& run : report.runs) {
    // Gaps agree with the trace they came from.
    if (run.trace.empty()) continue;
    const ProgressEvent& last = run.trace.back();
    if (std::isfinite(last.incumbent) && compute_gap(last.incumbent, last.bound) != last.gap) ok = false;
  }
  std::fprintf(stderr, "%s", format_table(report).c_str());
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu rows x %zu modes, %d trials, %zu runs, %.1f min (limit %.0f)", report.rows.size(),
                cfg.modes.size(), cfg.trials, report.runs.size(), minutes, kBenchMinutes);
  return {ok, buf};
}

}  // namespace

int main(int argc, char** argv) {
  // --only NAME runs a single criterion (plus the two that aggregate over all runs).
  const std::string only = argc > 2 && std::string(argv[1]) == "--only" ? argv[2] : "";
  std::vector<std::pair<std::string, Outcome>> lines;
  const auto run = [&](const std::string& name, Outcome (*f)()) {
    if (!only.empty() && name != only) return;
    const auto start = Clock::now();
    Outcome o = f();
    std::fprintf(stderr, "[%s: %.1fs]\n", name.c_str(), seconds_since(start));
    lines.emplace_back(name, std::move(o));
  };
  run("oracle optimality", oracle_optimality);
  run("model fidelity", model_fidelity);
  run("rest-day fidelity", rest_days);
  run("relax-and-fix effect", relax_and_fix);
  run("scatter-search properties", scatter_properties);
  run("rolling horizon", rolling_horizon);
  run("event-driven", event_driven);
  run("pattern monotonicity", patterns);
  run("benchmark harness", bench);
  operation_outputs();
  lines.emplace_back("gap semantics", gap_semantics());
  lines.emplace_back("feasibility suite", g_feasible.outcome());

  const std::vector<std::string> order{"oracle optimality",     "feasibility suite",       "gap semantics",
                                       "model fidelity",        "rest-day fidelity",       "relax-and-fix effect",
                                       "scatter-search properties", "rolling horizon",     "event-driven",
                                       "pattern monotonicity",  "benchmark harness"};
  int failed = 0;
  for (const std::string& name : order) {
    for (const auto& [n, o] : lines) {
      if (n != name) continue;
      std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", n.c_str(), o.detail.c_str());
      failed += !o.pass;
    }
  }
  return failed == 0 ? 0 : 1;
}
