#include "roster/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "roster/bnb.hpp"

namespace roster {

void BenchConfig::validate() const {
  if (trials < 1) throw InvalidInputError("trials must be at least 1");
  if (modes.empty()) throw InvalidInputError("at least one mode is required");
  if (gaps.empty()) throw InvalidInputError("at least one gap threshold is required");
  for (double g : gaps) {
    if (!(g > 0.0 && g <= 1.0)) throw InvalidInputError("gap thresholds must lie in (0, 1]");
  }
  if (!(time_limit > 0.0)) throw InvalidInputError("time_limit must be positive");
  if (!(phase1_time_budget > 0.0)) throw InvalidInputError("phase1_time_budget must be positive");
  if (max_seed_attempts < 0) throw InvalidInputError("max_seed_attempts must be nonnegative");
}

std::optional<double> time_to_gap(const std::vector<ProgressEvent>& trace, double gap) {
  for (const ProgressEvent& ev : trace) {
    if (!std::isfinite(ev.incumbent) || !std::isfinite(ev.bound)) continue;
    if (compute_gap(ev.incumbent, ev.bound) <= gap) return ev.elapsed;
  }
  return std::nullopt;
}

std::vector<BenchRow> tabulate(const BenchConfig& config, const std::vector<BenchRun>& runs) {
  std::vector<BenchRow> rows;
  for (double g : config.gaps) {
    BenchRow row;
    row.gap = g;
    for (SolveMode mode : config.modes) {
      BenchCell cell;
      double sum = 0.0;
      for (const BenchRun& run : runs) {
        if (run.mode != mode) continue;
        ++cell.runs;
        if (const auto t = time_to_gap(run.trace, g)) {
          ++cell.reached;
          sum += *t;
        }
      }
      if (cell.reached > 0) cell.mean_time = sum / cell.reached;
      row.cells.push_back(cell);
    }
    rows.push_back(row);
  }
  return rows;
}

BenchReport run_benchmark(const BenchConfig& config, const std::function<void(const BenchRun&)>& on_run,
                          const std::atomic<bool>* cancel) {
  config.validate();
  BenchReport report;
  report.config = config;
  const double target = *std::min_element(config.gaps.begin(), config.gaps.end());
  const int attempts = config.max_seed_attempts > 0 ? config.max_seed_attempts : 4 * config.trials;

  int trial = 0;
  for (int a = 0; a < attempts && trial < config.trials; ++a) {
    if (cancel && cancel->load()) break;
    const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(a);
    const RosterInstance instance = generate_instance(config.instance, seed);
    std::vector<BenchRun> runs;
    bool infeasible = false;
    for (SolveMode mode : config.modes) {
      HybridConfig hc;
      hc.mode = mode;
      hc.gap_target = target;
      hc.total_time_limit = config.time_limit;
      hc.phase1_time_budget = std::min(config.phase1_time_budget, config.time_limit);
      hc.seed = seed;
      BenchRun run;
      run.mode = mode;
      run.trial = trial;
      run.seed = seed;
      try {
        const OptimizationResult r = optimize(instance, ObjectiveWeights{}, hc, {}, cancel);
        run.status = r.status;
        run.objective = r.objective;
        run.gap = r.gap;
        run.elapsed = r.timings.total;
        run.trace = r.trace;
      } catch (const InvalidInputError&) {
        // validate_instance rejected the instance: treat it like a proven infeasible one.
        run.status = OptimizationStatus::kInfeasible;
      }
      if (run.status == OptimizationStatus::kInfeasible) {
        infeasible = true;
        break;
      }
      runs.push_back(std::move(run));
    }
    if (infeasible) {
      report.skipped_seeds.push_back(seed);
      continue;
    }
    for (BenchRun& run : runs) {
      if (on_run) on_run(run);
      report.runs.push_back(std::move(run));
    }
    ++trial;
  }
  report.rows = tabulate(config, report.runs);
  return report;
}

std::string format_table(const BenchReport& report) {
  std::ostringstream os;
  char buf[64];
  os << "Mean time (s) to reach each optimality gap, " << report.config.instance.employees << " employees, "
     << report.config.instance.weeks << " weeks, " << report.config.trials << " trials\n";
  std::snprintf(buf, sizeof buf, "%-16s", "Optimality gap");
  os << buf;
  for (SolveMode m : report.config.modes) {
    std::snprintf(buf, sizeof buf, "%18s", m == SolveMode::kHybrid ? "hybrid" : "milp-alone");
    os << buf;
  }
  os << '\n';
  for (const BenchRow& row : report.rows) {
    std::snprintf(buf, sizeof buf, "%-16s", (std::to_string(static_cast<int>(std::lround(row.gap * 100))) + "%").c_str());
    os << buf;
    for (const BenchCell& c : row.cells) {
      std::string cell = "-";
      if (c.mean_time) {
        std::snprintf(buf, sizeof buf, "%.2f", *c.mean_time);
        cell = buf;
      }
      if (c.reached < c.runs) cell += " (" + std::to_string(c.reached) + "/" + std::to_string(c.runs) + ")";
      std::snprintf(buf, sizeof buf, "%18s", cell.c_str());
      os << buf;
    }
    os << '\n';
  }
  if (!report.skipped_seeds.empty()) {
    os << "skipped infeasible seeds:";
    for (auto s : report.skipped_seeds) os << ' ' << s;
    os << '\n';
  }
  return os.str();
}

}  // namespace roster
