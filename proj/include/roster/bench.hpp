#pragma once

#include <atomic>
#include <optional>
#include <string>
#include <vector>

#include "roster/generator.hpp"
#include "roster/hybrid.hpp"

namespace roster {

inline GeneratorConfig default_bench_instance() {
  GeneratorConfig g;
  g.employees = 6;
  g.weeks = 4;
  return g;
}

struct BenchConfig {
  GeneratorConfig instance = default_bench_instance();
  int trials = 5;
  std::vector<SolveMode> modes{SolveMode::kHybrid, SolveMode::kMilpAlone};
  std::vector<double> gaps{0.50, 0.20, 0.10, 0.05, 0.03, 0.01};
  double time_limit = 60.0;  // per run, seconds
  double phase1_time_budget = 30.0;
  std::uint64_t seed = 1;    // first instance seed
  int max_seed_attempts = 0;  // 0: 4 * trials

  void validate() const;
};

struct BenchRun {
  SolveMode mode = SolveMode::kHybrid;
  int trial = 0;
  std::uint64_t seed = 0;
  OptimizationStatus status = OptimizationStatus::kNoSolution;
  double objective = kInf;
  double gap = kInf;
  double elapsed = 0.0;
  std::vector<ProgressEvent> trace;
};

struct BenchCell {
  std::optional<double> mean_time;  // over the runs that reached the gap
  int reached = 0;
  int runs = 0;
};

struct BenchRow {
  double gap = 0.0;
  std::vector<BenchCell> cells;  // one per mode
};

struct BenchReport {
  BenchConfig config;
  std::vector<BenchRun> runs;
  std::vector<std::uint64_t> skipped_seeds;  // proven infeasible
  std::vector<BenchRow> rows;
};

// Time of the first trace event whose recomputed gap is at most `gap`.
std::optional<double> time_to_gap(const std::vector<ProgressEvent>& trace, double gap);

// Rows from the stored traces alone.
std::vector<BenchRow> tabulate(const BenchConfig& config, const std::vector<BenchRun>& runs);

// Trials use consecutive instance seeds; seeds whose instance is proven
// infeasible are skipped for every mode. Each run targets the smallest gap.
BenchReport run_benchmark(const BenchConfig& config, const std::function<void(const BenchRun&)>& on_run = {},
                          const std::atomic<bool>* cancel = nullptr);

// Fixed-width gap-vs-time table.
std::string format_table(const BenchReport& report);

}  // namespace roster
