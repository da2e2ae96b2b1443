#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "roster/milp.hpp"

namespace roster {

enum class LpStatus : std::uint8_t {
  kOptimal,
  kInfeasible,
  kUnbounded,
  kIterationLimit,
  kCutoff,  // dual bound exceeded LpOptions::objective_cutoff; no primal solution
};

const char* to_string(LpStatus status);

// Column-compressed LP: min c'x + offset, row_lower <= Ax <= row_upper,
// col_lower <= x <= col_upper.
struct LpProblem {
  int rows = 0;
  int cols = 0;
  std::vector<int> col_start{0};
  std::vector<int> col_index;
  std::vector<double> col_value;
  std::vector<double> cost;
  double cost_offset = 0.0;
  std::vector<double> col_lower;
  std::vector<double> col_upper;
  std::vector<double> row_lower;
  std::vector<double> row_upper;

  static LpProblem from_model(const MilpModel& model);
};

// Removes empty rows, rows whose columns are all fixed, and singleton rows
// (turned into column bounds). Columns are never removed, so column indices
// of the result match the input.
struct PresolveResult {
  LpProblem problem;
  std::vector<int> kept_rows;  // original index of every remaining row
  bool infeasible = false;
  int removed_singletons = 0;
};

PresolveResult presolve(const LpProblem& problem, double tolerance = 1e-9);

enum class VarStatus : std::uint8_t { kBasic, kAtLower, kAtUpper, kAtZero };

// Status of the structural columns followed by one logical per row.
struct Basis {
  std::vector<VarStatus> status;
  bool empty() const { return status.empty(); }
};

struct LpOptions {
  long iteration_limit = 5'000'000;
  double primal_tolerance = 1e-6;
  double dual_tolerance = 1e-7;
  double pivot_tolerance = 1e-9;
  int refactor_interval = 100;
  int stall_threshold = 50;  // degenerate iterations before Bland's rule
  double objective_cutoff = kInf;
};

struct LpSolution {
  LpStatus status = LpStatus::kIterationLimit;
  std::vector<double> x;  // structural columns
  double objective = 0.0;
  long iterations = 0;
  Basis basis;
};

// Bounded revised simplex: dual simplex with a bound-flipping ratio test and
// dual steepest-edge pricing, followed by a primal pass whenever costs had to
// be shifted to obtain a dual feasible start. The basis is kept as a sparse
// LU factorization plus product-form updates.
class SimplexSolver {
 public:
  explicit SimplexSolver(LpProblem problem, LpOptions options = {});
  ~SimplexSolver();
  SimplexSolver(SimplexSolver&&) noexcept;
  SimplexSolver& operator=(SimplexSolver&&) noexcept;

  const LpProblem& problem() const;
  LpOptions& options();

  void set_column_bounds(int column, double lower, double upper);
  double column_lower(int column) const;
  double column_upper(int column) const;

  // Warm start from a basis of this problem (sizes must match); an empty or
  // malformed basis falls back to the slack basis.
  LpSolution solve(const Basis& warm_start = {});

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Convenience: presolve, solve, and map back to the model's columns.
// Integrality is ignored.
LpSolution solve_lp(const MilpModel& model, const LpOptions& options = {});

}  // namespace roster
