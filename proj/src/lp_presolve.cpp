#include <algorithm>
#include <cmath>

#include "roster/lp.hpp"

namespace roster {

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kIterationLimit: return "iteration_limit";
    case LpStatus::kCutoff: return "cutoff";
  }
  return "unknown";
}

LpProblem LpProblem::from_model(const MilpModel& model) {
  LpProblem lp;
  lp.rows = model.num_rows();
  lp.cols = model.num_cols();
  lp.cost = model.cost;
  lp.cost_offset = model.cost_offset;
  lp.col_lower = model.col_lower;
  lp.col_upper = model.col_upper;
  lp.row_lower = model.row_lower;
  lp.row_upper = model.row_upper;

  std::vector<int> count(static_cast<std::size_t>(lp.cols) + 1, 0);
  for (std::size_t p = 0; p < model.row_index.size(); ++p) {
    if (model.row_value[p] != 0.0) ++count[static_cast<std::size_t>(model.row_index[p]) + 1];
  }
  lp.col_start.assign(static_cast<std::size_t>(lp.cols) + 1, 0);
  for (int j = 0; j < lp.cols; ++j) lp.col_start[j + 1] = lp.col_start[j] + count[static_cast<std::size_t>(j) + 1];
  lp.col_index.resize(static_cast<std::size_t>(lp.col_start.back()));
  lp.col_value.resize(lp.col_index.size());
  std::vector<int> fill(lp.col_start.begin(), lp.col_start.end() - 1);
  for (int r = 0; r < lp.rows; ++r) {
    for (int p = model.row_start[r]; p < model.row_start[r + 1]; ++p) {
      if (model.row_value[p] == 0.0) continue;
      const int at = fill[static_cast<std::size_t>(model.row_index[p])]++;
      lp.col_index[static_cast<std::size_t>(at)] = r;
      lp.col_value[static_cast<std::size_t>(at)] = model.row_value[p];
    }
  }
  return lp;
}

PresolveResult presolve(const LpProblem& in, double tol) {
  PresolveResult out;
  std::vector<double> lower = in.col_lower;
  std::vector<double> upper = in.col_upper;

  // Row-wise view of the column-compressed matrix.
  std::vector<int> row_start(static_cast<std::size_t>(in.rows) + 1, 0);
  for (int i : in.col_index) ++row_start[static_cast<std::size_t>(i) + 1];
  for (int r = 0; r < in.rows; ++r) row_start[r + 1] += row_start[r];
  std::vector<int> row_col(in.col_index.size());
  std::vector<double> row_val(in.col_index.size());
  {
    std::vector<int> fill(row_start.begin(), row_start.end() - 1);
    for (int j = 0; j < in.cols; ++j) {
      for (int p = in.col_start[j]; p < in.col_start[j + 1]; ++p) {
        const int at = fill[static_cast<std::size_t>(in.col_index[p])]++;
        row_col[static_cast<std::size_t>(at)] = j;
        row_val[static_cast<std::size_t>(at)] = in.col_value[p];
      }
    }
  }

  std::vector<char> removed(static_cast<std::size_t>(in.rows), 0);
  bool changed = true;
  while (changed && !out.infeasible) {
    changed = false;
    for (int r = 0; r < in.rows && !out.infeasible; ++r) {
      if (removed[r]) continue;
      int free_terms = 0, last = -1;
      double fixed_activity = 0.0, coef = 0.0;
      for (int p = row_start[r]; p < row_start[r + 1]; ++p) {
        const int j = row_col[p];
        if (lower[j] == upper[j]) {
          fixed_activity += row_val[p] * lower[j];
        } else {
          ++free_terms;
          last = j;
          coef = row_val[p];
        }
      }
      const double lo = in.row_lower[r] - fixed_activity;
      const double hi = in.row_upper[r] - fixed_activity;
      if (free_terms == 0) {
        if (lo > tol * (1.0 + std::abs(in.row_lower[r])) || hi < -tol * (1.0 + std::abs(in.row_upper[r]))) {
          out.infeasible = true;
        }
        removed[r] = 1;
        changed = true;
      } else if (free_terms == 1) {
        double new_lo = coef > 0 ? lo / coef : hi / coef;
        double new_hi = coef > 0 ? hi / coef : lo / coef;
        if (!std::isfinite(new_lo)) new_lo = -kInf;
        if (!std::isfinite(new_hi)) new_hi = kInf;
        lower[last] = std::max(lower[last], new_lo);
        upper[last] = std::min(upper[last], new_hi);
        if (lower[last] > upper[last]) {
          if (lower[last] - upper[last] > tol * (1.0 + std::abs(lower[last]))) {
            out.infeasible = true;
          } else {
            upper[last] = lower[last];
          }
        }
        removed[r] = 1;
        ++out.removed_singletons;
        changed = true;
      }
    }
  }

  LpProblem& lp = out.problem;
  lp.cols = in.cols;
  lp.cost = in.cost;
  lp.cost_offset = in.cost_offset;
  lp.col_lower = lower;
  lp.col_upper = upper;
  std::vector<int> new_index(static_cast<std::size_t>(in.rows), -1);
  for (int r = 0; r < in.rows; ++r) {
    if (removed[r]) continue;
    new_index[r] = lp.rows++;
    out.kept_rows.push_back(r);
    lp.row_lower.push_back(in.row_lower[r]);
    lp.row_upper.push_back(in.row_upper[r]);
  }
  lp.col_start.assign(static_cast<std::size_t>(in.cols) + 1, 0);
  for (int j = 0; j < in.cols; ++j) {
    for (int p = in.col_start[j]; p < in.col_start[j + 1]; ++p) {
      const int r = new_index[static_cast<std::size_t>(in.col_index[p])];
      if (r < 0) continue;
      lp.col_index.push_back(r);
      lp.col_value.push_back(in.col_value[p]);
    }
    lp.col_start[j + 1] = static_cast<int>(lp.col_index.size());
  }
  return out;
}

LpSolution solve_lp(const MilpModel& model, const LpOptions& options) {
  PresolveResult pre = presolve(LpProblem::from_model(model));
  LpSolution sol;
  if (pre.infeasible) {
    sol.status = LpStatus::kInfeasible;
    return sol;
  }
  SimplexSolver solver(std::move(pre.problem), options);
  return solver.solve();
}

}  // namespace roster
