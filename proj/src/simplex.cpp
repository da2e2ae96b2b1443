#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <random>
#include <utility>

#include "roster/lp.hpp"

namespace roster {

namespace {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

struct Eta {
  int row = 0;
  double pivot = 1.0;
  std::vector<int> index;  // off-pivot nonzeros of the entering column
  std::vector<double> value;
};

struct Candidate {
  int var;
  double ratio;
  double alpha;
};

}  // namespace

struct SimplexSolver::Impl {
  LpProblem lp;
  LpOptions opt;
  int n = 0;
  int m = 0;

  // Row-wise copy of A for tableau rows.
  std::vector<int> row_start;
  std::vector<int> row_col;
  std::vector<double> row_val;

  std::vector<double> lower, upper;  // structurals then logicals
  std::vector<double> cost;          // working cost (may be shifted)
  bool shifted = false;

  std::vector<VarStatus> status;
  std::vector<int> head;  // basic variable per basis position
  std::vector<int> pos;   // basis position per variable, -1 when nonbasic
  std::vector<double> x;
  std::vector<double> d;
  std::vector<double> weight;  // dual steepest-edge reference weights

  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  std::vector<Eta> etas;
  long iterations = 0;

  // Scratch.
  std::vector<double> rho, alpha_row, column, work;
  Eigen::VectorXd ev;

  Impl(LpProblem problem, LpOptions options) : lp(std::move(problem)), opt(options) {
    n = lp.cols;
    m = lp.rows;
    row_start.assign(static_cast<std::size_t>(m) + 1, 0);
    for (int i : lp.col_index) ++row_start[static_cast<std::size_t>(i) + 1];
    for (int r = 0; r < m; ++r) row_start[r + 1] += row_start[r];
    row_col.resize(lp.col_index.size());
    row_val.resize(lp.col_index.size());
    std::vector<int> fill(row_start.begin(), row_start.end() - 1);
    for (int j = 0; j < n; ++j) {
      for (int p = lp.col_start[j]; p < lp.col_start[j + 1]; ++p) {
        const int at = fill[static_cast<std::size_t>(lp.col_index[p])]++;
        row_col[static_cast<std::size_t>(at)] = j;
        row_val[static_cast<std::size_t>(at)] = lp.col_value[p];
      }
    }
    lower.resize(static_cast<std::size_t>(n + m));
    upper.resize(static_cast<std::size_t>(n + m));
    for (int j = 0; j < n; ++j) {
      lower[j] = lp.col_lower[j];
      upper[j] = lp.col_upper[j];
    }
    for (int i = 0; i < m; ++i) {
      lower[n + i] = lp.row_lower[i];
      upper[n + i] = lp.row_upper[i];
    }
    rho.assign(static_cast<std::size_t>(m), 0.0);
    column.assign(static_cast<std::size_t>(m), 0.0);
    work.assign(static_cast<std::size_t>(m), 0.0);
    alpha_row.assign(static_cast<std::size_t>(n + m), 0.0);
    ev.resize(m);
  }

  bool fixed(int j) const { return lower[j] == upper[j]; }
  bool boxed(int j) const { return std::isfinite(lower[j]) && std::isfinite(upper[j]); }

  double nonbasic_value(int j) const {
    switch (status[j]) {
      case VarStatus::kAtLower: return lower[j];
      case VarStatus::kAtUpper: return upper[j];
      default: return 0.0;
    }
  }

  VarStatus default_status(int j, double reduced_cost) const {
    const bool has_lower = std::isfinite(lower[j]);
    const bool has_upper = std::isfinite(upper[j]);
    if (has_lower && (!has_upper || reduced_cost >= 0.0)) return VarStatus::kAtLower;
    if (has_upper) return VarStatus::kAtUpper;
    return VarStatus::kAtZero;
  }

  // Adds scale * (column j of [A | -I]) to a dense row vector.
  template <typename F>
  void for_column(int j, F&& f) const {
    if (j < n) {
      for (int p = lp.col_start[j]; p < lp.col_start[j + 1]; ++p) f(lp.col_index[p], lp.col_value[p]);
    } else {
      f(j - n, -1.0);
    }
  }

  double dot_column(int j, const std::vector<double>& v) const {
    double s = 0.0;
    for_column(j, [&](int i, double a) { s += a * v[static_cast<std::size_t>(i)]; });
    return s;
  }

  void slack_basis() {
    status.assign(static_cast<std::size_t>(n + m), VarStatus::kAtLower);
    head.resize(static_cast<std::size_t>(m));
    pos.assign(static_cast<std::size_t>(n + m), -1);
    for (int j = 0; j < n; ++j) status[j] = default_status(j, cost[j]);
    for (int i = 0; i < m; ++i) {
      status[n + i] = VarStatus::kBasic;
      head[i] = n + i;
      pos[n + i] = i;
    }
    weight.assign(static_cast<std::size_t>(m), 1.0);
  }

  bool load_basis(const Basis& basis) {
    if (static_cast<int>(basis.status.size()) != n + m) return false;
    int basic = 0;
    for (auto s : basis.status) basic += s == VarStatus::kBasic;
    if (basic != m) return false;
    status = basis.status;
    head.clear();
    pos.assign(static_cast<std::size_t>(n + m), -1);
    for (int j = 0; j < n + m; ++j) {
      if (status[j] == VarStatus::kBasic) {
        pos[j] = static_cast<int>(head.size());
        head.push_back(j);
        continue;
      }
      // Bounds may have moved since the basis was saved.
      if (status[j] == VarStatus::kAtLower && !std::isfinite(lower[j])) status[j] = default_status(j, 0.0);
      if (status[j] == VarStatus::kAtUpper && !std::isfinite(upper[j])) status[j] = default_status(j, 0.0);
      if (status[j] == VarStatus::kAtZero && (std::isfinite(lower[j]) || std::isfinite(upper[j]))) {
        status[j] = default_status(j, 0.0);
      }
    }
    weight.assign(static_cast<std::size_t>(m), 1.0);
    return true;
  }

  bool factor() {
    etas.clear();
    if (m == 0) return true;
    std::vector<Eigen::Triplet<double, int>> triplets;
    triplets.reserve(static_cast<std::size_t>(m) * 2);
    for (int p = 0; p < m; ++p) {
      for_column(head[p], [&](int i, double a) { triplets.emplace_back(i, p, a); });
    }
    SparseMatrix b(m, m);
    b.setFromTriplets(triplets.begin(), triplets.end());
    b.makeCompressed();
    lu.analyzePattern(b);
    lu.factorize(b);
    return lu.info() == Eigen::Success;
  }

  void ftran(std::vector<double>& v) {
    if (m == 0) return;
    for (int i = 0; i < m; ++i) ev[i] = v[static_cast<std::size_t>(i)];
    ev = lu.solve(ev).eval();
    for (int i = 0; i < m; ++i) v[static_cast<std::size_t>(i)] = ev[i];
    for (const Eta& e : etas) {
      double& vr = v[static_cast<std::size_t>(e.row)];
      if (vr == 0.0) continue;
      vr /= e.pivot;
      for (std::size_t t = 0; t < e.index.size(); ++t) v[static_cast<std::size_t>(e.index[t])] -= e.value[t] * vr;
    }
  }

  void btran(std::vector<double>& v) {
    if (m == 0) return;
    for (auto it = etas.rbegin(); it != etas.rend(); ++it) {
      double s = v[static_cast<std::size_t>(it->row)];
      for (std::size_t t = 0; t < it->index.size(); ++t) s -= it->value[t] * v[static_cast<std::size_t>(it->index[t])];
      v[static_cast<std::size_t>(it->row)] = s / it->pivot;
    }
    for (int i = 0; i < m; ++i) ev[i] = v[static_cast<std::size_t>(i)];
    ev = lu.transpose().solve(ev).eval();
    for (int i = 0; i < m; ++i) v[static_cast<std::size_t>(i)] = ev[i];
  }

  void compute_primal() {
    std::fill(work.begin(), work.end(), 0.0);
    for (int j = 0; j < n + m; ++j) {
      if (status[j] == VarStatus::kBasic) continue;
      x[j] = nonbasic_value(j);
      if (x[j] != 0.0) for_column(j, [&](int i, double a) { work[static_cast<std::size_t>(i)] -= a * x[j]; });
    }
    ftran(work);
    for (int p = 0; p < m; ++p) x[head[p]] = work[static_cast<std::size_t>(p)];
  }

  void compute_duals() {
    for (int p = 0; p < m; ++p) work[static_cast<std::size_t>(p)] = cost[head[p]];
    btran(work);
    for (int j = 0; j < n + m; ++j) {
      d[j] = status[j] == VarStatus::kBasic ? 0.0 : cost[j] - dot_column(j, work);
    }
  }

  // Moves boxed nonbasics to the bound their reduced cost prefers and shifts
  // the cost of any other dual infeasible column. Returns true when a bound
  // flip changed the primal values.
  bool make_dual_feasible() {
    bool flipped = false;
    for (int j = 0; j < n + m; ++j) {
      if (status[j] == VarStatus::kBasic || fixed(j)) continue;
      const double dj = d[j];
      if (dj > opt.dual_tolerance && status[j] != VarStatus::kAtLower) {
        if (std::isfinite(lower[j])) {
          status[j] = VarStatus::kAtLower;
          flipped = true;
        } else {
          cost[j] -= dj;
          d[j] = 0.0;
          shifted = true;
        }
      } else if (dj < -opt.dual_tolerance && status[j] != VarStatus::kAtUpper) {
        if (std::isfinite(upper[j])) {
          status[j] = VarStatus::kAtUpper;
          flipped = true;
        } else {
          cost[j] -= dj;
          d[j] = 0.0;
          shifted = true;
        }
      }
    }
    return flipped;
  }

  // Roster models are almost entirely dual degenerate (assignment columns
  // carry no cost), so a cold start perturbs costs away from their bounds.
  void perturb_costs() {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> unit(1.0, 2.0);
    for (int j = 0; j < n; ++j) {
      if (status[j] == VarStatus::kBasic || fixed(j) || status[j] == VarStatus::kAtZero) continue;
      const double xi = 1e-6 * (1.0 + std::abs(cost[j])) * unit(rng);
      const double delta = status[j] == VarStatus::kAtLower ? xi : -xi;
      cost[j] += delta;
      d[j] += delta;
      shifted = true;
    }
  }

  double objective() const {
    double v = lp.cost_offset;
    for (int j = 0; j < n; ++j) v += cost[j] * x[j];
    return v;
  }

  // Recomputes everything from a fresh factorization; falls back to the
  // slack basis if the current one is singular.
  void refresh() {
    if (!factor()) {
      slack_basis();
      factor();
    }
    compute_primal();
    compute_duals();
    if (make_dual_feasible()) compute_primal();
  }

  void push_eta(int r, const std::vector<double>& aq) {
    Eta e;
    e.row = r;
    e.pivot = aq[static_cast<std::size_t>(r)];
    for (int i = 0; i < m; ++i) {
      if (i != r && std::abs(aq[static_cast<std::size_t>(i)]) > 1e-14) {
        e.index.push_back(i);
        e.value.push_back(aq[static_cast<std::size_t>(i)]);
      }
    }
    etas.push_back(std::move(e));
  }

  void compute_alpha_row() {
    for (int j = 0; j < n + m; ++j) alpha_row[j] = 0.0;
    for (int i = 0; i < m; ++i) {
      const double ri = rho[static_cast<std::size_t>(i)];
      if (ri == 0.0) continue;
      for (int p = row_start[i]; p < row_start[i + 1]; ++p) alpha_row[row_col[p]] += ri * row_val[p];
      alpha_row[n + i] = -ri;
    }
  }

  LpStatus dual_loop() {
    int degenerate = 0;
    bool bland = false;
    int numerical_retries = 0;
    std::vector<Candidate> cand;
    std::vector<int> flips;
    while (true) {
      if (iterations >= opt.iteration_limit) return LpStatus::kIterationLimit;
      if (static_cast<int>(etas.size()) >= opt.refactor_interval) refresh();

      if (!shifted && std::isfinite(opt.objective_cutoff) &&
          objective() > opt.objective_cutoff + 1e-9 * (1.0 + std::abs(opt.objective_cutoff))) {
        return LpStatus::kCutoff;
      }

      // Leaving row.
      int r = -1;
      double best = 0.0;
      for (int p = 0; p < m; ++p) {
        const int v = head[p];
        const double infeas = x[v] < lower[v] - opt.primal_tolerance   ? lower[v] - x[v]
                              : x[v] > upper[v] + opt.primal_tolerance ? x[v] - upper[v]
                                                                       : 0.0;
        if (infeas <= 0.0) continue;
        if (bland) {
          if (r < 0 || v < head[r]) r = p;
          continue;
        }
        const double score = infeas * infeas / weight[static_cast<std::size_t>(p)];
        if (score > best) {
          best = score;
          r = p;
        }
      }
      if (r < 0) return LpStatus::kOptimal;
      const int leaving = head[r];
      const bool to_upper = x[leaving] > upper[leaving];
      const double bound = to_upper ? upper[leaving] : lower[leaving];

      std::fill(rho.begin(), rho.end(), 0.0);
      rho[static_cast<std::size_t>(r)] = 1.0;
      btran(rho);
      compute_alpha_row();

      // Breakpoints of the dual ratio test.
      cand.clear();
      for (int j = 0; j < n + m; ++j) {
        if (status[j] == VarStatus::kBasic || fixed(j)) continue;
        const double a = to_upper ? alpha_row[j] : -alpha_row[j];
        if (std::abs(a) < opt.pivot_tolerance) continue;
        const VarStatus s = status[j];
        if (a > 0 && (s == VarStatus::kAtLower || s == VarStatus::kAtZero)) {
          cand.push_back({j, std::max(d[j], 0.0) / a, a});
        } else if (a < 0 && (s == VarStatus::kAtUpper || s == VarStatus::kAtZero)) {
          cand.push_back({j, std::min(d[j], 0.0) / a, a});
        }
      }
      if (cand.empty()) return LpStatus::kInfeasible;
      std::sort(cand.begin(), cand.end(), [](const Candidate& a, const Candidate& b) {
        return a.ratio < b.ratio || (a.ratio == b.ratio && a.var < b.var);
      });

      flips.clear();
      std::size_t pick = cand.size();
      if (bland) {
        pick = 0;
      } else {
        double slope = std::abs(x[leaving] - bound);
        std::size_t k = 0;
        for (; k < cand.size(); ++k) {
          const int j = cand[k].var;
          const double drop = boxed(j) && status[j] != VarStatus::kAtZero
                                  ? std::abs(cand[k].alpha) * (upper[j] - lower[j])
                                  : kInf;
          if (slope - drop > opt.primal_tolerance) {
            slope -= drop;
            flips.push_back(j);
            continue;
          }
          break;
        }
        if (k == cand.size()) return LpStatus::kInfeasible;
        // Among near-ties prefer the largest pivot.
        pick = k;
        for (std::size_t t = k + 1; t < cand.size() && cand[t].ratio <= cand[k].ratio + opt.dual_tolerance; ++t) {
          if (std::abs(cand[t].alpha) > std::abs(cand[pick].alpha)) pick = t;
        }
        // Ties before `pick` that were flipped stay flipped; ties after it do not.
      }
      const int q = cand[pick].var;
      const double alpha_rq = alpha_row[q];

      std::fill(column.begin(), column.end(), 0.0);
      for_column(q, [&](int i, double a) { column[static_cast<std::size_t>(i)] += a; });
      ftran(column);
      const double check = column[static_cast<std::size_t>(r)];
      if (std::abs(check - alpha_rq) > 1e-6 * (1.0 + std::abs(alpha_rq)) || std::abs(check) < opt.pivot_tolerance) {
        if (++numerical_retries > 5 && etas.empty()) return LpStatus::kIterationLimit;
        refresh();
        continue;
      }
      numerical_retries = 0;

      if (!flips.empty()) {
        std::fill(work.begin(), work.end(), 0.0);
        for (int j : flips) {
          const double old = x[j];
          status[j] = status[j] == VarStatus::kAtLower ? VarStatus::kAtUpper : VarStatus::kAtLower;
          x[j] = nonbasic_value(j);
          const double delta = x[j] - old;
          for_column(j, [&](int i, double a) { work[static_cast<std::size_t>(i)] += a * delta; });
        }
        ftran(work);
        for (int p = 0; p < m; ++p) x[head[p]] -= work[static_cast<std::size_t>(p)];
      }

      const double theta_p = (x[leaving] - bound) / check;
      for (int p = 0; p < m; ++p) x[head[p]] -= theta_p * column[static_cast<std::size_t>(p)];
      x[q] += theta_p;

      const double theta_d = d[q] / alpha_rq;
      for (int j = 0; j < n + m; ++j) {
        if (status[j] != VarStatus::kBasic && alpha_row[j] != 0.0) d[j] -= theta_d * alpha_row[j];
      }
      d[leaving] = -theta_d;
      d[q] = 0.0;

      // Dual steepest-edge weights.
      double rho_norm = 0.0;
      for (double v : rho) rho_norm += v * v;
      std::copy(rho.begin(), rho.end(), work.begin());
      ftran(work);
      for (int p = 0; p < m; ++p) {
        if (p == r) continue;
        const double ratio = column[static_cast<std::size_t>(p)] / check;
        if (ratio == 0.0) continue;
        double& w = weight[static_cast<std::size_t>(p)];
        w = std::max(w - 2.0 * ratio * work[static_cast<std::size_t>(p)] + ratio * ratio * rho_norm, ratio * ratio);
        w = std::max(w, 1e-8);
      }
      weight[static_cast<std::size_t>(r)] = std::max(rho_norm / (check * check), 1e-8);

      status[leaving] = (to_upper && !fixed(leaving)) ? VarStatus::kAtUpper : VarStatus::kAtLower;
      x[leaving] = bound;
      pos[leaving] = -1;
      head[r] = q;
      pos[q] = r;
      status[q] = VarStatus::kBasic;
      push_eta(r, column);
      ++iterations;

      if (std::abs(theta_d) <= 1e-12) {
        if (++degenerate > opt.stall_threshold) bland = true;
      } else {
        degenerate = 0;
        bland = false;
      }
    }
  }

  LpStatus primal_loop() {
    int degenerate = 0;
    bool bland = false;
    while (true) {
      if (iterations >= opt.iteration_limit) return LpStatus::kIterationLimit;
      if (static_cast<int>(etas.size()) >= opt.refactor_interval) {
        if (!factor()) return LpStatus::kIterationLimit;
        compute_primal();
      }
      compute_duals();

      int q = -1;
      double best = 0.0;
      for (int j = 0; j < n + m; ++j) {
        if (status[j] == VarStatus::kBasic || fixed(j)) continue;
        const VarStatus s = status[j];
        const bool up = d[j] < -opt.dual_tolerance && (s == VarStatus::kAtLower || s == VarStatus::kAtZero);
        const bool down = d[j] > opt.dual_tolerance && (s == VarStatus::kAtUpper || s == VarStatus::kAtZero);
        if (!up && !down) continue;
        if (bland) {
          q = j;
          break;
        }
        if (std::abs(d[j]) > best) {
          best = std::abs(d[j]);
          q = j;
        }
      }
      if (q < 0) return LpStatus::kOptimal;
      const double dir = d[q] < 0 ? 1.0 : -1.0;

      std::fill(column.begin(), column.end(), 0.0);
      for_column(q, [&](int i, double a) { column[static_cast<std::size_t>(i)] += a; });
      ftran(column);

      // Harris two-pass ratio test; x_B moves by -dir * column * t.
      double t_max = kInf;
      for (int p = 0; p < m; ++p) {
        const double rate = -dir * column[static_cast<std::size_t>(p)];
        const int v = head[p];
        if (rate < -opt.pivot_tolerance && std::isfinite(lower[v])) {
          t_max = std::min(t_max, (x[v] - lower[v] + opt.primal_tolerance) / -rate);
        } else if (rate > opt.pivot_tolerance && std::isfinite(upper[v])) {
          t_max = std::min(t_max, (upper[v] - x[v] + opt.primal_tolerance) / rate);
        }
      }
      int r = -1;
      double step = kInf;
      double best_rate = 0.0;
      for (int p = 0; p < m; ++p) {
        const double rate = -dir * column[static_cast<std::size_t>(p)];
        const int v = head[p];
        double t = kInf;
        if (rate < -opt.pivot_tolerance && std::isfinite(lower[v])) {
          t = (x[v] - lower[v]) / -rate;
        } else if (rate > opt.pivot_tolerance && std::isfinite(upper[v])) {
          t = (upper[v] - x[v]) / rate;
        }
        if (!std::isfinite(t) || t > t_max) continue;
        const bool better = bland ? (r < 0 || v < head[r]) : std::abs(rate) > best_rate;
        if (better) {
          r = p;
          best_rate = std::abs(rate);
          step = std::max(t, 0.0);
        }
      }
      const double span = status[q] == VarStatus::kAtZero ? kInf : upper[q] - lower[q];
      if (r < 0 && !std::isfinite(span)) return LpStatus::kUnbounded;

      if (r < 0 || span <= step) {
        // Bound flip of the entering column.
        for (int p = 0; p < m; ++p) x[head[p]] += dir * column[static_cast<std::size_t>(p)] * -span;
        status[q] = status[q] == VarStatus::kAtLower ? VarStatus::kAtUpper : VarStatus::kAtLower;
        x[q] = nonbasic_value(q);
        ++iterations;
        degenerate = 0;
        continue;
      }

      const int leaving = head[r];
      const double rate_r = -dir * column[static_cast<std::size_t>(r)];
      for (int p = 0; p < m; ++p) x[head[p]] -= dir * column[static_cast<std::size_t>(p)] * step;
      x[q] += dir * step;
      const bool to_lower = rate_r < 0;
      status[leaving] = (to_lower || fixed(leaving)) ? VarStatus::kAtLower : VarStatus::kAtUpper;
      x[leaving] = to_lower ? lower[leaving] : upper[leaving];
      pos[leaving] = -1;
      head[r] = q;
      pos[q] = r;
      status[q] = VarStatus::kBasic;
      push_eta(r, column);
      ++iterations;

      if (step <= 1e-12) {
        if (++degenerate > opt.stall_threshold) bland = true;
      } else {
        degenerate = 0;
        bland = false;
      }
    }
  }

  LpSolution solve(const Basis& warm) {
    iterations = 0;
    shifted = false;
    cost.assign(static_cast<std::size_t>(n + m), 0.0);
    for (int j = 0; j < n; ++j) cost[j] = lp.cost[j];
    x.assign(static_cast<std::size_t>(n + m), 0.0);
    d.assign(static_cast<std::size_t>(n + m), 0.0);

    LpSolution sol;
    for (int j = 0; j < n; ++j) {
      if (lower[j] > upper[j]) {
        sol.status = LpStatus::kInfeasible;
        return sol;
      }
    }
    const bool cold = warm.empty() || !load_basis(warm);
    if (cold) slack_basis();
    refresh();
    perturb_costs();

    LpStatus st = dual_loop();
    if (st == LpStatus::kOptimal && shifted) {
      shifted = false;
      for (int j = 0; j < n + m; ++j) cost[j] = j < n ? lp.cost[j] : 0.0;
      if (!factor()) {
        refresh();
        st = dual_loop();
      } else {
        compute_primal();
      }
      if (st == LpStatus::kOptimal) st = primal_loop();
    }
    const double cutoff = opt.objective_cutoff;
    if (st == LpStatus::kOptimal && std::isfinite(cutoff) &&
        objective() > cutoff + 1e-9 * (1.0 + std::abs(cutoff))) {
      st = LpStatus::kCutoff;
    }
    sol.status = st;
    sol.iterations = iterations;
    if (st == LpStatus::kCutoff) sol.objective = objective();
    if (st == LpStatus::kOptimal || st == LpStatus::kIterationLimit) {
      sol.x.assign(x.begin(), x.begin() + n);
      sol.objective = lp.cost_offset;
      for (int j = 0; j < n; ++j) sol.objective += lp.cost[j] * sol.x[j];
    }
    if (st == LpStatus::kOptimal || st == LpStatus::kCutoff) sol.basis.status = status;
    return sol;
  }
};

SimplexSolver::SimplexSolver(LpProblem problem, LpOptions options)
    : impl_(std::make_unique<Impl>(std::move(problem), options)) {}
SimplexSolver::~SimplexSolver() = default;
SimplexSolver::SimplexSolver(SimplexSolver&&) noexcept = default;
SimplexSolver& SimplexSolver::operator=(SimplexSolver&&) noexcept = default;

const LpProblem& SimplexSolver::problem() const { return impl_->lp; }
LpOptions& SimplexSolver::options() { return impl_->opt; }

void SimplexSolver::set_column_bounds(int column, double lower, double upper) {
  impl_->lower[column] = lower;
  impl_->upper[column] = upper;
}
double SimplexSolver::column_lower(int column) const { return impl_->lower[column]; }
double SimplexSolver::column_upper(int column) const { return impl_->upper[column]; }

LpSolution SimplexSolver::solve(const Basis& warm_start) { return impl_->solve(warm_start); }

}  // namespace roster
