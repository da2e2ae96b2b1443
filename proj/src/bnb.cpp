#include "roster/bnb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>

#include "roster/errors.hpp"

namespace roster {

const char* to_string(BnbStatus status) {
  switch (status) {
    case BnbStatus::kOptimal: return "optimal";
    case BnbStatus::kGapReached: return "gap_reached";
    case BnbStatus::kTimeLimit: return "time_limit";
    case BnbStatus::kNodeLimit: return "node_limit";
    case BnbStatus::kCancelled: return "cancelled";
    case BnbStatus::kInfeasible: return "infeasible";
  }
  return "unknown";
}

double compute_gap(double upper, double lower) {
  if (lower > upper + 1e-9 * std::max(1.0, std::abs(upper))) {
    throw ModelError("lower bound " + std::to_string(lower) + " exceeds incumbent " + std::to_string(upper));
  }
  if (!std::isfinite(upper) || !std::isfinite(lower)) return kInf;
  if (upper == lower) return 0.0;
  return std::max(0.0, (upper - lower) / std::max(upper, 1e-9));
}

double pool_distance(const MilpModel& model, const std::vector<double>& a, const std::vector<double>& b) {
  long differ = 0, total = 0;
  for (int j = 0; j < model.num_cols(); ++j) {
    if (!model.integral[j]) continue;
    ++total;
    differ += std::round(a[j]) != std::round(b[j]);
  }
  return total == 0 ? 0.0 : static_cast<double>(differ) / static_cast<double>(total);
}

SolutionPool::SolutionPool(const MilpModel& model, int capacity, double diversity_window)
    : model_(&model), capacity_(capacity), window_(diversity_window) {
  if (capacity < 1) throw InvalidInputError("pool capacity must be positive");
}

double SolutionPool::distance(const std::vector<double>& a, const std::vector<double>& b) const {
  return pool_distance(*model_, a, b);
}

double SolutionPool::min_pairwise_distance() const {
  double best = kInf;
  for (std::size_t i = 0; i < members_.size(); ++i) {
    for (std::size_t k = i + 1; k < members_.size(); ++k) best = std::min(best, distance(members_[i].x, members_[k].x));
  }
  return best;
}

bool SolutionPool::offer(MipSolution candidate) {
  auto by_objective = [](const MipSolution& a, const MipSolution& b) { return a.objective < b.objective; };
  for (MipSolution& m : members_) {
    if (distance(m.x, candidate.x) > 0.0) continue;
    if (candidate.objective >= m.objective - 1e-9) return false;
    m = std::move(candidate);
    std::stable_sort(members_.begin(), members_.end(), by_objective);
    return true;
  }
  if (!full()) {
    members_.insert(std::upper_bound(members_.begin(), members_.end(), candidate, by_objective), std::move(candidate));
    return true;
  }
  const double worst = members_.back().objective;
  if (candidate.objective < worst - 1e-9) {
    members_.back() = std::move(candidate);
    std::stable_sort(members_.begin(), members_.end(), by_objective);
    return true;
  }
  if (candidate.objective > worst + window_ * std::max(std::abs(worst), 1e-9) || members_.size() < 2) return false;
  // The best member is never displaced by the diversity rule.
  std::size_t nearest = 1;
  double nearest_distance = kInf;
  for (std::size_t i = 1; i < members_.size(); ++i) {
    const double dist = distance(members_[i].x, candidate.x);
    if (dist < nearest_distance) {
      nearest_distance = dist;
      nearest = i;
    }
  }
  const double before = min_pairwise_distance();
  std::vector<MipSolution> trial = members_;
  trial[nearest] = candidate;
  double after = kInf;
  for (std::size_t i = 0; i < trial.size(); ++i) {
    for (std::size_t k = i + 1; k < trial.size(); ++k) after = std::min(after, distance(trial[i].x, trial[k].x));
  }
  if (after <= before) return false;
  members_ = std::move(trial);
  std::stable_sort(members_.begin(), members_.end(), by_objective);
  return true;
}

RelaxAndFixResult relax_and_fix(const MilpModel& model, const LpOptions& options) {
  const LpSolution lp = solve_lp(model, options);
  switch (lp.status) {
    case LpStatus::kOptimal: break;
    case LpStatus::kInfeasible: throw InfeasibleError("LP relaxation is infeasible");
    case LpStatus::kUnbounded: throw ModelError("LP relaxation is unbounded");
    default: throw ModelError(std::string("LP relaxation stopped: ") + to_string(lp.status));
  }
  RelaxAndFixResult out;
  out.reduced = model;
  out.lp_bound = lp.objective;
  out.lp_solution = lp.x;
  for (int j = 0; j < model.num_cols(); ++j) {
    if (!model.integral[j]) continue;
    const double r = std::round(lp.x[j]);
    if (std::abs(lp.x[j] - r) <= kIntegralityTolerance) {
      out.reduced.col_lower[j] = r;
      out.reduced.col_upper[j] = r;
      ++out.fixed;
    } else {
      ++out.free;
    }
  }
  return out;
}

namespace {

struct BoundChange {
  int col;
  double lower;
  double upper;
};

struct Node {
  double bound = -kInf;  // relaxation value of the parent
  long seq = 0;
  std::vector<BoundChange> changes;
  std::shared_ptr<const Basis> basis;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    return a.bound > b.bound || (a.bound == b.bound && a.seq > b.seq);
  }
};

using Clock = std::chrono::steady_clock;

}  // namespace

struct BranchAndBound::Impl {
  MilpModel model;
  BnbConfig cfg;
  SolutionPool pool;
  std::optional<SimplexSolver> solver;
  std::vector<double> root_lower, root_upper;
  std::vector<int> dirty;
  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  std::optional<Node> plunge;
  long seq = 0;
  long node_count = 0;
  bool root_infeasible = false;
  double reported_bound = -kInf;
  double last_event_incumbent = kInf;
  double last_event_bound = -kInf;
  Clock::time_point start = Clock::now();
  BnbCallback callback;
  const std::atomic<bool>* cancel = nullptr;

  Impl(const MilpModel& m, BnbConfig c)
      : model(m), cfg(std::move(c)), pool(model, std::max(cfg.pool_size, 1), cfg.diversity_window) {
    if (cfg.gap_target < 0.0 || cfg.gap_target > 1.0) throw InvalidInputError("gap_target must lie in [0, 1]");
    PresolveResult pre = presolve(LpProblem::from_model(model));
    if (pre.infeasible) {
      root_infeasible = true;
      return;
    }
    for (int j = 0; j < model.num_cols(); ++j) {
      if (!model.integral[j]) continue;
      double& lo = pre.problem.col_lower[j];
      double& hi = pre.problem.col_upper[j];
      lo = std::ceil(lo - kIntegralityTolerance);
      hi = std::floor(hi + kIntegralityTolerance);
      if (lo > hi) root_infeasible = true;
    }
    root_lower = pre.problem.col_lower;
    root_upper = pre.problem.col_upper;
    solver.emplace(std::move(pre.problem), cfg.lp);
    if (!root_infeasible) open.push(Node{-kInf, seq++, {}, nullptr});
  }

  double elapsed() const { return std::chrono::duration<double>(Clock::now() - start).count(); }

  double incumbent() const { return pool.best(); }

  bool exhausted() const { return open.empty() && !plunge; }

  double raw_bound() const {
    double b = kInf;
    if (!open.empty()) b = open.top().bound;
    if (plunge) b = std::min(b, plunge->bound);
    return std::min(b, incumbent());
  }

  double bound() {
    const double b = raw_bound();
    reported_bound = std::max(reported_bound, std::min(b, incumbent()));
    return reported_bound;
  }

  void emit(bool force) {
    const double b = bound();
    if (!callback) return;
    if (!force && b == last_event_bound && incumbent() == last_event_incumbent) return;
    last_event_bound = b;
    last_event_incumbent = incumbent();
    callback(BnbProgress{node_count, incumbent(), b, elapsed()});
  }

  double prune_threshold() const { return pool.full() ? incumbent() : kInf; }

  bool pruned_by_bound(double value) const {
    const double t = prune_threshold();
    return std::isfinite(t) && value >= t - 1e-9 * std::max(1.0, std::abs(t));
  }

  std::optional<BnbStatus> stopping_status() {
    if (root_infeasible) return BnbStatus::kInfeasible;
    if (exhausted()) return pool.members().empty() ? BnbStatus::kInfeasible : BnbStatus::kOptimal;
    if (!pool.members().empty()) {
      const double gap = compute_gap(incumbent(), bound());
      if (gap <= 1e-9) return BnbStatus::kOptimal;
      if (gap <= cfg.gap_target) return BnbStatus::kGapReached;
    }
    if (cancel && cancel->load()) return BnbStatus::kCancelled;
    if (cfg.node_limit >= 0 && node_count >= cfg.node_limit) return BnbStatus::kNodeLimit;
    if (elapsed() >= cfg.time_limit) return BnbStatus::kTimeLimit;
    return std::nullopt;
  }

  bool apply_bounds(const Node& node) {
    for (int j : dirty) solver->set_column_bounds(j, root_lower[j], root_upper[j]);
    dirty.clear();
    for (const BoundChange& c : node.changes) {
      const double lo = std::max(solver->column_lower(c.col), c.lower);
      const double hi = std::min(solver->column_upper(c.col), c.upper);
      solver->set_column_bounds(c.col, lo, hi);
      dirty.push_back(c.col);
      if (lo > hi) return false;
    }
    return true;
  }

  void consider_integral(const std::vector<double>& lp_x) {
    std::vector<double> x = lp_x;
    for (int j = 0; j < model.num_cols(); ++j) {
      if (model.integral[j]) x[j] = std::round(x[j]);
    }
    if (model.max_violation(x) > 1e-6) return;
    const double obj = model.objective_value(x);
    pool.offer(MipSolution{std::move(x), obj});
  }

  // Fractional diving from the current node: repeatedly rounds the integer
  // column closest to integrality and re-solves, trying the other rounding
  // once when the relaxation becomes infeasible.
  void dive(const LpSolution& start) {
    LpSolution cur = start;
    for (int step = 0; step < model.num_cols(); ++step) {
      int pick = -1;
      double best = kInf;
      for (int j = 0; j < model.num_cols(); ++j) {
        if (!model.integral[j]) continue;
        const double f = cur.x[j] - std::floor(cur.x[j]);
        const double frac = std::min(f, 1.0 - f);
        if (frac > kIntegralityTolerance && frac < best) {
          best = frac;
          pick = j;
        }
      }
      if (pick < 0) {
        consider_integral(cur.x);
        return;
      }
      const double near = std::round(cur.x[pick]);
      const double far = near > cur.x[pick] ? near - 1.0 : near + 1.0;
      dirty.push_back(pick);
      solver->options().objective_cutoff = prune_threshold();
      LpSolution next;
      for (double v : {near, far}) {
        solver->set_column_bounds(pick, v, v);
        next = solver->solve(cur.basis);
        if (next.status == LpStatus::kOptimal) break;
      }
      if (next.status != LpStatus::kOptimal) return;
      cur = std::move(next);
    }
  }

  void process(Node node) {
    ++node_count;
    if (pruned_by_bound(node.bound)) return;
    if (!apply_bounds(node)) return;
    solver->options().objective_cutoff = prune_threshold();
    const LpSolution sol = solver->solve(node.basis ? *node.basis : Basis{});
    switch (sol.status) {
      case LpStatus::kOptimal: break;
      case LpStatus::kInfeasible:
      case LpStatus::kCutoff: return;
      case LpStatus::kUnbounded: throw ModelError("node relaxation is unbounded");
      case LpStatus::kIterationLimit: throw ModelError("node relaxation hit the iteration limit");
    }
    const double value = std::max(sol.objective, node.bound);
    if (pruned_by_bound(value)) return;

    int branch = -1;
    double best_frac = 0.0;
    for (int j = 0; j < model.num_cols(); ++j) {
      if (!model.integral[j]) continue;
      const double f = sol.x[j] - std::floor(sol.x[j]);
      const double frac = std::min(f, 1.0 - f);
      if (frac > kIntegralityTolerance && frac > best_frac + 1e-12) {
        best_frac = frac;
        branch = j;
      }
    }
    if (branch < 0) {
      consider_integral(sol.x);
      return;
    }
    if (cfg.dive_interval > 0 && (!pool.full() || node_count % cfg.dive_interval == 1)) dive(sol);
    auto basis = std::make_shared<const Basis>(sol.basis);
    const double v = sol.x[branch];
    Node down{value, seq++, node.changes, basis};
    down.changes.push_back({branch, -kInf, std::floor(v)});
    Node up{value, seq++, std::move(node.changes), basis};
    up.changes.push_back({branch, std::ceil(v), kInf});
    if (v - std::floor(v) > 0.5) std::swap(down, up);
    // `down` now holds the child nearer to the relaxed value.
    open.push(std::move(up));
    plunge = std::move(down);
  }

  BnbStatus run(const std::function<bool(const BranchAndBound&)>& stop, const BranchAndBound& self) {
    emit(true);
    while (true) {
      if (auto st = stopping_status()) {
        emit(true);
        return *st;
      }
      if (stop && stop(self)) {
        emit(true);
        return BnbStatus::kTimeLimit;
      }
      Node node;
      if (plunge) {
        node = std::move(*plunge);
        plunge.reset();
      } else {
        node = open.top();
        open.pop();
      }
      process(std::move(node));
      emit(node_count % 100 == 0);
    }
  }
};

BranchAndBound::BranchAndBound(const MilpModel& model, BnbConfig config)
    : impl_(std::make_unique<Impl>(model, std::move(config))) {}
BranchAndBound::~BranchAndBound() = default;
BranchAndBound::BranchAndBound(BranchAndBound&&) noexcept = default;
BranchAndBound& BranchAndBound::operator=(BranchAndBound&&) noexcept = default;

void BranchAndBound::set_callback(BnbCallback callback) { impl_->callback = std::move(callback); }
void BranchAndBound::set_cancel_token(const std::atomic<bool>* cancel) { impl_->cancel = cancel; }

BnbStatus BranchAndBound::run(const std::function<bool(const BranchAndBound&)>& stop) {
  return impl_->run(stop, *this);
}

bool BranchAndBound::offer(const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != impl_->model.num_cols() || impl_->model.max_violation(x) > 1e-6) return false;
  const bool admitted = impl_->pool.offer(MipSolution{x, impl_->model.objective_value(x)});
  if (admitted) impl_->emit(false);
  return admitted;
}

bool BranchAndBound::finished() const {
  return impl_->root_infeasible || impl_->exhausted();
}
long BranchAndBound::nodes() const { return impl_->node_count; }
double BranchAndBound::best_bound() const { return impl_->bound(); }
double BranchAndBound::incumbent_objective() const { return impl_->incumbent(); }
double BranchAndBound::elapsed() const { return impl_->elapsed(); }
const SolutionPool& BranchAndBound::pool() const { return impl_->pool; }

BnbResult BranchAndBound::result() const {
  BnbResult r;
  r.pool = impl_->pool.members();
  r.best_bound = impl_->bound();
  r.node_count = impl_->node_count;
  if (auto st = impl_->stopping_status()) {
    r.status = *st;
  } else {
    r.status = BnbStatus::kTimeLimit;
  }
  return r;
}

BnbResult solve_bnb(const MilpModel& model, const BnbConfig& config, BnbCallback callback,
                    const std::atomic<bool>* cancel) {
  BranchAndBound bnb(model, config);
  bnb.set_callback(std::move(callback));
  bnb.set_cancel_token(cancel);
  const BnbStatus status = bnb.run();
  BnbResult r = bnb.result();
  r.status = status;
  if (r.pool.empty() && status != BnbStatus::kInfeasible) {
    throw InfeasibleError(std::string("branch-and-bound stopped (") + to_string(status) +
                          ") before finding a feasible solution");
  }
  return r;
}

}  // namespace roster
