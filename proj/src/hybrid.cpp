#include "roster/hybrid.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <sstream>

#include "roster/errors.hpp"

namespace roster {

const char* to_string(SolveMode mode) {
  return mode == SolveMode::kHybrid ? "hybrid" : "milp";
}

const char* to_string(Phase phase) {
  switch (phase) {
    case Phase::kRelaxFix: return "relax_fix";
    case Phase::kBnb: return "bnb";
    case Phase::kScatter: return "scatter";
  }
  return "unknown";
}

std::optional<SolveMode> parse_solve_mode(const std::string& text) {
  if (text == "hybrid") return SolveMode::kHybrid;
  if (text == "milp" || text == "milp_alone") return SolveMode::kMilpAlone;
  return std::nullopt;
}

const char* to_string(OptimizationStatus status) {
  switch (status) {
    case OptimizationStatus::kOptimal: return "optimal";
    case OptimizationStatus::kGapReached: return "gap_reached";
    case OptimizationStatus::kTimeLimit: return "time_limit";
    case OptimizationStatus::kCancelled: return "cancelled";
    case OptimizationStatus::kInfeasible: return "infeasible";
    case OptimizationStatus::kNoSolution: return "no_solution";
  }
  return "unknown";
}

void HybridConfig::validate() const {
  if (!(gap_target > 0.0 && gap_target <= 1.0)) throw InvalidInputError("gap_target must lie in (0, 1]");
  if (!(phase1_time_budget > 0.0)) throw InvalidInputError("phase1_time_budget must be positive");
  if (!(total_time_limit > 0.0)) throw InvalidInputError("total_time_limit must be positive");
  if (pool_size < 1) throw InvalidInputError("pool_size must be positive");
  if (refset_size < 1) throw InvalidInputError("refset_size must be positive");
}

namespace {

using Clock = std::chrono::steady_clock;

// Keeps the merged event stream monotone: the best known roster and the best
// known bound can only improve, whatever phase reports them.
class Emitter {
 public:
  Emitter(OptimizationResult& result, const ProgressSink& sink, Clock::time_point start)
      : result_(result), sink_(sink), start_(start) {}

  double elapsed() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }

  void emit(Phase phase, double incumbent, double bound, std::string detail) {
    incumbent_ = std::min(incumbent_, incumbent);
    bound_ = std::max(bound_, bound);
    if (bound_ > incumbent_) bound_ = incumbent_;
    ProgressEvent ev;
    ev.elapsed = elapsed();
    ev.phase = phase;
    ev.incumbent = incumbent_;
    ev.bound = bound_;
    ev.gap = gap();
    ev.detail = std::move(detail);
    result_.trace.push_back(ev);
    if (sink_) sink_(ev);
  }

  double incumbent() const { return incumbent_; }
  double bound() const { return bound_; }
  double gap() const { return std::isfinite(incumbent_) ? compute_gap(incumbent_, bound_) : kInf; }

 private:
  OptimizationResult& result_;
  const ProgressSink& sink_;
  Clock::time_point start_;
  double incumbent_ = kInf;
  double bound_ = -kInf;
};

std::string node_detail(long nodes) { return "nodes=" + std::to_string(nodes); }

bool cancelled(const std::atomic<bool>* cancel) { return cancel && cancel->load(); }

void finish(OptimizationResult& r, const OptimizationProblem& p, const Emitter& em, const ScoredRoster* best,
            bool exhausted, double gap_target, const std::atomic<bool>* cancel) {
  r.timings.total = em.elapsed();
  if (!best) return;
  r.roster = best->roster;
  r.breakdown = evaluate_objective(*p.search.instance, best->roster, p.search.weights, p.search.objective);
  r.objective = r.breakdown.total;
  r.lower_bound = std::min(em.bound(), r.objective);
  r.gap = compute_gap(r.objective, r.lower_bound);
  if (exhausted || r.gap <= 1e-9) {
    r.status = OptimizationStatus::kOptimal;
  } else if (r.gap <= gap_target) {
    r.status = OptimizationStatus::kGapReached;
  } else if (cancelled(cancel)) {
    r.status = OptimizationStatus::kCancelled;
  } else {
    r.status = OptimizationStatus::kTimeLimit;
  }
}

std::vector<ScoredRoster> pool_rosters(const OptimizationProblem& p, const SolutionPool& pool) {
  std::vector<ScoredRoster> out;
  for (const MipSolution& s : pool.members()) {
    Roster x = extract_roster(p.model->map, s.x);
    const double f = p.search.evaluate(x);
    out.push_back({std::move(x), f});
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.objective < b.objective; });
  return out;
}

OptimizationResult run_milp_alone(const OptimizationProblem& p, const HybridConfig& cfg, const ProgressSink& sink,
                                  const std::atomic<bool>* cancel) {
  OptimizationResult r;
  Emitter em(r, sink, Clock::now());
  BnbConfig bc = cfg.bnb;
  bc.pool_size = cfg.pool_size;
  bc.time_limit = cfg.total_time_limit;
  bc.gap_target = cfg.gap_target;
  BranchAndBound bnb(p.model->model, bc);
  bnb.set_cancel_token(cancel);
  bnb.set_callback([&](const BnbProgress& pr) { em.emit(Phase::kBnb, pr.incumbent, pr.best_bound, node_detail(pr.nodes)); });
  const BnbStatus st = bnb.run();
  r.timings.bnb = em.elapsed();
  r.nodes = bnb.nodes();
  r.initial_population = pool_rosters(p, bnb.pool());
  if (r.initial_population.empty()) {
    r.status = st == BnbStatus::kInfeasible ? OptimizationStatus::kInfeasible : OptimizationStatus::kNoSolution;
    r.message = st == BnbStatus::kInfeasible ? "the search tree is exhausted without a feasible roster"
                                             : "no feasible roster found within the time limit; relax the instance or allow more time";
    r.timings.total = em.elapsed();
    return r;
  }
  em.emit(Phase::kBnb, r.initial_population.front().objective, bnb.best_bound(), node_detail(bnb.nodes()));
  finish(r, p, em, &r.initial_population.front(), st == BnbStatus::kOptimal, cfg.gap_target, cancel);
  return r;
}

}  // namespace

OptimizationResult optimize(const OptimizationProblem& p, const HybridConfig& cfg, const ProgressSink& sink,
                            const std::atomic<bool>* cancel) {
  cfg.validate();
  if (!p.model || !p.search.instance) throw InvalidInputError("optimization problem is incomplete");
  if (cfg.mode == SolveMode::kMilpAlone) return run_milp_alone(p, cfg, sink, cancel);

  OptimizationResult r;
  Emitter em(r, sink, Clock::now());
  const MilpModel& full = p.model->model;

  std::optional<RelaxAndFixResult> rf;
  if (cfg.use_relax_and_fix) {
    try {
      rf = relax_and_fix(full, cfg.bnb.lp);
    } catch (const InfeasibleError&) {
      r.status = OptimizationStatus::kInfeasible;
      r.message = "the LP relaxation is infeasible";
      r.timings.relax_fix = r.timings.total = em.elapsed();
      return r;
    }
    r.timings.relax_fix = em.elapsed();
    r.fixed_columns = rf->fixed;
    r.reduced_model = true;
    em.emit(Phase::kRelaxFix, kInf, rf->lp_bound,
            "fixed=" + std::to_string(rf->fixed) + " free=" + std::to_string(rf->free));
  }

  // Phase 1. A bound from the reduced model is not valid for the full one, so
  // only the relaxation bound is reported while it runs.
  const auto phase1 = [&](const MilpModel& model, bool reduced) {
    BnbConfig bc = cfg.bnb;
    bc.pool_size = cfg.pool_size;
    bc.time_limit = cfg.total_time_limit - em.elapsed();
    bc.gap_target = reduced ? 0.0 : cfg.gap_target;
    auto bnb = std::make_unique<BranchAndBound>(model, bc);
    const double start = em.elapsed();
    bnb->set_cancel_token(cancel);
    bnb->set_callback([&, reduced](const BnbProgress& pr) {
      em.emit(Phase::kBnb, pr.incumbent, reduced ? rf->lp_bound : pr.best_bound, node_detail(pr.nodes));
    });
    const BnbStatus st = bnb->run([&](const BranchAndBound& b) {
      const double t = em.elapsed();
      if (b.pool().full() && std::isfinite(b.best_bound())) return true;
      if (t - start >= cfg.phase1_time_budget && !b.pool().members().empty()) return true;
      return t >= cfg.total_time_limit;
    });
    return std::make_pair(std::move(bnb), st);
  };

  const double phase1_start = em.elapsed();
  auto [bnb, st] = phase1(rf ? rf->reduced : full, rf.has_value());
  r.nodes = bnb->nodes();
  if (rf && bnb->pool().members().empty() && st == BnbStatus::kInfeasible) {
    r.fell_back = true;
    r.reduced_model = false;
    em.emit(Phase::kBnb, kInf, rf->lp_bound, "reduced model infeasible; solving the full model");
    std::tie(bnb, st) = phase1(full, false);
    r.nodes += bnb->nodes();
  }
  r.timings.bnb = em.elapsed() - phase1_start;
  r.initial_population = pool_rosters(p, bnb->pool());
  if (r.initial_population.empty()) {
    const bool proven = st == BnbStatus::kInfeasible;
    r.status = proven ? OptimizationStatus::kInfeasible
                      : (cancelled(cancel) ? OptimizationStatus::kCancelled : OptimizationStatus::kNoSolution);
    r.message = proven ? "the search tree is exhausted without a feasible roster"
                       : "no feasible roster found within the time limit; relax the instance or allow more time";
    r.timings.total = em.elapsed();
    return r;
  }

  const bool on_full = !r.reduced_model;
  const bool exhausted = on_full && bnb->finished();
  double lower_bound = on_full ? bnb->best_bound() : rf->lp_bound;
  if (rf) lower_bound = std::max(lower_bound, rf->lp_bound);
  ScoredRoster best = r.initial_population.front();
  em.emit(Phase::kBnb, best.objective, lower_bound, node_detail(r.nodes));
  if (exhausted || em.gap() <= cfg.gap_target || cancelled(cancel)) {
    finish(r, p, em, &best, exhausted, cfg.gap_target, cancel);
    return r;
  }
  lower_bound = std::min(em.bound(), best.objective);

  // Phase 2.
  const double scatter_start = em.elapsed();
  if (cfg.total_time_limit > scatter_start) {
    ScatterConfig sc;
    sc.gap_target = cfg.gap_target;
    sc.time_limit = cfg.total_time_limit - scatter_start;
    sc.local_search = cfg.local_search;
    sc.local_search.rng_seed = cfg.seed;
    ScatterCallbacks cb;
    cb.on_improvement = [&](const ScoredRoster& s, double) {
      em.emit(Phase::kScatter, s.objective, lower_bound, "improved");
    };
    cb.on_generation = [&](const GenerationTrace& g) {
      std::ostringstream os;
      os << "generation=" << g.generation << " subsets=" << g.subsets << " accepted=" << g.accepted
         << " rejected=" << g.rejected;
      em.emit(Phase::kScatter, g.best, lower_bound, os.str());
    };
    ScatterResult sr = run_scatter_search(p.search, diversify(r.initial_population, cfg.refset_size), lower_bound,
                                          sc, cb, cancel);
    r.scatter_trace = std::move(sr.trace);
    if (sr.best.objective < best.objective) best = sr.best;
  }
  r.timings.scatter = em.elapsed() - scatter_start;

  // Bound closing on the full model, seeded with the best roster.
  bool closed = false;
  if (cfg.close_bound && em.gap() > cfg.gap_target && !cancelled(cancel) && em.elapsed() < cfg.total_time_limit) {
    const double start = em.elapsed();
    BnbConfig bc = cfg.bnb;
    bc.pool_size = 1;
    bc.time_limit = cfg.total_time_limit - start;
    bc.gap_target = cfg.gap_target;
    BranchAndBound closing(full, bc);
    closing.set_cancel_token(cancel);
    closing.offer(lift_roster(*p.search.instance, p.model->map, best.roster));
    closing.set_callback([&](const BnbProgress& pr) {
      em.emit(Phase::kBnb, pr.incumbent, pr.best_bound, node_detail(r.nodes + pr.nodes));
    });
    closing.run();
    r.nodes += closing.nodes();
    closed = closing.finished();
    const BnbResult cr = closing.result();
    if (const MipSolution* inc = cr.incumbent()) {
      Roster x = extract_roster(p.model->map, inc->x);
      const double f = p.search.evaluate(x);
      if (f < best.objective) best = {std::move(x), f};
    }
    em.emit(Phase::kBnb, best.objective, closing.best_bound(), node_detail(r.nodes));
    r.timings.bnb += em.elapsed() - start;
  }
  finish(r, p, em, &best, closed, cfg.gap_target, cancel);
  return r;
}

OptimizationResult optimize(const RosterInstance& instance, const ObjectiveWeights& weights,
                            const HybridConfig& config, const ProgressSink& sink, const std::atomic<bool>* cancel) {
  const ValidationReport v = validate_instance(instance);
  if (!v.ok()) throw InvalidInputError("invalid instance: " + v.issues.front());
  const BuiltModel built = build_milp(instance, weights);
  OptimizationProblem p;
  p.search.instance = &instance;
  p.search.weights = weights;
  p.model = &built;
  return optimize(p, config, sink, cancel);
}

}  // namespace roster
