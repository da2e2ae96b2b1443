#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "roster/lp.hpp"
#include "roster/milp.hpp"

namespace roster {

struct BnbConfig {
  int pool_size = 6;
  double time_limit = kInf;  // seconds
  double gap_target = 0.0;
  long node_limit = -1;  // negative: unlimited
  // A candidate no better than the worst pool member may still enter when
  // its objective is within this fraction of the worst one.
  double diversity_window = 0.10;
  // Fractional dive at every node until the pool is full, then every
  // dive_interval nodes; 0 disables diving.
  int dive_interval = 20;
  LpOptions lp;
};

enum class BnbStatus : std::uint8_t { kOptimal, kGapReached, kTimeLimit, kNodeLimit, kCancelled, kInfeasible };

const char* to_string(BnbStatus status);

struct MipSolution {
  std::vector<double> x;
  double objective = 0.0;
};

struct BnbProgress {
  long nodes = 0;
  double incumbent = kInf;
  double best_bound = -kInf;
  double elapsed = 0.0;
};

using BnbCallback = std::function<void(const BnbProgress&)>;

struct BnbResult {
  std::vector<MipSolution> pool;  // ascending objective
  double best_bound = -kInf;
  BnbStatus status = BnbStatus::kInfeasible;
  long node_count = 0;

  const MipSolution* incumbent() const { return pool.empty() ? nullptr : &pool.front(); }
};

// (ub - lb) / max(ub, 1e-9), clamped at zero. Throws ModelError when the
// bound exceeds the incumbent by more than 1e-9.
double compute_gap(double upper, double lower);

// Normalized Hamming distance over the integer columns of a model.
double pool_distance(const MilpModel& model, const std::vector<double>& a, const std::vector<double>& b);

// Quality-plus-diversity pool. While below capacity every new, distinct
// solution enters. Once full, a candidate replaces the worst member when it
// is strictly better; otherwise, if within the diversity window of the worst,
// it replaces its nearest member provided the minimum pairwise distance grows.
class SolutionPool {
 public:
  SolutionPool(const MilpModel& model, int capacity, double diversity_window);

  bool offer(MipSolution candidate);
  const std::vector<MipSolution>& members() const { return members_; }
  bool full() const { return static_cast<int>(members_.size()) >= capacity_; }
  double best() const { return members_.empty() ? kInf : members_.front().objective; }
  double min_pairwise_distance() const;

 private:
  double distance(const std::vector<double>& a, const std::vector<double>& b) const;

  const MilpModel* model_;
  int capacity_;
  double window_;
  std::vector<MipSolution> members_;
};

struct RelaxAndFixResult {
  MilpModel reduced;
  int fixed = 0;
  int free = 0;
  double lp_bound = -kInf;  // relaxation optimum of the original model
  std::vector<double> lp_solution;
};

// Solves the LP relaxation and fixes every integer column whose relaxed value
// is within kIntegralityTolerance of an integer. Throws InfeasibleError when
// the relaxation is infeasible and ModelError when it is unbounded or the
// iteration limit is hit.
RelaxAndFixResult relax_and_fix(const MilpModel& model, const LpOptions& options = {});

// Best-bound branch-and-bound with plunging and most-fractional branching.
// The search can be paused by `run`'s stop predicate and resumed later.
class BranchAndBound {
 public:
  BranchAndBound(const MilpModel& model, BnbConfig config);
  ~BranchAndBound();
  BranchAndBound(BranchAndBound&&) noexcept;
  BranchAndBound& operator=(BranchAndBound&&) noexcept;

  void set_callback(BnbCallback callback);
  void set_cancel_token(const std::atomic<bool>* cancel);

  // Processes nodes until the tree is exhausted, the gap target, time or
  // node limit is reached, the cancel token is set, or `stop` returns true
  // (checked between nodes; returns the current status without finishing).
  BnbStatus run(const std::function<bool(const BranchAndBound&)>& stop = {});

  // Injects a feasible point found elsewhere; returns false if it is not
  // feasible for the model or was not admitted to the pool.
  bool offer(const std::vector<double>& x);

  bool finished() const;
  long nodes() const;
  double best_bound() const;
  double incumbent_objective() const;
  double elapsed() const;
  const SolutionPool& pool() const;
  BnbResult result() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Runs to completion. Throws InfeasibleError when the time or node limit is
// reached with an empty pool.
BnbResult solve_bnb(const MilpModel& model, const BnbConfig& config, BnbCallback callback = {},
                    const std::atomic<bool>* cancel = nullptr);

}  // namespace roster
