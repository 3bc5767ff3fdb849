#pragma once

#include <Eigen/Dense>

#include <map>
#include <vector>

#include "ssobs/graph.hpp"
#include "ssobs/l1solver.hpp"
#include "ssobs/model.hpp"
#include "ssobs/stacked.hpp"
#include "ssobs/trace.hpp"

namespace ssobs {

/// Form of the linear multiplier term in the z-update. SingleSelf is the
/// gradient of the augmented Lagrangian, lambda_ii + sum_{j in N_i}
/// lambda_ij, and is the default. ReplicatedSelf counts the self multiplier
/// once per neighbour, sum_{j in N_i} (lambda_ij + lambda_ii); it is kept as
/// a documented variant but has no Lagrangian interpretation.
enum class MultiplierForm { ReplicatedSelf, SingleSelf };

struct AdmmConfig {
  double rho_init = 1.0;
  double nu = 10.0;   // penalty scale factor, > 1
  double mu1 = 2.5;   // primal/dual trigger ratios, > 1
  double mu2 = 1.1;
  double alpha = 0.1;  // outer primal residual tolerance
  double beta = 0.1;   // outer dual residual tolerance
  double eta = 0.1;    // inner contraction factor in (0, 1)
  MultiplierForm multiplier_form = MultiplierForm::SingleSelf;
  bool adapt_penalty = true;
  int max_inner_rounds = 2000;
  int max_time_steps = 500;

  void validate() const;
};

Eigen::VectorXd linear_term(const Eigen::VectorXd& lambda_self,
                            const std::vector<Eigen::VectorXd>& lambda_neighbors,
                            MultiplierForm form);

/// Closed-form minimizer of -lambda_lin' b + (rho/2) sum_j ||x_j - b||^2:
/// mean(x_closed) + lambda_lin / (rho * |x_closed|).
Eigen::VectorXd b_update(const std::vector<Eigen::VectorXd>& x_closed,
                         const Eigen::VectorXd& lambda_lin, double rho);

/// rho*nu if r > mu1*s, rho/nu if s > mu2*r, else rho.
double penalty_update(double rho, double r, double s, const AdmmConfig& cfg);

/// Synchronous message board for one network of nodes. Each phase of a round
/// writes only its own slot and reads only slots of adjacent nodes (or its
/// own), so results are independent of the node update order within a phase.
class MessageBoard {
 public:
  explicit MessageBoard(const Topology& topo);

  /// The estimate broadcast carries the sender's current penalty so that
  /// receivers can mirror its dual updates; it is one payload.
  void post_x(int node, const Eigen::VectorXd& x, double rho);
  void post_b(int node, const Eigen::VectorXd& b);
  const Eigen::VectorXd& x_of(int reader, int owner) const;
  double rho_of(int reader, int owner) const;
  const Eigen::VectorXd& b_of(int reader, int owner) const;
  long messages_sent() const { return messages_; }

 private:
  void check_edge(int reader, int owner) const;

  const Topology* topo_;
  std::vector<Eigen::VectorXd> x_;
  std::vector<double> rho_;
  std::vector<Eigen::VectorXd> b_;
  std::vector<bool> x_set_, b_set_;
  long messages_ = 0;
};

/// One agent of the distributed observer: its window, lifted model, ADMM
/// primal/dual state and residual bookkeeping.
class ObserverNode {
 public:
  ObserverNode(int index, StackedLocalModel local, std::vector<int> neighbors,
               const AdmmConfig& cfg, const InnerSolverConfig& inner);

  /// Window push without any state change (priming phase).
  void prime(const Eigen::VectorXd& y);

  /// Time update: push y, propagate the lifted estimate, reset b to the
  /// propagated state estimate and post it.
  void begin_time_step(const Eigen::VectorXd& y, MessageBoard& board);
  /// Static-mode initialization: zero estimate, post b = 0. Requires a
  /// primed window.
  void begin_static(MessageBoard& board);

  /// Returns false when the inner solver hit its iteration cap.
  bool z_phase(MessageBoard& board);
  void b_phase(MessageBoard& board);
  /// Dual updates, residuals and the penalty rule.
  void dual_phase(const MessageBoard& board);

  /// Residual contraction test against the previous time step, with the
  /// outer tolerances as a floor so an already-converged node never stalls
  /// the round loop.
  bool contracted() const;
  bool within_tolerance() const;
  void end_time_step();

  int index() const { return index_; }
  const std::vector<int>& neighbors() const { return neighbors_; }
  const StackedLocalModel& local() const { return local_; }
  MeasurementWindow& window() { return window_; }
  const Eigen::VectorXd& state_estimate() const { return x_; }
  const Eigen::VectorXd& attack_window() const { return attack_window_; }
  const Eigen::VectorXd& consensus_var() const { return b_; }
  const Eigen::VectorXd& multiplier_self() const { return lambda_self_; }
  const Eigen::VectorXd& multiplier_to(int j) const { return lambda_nb_.at(j); }
  const Eigen::VectorXd& multiplier_mirror(int j) const {
    return lambda_in_.at(j);
  }
  double rho() const { return rho_; }
  double primal_residual() const { return r_; }
  double dual_residual() const { return s_; }

 private:
  Eigen::VectorXd lifted_estimate() const;  // (x, E)

  int index_;
  StackedLocalModel local_;
  std::vector<int> neighbors_;
  AdmmConfig cfg_;
  MeasurementWindow window_;
  NodeSubproblemSolver solver_;

  Eigen::VectorXd x_;              // state part of the lifted estimate
  Eigen::VectorXd attack_window_;  // attack part
  Eigen::VectorXd b_;
  Eigen::VectorXd b_prev_;
  Eigen::VectorXd lambda_self_;
  std::map<int, Eigen::VectorXd> lambda_nb_;  // lambda_ij, outgoing
  // Mirror of each neighbour's multiplier lambda_ji toward this node's b.
  // Both endpoints apply the identical update to it, so no extra message is
  // needed to keep the copies equal.
  std::map<int, Eigen::VectorXd> lambda_in_;
  double rho_;
  double r_, s_;            // current residuals
  double r_prev_, s_prev_;  // final residuals of the previous time step
};

struct RoundStats {
  bool solvers_converged = true;
};

/// Synchronous driver for the network: owns the nodes, the message board and
/// the phase barriers.
class DistributedObserver {
 public:
  DistributedObserver(const PlantModel& plant, Topology topo, int tau,
                      AdmmConfig cfg, InnerSolverConfig inner = {});

  // The message board keeps a pointer into this object, so it is pinned.
  DistributedObserver(const DistributedObserver&) = delete;
  DistributedObserver& operator=(const DistributedObserver&) = delete;

  /// Recursive observer: consumes the whole trajectory (up to the step cap),
  /// one time update per step followed by rounds until the per-node
  /// residuals contract or the round cap hits. Reports "converged" when the
  /// final step closed with every node inside the residual tolerances.
  RunResult run(const PlantTrajectory& traj);

  /// Static estimation of x[0] from the first tau measurements: rounds on
  /// the fixed batch until all residuals are within tolerance or the round
  /// cap is reached. One trace record per round.
  RunResult run_dsse(const PlantTrajectory& traj);

  /// One full round over every node (z, b, dual phases with barriers).
  /// `order` permutes the per-phase node iteration; the result does not
  /// depend on it.
  RoundStats admm_round(const std::vector<int>& order = {});

  std::vector<ObserverNode>& nodes() { return nodes_; }
  MessageBoard& board() { return board_; }
  const Topology& topology() const { return topo_; }
  int tau() const { return tau_; }

 private:
  Eigen::VectorXd node_measurement(const PlantTrajectory& traj, int node,
                                   int t) const;
  TraceRecord make_record(const PlantTrajectory& traj, int t, int truth_index,
                          int rounds, long messages) const;
  void finalize_summary(RunResult& out) const;

  PlantModel plant_;
  Topology topo_;
  int tau_;
  AdmmConfig cfg_;
  std::vector<ObserverNode> nodes_;
  MessageBoard board_;
};

}  // namespace ssobs
