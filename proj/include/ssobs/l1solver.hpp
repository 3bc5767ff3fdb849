#pragma once

#include <Eigen/Dense>

#include <vector>

namespace ssobs {

struct InnerSolverConfig {
  double sigma = 1.0;       // splitting penalty
  double tol = 1e-8;        // primal/dual residual tolerance
  int max_iterations = 2000;

  void validate() const;
};

/// Componentwise sign(v_i) * max(|v_i| - kappa, 0).
Eigen::VectorXd soft_threshold(const Eigen::VectorXd& v, double kappa);

struct NodeSubproblemResult {
  Eigen::VectorXd x;              // state estimate
  Eigen::VectorXd attack_window;  // Y - O x, so the output constraint is exact
  Eigen::VectorXd dual;           // subgradient certificate for the l1 term
  bool converged = false;
  int iterations = 0;
};

// Solves the per-node subproblem
//   min_{x, E}  ||E||_1 + lambda_lin' x + (rho/2) sum_b ||x - b||^2
//   s.t.        O x + E = Y
// by eliminating E = Y - O x and splitting w = Y - O x, which alternates a
// linear solve in x, a soft-threshold in w and a scaled dual step. The x-step
// system matrix (rho*m*I + sigma*O'O) is factorized once and reused until rho
// changes.
class NodeSubproblemSolver {
 public:
  explicit NodeSubproblemSolver(Eigen::MatrixXd O, InnerSolverConfig cfg = {});

  /// b_closed holds the quadratic centers (own b first, then neighbours in
  /// ascending index order); x_warm seeds the iteration. rho must be > 0.
  NodeSubproblemResult solve(const std::vector<Eigen::VectorXd>& b_closed,
                             const Eigen::VectorXd& lambda_lin, double rho,
                             const Eigen::VectorXd& Y,
                             const Eigen::VectorXd& x_warm);

  const Eigen::MatrixXd& output_map() const { return O_; }

 private:
  void refactor(double rho, int m);

  Eigen::MatrixXd O_;
  Eigen::MatrixXd OtO_;
  InnerSolverConfig cfg_;
  Eigen::LDLT<Eigen::MatrixXd> ldlt_;
  double cached_rho_ = -1.0;
  int cached_m_ = -1;
};

}  // namespace ssobs
