#include "ssobs/l1solver.hpp"

#include <cmath>
#include <stdexcept>

namespace ssobs {

void InnerSolverConfig::validate() const {
  if (sigma <= 0.0) throw std::invalid_argument("sigma must be positive");
  if (tol <= 0.0) throw std::invalid_argument("tol must be positive");
  if (max_iterations < 1) {
    throw std::invalid_argument("max_iterations must be >= 1");
  }
}

Eigen::VectorXd soft_threshold(const Eigen::VectorXd& v, double kappa) {
  if (kappa < 0.0) throw std::invalid_argument("threshold must be >= 0");
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i)) - kappa;
    out(i) = mag > 0.0 ? (v(i) > 0.0 ? mag : -mag) : 0.0;
  }
  return out;
}

NodeSubproblemSolver::NodeSubproblemSolver(Eigen::MatrixXd O,
                                           InnerSolverConfig cfg)
    : O_(std::move(O)), cfg_(cfg) {
  cfg_.validate();
  if (O_.rows() == 0 || O_.cols() == 0) {
    throw std::invalid_argument("output map must be non-empty");
  }
  OtO_ = O_.transpose() * O_;
}

void NodeSubproblemSolver::refactor(double rho, int m) {
  if (rho == cached_rho_ && m == cached_m_) return;
  Eigen::MatrixXd H = cfg_.sigma * OtO_;
  H.diagonal().array() += rho * m;
  ldlt_.compute(H);
  if (ldlt_.info() != Eigen::Success) {
    throw std::runtime_error("subproblem system factorization failed");
  }
  cached_rho_ = rho;
  cached_m_ = m;
}

NodeSubproblemResult NodeSubproblemSolver::solve(
    const std::vector<Eigen::VectorXd>& b_closed,
    const Eigen::VectorXd& lambda_lin, double rho, const Eigen::VectorXd& Y,
    const Eigen::VectorXd& x_warm) {
  const auto n = O_.cols();
  if (b_closed.empty()) throw std::invalid_argument("need at least one center");
  if (rho <= 0.0) throw std::invalid_argument("rho must be positive");
  if (lambda_lin.size() != n || x_warm.size() != n || Y.size() != O_.rows()) {
    throw std::invalid_argument("subproblem dimension mismatch");
  }
  const int m = static_cast<int>(b_closed.size());
  refactor(rho, m);

  Eigen::VectorXd b_sum = Eigen::VectorXd::Zero(n);
  for (const auto& b : b_closed) {
    if (b.size() != n) throw std::invalid_argument("center dimension mismatch");
    b_sum += b;
  }
  const Eigen::VectorXd base = rho * b_sum - lambda_lin;

  Eigen::VectorXd x = x_warm;
  Eigen::VectorXd w = Y - O_ * x;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(O_.rows());

  NodeSubproblemResult res;
  const double kappa = 1.0 / cfg_.sigma;
  for (int it = 1; it <= cfg_.max_iterations; ++it) {
    x = ldlt_.solve(base + cfg_.sigma * (O_.transpose() * (Y - w - u)));
    const Eigen::VectorXd Ox = O_ * x;
    const Eigen::VectorXd w_old = w;
    w = soft_threshold(Y - Ox - u, kappa);
    const Eigen::VectorXd gap = Ox + w - Y;
    u += gap;
    res.iterations = it;
    const double r_split = gap.norm();
    const double s_split = cfg_.sigma * (O_.transpose() * (w - w_old)).norm();
    if (r_split <= cfg_.tol && s_split <= cfg_.tol) {
      res.converged = true;
      break;
    }
  }
  res.x = x;
  res.attack_window = Y - O_ * x;
  res.dual = -cfg_.sigma * u;
  return res;
}

}  // namespace ssobs
