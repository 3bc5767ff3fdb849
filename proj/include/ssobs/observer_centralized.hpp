#pragma once

#include <Eigen/Dense>

#include "ssobs/model.hpp"
#include "ssobs/stacked.hpp"
#include "ssobs/trace.hpp"

namespace ssobs {

struct CentralConfig {
  double rho = 1.0;      // fixed penalty (no adaptation in this variant)
  double alpha = 1e-5;   // primal residual tolerance
  double eta = 0.1;      // inner contraction factor in (0, 1)
  double tol_bcd = 1e-10;
  int max_sweeps = 200;
  int max_inner_rounds = 2000;
  int max_time_steps = 2000;

  void validate() const;
};

struct CentralState {
  Eigen::VectorXd z;       // (x, E) lifted estimate
  Eigen::VectorXd lambda;  // multiplier of the dualized output constraint
  double rho = 0.0;
  double r = 0.0;  // primal residual ||Q z - Ybar||
};

/// Centralized observer dualizing the full output constraint Q z = Ybar.
/// The z-update minimizes ||E||_1 + (rho/2)||O x + E - Ybar + lambda/rho||^2
/// by block-coordinate sweeps: a soft-threshold in E and a least-squares
/// solve in x through a factorization of O cached at construction.
class CentralizedObserver {
 public:
  /// Throws std::runtime_error when the stacked observability map O is
  /// rank-deficient (the x-block least squares would be ill-posed).
  CentralizedObserver(const PlantModel& plant, int tau, CentralConfig cfg);

  RunResult run(const PlantTrajectory& traj);

  /// Inner loop alone on a fixed output window: dual ascent until
  /// r <= alpha or the round cap. Used by the equivalence harness.
  CentralState solve_batch(const Eigen::VectorXd& Y_bar) const;

  /// One z-update from the given state (exposed for direct checks).
  Eigen::VectorXd z_update(const Eigen::VectorXd& z,
                           const Eigen::VectorXd& lambda,
                           const Eigen::VectorXd& Y_bar) const;

  const StackedGlobalModel& global() const { return global_; }

 private:
  Eigen::VectorXd split_x(const Eigen::VectorXd& z) const;
  Eigen::VectorXd split_E(const Eigen::VectorXd& z) const;

  PlantModel plant_;
  StackedGlobalModel global_;
  CentralConfig cfg_;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> O_qr_;
};

}  // namespace ssobs
