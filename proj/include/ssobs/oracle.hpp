#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace ssobs {

struct ScenarioConfig;

struct L0Solution {
  Eigen::VectorXd x;
  Eigen::VectorXd attack;    // stacked p*tau window, nonzero only on support
  std::vector<int> support;  // 0-based sensor indices
  double residual = 0.0;
  bool consistent = false;   // false: no subset attained the threshold
};

/// Exact minimum-support decoder of O x + E = Y_bar with block-sparse E:
/// enumerates candidate attacked-sensor subsets in increasing cardinality
/// (lexicographic within a cardinality), solves least squares on the
/// remaining rows and accepts the first subset whose residual is below eps0.
/// Exponential in s; intended as a desk-scale ground-truth reference.
L0Solution l0_decode(const Eigen::VectorXd& Y_bar, const Eigen::MatrixXd& O,
                     int p, int tau, int s, double eps0 = 1e-8);

/// Sensors whose window block in the stacked attack estimate E (p blocks of
/// length tau) has an entry above eps, in ascending order.
std::vector<int> attack_support(const Eigen::VectorXd& E, int p, int tau,
                                double eps);

/// Outcome of the sampling falsifier for uniqueness of l1 recovery. Not
/// falsified is NOT a proof that the condition holds.
struct RecoveryConditionReport {
  bool falsified = false;
  std::vector<int> gamma;   // violating sensor subset when falsified
  Eigen::VectorXd witness;  // direction with f_gamma(witness) <= 0
  double value = 0.0;       // attained f_gamma minimum over all starts
};

/// Searches for a direction x on the unit sphere and a size-s sensor subset
/// G with sum_{j in G} ||O_j x||_1 >= sum_{j not in G} ||O_j x||_1, which
/// would break the l1/l0 equivalence. Multi-start projected subgradient
/// descent per subset; any reported witness is re-checked by direct
/// evaluation.
RecoveryConditionReport check_recovery_condition(const Eigen::MatrixXd& O,
                                                 int p, int tau, int s,
                                                 int restarts = 20,
                                                 int steps = 500,
                                                 std::uint64_t seed = 1);

/// Cross-check of the three solvers on one fixed measurement batch.
struct EquivalenceReport {
  Eigen::VectorXd x_l0;
  Eigen::VectorXd x_central;
  std::vector<Eigen::VectorXd> x_dsse;  // per node
  std::vector<int> support_l0;
  std::vector<int> support_central;
  std::vector<int> support_dsse;
  bool condition_falsified = false;
  double dist_l0_central = 0.0;
  double dist_l0_dsse = 0.0;    // max over nodes
  double dist_central_dsse = 0.0;
  bool agree = false;           // all pairwise distances below tol
  double tol = 0.0;

  std::string text() const;
};

/// Runs the enumeration decoder, the distributed static estimator and the
/// centralized batch solver on the scenario's first measurement window and
/// reports pairwise distances and support agreement. Report-only: a
/// disagreement is flagged, not thrown.
EquivalenceReport verify_equivalence(const ScenarioConfig& cfg, double tol);

}  // namespace ssobs
