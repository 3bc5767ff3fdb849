#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace ssobs {

enum class Discretization { ExactZoh, ForwardEuler };

/// Continuous-time plant x' = A x, y = C x (rates in 1/s).
struct ContinuousPlant {
  Eigen::MatrixXd A;
  Eigen::MatrixXd C;

  int n() const { return static_cast<int>(A.rows()); }
  int p() const { return static_cast<int>(C.rows()); }
};

/// Discrete-time plant x[t+1] = A x[t], y[t] = C x[t] + a[t], with the sensor
/// rows of C assigned to observers contiguously: observer i owns sensors
/// [sensor_offset(i), sensor_offset(i) + partition[i]).
struct PlantModel {
  Eigen::MatrixXd A;
  Eigen::MatrixXd C;
  std::vector<int> partition;
  double h = 0.0;  // sampling period the model was derived with (metadata)

  int n() const { return static_cast<int>(A.rows()); }
  int p() const { return static_cast<int>(C.rows()); }
  int num_observers() const { return static_cast<int>(partition.size()); }
  int sensor_offset(int i) const;
  /// C rows owned by observer i.
  Eigen::MatrixXd sensor_rows(int i) const;

  /// Throws std::invalid_argument on dimension or partition inconsistencies.
  void validate() const;
};

/// Attack with a fixed support set: each attacked sensor receives an
/// i.i.d. uniform[-amplitude, amplitude] signal per step from the seeded
/// generator; all other sensors are clean. Sensor indices are 0-based.
struct AttackModel {
  std::vector<int> support;
  int s = 0;  // sparsity budget, |support| <= s
  double amplitude = 1.0;
  std::uint64_t seed = 0;
};

struct PlantTrajectory {
  std::vector<Eigen::VectorXd> states;   // x[0..T]
  std::vector<Eigen::VectorXd> outputs;  // y[0..T]
  std::vector<Eigen::VectorXd> attacks;  // a[0..T]

  int length() const { return static_cast<int>(states.size()); }
};

/// Discretizes the plant with sampling period h. ExactZoh uses the matrix
/// exponential exp(A*h) (scaling-and-squaring); ForwardEuler returns I + h*A.
PlantModel discretize(const ContinuousPlant& plant, double h,
                      Discretization method, std::vector<int> partition);

/// Rolls the plant forward for `steps` transitions, producing states, outputs
/// and attack signals for t = 0..steps. Attack draws are ordered time-major,
/// then by ascending attacked sensor index, so trajectories are reproducible.
PlantTrajectory simulate(const PlantModel& plant, const Eigen::VectorXd& x0,
                         const AttackModel& attack, int steps);

/// Vertical stack [C; CA; ...; CA^(depth-1)].
Eigen::MatrixXd observability_matrix(const Eigen::MatrixXd& A,
                                     const Eigen::MatrixXd& C_rows, int depth);

/// Numerical rank via singular values with tolerance max_dim * eps * sigma_max.
int matrix_rank(const Eigen::MatrixXd& m);

/// True iff (A, C) stays observable after deleting any s sensor rows.
bool check_s_sparse_observable(const PlantModel& plant, int s);

}  // namespace ssobs
