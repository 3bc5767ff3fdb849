#pragma once

#include <Eigen/Dense>

#include <vector>

#include "ssobs/model.hpp"

namespace ssobs {

// Lifted representation of the plant over a tau-step window. The lifted state
//   z[t] = (x[t-tau+1], E[t]),   E[t] = (E_1[t], ..., E_p[t]),
//   E_j[t] = (a_j[t-tau+1], ..., a_j[t])
// evolves as z[t] = A_bar z[t-1] + N y[t], and the window of outputs
//   Ybar[t] = (Ybar_1[t], ..., Ybar_p[t]),  Ybar_j[t] = (y_j[t-tau+1..t])
// satisfies Ybar[t] = Q z[t] with Q = [O | I]. Blocks are sensor-major,
// oldest sample first within each sensor.

struct StackedGlobalModel {
  Eigen::MatrixXd A_bar;           // (n+p*tau) x (n+p*tau)
  Eigen::MatrixXd Q;               // p*tau x (n+p*tau)
  Eigen::MatrixXd N;               // (n+p*tau) x p
  Eigen::MatrixXd O;               // p*tau x n, stacked per-sensor blocks
  Eigen::MatrixXd S;               // tau x tau upper shift
  std::vector<Eigen::MatrixXd> G;  // per sensor, tau x n, last row -C_j A^tau
  int tau = 0;
  int n = 0;
  int p = 0;

  int dim() const { return n + p * tau; }
};

/// Per-node restriction of the lifted model to the sensors the node owns.
struct StackedLocalModel {
  int node = 0;
  Eigen::MatrixXd O;      // p_i*tau x n
  Eigen::MatrixXd Q;      // p_i*tau x (n + p_i*tau), equals [O | I]
  Eigen::MatrixXd A_bar;  // (n + p_i*tau) square
  Eigen::MatrixXd N;      // (n + p_i*tau) x p_i
  int tau = 0;
  int n = 0;
  int p_i = 0;

  int dim() const { return n + p_i * tau; }
};

StackedGlobalModel build_global(const PlantModel& plant, int tau);
StackedLocalModel build_local(const PlantModel& plant, int tau, int node);

/// Sliding window of the last tau measurement vectors of one node. Stacked
/// access is sensor-major, oldest-first, matching the lifted E layout.
class MeasurementWindow {
 public:
  MeasurementWindow(int num_sensors, int tau);

  void push(const Eigen::VectorXd& y);
  bool primed() const { return count_ >= tau_; }
  int tau() const { return tau_; }

  /// Stacked window Y[t]; throws std::logic_error while unprimed.
  Eigen::VectorXd stacked() const;
  /// Window of sensor j (local index), oldest first.
  Eigen::VectorXd sensor_window(int j) const;

 private:
  int num_sensors_;
  int tau_;
  int count_ = 0;
  std::vector<Eigen::VectorXd> ring_;
};

/// One step of the lifted dynamics: A_bar z_prev + N y.
Eigen::VectorXd time_update(const StackedLocalModel& local,
                            const Eigen::VectorXd& z_prev,
                            const Eigen::VectorXd& y);
Eigen::VectorXd time_update(const StackedGlobalModel& global,
                            const Eigen::VectorXd& z_prev,
                            const Eigen::VectorXd& y);

}  // namespace ssobs
