#include "ssobs/stacked.hpp"

#include <stdexcept>

namespace ssobs {

namespace {

Eigen::MatrixXd upper_shift(int tau) {
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(tau, tau);
  for (int i = 0; i + 1 < tau; ++i) S(i, i + 1) = 1.0;
  return S;
}

// Powers A^0..A^tau of the plant matrix.
std::vector<Eigen::MatrixXd> matrix_powers(const Eigen::MatrixXd& A, int tau) {
  std::vector<Eigen::MatrixXd> pow(tau + 1);
  pow[0] = Eigen::MatrixXd::Identity(A.rows(), A.cols());
  for (int k = 1; k <= tau; ++k) pow[k] = pow[k - 1] * A;
  return pow;
}

// Assembles the lifted matrices for an arbitrary contiguous sensor range
// [first, first + count). The global model uses the full range, a local model
// the range a node owns.
void assemble(const PlantModel& plant, int tau, int first, int count,
              Eigen::MatrixXd& A_bar, Eigen::MatrixXd& Q, Eigen::MatrixXd& N,
              Eigen::MatrixXd& O, std::vector<Eigen::MatrixXd>* G_out) {
  const int n = plant.n();
  const int dim = n + count * tau;
  const auto pow = matrix_powers(plant.A, tau);
  const Eigen::MatrixXd S = upper_shift(tau);

  A_bar = Eigen::MatrixXd::Zero(dim, dim);
  A_bar.topLeftCorner(n, n) = plant.A;
  Q = Eigen::MatrixXd::Zero(count * tau, dim);
  Q.rightCols(count * tau).setIdentity();
  N = Eigen::MatrixXd::Zero(dim, count);
  O = Eigen::MatrixXd::Zero(count * tau, n);

  for (int j = 0; j < count; ++j) {
    const Eigen::MatrixXd C_j = plant.C.row(first + j);
    const int row = n + j * tau;

    Eigen::MatrixXd G_j = Eigen::MatrixXd::Zero(tau, n);
    G_j.row(tau - 1) = -C_j * pow[tau];
    A_bar.block(row, 0, tau, n) = G_j;
    A_bar.block(row, row, tau, tau) = S;
    N(row + tau - 1, j) = 1.0;

    for (int k = 0; k < tau; ++k) {
      O.row(j * tau + k) = C_j * pow[k];
    }
    Q.block(j * tau, 0, tau, n) = O.middleRows(j * tau, tau);
    if (G_out) G_out->push_back(G_j);
  }
}

}  // namespace

StackedGlobalModel build_global(const PlantModel& plant, int tau) {
  plant.validate();
  if (tau < 1) throw std::invalid_argument("window length tau must be >= 1");
  StackedGlobalModel m;
  m.tau = tau;
  m.n = plant.n();
  m.p = plant.p();
  m.S = upper_shift(tau);
  assemble(plant, tau, 0, plant.p(), m.A_bar, m.Q, m.N, m.O, &m.G);
  return m;
}

StackedLocalModel build_local(const PlantModel& plant, int tau, int node) {
  plant.validate();
  if (tau < 1) throw std::invalid_argument("window length tau must be >= 1");
  if (node < 0 || node >= plant.num_observers()) {
    throw std::invalid_argument("node index out of range");
  }
  StackedLocalModel m;
  m.node = node;
  m.tau = tau;
  m.n = plant.n();
  m.p_i = plant.partition[node];
  assemble(plant, tau, plant.sensor_offset(node), m.p_i, m.A_bar, m.Q, m.N,
           m.O, nullptr);
  return m;
}

MeasurementWindow::MeasurementWindow(int num_sensors, int tau)
    : num_sensors_(num_sensors), tau_(tau) {
  if (num_sensors < 1 || tau < 1) {
    throw std::invalid_argument("window needs at least one sensor and one step");
  }
  ring_.resize(tau);
}

void MeasurementWindow::push(const Eigen::VectorXd& y) {
  if (y.size() != num_sensors_) {
    throw std::invalid_argument("measurement dimension mismatch");
  }
  ring_[count_ % tau_] = y;
  ++count_;
}

Eigen::VectorXd MeasurementWindow::stacked() const {
  Eigen::VectorXd out(num_sensors_ * tau_);
  for (int j = 0; j < num_sensors_; ++j) {
    out.segment(j * tau_, tau_) = sensor_window(j);
  }
  return out;
}

Eigen::VectorXd MeasurementWindow::sensor_window(int j) const {
  if (!primed()) throw std::logic_error("measurement window not primed");
  if (j < 0 || j >= num_sensors_) {
    throw std::invalid_argument("sensor index out of range");
  }
  Eigen::VectorXd out(tau_);
  for (int k = 0; k < tau_; ++k) {
    // Oldest sample first: the slot written tau_-k pushes ago.
    out(k) = ring_[(count_ - tau_ + k) % tau_](j);
  }
  return out;
}

Eigen::VectorXd time_update(const StackedLocalModel& local,
                            const Eigen::VectorXd& z_prev,
                            const Eigen::VectorXd& y) {
  if (z_prev.size() != local.dim() || y.size() != local.p_i) {
    throw std::invalid_argument("lifted state or measurement dimension mismatch");
  }
  return local.A_bar * z_prev + local.N * y;
}

Eigen::VectorXd time_update(const StackedGlobalModel& global,
                            const Eigen::VectorXd& z_prev,
                            const Eigen::VectorXd& y) {
  if (z_prev.size() != global.dim() || y.size() != global.p) {
    throw std::invalid_argument("lifted state or measurement dimension mismatch");
  }
  return global.A_bar * z_prev + global.N * y;
}

}  // namespace ssobs
