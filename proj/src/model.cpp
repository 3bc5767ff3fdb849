#include "ssobs/model.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "rng.hpp"
#include "subsets.hpp"

namespace ssobs {

int PlantModel::sensor_offset(int i) const {
  int off = 0;
  for (int k = 0; k < i; ++k) off += partition[k];
  return off;
}

Eigen::MatrixXd PlantModel::sensor_rows(int i) const {
  return C.middleRows(sensor_offset(i), partition[i]);
}

void PlantModel::validate() const {
  if (A.rows() == 0 || A.rows() != A.cols()) {
    throw std::invalid_argument("A must be square and non-empty");
  }
  if (C.rows() == 0 || C.cols() != A.rows()) {
    throw std::invalid_argument("C must have as many columns as states");
  }
  if (partition.empty()) {
    throw std::invalid_argument("partition must name at least one observer");
  }
  int total = 0;
  for (int p_i : partition) {
    if (p_i <= 0) throw std::invalid_argument("partition entries must be positive");
    total += p_i;
  }
  if (total != p()) {
    throw std::invalid_argument("partition must sum to the number of sensors (" +
                                std::to_string(p()) + "), got " +
                                std::to_string(total));
  }
}

PlantModel discretize(const ContinuousPlant& plant, double h,
                      Discretization method, std::vector<int> partition) {
  if (h <= 0.0) throw std::invalid_argument("sampling period must be positive");
  PlantModel out;
  switch (method) {
    case Discretization::ExactZoh:
      out.A = (plant.A * h).exp();
      break;
    case Discretization::ForwardEuler:
      out.A = Eigen::MatrixXd::Identity(plant.n(), plant.n()) + h * plant.A;
      break;
  }
  out.C = plant.C;
  out.partition = std::move(partition);
  out.h = h;
  out.validate();
  return out;
}

PlantTrajectory simulate(const PlantModel& plant, const Eigen::VectorXd& x0,
                         const AttackModel& attack, int steps) {
  plant.validate();
  if (x0.size() != plant.n()) {
    throw std::invalid_argument("x0 dimension does not match the plant");
  }
  if (steps < 0) throw std::invalid_argument("steps must be non-negative");
  for (int j : attack.support) {
    if (j < 0 || j >= plant.p()) {
      throw std::invalid_argument("attack support indexes a missing sensor");
    }
  }

  std::mt19937_64 gen(attack.seed);
  PlantTrajectory traj;
  traj.states.reserve(steps + 1);
  traj.outputs.reserve(steps + 1);
  traj.attacks.reserve(steps + 1);

  Eigen::VectorXd x = x0;
  for (int t = 0; t <= steps; ++t) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(plant.p());
    for (int j : attack.support) {
      a(j) = detail::symmetric_uniform(gen, attack.amplitude);
    }
    traj.states.push_back(x);
    traj.attacks.push_back(a);
    traj.outputs.push_back(plant.C * x + a);
    x = plant.A * x;
  }
  return traj;
}

Eigen::MatrixXd observability_matrix(const Eigen::MatrixXd& A,
                                     const Eigen::MatrixXd& C_rows, int depth) {
  const auto n = A.cols();
  Eigen::MatrixXd out(C_rows.rows() * depth, n);
  Eigen::MatrixXd block = C_rows;
  for (int k = 0; k < depth; ++k) {
    out.middleRows(k * C_rows.rows(), C_rows.rows()) = block;
    block = block * A;
  }
  return out;
}

int matrix_rank(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  const double tol = std::max(m.rows(), m.cols()) *
                     std::numeric_limits<double>::epsilon() * sv(0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol) ++rank;
  }
  return rank;
}

bool check_s_sparse_observable(const PlantModel& plant, int s) {
  plant.validate();
  if (s < 0 || s >= plant.p()) return false;
  const int n = plant.n();
  return detail::for_each_subset(plant.p(), s, [&](const std::vector<int>& gamma) {
    std::vector<bool> removed(plant.p(), false);
    for (int j : gamma) removed[j] = true;
    Eigen::MatrixXd C_keep(plant.p() - s, n);
    int r = 0;
    for (int j = 0; j < plant.p(); ++j) {
      if (!removed[j]) C_keep.row(r++) = plant.C.row(j);
    }
    return matrix_rank(observability_matrix(plant.A, C_keep, n)) == n;
  });
}

}  // namespace ssobs
