#include "ssobs/benchmark_systems.hpp"

namespace ssobs {

BenchmarkSystem three_inertia() {
  const double J1 = 0.01, J2 = 0.02, J3 = 0.03;  // inertias [kg m^2]
  const double k1 = 1.4, k2 = 1.4;               // torsional stiffness [N/rad]
  const double b = 0.005;                        // damping [N/(rad/s)]

  Eigen::MatrixXd A(6, 6);
  A << 0, 1, 0, 0, 0, 0,
      -k1 / J1, -b / J1, k1 / J1, 0, 0, 0,
      0, 0, 0, 1, 0, 0,
      k1 / J2, 0, -(k1 + k2) / J2, -b / J2, k2 / J2, 0,
      0, 0, 0, 0, 0, 1,
      0, 0, k2 / J3, 0, -k2 / J3, -b / J3;

  // Three absolute positions and three relative positions, two sensors per
  // observer.
  Eigen::MatrixXd C(6, 6);
  C << 1, 0, 0, 0, 0, 0,
      0, 0, 1, 0, 0, 0,
      0, 0, 0, 0, 1, 0,
      1, 0, -1, 0, 0, 0,
      1, 0, 0, 0, -1, 0,
      0, 0, 1, 0, -1, 0;

  Eigen::MatrixXi adjacency(3, 3);
  adjacency << 0, 1, 1,
      1, 0, 0,
      1, 0, 0;

  return BenchmarkSystem{ContinuousPlant{A, C}, {2, 2, 2}, adjacency};
}

}  // namespace ssobs
