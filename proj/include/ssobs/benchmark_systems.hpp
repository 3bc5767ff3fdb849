#pragma once

#include <Eigen/Dense>

#include <vector>

#include "ssobs/model.hpp"

namespace ssobs {

struct BenchmarkSystem {
  ContinuousPlant plant;
  std::vector<int> partition;
  Eigen::MatrixXi adjacency;
};

/// Three rotating inertias coupled by two torsional springs, six redundant
/// position measurements split across three observers on a line graph.
/// Continuous time; discretize with h = 0.1 for the reference experiments.
BenchmarkSystem three_inertia();

}  // namespace ssobs
