#pragma once

#include <Eigen/Dense>

#include <vector>

namespace ssobs {

/// Undirected communication topology over observer nodes. The adjacency
/// matrix must be binary, symmetric and hollow (no self-loops); the
/// constructor rejects anything else.
class Topology {
 public:
  explicit Topology(Eigen::MatrixXi adjacency);

  int size() const { return static_cast<int>(adjacency_.rows()); }
  const Eigen::MatrixXi& adjacency() const { return adjacency_; }

  /// Neighbour set of node i in ascending index order; never contains i.
  std::vector<int> neighbors(int i) const;
  int degree(int i) const;
  /// Undirected edge count |E|.
  int num_edges() const;

 private:
  Eigen::MatrixXi adjacency_;
};

/// True iff every node is reachable from node 0 (breadth-first traversal).
bool is_connected(const Topology& topo);

}  // namespace ssobs
