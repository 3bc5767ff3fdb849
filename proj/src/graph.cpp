#include "ssobs/graph.hpp"

#include <queue>
#include <stdexcept>
#include <string>

namespace ssobs {

Topology::Topology(Eigen::MatrixXi adjacency) : adjacency_(std::move(adjacency)) {
  const auto rows = adjacency_.rows();
  if (rows == 0 || rows != adjacency_.cols()) {
    throw std::invalid_argument("adjacency matrix must be square and non-empty");
  }
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (adjacency_(i, i) != 0) {
      throw std::invalid_argument("adjacency matrix must have a zero diagonal");
    }
    for (Eigen::Index j = 0; j < rows; ++j) {
      const int a = adjacency_(i, j);
      if (a != 0 && a != 1) {
        throw std::invalid_argument("adjacency entries must be 0 or 1");
      }
      if (a != adjacency_(j, i)) {
        throw std::invalid_argument("adjacency matrix must be symmetric");
      }
    }
  }
}

std::vector<int> Topology::neighbors(int i) const {
  std::vector<int> out;
  for (int j = 0; j < size(); ++j) {
    if (adjacency_(i, j) != 0) out.push_back(j);
  }
  return out;
}

int Topology::degree(int i) const {
  return adjacency_.row(i).sum();
}

int Topology::num_edges() const {
  return adjacency_.sum() / 2;
}

bool is_connected(const Topology& topo) {
  const int n = topo.size();
  std::vector<bool> seen(n, false);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = true;
  int reached = 1;
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    for (int v : topo.neighbors(u)) {
      if (!seen[v]) {
        seen[v] = true;
        ++reached;
        frontier.push(v);
      }
    }
  }
  return reached == n;
}

}  // namespace ssobs
