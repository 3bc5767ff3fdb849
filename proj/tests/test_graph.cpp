#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ssobs/graph.hpp"
#include "test_support.hpp"

using ssobs::Topology;

namespace {

// Independent reachability oracle: Floyd-Warshall style closure.
bool connected_by_closure(const Eigen::MatrixXi& adj) {
  const int n = static_cast<int>(adj.rows());
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i) {
    reach[i][i] = true;
    for (int j = 0; j < n; ++j) {
      if (adj(i, j)) reach[i][j] = true;
    }
  }
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (reach[i][k] && reach[k][j]) reach[i][j] = true;
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!reach[i][j]) return false;
    }
  }
  return true;
}

Eigen::MatrixXi random_graph(std::mt19937_64& gen, int n, double density) {
  Eigen::MatrixXi adj = Eigen::MatrixXi::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (testsupport::unit_uniform(gen) < density) {
        adj(i, j) = 1;
        adj(j, i) = 1;
      }
    }
  }
  return adj;
}

}  // namespace

TEST_CASE("constructor rejects malformed adjacency matrices") {
  CHECK_THROWS_AS(Topology(Eigen::MatrixXi()), std::invalid_argument);

  Eigen::MatrixXi rect(2, 3);
  rect.setZero();
  CHECK_THROWS_AS(Topology{rect}, std::invalid_argument);

  Eigen::MatrixXi self_loop = Eigen::MatrixXi::Zero(3, 3);
  self_loop(1, 1) = 1;
  CHECK_THROWS_AS(Topology{self_loop}, std::invalid_argument);

  Eigen::MatrixXi asym = Eigen::MatrixXi::Zero(3, 3);
  asym(0, 1) = 1;
  CHECK_THROWS_AS(Topology{asym}, std::invalid_argument);

  Eigen::MatrixXi weighted = Eigen::MatrixXi::Zero(2, 2);
  weighted(0, 1) = 2;
  weighted(1, 0) = 2;
  CHECK_THROWS_AS(Topology{weighted}, std::invalid_argument);
}

TEST_CASE("neighbor sets are ascending and exclude the node") {
  // 3-node star: node 0 talks to 1 and 2.
  Eigen::MatrixXi adj(3, 3);
  adj << 0, 1, 1,
      1, 0, 0,
      1, 0, 0;
  Topology topo(adj);
  CHECK(topo.size() == 3);
  CHECK(topo.neighbors(0) == std::vector<int>{1, 2});
  CHECK(topo.neighbors(1) == std::vector<int>{0});
  CHECK(topo.neighbors(2) == std::vector<int>{0});
  CHECK(topo.degree(0) == 2);
  CHECK(topo.degree(1) == 1);
  CHECK(topo.num_edges() == 2);
}

TEST_CASE("edge count matches handshake sum on random graphs") {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(testsupport::unit_uniform(gen) * 7);
    Topology topo(random_graph(gen, n, 0.4));
    int total_degree = 0;
    for (int i = 0; i < n; ++i) {
      total_degree += topo.degree(i);
      CHECK(topo.degree(i) == static_cast<int>(topo.neighbors(i).size()));
    }
    CHECK(total_degree == 2 * topo.num_edges());
  }
}

TEST_CASE("connectivity agrees with a transitive-closure oracle") {
  std::mt19937_64 gen(13);
  int connected_seen = 0, disconnected_seen = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(testsupport::unit_uniform(gen) * 6);
    const Eigen::MatrixXi adj = random_graph(gen, n, 0.35);
    Topology topo(adj);
    const bool expected = connected_by_closure(adj);
    CHECK(ssobs::is_connected(topo) == expected);
    (expected ? connected_seen : disconnected_seen)++;
  }
  // The sample must exercise both verdicts or the check proves nothing.
  CHECK(connected_seen > 10);
  CHECK(disconnected_seen > 10);
}

TEST_CASE("line, ring and edgeless fixtures") {
  CHECK(ssobs::is_connected(Topology(testsupport::line_adjacency(5))));
  CHECK(ssobs::is_connected(Topology(testsupport::ring_adjacency(6))));
  CHECK_FALSE(ssobs::is_connected(Topology(Eigen::MatrixXi::Zero(3, 3))));
  CHECK(ssobs::is_connected(Topology(Eigen::MatrixXi::Zero(1, 1))));

  Topology ring(testsupport::ring_adjacency(6));
  CHECK(ring.num_edges() == 6);
  CHECK(ring.neighbors(0) == std::vector<int>{1, 5});
}
