#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "ssobs/l1solver.hpp"
#include "ssobs/model.hpp"
#include "ssobs/observer_centralized.hpp"
#include "ssobs/observer_distributed.hpp"

namespace ssobs {

enum class ScenarioMode {
  Distributed,  // moving-horizon observer tracking x[t]
  Dsse,         // static estimation of the first window (distributed)
  Centralized,  // batch solver on the full trajectory (single solver)
};

std::string to_string(ScenarioMode mode);
ScenarioMode scenario_mode_from_string(const std::string& text);

/// Full description of one experiment, serializable to/from JSON. The plant
/// can be given in continuous time (discretized on load with step h) or as
/// already-discrete matrices (h == 0).
struct ScenarioConfig {
  std::string name;
  ScenarioMode mode = ScenarioMode::Distributed;

  Eigen::MatrixXd A;
  Eigen::MatrixXd C;
  bool continuous_time = false;
  double h = 0.0;
  Discretization method = Discretization::ExactZoh;

  std::vector<int> partition;
  Eigen::MatrixXi adjacency;

  int tau = 2;
  int s = 1;           // declared bound on attacked sensors
  int steps = 50;      // simulated time steps (>= tau)
  Eigen::VectorXd x0;
  AttackModel attack;

  AdmmConfig admm;
  CentralConfig central;
  InnerSolverConfig inner;

  /// Discrete-time plant implied by this scenario.
  PlantModel plant() const;
};

/// Violations of the standing model assumptions, empty when admissible.
/// Messages carry the assumption number: 1.1 connected communication graph,
/// 1.2 observability of (A, C) after removing any s sensor rows,
/// 1.3 s-sparse attack with s < p/2.
std::vector<std::string> validate_scenario(const ScenarioConfig& cfg);

ScenarioConfig load_scenario(const std::string& path);
void save_scenario(const ScenarioConfig& cfg, const std::string& path);

ScenarioConfig scenario_from_json_text(const std::string& text);
std::string scenario_to_json_text(const ScenarioConfig& cfg);

}  // namespace ssobs
