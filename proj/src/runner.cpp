#include "ssobs/runner.hpp"

#include <sstream>
#include <stdexcept>

#include "ssobs/graph.hpp"
#include "ssobs/observer_centralized.hpp"
#include "ssobs/observer_distributed.hpp"

namespace ssobs {

RunResult run_scenario(const ScenarioConfig& cfg) {
  const std::vector<std::string> violations = validate_scenario(cfg);
  if (!violations.empty()) {
    std::ostringstream os;
    os << "scenario '" << cfg.name << "' is invalid:";
    for (const auto& v : violations) os << "\n  - " << v;
    throw std::invalid_argument(os.str());
  }

  const PlantModel plant = cfg.plant();
  AttackModel attack = cfg.attack;
  attack.s = cfg.s;
  const PlantTrajectory traj = simulate(plant, cfg.x0, attack, cfg.steps);

  switch (cfg.mode) {
    case ScenarioMode::Distributed: {
      DistributedObserver obs(plant, Topology(cfg.adjacency), cfg.tau, cfg.admm,
                              cfg.inner);
      return obs.run(traj);
    }
    case ScenarioMode::Dsse: {
      DistributedObserver obs(plant, Topology(cfg.adjacency), cfg.tau, cfg.admm,
                              cfg.inner);
      return obs.run_dsse(traj);
    }
    case ScenarioMode::Centralized: {
      CentralizedObserver obs(plant, cfg.tau, cfg.central);
      return obs.run(traj);
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace ssobs
