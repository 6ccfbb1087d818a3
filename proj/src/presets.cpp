#include "usv/presets.hpp"

#include <cmath>

namespace usv::engine {

namespace {

struct Entry {
  const char* name;
  const char* description;
};

constexpr Entry kEntries[] = {
    {"surround-sec6", "3 vessels seeded in 40x40 m, static target, equal spacing on a 10 m circle"},
    {"surround-sec6-moving", "as surround-sec6 with the target drifting at constant velocity"},
    {"approach1-centralized", "3 vessels, surrounding law with the true target position"},
    {"approach1-decentralized", "3 vessels on a line graph, only vessel 0 senses the target"},
    {"equilibrium", "3 vessels at rest on the 10 m circle, 120 deg apart"},
};

Scenario approach2_base() {
  Scenario sc;
  sc.approach = Approach::A2;
  sc.regulator = Regulator::Backstepping;
  sc.swarm.n = 3;
  sc.swarm.beta1 = 0.13;
  sc.swarm.beta2 = 0.06;
  sc.swarm.rho_o = 10.0;
  sc.duration = 200.0;
  return sc;
}

Scenario approach1_base() {
  Scenario sc;
  sc.approach = Approach::A1Centralized;
  sc.swarm.n = 3;
  sc.swarm.mu = 10.0;
  sc.swarm.gamma1 = 0.0006;
  sc.swarm.gamma2 = 0.03;
  sc.swarm.gamma3 = 1.0;
  sc.duration = 300.0;
  return sc;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& e : kEntries) out.emplace_back(e.name);
  return out;
}

std::string preset_description(const std::string& name) {
  for (const auto& e : kEntries)
    if (name == e.name) return e.description;
  return {};
}

std::optional<Scenario> preset(const std::string& name) {
  if (name == "surround-sec6") {
    Scenario sc = approach2_base();
    sc.name = name;
    return sc;
  }
  if (name == "surround-sec6-moving") {
    Scenario sc = approach2_base();
    sc.name = name;
    sc.target.kind = TargetTrajectory::Kind::ConstantVelocity;
    sc.target.velocity = Vec2(0.05, 0.02);
    sc.duration = 250.0;
    return sc;
  }
  if (name == "approach1-centralized") {
    Scenario sc = approach1_base();
    sc.name = name;
    return sc;
  }
  if (name == "approach1-decentralized") {
    Scenario sc = approach1_base();
    sc.name = name;
    sc.approach = Approach::A1Decentralized;
    sc.swarm.comm_graph = protocols::Graph::line(3);
    sc.swarm.leader_set = {0};
    return sc;
  }
  if (name == "equilibrium") {
    Scenario sc = approach2_base();
    sc.name = name;
    sc.duration = 30.0;
    for (int i = 0; i < 3; ++i) {
      const double th = kTwoPi * i / 3.0;
      dynamics::VesselState s;
      s.position = 10.0 * Vec2(std::cos(th), std::sin(th));
      s.heading = th + 0.5 * kPi;
      sc.vessels.push_back(s);
    }
    return sc;
  }
  return std::nullopt;
}

}  // namespace usv::engine
