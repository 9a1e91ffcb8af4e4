#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "efcm/geometry.hpp"
#include "efcm/rng.hpp"
#include "efcm/scenario.hpp"

namespace efcm {

using NodeId = std::uint32_t;
using ClusterId = std::uint32_t;

inline constexpr ClusterId kNoCluster = static_cast<ClusterId>(-1);

enum class Role { Member, Head };

struct Node {
  NodeId id = 0;
  Point position;
  double energy = 0.0;  // joules, clamped at 0
  bool alive = false;
  Role role = Role::Member;
};

/// One cluster: its member list, the energy-sorted rotation ring frozen at
/// construction time, and the rotation cursor.
struct Cluster {
  ClusterId id = 0;
  std::vector<NodeId> members;  // ascending NodeId
  std::vector<NodeId> ring;     // construction-time energy, descending
  std::size_t cursor = 0;       // index of the current head in ring
  NodeId head = 0;
  bool dead = false;  // no alive member left; excluded from traffic
};

struct SimClock {
  std::uint64_t time = 0;  // rounds; one round = one simulated second
};

/// Running account of all energy charges, for conservation checks.
/// `clamped` is the part of requested charges that exceeded the nodes'
/// remaining energy.
struct EnergyLedger {
  double requested = 0.0;
  double deducted = 0.0;
  double clamped() const { return requested - deducted; }
};

class EmptyNetworkError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The full mutable world of one run.
struct NetworkState {
  std::vector<Node> nodes;
  std::vector<Cluster> clusters;
  SimClock clock;
  Point base_station;
  RandomStream rng;
  EnergyLedger ledger;
  // True for a LEACH round in which no head was elected: alive nodes
  // transmit directly to the base station.
  bool direct_round = false;
  // LEACH epoch bookkeeping: nodes that already served in the current epoch.
  std::vector<std::uint8_t> leach_served;

  explicit NetworkState(std::uint64_t seed) : rng(seed) {}

  Node& node(NodeId id) { return nodes[id]; }
  const Node& node(NodeId id) const { return nodes[id]; }

  std::size_t alive_count() const {
    return static_cast<std::size_t>(
        std::count_if(nodes.begin(), nodes.end(),
                      [](const Node& n) { return n.alive; }));
  }

  double total_energy() const {
    double sum = 0.0;
    for (const Node& n : nodes) sum += n.energy;
    return sum;
  }
};

/// Deducts `amount` from a node, clamping at zero. A node whose energy
/// reaches zero is dead and loses any head role. Returns the amount
/// actually deducted.
inline double charge(Node& node, double amount) {
  if (amount < 0.0) throw std::invalid_argument("charge: negative amount");
  double deducted = std::min(node.energy, amount);
  node.energy -= deducted;
  if (node.energy <= 0.0) {
    node.energy = 0.0;
    node.alive = false;
    node.role = Role::Member;
  }
  return deducted;
}

/// charge() routed through the state's conservation ledger.
inline double charge(NetworkState& state, NodeId id, double amount) {
  state.ledger.requested += amount;
  double deducted = charge(state.node(id), amount);
  state.ledger.deducted += deducted;
  return deducted;
}

/// Deploys node_count nodes i.i.d. uniform over the area, full batteries,
/// clusters empty, clock at zero. Deterministic for a fixed scenario.
inline NetworkState deploy_nodes(const Scenario& scenario) {
  if (scenario.area_width <= 0.0 || scenario.area_height <= 0.0)
    throw ConfigError("deploy_nodes: non-positive area");
  if (scenario.initial_energy <= 0.0)
    throw ConfigError("deploy_nodes: non-positive initial energy");
  NetworkState state(scenario.seed);
  state.base_station = scenario.base_station();
  state.nodes.reserve(scenario.node_count);
  for (NodeId id = 0; id < scenario.node_count; ++id) {
    Node n;
    n.id = id;
    n.position.x = state.rng.uniform(0.0, scenario.area_width);
    n.position.y = state.rng.uniform(0.0, scenario.area_height);
    n.energy = scenario.initial_energy;
    n.alive = true;
    n.role = Role::Member;
    state.nodes.push_back(n);
  }
  state.leach_served.assign(scenario.node_count, 0);
  return state;
}

}  // namespace efcm
