#include <doctest.h>

#include <set>

#include "efcm/model.hpp"
#include "efcm/protocol.hpp"

using namespace efcm;

TEST_CASE("distance: identity, 3-4-5 triangle, translated triangle") {
  CHECK(distance({0, 0}, {0, 0}) == 0.0);
  CHECK(distance({0, 0}, {3, 4}) == doctest::Approx(5.0));
  CHECK(distance({1, 1}, {4, 5}) == doctest::Approx(5.0));
  // symmetry
  CHECK(distance({2, 7}, {-1, 3}) == distance({-1, 3}, {2, 7}));
}

TEST_CASE("deploy_nodes: empty network") {
  Scenario s;
  s.node_count = 0;
  NetworkState state = deploy_nodes(s);
  CHECK(state.nodes.empty());
  CHECK(state.clusters.empty());
  CHECK(state.clock.time == 0);
}

TEST_CASE("deploy_nodes: determinism under a fixed seed") {
  Scenario s;
  s.node_count = 100;
  s.seed = 42;
  NetworkState a = deploy_nodes(s);
  NetworkState b = deploy_nodes(s);
  REQUIRE(a.nodes.size() == b.nodes.size());
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    CHECK(a.nodes[i].position == b.nodes[i].position);
    CHECK(a.nodes[i].energy == b.nodes[i].energy);
  }
}

TEST_CASE("deploy_nodes: uniform initialization inside the area") {
  Scenario s;
  s.node_count = 100;
  s.initial_energy = 0.5;
  s.seed = 7;
  NetworkState state = deploy_nodes(s);
  REQUIRE(state.nodes.size() == 100);
  for (const Node& n : state.nodes) {
    CHECK(n.position.x >= 0.0);
    CHECK(n.position.x <= 100.0);
    CHECK(n.position.y >= 0.0);
    CHECK(n.position.y <= 100.0);
    CHECK(n.energy == 0.5);
    CHECK(n.alive);
    CHECK(n.role == Role::Member);
  }
}

TEST_CASE("deploy_nodes: invalid scenario rejected") {
  Scenario s;
  s.area_width = 0.0;
  CHECK_THROWS_AS(deploy_nodes(s), ConfigError);
  Scenario s2;
  s2.initial_energy = -1.0;
  CHECK_THROWS_AS(deploy_nodes(s2), ConfigError);
}

TEST_CASE("partition property: every alive node in exactly one cluster") {
  Scenario s;
  s.node_count = 60;
  s.seed = 11;
  NetworkState state = deploy_nodes(s);
  cluster_construction(state, 1, 8, s.radio, s.traffic.announcement_bits);
  std::set<NodeId> seen;
  for (const Cluster& c : state.clusters) {
    for (NodeId m : c.members) {
      CHECK(seen.insert(m).second);  // no duplicates across clusters
    }
    // ring is a permutation of members
    std::set<NodeId> ms(c.members.begin(), c.members.end());
    std::set<NodeId> rs(c.ring.begin(), c.ring.end());
    CHECK(ms == rs);
  }
  for (const Node& n : state.nodes)
    if (n.alive) CHECK(seen.count(n.id) == 1);
}
