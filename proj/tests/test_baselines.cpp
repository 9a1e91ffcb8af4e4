#include <doctest.h>

#include <cmath>
#include <set>

#include "efcm/baselines.hpp"
#include "efcm/model.hpp"

using namespace efcm;

namespace {

NetworkState deployed(std::uint32_t n, std::uint64_t seed) {
  Scenario s;
  s.node_count = n;
  s.seed = seed;
  return deploy_nodes(s);
}

const RadioParams kRadio{};
constexpr double kAnnBits = 400;
constexpr double kRange = 45;

void check_coverage(const NetworkState& state) {
  // every alive node is a head or member of exactly one head's cluster
  std::set<NodeId> seen;
  for (const Cluster& c : state.clusters) {
    CHECK(state.node(c.head).role == Role::Head);
    CHECK(state.node(c.head).alive);
    for (NodeId m : c.members) CHECK(seen.insert(m).second);
  }
  for (const Node& n : state.nodes) {
    if (!n.alive) {
      CHECK(seen.count(n.id) == 0);
    } else if (!state.direct_round) {
      CHECK(seen.count(n.id) == 1);
    }
  }
}

}  // namespace

TEST_CASE("leach: p=1 elects every alive node every round") {
  NetworkState state = deployed(20, 3);
  state.node(4).energy = 0.0;
  state.node(4).alive = false;
  leach_round(state, LeachParams{1.0}, 0, kRadio, kAnnBits, kRange);
  std::size_t heads = 0;
  for (const Node& n : state.nodes)
    if (n.role == Role::Head) ++heads;
  CHECK(heads == 19);
  check_coverage(state);
}

TEST_CASE("leach: elected fraction tracks p over many node-rounds") {
  LeachParams params{0.1};
  std::uint64_t elected = 0, eligible_rounds = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    NetworkState state = deployed(100, seed);
    for (std::uint64_t r = 0; r < 30; ++r) {
      leach_round(state, params, r, kRadio, kAnnBits, kRange);
      for (const Node& n : state.nodes) {
        if (!n.alive) continue;
        ++eligible_rounds;
        if (n.role == Role::Head) ++elected;
      }
    }
  }
  CHECK(eligible_rounds >= 10000);
  double fraction = static_cast<double>(elected) / eligible_rounds;
  CHECK(fraction == doctest::Approx(0.1).epsilon(0.2));  // 0.1 +- 0.02
}

TEST_CASE("leach: no node heads twice within one epoch") {
  LeachParams params{0.1};
  std::uint32_t epoch = leach_epoch_length(params);
  CHECK(epoch == 10);
  for (std::uint64_t seed = 10; seed < 14; ++seed) {
    NetworkState state = deployed(50, seed);
    std::vector<int> heads_this_epoch(50, 0);
    for (std::uint64_t r = 0; r < 30; ++r) {
      if (r % epoch == 0) heads_this_epoch.assign(50, 0);
      leach_round(state, params, r, kRadio, kAnnBits, kRange);
      for (const Node& n : state.nodes) {
        if (n.role == Role::Head) {
          ++heads_this_epoch[n.id];
          CHECK(heads_this_epoch[n.id] <= 1);
        }
      }
    }
  }
}

TEST_CASE("leach: dead node never elected, never joined") {
  NetworkState state = deployed(10, 5);
  state.node(2).energy = 0.0;
  state.node(2).alive = false;
  for (std::uint64_t r = 0; r < 20; ++r) {
    leach_round(state, LeachParams{0.3}, r, kRadio, kAnnBits, kRange);
    CHECK(state.node(2).role == Role::Member);
    for (const Cluster& c : state.clusters)
      for (NodeId m : c.members) CHECK(m != 2);
    check_coverage(state);
  }
}

TEST_CASE("leach: determinism under a fixed seed") {
  auto run_once = [] {
    NetworkState state = deployed(40, 77);
    std::vector<NodeId> heads;
    for (std::uint64_t r = 0; r < 10; ++r) {
      leach_round(state, LeachParams{0.1}, r, kRadio, kAnnBits, kRange);
      for (const Cluster& c : state.clusters) heads.push_back(c.head);
    }
    return heads;
  };
  CHECK(run_once() == run_once());
}

TEST_CASE("heed: initial probability formula and floor") {
  HeedParams p{0.05, 1e-4, 0.0};
  CHECK(heed_initial_prob(p, 0.5, 0.5) == doctest::Approx(0.05));
  CHECK(heed_initial_prob(p, 0.25, 0.5) == doctest::Approx(0.025));
  CHECK(heed_initial_prob(p, 1e-6, 0.5) == doctest::Approx(1e-4));
}

TEST_CASE("heed: dead node never a head; coverage holds") {
  NetworkState state = deployed(30, 8);
  state.node(0).energy = 0.0;
  state.node(0).alive = false;
  heed_round(state, HeedParams{}, 0.5, kRadio, kAnnBits, kRange);
  CHECK(state.node(0).role == Role::Member);
  for (const Cluster& c : state.clusters) CHECK(c.head != 0);
  check_coverage(state);
}

TEST_CASE("heed: single alive node becomes its own head") {
  NetworkState state = deployed(5, 9);
  for (NodeId i = 1; i < 5; ++i) {
    state.node(i).energy = 0.0;
    state.node(i).alive = false;
  }
  heed_round(state, HeedParams{}, 0.5, kRadio, kAnnBits, kRange);
  REQUIRE(state.clusters.size() == 1);
  CHECK(state.clusters[0].head == 0);
  CHECK(state.node(0).role == Role::Head);
}

TEST_CASE("heed: isolated node out of every head's range self-elects") {
  NetworkState state(1);
  for (std::uint32_t i = 0; i < 4; ++i) {
    Node n;
    n.id = i;
    n.position = {static_cast<double>(i), 0.0};
    n.energy = 0.5;
    n.alive = true;
    state.nodes.push_back(n);
  }
  state.nodes[3].position = {500, 500};  // far outside range
  heed_round(state, HeedParams{}, 0.5, kRadio, kAnnBits, kRange);
  bool isolated_is_head = state.node(3).role == Role::Head;
  CHECK(isolated_is_head);
  check_coverage(state);
}

TEST_CASE("heed: members join a final head within cluster range") {
  NetworkState state = deployed(50, 21);
  heed_round(state, HeedParams{}, 0.5, kRadio, kAnnBits, kRange);
  for (const Cluster& c : state.clusters) {
    for (NodeId m : c.members) {
      if (m == c.head) continue;
      CHECK(distance(state.node(m).position, state.node(c.head).position) <=
            kRange + 1e-9);
    }
  }
  check_coverage(state);
}

TEST_CASE("heed: determinism under a fixed seed") {
  auto run_once = [] {
    NetworkState state = deployed(40, 4242);
    std::vector<NodeId> heads;
    for (int r = 0; r < 5; ++r) {
      heed_round(state, HeedParams{}, 0.5, kRadio, kAnnBits, kRange);
      for (const Cluster& c : state.clusters) heads.push_back(c.head);
    }
    return heads;
  };
  CHECK(run_once() == run_once());
}
