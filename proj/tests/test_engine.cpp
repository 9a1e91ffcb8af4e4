#include <doctest.h>

#include <cmath>

#include "efcm/csv.hpp"
#include "efcm/engine.hpp"

using namespace efcm;

namespace {

Scenario small_efcm() {
  Scenario s;
  s.protocol = Protocol::Efcm;
  s.node_count = 12;
  s.duration = 20;
  s.checkpoint_interval = 5;
  s.xmeans.k_min = 1;
  s.xmeans.k_max = 3;
  s.seed = 31;
  return s;
}

}  // namespace

TEST_CASE("step: single node serving itself delivers everything") {
  Scenario s;
  s.node_count = 1;
  s.traffic.packets_per_node_per_round = 1;
  s.fault.head_fault_prob = 0.0;
  s.fault.handoff_fault_prob = 0.0;
  s.xmeans.k_min = 1;
  s.xmeans.k_max = 1;
  Simulation sim(s);
  RoundRecord rec = sim.step();
  CHECK(rec.sent_packets == 1);
  CHECK(rec.delivered_packets == 1);
  CHECK(rec.delivered_bits == s.traffic.packet_bits);
  CHECK(rec.failures == 0);
}

TEST_CASE("step: zero traffic spends energy only at slice boundaries") {
  Scenario s = small_efcm();
  s.traffic.packets_per_node_per_round = 0;
  s.fault.head_fault_prob = 0.0;
  s.fault.handoff_fault_prob = 0.0;
  Simulation sim(s);
  double after_construction = sim.state().total_energy();
  for (int r = 0; r < 5; ++r) {  // times 0..4, no rotation boundary
    RoundRecord rec = sim.step();
    CHECK(rec.sent_packets == 0);
    CHECK(rec.delivered_bits == 0.0);
  }
  CHECK(sim.state().total_energy() == after_construction);
  sim.step();  // time 5: rotation announcements
  CHECK(sim.state().total_energy() < after_construction);
}

TEST_CASE("step: faulted head drops the whole round, one failure") {
  Scenario s;
  s.protocol = Protocol::Efcm;
  s.node_count = 3;
  s.area_width = 10;
  s.area_height = 10;
  s.radio_range = 0;  // reliable links, isolate the fault path
  s.traffic.packets_per_node_per_round = 1;
  s.fault.head_fault_prob = 1.0;
  s.fault.handoff_fault_prob = 1.0;
  s.xmeans.k_min = 1;
  s.xmeans.k_max = 1;
  Simulation sim(s);
  RoundRecord rec = sim.step();
  CHECK(rec.sent_packets == 3);
  CHECK(rec.delivered_packets == 0);
  CHECK(rec.failures == 1);
}

TEST_CASE("run: duration 0 yields an empty series") {
  Scenario s = small_efcm();
  s.duration = 0;
  CHECK(run(s).checkpoints.empty());
}

TEST_CASE("run: checkpoint times are multiples of the interval") {
  Scenario s = small_efcm();
  MetricsSeries series = run(s);
  REQUIRE(series.checkpoints.size() == 4);
  CHECK(series.checkpoints[0].time == 5);
  CHECK(series.checkpoints[1].time == 10);
  CHECK(series.checkpoints[2].time == 15);
  CHECK(series.checkpoints[3].time == 20);
}

TEST_CASE("run: bitwise determinism of the emitted CSV") {
  Scenario s = small_efcm();
  CHECK(to_csv(run(s)) == to_csv(run(s)));
}

TEST_CASE("run: pdr in range, delivered <= sent, energy non-increasing") {
  for (Protocol p : {Protocol::Efcm, Protocol::Leach, Protocol::Heed}) {
    Scenario s = small_efcm();
    s.protocol = p;
    MetricsSeries series = run(s);
    double prev_energy = s.initial_energy;
    std::uint64_t prev_failures = 0;
    for (const Checkpoint& c : series.checkpoints) {
      CHECK(c.pdr >= 0.0);
      CHECK(c.pdr <= 1.0);
      CHECK(c.mean_residual_energy <= prev_energy + 1e-12);
      prev_energy = c.mean_residual_energy;
      CHECK(c.ch_failures >= prev_failures);
      prev_failures = c.ch_failures;
    }
  }
}

TEST_CASE("run: energy ledger balances to the residual decrease") {
  for (Protocol p : {Protocol::Efcm, Protocol::Leach, Protocol::Heed}) {
    Scenario s = small_efcm();
    s.protocol = p;
    Simulation sim(s);
    sim.run();
    double decrease = s.initial_energy * s.node_count - sim.state().total_energy();
    CHECK(decrease ==
          doctest::Approx(sim.state().ledger.deducted).epsilon(1e-12));
    CHECK(sim.state().ledger.clamped() >= -1e-15);
  }
}

TEST_CASE("run: EFCM head changes only at slice boundaries (no deaths)") {
  Scenario s = small_efcm();
  s.fault.head_fault_prob = 0.0;
  s.fault.handoff_fault_prob = 0.0;
  Simulation sim(s);
  std::vector<NodeId> heads;
  auto snapshot = [&] {
    std::vector<NodeId> h;
    for (const Cluster& c : sim.state().clusters) h.push_back(c.head);
    return h;
  };
  std::vector<NodeId> prev = snapshot();
  for (std::uint64_t r = 0; r < s.duration; ++r) {
    std::uint64_t t = sim.state().clock.time;
    sim.step();
    std::vector<NodeId> now = snapshot();
    if (t == 0 || t % s.time_slice != 0) {
      CHECK(now == prev);
    } else {
      CHECK(now != prev);
    }
    prev = now;
  }
}

TEST_CASE("compare: one scenario, one seed equals the single run") {
  Scenario s = small_efcm();
  ComparisonTable table = compare({s}, {s.seed}, false);
  MetricsSeries single = run(s);
  REQUIRE(table.rows.size() == single.checkpoints.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    CHECK(table.rows[i].pdr_mean == single.checkpoints[i].pdr);
    CHECK(table.rows[i].pdr_std == 0.0);
    CHECK(table.rows[i].energy_mean ==
          single.checkpoints[i].mean_residual_energy);
  }
}

TEST_CASE("compare: concurrent equals serial, bit for bit") {
  Scenario s = small_efcm();
  std::vector<Scenario> scenarios;
  for (Protocol p : {Protocol::Efcm, Protocol::Leach, Protocol::Heed}) {
    Scenario v = s;
    v.protocol = p;
    scenarios.push_back(v);
  }
  std::vector<std::uint64_t> seeds{1, 2, 3, 4};
  CHECK(to_csv(compare(scenarios, seeds, true)) ==
        to_csv(compare(scenarios, seeds, false)));
}

TEST_CASE("compare: empty seed list rejected") {
  CHECK_THROWS_AS(compare({small_efcm()}, {}), ConfigError);
}

TEST_CASE("link_success: reliable at zero distance, off when disabled") {
  CHECK(link_success(0.0, 45.0) == 1.0);
  CHECK(link_success(45.0, 45.0) == doctest::Approx(std::exp(-1.0)));
  CHECK(link_success(1000.0, 0.0) == 1.0);
}
