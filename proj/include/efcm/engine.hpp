#pragma once

#include <cmath>
#include <cstdint>
#include <future>
#include <string>
#include <vector>

#include "efcm/baselines.hpp"
#include "efcm/energy.hpp"
#include "efcm/model.hpp"
#include "efcm/protocol.hpp"
#include "efcm/scenario.hpp"

namespace efcm {

/// Raw per-round tallies.
struct RoundRecord {
  std::uint64_t time = 0;  // clock value after the round
  std::uint64_t sent_packets = 0;
  std::uint64_t delivered_packets = 0;
  double delivered_bits = 0.0;  // bits arriving at the base station
  std::uint64_t failures = 0;   // head dead/faulted events this round
};

struct Checkpoint {
  std::uint64_t time = 0;
  double throughput_bps = 0.0;           // cumulative delivered bits / time
  double throughput_interval_bps = 0.0;  // delivered bits in this interval / interval
  double pdr = 0.0;                      // cumulative delivered / sent, 0/0 = 1
  double mean_residual_energy = 0.0;     // over the original population
  std::uint64_t ch_failures = 0;         // cumulative
};

struct MetricsSeries {
  Protocol protocol = Protocol::Efcm;
  std::uint64_t seed = 0;
  std::vector<Checkpoint> checkpoints;
};

/// Probability that a member->head packet survives the channel. The head's
/// uplink radio is assumed reliable; intra-cluster links degrade with
/// distance on the scale of `range` (range <= 0 disables channel loss).
inline double link_success(double d, double range) {
  if (range <= 0.0) return 1.0;
  double r = d / range;
  return std::exp(-r * r);
}

/// One simulation run. Owns its NetworkState exclusively.
class Simulation {
 public:
  explicit Simulation(const Scenario& scenario)
      : scenario_(scenario), state_(deploy_nodes(scenario)) {
    validate(scenario);
    if (scenario.protocol == Protocol::Efcm && scenario.node_count > 0) {
      cluster_construction(state_, scenario.effective_k_min(),
                           scenario.effective_k_max(), scenario.radio,
                           scenario.traffic.announcement_bits,
                           scenario.xmeans.max_iter, scenario.xmeans.tol);
      death_counted_.assign(state_.clusters.size(), 0);
    }
  }

  const NetworkState& state() const { return state_; }
  NetworkState& state() { return state_; }

  /// Advances one round: protocol phase, member uplinks, fusion and
  /// base-station delivery, fault accounting, clock tick.
  RoundRecord step() {
    RoundRecord rec;
    const TrafficModel& traffic = scenario_.traffic;
    const RadioParams& radio = scenario_.radio;
    const std::uint32_t packets = traffic.packets_per_node_per_round;

    std::vector<std::uint8_t> handoff = protocol_phase();
    if (death_counted_.size() != state_.clusters.size())
      death_counted_.assign(state_.clusters.size(), 0);
    rec.failures += pending_failures_;
    pending_failures_ = 0;

    // Fault draws, cluster-id order.
    std::vector<std::uint8_t> faulted(state_.clusters.size(), 0);
    for (std::size_t c = 0; c < state_.clusters.size(); ++c) {
      const Cluster& cluster = state_.clusters[c];
      if (cluster.dead || !state_.node(cluster.head).alive) continue;
      double p = handoff[c] ? scenario_.fault.handoff_fault_prob
                            : scenario_.fault.head_fault_prob;
      faulted[c] = state_.rng.bernoulli(p) ? 1 : 0;
    }

    if (state_.direct_round) {
      // LEACH fallback: every alive node uplinks straight to the base station.
      for (Node& n : state_.nodes) {
        for (std::uint32_t p = 0; p < packets; ++p) {
          if (!n.alive) break;
          ++rec.sent_packets;
          double d = distance(n.position, state_.base_station);
          charge(state_, n.id, tx_cost(traffic.packet_bits, d, radio));
          ++rec.delivered_packets;
          rec.delivered_bits += traffic.packet_bits;
        }
      }
    }

    for (std::size_t c = 0; c < state_.clusters.size(); ++c) {
      Cluster& cluster = state_.clusters[c];
      if (cluster.dead) continue;
      const NodeId head = cluster.head;
      const Point head_pos = state_.node(head).position;

      // Intra-cluster phase: member order, packet order.
      std::vector<std::uint32_t> batch_ok(packets, 0);
      for (NodeId m : cluster.members) {
        if (!state_.node(m).alive) continue;
        double d = (m == head) ? 0.0
                               : distance(state_.node(m).position, head_pos);
        double s = link_success(d, scenario_.radio_range);
        for (std::uint32_t p = 0; p < packets; ++p) {
          if (!state_.node(m).alive) break;
          ++rec.sent_packets;
          if (m == head) {
            ++batch_ok[p];  // the head's own reading, no radio hop
            continue;
          }
          charge(state_, m, tx_cost(traffic.packet_bits, d, radio));
          if (!state_.node(head).alive) continue;
          charge(state_, head, rx_cost(traffic.packet_bits, radio));
          if (state_.rng.bernoulli(s)) ++batch_ok[p];
        }
      }

      // Fusion and uplink.
      if (faulted[c]) {
        ++rec.failures;
        continue;
      }
      std::uint64_t received = 0;
      for (auto n : batch_ok) received += n;
      if (received == 0) continue;
      if (!state_.node(head).alive) {
        if (!death_counted_[c]) {
          ++rec.failures;
          death_counted_[c] = 1;
        }
        continue;
      }
      charge(state_, head,
             radio.e_da * static_cast<double>(received) * traffic.packet_bits);
      double d_bs = distance(head_pos, state_.base_station);
      for (std::uint32_t p = 0; p < packets; ++p) {
        if (batch_ok[p] == 0) continue;
        if (!state_.node(head).alive) {
          if (!death_counted_[c]) {
            ++rec.failures;
            death_counted_[c] = 1;
          }
          break;
        }
        charge(state_, head, tx_cost(traffic.packet_bits, d_bs, radio));
        rec.delivered_packets += batch_ok[p];
        rec.delivered_bits += traffic.packet_bits;
      }
    }

    if (radio.idle_per_round > 0.0) {
      for (Node& n : state_.nodes)
        if (n.alive) charge(state_, n.id, radio.idle_per_round);
    }

    state_.clock.time += 1;
    rec.time = state_.clock.time;
    return rec;
  }

  /// Runs the full scenario and collects the checkpoint series.
  MetricsSeries run() {
    MetricsSeries series;
    series.protocol = scenario_.protocol;
    series.seed = scenario_.seed;
    std::uint64_t sent = 0, delivered = 0, failures = 0;
    double bits = 0.0, interval_bits = 0.0;
    for (std::uint32_t r = 0; r < scenario_.duration; ++r) {
      RoundRecord rec = step();
      sent += rec.sent_packets;
      delivered += rec.delivered_packets;
      failures += rec.failures;
      bits += rec.delivered_bits;
      interval_bits += rec.delivered_bits;
      if (rec.time % scenario_.checkpoint_interval == 0) {
        Checkpoint cp;
        cp.time = rec.time;
        cp.throughput_bps = bits / static_cast<double>(rec.time);
        cp.throughput_interval_bps =
            interval_bits / static_cast<double>(scenario_.checkpoint_interval);
        cp.pdr = (sent == 0) ? 1.0
                             : static_cast<double>(delivered) /
                                   static_cast<double>(sent);
        double sum = 0.0;
        for (const Node& n : state_.nodes) sum += n.energy;
        cp.mean_residual_energy =
            state_.nodes.empty() ? 0.0 : sum / static_cast<double>(state_.nodes.size());
        cp.ch_failures = failures;
        series.checkpoints.push_back(cp);
        interval_bits = 0.0;
      }
    }
    return series;
  }

 private:
  // Rotation / election. Returns a per-cluster flag: head changed this round.
  std::vector<std::uint8_t> protocol_phase() {
    if (scenario_.protocol == Protocol::Leach) {
      leach_round(state_, scenario_.leach, state_.clock.time, scenario_.radio,
                  scenario_.traffic.announcement_bits, scenario_.radio_range);
      death_counted_.assign(state_.clusters.size(), 0);
      return std::vector<std::uint8_t>(state_.clusters.size(), 1);
    }
    if (scenario_.protocol == Protocol::Heed) {
      heed_round(state_, scenario_.heed, scenario_.effective_e_max(),
                 scenario_.radio, scenario_.traffic.announcement_bits,
                 scenario_.radio_range);
      death_counted_.assign(state_.clusters.size(), 0);
      return std::vector<std::uint8_t>(state_.clusters.size(), 1);
    }
    // EFCM: forced rotation on head death, otherwise the slice schedule.
    std::vector<std::uint8_t> handoff(state_.clusters.size(), 0);
    TimeSlice slice{scenario_.time_slice};
    for (std::size_t c = 0; c < state_.clusters.size(); ++c) {
      Cluster& cluster = state_.clusters[c];
      if (cluster.dead) continue;
      if (!state_.node(cluster.head).alive) {
        if (!death_counted_[c]) ++pending_failures_;
        death_counted_[c] = 0;
        if (rotate_to_next_alive(cluster, state_)) {
          detail::announce(state_, cluster, scenario_.radio,
                           scenario_.traffic.announcement_bits);
          handoff[c] = 1;
        }
        continue;
      }
      death_counted_[c] = 0;
      std::optional<HeadAnnouncement> ann;
      if (scenario_.selection_mode == SelectionMode::Ring) {
        ann = select_head(cluster, state_.clock, slice, state_, scenario_.radio,
                          scenario_.traffic.announcement_bits);
      } else {
        ann = select_head_literal_max(cluster, state_.clock, slice, state_,
                                      scenario_.radio,
                                      scenario_.traffic.announcement_bits);
      }
      if (ann) handoff[c] = 1;
    }
    return handoff;
  }

  Scenario scenario_;
  NetworkState state_;
  std::vector<std::uint8_t> death_counted_;
  std::uint64_t pending_failures_ = 0;
};

inline MetricsSeries run(const Scenario& scenario) {
  Simulation sim(scenario);
  return sim.run();
}

/// Per-checkpoint aggregate over seeds for one protocol.
struct AggregateRow {
  std::string protocol;
  std::uint64_t time = 0;
  std::size_t n_seeds = 0;
  double throughput_mean = 0.0, throughput_std = 0.0;
  double throughput_interval_mean = 0.0, throughput_interval_std = 0.0;
  double pdr_mean = 0.0, pdr_std = 0.0;
  double energy_mean = 0.0, energy_std = 0.0;
  double ch_failures_mean = 0.0, ch_failures_std = 0.0;
};

struct ComparisonTable {
  std::vector<AggregateRow> rows;
  // All individual runs, scenario-major then seed-major.
  std::vector<MetricsSeries> runs;
};

namespace detail {

inline void mean_std(const std::vector<double>& xs, double& mean, double& sd) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  mean = sum / static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  sd = std::sqrt(var / static_cast<double>(xs.size()));
}

}  // namespace detail

/// Runs every (scenario, seed) pair and aggregates per-checkpoint means and
/// standard deviations per scenario. Runs are independent, so parallel and
/// serial execution produce identical tables.
inline ComparisonTable compare(const std::vector<Scenario>& scenarios,
                               const std::vector<std::uint64_t>& seeds,
                               bool parallel = true) {
  if (seeds.empty()) throw ConfigError("compare: empty seed list");
  ComparisonTable table;
  table.runs.resize(scenarios.size() * seeds.size());
  auto run_one = [&](std::size_t si, std::size_t wi) {
    Scenario sc = scenarios[si];
    sc.seed = seeds[wi];
    table.runs[si * seeds.size() + wi] = run(sc);
  };
  if (parallel) {
    std::vector<std::future<void>> futures;
    for (std::size_t si = 0; si < scenarios.size(); ++si)
      for (std::size_t wi = 0; wi < seeds.size(); ++wi)
        futures.push_back(std::async(std::launch::async, run_one, si, wi));
    for (auto& f : futures) f.get();
  } else {
    for (std::size_t si = 0; si < scenarios.size(); ++si)
      for (std::size_t wi = 0; wi < seeds.size(); ++wi) run_one(si, wi);
  }
  for (std::size_t si = 0; si < scenarios.size(); ++si) {
    const MetricsSeries& first = table.runs[si * seeds.size()];
    for (std::size_t cp = 0; cp < first.checkpoints.size(); ++cp) {
      AggregateRow row;
      row.protocol = protocol_name(scenarios[si].protocol);
      row.time = first.checkpoints[cp].time;
      row.n_seeds = seeds.size();
      std::vector<double> tp, tpi, pdr, en, cf;
      for (std::size_t wi = 0; wi < seeds.size(); ++wi) {
        const Checkpoint& c = table.runs[si * seeds.size() + wi].checkpoints[cp];
        tp.push_back(c.throughput_bps);
        tpi.push_back(c.throughput_interval_bps);
        pdr.push_back(c.pdr);
        en.push_back(c.mean_residual_energy);
        cf.push_back(static_cast<double>(c.ch_failures));
      }
      detail::mean_std(tp, row.throughput_mean, row.throughput_std);
      detail::mean_std(tpi, row.throughput_interval_mean, row.throughput_interval_std);
      detail::mean_std(pdr, row.pdr_mean, row.pdr_std);
      detail::mean_std(en, row.energy_mean, row.energy_std);
      detail::mean_std(cf, row.ch_failures_mean, row.ch_failures_std);
      table.rows.push_back(row);
    }
  }
  return table;
}

}  // namespace efcm
