#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "efcm/energy.hpp"
#include "efcm/model.hpp"

namespace efcm {

inline std::uint32_t leach_epoch_length(const LeachParams& params) {
  return static_cast<std::uint32_t>(std::ceil(1.0 / params.p));
}

namespace detail {

// Rebuilds state.clusters from an elected head set. Members are charged the
// election exchange: ADV reception, a join message to the head, and the
// head's schedule broadcast.
inline void form_clusters(NetworkState& state, const std::vector<NodeId>& heads,
                          const std::vector<ClusterId>& join_of,
                          const RadioParams& radio, double bits) {
  state.clusters.assign(heads.size(), Cluster{});
  for (ClusterId c = 0; c < heads.size(); ++c) {
    state.clusters[c].id = c;
    state.clusters[c].members.push_back(heads[c]);
    state.clusters[c].head = heads[c];
    state.node(heads[c]).role = Role::Head;
  }
  for (const Node& n : state.nodes) {
    if (!n.alive || n.role == Role::Head) continue;
    ClusterId c = join_of[n.id];
    if (c == kNoCluster) continue;  // LEACH direct-to-BS fallback
    state.clusters[c].members.push_back(n.id);
  }
  for (Cluster& cluster : state.clusters) {
    std::sort(cluster.members.begin(), cluster.members.end());
    cluster.ring = cluster.members;
    cluster.cursor = static_cast<std::size_t>(
        std::find(cluster.ring.begin(), cluster.ring.end(), cluster.head) -
        cluster.ring.begin());
    const Point head_pos = state.node(cluster.head).position;
    double max_d = 0.0;
    for (NodeId m : cluster.members) {
      if (m == cluster.head) continue;
      double d = distance(head_pos, state.node(m).position);
      max_d = std::max(max_d, d);
      charge(state, m, rx_cost(bits, radio));      // ADV
      charge(state, m, tx_cost(bits, d, radio));   // join request
      charge(state, cluster.head, rx_cost(bits, radio));
      charge(state, m, rx_cost(bits, radio));      // schedule
    }
    charge(state, cluster.head, tx_cost(bits, max_d, radio));  // schedule
  }
}

}  // namespace detail

/// One LEACH election round: probabilistic self-election with the rotating
/// threshold, nearest-head joining, direct-to-base-station fallback when no
/// head came up. Rebuilds roles and clusters in place.
inline void leach_round(NetworkState& state, const LeachParams& params,
                        std::uint64_t round, const RadioParams& radio,
                        double announcement_bits, double adv_range) {
  if (params.p <= 0.0 || params.p > 1.0)
    throw std::invalid_argument("leach_round: p must be in (0,1]");
  const std::uint32_t epoch = leach_epoch_length(params);
  const std::uint64_t phase = round % epoch;
  if (phase == 0) std::fill(state.leach_served.begin(), state.leach_served.end(), 0);

  for (Node& n : state.nodes)
    if (n.alive) n.role = Role::Member;
  state.clusters.clear();
  state.direct_round = false;

  double threshold =
      std::min(1.0, params.p / (1.0 - params.p * static_cast<double>(phase)));
  std::vector<NodeId> heads;
  for (Node& n : state.nodes) {
    if (!n.alive || state.leach_served[n.id]) continue;
    if (state.rng.bernoulli(threshold)) {
      state.leach_served[n.id] = 1;
      heads.push_back(n.id);
    }
  }
  if (heads.empty()) {
    state.direct_round = true;
    return;
  }
  std::vector<ClusterId> join_of(state.nodes.size(), kNoCluster);
  for (const Node& n : state.nodes) {
    if (!n.alive) continue;
    ClusterId best = kNoCluster;
    double best_d = std::numeric_limits<double>::infinity();
    for (ClusterId c = 0; c < heads.size(); ++c) {
      double d = squared_distance(n.position, state.node(heads[c]).position);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    join_of[n.id] = best;
  }
  detail::form_clusters(state, heads, join_of, radio, announcement_bits);
  for (Cluster& cluster : state.clusters)
    charge(state, cluster.head, tx_cost(announcement_bits, adv_range, radio));  // ADV
}

/// Per-node initial HEED head probability.
inline double heed_initial_prob(const HeedParams& params, double energy,
                                double e_max) {
  return std::min(1.0, std::max(params.c_prob * energy / e_max, params.p_min));
}

/// One HEED election round: energy-weighted tentative self-election with
/// probability doubling until every node finalizes, then nearest-final-head
/// joining within cluster range with an isolated-node fallback.
inline void heed_round(NetworkState& state, const HeedParams& params,
                       double e_max, const RadioParams& radio,
                       double announcement_bits, double range) {
  for (Node& n : state.nodes)
    if (n.alive) n.role = Role::Member;
  state.clusters.clear();
  state.direct_round = false;

  const std::size_t n_nodes = state.nodes.size();
  std::vector<double> ch_prob(n_nodes, 0.0);
  std::vector<std::uint8_t> tentative(n_nodes, 0), done(n_nodes, 0);
  std::vector<NodeId> finals;
  for (const Node& n : state.nodes)
    if (n.alive) ch_prob[n.id] = heed_initial_prob(params, n.energy, e_max);

  const double range2 = range * range;
  auto has_candidate_in_range = [&](const Node& n) {
    for (const Node& other : state.nodes) {
      if (other.id == n.id || !tentative[other.id]) continue;
      if (squared_distance(n.position, other.position) <= range2) return true;
    }
    return false;
  };

  bool pending = true;
  while (pending) {
    pending = false;
    for (Node& n : state.nodes) {
      if (!n.alive || done[n.id]) continue;
      charge(state, n.id, rx_cost(announcement_bits, radio));  // listening
      if (!n.alive) { done[n.id] = 1; continue; }
      if (!tentative[n.id] && !has_candidate_in_range(n)) {
        if (state.rng.bernoulli(ch_prob[n.id])) tentative[n.id] = 1;
      }
      if (tentative[n.id]) {
        charge(state, n.id, tx_cost(announcement_bits, range, radio));
        if (!n.alive) { done[n.id] = 1; tentative[n.id] = 0; continue; }
      }
      if (ch_prob[n.id] >= 1.0) {
        done[n.id] = 1;
        if (tentative[n.id]) finals.push_back(n.id);
      } else {
        ch_prob[n.id] = std::min(1.0, ch_prob[n.id] * 2.0);
        pending = true;
      }
    }
  }

  // Joining: nearest final head within range; isolated nodes self-elect.
  std::vector<std::uint8_t> is_final(n_nodes, 0);
  for (NodeId h : finals) is_final[h] = 1;
  std::vector<NodeId> heads = finals;
  std::vector<ClusterId> head_index(n_nodes, kNoCluster);
  std::vector<ClusterId> join_of(n_nodes, kNoCluster);
  std::sort(heads.begin(), heads.end());
  for (ClusterId c = 0; c < heads.size(); ++c) head_index[heads[c]] = c;
  for (const Node& n : state.nodes) {
    if (!n.alive) continue;
    if (is_final[n.id]) {
      join_of[n.id] = head_index[n.id];
      continue;
    }
    ClusterId best = kNoCluster;
    double best_d = range2;
    for (ClusterId c = 0; c < heads.size(); ++c) {
      double d = squared_distance(n.position, state.node(heads[c]).position);
      if (d <= best_d) {
        best_d = d;
        best = c;
      }
    }
    if (best == kNoCluster) {
      // Isolated fallback: the node heads its own singleton cluster.
      heads.push_back(n.id);
      head_index[n.id] = static_cast<ClusterId>(heads.size() - 1);
      join_of[n.id] = head_index[n.id];
      is_final[n.id] = 1;
    } else {
      join_of[n.id] = best;
    }
  }
  if (heads.empty()) return;  // fully dead network
  detail::form_clusters(state, heads, join_of, radio, announcement_bits);
}

}  // namespace efcm
