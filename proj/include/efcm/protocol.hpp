#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "efcm/energy.hpp"
#include "efcm/model.hpp"
#include "efcm/xmeans.hpp"

namespace efcm {

struct TimeSlice {
  std::uint32_t duration = 5;  // rounds a head serves before rotation
};

struct HeadAnnouncement {
  ClusterId cluster = 0;
  NodeId head = 0;
  std::uint64_t at_time = 0;
};

namespace detail {

// Broadcast from the new head to its alive members: one transmission at the
// head's max intra-cluster distance plus one reception per alive member.
inline HeadAnnouncement announce(NetworkState& state, Cluster& cluster,
                                 const RadioParams& radio, double bits) {
  const Point head_pos = state.node(cluster.head).position;
  double max_d = 0.0;
  for (NodeId m : cluster.members) {
    if (m == cluster.head || !state.node(m).alive) continue;
    max_d = std::max(max_d, distance(head_pos, state.node(m).position));
  }
  charge(state, cluster.head, tx_cost(bits, max_d, radio));
  for (NodeId m : cluster.members) {
    if (m == cluster.head || !state.node(m).alive) continue;
    charge(state, m, rx_cost(bits, radio));
  }
  return HeadAnnouncement{cluster.id, cluster.head, state.clock.time};
}

}  // namespace detail

/// Advances the rotation cursor to the next alive ring member, wrapping.
/// Marks the cluster dead (and returns false) when no member is alive.
inline bool rotate_to_next_alive(Cluster& cluster, NetworkState& state) {
  const std::size_t n = cluster.ring.size();
  for (std::size_t step = 1; step <= n; ++step) {
    std::size_t pos = (cluster.cursor + step) % n;
    if (state.node(cluster.ring[pos]).alive) {
      if (state.node(cluster.head).alive && state.node(cluster.head).role == Role::Head)
        state.node(cluster.head).role = Role::Member;
      cluster.cursor = pos;
      cluster.head = cluster.ring[pos];
      state.node(cluster.head).role = Role::Head;
      return true;
    }
  }
  cluster.dead = true;
  if (state.node(cluster.head).role == Role::Head)
    state.node(cluster.head).role = Role::Member;
  return false;
}

/// Builds clusters from the alive nodes' positions, sorts each rotation ring
/// by construction-time energy (descending, ties by ascending id), installs
/// the max-energy member as initial head, and announces each head.
inline std::vector<HeadAnnouncement> cluster_construction(
    NetworkState& state, std::uint32_t k_min, std::uint32_t k_max,
    const RadioParams& radio, double announcement_bits,
    std::uint32_t max_iter = 100, double tol = 1e-6) {
  std::vector<NodeId> alive_ids;
  std::vector<Point> positions;
  for (const Node& n : state.nodes) {
    if (n.alive) {
      alive_ids.push_back(n.id);
      positions.push_back(n.position);
    }
  }
  if (alive_ids.empty())
    throw EmptyNetworkError("cluster_construction: zero alive nodes");
  const auto n_alive = static_cast<std::uint32_t>(alive_ids.size());
  k_min = std::min(k_min, n_alive);
  k_max = std::min(k_max, n_alive);
  Clustering clustering =
      xmeans(positions, k_min, k_max, state.rng, max_iter, tol);

  state.clusters.assign(clustering.k, Cluster{});
  for (ClusterId c = 0; c < clustering.k; ++c) state.clusters[c].id = c;
  for (std::size_t i = 0; i < alive_ids.size(); ++i)
    state.clusters[clustering.assignment[i]].members.push_back(alive_ids[i]);

  std::vector<HeadAnnouncement> announcements;
  for (Cluster& cluster : state.clusters) {
    cluster.ring = cluster.members;
    std::stable_sort(cluster.ring.begin(), cluster.ring.end(),
                     [&](NodeId a, NodeId b) {
                       if (state.node(a).energy != state.node(b).energy)
                         return state.node(a).energy > state.node(b).energy;
                       return a < b;
                     });
    cluster.cursor = 0;
    cluster.head = cluster.ring.front();
    state.node(cluster.head).role = Role::Head;
    announcements.push_back(
        detail::announce(state, cluster, radio, announcement_bits));
  }
  return announcements;
}

/// Time-sliced round-robin head rotation. At a slice boundary (time > 0,
/// time % slice == 0) the cursor walks to the next alive ring member, which
/// becomes head and announces; otherwise the cluster is untouched. Round 0
/// belongs to the construction-time head.
inline std::optional<HeadAnnouncement> select_head(Cluster& cluster,
                                                   const SimClock& clock,
                                                   TimeSlice slice,
                                                   NetworkState& state,
                                                   const RadioParams& radio,
                                                   double announcement_bits) {
  if (cluster.dead) return std::nullopt;
  if (clock.time == 0 || clock.time % slice.duration != 0) return std::nullopt;
  if (!rotate_to_next_alive(cluster, state)) return std::nullopt;
  return detail::announce(state, cluster, radio, announcement_bits);
}

/// The literal reading of the published selection loop: at every slice
/// boundary re-select the member with the highest current residual energy.
/// Kept as an alternative mode for comparison with the ring semantics.
inline std::optional<HeadAnnouncement> select_head_literal_max(
    Cluster& cluster, const SimClock& clock, TimeSlice slice,
    NetworkState& state, const RadioParams& radio, double announcement_bits) {
  if (cluster.dead) return std::nullopt;
  if (clock.time == 0 || clock.time % slice.duration != 0) return std::nullopt;
  NodeId best = kNoCluster;
  double best_e = -1.0;
  for (NodeId m : cluster.members) {
    const Node& n = state.node(m);
    if (n.alive && n.energy > best_e) {
      best_e = n.energy;
      best = m;
    }
  }
  if (best == kNoCluster) {
    cluster.dead = true;
    return std::nullopt;
  }
  if (state.node(cluster.head).role == Role::Head)
    state.node(cluster.head).role = Role::Member;
  cluster.head = best;
  state.node(best).role = Role::Head;
  return detail::announce(state, cluster, radio, announcement_bits);
}

}  // namespace efcm
