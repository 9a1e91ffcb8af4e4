#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "efcm/geometry.hpp"
#include "efcm/rng.hpp"

namespace efcm {

/// A flat clustering of 2-D points. Every point is assigned to its nearest
/// centroid (ties to the lowest cluster index) and no cluster is empty.
struct Clustering {
  std::uint32_t k = 0;
  std::vector<Point> centroids;
  std::vector<std::uint32_t> assignment;  // per point, in [0, k)
};

namespace detail {

inline std::uint32_t nearest_centroid(const Point& p,
                                      const std::vector<Point>& centroids) {
  std::uint32_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::uint32_t j = 0; j < centroids.size(); ++j) {
    double d = squared_distance(p, centroids[j]);
    if (d < best_d) {
      best_d = d;
      best = j;
    }
  }
  return best;
}

inline std::vector<std::uint32_t> assign_all(const std::vector<Point>& points,
                                             const std::vector<Point>& centroids) {
  std::vector<std::uint32_t> a(points.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    a[i] = nearest_centroid(points[i], centroids);
  return a;
}

// Reseeds each empty centroid to the point currently farthest from its own
// centroid, then reassigns. Bounded by k passes.
inline void repair_empty(const std::vector<Point>& points,
                         std::vector<Point>& centroids,
                         std::vector<std::uint32_t>& assignment) {
  const std::uint32_t k = static_cast<std::uint32_t>(centroids.size());
  for (std::uint32_t pass = 0; pass < k; ++pass) {
    std::vector<std::size_t> counts(k, 0);
    for (auto a : assignment) ++counts[a];
    std::uint32_t empty = k;
    for (std::uint32_t j = 0; j < k; ++j) {
      if (counts[j] == 0) {
        empty = j;
        break;
      }
    }
    if (empty == k) return;
    std::size_t far = 0;
    double far_d = -1.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      double d = squared_distance(points[i], centroids[assignment[i]]);
      if (d > far_d && counts[assignment[i]] > 1) {
        far_d = d;
        far = i;
      }
    }
    centroids[empty] = points[far];
    assignment = assign_all(points, centroids);
  }
}

}  // namespace detail

/// Within-cluster sum of squared distances.
inline double sse(const std::vector<Point>& points, const Clustering& c) {
  double sum = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    sum += squared_distance(points[i], c.centroids[c.assignment[i]]);
  return sum;
}

/// Lloyd iterations from explicit initial centroids. Terminates when the
/// maximum centroid displacement drops to `tol` or after `max_iter` rounds.
inline Clustering kmeans_from(const std::vector<Point>& points,
                              std::vector<Point> centroids,
                              std::uint32_t max_iter = 100, double tol = 1e-6) {
  if (centroids.empty() || centroids.size() > points.size())
    throw std::invalid_argument("kmeans: need 1 <= k <= number of points");
  if (max_iter < 1) throw std::invalid_argument("kmeans: max_iter >= 1");
  const std::uint32_t k = static_cast<std::uint32_t>(centroids.size());
  std::vector<std::uint32_t> assignment = detail::assign_all(points, centroids);
  detail::repair_empty(points, centroids, assignment);
  for (std::uint32_t iter = 0; iter < max_iter; ++iter) {
    std::vector<Point> sums(k);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
      sums[assignment[i]].x += points[i].x;
      sums[assignment[i]].y += points[i].y;
      ++counts[assignment[i]];
    }
    double max_shift = 0.0;
    for (std::uint32_t j = 0; j < k; ++j) {
      Point updated{sums[j].x / counts[j], sums[j].y / counts[j]};
      max_shift = std::max(max_shift, distance(updated, centroids[j]));
      centroids[j] = updated;
    }
    assignment = detail::assign_all(points, centroids);
    detail::repair_empty(points, centroids, assignment);
    if (max_shift <= tol) break;
  }
  return Clustering{k, std::move(centroids), std::move(assignment)};
}

/// K-means with initial centroids sampled uniformly without replacement from
/// the input points.
inline Clustering kmeans(const std::vector<Point>& points, std::uint32_t k,
                         RandomStream& rng, std::uint32_t max_iter = 100,
                         double tol = 1e-6) {
  if (k < 1 || k > points.size())
    throw std::invalid_argument("kmeans: need 1 <= k <= number of points");
  std::vector<std::size_t> idx(points.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<Point> centroids;
  centroids.reserve(k);
  for (std::uint32_t j = 0; j < k; ++j) {
    std::size_t pick = j + rng.index(idx.size() - j);
    std::swap(idx[j], idx[pick]);
    centroids.push_back(points[idx[j]]);
  }
  return kmeans_from(points, std::move(centroids), max_iter, tol);
}

/// BIC of the identical-spherical-Gaussian mixture implied by a clustering.
/// Higher is better. Free-parameter count p = k*d + k + 1 with d = 2; the
/// pooled ML variance is floored at 1e-12 m^2.
inline double bic(const std::vector<Point>& points, const Clustering& c) {
  const double R = static_cast<double>(points.size());
  const double K = static_cast<double>(c.k);
  constexpr double kDim = 2.0;
  constexpr double kVarFloor = 1e-12;
  if (points.size() < c.k)
    throw std::invalid_argument("bic: fewer points than clusters");
  double variance = sse(points, c) / (kDim * R);
  variance = std::max(variance, kVarFloor);
  std::vector<std::size_t> counts(c.k, 0);
  for (auto a : c.assignment) ++counts[a];
  double loglik = 0.0;
  for (std::size_t n : counts) {
    if (n > 0) loglik += static_cast<double>(n) * std::log(static_cast<double>(n) / R);
  }
  constexpr double kPi = 3.14159265358979323846;
  loglik -= (R * kDim / 2.0) * std::log(2.0 * kPi * variance);
  loglik -= R * kDim / 2.0;
  const double free_params = K * kDim + K + 1.0;
  return loglik - (free_params / 2.0) * std::log(R);
}

/// X-means: starts at k_min, repeatedly 2-splits clusters whose local BIC
/// improves, re-running global k-means after each accepted batch, until no
/// split is accepted or k reaches k_max.
inline Clustering xmeans(const std::vector<Point>& points, std::uint32_t k_min,
                         std::uint32_t k_max, RandomStream& rng,
                         std::uint32_t max_iter = 100, double tol = 1e-6) {
  if (k_min < 1 || k_min > k_max || k_max > points.size())
    throw std::invalid_argument(
        "xmeans: need 1 <= k_min <= k_max <= number of points");
  Clustering current = kmeans(points, k_min, rng, max_iter, tol);
  while (current.k < k_max) {
    std::vector<Point> next_centroids;
    bool accepted = false;
    std::uint32_t budget = k_max - current.k;  // extra clusters still allowed
    for (std::uint32_t j = 0; j < current.k; ++j) {
      std::vector<Point> local;
      for (std::size_t i = 0; i < points.size(); ++i)
        if (current.assignment[i] == j) local.push_back(points[i]);
      bool split = false;
      std::vector<Point> children;
      if (budget > 0 && local.size() >= 2) {
        Clustering parent{1, {current.centroids[j]},
                          std::vector<std::uint32_t>(local.size(), 0)};
        // Two seeded restarts guard against a bad local initialization.
        Clustering best_child = kmeans(local, 2, rng, max_iter, tol);
        Clustering other = kmeans(local, 2, rng, max_iter, tol);
        if (sse(local, other) < sse(local, best_child)) best_child = other;
        if (bic(local, best_child) > bic(local, parent)) {
          split = true;
          children = best_child.centroids;
        }
      }
      if (split) {
        next_centroids.push_back(children[0]);
        next_centroids.push_back(children[1]);
        --budget;
        accepted = true;
      } else {
        next_centroids.push_back(current.centroids[j]);
      }
    }
    if (!accepted) break;
    current = kmeans_from(points, std::move(next_centroids), max_iter, tol);
  }
  return current;
}

}  // namespace efcm
