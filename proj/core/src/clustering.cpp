#include "gmlkm/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace gmlkm {

std::vector<std::vector<std::size_t>> Clustering::members() const {
  std::vector<std::vector<std::size_t>> out(centroids.size());
  for (std::size_t i = 0; i < assignment.size(); ++i) out[assignment[i]].push_back(i);
  return out;
}

std::size_t assign(const Point2& point, std::span<const Point2> centroids) {
  if (centroids.empty()) throw std::invalid_argument("assign: empty centroid list");
  std::size_t best = 0;
  double best_d = squared_distance(point, centroids[0]);
  for (std::size_t c = 1; c < centroids.size(); ++c) {
    const double d = squared_distance(point, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

double clustering_cost(std::span<const Point2> points, std::span<const Point2> centroids) {
  double cost = 0.0;
  for (const auto& p : points) cost += squared_distance(p, centroids[assign(p, centroids)]);
  return cost;
}

namespace {

// D^2 seeding. Draws are taken from a single mt19937_64 stream so equal
// seeds reproduce the same centroids.
std::vector<std::size_t> seed_centroids(std::span<const Point2> points, std::size_t k,
                                        std::mt19937_64& rng) {
  const std::size_t n = points.size();
  std::vector<std::size_t> chosen;
  chosen.reserve(k);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  chosen.push_back(pick(rng));
  std::vector<double> nearest(n);
  for (std::size_t i = 0; i < n; ++i) nearest[i] = squared_distance(points[i], points[chosen[0]]);

  while (chosen.size() < k) {
    double total = 0.0;
    for (const double d : nearest) total += d;
    std::size_t next = n;
    if (total > 0.0) {
      const double target = unit(rng) * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (nearest[i] <= 0.0) continue;
        acc += nearest[i];
        next = i;
        if (acc > target) break;
      }
    } else {
      // Every point coincides with a centroid; duplicate one at random.
      next = pick(rng);
    }
    chosen.push_back(next);
    for (std::size_t i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], squared_distance(points[i], points[next]));
    }
  }
  return chosen;
}

}  // namespace

Clustering kmeanspp(std::span<const Point2> points, std::size_t k, std::uint64_t seed,
                    const KMeansOptions& options) {
  if (points.empty()) throw std::invalid_argument("kmeanspp: no points");
  if (k == 0 || k > points.size()) {
    throw std::invalid_argument("kmeanspp: k must satisfy 1 <= k <= number of points");
  }
  const std::size_t n = points.size();
  std::mt19937_64 rng(seed);

  Clustering result;
  result.seed_indices = seed_centroids(points, k, rng);
  for (const auto idx : result.seed_indices) result.centroids.push_back(points[idx]);
  result.assignment.assign(n, 0);

  std::vector<double> sum1(k), sum2(k);
  std::vector<std::size_t> count(k);
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    // Assignment step.
    double cost = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      result.assignment[i] = assign(points[i], result.centroids);
      cost += squared_distance(points[i], result.centroids[result.assignment[i]]);
    }
    result.cost_trace.push_back(cost);
    result.iterations = iter + 1;

    // Update step.
    std::fill(sum1.begin(), sum1.end(), 0.0);
    std::fill(sum2.begin(), sum2.end(), 0.0);
    std::fill(count.begin(), count.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = result.assignment[i];
      sum1[c] += points[i].x1;
      sum2[c] += points[i].x2;
      ++count[c];
    }
    double displacement = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      if (count[c] == 0) continue;
      const Point2 moved{sum1[c] / static_cast<double>(count[c]), sum2[c] / static_cast<double>(count[c])};
      displacement = std::max(displacement, std::sqrt(squared_distance(moved, result.centroids[c])));
      result.centroids[c] = moved;
    }

    // Empty clusters: move onto the point farthest from its nearest centroid.
    for (std::size_t c = 0; c < k; ++c) {
      if (count[c] != 0) continue;
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = squared_distance(points[i], result.centroids[assign(points[i], result.centroids)]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      if (far_d > 0.0) {
        displacement = std::max(displacement, std::sqrt(squared_distance(points[far], result.centroids[c])));
        result.centroids[c] = points[far];
      }
    }

    if (displacement < options.tolerance) break;
  }

  // Final state: every point on its nearest centroid, cost of that state.
  result.cost = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    result.assignment[i] = assign(points[i], result.centroids);
    result.cost += squared_distance(points[i], result.centroids[result.assignment[i]]);
  }
  if (result.cost_trace.empty() || result.cost != result.cost_trace.back()) {
    result.cost_trace.push_back(result.cost);
  }
  return result;
}

}  // namespace gmlkm
