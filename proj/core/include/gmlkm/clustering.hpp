#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace gmlkm {

/// A sample in the (velocity, time) plane.
struct Point2 {
  double x1 = 0.0;  // velocity axis
  double x2 = 0.0;  // time axis

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline double squared_distance(const Point2& a, const Point2& b) {
  const double d1 = a.x1 - b.x1;
  const double d2 = a.x2 - b.x2;
  return d1 * d1 + d2 * d2;
}

struct KMeansOptions {
  int max_iterations = 100;
  double tolerance = 1e-9;  // max centroid displacement
};

struct Clustering {
  std::vector<Point2> centroids;
  std::vector<std::size_t> assignment;    // point index -> centroid index
  double cost = 0.0;                      // sum of squared distances
  std::vector<std::size_t> seed_indices;  // points chosen by D^2 seeding
  std::vector<double> cost_trace;         // cost after every assignment step
  int iterations = 0;

  /// Point indices grouped by centroid.
  std::vector<std::vector<std::size_t>> members() const;
};

/// Index of the nearest centroid; ties go to the lowest index.
/// Throws std::invalid_argument on an empty centroid list.
std::size_t assign(const Point2& point, std::span<const Point2> centroids);

/// Sum over points of the squared distance to the nearest centroid.
double clustering_cost(std::span<const Point2> points, std::span<const Point2> centroids);

/// k-means++: D^2-weighted seeding from `seed`, then Lloyd iterations. A
/// centroid left without points is moved onto the point farthest from its
/// nearest centroid. Throws std::invalid_argument unless 1 <= k <= |points|.
Clustering kmeanspp(std::span<const Point2> points, std::size_t k, std::uint64_t seed,
                    const KMeansOptions& options = {});

}  // namespace gmlkm
