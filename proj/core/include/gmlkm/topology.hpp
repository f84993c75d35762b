#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gmlkm/network.hpp"

namespace gmlkm {

/// Dual graph with each segment split into its first- and last-sensor
/// nodes: [S_11, S_1N1, S_21, S_2N2, ...]. The only edges run from the
/// last sensor of segment i to the first sensor of segment j when A[i][j].
struct PDualGraph {
  std::vector<SensorId> nodes;
  std::vector<std::vector<std::uint8_t>> adjacency;  // 2L x 2L

  int segment_count() const { return static_cast<int>(nodes.size() / 2); }
};

PDualGraph build_pdual(const RoadNetwork& net);

struct IntersectionSpec {
  std::string name;
  std::vector<int> upstream;    // segments whose last sensor feeds the intersection
  std::vector<int> downstream;  // segments whose first sensor drains it
};

/// One intersection per connected component of the end-sensor/start-sensor
/// edges of the p-dual graph. Names a, b, c, ... follow the components'
/// highest upstream segment in descending order.
std::vector<IntersectionSpec> extract_subgraphs(const PDualGraph& graph);

/// Intersection name for a 0-based ordinal: a..z, aa, ab, ...
std::string intersection_name(std::size_t ordinal);

/// Segments with no inflow (zero adjacency column).
std::vector<int> source_segments(const RoadNetwork& net);

/// Directed cycle test by three-colour depth-first search.
bool has_cycle(const RoadNetwork& net);

}  // namespace gmlkm
