#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gmlkm/mlkm.hpp"
#include "gmlkm/network.hpp"
#include "gmlkm/pairing.hpp"

namespace gmlkm {

struct Hop {
  int segment = 0;
  int label = 0;  // track label within the segment

  friend bool operator==(const Hop&, const Hop&) = default;
};

struct Trajectory {
  int id = 0;
  std::vector<Hop> hops;
  bool complete = false;  // left the network through a sink segment
};

/// m_i x m_i indicator of tracks on one segment that share a target.
struct MergeMatrix {
  int segment = 0;
  std::vector<std::vector<std::uint8_t>> matrix;
};

struct TraceResult {
  std::vector<Trajectory> trajectories;
  std::vector<MergeMatrix> merges;       // one per segment, in segment order
  std::vector<std::string> conflicts;    // downstream tracks claimed twice
};

/// Follows every track of every source segment through the pairing
/// matrices; tracks never reached start their own trajectories. `tracks`
/// is indexed by segment - 1 and must carry labels 1..m_i.
/// Throws IntegrityError when a pairing references a hit no track owns.
TraceResult trace(const RoadNetwork& net, std::span<const std::vector<Track>> tracks,
                  std::span<const PairingMatrix> pairings);

/// Symmetric closure check helpers used by tests and the acceptance suite.
bool is_symmetric_unit_diagonal(const MergeMatrix& m);
bool is_transitively_closed(const MergeMatrix& m);

}  // namespace gmlkm
