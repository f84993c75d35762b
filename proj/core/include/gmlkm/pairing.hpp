#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gmlkm/network.hpp"
#include "gmlkm/topology.hpp"

namespace gmlkm {

struct IntersectionEntry {
  Measurement measurement;
  HitRef origin;
};

/// Hits entering (last sensors of upstream segments) and leaving (first
/// sensors of downstream segments) one intersection, each in canonical
/// order: segment index, then time.
struct IntersectionDataset {
  IntersectionSpec spec;
  std::vector<IntersectionEntry> incoming;
  std::vector<IntersectionEntry> outgoing;

  std::size_t n_in() const { return incoming.size(); }
  std::size_t n_out() const { return outgoing.size(); }
};

/// Throws InputError when fewer hits enter than leave.
IntersectionDataset gather(const IntersectionSpec& spec, const RoadNetwork& net,
                           std::span<const SegmentDataset> data);

/// Permutation between incoming hits (rows) and outgoing hits followed by
/// n_in - n_out stop slots (columns).
struct PairingMatrix {
  std::string name;
  std::vector<HitRef> rows;
  std::vector<HitRef> cols;          // real outgoing columns only
  std::vector<std::size_t> column_of;  // per row; >= cols.size() is a stop slot

  std::size_t size() const { return rows.size(); }
  bool is_stop(std::size_t row) const { return column_of[row] >= cols.size(); }
  std::vector<std::vector<std::uint8_t>> matrix() const;
  /// Row-major labels for export.
  std::vector<std::string> row_labels() const;
  std::vector<std::string> col_labels() const;
};

/// Rule bits for one cluster of intersection hits.
enum PairRule : unsigned {
  kTooManyHits = 1u << 0,     // more than two hits
  kIncomingCount = 1u << 1,   // not exactly one incoming hit
  kExitBeforeEntry = 1u << 2, // outgoing time <= incoming time
};

unsigned cluster_violations(std::span<const IntersectionEntry> incoming,
                            std::span<const IntersectionEntry> outgoing);

struct PairingOptions {
  bool error_correction = true;
  /// Cost of sending an incoming hit to a stop slot; defaults to the 95th
  /// percentile of the pooled pairwise costs.
  std::optional<double> stop_penalty;
  double velocity_weight = 1.0;
};

struct PairingResult {
  PairingMatrix pairing;
  std::vector<std::string> diagnostics;
};

/// Cost of pairing an incoming with an outgoing hit: Euclidean distance of
/// the intersection-projected points, velocity axis scaled by `velocity_weight`.
double pair_cost(const IntersectionEntry& in, const IntersectionEntry& out,
                 const RoadNetwork& net, double velocity_weight = 1.0);

/// Cost at or above this marks a pair that leaves before it enters.
inline constexpr double kForbiddenPair = 1e12;

/// n_in x n_in costs used by the correction step: real outgoing columns
/// (pair_cost, or kForbiddenPair when the exit is not after the entry)
/// followed by stop slots at the stop penalty.
std::vector<std::vector<double>> pairing_costs(const IntersectionDataset& data, const RoadNetwork& net,
                                               const PairingOptions& options = {});
/// Exact minimum-cost pairing of the whole intersection over `pairing_costs`.
PairingMatrix pair_exact(const IntersectionDataset& data, const RoadNetwork& net,
                         const PairingOptions& options = {});

/// k-means++ on the projected hits with k = n_in, rule checks, then an
/// exact assignment over the pooled hits of every rule-breaking cluster.
PairingResult pair(const IntersectionDataset& data, const RoadNetwork& net, std::uint64_t seed,
                   const PairingOptions& options = {});

}  // namespace gmlkm
