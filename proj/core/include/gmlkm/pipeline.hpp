#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gmlkm/merge.hpp"
#include "gmlkm/mlkm.hpp"
#include "gmlkm/pairing.hpp"
#include "gmlkm/rng.hpp"
#include "gmlkm/topology.hpp"

namespace gmlkm {

enum class Variant {
  kmeans_raw,
  kmeans_preprocessed,
  mlkm_noec,
  mlkm_ec,
  gmlkm_noec,
  gmlkm_ec,
};

std::string_view to_string(Variant v);
/// Throws InputError on an unknown name.
Variant parse_variant(std::string_view name);
std::span<const Variant> all_variants();
bool uses_network(Variant v);
bool uses_error_correction(Variant v);

/// Per-stage seeds: segment i clusters with split_seed(seed, i), the n-th
/// intersection (0-based) pairs with split_seed(seed, 1000 + n).
struct PipelineOptions {
  int sensors_per_block = 3;
  PairingOptions pairing;
};

/// Everything one association run produces. `groups` is the final
/// partition of hits that accuracy is scored on: tracks for segment-level
/// variants, whole trajectories for the network variants.
struct AssociationResult {
  Variant variant{};
  std::vector<std::vector<Track>> tracks;  // per segment
  std::vector<IntersectionSpec> intersections;
  std::vector<PairingMatrix> pairings;
  std::optional<TraceResult> trace;
  std::vector<std::vector<HitRef>> groups;
  std::vector<std::string> diagnostics;
};

/// k-means++ over a whole segment with k = its largest per-sensor hit
/// count, on raw or start-projected points.
std::vector<Track> kmeans_segment(const SegmentDataset& data, const RoadSegment& segment,
                                  bool preprocess, std::uint64_t seed);

AssociationResult associate(const RoadNetwork& net, std::span<const SegmentDataset> data,
                            Variant variant, std::uint64_t seed,
                            const PipelineOptions& options = {});

/// Counts of surviving rule violations in a finished run.
struct ViolationCount {
  int track_rules = 0;    // per-segment tracks breaking R1-R3 (K = N_i)
  int pairing_rules = 0;  // real pairs with exit time <= entry time
};

ViolationCount count_violations(const AssociationResult& result,
                                std::span<const SegmentDataset> data);

}  // namespace gmlkm
