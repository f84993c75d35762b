#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gmlkm/clustering.hpp"
#include "gmlkm/network.hpp"

namespace gmlkm {

/// Hits attributed to one target on one segment, ordered by sensor rank
/// (then time).
struct Track {
  int segment = 0;
  int label = 0;  // 1-based; stable order by first-hit time once finalized
  std::vector<HitRef> members;

  bool contains_rank(int rank) const;
};

/// Rule bits reported by `track_violations`.
enum TrackRule : unsigned {
  kTooManyMembers = 1u << 0,  // |T| > K
  kSharedSensor = 1u << 1,    // two members from one sensor
  kTimeReversed = 1u << 2,    // a later sensor saw the target no later than an earlier one
};

unsigned track_violations(const Track& track, const SegmentDataset& data, int max_members);

/// Block of consecutive sensors clustered together in the first layer.
struct DataSegment {
  int index = 0;  // 1-based
  int first_rank = 0;
  int last_rank = 0;

  int sensor_count() const { return last_rank - first_rank + 1; }
};

/// Centroid k belongs to track k of the same block. `position` is the mean
/// position of the block's sensors; centroid times are referred to it.
struct CentroidSet {
  int block = 0;
  std::vector<Point2> centroids;
  double position = 0.0;
};

struct BlockClustering {
  DataSegment block;
  CentroidSet centroids;
  std::vector<Track> tracks;
};

/// ceil(sensor_count / K) blocks; the last may be short.
std::vector<DataSegment> partition_sensors(int sensor_count, int sensors_per_block);

/// Mean velocity and mean time (each hit projected to the block position)
/// of every track.
CentroidSet block_centroids(const DataSegment& block, std::span<const Track> tracks,
                            const SegmentDataset& data, const RoadSegment& segment);

/// Layer 1: per block, project hits to the segment start and run k-means++
/// with k = the block's largest per-sensor hit count.
std::vector<BlockClustering> layer1_cluster(const SegmentDataset& data, const RoadSegment& segment,
                                            int sensors_per_block, std::uint64_t seed);

/// Layer 2 detection: tracks that break any of the three rules.
std::vector<Track> detect_errors(std::span<const Track> tracks, const SegmentDataset& data,
                                 int sensors_per_block);

struct CorrectionResult {
  std::vector<Track> tracks;
  std::vector<std::string> diagnostics;
};

/// Layer 2 correction: pools the flagged members and rebuilds tracks rank
/// by rank, matching each chain to the next-rank hit that best fits its
/// predicted arrival time (exact one-to-one assignment per rank).
CorrectionResult correct_errors(std::span<const Track> flagged, const SegmentDataset& data,
                                const RoadSegment& segment);

/// Layer 3: project every block centroid to the first block position,
/// cluster with k = track_count and concatenate tracks sharing a cluster.
/// With `error_correction`, merged tracks that break the rules are sent
/// through detect/correct once more.
CorrectionResult layer3_match(std::span<const BlockClustering> blocks, int track_count,
                              std::uint64_t seed, const SegmentDataset& data,
                              const RoadSegment& segment, bool error_correction);

struct MlkmOptions {
  int sensors_per_block = 3;
  bool error_correction = true;
};

/// Full three-layer pipeline for one segment. Output tracks are labelled
/// 1..n by first-hit time and partition every hit of `data`.
CorrectionResult mlkm(const SegmentDataset& data, const RoadSegment& segment,
                      const MlkmOptions& options, std::uint64_t seed);

/// Sorts members, orders tracks by first-hit time and relabels 1..n.
void finalize_tracks(std::vector<Track>& tracks, const SegmentDataset& data);

}  // namespace gmlkm
