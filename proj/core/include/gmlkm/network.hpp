#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace gmlkm {

/// Sensor S_ij: segment i and position rank j, both 1-based.
struct SensorId {
  int segment = 0;
  int rank = 0;

  friend bool operator==(const SensorId&, const SensorId&) = default;
  friend auto operator<=>(const SensorId&, const SensorId&) = default;
};

/// One stored hit: segment and rank are 1-based, hit is the 0-based index
/// into the sensor's chronological record.
struct HitRef {
  int segment = 0;
  int rank = 0;
  int hit = 0;

  SensorId sensor() const { return {segment, rank}; }

  friend bool operator==(const HitRef&, const HitRef&) = default;
  friend auto operator<=>(const HitRef&, const HitRef&) = default;
};

struct RoadSegment {
  int id = 0;
  double length = 0.0;
  std::vector<double> sensor_positions;  // strictly increasing, within [0, length]

  int sensor_count() const { return static_cast<int>(sensor_positions.size()); }
  /// Position of sensor `rank` (1-based).
  double position(int rank) const { return sensor_positions.at(rank - 1); }
};

/// Directed network of one-way segments. Immutable once built; `create`
/// validates every invariant.
class RoadNetwork {
 public:
  using Edge = std::pair<int, int>;  // (from, to), 1-based

  static RoadNetwork create(std::vector<RoadSegment> segments,
                            std::span<const Edge> edges,
                            double intersection_radius);

  int size() const { return static_cast<int>(segments_.size()); }
  const RoadSegment& segment(int id) const { return segments_.at(id - 1); }
  const std::vector<RoadSegment>& segments() const { return segments_; }
  double intersection_radius() const { return radius_; }

  /// A[from][to] with 1-based indices.
  bool has_edge(int from, int to) const {
    return adjacency_[static_cast<std::size_t>(from - 1) * segments_.size() +
                      static_cast<std::size_t>(to - 1)] != 0;
  }
  std::vector<Edge> edges() const;
  std::vector<int> successors(int id) const;
  std::vector<int> predecessors(int id) const;
  /// Dense L x L 0/1 adjacency.
  std::vector<std::vector<std::uint8_t>> adjacency() const;

  friend bool operator==(const RoadNetwork&, const RoadNetwork&);

 private:
  std::vector<RoadSegment> segments_;
  std::vector<std::uint8_t> adjacency_;
  double radius_ = 0.0;
};

bool operator==(const RoadSegment& a, const RoadSegment& b);

struct Measurement {
  double velocity = 0.0;
  double time = 0.0;

  friend bool operator==(const Measurement&, const Measurement&) = default;
};

/// Column X_ij: every hit of one sensor in chronological order.
struct SensorRecord {
  SensorId sensor;
  std::vector<Measurement> hits;

  friend bool operator==(const SensorRecord&, const SensorRecord&) = default;
};

/// All records of one segment, indexed by rank - 1. Sensors with fewer hits
/// than `max_hits()` simply have shorter records; nothing is zero-padded.
struct SegmentDataset {
  int segment = 0;
  std::vector<SensorRecord> records;

  int max_hits() const;
  int total_hits() const;
  const SensorRecord& record(int rank) const { return records.at(rank - 1); }
  const Measurement& at(const HitRef& h) const {
    return records.at(h.rank - 1).hits.at(h.hit);
  }
  /// Throws InputError when a record is out of time order or misnumbered.
  void validate() const;

  friend bool operator==(const SegmentDataset&, const SegmentDataset&) = default;
};

/// Empty datasets (one per segment, one record per sensor) for `net`.
std::vector<SegmentDataset> empty_datasets(const RoadNetwork& net);

/// Lookup across the per-segment list (indexed by segment - 1).
inline const Measurement& measurement_at(std::span<const SegmentDataset> data,
                                         const HitRef& h) {
  return data[h.segment - 1].at(h);
}

}  // namespace gmlkm
