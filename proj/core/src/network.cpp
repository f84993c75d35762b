#include "gmlkm/network.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <fmt/format.h>

#include "gmlkm/error.hpp"

namespace gmlkm {

RoadNetwork RoadNetwork::create(std::vector<RoadSegment> segments, std::span<const Edge> edges,
                                double intersection_radius) {
  if (!(intersection_radius > 0.0) || !std::isfinite(intersection_radius)) {
    throw InputError("intersection_radius must be positive");
  }
  std::sort(segments.begin(), segments.end(),
            [](const RoadSegment& a, const RoadSegment& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& s = segments[i];
    if (s.id != static_cast<int>(i) + 1) {
      throw InputError(fmt::format("segment ids must be 1..{} without gaps (found {})",
                                   segments.size(), s.id));
    }
    if (!(s.length > 0.0) || !std::isfinite(s.length)) {
      throw InputError(fmt::format("segment {}: length must be positive", s.id));
    }
    if (s.sensor_positions.empty()) {
      throw InputError(fmt::format("segment {}: at least one sensor is required", s.id));
    }
    for (std::size_t j = 0; j < s.sensor_positions.size(); ++j) {
      const double d = s.sensor_positions[j];
      if (!std::isfinite(d) || d < 0.0 || d > s.length) {
        throw InputError(
            fmt::format("segment {}: sensor {} position {} outside [0, {}]", s.id, j + 1, d, s.length));
      }
      if (j > 0 && !(d > s.sensor_positions[j - 1])) {
        throw InputError(fmt::format("segment {}: non-increasing positions at sensor {}", s.id, j + 1));
      }
    }
  }

  RoadNetwork net;
  const std::size_t n = segments.size();
  net.segments_ = std::move(segments);
  net.adjacency_.assign(n * n, 0);
  net.radius_ = intersection_radius;
  for (const auto& [from, to] : edges) {
    if (from < 1 || to < 1 || from > static_cast<int>(n) || to > static_cast<int>(n)) {
      throw InputError(fmt::format("edge [{}, {}] references an unknown segment", from, to));
    }
    if (from == to) {
      throw InputError(fmt::format("self-loop on segment {}", from));
    }
    net.adjacency_[static_cast<std::size_t>(from - 1) * n + static_cast<std::size_t>(to - 1)] = 1;
  }
  return net;
}

std::vector<RoadNetwork::Edge> RoadNetwork::edges() const {
  std::vector<Edge> out;
  for (int i = 1; i <= size(); ++i) {
    for (int j = 1; j <= size(); ++j) {
      if (has_edge(i, j)) out.emplace_back(i, j);
    }
  }
  return out;
}

std::vector<int> RoadNetwork::successors(int id) const {
  std::vector<int> out;
  for (int j = 1; j <= size(); ++j) {
    if (has_edge(id, j)) out.push_back(j);
  }
  return out;
}

std::vector<int> RoadNetwork::predecessors(int id) const {
  std::vector<int> out;
  for (int i = 1; i <= size(); ++i) {
    if (has_edge(i, id)) out.push_back(i);
  }
  return out;
}

std::vector<std::vector<std::uint8_t>> RoadNetwork::adjacency() const {
  const auto n = static_cast<std::size_t>(size());
  std::vector<std::vector<std::uint8_t>> a(n, std::vector<std::uint8_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = adjacency_[i * n + j];
  }
  return a;
}

bool operator==(const RoadSegment& a, const RoadSegment& b) {
  return a.id == b.id && a.length == b.length && a.sensor_positions == b.sensor_positions;
}

bool operator==(const RoadNetwork& a, const RoadNetwork& b) {
  return a.segments_ == b.segments_ && a.adjacency_ == b.adjacency_ && a.radius_ == b.radius_;
}

int SegmentDataset::max_hits() const {
  int m = 0;
  for (const auto& r : records) m = std::max(m, static_cast<int>(r.hits.size()));
  return m;
}

int SegmentDataset::total_hits() const {
  int n = 0;
  for (const auto& r : records) n += static_cast<int>(r.hits.size());
  return n;
}

void SegmentDataset::validate() const {
  for (std::size_t j = 0; j < records.size(); ++j) {
    const auto& r = records[j];
    if (r.sensor.segment != segment || r.sensor.rank != static_cast<int>(j) + 1) {
      throw InputError(fmt::format("segment {}: record {} is labelled S{}.{}", segment, j + 1,
                                   r.sensor.segment, r.sensor.rank));
    }
    for (std::size_t n = 0; n < r.hits.size(); ++n) {
      const auto& h = r.hits[n];
      if (!(h.velocity > 0.0) || !std::isfinite(h.velocity) || !std::isfinite(h.time)) {
        throw InputError(fmt::format("S{}.{} hit {}: velocity must be positive and finite",
                                     segment, j + 1, n + 1));
      }
      if (n > 0 && !(h.time > r.hits[n - 1].time)) {
        throw InputError(fmt::format("S{}.{}: hit times must be strictly increasing (hit {})",
                                     segment, j + 1, n + 1));
      }
    }
  }
}

std::vector<SegmentDataset> empty_datasets(const RoadNetwork& net) {
  std::vector<SegmentDataset> out;
  out.reserve(static_cast<std::size_t>(net.size()));
  for (const auto& s : net.segments()) {
    SegmentDataset ds;
    ds.segment = s.id;
    for (int j = 1; j <= s.sensor_count(); ++j) ds.records.push_back({SensorId{s.id, j}, {}});
    out.push_back(std::move(ds));
  }
  return out;
}

}  // namespace gmlkm
