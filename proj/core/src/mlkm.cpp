#include "gmlkm/mlkm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "gmlkm/assignment.hpp"
#include "gmlkm/preprocessing.hpp"
#include "gmlkm/rng.hpp"

namespace gmlkm {

namespace {

constexpr double kForbidden = 1e12;  // time-reversed link
constexpr double kNewChain = 1e6;    // start a fresh track instead of extending one

}  // namespace

bool Track::contains_rank(int rank) const {
  return std::any_of(members.begin(), members.end(),
                     [rank](const HitRef& h) { return h.rank == rank; });
}

unsigned track_violations(const Track& track, const SegmentDataset& data, int max_members) {
  unsigned rules = 0;
  if (static_cast<int>(track.members.size()) > max_members) rules |= kTooManyMembers;
  for (std::size_t a = 0; a < track.members.size(); ++a) {
    for (std::size_t b = a + 1; b < track.members.size(); ++b) {
      const auto& ha = track.members[a];
      const auto& hb = track.members[b];
      if (ha.rank == hb.rank) {
        rules |= kSharedSensor;
        continue;
      }
      const auto& early = ha.rank < hb.rank ? ha : hb;
      const auto& late = ha.rank < hb.rank ? hb : ha;
      if (data.at(late).time <= data.at(early).time) rules |= kTimeReversed;
    }
  }
  return rules;
}

void finalize_tracks(std::vector<Track>& tracks, const SegmentDataset& data) {
  std::erase_if(tracks, [](const Track& t) { return t.members.empty(); });
  for (auto& t : tracks) {
    t.segment = data.segment;
    std::sort(t.members.begin(), t.members.end(), [&](const HitRef& a, const HitRef& b) {
      if (a.rank != b.rank) return a.rank < b.rank;
      return data.at(a).time < data.at(b).time;
    });
  }
  auto first_time = [&](const Track& t) {
    double best = data.at(t.members.front()).time;
    for (const auto& h : t.members) best = std::min(best, data.at(h).time);
    return best;
  };
  std::stable_sort(tracks.begin(), tracks.end(), [&](const Track& a, const Track& b) {
    const double ta = first_time(a);
    const double tb = first_time(b);
    if (ta != tb) return ta < tb;
    return a.members.front() < b.members.front();
  });
  for (std::size_t i = 0; i < tracks.size(); ++i) tracks[i].label = static_cast<int>(i) + 1;
}

std::vector<DataSegment> partition_sensors(int sensor_count, int sensors_per_block) {
  if (sensors_per_block < 1) throw std::invalid_argument("sensors per block must be >= 1");
  std::vector<DataSegment> blocks;
  for (int first = 1, e = 1; first <= sensor_count; first += sensors_per_block, ++e) {
    blocks.push_back({e, first, std::min(sensor_count, first + sensors_per_block - 1)});
  }
  return blocks;
}

CentroidSet block_centroids(const DataSegment& block, std::span<const Track> tracks,
                            const SegmentDataset& data, const RoadSegment& segment) {
  CentroidSet set;
  set.block = block.index;
  double pos = 0.0;
  for (int r = block.first_rank; r <= block.last_rank; ++r) pos += segment.position(r);
  set.position = pos / block.sensor_count();
  for (const auto& t : tracks) {
    double v = 0.0;
    double tt = 0.0;
    for (const auto& h : t.members) {
      const auto& m = data.at(h);
      v += m.velocity;
      tt += project_time(m, segment.position(h.rank), set.position);
    }
    const auto n = static_cast<double>(std::max<std::size_t>(1, t.members.size()));
    set.centroids.push_back({v / n, tt / n});
  }
  return set;
}

std::vector<BlockClustering> layer1_cluster(const SegmentDataset& data, const RoadSegment& segment,
                                            int sensors_per_block, std::uint64_t seed) {
  std::vector<BlockClustering> out;
  for (const auto& block : partition_sensors(segment.sensor_count(), sensors_per_block)) {
    std::vector<Point2> points;
    std::vector<HitRef> origin;
    int k = 0;
    for (int r = block.first_rank; r <= block.last_rank; ++r) {
      const auto& rec = data.record(r);
      k = std::max(k, static_cast<int>(rec.hits.size()));
      for (std::size_t n = 0; n < rec.hits.size(); ++n) {
        points.push_back({rec.hits[n].velocity, project_time(rec.hits[n], segment.position(r), 0.0)});
        origin.push_back({data.segment, r, static_cast<int>(n)});
      }
    }
    BlockClustering bc;
    bc.block = block;
    if (!points.empty()) {
      const auto clustering = kmeanspp(points, static_cast<std::size_t>(k),
                                       split_seed(seed, static_cast<std::uint64_t>(block.index)));
      for (const auto& members : clustering.members()) {
        Track t;
        for (const auto i : members) t.members.push_back(origin[i]);
        bc.tracks.push_back(std::move(t));
      }
      finalize_tracks(bc.tracks, data);
    }
    bc.centroids = block_centroids(block, bc.tracks, data, segment);
    out.push_back(std::move(bc));
  }
  return out;
}

std::vector<Track> detect_errors(std::span<const Track> tracks, const SegmentDataset& data,
                                 int sensors_per_block) {
  std::vector<Track> flagged;
  for (const auto& t : tracks) {
    if (track_violations(t, data, sensors_per_block) != 0) flagged.push_back(t);
  }
  return flagged;
}

CorrectionResult correct_errors(std::span<const Track> flagged, const SegmentDataset& data,
                                const RoadSegment& segment) {
  CorrectionResult result;
  std::vector<HitRef> pool;
  for (const auto& t : flagged) pool.insert(pool.end(), t.members.begin(), t.members.end());
  if (pool.empty()) return result;
  std::sort(pool.begin(), pool.end(), [&](const HitRef& a, const HitRef& b) {
    if (a.rank != b.rank) return a.rank < b.rank;
    return data.at(a).time < data.at(b).time;
  });

  std::vector<std::vector<HitRef>> chains;
  for (std::size_t begin = 0; begin < pool.size();) {
    std::size_t end = begin;
    while (end < pool.size() && pool[end].rank == pool[begin].rank) ++end;
    const int rank = pool[begin].rank;
    const std::size_t p = end - begin;
    const std::size_t c = chains.size();

    // Rows: hits at this rank. Columns: existing chains, then one
    // "new chain" slot per hit.
    std::vector<std::vector<double>> cost(p, std::vector<double>(c + p, kNewChain));
    for (std::size_t i = 0; i < p; ++i) {
      const auto& m = data.at(pool[begin + i]);
      for (std::size_t j = 0; j < c; ++j) {
        const auto& last_ref = chains[j].back();
        const auto& last = data.at(last_ref);
        if (!(m.time > last.time)) {
          cost[i][j] = kForbidden;
          continue;
        }
        const double gap = std::abs(segment.position(rank) - segment.position(last_ref.rank));
        const double predicted = last.time + gap / last.velocity;
        cost[i][j] = std::abs(m.time - predicted);
      }
    }
    const auto cols = solve_assignment(cost);
    for (std::size_t i = 0; i < p; ++i) {
      if (cols[i] < c && cost[i][cols[i]] < kForbidden) {
        chains[cols[i]].push_back(pool[begin + i]);
      } else {
        chains.push_back({pool[begin + i]});
      }
    }
    begin = end;
  }

  for (auto& chain : chains) {
    Track t;
    t.segment = data.segment;
    t.members = std::move(chain);
    result.tracks.push_back(std::move(t));
  }
  for (const auto& t : result.tracks) {
    if (track_violations(t, data, segment.sensor_count()) != 0) {
      result.diagnostics.push_back(
          fmt::format("segment {}: corrected track still breaks a rule", data.segment));
    }
  }
  return result;
}

CorrectionResult layer3_match(std::span<const BlockClustering> blocks, int track_count,
                              std::uint64_t seed, const SegmentDataset& data,
                              const RoadSegment& segment, bool error_correction) {
  CorrectionResult result;
  if (blocks.empty()) return result;
  if (blocks.size() == 1) {
    result.tracks = blocks.front().tracks;
    finalize_tracks(result.tracks, data);
    return result;
  }

  const double reference = blocks.front().centroids.position;
  std::vector<Point2> points;
  std::vector<std::pair<std::size_t, std::size_t>> origin;  // (block, track)
  for (std::size_t e = 0; e < blocks.size(); ++e) {
    const auto& set = blocks[e].centroids;
    for (std::size_t k = 0; k < set.centroids.size(); ++k) {
      const auto& c = set.centroids[k];
      points.push_back({c.x1, project_time({c.x1, c.x2}, set.position, reference)});
      origin.emplace_back(e, k);
    }
  }
  if (points.empty()) return result;

  const auto k = static_cast<std::size_t>(std::clamp<int>(track_count, 1, static_cast<int>(points.size())));
  const auto clustering = kmeanspp(points, k, seed);
  std::vector<Track> merged;
  for (const auto& members : clustering.members()) {
    Track t;
    for (const auto i : members) {
      const auto& [e, trk] = origin[i];
      const auto& src = blocks[e].tracks[trk].members;
      t.members.insert(t.members.end(), src.begin(), src.end());
    }
    merged.push_back(std::move(t));
  }
  finalize_tracks(merged, data);

  if (error_correction) {
    const int limit = segment.sensor_count();
    std::vector<Track> good;
    std::vector<Track> flagged;
    for (auto& t : merged) {
      (track_violations(t, data, limit) != 0 ? flagged : good).push_back(std::move(t));
    }
    if (!flagged.empty()) {
      auto fixed = correct_errors(flagged, data, segment);
      good.insert(good.end(), std::make_move_iterator(fixed.tracks.begin()),
                  std::make_move_iterator(fixed.tracks.end()));
      result.diagnostics = std::move(fixed.diagnostics);
    }
    merged = std::move(good);
    finalize_tracks(merged, data);
  }
  result.tracks = std::move(merged);
  return result;
}

CorrectionResult mlkm(const SegmentDataset& data, const RoadSegment& segment,
                      const MlkmOptions& options, std::uint64_t seed) {
  CorrectionResult result;
  if (data.total_hits() == 0) return result;

  auto blocks = layer1_cluster(data, segment, options.sensors_per_block, split_seed(seed, 1));
  if (options.error_correction) {
    for (auto& bc : blocks) {
      std::vector<Track> good;
      std::vector<Track> flagged;
      for (auto& t : bc.tracks) {
        (track_violations(t, data, options.sensors_per_block) != 0 ? flagged : good)
            .push_back(std::move(t));
      }
      if (!flagged.empty()) {
        auto fixed = correct_errors(flagged, data, segment);
        good.insert(good.end(), std::make_move_iterator(fixed.tracks.begin()),
                    std::make_move_iterator(fixed.tracks.end()));
        result.diagnostics.insert(result.diagnostics.end(), fixed.diagnostics.begin(),
                                  fixed.diagnostics.end());
      }
      bc.tracks = std::move(good);
      finalize_tracks(bc.tracks, data);
      bc.centroids = block_centroids(bc.block, bc.tracks, data, segment);
    }
  }

  auto matched = layer3_match(blocks, data.max_hits(), split_seed(seed, 2), data, segment,
                              options.error_correction);
  result.tracks = std::move(matched.tracks);
  result.diagnostics.insert(result.diagnostics.end(), matched.diagnostics.begin(),
                            matched.diagnostics.end());
  finalize_tracks(result.tracks, data);
  return result;
}

}  // namespace gmlkm
