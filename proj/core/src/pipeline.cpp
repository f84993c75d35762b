#include "gmlkm/pipeline.hpp"

#include <array>

#include <fmt/format.h>

#include "gmlkm/error.hpp"
#include "gmlkm/preprocessing.hpp"

namespace gmlkm {

namespace {

constexpr std::array kVariants{Variant::kmeans_raw, Variant::kmeans_preprocessed, Variant::mlkm_noec,
                               Variant::mlkm_ec,    Variant::gmlkm_noec,          Variant::gmlkm_ec};

}  // namespace

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::kmeans_raw: return "kmeans-raw";
    case Variant::kmeans_preprocessed: return "kmeans-preprocessed";
    case Variant::mlkm_noec: return "mlkm-noec";
    case Variant::mlkm_ec: return "mlkm-ec";
    case Variant::gmlkm_noec: return "gmlkm-noec";
    case Variant::gmlkm_ec: return "gmlkm-ec";
  }
  return "unknown";
}

Variant parse_variant(std::string_view name) {
  for (const auto v : kVariants) {
    if (to_string(v) == name) return v;
  }
  throw InputError(fmt::format("unknown variant '{}'", name));
}

std::span<const Variant> all_variants() { return kVariants; }

bool uses_network(Variant v) { return v == Variant::gmlkm_noec || v == Variant::gmlkm_ec; }

bool uses_error_correction(Variant v) { return v == Variant::mlkm_ec || v == Variant::gmlkm_ec; }

std::vector<Track> kmeans_segment(const SegmentDataset& data, const RoadSegment& segment,
                                  bool preprocess, std::uint64_t seed) {
  std::vector<Point2> points;
  std::vector<HitRef> origin;
  for (const auto& rec : data.records) {
    for (std::size_t n = 0; n < rec.hits.size(); ++n) {
      const auto& m = rec.hits[n];
      const double t = preprocess ? project_time(m, segment.position(rec.sensor.rank), 0.0) : m.time;
      points.push_back({m.velocity, t});
      origin.push_back({data.segment, rec.sensor.rank, static_cast<int>(n)});
    }
  }
  std::vector<Track> tracks;
  if (points.empty()) return tracks;
  const auto clustering = kmeanspp(points, static_cast<std::size_t>(data.max_hits()), seed);
  for (const auto& members : clustering.members()) {
    Track t;
    for (const auto i : members) t.members.push_back(origin[i]);
    tracks.push_back(std::move(t));
  }
  finalize_tracks(tracks, data);
  return tracks;
}

AssociationResult associate(const RoadNetwork& net, std::span<const SegmentDataset> data,
                            Variant variant, std::uint64_t seed, const PipelineOptions& options) {
  if (static_cast<int>(data.size()) != net.size()) {
    throw InputError("measurement datasets do not match the network");
  }
  AssociationResult result;
  result.variant = variant;
  const bool ec = uses_error_correction(variant);

  for (int i = 1; i <= net.size(); ++i) {
    const auto& ds = data[i - 1];
    const auto& seg = net.segment(i);
    const auto stream_seed = split_seed(seed, static_cast<std::uint64_t>(i));
    switch (variant) {
      case Variant::kmeans_raw:
      case Variant::kmeans_preprocessed:
        result.tracks.push_back(kmeans_segment(ds, seg, variant == Variant::kmeans_preprocessed, stream_seed));
        break;
      default: {
        auto run = mlkm(ds, seg, MlkmOptions{options.sensors_per_block, ec}, stream_seed);
        result.diagnostics.insert(result.diagnostics.end(), run.diagnostics.begin(), run.diagnostics.end());
        result.tracks.push_back(std::move(run.tracks));
      }
    }
  }

  if (!uses_network(variant)) {
    for (const auto& segment_tracks : result.tracks) {
      for (const auto& t : segment_tracks) result.groups.push_back(t.members);
    }
    return result;
  }

  result.intersections = extract_subgraphs(build_pdual(net));
  PairingOptions pairing_options = options.pairing;
  pairing_options.error_correction = ec;
  for (std::size_t n = 0; n < result.intersections.size(); ++n) {
    const auto ds = gather(result.intersections[n], net, data);
    auto paired = pair(ds, net, split_seed(seed, 1000 + n), pairing_options);
    result.diagnostics.insert(result.diagnostics.end(), paired.diagnostics.begin(), paired.diagnostics.end());
    result.pairings.push_back(std::move(paired.pairing));
  }
  result.trace = trace(net, result.tracks, result.pairings);
  for (const auto& c : result.trace->conflicts) result.diagnostics.push_back(c);
  for (const auto& traj : result.trace->trajectories) {
    std::vector<HitRef> hits;
    for (const auto& hop : traj.hops) {
      const auto& members = result.tracks[hop.segment - 1][hop.label - 1].members;
      hits.insert(hits.end(), members.begin(), members.end());
    }
    result.groups.push_back(std::move(hits));
  }
  return result;
}

ViolationCount count_violations(const AssociationResult& result, std::span<const SegmentDataset> data) {
  ViolationCount count;
  for (const auto& segment_tracks : result.tracks) {
    for (const auto& t : segment_tracks) {
      const auto& ds = data[t.segment - 1];
      if (track_violations(t, ds, static_cast<int>(ds.records.size())) != 0) ++count.track_rules;
    }
  }
  for (const auto& pm : result.pairings) {
    for (std::size_t r = 0; r < pm.size(); ++r) {
      if (pm.is_stop(r)) continue;
      const auto& in = measurement_at(data, pm.rows[r]);
      const auto& out = measurement_at(data, pm.cols[pm.column_of[r]]);
      if (!(out.time > in.time)) ++count.pairing_rules;
    }
  }
  return count;
}

}  // namespace gmlkm
