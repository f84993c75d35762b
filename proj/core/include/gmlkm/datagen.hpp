#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gmlkm/network.hpp"

namespace gmlkm {

/// Fixed initial state (and optionally a forced route) for one target.
struct TargetPlan {
  int entry_segment = 1;
  double v0 = 0.0;
  double t0 = 0.0;           // time at the start of the entry segment
  std::vector<int> route;    // empty: turn uniformly at random
};

struct ScenarioConfig {
  int segment_count = 1;
  std::vector<RoadNetwork::Edge> edges;
  int n_targets = 10;
  int sensors_per_segment = 10;
  double sensor_spacing = 10.0;
  std::optional<double> intersection_radius;  // default spacing / 2
  std::pair<double, double> v_range{10.0, 50.0};
  std::pair<double, double> t_range{0.0, 40.0};
  double noise_mu = 0.0;
  std::optional<double> noise_sigma;  // default 5% of the mean initial velocity
  std::vector<int> entry_segments{1};
  std::uint64_t seed = 1;
  std::vector<TargetPlan> plans;  // overrides the first plans.size() targets
  int max_hops = 1000;

  double sigma() const;
  double radius() const;
  /// Throws InputError when an invariant does not hold.
  void validate() const;
};

ScenarioConfig parse_scenario_config(std::string_view document);
std::string serialize_scenario_config(const ScenarioConfig& cfg);

/// Sensors at spacing, 2*spacing, ..., N_S*spacing on segments of length
/// N_S*spacing.
RoadNetwork build_network(const ScenarioConfig& cfg);

struct HitLabel {
  HitRef hit;
  int target = 0;  // 1-based
};

struct GroundTruth {
  std::vector<HitLabel> labels;        // sorted by hit
  std::vector<std::vector<int>> routes;  // per target, segments visited
  std::vector<bool> stopped;           // target ran out of valid turns or hops

  int target_of(const HitRef& hit) const;
  int target_count() const { return static_cast<int>(routes.size()); }
};

struct Scenario {
  RoadNetwork network;
  std::vector<SegmentDataset> data;
  GroundTruth truth;
};

/// Simulates every target hop by hop: at each sensor v += N(mu, sigma)
/// (floored at v_min / 4), time advances by distance / v, and at each
/// intersection the next segment is drawn uniformly from the successors.
Scenario generate(const ScenarioConfig& cfg);

struct ScenarioDocuments {
  std::string topology;
  std::string measurements;
  std::string labels;  // segment,sensor,hit_index,target_id
};

ScenarioDocuments export_scenario(const Scenario& scenario);
GroundTruth parse_labels(std::string_view csv, const std::vector<SegmentDataset>& data);

/// Six-segment example network: 1->2, 2->3, 2->5, 5->4, 4->2, 6->4.
std::vector<RoadNetwork::Edge> example_network_edges();

/// Five targets on the example network with forced routes, noise free:
///   1: R1 R2 R5 R4 R2 R3    2: R1 R2 R3    3: R1 R2 R3
///   4: R6 R4 R2 R3          5: R6 R4 R2 R3
ScenarioConfig worked_example_config();

}  // namespace gmlkm
