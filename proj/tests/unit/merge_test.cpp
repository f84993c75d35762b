#include <gtest/gtest.h>

#include <map>
#include <random>

#include "gmlkm/datagen.hpp"
#include "gmlkm/error.hpp"
#include "gmlkm/merge.hpp"
#include "gmlkm/pipeline.hpp"
#include "oracles.hpp"

using namespace gmlkm;

namespace {

// Segment/track pairs of a trajectory written as "k^i" hops.
std::vector<std::string> hops(const Trajectory& t) {
  std::vector<std::string> out;
  for (const auto& h : t.hops) out.push_back(std::to_string(h.label) + "^" + std::to_string(h.segment));
  return out;
}

// Boolean square of G.
std::vector<std::vector<std::uint8_t>> bool_square(const std::vector<std::vector<std::uint8_t>>& g) {
  const auto n = g.size();
  std::vector<std::vector<std::uint8_t>> out(n, std::vector<std::uint8_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      if (g[i][k])
        for (std::size_t j = 0; j < n; ++j) out[i][j] |= g[k][j];
  return out;
}

Track track_of(int segment, int label, std::vector<HitRef> members) {
  Track t;
  t.segment = segment;
  t.label = label;
  t.members = std::move(members);
  return t;
}

}  // namespace

TEST(Trace, WorkedExampleReproducesTheFiveRoutes) {
  const auto sc = generate(worked_example_config());
  const auto res = associate(sc.network, sc.data, Variant::gmlkm_ec, 1);
  ASSERT_TRUE(res.trace);
  const auto& trajs = res.trace->trajectories;
  ASSERT_EQ(trajs.size(), 5u);
  using V = std::vector<std::string>;
  EXPECT_EQ(hops(trajs[0]), (V{"1^1", "1^2", "1^5", "3^4", "6^2", "5^3"}));
  EXPECT_EQ(hops(trajs[1]), (V{"2^1", "2^2", "1^3"}));
  EXPECT_EQ(hops(trajs[2]), (V{"3^1", "3^2", "2^3"}));
  EXPECT_EQ(hops(trajs[3]), (V{"1^6", "1^4", "4^2", "3^3"}));
  EXPECT_EQ(hops(trajs[4]), (V{"2^6", "2^4", "5^2", "4^3"}));
  for (const auto& t : trajs) EXPECT_TRUE(t.complete);
  EXPECT_TRUE(res.trace->conflicts.empty());

  const auto& g2 = res.trace->merges[1].matrix;
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) {
      const bool expected = i == j || (i == 0 && j == 5) || (i == 5 && j == 0);
      EXPECT_EQ(g2[i][j], expected ? 1 : 0) << i << "," << j;
    }
  for (std::size_t m = 0; m < res.trace->merges.size(); ++m) {
    if (m == 1) continue;
    const auto& g = res.trace->merges[m].matrix;
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = 0; j < g.size(); ++j) EXPECT_EQ(g[i][j], i == j ? 1 : 0);
  }

  // Ground truth agrees hop by hop.
  for (std::size_t k = 0; k < trajs.size(); ++k) {
    std::vector<int> route;
    for (const auto& h : trajs[k].hops) route.push_back(h.segment);
    EXPECT_EQ(route, sc.truth.routes[k]);
  }
}

TEST(Trace, AcyclicNetworkGivesIdentityMerges) {
  ScenarioConfig cfg;
  cfg.segment_count = 4;
  cfg.edges = {{1, 2}, {1, 3}, {2, 4}, {3, 4}};
  cfg.n_targets = 12;
  cfg.seed = 8;
  const auto sc = generate(cfg);
  const auto res = associate(sc.network, sc.data, Variant::gmlkm_ec, 8);
  for (const auto& m : res.trace->merges) {
    for (std::size_t i = 0; i < m.matrix.size(); ++i)
      for (std::size_t j = 0; j < m.matrix.size(); ++j) EXPECT_EQ(m.matrix[i][j], i == j ? 1 : 0);
  }
}

TEST(Trace, TargetStoppingMidSegmentIsIncomplete) {
  const std::vector<RoadNetwork::Edge> e{{1, 2}};
  const auto net = oracle::line_network(2, 3, e);
  // A drives R1 then R2; B is last seen at R1's second sensor.
  std::vector<std::vector<Track>> tracks{
      {track_of(1, 1, {{1, 1, 0}, {1, 2, 0}, {1, 3, 0}}), track_of(1, 2, {{1, 1, 1}, {1, 2, 1}})},
      {track_of(2, 1, {{2, 1, 0}, {2, 2, 0}, {2, 3, 0}})}};
  PairingMatrix pm;
  pm.name = "a";
  pm.rows = {{1, 3, 0}};
  pm.cols = {{2, 1, 0}};
  pm.column_of = {0};
  const std::vector<PairingMatrix> pms{pm};
  const auto res = trace(net, tracks, pms);
  ASSERT_EQ(res.trajectories.size(), 2u);
  EXPECT_EQ(res.trajectories[0].hops, (std::vector<Hop>{{1, 1}, {2, 1}}));
  EXPECT_TRUE(res.trajectories[0].complete);
  EXPECT_EQ(res.trajectories[1].hops, (std::vector<Hop>{{1, 2}}));
  EXPECT_FALSE(res.trajectories[1].complete);
}

TEST(Trace, UnownedHitIsIntegrityError) {
  const std::vector<RoadNetwork::Edge> e{{1, 2}};
  const auto net = oracle::line_network(2, 3, e);
  std::vector<std::vector<Track>> tracks{{track_of(1, 1, {{1, 1, 0}, {1, 2, 0}, {1, 3, 0}})}, {}};
  PairingMatrix pm;
  pm.name = "a";
  pm.rows = {{1, 3, 0}};
  pm.cols = {{2, 1, 0}};
  pm.column_of = {0};
  const std::vector<PairingMatrix> pms{pm};
  EXPECT_THROW(trace(net, tracks, pms), IntegrityError);
}

TEST(Trace, MergeInvariantsAndTrackConservation) {
  for (int trial = 0; trial < 40; ++trial) {
    ScenarioConfig cfg;
    cfg.segment_count = 6;
    cfg.edges = example_network_edges();
    cfg.n_targets = 20;
    cfg.seed = 500 + trial;
    const auto sc = generate(cfg);
    for (auto v : {Variant::gmlkm_ec, Variant::gmlkm_noec}) {
      const auto res = associate(sc.network, sc.data, v, trial);
      for (const auto& m : res.trace->merges) {
        EXPECT_TRUE(is_symmetric_unit_diagonal(m));
        EXPECT_TRUE(is_transitively_closed(m));
        EXPECT_EQ(bool_square(m.matrix), m.matrix);
      }
      std::map<std::pair<int, int>, int> used;
      for (const auto& t : res.trace->trajectories)
        for (const auto& h : t.hops) ++used[{h.segment, h.label}];
      std::size_t total = 0;
      for (const auto& st : res.tracks) total += st.size();
      EXPECT_EQ(used.size(), total);
      for (const auto& [k, n] : used) EXPECT_EQ(n, 1);
    }
  }
}

TEST(MergeMatrix, Checks) {
  MergeMatrix ok{1, {{1, 1, 0}, {1, 1, 0}, {0, 0, 1}}};
  EXPECT_TRUE(is_symmetric_unit_diagonal(ok));
  EXPECT_TRUE(is_transitively_closed(ok));
  MergeMatrix open{1, {{1, 1, 0}, {1, 1, 1}, {0, 1, 1}}};
  EXPECT_TRUE(is_symmetric_unit_diagonal(open));
  EXPECT_FALSE(is_transitively_closed(open));
  MergeMatrix skew{1, {{1, 1}, {0, 1}}};
  EXPECT_FALSE(is_symmetric_unit_diagonal(skew));
}
