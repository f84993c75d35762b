#include <gtest/gtest.h>

#include <map>

#include "gmlkm/datagen.hpp"
#include "gmlkm/error.hpp"
#include "gmlkm/evaluation.hpp"
#include "gmlkm/pipeline.hpp"

using namespace gmlkm;

TEST(Variant, NamesRoundTrip) {
  for (auto v : all_variants()) EXPECT_EQ(parse_variant(to_string(v)), v);
  EXPECT_EQ(all_variants().size(), 6u);
  EXPECT_THROW(parse_variant("kmeans"), InputError);
  EXPECT_TRUE(uses_network(Variant::gmlkm_noec));
  EXPECT_FALSE(uses_network(Variant::mlkm_ec));
  EXPECT_TRUE(uses_error_correction(Variant::mlkm_ec));
  EXPECT_FALSE(uses_error_correction(Variant::kmeans_preprocessed));
}

TEST(Associate, SegmentVariantsSkipIntersections) {
  ScenarioConfig cfg;
  cfg.segment_count = 6;
  cfg.edges = example_network_edges();
  cfg.n_targets = 10;
  const auto sc = generate(cfg);
  const auto res = associate(sc.network, sc.data, Variant::kmeans_raw, 1);
  EXPECT_FALSE(res.trace);
  EXPECT_TRUE(res.pairings.empty());
  EXPECT_EQ(res.tracks.size(), 6u);
}

TEST(Associate, GroupsPartitionHitsForEveryVariant) {
  ScenarioConfig cfg;
  cfg.segment_count = 6;
  cfg.edges = example_network_edges();
  cfg.n_targets = 20;
  cfg.seed = 4;
  const auto sc = generate(cfg);
  int hits = 0;
  for (const auto& ds : sc.data) hits += ds.total_hits();
  for (auto v : all_variants()) {
    const auto res = associate(sc.network, sc.data, v, 4);
    std::map<HitRef, int> seen;
    for (const auto& g : res.groups)
      for (const auto& h : g) ++seen[h];
    EXPECT_EQ(static_cast<int>(seen.size()), hits) << to_string(v);
    for (const auto& [h, n] : seen) EXPECT_EQ(n, 1);
    EXPECT_TRUE(check_structure(res, sc.data)) << to_string(v);
  }
}

TEST(Associate, NoiseFreeScenariosAreExact) {
  // Distinct start times, constant speeds: every preprocessing variant is exact.
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    ScenarioConfig cfg;
    cfg.segment_count = 6;
    cfg.edges = example_network_edges();
    cfg.n_targets = 8;
    cfg.noise_sigma = 0.0;
    cfg.seed = seed;
    const auto sc = generate(cfg);
    for (auto v : all_variants()) {
      if (v == Variant::kmeans_raw) continue;
      const auto res = associate(sc.network, sc.data, v, seed);
      EXPECT_DOUBLE_EQ(score(res.groups, sc.truth), 100.0) << to_string(v) << " seed " << seed;
      const auto viol = count_violations(res, sc.data);
      EXPECT_EQ(viol.track_rules, 0);
      EXPECT_EQ(viol.pairing_rules, 0);
    }
  }
}

TEST(Associate, SingleSegmentHasOneIdentityMerge) {
  ScenarioConfig cfg;
  cfg.n_targets = 5;
  cfg.noise_sigma = 0.0;
  const auto sc = generate(cfg);
  const auto res = associate(sc.network, sc.data, Variant::gmlkm_ec, 1);
  EXPECT_TRUE(res.pairings.empty());
  ASSERT_EQ(res.trace->merges.size(), 1u);
  const auto& m = res.trace->merges[0].matrix;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) EXPECT_EQ(m[i][j], i == j ? 1 : 0);
}
