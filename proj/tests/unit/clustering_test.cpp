#include <gtest/gtest.h>

#include <random>
#include <set>

#include "gmlkm/clustering.hpp"
#include "oracles.hpp"

using namespace gmlkm;

TEST(Assign, TieGoesToLowestIndex) {
  const std::vector<Point2> c{{0, 0}, {10, 0}};
  EXPECT_EQ(assign({5, 0}, c), 0u);
}

TEST(Assign, NearestByEuclideanDistance) {
  EXPECT_EQ(assign({5, 1}, std::vector<Point2>{{0, 0}, {6, 0}}), 1u);
  EXPECT_EQ(assign({0, 100}, std::vector<Point2>{{0, 0}, {50, 90}}), 1u);
}

TEST(Assign, EmptyCentroidsThrow) {
  EXPECT_THROW(assign({0, 0}, std::vector<Point2>{}), std::invalid_argument);
}

TEST(KMeans, FourPointExampleMatchesBruteForce) {
  const std::vector<Point2> pts{{0, 0}, {0, 1}, {10, 0}, {10, 1}};
  const double optimum = oracle::best_partition_cost(pts, 2);
  EXPECT_DOUBLE_EQ(optimum, 1.0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto c = kmeanspp(pts, 2, seed);
    EXPECT_NEAR(c.cost, optimum, 1e-12);
    std::set<Point2, decltype([](const Point2& a, const Point2& b) {
               return std::tie(a.x1, a.x2) < std::tie(b.x1, b.x2);
             })>
        centroids(c.centroids.begin(), c.centroids.end());
    EXPECT_TRUE(centroids.contains({0, 0.5}));
    EXPECT_TRUE(centroids.contains({10, 0.5}));
  }
}

TEST(KMeans, KEqualsNGivesZeroCost) {
  const std::vector<Point2> pts{{1, 2}, {3, 4}, {5, 6}};
  const auto c = kmeanspp(pts, 3, 9);
  EXPECT_EQ(c.cost, 0.0);
  for (const auto& m : c.members()) EXPECT_EQ(m.size(), 1u);
}

TEST(KMeans, IdenticalPointsGiveZeroCost) {
  const std::vector<Point2> pts(5, Point2{2, 2});
  const auto c = kmeanspp(pts, 2, 3);
  EXPECT_EQ(c.cost, 0.0);
  EXPECT_EQ(c.centroids.size(), 2u);
  EXPECT_EQ(c.assignment.size(), 5u);
}

TEST(KMeans, RejectsBadK) {
  const std::vector<Point2> pts{{0, 0}};
  EXPECT_THROW(kmeanspp(pts, 0, 1), std::invalid_argument);
  EXPECT_THROW(kmeanspp(pts, 2, 1), std::invalid_argument);
}

class KMeansProperty : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(KMeansProperty, LloydInvariants) {
  std::mt19937_64 rng(GetParam());
  std::uniform_real_distribution<double> u(0, 50);
  std::vector<Point2> pts;
  for (int i = 0; i < 60; ++i) pts.push_back({u(rng), u(rng)});
  const auto c = kmeanspp(pts, 6, GetParam());

  // Phi never increases.
  for (std::size_t i = 1; i < c.cost_trace.size(); ++i) EXPECT_LE(c.cost_trace[i], c.cost_trace[i - 1] + 1e-9);
  // Seeds are input points.
  ASSERT_EQ(c.seed_indices.size(), 6u);
  for (auto s : c.seed_indices) EXPECT_LT(s, pts.size());
  // Every point sits with a nearest centroid and the cost is Phi of that state.
  for (std::size_t i = 0; i < pts.size(); ++i) {
    EXPECT_EQ(c.assignment[i], assign(pts[i], c.centroids));
  }
  EXPECT_NEAR(c.cost, clustering_cost(pts, c.centroids), 1e-9);
  // Determinism.
  const auto again = kmeanspp(pts, 6, GetParam());
  EXPECT_EQ(again.centroids, c.centroids);
  EXPECT_EQ(again.assignment, c.assignment);
}

INSTANTIATE_TEST_SUITE_P(Seeds, KMeansProperty, ::testing::Range<std::uint64_t>(1, 21));

TEST(KMeans, SmallInstancesReachBruteForceOptimum) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0, 10);
  std::uniform_int_distribution<int> npts(3, 8);
  std::uniform_int_distribution<int> nk(1, 3);
  int hits = 0;
  const int instances = 200;
  for (int trial = 0; trial < instances; ++trial) {
    const int n = npts(rng);
    const auto k = static_cast<std::size_t>(std::min(nk(rng), n));
    std::vector<Point2> pts;
    for (int i = 0; i < n; ++i) pts.push_back({u(rng), u(rng)});
    double best = 1e300;
    for (std::uint64_t seed = 0; seed < 20; ++seed) best = std::min(best, kmeanspp(pts, k, seed).cost);
    if (best <= oracle::best_partition_cost(pts, k) + 1e-9) ++hits;
  }
  EXPECT_GE(hits, instances * 9 / 10);
}
