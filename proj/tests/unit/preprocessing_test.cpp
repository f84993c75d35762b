#include <gtest/gtest.h>

#include "gmlkm/preprocessing.hpp"
#include "oracles.hpp"

using namespace gmlkm;

TEST(ProjectSegment, Examples) {
  EXPECT_DOUBLE_EQ(project_time({5, 10}, 30, 0), 4.0);
  EXPECT_DOUBLE_EQ(project_time({7, 12}, 20, 20), 12.0);
  EXPECT_DOUBLE_EQ(project_time({4, 3}, 0, 8), 5.0);
}

TEST(ProjectSegment, KeepsVelocityAndInverts) {
  const Measurement m{13.0, 41.25};
  const auto p = project_segment(m, 70, 10, {1, 7, 0});
  EXPECT_EQ(p.velocity, m.velocity);
  EXPECT_EQ(p.origin, (HitRef{1, 7, 0}));
  EXPECT_NEAR(project_time({p.velocity, p.projected_time}, 10, 70), m.time, 1e-12);
}

TEST(ProjectSegment, ConstantVelocityTargetCollapses) {
  const double v = 17.5, t0 = 3.0;
  for (double pos : {10.0, 20.0, 55.0, 90.0}) {
    EXPECT_NEAR(project_time({v, t0 + pos / v}, pos, 0), t0, 1e-9);
  }
}

TEST(ProjectIntersection, IncomingAndOutgoingMeet) {
  RoadSegment in{1, 100, {10, 50, 90}};
  RoadSegment out{2, 100, {10, 50, 90}};
  const auto a = project_intersection({5, 100}, IntersectionRole::incoming, in, {1, 3, 0}, 5);
  const auto b = project_intersection({5, 106}, IntersectionRole::outgoing, out, {2, 1, 0}, 5);
  EXPECT_DOUBLE_EQ(a.projected_time, 103.0);
  EXPECT_DOUBLE_EQ(b.projected_time, 103.0);
}

TEST(ProjectIntersection, IdentityWhenSensorAtEndAndNoRadius) {
  RoadSegment s{1, 90, {10, 50, 90}};
  EXPECT_DOUBLE_EQ(project_intersection({5, 42}, IntersectionRole::incoming, s, {1, 3, 0}, 0).projected_time, 42);
}

TEST(ProjectIntersection, WrongRankThrows) {
  RoadSegment s{1, 100, {10, 50, 90}};
  EXPECT_THROW(project_intersection({5, 1}, IntersectionRole::incoming, s, {1, 1, 0}, 5), std::invalid_argument);
  EXPECT_THROW(project_intersection({5, 1}, IntersectionRole::outgoing, s, {1, 3, 0}, 5), std::invalid_argument);
}
