#pragma once

#include "gmlkm/network.hpp"

namespace gmlkm {

/// A measurement whose time is shifted to a common reference point under
/// a constant-velocity assumption.
struct ProjectedMeasurement {
  double velocity = 0.0;
  double projected_time = 0.0;
  HitRef origin;
};

/// t - (sensor_pos - reference) / v
double project_time(const Measurement& m, double sensor_pos, double reference);

ProjectedMeasurement project_segment(const Measurement& m, double sensor_pos,
                                     double reference, const HitRef& origin = {});

enum class IntersectionRole {
  incoming,  // last sensor of a segment feeding the intersection
  outgoing,  // first sensor of a segment leaving it
};

/// Projects to the centre of an intersection of radius r:
///   incoming: t + (D - d_N + r) / v
///   outgoing: t - (r + d_1) / v
/// Throws std::invalid_argument when origin.rank does not match the role.
ProjectedMeasurement project_intersection(const Measurement& m, IntersectionRole role,
                                          const RoadSegment& segment, const HitRef& origin,
                                          double radius);

}  // namespace gmlkm
