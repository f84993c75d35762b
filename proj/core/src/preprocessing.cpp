#include "gmlkm/preprocessing.hpp"

#include <cassert>
#include <stdexcept>

namespace gmlkm {

double project_time(const Measurement& m, double sensor_pos, double reference) {
  assert(m.velocity > 0.0);
  return m.time - (sensor_pos - reference) / m.velocity;
}

ProjectedMeasurement project_segment(const Measurement& m, double sensor_pos, double reference,
                                     const HitRef& origin) {
  return {m.velocity, project_time(m, sensor_pos, reference), origin};
}

ProjectedMeasurement project_intersection(const Measurement& m, IntersectionRole role,
                                          const RoadSegment& segment, const HitRef& origin,
                                          double radius) {
  assert(m.velocity > 0.0);
  if (role == IntersectionRole::incoming) {
    if (origin.rank != segment.sensor_count()) {
      throw std::invalid_argument("incoming projection requires the last sensor of the segment");
    }
    const double ahead = segment.length - segment.sensor_positions.back() + radius;
    return {m.velocity, m.time + ahead / m.velocity, origin};
  }
  if (origin.rank != 1) {
    throw std::invalid_argument("outgoing projection requires the first sensor of the segment");
  }
  const double behind = radius + segment.sensor_positions.front();
  return {m.velocity, m.time - behind / m.velocity, origin};
}

}  // namespace gmlkm
