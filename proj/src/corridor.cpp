#include "nearfield/corridor.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nearfield {

void CorridorSpec::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("CorridorSpec: ") + what);
  };
  require(reaction_time >= 0.0, "reaction_time must be >= 0");
  require(safety_margin_time >= 0.0, "safety_margin_time must be >= 0");
  require(friction > 0.0, "friction must be > 0");
  require(gravity > 0.0, "gravity must be > 0");
  require(vehicle_width > 0.0, "vehicle_width must be > 0");
  require(chassis_height < top_height, "chassis_height must be below top_height");
  require(friction + slope > 0.0, "friction + slope must be > 0");
}

MonitorZone MonitorZone::extended(double factor) const {
  MonitorZone zone = *this;
  zone.longitudinal_limit *= factor;
  return zone;
}

double braking_distance(double speed, const CorridorSpec& spec) {
  if (!(speed >= 0.0)) throw std::invalid_argument("braking_distance: speed must be >= 0");
  const double grip = spec.friction + spec.slope;
  if (!(grip > 0.0)) throw std::domain_error("braking_distance: friction + slope must be > 0");
  return speed * speed / (2.0 * spec.gravity * grip);
}

double monitoring_distance(double speed, const CorridorSpec& spec) {
  return (spec.reaction_time + spec.safety_margin_time) * speed + braking_distance(speed, spec);
}

MonitorZone build_zone(double speed, const CorridorSpec& spec) {
  spec.validate();
  return fixed_zone(monitoring_distance(speed, spec), spec);
}

MonitorZone fixed_zone(double length, const CorridorSpec& spec) {
  if (!(length >= 0.0)) throw std::invalid_argument("fixed_zone: length must be >= 0");
  return {length, spec.vehicle_width / 2.0, spec.chassis_height, spec.top_height};
}

bool contains(const MonitorZone& zone, const Vec3& p) {
  return p.x > 0.0 && p.x <= zone.longitudinal_limit && std::abs(p.y) <= zone.lateral_halfwidth &&
         p.z >= zone.z_min && p.z <= zone.z_max;
}

}  // namespace nearfield
