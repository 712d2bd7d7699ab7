#pragma once

#include "nearfield/geometry.hpp"

namespace nearfield {

/// Vehicle geometry and timing/friction parameters of the keep-out volume.
struct CorridorSpec {
  double reaction_time = 0.45;       ///< t_r [s]: one LiDAR frame plus brake build-up
  double safety_margin_time = 0.2;   ///< t_s [s]
  double friction = 0.75;            ///< mu, dry asphalt
  double slope = 0.0;                ///< road grade s
  double gravity = 9.81;             ///< [m/s^2]
  double vehicle_width = 2.0;        ///< w [m]
  double chassis_height = 0.3;       ///< bottom of the corridor [m]
  double top_height = 1.8;           ///< top of the corridor [m]

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;
};

/// Velocity-dependent keep-out volume ahead of the sensor.
struct MonitorZone {
  double longitudinal_limit = 0.0;  ///< D_Mon [m], measured from the sensor origin
  double lateral_halfwidth = 0.0;
  double z_min = 0.0;
  double z_max = 0.0;

  /// Same corridor with the longitudinal limit scaled by `factor`.
  MonitorZone extended(double factor) const;
};

/// v^2 / (2 g (mu + s)). Throws std::domain_error when mu + s <= 0.
double braking_distance(double speed, const CorridorSpec& spec);

/// (t_r + t_s) v + braking_distance(v).
double monitoring_distance(double speed, const CorridorSpec& spec);

MonitorZone build_zone(double speed, const CorridorSpec& spec);

/// Fixed-length zone with the corridor's lateral and vertical bounds, used when the
/// ego vehicle is stationary and the region of interest is set explicitly.
MonitorZone fixed_zone(double length, const CorridorSpec& spec);

/// 0 < x <= D_Mon, |y| <= halfwidth, z_min <= z <= z_max.
bool contains(const MonitorZone& zone, const Vec3& p);

}  // namespace nearfield
