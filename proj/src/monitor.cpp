#include "nearfield/monitor.hpp"

#include <stdexcept>

namespace nearfield {

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::SinglePoint: return "single_point";
    case Strategy::SizeBased: return "size_based";
    case Strategy::MotionAware: return "motion_aware";
  }
  return "unknown";
}

std::optional<Strategy> parse_strategy(std::string_view name) {
  for (Strategy s : {Strategy::SinglePoint, Strategy::SizeBased, Strategy::MotionAware}) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

void MotionAwareSpec::validate() const {
  if (!(extension_factor >= 1.0)) throw std::invalid_argument("MotionAwareSpec: extension_factor must be >= 1");
  if (!(rel_velocity_epsilon >= 0.0)) throw std::invalid_argument("MotionAwareSpec: rel_velocity_epsilon must be >= 0");
}

Decision decide_single_point(const Frame& frame_in_corridor, const MonitorZone& zone, std::int64_t frame_index) {
  Decision d{frame_index, Strategy::SinglePoint, false, std::nullopt};
  for (const Vec3& p : frame_in_corridor.points) {
    if (p.x > zone.longitudinal_limit) continue;
    if (!d.cause || p.x < d.cause->distance) d.cause = BrakeCause{std::nullopt, std::nullopt, p.x, std::nullopt};
  }
  d.brake = d.cause.has_value();
  return d;
}

Decision decide_size_based(std::span<const Cluster> hazards, const MonitorZone& zone, std::int64_t frame_index) {
  Decision d{frame_index, Strategy::SizeBased, false, std::nullopt};
  for (std::size_t i = 0; i < hazards.size(); ++i) {
    const double nearest = hazards[i].aabb.min.x;
    if (nearest > zone.longitudinal_limit) continue;
    if (!d.cause || nearest < d.cause->distance) d.cause = BrakeCause{std::nullopt, i, nearest, std::nullopt};
  }
  d.brake = d.cause.has_value();
  return d;
}

Decision decide_motion_aware(std::span<const Track> tracks, const MonitorZone& zone, const MotionAwareSpec& spec,
                             std::int64_t frame_index) {
  spec.validate();
  Decision d{frame_index, Strategy::MotionAware, false, std::nullopt};
  for (const Track& t : tracks) {
    const double nearest = t.last_aabb.min.x;
    if (nearest > zone.longitudinal_limit) continue;
    const bool closing = !t.rel_velocity_x || *t.rel_velocity_x < -spec.rel_velocity_epsilon;
    if (!closing) continue;
    if (!d.cause || nearest < d.cause->distance) d.cause = BrakeCause{t.id, std::nullopt, nearest, t.rel_velocity_x};
  }
  d.brake = d.cause.has_value();
  return d;
}

}  // namespace nearfield
