#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "nearfield/corridor.hpp"
#include "nearfield/lidar_sim.hpp"
#include "nearfield/perception.hpp"
#include "nearfield/tracking.hpp"

namespace nearfield {

enum class Strategy { SinglePoint, SizeBased, MotionAware };

std::string_view to_string(Strategy s);
/// Accepts `single_point`, `size_based`, `motion_aware`; nullopt otherwise.
std::optional<Strategy> parse_strategy(std::string_view name);

/// What triggered a brake.
struct BrakeCause {
  std::optional<int> track_id;
  std::optional<std::size_t> cluster_index;
  double distance = 0.0;                ///< nearest x of the trigger [m]
  std::optional<double> rel_velocity;   ///< [m/s], motion-aware only
};

/// Invariant: cause has a value iff brake is true.
struct Decision {
  std::int64_t frame_index = 0;
  Strategy strategy = Strategy::SinglePoint;
  bool brake = false;
  std::optional<BrakeCause> cause;
};

struct MotionAwareSpec {
  double extension_factor = 1.5;       ///< observation range = factor * D_Mon
  double rel_velocity_epsilon = 0.05;  ///< dead band around zero [m/s]

  void validate() const;
};

/// Brakes on any point with x <= D_Mon. The frame must already be corridor-filtered.
Decision decide_single_point(const Frame& frame_in_corridor, const MonitorZone& zone, std::int64_t frame_index);

/// Brakes when a size-filtered cluster's nearest point has x <= D_Mon.
Decision decide_size_based(std::span<const Cluster> hazards, const MonitorZone& zone, std::int64_t frame_index);

/// Brakes when a track's nearest x is within D_Mon and it is closing faster than
/// epsilon, or has no velocity estimate yet (first sighting fails safe).
Decision decide_motion_aware(std::span<const Track> tracks, const MonitorZone& zone, const MotionAwareSpec& spec,
                             std::int64_t frame_index);

}  // namespace nearfield
