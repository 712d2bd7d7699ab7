#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "nearfield/geometry.hpp"

namespace nearfield {

/// Spinning multi-channel LiDAR. Defaults reproduce a Gazebo-configured VLP-16.
///
/// Angles are sampled inclusively: sample i of n lies at min + i (max - min) / (n - 1),
/// which puts 1875 horizontal samples ~0.192 deg apart and 16 channels 2 deg apart.
struct SensorConfig {
  int horizontal_samples = 1875;
  double horizontal_fov_min = -180.0;  ///< [deg]
  double horizontal_fov_max = 180.0;   ///< [deg]
  int vertical_channels = 16;
  double vertical_fov_min = -15.0;     ///< [deg]
  double vertical_fov_max = 15.0;      ///< [deg]
  double update_rate = 10.0;           ///< [Hz]
  double noise_sigma = 0.008;          ///< range noise std. dev. [m]
  double max_range = 100.0;            ///< [m]
  double mount_height = 0.6;           ///< sensor origin above the ground [m]
  std::uint64_t rng_seed = 0;

  void validate() const;
  double frame_period() const { return 1.0 / update_rate; }
  std::size_t ray_count() const {
    return static_cast<std::size_t>(horizontal_samples) * static_cast<std::size_t>(vertical_channels);
  }
  Vec3 origin() const { return {0.0, 0.0, mount_height}; }
};

/// Azimuth of horizontal sample i [rad].
double sample_azimuth(const SensorConfig& cfg, int i);
/// Elevation of channel k [rad].
double channel_elevation(const SensorConfig& cfg, int k);

/// Axis-aligned box obstacle. Extents: width along y, height along z, depth along x.
struct Cuboid {
  Vec3 center;
  double width = 0.0;
  double height = 0.0;
  double depth = 0.0;
  Vec3 velocity;  ///< world-frame velocity [m/s]

  Aabb box() const {
    const Vec3 half{depth / 2.0, width / 2.0, height / 2.0};
    return {center - half, center + half};
  }
  bool valid() const { return width > 0.0 && height > 0.0 && depth > 0.0; }
};

struct Scene {
  std::vector<Cuboid> obstacles;
  bool ground_plane_enabled = false;
  double ego_velocity = 0.0;  ///< ego speed along +x [m/s]
};

struct Frame {
  double timestamp = 0.0;
  std::vector<Vec3> points;
};

/// Translates every obstacle by (velocity - ego_velocity x_hat) dt, i.e. expresses the
/// motion relative to the moving sensor. Requires dt > 0.
Scene advance(const Scene& scene, double dt);

/// Casts one ray per (azimuth, channel) grid cell against the obstacles and the
/// optional ground plane z = 0. Each ray returns its nearest hit within max_range,
/// perturbed along the ray by N(0, noise_sigma). Noise for ray r of frame f depends only
/// on (rng_seed, f, r), so frames are reproducible in any order.
Frame cast_frame(const Scene& scene, const SensorConfig& cfg, std::int64_t frame_index);

/// Noise-free count of grid rays hitting the front face (plane x = distance) of a
/// cuboid whose y/z centre is given by `cuboid.center`. Computed by intersecting each
/// ray with the face plane directly rather than by box casting.
std::size_t expected_hits(const Cuboid& cuboid, double distance, const SensorConfig& cfg);

/// Writes `x y z` header plus one space-separated point per row, LF endings.
void write_frame_xyz(const Frame& frame, const std::filesystem::path& path);

}  // namespace nearfield
