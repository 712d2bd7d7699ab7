#include "nearfield/lidar_sim.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>

#include "nearfield/rng.hpp"

namespace nearfield {

namespace {

double inclusive_sample(double min_deg, double max_deg, int n, int i) {
  if (n == 1) return deg_to_rad((min_deg + max_deg) / 2.0);
  return deg_to_rad(min_deg + (max_deg - min_deg) * i / (n - 1));
}

// Unit directions for every grid ray, azimuth-major: ray r = i * channels + k.
struct RayTable {
  int horizontal_samples = 0;
  double h_min = 0, h_max = 0;
  int vertical_channels = 0;
  double v_min = 0, v_max = 0;
  std::vector<Vec3> directions;

  bool matches(const SensorConfig& cfg) const {
    return horizontal_samples == cfg.horizontal_samples && h_min == cfg.horizontal_fov_min &&
           h_max == cfg.horizontal_fov_max && vertical_channels == cfg.vertical_channels &&
           v_min == cfg.vertical_fov_min && v_max == cfg.vertical_fov_max;
  }
};

const RayTable& ray_table(const SensorConfig& cfg) {
  thread_local std::unique_ptr<RayTable> cached;
  if (cached && cached->matches(cfg)) return *cached;

  auto table = std::make_unique<RayTable>();
  table->horizontal_samples = cfg.horizontal_samples;
  table->h_min = cfg.horizontal_fov_min;
  table->h_max = cfg.horizontal_fov_max;
  table->vertical_channels = cfg.vertical_channels;
  table->v_min = cfg.vertical_fov_min;
  table->v_max = cfg.vertical_fov_max;
  table->directions.reserve(cfg.ray_count());
  for (int i = 0; i < cfg.horizontal_samples; ++i) {
    const double az = sample_azimuth(cfg, i);
    for (int k = 0; k < cfg.vertical_channels; ++k) {
      const double el = channel_elevation(cfg, k);
      table->directions.push_back({std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el)});
    }
  }
  cached = std::move(table);
  return *cached;
}

// Entry distance of the ray into the box, or +inf when it misses.
double intersect_box(const Vec3& origin, const Vec3& dir, const Aabb& box) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  double t_near = -inf;
  double t_far = inf;
  const double o[3] = {origin.x, origin.y, origin.z};
  const double d[3] = {dir.x, dir.y, dir.z};
  const double lo[3] = {box.min.x, box.min.y, box.min.z};
  const double hi[3] = {box.max.x, box.max.y, box.max.z};
  for (int axis = 0; axis < 3; ++axis) {
    if (d[axis] == 0.0) {
      if (o[axis] < lo[axis] || o[axis] > hi[axis]) return inf;
      continue;
    }
    double t1 = (lo[axis] - o[axis]) / d[axis];
    double t2 = (hi[axis] - o[axis]) / d[axis];
    if (t1 > t2) std::swap(t1, t2);
    t_near = std::max(t_near, t1);
    t_far = std::min(t_far, t2);
    if (t_near > t_far) return inf;
  }
  // A sensor inside an obstacle sees nothing of it.
  return t_near > 0.0 ? t_near : inf;
}

}  // namespace

void SensorConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("SensorConfig: ") + what);
  };
  require(horizontal_samples >= 1, "horizontal_samples must be >= 1");
  require(vertical_channels >= 1, "vertical_channels must be >= 1");
  require(horizontal_fov_min <= horizontal_fov_max, "horizontal fov min must not exceed max");
  require(vertical_fov_min <= vertical_fov_max, "vertical fov min must not exceed max");
  require(vertical_fov_min >= -90.0 && vertical_fov_max <= 90.0, "vertical fov must lie in [-90, 90]");
  require(update_rate > 0.0, "update_rate must be > 0");
  require(noise_sigma >= 0.0, "noise_sigma must be >= 0");
  require(max_range > 0.0, "max_range must be > 0");
}

double sample_azimuth(const SensorConfig& cfg, int i) {
  return inclusive_sample(cfg.horizontal_fov_min, cfg.horizontal_fov_max, cfg.horizontal_samples, i);
}

double channel_elevation(const SensorConfig& cfg, int k) {
  return inclusive_sample(cfg.vertical_fov_min, cfg.vertical_fov_max, cfg.vertical_channels, k);
}

Scene advance(const Scene& scene, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("advance: dt must be > 0");
  Scene next = scene;
  for (Cuboid& c : next.obstacles) {
    c.center = c.center + (c.velocity - Vec3{scene.ego_velocity, 0.0, 0.0}) * dt;
  }
  return next;
}

Frame cast_frame(const Scene& scene, const SensorConfig& cfg, std::int64_t frame_index) {
  cfg.validate();
  Frame frame;
  frame.timestamp = static_cast<double>(frame_index) * cfg.frame_period();
  if (scene.obstacles.empty() && !scene.ground_plane_enabled) return frame;

  const RayTable& rays = ray_table(cfg);
  const Vec3 origin = cfg.origin();
  const CounterRng rng(cfg.rng_seed, static_cast<std::uint64_t>(frame_index));

  std::vector<Aabb> boxes;
  boxes.reserve(scene.obstacles.size());
  for (const Cuboid& c : scene.obstacles) boxes.push_back(c.box());

  for (std::size_t r = 0; r < rays.directions.size(); ++r) {
    const Vec3& dir = rays.directions[r];
    double t = std::numeric_limits<double>::infinity();
    for (const Aabb& box : boxes) t = std::min(t, intersect_box(origin, dir, box));
    if (scene.ground_plane_enabled && dir.z < 0.0) t = std::min(t, -origin.z / dir.z);
    if (!(t <= cfg.max_range)) continue;

    if (cfg.noise_sigma > 0.0) t += cfg.noise_sigma * rng.gaussian(r);
    if (t <= 0.0 || t > cfg.max_range) continue;
    frame.points.push_back(origin + dir * t);
  }
  return frame;
}

std::size_t expected_hits(const Cuboid& cuboid, double distance, const SensorConfig& cfg) {
  cfg.validate();
  if (!(distance > 0.0) || cuboid.width <= 0.0 || cuboid.height <= 0.0) return 0;
  const double half_w = cuboid.width / 2.0;
  const double half_h = cuboid.height / 2.0;

  std::size_t hits = 0;
  for (int i = 0; i < cfg.horizontal_samples; ++i) {
    const double az = sample_azimuth(cfg, i);
    const double cos_az = std::cos(az);
    if (cos_az <= 0.0) continue;
    const double y = distance * std::tan(az);
    if (std::abs(y - cuboid.center.y) > half_w) continue;
    for (int k = 0; k < cfg.vertical_channels; ++k) {
      const double el = channel_elevation(cfg, k);
      const double range = distance / (std::cos(el) * cos_az);
      if (range > cfg.max_range) continue;
      const double z = cfg.mount_height + distance * std::tan(el) / cos_az;
      if (std::abs(z - cuboid.center.z) <= half_h) ++hits;
    }
  }
  return hits;
}

void write_frame_xyz(const Frame& frame, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open frame dump '" + path.string() + "'");
  out << "x y z\n";
  char line[96];
  for (const Vec3& p : frame.points) {
    std::snprintf(line, sizeof line, "%.6f %.6f %.6f\n", p.x, p.y, p.z);
    out << line;
  }
  if (!out) throw std::runtime_error("failed writing frame dump '" + path.string() + "'");
}

}  // namespace nearfield
