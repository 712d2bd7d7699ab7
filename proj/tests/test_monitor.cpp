#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <vector>

#include "nearfield/monitor.hpp"

using namespace nearfield;

namespace {

const MonitorZone kZone{7.22, 1.0, 0.3, 1.8};

Cluster cube_cluster(double x, double edge) {
  Cluster c;
  c.points = {{x, 0.0, 0.8}, {x + edge, edge, 0.8 + edge}};
  c.indices = {0, 1};
  c.aabb = compute_aabb(c);
  return c;
}

Track track_near(double x, std::optional<double> v) {
  Track t;
  t.last_centroid = {x + 0.5, 0.0, 1.0};
  t.last_aabb = {{x, -0.5, 0.5}, {x + 1.0, 0.5, 1.5}};
  t.rel_velocity_x = v;
  t.age_frames = v ? 3 : 1;
  return t;
}

}  // namespace

TEST_CASE("strategy names round-trip") {
  for (Strategy s : {Strategy::SinglePoint, Strategy::SizeBased, Strategy::MotionAware})
    CHECK(parse_strategy(to_string(s)) == s);
  CHECK_FALSE(parse_strategy("balloon").has_value());
}

TEST_CASE("single-point examples") {
  CHECK_FALSE(decide_single_point(Frame{}, kZone, 0).brake);
  Frame noise;
  noise.points = {{2.0, 0.1, 1.0}};
  const Decision d = decide_single_point(noise, kZone, 5);
  CHECK(d.brake);
  REQUIRE(d.cause.has_value());
  CHECK(d.cause->distance == 2.0);
  CHECK(d.frame_index == 5);
  Frame beyond;
  beyond.points = {{8.0, 0.0, 1.0}};
  const Decision none = decide_single_point(beyond, kZone, 0);
  CHECK_FALSE(none.brake);
  CHECK_FALSE(none.cause.has_value());
}

TEST_CASE("size-based examples") {
  const std::vector<Cluster> small{cube_cluster(2.0, 0.1)};
  CHECK_FALSE(decide_size_based(size_filter(small, 0.3), kZone, 0).brake);
  const std::vector<Cluster> inside{cube_cluster(3.0, 0.4)};
  const Decision d = decide_size_based(size_filter(inside, 0.3), kZone, 0);
  CHECK(d.brake);
  REQUIRE(d.cause.has_value());
  CHECK(d.cause->cluster_index == 0u);
  const std::vector<Cluster> outside{cube_cluster(7.5, 0.4)};
  CHECK_FALSE(decide_size_based(size_filter(outside, 0.3), kZone, 0).brake);
}

TEST_CASE("motion-aware examples") {
  const MotionAwareSpec spec;
  const std::vector<Track> steady{track_near(3.0, 0.0)};
  CHECK_FALSE(decide_motion_aware(steady, kZone, spec, 0).brake);
  const std::vector<Track> closing{track_near(3.0, -1.0)};
  const Decision d = decide_motion_aware(closing, kZone, spec, 0);
  CHECK(d.brake);
  REQUIRE(d.cause.has_value());
  CHECK(d.cause->rel_velocity == -1.0);
  const std::vector<Track> far{track_near(9.0, -2.0)};
  CHECK_FALSE(decide_motion_aware(far, kZone, spec, 0).brake);
}

TEST_CASE("motion-aware dead band and first sighting") {
  const MotionAwareSpec spec{1.5, 0.05};
  const std::vector<Track> jitter{track_near(3.0, -0.04)};
  CHECK_FALSE(decide_motion_aware(jitter, kZone, spec, 0).brake);
  const std::vector<Track> fresh{track_near(3.0, std::nullopt)};
  CHECK(decide_motion_aware(fresh, kZone, spec, 0).brake);
  const std::vector<Track> fresh_far{track_near(8.0, std::nullopt)};
  CHECK_FALSE(decide_motion_aware(fresh_far, kZone, spec, 0).brake);
  CHECK_THROWS(MotionAwareSpec{0.9, 0.05}.validate());
  CHECK_THROWS(MotionAwareSpec{1.5, -0.1}.validate());
}

TEST_CASE("single-point equals size-based on per-point clusters with no threshold") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> x(0.0, 10.0), y(-1.0, 1.0), z(0.3, 1.8);
  std::uniform_int_distribution<int> n(0, 6);
  for (int t = 0; t < 500; ++t) {
    Frame f;
    const int count = n(rng);
    for (int i = 0; i < count; ++i) f.points.push_back({x(rng), y(rng), z(rng)});
    std::vector<Cluster> singles;
    for (std::size_t i = 0; i < f.points.size(); ++i) {
      Cluster c;
      c.points = {f.points[i]};
      c.indices = {i};
      c.aabb = compute_aabb(c);
      singles.push_back(c);
    }
    CHECK(decide_single_point(f, kZone, 0).brake == decide_size_based(size_filter(singles, 0.0), kZone, 0).brake);
  }
}

TEST_CASE("motion-aware implies size-based implies single-point on simulated sequences") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> pos(1.0, 10.0), lat(-1.5, 1.5), edge(0.05, 0.8), vel(-3.0, 3.0);
  SensorConfig cfg;
  const MotionAwareSpec spec;
  const MonitorZone zone{6.0, 1.0, 0.3, 1.8};
  const MonitorZone observed = zone.extended(spec.extension_factor);
  for (int seq = 0; seq < 20; ++seq) {
    Scene initial;
    for (int k = 0; k < 3; ++k) {
      const double e = edge(rng);
      initial.obstacles.push_back({{pos(rng), lat(rng), 0.6 + e / 2.0}, e, e, e, {vel(rng), vel(rng) / 3.0, 0.0}});
    }
    cfg.rng_seed = static_cast<std::uint64_t>(seq);
    Tracker tracker(GateSpec{}, 3);
    for (int f = 0; f < 15; ++f) {
      const Scene scene = f == 0 ? initial : advance(initial, 0.1 * f);
      const Frame in_corridor = filter_to_corridor(cast_frame(scene, cfg, f), observed);
      const auto hazards = size_filter(euclidean_cluster(in_corridor, 0.4, 1), 0.3);
      const auto& tracks = tracker.step(hazards, f);
      const bool ma = decide_motion_aware(tracks, zone, spec, f).brake;
      const bool sb = decide_size_based(hazards, zone, f).brake;
      const bool sp = decide_single_point(in_corridor, zone, f).brake;
      REQUIRE((!ma || sb));
      REQUIRE((!sb || sp));
    }
  }
}

TEST_CASE("no brake for non-closing objects once velocities exist") {
  const MotionAwareSpec exact{1.5, 0.0};
  std::vector<Track> tracks;
  for (int i = 0; i < 5; ++i) tracks.push_back(track_near(1.0 + i, 0.25 * i));
  CHECK_FALSE(decide_motion_aware(tracks, kZone, exact, 0).brake);
  tracks.push_back(track_near(2.0, -0.001));
  CHECK(decide_motion_aware(tracks, kZone, exact, 0).brake);
}
