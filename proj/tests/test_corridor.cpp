#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "nearfield/corridor.hpp"

using namespace nearfield;

namespace {

// Reaction plus safety-margin time of 0.3 s, the values used in the hand evaluations below.
CorridorSpec short_reaction() {
  CorridorSpec spec;
  spec.reaction_time = 0.1;
  spec.safety_margin_time = 0.2;
  return spec;
}

}  // namespace

TEST_CASE("braking distance hand evaluations") {
  const CorridorSpec spec = short_reaction();
  // 8.3333^2 / (2 * 9.81 * 0.75)
  // 69.44389 / 14.715 = 4.71926; the commonly quoted 4.7184 agrees to 1e-3.
  CHECK(braking_distance(8.3333, spec) == doctest::Approx(4.71926).epsilon(1e-5));
  CHECK(std::abs(braking_distance(8.3333, spec) - 4.7184) <= 1e-3);
  CHECK(braking_distance(kmh_to_mps(30.0), spec) == doctest::Approx(4.71935).epsilon(1e-5));
  CHECK(braking_distance(0.0, spec) == 0.0);
  // 5 km/h: 1.38889^2 / 14.715
  CHECK(braking_distance(kmh_to_mps(5.0), spec) == doctest::Approx(0.13107).epsilon(1e-4));
}

TEST_CASE("monitoring distance hand evaluations") {
  const CorridorSpec spec = short_reaction();
  CHECK(std::abs(monitoring_distance(kmh_to_mps(30.0), spec) - 7.2184) <= 1e-3);
  CHECK(monitoring_distance(kmh_to_mps(10.0), spec) == doctest::Approx(1.3576).epsilon(1e-4));
  CHECK(monitoring_distance(0.0, spec) == 0.0);
}

TEST_CASE("slope enters the braking denominator") {
  CorridorSpec uphill = short_reaction();
  uphill.slope = 0.05;
  CHECK(braking_distance(10.0, uphill) == doctest::Approx(100.0 / (2.0 * 9.81 * 0.8)));
  CHECK(braking_distance(10.0, uphill) < braking_distance(10.0, short_reaction()));
}

TEST_CASE("invalid inputs are rejected") {
  CorridorSpec spec = short_reaction();
  CHECK_THROWS_AS(braking_distance(-1.0, spec), std::invalid_argument);
  spec.friction = 0.1;
  spec.slope = -0.1;
  CHECK_THROWS_AS(braking_distance(5.0, spec), std::domain_error);

  CorridorSpec bad_width = short_reaction();
  bad_width.vehicle_width = 0.0;
  CHECK_THROWS(bad_width.validate());
  CorridorSpec bad_band = short_reaction();
  bad_band.top_height = 0.2;
  CHECK_THROWS(bad_band.validate());
  CHECK_NOTHROW(CorridorSpec{}.validate());
}

TEST_CASE("monitoring distance is strictly increasing in speed") {
  for (const CorridorSpec& spec : {short_reaction(), CorridorSpec{}}) {
    double prev = monitoring_distance(0.0, spec);
    for (int i = 1; i <= 1000; ++i) {
      const double v = 20.0 * i / 1000.0;
      const double d = monitoring_distance(v, spec);
      REQUIRE(d > prev);
      prev = d;
    }
  }
}

TEST_CASE("monitoring distance splits into reaction and braking parts") {
  const CorridorSpec spec = short_reaction();
  for (int i = 1; i <= 200; ++i) {
    const double v = 0.1 * i;
    const double lhs = monitoring_distance(v, spec) - braking_distance(v, spec);
    const double rhs = (spec.reaction_time + spec.safety_margin_time) * v;
    CHECK(std::abs(lhs - rhs) <= 1e-12 * rhs);
  }
}

TEST_CASE("zone bounds are closed and exclude the sensor plane") {
  const CorridorSpec spec = short_reaction();
  const MonitorZone zone = build_zone(kmh_to_mps(30.0), spec);
  const double d = zone.longitudinal_limit;
  CHECK(zone.lateral_halfwidth == 1.0);

  CHECK(contains(zone, {d, 1.0, 0.3}));
  CHECK(contains(zone, {d, -1.0, 1.8}));
  CHECK(contains(zone, {3.0, 0.0, 1.0}));
  CHECK_FALSE(contains(zone, {0.0, 0.0, 1.0}));
  CHECK_FALSE(contains(zone, {d + 1e-9, 0.0, 1.0}));
  CHECK_FALSE(contains(zone, {3.0, 1.0 + 1e-9, 1.0}));
  CHECK_FALSE(contains(zone, {3.0, 0.0, 0.05}));
  CHECK_FALSE(contains(zone, {3.0, 0.0, 1.81}));
}

TEST_CASE("membership examples") {
  const MonitorZone zone{7.2, 1.0, 0.3, 1.8};
  CHECK(contains(zone, {1.0, 0.0, 0.8}));
  CHECK_FALSE(contains(zone, {1.0, 0.0, 0.05}));
  CHECK_FALSE(contains(zone, {1.0, 1.0001, 0.8}));
}

TEST_CASE("zone membership is symmetric in y") {
  const MonitorZone zone = build_zone(6.0, CorridorSpec{});
  for (double x = -1.0; x <= 12.0; x += 0.37) {
    for (double y = 0.0; y <= 1.5; y += 0.11) {
      for (double z = 0.0; z <= 2.0; z += 0.13) {
        REQUIRE(contains(zone, {x, y, z}) == contains(zone, {x, -y, z}));
      }
    }
  }
}

TEST_CASE("a stationary vehicle has an empty speed-dependent zone") {
  const MonitorZone zone = build_zone(0.0, CorridorSpec{});
  CHECK(zone.longitudinal_limit == 0.0);
  CHECK_FALSE(contains(zone, {0.1, 0.0, 1.0}));
  const MonitorZone fixed = fixed_zone(8.0, CorridorSpec{});
  CHECK(contains(fixed, {7.9, 0.5, 1.0}));
}

TEST_CASE("extended zone scales only the longitudinal limit") {
  const MonitorZone zone = build_zone(5.0, CorridorSpec{});
  const MonitorZone ext = zone.extended(1.5);
  CHECK(ext.longitudinal_limit == doctest::Approx(1.5 * zone.longitudinal_limit));
  CHECK(ext.lateral_halfwidth == zone.lateral_halfwidth);
  CHECK(ext.z_min == zone.z_min);
  CHECK(ext.z_max == zone.z_max);
}
