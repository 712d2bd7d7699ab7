#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <vector>

#include "nearfield/tracking.hpp"

using namespace nearfield;

namespace {

Track track_at(int id, Vec3 c) {
  Track t;
  t.id = id;
  t.last_centroid = c;
  t.last_aabb = {c, c};
  return t;
}

Cluster cluster_at(Vec3 c) {
  Cluster cl;
  cl.points = {c};
  cl.indices = {0};
  cl.aabb = {c, c};
  return cl;
}

struct Best {
  std::size_t size = 0;
  double cost = 0.0;
};

// Exhaustive search over all partial injective matchings: largest size first, then lowest cost.
void search(std::size_t t, std::size_t n_tracks, const std::vector<std::vector<double>>& cost,
            std::vector<bool>& used, std::size_t size, double total, Best& best) {
  if (t == n_tracks) {
    if (size > best.size || (size == best.size && total < best.cost)) best = {size, total};
    return;
  }
  search(t + 1, n_tracks, cost, used, size, total, best);
  for (std::size_t c = 0; c < used.size(); ++c) {
    if (used[c] || std::isnan(cost[t][c])) continue;
    used[c] = true;
    search(t + 1, n_tracks, cost, used, size + 1, total + cost[t][c], best);
    used[c] = false;
  }
}

}  // namespace

TEST_CASE("gate examples") {
  const GateSpec gs{16.7, 0.1, 0.0};
  CHECK(gs.radius() == doctest::Approx(1.67));
  const std::vector<Track> tracks{track_at(0, {5.0, 0.0, 1.0})};
  const std::vector<Cluster> near{cluster_at({5.1, 0.0, 1.0})};
  const std::vector<Cluster> far{cluster_at({7.0, 0.0, 1.0})};
  const auto ok = gate(tracks, near, gs);
  REQUIRE(ok.size() == 1);
  CHECK(ok[0].cost == doctest::Approx(0.1));
  CHECK(gate(tracks, far, gs).empty());
  CHECK(gate(std::vector<Track>{}, near, gs).empty());
}

TEST_CASE("gate widens with ego speed") {
  const GateSpec gs{16.7, 0.1, 5.0};
  CHECK(gs.radius() == doctest::Approx(2.17));
  const std::vector<Track> tracks{track_at(0, {5.0, 0.0, 1.0})};
  const std::vector<Cluster> moved{cluster_at({3.0, 0.0, 1.0})};
  CHECK(gate(tracks, moved, gs).size() == 1);
  CHECK_THROWS(GateSpec{0.0, 0.1, 0.0}.validate());
  CHECK_THROWS(GateSpec{16.7, 0.0, 0.0}.validate());
}

TEST_CASE("identical centroid sets match to identity at zero cost") {
  const std::vector<Track> tracks{track_at(0, {2, 0, 1}), track_at(1, {4, 0.5, 1})};
  const std::vector<Cluster> clusters{cluster_at({2, 0, 1}), cluster_at({4, 0.5, 1})};
  const auto feasible = gate(tracks, clusters, GateSpec{});
  const Matching m = assign(tracks, clusters.size(), feasible);
  REQUIRE(m.pairs.size() == 2);
  CHECK(m.pairs[0] == std::pair<std::size_t, std::size_t>{0, 0});
  CHECK(m.pairs[1] == std::pair<std::size_t, std::size_t>{1, 1});
  CHECK(m.total_cost == 0.0);
  CHECK(m.unmatched_tracks.empty());
  CHECK(m.unmatched_clusters.empty());
}

TEST_CASE("equidistant cluster goes to the lower track id") {
  std::vector<Track> tracks{track_at(7, {3, 0.5, 1}), track_at(2, {3, -0.5, 1})};
  const std::vector<Cluster> clusters{cluster_at({3, 0, 1})};
  const Matching m = assign(tracks, 1, gate(tracks, clusters, GateSpec{}));
  REQUIRE(m.pairs.size() == 1);
  CHECK(tracks[m.pairs[0].first].id == 2);
  REQUIRE(m.unmatched_tracks.size() == 1);
  CHECK(tracks[m.unmatched_tracks[0]].id == 7);
}

TEST_CASE("equal-cost alternatives go to the lower cluster index") {
  const std::vector<Track> tracks{track_at(0, {3, 0, 1})};
  const std::vector<Cluster> clusters{cluster_at({3, 0.4, 1}), cluster_at({3, -0.4, 1})};
  const Matching m = assign(tracks, 2, gate(tracks, clusters, GateSpec{}));
  REQUIRE(m.pairs.size() == 1);
  CHECK(m.pairs[0].second == 0);
}

TEST_CASE("degenerate inputs give empty matchings") {
  const std::vector<Track> tracks{track_at(0, {3, 0, 1})};
  const Matching none = assign(tracks, 0, {});
  CHECK(none.pairs.empty());
  CHECK(none.unmatched_tracks.size() == 1);
  const Matching empty = assign(std::vector<Track>{}, 3, {});
  CHECK(empty.pairs.empty());
  CHECK(empty.unmatched_clusters.size() == 3);
}

TEST_CASE("assignment equals brute-force permutation minimum") {
  std::mt19937_64 rng(31337);
  std::uniform_int_distribution<std::size_t> dim(0, 6);
  std::uniform_real_distribution<double> c(0.0, 2.0), u(0.0, 1.0);
  for (int inst = 0; inst < 500; ++inst) {
    const std::size_t nt = dim(rng), nc = dim(rng);
    const double density = u(rng);
    std::vector<Track> tracks;
    for (std::size_t i = 0; i < nt; ++i) tracks.push_back(track_at(static_cast<int>(i), {}));
    std::vector<std::vector<double>> cost(nt, std::vector<double>(nc, std::numeric_limits<double>::quiet_NaN()));
    std::vector<FeasiblePair> feasible;
    for (std::size_t i = 0; i < nt; ++i)
      for (std::size_t j = 0; j < nc; ++j)
        if (u(rng) < density) {
          cost[i][j] = c(rng);
          feasible.push_back({i, j, cost[i][j]});
        }
    Best best;
    std::vector<bool> used(nc, false);
    search(0, nt, cost, used, 0, 0.0, best);

    const Matching m = assign(tracks, nc, feasible);
    REQUIRE(m.pairs.size() == best.size);
    REQUIRE(m.total_cost == doctest::Approx(best.cost).epsilon(1e-12));

    std::set<std::size_t> ts, cs;
    double sum = 0.0;
    for (auto [t, cl] : m.pairs) {
      REQUIRE(ts.insert(t).second);
      REQUIRE(cs.insert(cl).second);
      REQUIRE_FALSE(std::isnan(cost[t][cl]));
      sum += cost[t][cl];
    }
    CHECK(sum == doctest::Approx(m.total_cost));
    CHECK(m.pairs.size() + m.unmatched_tracks.size() == nt);
    CHECK(m.pairs.size() + m.unmatched_clusters.size() == nc);
  }
}

TEST_CASE("matched pairs respect the gate") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> x(0.0, 8.0), y(-1.0, 1.0);
  const GateSpec gs{16.7, 0.1, 0.0};
  for (int inst = 0; inst < 100; ++inst) {
    std::vector<Track> tracks;
    std::vector<Cluster> clusters;
    for (int i = 0; i < 5; ++i) tracks.push_back(track_at(i, {x(rng), y(rng), 1.0}));
    for (int i = 0; i < 5; ++i) clusters.push_back(cluster_at({x(rng), y(rng), 1.0}));
    const Matching m = assign(tracks, clusters.size(), gate(tracks, clusters, gs));
    for (auto [t, c] : m.pairs) CHECK(distance(tracks[t].last_centroid, clusters[c].centroid()) <= gs.radius());
  }
}

TEST_CASE("velocity from inter-frame displacement") {
  int next_id = 1;
  const TrackUpdateParams params{0.1, 3};
  const std::vector<Track> tracks{track_at(0, {5.0, 0.0, 1.0})};

  const std::vector<Cluster> same{cluster_at({5.0, 0.0, 1.0})};
  const auto still = update_tracks(tracks, assign(tracks, 1, gate(tracks, same, GateSpec{})), same, 1, params, next_id);
  REQUIRE(still.size() == 1);
  REQUIRE(still[0].rel_velocity_x.has_value());
  CHECK(*still[0].rel_velocity_x == 0.0);
  CHECK(still[0].age_frames == 2);

  const std::vector<Cluster> ahead{cluster_at({5.01389, 0.0, 1.0})};
  const auto opening =
      update_tracks(tracks, assign(tracks, 1, gate(tracks, ahead, GateSpec{})), ahead, 1, params, next_id);
  REQUIRE(opening[0].rel_velocity_x.has_value());
  CHECK(*opening[0].rel_velocity_x == doctest::Approx(0.1389));
}

TEST_CASE("unmatched clusters open tracks and unmatched tracks are dropped") {
  int next_id = 10;
  const std::vector<Track> tracks{track_at(3, {5.0, 0.0, 1.0})};
  const std::vector<Cluster> clusters{cluster_at({1.0, 0.5, 1.0})};
  const Matching m = assign(tracks, 1, gate(tracks, clusters, GateSpec{}));
  const auto out = update_tracks(tracks, m, clusters, 4, {}, next_id);
  REQUIRE(out.size() == 1);
  CHECK(out[0].id == 10);
  CHECK(out[0].age_frames == 1);
  CHECK_FALSE(out[0].rel_velocity_x.has_value());
  CHECK(out[0].last_seen_frame == 4);
  CHECK(next_id == 11);
}

TEST_CASE("moving average over the last three samples") {
  Tracker tracker(GateSpec{}, 3);
  const double xs[] = {5.0, 5.1, 5.3, 5.6, 6.0};
  for (int f = 0; f < 5; ++f) {
    const std::vector<Cluster> c{cluster_at({xs[f], 0.0, 1.0})};
    tracker.step(c, f);
  }
  REQUIRE(tracker.tracks().size() == 1);
  // Raw rates 1, 2, 3, 4 m/s; the window keeps 2, 3, 4.
  CHECK(*tracker.tracks()[0].rel_velocity_x == doctest::Approx(3.0));
  CHECK(tracker.tracks()[0].age_frames == 5);
}

TEST_CASE("noiseless constant relative velocity converges within three frames") {
  SensorConfig cfg;
  cfg.noise_sigma = 0.0;
  Scene initial;
  initial.ego_velocity = kmh_to_mps(25.0);
  initial.obstacles.push_back({{6.0, 0.0, 0.9}, 1.8, 1.4, 4.0, {kmh_to_mps(30.0), 0.0, 0.0}});
  const double truth = kmh_to_mps(30.0) - kmh_to_mps(25.0);
  const MonitorZone roi{12.0, 1.0, 0.3, 1.8};

  Tracker tracker(GateSpec{16.7, 0.1, initial.ego_velocity}, 3);
  for (int f = 0; f < 8; ++f) {
    const Scene scene = f == 0 ? initial : advance(initial, 0.1 * f);
    const auto clusters = euclidean_cluster(filter_to_corridor(cast_frame(scene, cfg, f), roi), 0.4, 1);
    tracker.step(size_filter(clusters, 0.3), f);
    if (f >= 3) {
      REQUIRE(tracker.tracks().size() == 1);
      CHECK(*tracker.tracks()[0].rel_velocity_x == doctest::Approx(truth).epsilon(0.05 / truth));
    }
  }
}
