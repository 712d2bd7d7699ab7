#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "nearfield/geometry.hpp"
#include "nearfield/perception.hpp"

namespace nearfield {

struct Track {
  int id = 0;
  Vec3 last_centroid;
  Aabb last_aabb;
  /// Longitudinal relative velocity [m/s], positive when the gap opens. Empty until
  /// the track has been matched across at least one frame pair.
  std::optional<double> rel_velocity_x;
  int age_frames = 1;
  std::int64_t last_seen_frame = 0;
  std::vector<double> velocity_samples;  ///< recent raw displacement rates, oldest first
};

/// Plausible-motion gate: a cluster can continue a track only if its centroid moved at
/// most (v_max + ego_speed) * dt since the previous frame.
struct GateSpec {
  double v_max = 16.7;      ///< [m/s], 60 km/h
  double dt = 0.1;          ///< frame period [s]
  double ego_speed = 0.0;   ///< sensor-frame displacement compensation [m/s]

  double radius() const { return (v_max + ego_speed) * dt; }
  void validate() const;
};

struct FeasiblePair {
  std::size_t track = 0;
  std::size_t cluster = 0;
  double cost = 0.0;  ///< centroid distance [m]
};

struct Matching {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  ///< (track index, cluster index), by track index
  std::vector<std::size_t> unmatched_tracks;
  std::vector<std::size_t> unmatched_clusters;
  double total_cost = 0.0;
};

std::vector<FeasiblePair> gate(std::span<const Track> tracks, std::span<const Cluster> clusters, const GateSpec& gs);

/// Minimum-total-cost matching among the maximum-cardinality matchings over the
/// feasible pairs (Hungarian method). Exact cost ties go to the lower track id, then
/// to the lower cluster index.
Matching assign(std::span<const Track> tracks, std::size_t cluster_count, std::span<const FeasiblePair> feasible);

struct TrackUpdateParams {
  double dt = 0.1;
  std::size_t velocity_window = 3;  ///< moving-average length over raw estimates; 1 disables
};

/// Matched tracks take the new centroid/AABB and a velocity sample
/// (x_new - x_old) / dt; unmatched clusters open new tracks numbered from `next_id`;
/// unmatched tracks are dropped.
std::vector<Track> update_tracks(std::span<const Track> tracks, const Matching& matching,
                                 std::span<const Cluster> clusters, std::int64_t frame_index,
                                 const TrackUpdateParams& params, int& next_id);

/// Frame-to-frame tracker state for one pipeline.
class Tracker {
 public:
  Tracker(GateSpec gate, std::size_t velocity_window) : gate_(gate), velocity_window_(velocity_window) {}

  const std::vector<Track>& step(std::span<const Cluster> clusters, std::int64_t frame_index);
  const std::vector<Track>& tracks() const { return tracks_; }

 private:
  GateSpec gate_;
  std::size_t velocity_window_;
  std::vector<Track> tracks_;
  int next_id_ = 0;
};

}  // namespace nearfield
