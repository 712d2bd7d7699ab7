#include "nearfield/tracking.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace nearfield {

namespace {

// Lexicographic assignment cost: number of forbidden pairs used, then distance, then
// tie-break ranks. Forms an ordered group, so Hungarian potentials work on it directly.
struct PairCost {
  std::int64_t forbidden = 0;
  double distance = 0.0;
  std::int64_t track_rank = 0;
  std::int64_t cluster_rank = 0;

  friend PairCost operator+(const PairCost& a, const PairCost& b) {
    return {a.forbidden + b.forbidden, a.distance + b.distance, a.track_rank + b.track_rank,
            a.cluster_rank + b.cluster_rank};
  }
  friend PairCost operator-(const PairCost& a, const PairCost& b) {
    return {a.forbidden - b.forbidden, a.distance - b.distance, a.track_rank - b.track_rank,
            a.cluster_rank - b.cluster_rank};
  }
  friend bool operator<(const PairCost& a, const PairCost& b) {
    if (a.forbidden != b.forbidden) return a.forbidden < b.forbidden;
    if (a.distance != b.distance) return a.distance < b.distance;
    if (a.track_rank != b.track_rank) return a.track_rank < b.track_rank;
    return a.cluster_rank < b.cluster_rank;
  }

  static PairCost infinity() { return {std::numeric_limits<std::int64_t>::max() / 4, 0.0, 0, 0}; }
};

// Shortest augmenting path Hungarian algorithm for a rows x cols matrix with rows <= cols.
// Returns the column assigned to each row.
std::vector<std::size_t> solve_rectangular(const std::vector<std::vector<PairCost>>& cost) {
  const std::size_t n = cost.size();
  const std::size_t m = n == 0 ? 0 : cost.front().size();
  const PairCost inf = PairCost::infinity();

  std::vector<PairCost> u(n + 1), v(m + 1);
  std::vector<std::size_t> row_of_col(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    row_of_col[0] = i;
    std::size_t j0 = 0;
    std::vector<PairCost> minv(m + 1, inf);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = row_of_col[j0];
      PairCost delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const PairCost cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[row_of_col[j]] = u[row_of_col[j]] + delta;
          v[j] = v[j] - delta;
        } else {
          minv[j] = minv[j] - delta;
        }
      }
      j0 = j1;
    } while (row_of_col[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      row_of_col[j0] = row_of_col[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::size_t> col_of_row(n, 0);
  for (std::size_t j = 1; j <= m; ++j) {
    if (row_of_col[j] != 0) col_of_row[row_of_col[j] - 1] = j - 1;
  }
  return col_of_row;
}

}  // namespace

void GateSpec::validate() const {
  if (!(v_max > 0.0)) throw std::invalid_argument("GateSpec: v_max must be > 0");
  if (!(dt > 0.0)) throw std::invalid_argument("GateSpec: dt must be > 0");
  if (!(ego_speed >= 0.0)) throw std::invalid_argument("GateSpec: ego_speed must be >= 0");
}

std::vector<FeasiblePair> gate(std::span<const Track> tracks, std::span<const Cluster> clusters, const GateSpec& gs) {
  gs.validate();
  std::vector<FeasiblePair> pairs;
  const double radius = gs.radius();
  std::vector<Vec3> centroids;
  centroids.reserve(clusters.size());
  for (const Cluster& c : clusters) centroids.push_back(c.centroid());
  for (std::size_t t = 0; t < tracks.size(); ++t) {
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      const double d = distance(tracks[t].last_centroid, centroids[c]);
      if (d <= radius) pairs.push_back({t, c, d});
    }
  }
  return pairs;
}

Matching assign(std::span<const Track> tracks, std::size_t cluster_count, std::span<const FeasiblePair> feasible) {
  Matching result;
  const std::size_t n_tracks = tracks.size();
  std::vector<bool> track_matched(n_tracks, false), cluster_matched(cluster_count, false);

  if (n_tracks > 0 && cluster_count > 0 && !feasible.empty()) {
    // Rows are the smaller side.
    const bool transpose = n_tracks > cluster_count;
    const std::size_t rows = transpose ? cluster_count : n_tracks;
    const std::size_t cols = transpose ? n_tracks : cluster_count;
    std::vector<std::vector<PairCost>> cost(rows, std::vector<PairCost>(cols, PairCost{1, 0.0, 0, 0}));
    std::vector<std::vector<bool>> allowed(rows, std::vector<bool>(cols, false));
    for (const FeasiblePair& p : feasible) {
      if (p.track >= n_tracks || p.cluster >= cluster_count) throw std::out_of_range("assign: pair index out of range");
      const std::size_t r = transpose ? p.cluster : p.track;
      const std::size_t c = transpose ? p.track : p.cluster;
      cost[r][c] = {0, p.cost, tracks[p.track].id, static_cast<std::int64_t>(p.cluster)};
      allowed[r][c] = true;
    }

    const std::vector<std::size_t> col_of_row = solve_rectangular(cost);
    for (std::size_t r = 0; r < rows; ++r) {
      const std::size_t c = col_of_row[r];
      if (!allowed[r][c]) continue;
      const std::size_t t = transpose ? c : r;
      const std::size_t k = transpose ? r : c;
      result.pairs.emplace_back(t, k);
      result.total_cost += cost[r][c].distance;
      track_matched[t] = true;
      cluster_matched[k] = true;
    }
    std::sort(result.pairs.begin(), result.pairs.end());
  }

  for (std::size_t t = 0; t < n_tracks; ++t) {
    if (!track_matched[t]) result.unmatched_tracks.push_back(t);
  }
  for (std::size_t c = 0; c < cluster_count; ++c) {
    if (!cluster_matched[c]) result.unmatched_clusters.push_back(c);
  }
  return result;
}

std::vector<Track> update_tracks(std::span<const Track> tracks, const Matching& matching,
                                 std::span<const Cluster> clusters, std::int64_t frame_index,
                                 const TrackUpdateParams& params, int& next_id) {
  if (!(params.dt > 0.0)) throw std::invalid_argument("update_tracks: dt must be > 0");
  const std::size_t window = std::max<std::size_t>(params.velocity_window, 1);

  std::vector<Track> next;
  next.reserve(matching.pairs.size() + matching.unmatched_clusters.size());
  for (const auto& [t, c] : matching.pairs) {
    Track track = tracks[t];
    const Vec3 centroid = clusters[c].centroid();
    track.velocity_samples.push_back((centroid.x - track.last_centroid.x) / params.dt);
    if (track.velocity_samples.size() > window) {
      track.velocity_samples.erase(track.velocity_samples.begin(),
                                   track.velocity_samples.end() - static_cast<std::ptrdiff_t>(window));
    }
    track.rel_velocity_x = std::accumulate(track.velocity_samples.begin(), track.velocity_samples.end(), 0.0) /
                           static_cast<double>(track.velocity_samples.size());
    track.last_centroid = centroid;
    track.last_aabb = clusters[c].aabb;
    track.age_frames += 1;
    track.last_seen_frame = frame_index;
    next.push_back(std::move(track));
  }
  for (std::size_t c : matching.unmatched_clusters) {
    Track track;
    track.id = next_id++;
    track.last_centroid = clusters[c].centroid();
    track.last_aabb = clusters[c].aabb;
    track.age_frames = 1;
    track.last_seen_frame = frame_index;
    next.push_back(std::move(track));
  }
  return next;
}

const std::vector<Track>& Tracker::step(std::span<const Cluster> clusters, std::int64_t frame_index) {
  const std::vector<FeasiblePair> feasible = gate(tracks_, clusters, gate_);
  const Matching matching = assign(tracks_, clusters.size(), feasible);
  tracks_ = update_tracks(tracks_, matching, clusters, frame_index, {gate_.dt, velocity_window_}, next_id_);
  return tracks_;
}

}  // namespace nearfield
