#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nearfield/corridor.hpp"
#include "nearfield/geometry.hpp"
#include "nearfield/lidar_sim.hpp"

namespace nearfield {

/// Segmented point group. `indices` refer to the frame the cluster was built from.
struct Cluster {
  std::vector<Vec3> points;
  std::vector<std::size_t> indices;
  Aabb aabb;

  Vec3 centroid() const;
};

struct ClusterParams {
  double tolerance = 0.4;      ///< linking distance [m]
  std::size_t min_points = 1;
};

/// Keeps the points inside `zone`, preserving order.
Frame filter_to_corridor(const Frame& frame, const MonitorZone& zone);

/// Connected components of the graph linking points within `tolerance` (inclusive).
/// Components smaller than `min_points` are dropped. Clusters are ordered by their
/// AABB min corner (x, then y, then z); points keep their frame order.
std::vector<Cluster> euclidean_cluster(const Frame& frame, double tolerance, std::size_t min_points);
inline std::vector<Cluster> euclidean_cluster(const Frame& frame, const ClusterParams& params) {
  return euclidean_cluster(frame, params.tolerance, params.min_points);
}

/// Componentwise bounds of a nonempty cluster's points.
Aabb compute_aabb(const Cluster& cluster);

/// Keeps clusters with max(width, height, depth) >= d_max; a cluster is dropped only
/// when all three extents are below the threshold.
std::vector<Cluster> size_filter(std::span<const Cluster> clusters, double d_max);

}  // namespace nearfield
