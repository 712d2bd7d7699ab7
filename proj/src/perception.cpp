#include "nearfield/perception.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace nearfield {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<unsigned char> rank_;
};

struct CellKey {
  std::int64_t x, y, z;
  bool operator==(const CellKey&) const = default;
};

struct CellHash {
  std::size_t operator()(const CellKey& k) const {
    std::uint64_t h = static_cast<std::uint64_t>(k.x) * 0x9e3779b97f4a7c15ULL;
    h ^= static_cast<std::uint64_t>(k.y) * 0xc2b2ae3d27d4eb4fULL + (h << 6) + (h >> 2);
    h ^= static_cast<std::uint64_t>(k.z) * 0x165667b19e3779f9ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

}  // namespace

Vec3 Cluster::centroid() const {
  Vec3 sum;
  for (const Vec3& p : points) sum = sum + p;
  return sum * (1.0 / static_cast<double>(points.size()));
}

Frame filter_to_corridor(const Frame& frame, const MonitorZone& zone) {
  Frame out;
  out.timestamp = frame.timestamp;
  std::copy_if(frame.points.begin(), frame.points.end(), std::back_inserter(out.points),
               [&](const Vec3& p) { return contains(zone, p); });
  return out;
}

std::vector<Cluster> euclidean_cluster(const Frame& frame, double tolerance, std::size_t min_points) {
  if (!(tolerance > 0.0)) throw std::invalid_argument("euclidean_cluster: tolerance must be > 0");
  if (min_points < 1) throw std::invalid_argument("euclidean_cluster: min_points must be >= 1");

  const auto& pts = frame.points;
  const double tol2 = tolerance * tolerance;
  auto cell_of = [&](const Vec3& p) {
    return CellKey{static_cast<std::int64_t>(std::floor(p.x / tolerance)),
                   static_cast<std::int64_t>(std::floor(p.y / tolerance)),
                   static_cast<std::int64_t>(std::floor(p.z / tolerance))};
  };

  // Grid with cell edge = tolerance: every neighbour within tolerance lies in the 27-cell block.
  std::unordered_map<CellKey, std::vector<std::size_t>, CellHash> grid;
  grid.reserve(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) grid[cell_of(pts[i])].push_back(i);

  DisjointSets sets(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const CellKey c = cell_of(pts[i]);
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        for (std::int64_t dz = -1; dz <= 1; ++dz) {
          auto it = grid.find({c.x + dx, c.y + dy, c.z + dz});
          if (it == grid.end()) continue;
          for (std::size_t j : it->second) {
            if (j > i && squared_norm(pts[i] - pts[j]) <= tol2) sets.unite(i, j);
          }
        }
      }
    }
  }

  std::unordered_map<std::size_t, std::size_t> slot_of_root;
  std::vector<Cluster> clusters;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto [it, inserted] = slot_of_root.try_emplace(sets.find(i), clusters.size());
    if (inserted) clusters.emplace_back();
    Cluster& c = clusters[it->second];
    c.points.push_back(pts[i]);
    c.indices.push_back(i);
  }

  std::erase_if(clusters, [&](const Cluster& c) { return c.points.size() < min_points; });
  for (Cluster& c : clusters) c.aabb = compute_aabb(c);
  std::stable_sort(clusters.begin(), clusters.end(),
                   [](const Cluster& a, const Cluster& b) { return lex_less(a.aabb.min, b.aabb.min); });
  return clusters;
}

Aabb compute_aabb(const Cluster& cluster) {
  if (cluster.points.empty()) throw std::invalid_argument("compute_aabb: empty cluster");
  return bounding_box(cluster.points);
}

std::vector<Cluster> size_filter(std::span<const Cluster> clusters, double d_max) {
  if (!(d_max >= 0.0)) throw std::invalid_argument("size_filter: d_max must be >= 0");
  std::vector<Cluster> kept;
  for (const Cluster& c : clusters) {
    if (c.aabb.max_extent() >= d_max) kept.push_back(c);
  }
  return kept;
}

}  // namespace nearfield
