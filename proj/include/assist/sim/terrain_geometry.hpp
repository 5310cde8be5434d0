#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "assist/sim/geometry.hpp"
#include "assist/sim/terrain.hpp"

namespace assist::sim {

enum class Body { LeftWall, RightWall, StartCap, Obstacle };

struct SurfaceParams {
  double wall_height = 3.0;
  double obstacle_height = 1.5;
  double grid_cell = 4.0;
};

struct WallSegment {
  Segment seg;
  Body body;
};

struct Projection {
  double station = 0.0;
  // Signed distance from the centerline, positive to the left of travel.
  double offset = 0.0;
  std::size_t segment = 0;
};

struct RayHit {
  double distance;  // horizontal distance along the ray
  double height;    // top of the struck surface
  int item;         // wall segment index, or obstacle index offset by the segment count

  bool operator==(const RayHit&) const = default;
};

// Immutable derived geometry of a TerrainSpec: wall polylines, a uniform grid
// over walls and obstacles, and centerline projection.
class TerrainGeometry {
 public:
  explicit TerrainGeometry(TerrainSpec spec, SurfaceParams surfaces = {});

  const TerrainSpec& spec() const { return spec_; }
  const SurfaceParams& surfaces() const { return surfaces_; }
  const std::vector<WallSegment>& walls() const { return walls_; }
  const std::vector<double>& stations() const { return stations_; }

  double half_width_at(double station) const;
  Vec2 point_at(double station) const;
  double heading_at(double station) const;

  // Global nearest-segment projection. Throws std::runtime_error when two
  // distant parts of the centerline are equally near.
  Projection project(Vec2 p) const;
  // Projection restricted to stations in [hint - window, hint + window].
  Projection project_near(Vec2 p, double station_hint, double window = 40.0) const;

  // All surfaces struck by a horizontal ray within max_range, sorted by
  // (distance, item). Traversal stops once the grid walk passes a hit whose
  // height is at least block_height + block_slope * distance (nothing behind
  // it can be seen).
  void cast_ray(Vec2 origin, Vec2 dir, double max_range, double block_height, double block_slope,
                std::vector<RayHit>& hits) const;
  // Reference: tests every surface, no grid, no early exit.
  void cast_ray_brute(Vec2 origin, Vec2 dir, double max_range, std::vector<RayHit>& hits) const;

  // Wall segment and obstacle indices whose bounding boxes overlap the query box.
  void query(Vec2 lo, Vec2 hi, std::vector<int>& items) const;
  int obstacle_item(std::size_t obstacle) const { return static_cast<int>(walls_.size() + obstacle); }
  bool is_obstacle_item(int item) const { return item >= static_cast<int>(walls_.size()); }

 private:
  std::size_t segment_at(double station) const;
  bool ray_hit_item(int item, Vec2 origin, Vec2 dir, double max_range, RayHit& hit) const;
  void insert(int item, Vec2 lo, Vec2 hi);

  TerrainSpec spec_;
  SurfaceParams surfaces_;
  std::vector<double> stations_;
  std::vector<WallSegment> walls_;

  Vec2 grid_origin_;
  int grid_nx_ = 0;
  int grid_ny_ = 0;
  std::vector<std::vector<int>> cells_;
};

using TerrainPtr = std::shared_ptr<const TerrainGeometry>;

inline TerrainPtr make_terrain(TerrainSpec spec, SurfaceParams surfaces = {}) {
  return std::make_shared<const TerrainGeometry>(std::move(spec), surfaces);
}

}  // namespace assist::sim
