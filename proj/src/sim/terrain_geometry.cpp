#include "assist/sim/terrain_geometry.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace assist::sim {

TerrainGeometry::TerrainGeometry(TerrainSpec spec, SurfaceParams surfaces)
    : spec_(std::move(spec)), surfaces_(surfaces) {
  const auto& c = spec_.centerline;
  const std::size_t n = c.size();
  if (n < 2 || spec_.half_width.size() != n) throw std::invalid_argument("terrain: malformed centerline");

  stations_.resize(n);
  stations_[0] = 0.0;
  for (std::size_t i = 1; i < n; ++i) stations_[i] = stations_[i - 1] + norm(c[i] - c[i - 1]);

  std::vector<Vec2> left(n), right(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 t = c[std::min(i + 1, n - 1)] - c[i == 0 ? 0 : i - 1];
    const Vec2 nrm = left_normal(t) * (1.0 / norm(t));
    left[i] = c[i] + nrm * spec_.half_width[i];
    right[i] = c[i] - nrm * spec_.half_width[i];
  }
  walls_.reserve(2 * n);
  for (std::size_t i = 0; i + 1 < n; ++i) walls_.push_back({{left[i], left[i + 1]}, Body::LeftWall});
  for (std::size_t i = 0; i + 1 < n; ++i) walls_.push_back({{right[i], right[i + 1]}, Body::RightWall});
  walls_.push_back({{right[0], left[0]}, Body::StartCap});

  Vec2 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
  Vec2 hi{std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};
  auto grow = [&](Vec2 p, double r) {
    lo = {std::min(lo.x, p.x - r), std::min(lo.y, p.y - r)};
    hi = {std::max(hi.x, p.x + r), std::max(hi.y, p.y + r)};
  };
  for (const auto& w : walls_) {
    grow(w.seg.a, 0.0);
    grow(w.seg.b, 0.0);
  }
  for (const auto& o : spec_.obstacles) grow(o.center, o.radius);

  const double cell = surfaces_.grid_cell;
  grid_origin_ = {lo.x - cell, lo.y - cell};
  grid_nx_ = static_cast<int>(std::ceil((hi.x - lo.x) / cell)) + 3;
  grid_ny_ = static_cast<int>(std::ceil((hi.y - lo.y) / cell)) + 3;
  cells_.assign(static_cast<std::size_t>(grid_nx_) * grid_ny_, {});

  for (std::size_t i = 0; i < walls_.size(); ++i) {
    const auto& s = walls_[i].seg;
    insert(static_cast<int>(i), {std::min(s.a.x, s.b.x), std::min(s.a.y, s.b.y)},
           {std::max(s.a.x, s.b.x), std::max(s.a.y, s.b.y)});
  }
  for (std::size_t j = 0; j < spec_.obstacles.size(); ++j) {
    const auto& o = spec_.obstacles[j];
    insert(obstacle_item(j), {o.center.x - o.radius, o.center.y - o.radius},
           {o.center.x + o.radius, o.center.y + o.radius});
  }
}

void TerrainGeometry::insert(int item, Vec2 lo, Vec2 hi) {
  constexpr double pad = 1e-6;
  const double cell = surfaces_.grid_cell;
  const int x0 = std::max(0, static_cast<int>(std::floor((lo.x - pad - grid_origin_.x) / cell)));
  const int y0 = std::max(0, static_cast<int>(std::floor((lo.y - pad - grid_origin_.y) / cell)));
  const int x1 = std::min(grid_nx_ - 1, static_cast<int>(std::floor((hi.x + pad - grid_origin_.x) / cell)));
  const int y1 = std::min(grid_ny_ - 1, static_cast<int>(std::floor((hi.y + pad - grid_origin_.y) / cell)));
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) cells_[static_cast<std::size_t>(y) * grid_nx_ + x].push_back(item);
}

std::size_t TerrainGeometry::segment_at(double station) const {
  const auto it = std::upper_bound(stations_.begin(), stations_.end(), station);
  if (it == stations_.begin()) return 0;
  return std::min<std::size_t>(static_cast<std::size_t>(it - stations_.begin()) - 1, stations_.size() - 2);
}

double TerrainGeometry::half_width_at(double station) const {
  const std::size_t i = segment_at(station);
  const double len = stations_[i + 1] - stations_[i];
  const double f = std::clamp((station - stations_[i]) / len, 0.0, 1.0);
  return spec_.half_width[i] + f * (spec_.half_width[i + 1] - spec_.half_width[i]);
}

Vec2 TerrainGeometry::point_at(double station) const {
  const std::size_t i = segment_at(station);
  const auto& c = spec_.centerline;
  const double len = stations_[i + 1] - stations_[i];
  const double f = (station - stations_[i]) / len;
  return c[i] + (c[i + 1] - c[i]) * f;
}

double TerrainGeometry::heading_at(double station) const {
  const std::size_t i = segment_at(station);
  const Vec2 d = spec_.centerline[i + 1] - spec_.centerline[i];
  return std::atan2(d.y, d.x);
}

namespace {

struct Candidate {
  double dist;
  Vec2 foot;
  std::size_t seg;
};

Candidate project_segment(const std::vector<Vec2>& c, std::size_t i, Vec2 p) {
  const Vec2 foot = closest_point({c[i], c[i + 1]}, p);
  return {norm(p - foot), foot, i};
}

}  // namespace

Projection TerrainGeometry::project(Vec2 p) const {
  const auto& c = spec_.centerline;
  Candidate best{std::numeric_limits<double>::max(), {}, 0};
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    const Candidate cand = project_segment(c, i, p);
    if (cand.dist < best.dist) best = cand;
  }
  // A far-away stretch of centerline at the same distance makes the station ambiguous.
  double max_hw = 0.0;
  for (double hw : spec_.half_width) max_hw = std::max(max_hw, hw);
  const double gap = 2.0 * max_hw + 10.0;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    if (std::abs(stations_[i] - stations_[best.seg]) <= gap) continue;
    if (project_segment(c, i, p).dist - best.dist <= 1e-9)
      throw std::runtime_error("terrain: ambiguous centerline projection");
  }
  const Vec2 t = c[best.seg + 1] - c[best.seg];
  const double side = cross(t, p - best.foot) >= 0.0 ? 1.0 : -1.0;
  return {stations_[best.seg] + norm(best.foot - c[best.seg]), side * best.dist, best.seg};
}

Projection TerrainGeometry::project_near(Vec2 p, double station_hint, double window) const {
  const auto& c = spec_.centerline;
  const std::size_t i0 = segment_at(station_hint - window);
  const std::size_t i1 = segment_at(station_hint + window);
  Candidate best{std::numeric_limits<double>::max(), {}, i0};
  for (std::size_t i = i0; i <= i1; ++i) {
    const Candidate cand = project_segment(c, i, p);
    if (cand.dist < best.dist) best = cand;
  }
  const Vec2 t = c[best.seg + 1] - c[best.seg];
  const double side = cross(t, p - best.foot) >= 0.0 ? 1.0 : -1.0;
  return {stations_[best.seg] + norm(best.foot - c[best.seg]), side * best.dist, best.seg};
}

bool TerrainGeometry::ray_hit_item(int item, Vec2 origin, Vec2 dir, double max_range, RayHit& hit) const {
  std::optional<double> t;
  double height = 0.0;
  if (is_obstacle_item(item)) {
    const auto& o = spec_.obstacles[static_cast<std::size_t>(item) - walls_.size()];
    t = ray_circle(origin, dir, o.center, o.radius);
    height = surfaces_.obstacle_height;
  } else {
    t = ray_segment(origin, dir, walls_[static_cast<std::size_t>(item)].seg);
    height = surfaces_.wall_height;
  }
  if (!t || *t > max_range) return false;
  hit = {*t, height, item};
  return true;
}

namespace {

void sort_hits(std::vector<RayHit>& hits) {
  std::sort(hits.begin(), hits.end(), [](const RayHit& a, const RayHit& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.item < b.item);
  });
}

}  // namespace

void TerrainGeometry::cast_ray_brute(Vec2 origin, Vec2 dir, double max_range, std::vector<RayHit>& hits) const {
  hits.clear();
  const int total = static_cast<int>(walls_.size() + spec_.obstacles.size());
  RayHit hit{};
  for (int item = 0; item < total; ++item) {
    if (ray_hit_item(item, origin, dir, max_range, hit)) hits.push_back(hit);
  }
  sort_hits(hits);
}

void TerrainGeometry::cast_ray(Vec2 origin, Vec2 dir, double max_range, double block_height,
                               double block_slope, std::vector<RayHit>& hits) const {
  hits.clear();
  const double cell = surfaces_.grid_cell;
  int cx = static_cast<int>(std::floor((origin.x - grid_origin_.x) / cell));
  int cy = static_cast<int>(std::floor((origin.y - grid_origin_.y) / cell));
  if (cx < 0 || cy < 0 || cx >= grid_nx_ || cy >= grid_ny_) {
    cast_ray_brute(origin, dir, max_range, hits);
    return;
  }

  constexpr double inf = std::numeric_limits<double>::infinity();
  const int step_x = dir.x > 0.0 ? 1 : -1;
  const int step_y = dir.y > 0.0 ? 1 : -1;
  const double cell_x0 = grid_origin_.x + cx * cell;
  const double cell_y0 = grid_origin_.y + cy * cell;
  double t_max_x = dir.x == 0.0 ? inf : (dir.x > 0.0 ? (cell_x0 + cell - origin.x) : (origin.x - cell_x0)) / std::abs(dir.x);
  double t_max_y = dir.y == 0.0 ? inf : (dir.y > 0.0 ? (cell_y0 + cell - origin.y) : (origin.y - cell_y0)) / std::abs(dir.y);
  const double t_delta_x = dir.x == 0.0 ? inf : cell / std::abs(dir.x);
  const double t_delta_y = dir.y == 0.0 ? inf : cell / std::abs(dir.y);

  std::vector<int> seen;
  double blocked_at = inf;
  RayHit hit{};
  while (true) {
    for (int item : cells_[static_cast<std::size_t>(cy) * grid_nx_ + cx]) {
      if (std::find(seen.begin(), seen.end(), item) != seen.end()) continue;
      seen.push_back(item);
      if (ray_hit_item(item, origin, dir, max_range, hit)) {
        hits.push_back(hit);
        if (hit.height >= block_height + block_slope * hit.distance) blocked_at = std::min(blocked_at, hit.distance);
      }
    }
    const double t_exit = std::min(t_max_x, t_max_y);
    if (blocked_at <= t_exit || t_exit > max_range) break;
    if (t_max_x < t_max_y) {
      cx += step_x;
      t_max_x += t_delta_x;
    } else {
      cy += step_y;
      t_max_y += t_delta_y;
    }
    if (cx < 0 || cy < 0 || cx >= grid_nx_ || cy >= grid_ny_) break;
  }
  sort_hits(hits);
}

void TerrainGeometry::query(Vec2 lo, Vec2 hi, std::vector<int>& items) const {
  items.clear();
  const double cell = surfaces_.grid_cell;
  const int x0 = std::max(0, static_cast<int>(std::floor((lo.x - grid_origin_.x) / cell)));
  const int y0 = std::max(0, static_cast<int>(std::floor((lo.y - grid_origin_.y) / cell)));
  const int x1 = std::min(grid_nx_ - 1, static_cast<int>(std::floor((hi.x - grid_origin_.x) / cell)));
  const int y1 = std::min(grid_ny_ - 1, static_cast<int>(std::floor((hi.y - grid_origin_.y) / cell)));
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) {
      const auto& cell_items = cells_[static_cast<std::size_t>(y) * grid_nx_ + x];
      items.insert(items.end(), cell_items.begin(), cell_items.end());
    }
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
}

}  // namespace assist::sim
