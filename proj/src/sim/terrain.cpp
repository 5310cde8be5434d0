#include "assist/sim/terrain.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace assist::sim {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
constexpr double kMaxHeading = 70.0 * kDeg;
constexpr double kBlockLength = 800.0;

struct Piece {
  double length;
  double curvature;
};

class PieceBuilder {
 public:
  explicit PieceBuilder(std::mt19937_64& rng) : rng_(rng) {}

  void straight(double length) {
    pieces_.push_back({length, 0.0});
    total_ += length;
    last_was_arc_ = false;
  }

  void arc(double radius, double angle) {
    // Keep the overall heading within +-70 degrees so the canyon never folds back.
    double sign = coin() ? 1.0 : -1.0;
    if (std::abs(heading_ + sign * angle) > kMaxHeading) sign = -sign;
    heading_ += sign * angle;
    pieces_.push_back({radius * angle, sign / radius});
    total_ += radius * angle;
    last_was_arc_ = true;
  }

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  bool coin() { return std::bernoulli_distribution(0.5)(rng_); }

  double total() const { return total_; }
  bool last_was_arc() const { return last_was_arc_; }
  const std::vector<Piece>& pieces() const { return pieces_; }

 private:
  std::mt19937_64& rng_;
  std::vector<Piece> pieces_;
  double total_ = 0.0;
  double heading_ = 0.0;
  bool last_was_arc_ = false;
};

// Samples the piecewise-constant-curvature path at fixed arc length.
std::vector<Vec2> sample_path(const std::vector<Piece>& pieces, double length, double ds) {
  std::vector<Vec2> points;
  Vec2 pos{0.0, 0.0};
  double heading = 0.0;
  points.push_back(pos);

  std::size_t piece = 0;
  double piece_used = 0.0;
  double s = 0.0;
  auto advance = [&](double delta) {
    while (delta > 0.0 && piece < pieces.size()) {
      const double avail = pieces[piece].length - piece_used;
      const double step = std::min(avail, delta);
      const double k = pieces[piece].curvature;
      if (k == 0.0) {
        pos = pos + unit(heading) * step;
      } else {
        const double h1 = heading + k * step;
        pos = pos + Vec2{(std::sin(h1) - std::sin(heading)) / k, -(std::cos(h1) - std::cos(heading)) / k};
        heading = h1;
      }
      delta -= step;
      piece_used += step;
      if (piece_used >= pieces[piece].length) {
        ++piece;
        piece_used = 0.0;
      }
    }
  };

  while (s < length) {
    const double step = std::min(ds, length - s);
    advance(step);
    s += step;
    points.push_back(pos);
  }
  return points;
}

}  // namespace

TerrainSpec generate_terrain(std::uint64_t seed, double length_m, WidthRange widths,
                             const TerrainOptions& options) {
  if (!(length_m > 100.0)) throw std::invalid_argument("terrain length must exceed 100 m");
  if (!(widths.min < widths.max)) throw std::invalid_argument("width range requires min < max");
  if (widths.min < options.vehicle_width + 1.0)
    throw std::invalid_argument("minimum corridor width must exceed vehicle width + 1 m");
  if (!(options.sample_spacing > 0.0)) throw std::invalid_argument("sample spacing must be positive");

  std::mt19937_64 rng(seed);
  PieceBuilder builder(rng);

  // Every 800 m block opens with a long straight followed by a tight curve.
  while (builder.total() < length_m) {
    const double block_start = builder.total();
    builder.straight(builder.uniform(105.0, 140.0));
    builder.arc(builder.uniform(25.0, 38.0), builder.uniform(40.0, 70.0) * kDeg);
    while (builder.total() - block_start < kBlockLength && builder.total() < length_m) {
      if (builder.last_was_arc()) {
        builder.straight(builder.uniform(30.0, 120.0));
      } else {
        builder.arc(builder.uniform(40.0, 150.0), builder.uniform(15.0, 70.0) * kDeg);
      }
    }
  }

  TerrainSpec spec;
  spec.seed = seed;
  spec.centerline = sample_path(builder.pieces(), length_m, options.sample_spacing);
  spec.total_length = length_m;

  // Smooth width profile strictly inside [min, max].
  const double mid = 0.25 * (widths.min + widths.max);
  const double amp = 0.25 * (widths.max - widths.min) * 0.98;
  const double lambda1 = builder.uniform(250.0, 450.0);
  const double lambda2 = builder.uniform(90.0, 160.0);
  const double phase1 = builder.uniform(0.0, 2.0 * std::numbers::pi);
  const double phase2 = builder.uniform(0.0, 2.0 * std::numbers::pi);
  spec.half_width.reserve(spec.centerline.size());
  for (std::size_t i = 0; i < spec.centerline.size(); ++i) {
    const double s = std::min(static_cast<double>(i) * options.sample_spacing, length_m);
    const double wave = 0.6 * std::sin(2.0 * std::numbers::pi * s / lambda1 + phase1) +
                        0.4 * std::sin(2.0 * std::numbers::pi * s / lambda2 + phase2);
    spec.half_width.push_back(mid + amp * wave);
  }

  // Obstacles hug one wall: at most 3.8 m of the corridor is ever occupied,
  // and the gap behind them is narrower than the vehicle.
  if (options.obstacle_spacing > 0.0) {
    double s = 60.0;
    while (true) {
      s += std::max(30.0, options.obstacle_spacing * builder.uniform(0.5, 1.5));
      if (s > length_m - 60.0) break;
      const auto i = static_cast<std::size_t>(std::lround(s / options.sample_spacing));
      const std::size_t prev = i == 0 ? 0 : i - 1;
      const std::size_t next = std::min(i + 1, spec.centerline.size() - 1);
      const Vec2 tangent = spec.centerline[next] - spec.centerline[prev];
      const Vec2 normal = left_normal(tangent) * (1.0 / norm(tangent));
      const double side = builder.coin() ? 1.0 : -1.0;
      const double radius = builder.uniform(0.5, 1.5);
      const double gap = builder.uniform(0.0, 0.8);
      const double offset = side * (spec.half_width[i] - gap - radius);
      spec.obstacles.push_back({spec.centerline[i] + normal * offset, radius});
    }
  }
  return spec;
}

}  // namespace assist::sim
