#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "assist/sim/terrain.hpp"

namespace assist::sim {
namespace {

void expect_key(std::istream& is, const std::string& key) {
  std::string got;
  if (!(is >> got) || got != key) throw std::runtime_error("terrain file: expected '" + key + "'");
}

}  // namespace

void write_terrain(std::ostream& os, const TerrainSpec& spec) {
  const auto old_precision = os.precision(std::numeric_limits<double>::max_digits10);
  os << "assist-terrain 1\n";
  os << "seed " << spec.seed << '\n';
  os << "total_length " << spec.total_length << '\n';
  os << "centerline " << spec.centerline.size() << '\n';
  for (std::size_t i = 0; i < spec.centerline.size(); ++i) {
    os << spec.centerline[i].x << ' ' << spec.centerline[i].y << ' ' << spec.half_width[i] << '\n';
  }
  os << "obstacles " << spec.obstacles.size() << '\n';
  for (const auto& o : spec.obstacles) {
    os << o.center.x << ' ' << o.center.y << ' ' << o.radius << '\n';
  }
  os.precision(old_precision);
}

TerrainSpec read_terrain(std::istream& is) {
  TerrainSpec spec;
  expect_key(is, "assist-terrain");
  int version = 0;
  if (!(is >> version) || version != 1) throw std::runtime_error("terrain file: unsupported version");
  expect_key(is, "seed");
  is >> spec.seed;
  expect_key(is, "total_length");
  is >> spec.total_length;
  expect_key(is, "centerline");
  std::size_t n = 0;
  is >> n;
  spec.centerline.resize(n);
  spec.half_width.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    is >> spec.centerline[i].x >> spec.centerline[i].y >> spec.half_width[i];
  }
  expect_key(is, "obstacles");
  std::size_t m = 0;
  is >> m;
  spec.obstacles.resize(m);
  for (auto& o : spec.obstacles) is >> o.center.x >> o.center.y >> o.radius;
  if (!is) throw std::runtime_error("terrain file: truncated");
  return spec;
}

}  // namespace assist::sim
