#include "assist/drivers/skilled.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace assist::drivers {
namespace {

using sim::Vec2;

// Weight that is 1 within `core` of the obstacle station and eases to 0 over `ramp`.
double avoid_weight(double distance, double core, double ramp) {
  if (distance <= core) return 1.0;
  if (distance >= core + ramp) return 0.0;
  return 0.5 * (1.0 + std::cos(std::numbers::pi * (distance - core) / ramp));
}

std::vector<double> box_smooth(const std::vector<double>& v, int radius) {
  std::vector<double> out(v.size());
  const int n = static_cast<int>(v.size());
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    int count = 0;
    for (int j = std::max(0, i - radius); j <= std::min(n - 1, i + radius); ++j) {
      sum += v[j];
      ++count;
    }
    out[i] = sum / count;
  }
  return out;
}

}  // namespace

double pure_pursuit_angle(double alpha, double lookahead, double wheelbase) {
  return std::atan(2.0 * wheelbase * std::sin(alpha) / lookahead);
}

SkilledDriver::SkilledDriver(sim::TerrainPtr terrain, sim::VehicleSpec vehicle, SkilledConfig config)
    : terrain_(std::move(terrain)), vehicle_(vehicle), config_(config) {
  if (!terrain_) throw std::invalid_argument("skilled driver: null terrain");
  if (config_.lookahead_min <= vehicle_.wheelbase) throw std::invalid_argument("skilled driver: lookahead must exceed wheelbase");
  if (config_.max_speed <= 0.0 || config_.max_speed > vehicle_.max_speed)
    throw std::invalid_argument("skilled driver: target speed out of range");

  const auto& spec = terrain_->spec();
  const auto& stations = terrain_->stations();
  const std::size_t n = spec.centerline.size();

  // Clear-channel offsets: steer to the middle of the gap beside each obstacle.
  std::vector<double> weight(n, 0.0);
  offset_.assign(n, 0.0);
  for (const auto& ob : spec.obstacles) {
    const sim::Projection pr = terrain_->project(ob.center);
    const double hw = terrain_->half_width_at(pr.station);
    const double gap_mid = pr.offset >= 0.0 ? 0.5 * (-hw + pr.offset - ob.radius) : 0.5 * (hw + pr.offset + ob.radius);
    const double core = ob.radius + 0.5 * vehicle_.length + config_.obstacle_margin;
    for (std::size_t i = 0; i < n; ++i) {
      const double w = avoid_weight(std::abs(stations[i] - pr.station), core, config_.avoid_ramp);
      if (w > weight[i]) {
        weight[i] = w;
        offset_[i] = w * gap_mid;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double limit = std::max(0.0, spec.half_width[i] - 0.5 * vehicle_.width - config_.wall_margin);
    offset_[i] = std::clamp(offset_[i], -limit, limit);
  }
  offset_ = box_smooth(box_smooth(offset_, 4), 4);

  // Curvature of the planned path from heading change over a short baseline.
  std::vector<Vec2> path(n);
  for (std::size_t i = 0; i < n; ++i) path[i] = path_point(stations[i]);
  std::vector<double> kappa(n, 0.0);
  const std::size_t span = 3;
  for (std::size_t i = span; i + span < n; ++i) {
    const Vec2 a = path[i] - path[i - span];
    const Vec2 b = path[i + span] - path[i];
    const double turn = std::abs(sim::wrap_angle(std::atan2(b.y, b.x) - std::atan2(a.y, a.x)));
    kappa[i] = turn / (0.5 * (norm(a) + norm(b)));
  }
  kappa = box_smooth(kappa, 3);

  speed_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double limit = kappa[i] > 1e-9 ? std::sqrt(config_.lateral_accel / kappa[i]) : config_.max_speed;
    speed_[i] = std::min(config_.max_speed, limit);
  }
  for (std::size_t i = n - 1; i-- > 0;) {
    const double ds = stations[i + 1] - stations[i];
    speed_[i] = std::min(speed_[i], std::sqrt(speed_[i + 1] * speed_[i + 1] + 2.0 * config_.comfort_decel * ds));
  }
}

double SkilledDriver::sample(const std::vector<double>& values, double station) const {
  const auto& s = terrain_->stations();
  if (station <= s.front()) return values.front();
  if (station >= s.back()) return values.back();
  const auto it = std::upper_bound(s.begin(), s.end(), station);
  const std::size_t i = static_cast<std::size_t>(it - s.begin()) - 1;
  const double t = (station - s[i]) / (s[i + 1] - s[i]);
  return values[i] + t * (values[i + 1] - values[i]);
}

double SkilledDriver::path_offset(double station) const { return sample(offset_, station); }
double SkilledDriver::target_speed(double station) const { return sample(speed_, station); }

Vec2 SkilledDriver::path_point(double station) const {
  return terrain_->point_at(station) + sim::left_normal(sim::unit(terrain_->heading_at(station))) * path_offset(station);
}

sim::Control SkilledDriver::control(const sim::VehicleState& state) const {
  const double v = std::max(state.speed, 0.0);
  const double station = terrain_->project_near(state.position, state.station).station;
  const double lookahead =
      std::clamp(config_.lookahead_base + config_.lookahead_gain * v, config_.lookahead_min, config_.lookahead_max);
  const Vec2 to_target = path_point(station + lookahead) - state.position;
  const double alpha = sim::wrap_angle(std::atan2(to_target.y, to_target.x) - state.yaw);
  const double delta = pure_pursuit_angle(alpha, std::max(norm(to_target), vehicle_.wheelbase), vehicle_.wheelbase);

  const double v_target = target_speed(station + v * config_.preview_seconds);
  return sim::clamp_control({delta / vehicle_.max_steer_angle, config_.speed_gain * (v_target - v)});
}

}  // namespace assist::drivers
