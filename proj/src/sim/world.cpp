#include "assist/sim/world.hpp"

#include <algorithm>
#include <stdexcept>

namespace assist::sim {

World::World(TerrainPtr terrain, VehicleSpec vehicle, WorldConfig config)
    : terrain_(std::move(terrain)), vehicle_(vehicle), config_(config), monitor_(config.debounce_ticks) {
  if (!terrain_) throw std::invalid_argument("world: null terrain");
  if (config_.substeps < 1 || !(config_.tick_seconds > 0.0)) throw std::invalid_argument("world: bad timing");
  state_.station = config_.start_station;
  state_.position = terrain_->point_at(config_.start_station);
  state_.yaw = terrain_->heading_at(config_.start_station);
}

void World::reset(const VehicleState& state) {
  state_ = state;
  state_.station = terrain_->project_near(state.position, state.station, 60.0).station;
  reverse_left_ = 0;
}

bool World::finished() const {
  return state_.station >= terrain_->spec().total_length - config_.finish_margin;
}

LidarScan World::scan(int channels) const { return cast_lidar(state_, *terrain_, channels, config_.lidar); }

TickResult World::step(Control ci) {
  std::vector<Control> profile(static_cast<std::size_t>(config_.substeps), ci);
  return step(profile);
}

TickResult World::step(std::span<const Control> profile) {
  if (static_cast<int>(profile.size()) != config_.substeps)
    throw std::invalid_argument("world: control profile must have one entry per substep");

  TickResult result;
  result.tick = tick_;
  const double dt = config_.tick_seconds / config_.substeps;
  std::vector<ContactEvent> contacts;

  auto move_to = [&](const VehicleState& next) {
    odometer_ += norm(next.position - state_.position);
    state_ = next;
    state_.station = terrain_->project_near(state_.position, state_.station).station;
  };

  if (reverse_left_ > 0) {
    result.reversing = true;
    for (int j = 0; j < config_.substeps; ++j) {
      result.applied.push_back({0.0, 0.0});
      const VehicleState next = step_reverse(state_, dt, vehicle_);
      auto touch = detect_contacts(next, *terrain_, vehicle_);
      if (!touch.empty()) {
        // Backed into something: stop and hand control back.
        contacts.insert(contacts.end(), touch.begin(), touch.end());
        state_.speed = 0.0;
        reverse_left_ = 1;
        break;
      }
      move_to(next);
    }
    if (--reverse_left_ == 0) state_.speed = 0.0;
  } else {
    const Vec2 start = state_.position;
    for (int j = 0; j < config_.substeps; ++j) {
      const Control ci = clamp_control(profile[static_cast<std::size_t>(j)]);
      result.applied.push_back(ci);
      const VehicleState next = step_vehicle(state_, ci, dt, vehicle_);
      auto touch = detect_contacts(next, *terrain_, vehicle_);
      if (touch.empty()) {
        move_to(next);
        continue;
      }
      contacts.insert(contacts.end(), touch.begin(), touch.end());
      const bool frontal = std::any_of(touch.begin(), touch.end(),
                                       [](const ContactEvent& e) { return e.kind == CrashKind::Frontal; });
      state_.steer_angle = next.steer_angle;
      if (frontal) {
        state_.speed = 0.0;
        reverse_left_ = config_.reverse_ticks;
        break;
      }
      state_.speed = next.speed * config_.side_contact_speed_factor;
    }
    if (!contacts.empty() && reverse_left_ == 0 && norm(state_.position - start) < config_.blocked_distance) {
      for (auto& c : contacts) c.kind = CrashKind::Frontal;
      state_.speed = 0.0;
      reverse_left_ = config_.reverse_ticks;
    }
  }

  result.in_contact = !contacts.empty();
  result.events = monitor_.update(tick_, contacts);
  ++tick_;
  result.state = state_;
  return result;
}

double lidar_lateral_offset(const LidarScan& scan) {
  int horizontal = -1;
  for (int c = 0; c < scan.channels(); ++c) {
    if (scan.elevation_deg[c] == 0.0) horizontal = c;
  }
  if (horizontal < 0) throw std::invalid_argument("lidar offset needs a horizontal channel");
  const int bins = scan.azimuth_bins;
  auto clearance = [&](int center_deg) {
    double best = scan.max_range;
    for (int d = center_deg - 45; d <= center_deg + 45; ++d) {
      const int a = ((d % 360) + 360) % 360 * bins / 360;
      best = std::min(best, scan.range(horizontal, a));
    }
    return best;
  };
  const double left = clearance(90);
  const double right = clearance(-90);
  return 0.5 * (right - left);
}

LateralOffset lateral_offset(const VehicleState& state, const TerrainGeometry& terrain, const LidarSpec& lidar) {
  LateralOffset out;
  out.geometric = terrain.project(state.position).offset;
  out.lidar = lidar_lateral_offset(cast_lidar(state, terrain, 16, lidar));
  return out;
}

}  // namespace assist::sim
