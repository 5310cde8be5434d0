#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "assist/sim/contacts.hpp"
#include "assist/sim/vehicle.hpp"
#include "assist/sim/world.hpp"

namespace assist::eval {

// One 100 ms tick. Controls are physical; the pose and offsets are observed
// at the start of the tick, when the driver decides.
struct LogRecord {
  int tick = 0;
  sim::Control raw;
  sim::Control assisted;
  sim::Control applied;  // what the platform received in the last substep
  sim::VehicleState state;
  sim::LateralOffset offset;
  bool in_contact = false;
  std::vector<sim::ContactEvent> events;

  bool operator==(const LogRecord&) const = default;
};

struct DriveLog {
  std::uint64_t terrain_seed = 0;
  bool assist = false;
  bool finished = false;
  double distance = 0.0;  // odometer, m
  double tick_seconds = 0.1;
  std::vector<LogRecord> records;

  bool operator==(const DriveLog&) const = default;
};

struct CrashCounts {
  int frontal = 0;
  int side = 0;
  int total() const { return frontal + side; }

  bool operator==(const CrashCounts&) const = default;
};

// Sample standard deviation (n - 1). Throws std::invalid_argument for fewer than 2 values.
double sample_sd(std::span<const double> values);

// SD of the lateral offset series, m. The LiDAR variant uses the clearance estimate.
double sdlp(const DriveLog& log, bool lidar = false);
// SD of speed, m/s.
double speed_maintenance(const DriveLog& log);
// (last tick - first tick) * tick length, s. Throws std::runtime_error if the run did not finish.
double tct(const DriveLog& log);
// Sign changes per meter; a zero sample inherits the previous sign.
double zero_crossings(std::span<const double> steering, double distance_m);
// Uses the applied steering.
double zero_crossings(const DriveLog& log);
CrashCounts count_crashes(const DriveLog& log);

struct MetricsReport {
  double sdlp = 0.0;        // m
  double sdlp_lidar = 0.0;  // m
  double sm = 0.0;          // m/s
  double tct = 0.0;         // s, NaN when the run did not finish
  double zero = 0.0;        // 1/m
  CrashCounts crashes;
  bool finished = false;
};

MetricsReport compute_metrics(const DriveLog& log);

}  // namespace assist::eval
