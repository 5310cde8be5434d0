#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "assist/prep/preprocess.hpp"

namespace assist::drivers {

// One 100 ms sample in physical units.
struct Step {
  int tick = 0;
  sim::Control ci;
  double speed = 0.0;
  double yaw = 0.0;
  double pitch = 0.0;
  double roll = 0.0;
  prep::DistanceMeters distances{};

  bool operator==(const Step&) const = default;
};

struct Session {
  std::uint64_t id = 0;
  std::vector<Step> steps;  // contiguous ticks

  bool operator==(const Session&) const = default;
};

struct Dataset {
  std::vector<Session> sessions;

  std::size_t step_count() const;
  bool operator==(const Dataset&) const = default;
};

prep::ModelInput model_input(const Step& step);

// Text format: a header line, then one step per line with comma-separated
// fields session, tick, steer, pedal, speed, yaw, pitch, roll, d0 .. d179.
// Numbers are written in shortest round-trip form.
void write_dataset(std::ostream& out, const Dataset& data);
Dataset read_dataset(std::istream& in);
void save_dataset(const std::filesystem::path& path, const Dataset& data);
Dataset load_dataset(const std::filesystem::path& path);

}  // namespace assist::drivers
