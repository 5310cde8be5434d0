#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "assist/drivers/datagen.hpp"
#include "assist/drivers/dataset.hpp"
#include "assist/drivers/skilled.hpp"
#include "assist/drivers/unskilled.hpp"
#include "test_support.hpp"

namespace {

using namespace assist;
using namespace assist::drivers;

std::shared_ptr<const SkilledDriver> straight_driver() {
  return std::make_shared<const SkilledDriver>(sim::make_terrain(test::straight_corridor(2000, 6)));
}

TEST(PurePursuit, ClosedForm) {
  const double expected = std::atan(2.0 * 2.8 * std::sin(0.1) / 10.0);
  EXPECT_NEAR(pure_pursuit_angle(0.1, 10.0, 2.8), expected, 1e-9);
  EXPECT_NEAR(expected, 0.055849, 1e-6);
  EXPECT_EQ(pure_pursuit_angle(0.0, 10.0, 2.8), 0.0);
  EXPECT_EQ(pure_pursuit_angle(-0.1, 10.0, 2.8), -pure_pursuit_angle(0.1, 10.0, 2.8));
}

TEST(Skilled, CenteredAtTargetSpeedHoldsCourse) {
  const auto d = straight_driver();
  sim::VehicleState s;
  s.position = {500, 0};
  s.station = 500;
  s.speed = d->target_speed(500);
  EXPECT_DOUBLE_EQ(s.speed, 15.0);
  const sim::Control c = d->control(s);
  EXPECT_NEAR(c.steer, 0.0, 1e-12);
  EXPECT_NEAR(c.pedal, 0.0, 1e-12);
}

TEST(Skilled, AcceleratesBelowTargetAndSteersBack) {
  const auto d = straight_driver();
  sim::VehicleState s;
  s.position = {500, 2.0};
  s.station = 500;
  s.speed = 8.0;
  const sim::Control c = d->control(s);
  EXPECT_GT(c.pedal, 0.0);
  EXPECT_LT(c.steer, 0.0);  // left of the path: steer right
  s.position = {500, -2.0};
  EXPECT_GT(d->control(s).steer, 0.0);
}

TEST(Skilled, PathPassesBesideObstacles) {
  const auto terrain = sim::make_terrain(test::straight_corridor(600, 6, {{{300, 2.0}, 1.0}}));
  const SkilledDriver d(terrain);
  EXPECT_LT(d.path_offset(300), -1.0);
  EXPECT_NEAR(d.path_offset(100), 0.0, 1e-12);
}

TEST(Unskilled, ZeroNoiseMatchesSkilled) {
  const auto d = straight_driver();
  for (NoiseMode mode : {NoiseMode::White, NoiseMode::Correlated}) {
    UnskilledDriver u(d, {mode, 0.0, 0.0, 1.0, 0.1}, 7);
    sim::VehicleState s;
    s.station = 100;
    for (double y = -2.0; y <= 2.0; y += 0.5) {
      s.position = {100, y};
      s.speed = 5.0 + y;
      const sim::Control a = u.control(s), b = d->control(s);
      EXPECT_EQ(a.steer, b.steer);
      EXPECT_EQ(a.pedal, b.pedal);
    }
  }
}

TEST(Unskilled, WhiteNoiseIsUnbiased) {
  NoiseProcess p({NoiseMode::White, 0.1, 0.4, 1.0, 0.1}, 11);
  const int n = 100000;
  double ms = 0, mp = 0;
  for (int i = 0; i < n; ++i) {
    const sim::Control c = p.next();
    ms += c.steer;
    mp += c.pedal;
  }
  EXPECT_LT(std::abs(ms / n), 3.0 * 0.1 / std::sqrt(n));
  EXPECT_LT(std::abs(mp / n), 3.0 * 0.4 / std::sqrt(n));
}

TEST(Unskilled, CorrelatedNoiseHasMemoryAndStationarySpread) {
  NoiseProcess p({NoiseMode::Correlated, 0.15, 0.4, 1.0, 0.1}, 12);
  const int n = 100000;
  std::vector<double> x(n);
  for (auto& v : x) v = p.next().steer;
  double mean = 0;
  for (double v : x) mean += v;
  mean /= n;
  double var = 0, cov = 0;
  for (int i = 0; i < n; ++i) var += (x[i] - mean) * (x[i] - mean);
  for (int i = 1; i < n; ++i) cov += (x[i] - mean) * (x[i - 1] - mean);
  const double rho = cov / var;
  EXPECT_GT(rho, 0.5);
  EXPECT_NEAR(rho, std::exp(-0.1), 0.01);
  EXPECT_NEAR(std::sqrt(var / n), 0.15, 0.15 * 0.05);
}

TEST(Unskilled, OutputStaysInPhysicalRange) {
  const auto d = straight_driver();
  UnskilledDriver u(d, {NoiseMode::White, 2.0, 2.0, 1.0, 0.1}, 3);
  sim::VehicleState s;
  s.position = {50, 0};
  s.station = 50;
  for (int i = 0; i < 1000; ++i) {
    const sim::Control c = u.control(s);
    EXPECT_LE(std::abs(c.steer), 1.0);
    EXPECT_LE(std::abs(c.pedal), 1.0);
  }
}

TEST(Unskilled, ParsesModes) {
  EXPECT_EQ(parse_noise_mode("white"), NoiseMode::White);
  EXPECT_EQ(parse_noise_mode("correlated"), NoiseMode::Correlated);
  EXPECT_THROW(parse_noise_mode("pink"), std::invalid_argument);
  EXPECT_THROW(NoiseProcess({NoiseMode::White, -0.1, 0.1, 1.0, 0.1}, 1), std::invalid_argument);
}

TEST(Datagen, SessionTicks) {
  DatagenConfig cfg;
  cfg.seeds = {1};
  EXPECT_EQ(session_ticks(cfg), 49200);
  cfg.seeds = {1, 2, 3, 4};
  EXPECT_EQ(session_ticks(cfg), 12300);
  cfg.seeds.clear();
  EXPECT_THROW(session_ticks(cfg), std::invalid_argument);
}

TEST(Datagen, OneContiguousSessionPerSeed) {
  DatagenConfig cfg;
  cfg.seeds = {21, 22, 23};
  cfg.minutes = 1.5;
  const Dataset d = generate_dataset(cfg);
  ASSERT_EQ(d.sessions.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(d.sessions[i].id, cfg.seeds[i]);
    ASSERT_EQ(d.sessions[i].steps.size(), 300u);
    for (std::size_t t = 0; t < 300; ++t) EXPECT_EQ(d.sessions[i].steps[t].tick, static_cast<int>(t));
  }
  EXPECT_EQ(d.step_count(), 900u);
  EXPECT_EQ(generate_dataset(cfg), d);
}

TEST(Dataset, TextRoundTripIsExact) {
  DatagenConfig cfg;
  cfg.seeds = {5, 6};
  cfg.minutes = 0.5;
  const Dataset d = generate_dataset(cfg);
  std::stringstream io;
  write_dataset(io, d);
  EXPECT_EQ(read_dataset(io), d);
}

TEST(Dataset, RejectsMalformedRows) {
  std::stringstream io;
  Dataset d;
  d.sessions.push_back({1, {Step{}}});
  write_dataset(io, d);
  std::string text = io.str();
  text.resize(text.size() - 5);
  std::stringstream bad(text);
  EXPECT_THROW(read_dataset(bad), std::runtime_error);
}

TEST(Dataset, ModelInputNormalizesStep) {
  Step s;
  s.ci = {0.0, 1.0};
  s.speed = 15.0;
  s.distances.fill(25.0);
  const prep::ModelInput x = model_input(s);
  EXPECT_EQ(x[0], 0.5);
  EXPECT_EQ(x[1], 1.0);
  EXPECT_EQ(x[2], 0.5);
  for (int i = 6; i < 186; ++i) EXPECT_EQ(x[static_cast<std::size_t>(i)], 0.5);
}

}  // namespace
