#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "assist/train/adam.hpp"
#include "assist/train/trainer.hpp"
#include "assist/train/windows.hpp"
#include "oracles.hpp"

namespace {

using namespace assist;
using namespace assist::train;

// Smooth synthetic driving: slowly varying controls, speed and distances.
drivers::Session synthetic_session(std::uint64_t id, int steps) {
  drivers::Session s;
  s.id = id;
  const double phase = static_cast<double>(id);
  for (int t = 0; t < steps; ++t) {
    drivers::Step st;
    st.tick = t;
    const double u = 0.05 * t + phase;
    st.ci = {0.4 * std::sin(u), 0.3 + 0.3 * std::cos(0.7 * u)};
    st.speed = 10.0 + 3.0 * std::sin(0.3 * u);
    st.yaw = std::fmod(0.02 * t + phase, 3.0);
    for (int i = 0; i < 180; ++i) st.distances[static_cast<std::size_t>(i)] = 10.0 + 8.0 * std::sin(0.05 * i + u);
    s.steps.push_back(st);
  }
  return s;
}

drivers::Dataset synthetic_dataset(int sessions, int steps) {
  drivers::Dataset d;
  for (int i = 0; i < sessions; ++i) d.sessions.push_back(synthetic_session(static_cast<std::uint64_t>(i + 1), steps));
  return d;
}

TrainConfig small_config() {
  TrainConfig cfg;
  cfg.dims = test::micro_dims();
  cfg.batch_size = 16;
  cfg.epochs = 6;
  cfg.decay_every = 4;
  return cfg;
}

TEST(LrSchedule, DecaysTenfoldEveryTwentyEpochs) {
  const TrainConfig cfg;
  EXPECT_DOUBLE_EQ(lr_schedule(0, cfg), 0.005);
  EXPECT_DOUBLE_EQ(lr_schedule(19, cfg), 0.005);
  EXPECT_DOUBLE_EQ(lr_schedule(20, cfg), 0.0005);
  EXPECT_DOUBLE_EQ(lr_schedule(40, cfg), 0.00005);
  EXPECT_DOUBLE_EQ(lr_schedule(49, cfg), 0.00005);
  EXPECT_THROW(lr_schedule(-1, cfg), std::invalid_argument);
}

TEST(InjectNoise, ZeroVarianceIsIdentity) {
  const dae::WindowInput w = test::random_window(test::micro_dims(), 1);
  std::mt19937_64 rng(2);
  EXPECT_EQ(inject_noise(w, NoiseSpec{0.0, 0.0}, rng), w);
}

TEST(InjectNoise, OnlyLastControlPairChanges) {
  const dae::WindowInput w = test::random_window(test::micro_dims(), 3);
  std::mt19937_64 rng(4);
  const dae::WindowInput n = inject_noise(w, NoiseSpec{}, rng);
  EXPECT_EQ(n.topRows(w.rows() - 1), w.topRows(w.rows() - 1));
  EXPECT_EQ(n.row(w.rows() - 1).tail(184), w.row(w.rows() - 1).tail(184));
  EXPECT_NE(n(w.rows() - 1, 0), w(w.rows() - 1, 0));
  for (int j = 0; j < 2; ++j) {
    EXPECT_GE(n(w.rows() - 1, j), 0.0);
    EXPECT_LE(n(w.rows() - 1, j), 1.0);
  }
}

TEST(InjectNoise, DrawsHaveTheConfiguredSpread) {
  NoiseInjector noise(NoiseSpec{0.05, 0.2});
  std::mt19937_64 rng(5);
  const int n = 100000;
  double ss = 0, sp = 0, ms = 0, mp = 0;
  std::vector<std::pair<double, double>> d(n);
  for (auto& x : d) x = noise.draw(rng);
  for (const auto& [s, p] : d) {
    ms += s;
    mp += p;
  }
  ms /= n;
  mp /= n;
  for (const auto& [s, p] : d) {
    ss += (s - ms) * (s - ms);
    sp += (p - mp) * (p - mp);
  }
  EXPECT_NEAR(std::sqrt(ss / (n - 1)), 0.05, 0.02 * 0.05);
  EXPECT_NEAR(std::sqrt(sp / (n - 1)), 0.2, 0.02 * 0.2);
}

TEST(MakeWindows, CountsPerSession) {
  drivers::Dataset d;
  d.sessions.push_back(synthetic_session(1, 12));
  EXPECT_EQ(make_windows(d, 10).size(), 3u);
  d.sessions[0] = synthetic_session(1, 9);
  EXPECT_EQ(make_windows(d, 10).size(), 0u);
}

TEST(MakeWindows, PaperScaleSession) {
  drivers::Dataset d;
  d.sessions.push_back(synthetic_session(1, 48965));
  EXPECT_EQ(WindowSet(d, 10).size(), 48956u);
}

TEST(MakeWindows, NeverCrossSessions) {
  const drivers::Dataset d = synthetic_dataset(3, 15);
  const auto windows = make_windows(d, 10);
  ASSERT_EQ(windows.size(), 18u);
  // Window 6 is the first of session 2 and must start at its first step.
  const prep::ModelInput first = drivers::model_input(d.sessions[1].steps[0]);
  for (int j = 0; j < 186; ++j) EXPECT_EQ(windows[6].first(0, j), first[static_cast<std::size_t>(j)]);
}

TEST(MakeWindows, TargetIsCleanLastControl) {
  const drivers::Dataset d = synthetic_dataset(1, 14);
  const WindowSet set(d, 10);
  const auto pairs = make_windows(d, 10);
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto& last = d.sessions[0].steps[i + 9];
    EXPECT_EQ(set.target(i), prep::normalize_ci(last.ci));
    EXPECT_EQ(pairs[i].second, set.target(i));
    EXPECT_EQ(set.input(i), pairs[i].first);
    for (int t = 0; t < 10; ++t) {
      const prep::ModelInput x = drivers::model_input(d.sessions[0].steps[i + static_cast<std::size_t>(t)]);
      for (int j = 0; j < 186; ++j) EXPECT_EQ(set.input(i)(t, j), x[static_cast<std::size_t>(j)]);
    }
  }
}

TEST(FillBatch, NoiseIsFreshEachTimeButTargetsAreFixed) {
  const drivers::Dataset d = synthetic_dataset(2, 30);
  const WindowSet set(d, 10);
  const std::vector<std::size_t> idx{0, 5, 11, 20};
  NoiseInjector noise;
  std::mt19937_64 rng(6);
  dae::Batch a, b, clean;
  set.fill_batch(idx, &noise, &rng, a);
  set.fill_batch(idx, &noise, &rng, b);
  set.fill_batch(idx, nullptr, nullptr, clean);
  EXPECT_EQ(a.targets, b.targets);
  EXPECT_EQ(a.targets, clean.targets);
  const Eigen::Index last = 9 * 4;
  EXPECT_NE(a.inputs.middleCols(last, 4), b.inputs.middleCols(last, 4));
  EXPECT_EQ(a.inputs.leftCols(last), clean.inputs.leftCols(last));
  EXPECT_EQ(a.inputs.middleCols(last, 4).bottomRows(184), clean.inputs.middleCols(last, 4).bottomRows(184));
  for (std::size_t i = 0; i < idx.size(); ++i)
    EXPECT_EQ(clean.window(static_cast<int>(i), 10), set.input(idx[i]));
}

TEST(Split, HoldsOutTrailingSessions) {
  const drivers::Dataset d = synthetic_dataset(12, 20);
  const DataSplit s = split_sessions(d, 0.1);
  ASSERT_EQ(s.validation.size(), 2u);
  EXPECT_EQ(s.train.size(), 10u);
  EXPECT_EQ(s.validation[0].id, 11u);
}

TEST(Split, FewSessionsSplitEachTail) {
  const drivers::Dataset d = synthetic_dataset(2, 100);
  const DataSplit s = split_sessions(d, 0.1);
  ASSERT_EQ(s.validation.size(), 2u);
  EXPECT_EQ(s.train[0].steps.size(), 90u);
  EXPECT_EQ(s.validation[0].steps.size(), 10u);
  EXPECT_EQ(s.validation[0].steps[0].tick, 90);
}

TEST(Adam, FirstStepMovesByLearningRate) {
  const dae::ModelDims dims = test::micro_dims();
  dae::ModelParams p = dae::ModelParams::zeros(dims);
  dae::ModelParams g = dae::ModelParams::zeros(dims);
  g.b_m[0] = 3.0;
  g.b_m[1] = -1e-3;
  Adam opt(dims);
  opt.step(p, g, 0.01);
  // Bias correction makes the first update lr * sign(g) up to epsilon.
  EXPECT_NEAR(p.b_m[0], -0.01, 1e-9);
  EXPECT_NEAR(p.b_m[1], 0.01, 1e-7);
  EXPECT_EQ(p.b_m[2], 0.0);
}

TEST(Adam, MatchesScalarRecurrence) {
  const dae::ModelDims dims = test::micro_dims();
  dae::ModelParams p = dae::ModelParams::zeros(dims);
  dae::ModelParams g = dae::ModelParams::zeros(dims);
  Adam opt(dims);
  double x = 0.0, m = 0.0, v = 0.0;
  for (int t = 1; t <= 5; ++t) {
    const double grad = 0.5 * t - 1.0;
    g.b_d1[0] = grad;
    opt.step(p, g, 0.02);
    m = 0.9 * m + 0.1 * grad;
    v = 0.999 * v + 0.001 * grad * grad;
    const double mh = m / (1.0 - std::pow(0.9, t));
    const double vh = v / (1.0 - std::pow(0.999, t));
    x -= 0.02 * mh / (std::sqrt(vh) + 1e-8);
    EXPECT_NEAR(p.b_d1[0], x, 1e-15);
  }
}

TEST(Train, SameSeedGivesIdenticalHistories) {
  const drivers::Dataset d = synthetic_dataset(2, 120);
  const TrainResult a = train::train(d, small_config());
  const TrainResult b = train::train(d, small_config());
  ASSERT_EQ(a.history.size(), 6u);
  for (std::size_t e = 0; e < a.history.size(); ++e) {
    EXPECT_EQ(a.history[e].train_mse, b.history[e].train_mse);
    EXPECT_EQ(a.history[e].val_mse, b.history[e].val_mse);
    EXPECT_EQ(a.history[e].lr, lr_schedule(static_cast<int>(e), small_config()));
  }
  EXPECT_EQ(a.best, b.best);
}

TEST(Train, LossDecreasesAndBestEpochIsKept) {
  const drivers::Dataset d = synthetic_dataset(2, 200);
  TrainConfig cfg = small_config();
  cfg.epochs = 10;
  std::vector<EpochRecord> seen;
  const TrainResult r = train::train(d, cfg, [&](const EpochRecord& e) { seen.push_back(e); });
  ASSERT_EQ(seen.size(), 10u);
  EXPECT_LT(r.history.back().train_mse, r.history.front().train_mse);
  double best = r.history.front().val_mse;
  for (const auto& e : r.history) best = std::min(best, e.val_mse);
  EXPECT_EQ(r.best_val_mse, best);
  EXPECT_EQ(r.history[static_cast<std::size_t>(r.best_epoch - 1)].val_mse, best);
  EXPECT_GT(r.noisy_val_mse, 0.005);
}

TEST(Train, HistoryTableFormat) {
  std::ostringstream out;
  write_history(out, {{1, 0.005, 0.25, 0.125}, {2, 0.005, 0.2, 0.1}});
  EXPECT_EQ(out.str(), "epoch,lr,train_mse,val_mse\n1,0.005,0.25,0.125\n2,0.005,0.2,0.1\n");
}

TEST(Train, RejectsTooLittleData) {
  EXPECT_THROW(train::train(synthetic_dataset(1, 12), small_config()), std::invalid_argument);
}

}  // namespace
