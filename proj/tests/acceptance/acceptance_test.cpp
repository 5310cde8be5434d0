// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <iostream>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "assist/dae/network.hpp"
#include "assist/drivers/datagen.hpp"
#include "assist/eval/closed_loop.hpp"
#include "assist/eval/report.hpp"
#include "assist/eval/welch.hpp"
#include "assist/service/blend.hpp"
#include "assist/service/pipeline.hpp"
#include "assist/service/server.hpp"
#include "assist/sim/world.hpp"
#include "assist/train/trainer.hpp"
#include "oracles.hpp"

namespace {

using namespace assist;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

int failures = 0;

void run(int id, const char* name, const std::function<Outcome()>& body) {
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::cout << (o.pass ? "PASS" : "FAIL") << ' ' << id << ' ' << name << ": " << o.detail << std::endl;
}

Outcome gradient_exactness() {
  const auto t0 = Clock::now();
  const dae::ModelDims dims = test::micro_dims();
  const dae::ModelParams p = test::random_params(dims, 2024);
  const dae::WindowInput w = test::random_window(dims, 7);
  const double err = test::max_gradient_error(w, {0.3, 0.8}, p, 1e-5);
  const double secs = seconds_since(t0);
  return {err < 1e-4 && secs < 60.0,
          fmt("%zu parameters, max relative error %.3g (limit 1e-4), %.1f s (limit 60 s)", p.parameter_count(), err,
              secs)};
}

Outcome architecture_fidelity() {
  const dae::ModelDims dims = test::micro_dims();
  dae::ModelParams p = test::random_params(dims, 5);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto rand_vec = [&](int n) {
    dae::Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = u(rng);
    return v;
  };

  // Zeroed LSTM from a zero cell state: h_t = h_{t-2} exactly.
  dae::ModelParams z = p;
  z.w_enc.setZero();
  z.b_enc.setZero();
  dae::EncoderState prev{rand_vec(dims.hidden), dae::Vector::Zero(dims.hidden), rand_vec(dims.hidden)};
  const dae::EncoderState s = dae::encoder_step(rand_vec(dims.integration), prev, z);
  const bool skip_exact = s.h == prev.h_prev;

  // No skip source: textbook LSTM.
  double lstm_err = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    dae::EncoderState q{rand_vec(dims.hidden), rand_vec(dims.hidden), dae::Vector::Zero(dims.hidden)};
    const dae::Vector r = rand_vec(dims.integration);
    const dae::EncoderState got = dae::encoder_step(r, q, p);
    const auto [h, c] = test::textbook_lstm(p.w_enc, p.b_enc, test::to_vec(q.h), test::to_vec(q.c), test::to_vec(r));
    for (int j = 0; j < dims.hidden; ++j) {
      lstm_err = std::max(lstm_err, std::abs(got.h[j] - h[static_cast<std::size_t>(j)]));
      lstm_err = std::max(lstm_err, std::abs(got.c[j] - c[static_cast<std::size_t>(j)]));
    }
  }

  // Zero parameters decode to all 0.5.
  const dae::Vector y = dae::decode(rand_vec(dims.integration), prev, dae::ModelParams::zeros(dims));
  const bool half = (y.array() == 0.5).all() && y.size() == dims.input;

  return {skip_exact && lstm_err <= 1e-12 && half,
          fmt("skip passthrough exact: %s; textbook LSTM max error %.2g (limit 1e-12); zero decode all 0.5: %s",
              skip_exact ? "yes" : "no", lstm_err, half ? "yes" : "no")};
}

std::shared_ptr<const dae::ModelParams> trained;

Outcome denoising_gain() {
  const auto t0 = Clock::now();
  drivers::DatagenConfig data_cfg;
  for (std::uint64_t s = 1; s <= 10; ++s) data_cfg.seeds.push_back(s);
  data_cfg.minutes = 30.0;
  const drivers::Dataset data = drivers::generate_dataset(data_cfg);
  const double minutes = static_cast<double>(data.step_count()) * 0.1 / 60.0;

  train::TrainConfig cfg;  // k 10, batch 64, lr 0.005 / 10 every 20 epochs, 50 epochs, sigma 0.05 / 0.2
  const train::TrainResult r = train::train(data, cfg);
  trained = std::make_shared<const dae::ModelParams>(r.best);
  const double secs = seconds_since(t0);
  const double ratio = r.best_val_mse / r.noisy_val_mse;
  const bool hyper = cfg.dims.window == 10 && cfg.batch_size == 64 && cfg.lr0 == 0.005 && cfg.lr_decay == 0.1 &&
                     cfg.decay_every == 20 && cfg.epochs == 50 && cfg.noise.sigma_steer == 0.05 &&
                     cfg.noise.sigma_pedal == 0.2;
  return {hyper && minutes >= 30.0 && ratio <= 0.5 && secs < 1800.0,
          fmt("%.1f min of data, held-out MSE(denoised, clean) %.3g vs MSE(noisy, clean) %.3g, ratio %.4f "
              "(limit 0.5), best epoch %d, %.0f s (limit 1800 s)",
              minutes, r.best_val_mse, r.noisy_val_mse, ratio, r.best_epoch, secs)};
}

Outcome closed_loop_direction() {
  if (!trained) return {false, "no trained model"};
  std::vector<std::uint64_t> seeds(20);
  std::iota(seeds.begin(), seeds.end(), 1000);
  const eval::ClosedLoopConfig cfg;
  const eval::PairedRuns runs = eval::run_paired(trained, seeds, cfg);
  const auto rows = eval::compare(runs);
  auto row = [&](const std::string& name) -> const eval::Comparison& {
    for (const auto& c : rows)
      if (c.metric == name) return c;
    throw std::runtime_error("missing row " + name);
  };
  const auto& sd = row("SDLP");
  const auto& sm = row("SM");
  const auto& cr = row("CRASH");
  const bool pass = sd.mean_on < sd.mean_off && sm.mean_on < sm.mean_off && cr.mean_on < cr.mean_off &&
                    sd.tested && sd.welch.p < 0.05 && sm.tested && sm.welch.p < 0.05;
  return {pass, fmt("%zu seeds, %s driver sigma %.2f/%.2f; SDLP %.3f -> %.3f m (p %.2g), SM %.3f -> %.3f m/s "
                    "(p %.2g), crashes %.2f -> %.2f",
                    seeds.size(), std::string(drivers::to_string(cfg.driver.mode)).c_str(), cfg.driver.sigma_steer,
                    cfg.driver.sigma_pedal, sd.mean_off, sd.mean_on, sd.welch.p, sm.mean_off, sm.mean_on,
                    sm.welch.p, cr.mean_off, cr.mean_on)};
}

std::vector<double> with_moments(double mean, double sd, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  std::vector<double> x(static_cast<std::size_t>(n));
  for (double& v : x) v = z(rng);
  const double m = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  const double s = std::sqrt(ss / (n - 1));
  for (double& v : x) v = mean + sd * (v - m) / s;
  return x;
}

Outcome statistics_validation() {
  const auto a = with_moments(1.417, 0.212, 24, 11);
  const auto b = with_moments(1.268, 0.196, 24, 12);
  const eval::WelchResult r = eval::welch_t_test(a, b);
  return {std::abs(r.t - 2.526) <= 0.01 && std::abs(r.df - 45.7) <= 0.1,
          fmt("t %.4f (2.526 +- 0.01), df %.3f (45.7 +- 0.1), p %.4f", r.t, r.df, r.p)};
}

Outcome realtime_budget() {
  if (!trained) return {false, "no trained model"};
  service::ServerConfig cfg;
  cfg.port = 0;
  cfg.session.params = trained;
  std::promise<service::SessionSummary> done;
  service::AssistServer server(cfg, [&](const service::SessionSummary& s) { done.set_value(s); });
  std::thread loop([&] { server.run(); });

  const int ticks = 3000;  // 5 minutes at 10 Hz
  int sent = 0;
  bool ended_early = false;
  double max_rtt = 0.0;
  int late_replies = 0;
  {
    service::AssistClient client("127.0.0.1", server.port());
    client.send(service::init_message({77, true, service::DriverMode::Synthetic, 6000.0}));
    service::parse_terrain_message(client.receive());
    const auto start = Clock::now();
    for (; sent < ticks; ++sent) {
      std::this_thread::sleep_until(start + std::chrono::milliseconds(100) * sent);
      const auto t0 = Clock::now();
      client.send(service::input_message({sent, 0.0, 0.0}));
      const service::StateMessage m = service::parse_state_message(client.receive());
      const double rtt = seconds_since(t0) * 1000.0;
      max_rtt = std::max(max_rtt, rtt);
      if (rtt > 100.0) ++late_replies;
      if (m.finished && sent + 1 < ticks) {
        ended_early = true;
        ++sent;
        break;
      }
    }
    client.close();
  }
  auto fut = done.get_future();
  if (fut.wait_for(std::chrono::seconds(30)) != std::future_status::ready) {
    server.stop();
    loop.join();
    return {false, "server did not report the session"};
  }
  const service::LatencyStats l = fut.get().latency;
  server.stop();
  loop.join();

  const bool pass = !ended_early && l.ticks == ticks && l.inference.max < 10.0 && l.compute.max < 50.0 &&
                    l.missed_deadlines == 0 && late_replies == 0;
  return {pass, fmt("%ld ticks over WebSocket; inference mean %.2f max %.2f ms (limit 10); "
                    "preprocess+forward+blend mean %.2f max %.2f ms (limit 50); server handling max %.2f ms, "
                    "round trip max %.2f ms, missed deadlines %ld + %d late replies (limit 0)%s",
                    l.ticks, l.inference.mean(), l.inference.max, l.compute.mean(), l.compute.max, l.total.max,
                    max_rtt, l.missed_deadlines, late_replies, ended_early ? ", terrain ended early" : "")};
}

Outcome blending_arithmetic() {
  const prep::ControlVector b = service::blend({0.6, 0.6}, {0.1, 0.1});
  const bool blend_exact = b[0] == 0.5 && b[1] == 0.5;
  const prep::ControlVector p{0.13, 0.87}, n{0.71, 0.29};
  const bool ends = service::interpolate(p, n, 0.0) == p && service::interpolate(p, n, 1.0) == n;

  // Continuity along a drive: each substep moves by exactly a fifth of the
  // tick's change, starting where the previous tick ended.
  auto model = trained ? trained : std::make_shared<const dae::ModelParams>(dae::ModelParams::glorot({}, 3));
  auto terrain = sim::make_terrain(sim::generate_terrain(1003, 1600));
  auto skilled = std::make_shared<const drivers::SkilledDriver>(terrain);
  drivers::UnskilledDriver driver(skilled, drivers::kEvaluationDriver, drivers::driver_seed(1003));
  sim::World world(terrain);
  service::AssistPipeline pipeline(model, true);
  std::optional<sim::Control> last;
  double worst_excess = 0.0, max_jump = 0.0;
  int ticks = 0;
  for (; ticks < 1500 && !world.finished(); ++ticks) {
    const sim::VehicleState s = world.state();
    const service::PipelineOutput out = pipeline.process(driver.control(s), s, world.scan(16));
    const sim::Control target = prep::denormalize_ci(out.applied);
    const sim::Control from = last.value_or(out.profile.front());
    const double bound_s = std::abs(target.steer - from.steer) / 5.0, bound_p = std::abs(target.pedal - from.pedal) / 5.0;
    sim::Control prev = from;
    for (const sim::Control& c : out.profile) {
      worst_excess = std::max({worst_excess, std::abs(c.steer - prev.steer) - bound_s,
                               std::abs(c.pedal - prev.pedal) - bound_p});
      max_jump = std::max({max_jump, std::abs(c.steer - prev.steer), std::abs(c.pedal - prev.pedal)});
      prev = c;
    }
    worst_excess = std::max({worst_excess, std::abs(prev.steer - target.steer), std::abs(prev.pedal - target.pedal)});
    last = prev;
    world.step(out.profile);
  }
  const bool continuous = worst_excess <= 1e-12;
  return {blend_exact && ends && continuous,
          fmt("blend((0.6,0.6),(0.1,0.1)) = (%.17g, %.17g); endpoints exact: %s; %d ticks, substep step "
              "exceeds a fifth of the tick change by at most %.2g (limit 1e-12), largest substep jump %.3f",
              b[0], b[1], ends ? "yes" : "no", ticks, worst_excess, max_jump)};
}

Outcome determinism() {
  drivers::DatagenConfig dc;
  dc.seeds = {31, 32, 33};
  dc.minutes = 3.0;
  const drivers::Dataset d1 = drivers::generate_dataset(dc), d2 = drivers::generate_dataset(dc);
  std::ostringstream s1, s2;
  drivers::write_dataset(s1, d1);
  drivers::write_dataset(s2, d2);
  const bool data_same = d1 == d2 && s1.str() == s2.str();

  train::TrainConfig tc;
  tc.epochs = 3;
  const train::TrainResult r1 = train::train(d1, tc), r2 = train::train(d2, tc);
  double hist_diff = 0.0;
  for (std::size_t e = 0; e < r1.history.size(); ++e)
    hist_diff = std::max({hist_diff, std::abs(r1.history[e].train_mse - r2.history[e].train_mse),
                          std::abs(r1.history[e].val_mse - r2.history[e].val_mse)});
  const bool hist_same = r1.history.size() == r2.history.size() && hist_diff <= 1e-10 && r1.best == r2.best;

  auto model = std::make_shared<const dae::ModelParams>(r1.best);
  const eval::ClosedLoopConfig cfg;
  bool logs_same = true;
  for (bool assist : {false, true})
    logs_same = logs_same && eval::closed_loop_run(model, 1005, cfg, assist) == eval::closed_loop_run(model, 1005, cfg, assist);
  const std::vector<std::uint64_t> seeds{1006, 1007};
  std::ostringstream p1, p2;
  eval::write_runs_csv(p1, eval::run_paired(model, seeds, cfg));
  eval::write_runs_csv(p2, eval::run_paired_serial(model, seeds, cfg));
  const bool parallel_same = p1.str() == p2.str();

  return {data_same && hist_same && logs_same && parallel_same,
          fmt("datasets bit-identical: %s (%zu steps); loss histories max difference %.3g (limit 1e-10); "
              "closed-loop logs identical: %s; parallel and serial evaluation identical: %s",
              data_same ? "yes" : "no", d1.step_count(), hist_diff, logs_same ? "yes" : "no",
              parallel_same ? "yes" : "no")};
}

}  // namespace

int main() {
  run(1, "gradient exactness", gradient_exactness);
  run(2, "architecture fidelity", architecture_fidelity);
  run(3, "denoising gain", denoising_gain);
  run(4, "closed-loop direction", closed_loop_direction);
  run(5, "statistics validation", statistics_validation);
  run(6, "real-time budget", realtime_budget);
  run(7, "blending and interpolation", blending_arithmetic);
  run(8, "determinism", determinism);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
