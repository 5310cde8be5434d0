#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <boost/asio/io_context.hpp>
#include <boost/asio/signal_set.hpp>
#include <CLI11.hpp>

#include "assist/dae/checkpoint.hpp"
#include "assist/drivers/datagen.hpp"
#include "assist/drivers/dataset.hpp"
#include "assist/eval/closed_loop.hpp"
#include "assist/eval/report.hpp"
#include "assist/service/server.hpp"
#include "assist/sim/terrain.hpp"
#include "assist/train/trainer.hpp"

namespace {

using namespace assist;

std::uint64_t parse_u64(std::string_view s) {
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw std::invalid_argument("bad seed: " + std::string(s));
  return v;
}

// "1,2,3", "100..119" (inclusive) or a mix such as "1,5..8".
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string_view item(text.data() + start, comma - start);
    const std::size_t dots = item.find("..");
    if (dots == std::string_view::npos) {
      seeds.push_back(parse_u64(item));
    } else {
      const std::uint64_t lo = parse_u64(item.substr(0, dots));
      const std::uint64_t hi = parse_u64(item.substr(dots + 2));
      if (hi < lo) throw std::invalid_argument("empty seed range: " + std::string(item));
      for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    }
    start = comma + 1;
  }
  if (seeds.empty()) throw std::invalid_argument("no seeds given");
  return seeds;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

int gen_data(const std::string& seeds, double minutes, const std::string& out_path) {
  drivers::DatagenConfig cfg;
  cfg.seeds = parse_seeds(seeds);
  cfg.minutes = minutes;
  const drivers::Dataset data = drivers::generate_dataset(cfg);
  drivers::save_dataset(out_path, data);
  std::cerr << "wrote " << data.sessions.size() << " sessions, " << data.step_count() << " steps to " << out_path
            << '\n';
  return 0;
}

int train_model(const std::string& data_path, const std::string& out_path, const train::TrainConfig& cfg,
                const std::string& history_path) {
  const drivers::Dataset data = drivers::load_dataset(data_path);
  std::cout << "epoch,lr,train_mse,val_mse\n";
  const train::TrainResult r = train::train(data, cfg, [](const train::EpochRecord& e) {
    std::cout << e.epoch << ',' << e.lr << ',' << e.train_mse << ',' << e.val_mse << std::endl;
  });
  dae::save_checkpoint(out_path, r.best);
  if (!history_path.empty()) {
    auto out = open_out(history_path);
    train::write_history(out, r.history);
  }
  std::cerr << "best epoch " << r.best_epoch << " val_mse " << r.best_val_mse << " (noisy input " << r.noisy_val_mse
            << "), checkpoint " << out_path << '\n';
  return 0;
}

int evaluate(const std::string& ckpt, const std::string& seeds, const std::string& driver,
             const drivers::UnskilledConfig& noise, const std::string& report_path, bool serial) {
  auto params = std::make_shared<const dae::ModelParams>(dae::load_checkpoint(ckpt));
  eval::ClosedLoopConfig cfg;
  cfg.driver = noise;
  cfg.driver.mode = drivers::parse_noise_mode(driver);
  const auto list = parse_seeds(seeds);
  const eval::PairedRuns runs =
      serial ? eval::run_paired_serial(params, list, cfg) : eval::run_paired(params, list, cfg);
  const auto rows = eval::compare(runs);
  if (!report_path.empty()) {
    auto out = open_out(report_path);
    eval::write_runs_csv(out, runs);
  }
  eval::write_summary(std::cout, rows);
  return 0;
}

int export_terrain(std::uint64_t seed, double length, const std::string& out_path) {
  const sim::TerrainSpec spec = sim::generate_terrain(seed, length);
  if (out_path == "-") {
    sim::write_terrain(std::cout, spec);
  } else {
    auto out = open_out(out_path);
    sim::write_terrain(out, spec);
  }
  return 0;
}

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

int serve(std::string ckpt, int port, const std::string& address) {
  // Flags win over the environment, which wins over the defaults.
  if (ckpt.empty()) ckpt = env_or("ASSIST_CKPT", "");
  if (port < 0) port = std::stoi(env_or("ASSIST_PORT", "8765"));
  if (port > 65535) throw std::invalid_argument("port out of range");

  service::ServerConfig cfg;
  cfg.address = address;
  cfg.port = static_cast<std::uint16_t>(port);
  if (!ckpt.empty()) {
    cfg.session.params = std::make_shared<const dae::ModelParams>(dae::load_checkpoint(ckpt));
  } else {
    std::cerr << "no checkpoint given; assisted sessions will be refused\n";
  }
  service::AssistServer server(cfg, [](const service::SessionSummary& s) {
    const auto& l = s.latency;
    std::cerr << "session closed (" << s.close_reason << "): " << l.ticks << " ticks, inference mean "
              << l.inference.mean() << " ms max " << l.inference.max << " ms, total mean " << l.total.mean()
              << " ms max " << l.total.max << " ms, missed deadlines " << l.missed_deadlines << '\n';
  });

  boost::asio::io_context signals_ioc;
  boost::asio::signal_set signals(signals_ioc, SIGINT, SIGTERM);
  signals.async_wait([&](const boost::system::error_code&, int) { server.stop(); });
  std::thread signal_thread([&] { signals_ioc.run(); });

  std::cerr << "listening on ws://" << address << ':' << server.port() << '\n';
  server.run();
  signals_ioc.stop();
  signal_thread.join();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Driving assistance: data generation, training, evaluation and the live service"};
  app.require_subcommand(1);

  std::string seeds, out, data, ckpt, report, history, driver = "correlated", address = "127.0.0.1";
  double minutes = 82.0, length = 1600.0;
  std::uint64_t seed = 1;
  int port = -1;
  bool serial = false;
  train::TrainConfig tcfg;
  drivers::UnskilledConfig noise = drivers::kEvaluationDriver;

  auto* gen = app.add_subcommand("gen-data", "Record skilled-driver sessions");
  gen->add_option("--seeds", seeds, "Terrain seeds, e.g. 1,2,3 or 1..12")->required();
  gen->add_option("--minutes", minutes, "Total minutes across all seeds")->check(CLI::PositiveNumber);
  gen->add_option("--out", out, "Dataset CSV")->required();

  auto* tr = app.add_subcommand("train", "Train the denoising autoencoder");
  tr->add_option("--data", data, "Dataset CSV")->required();
  tr->add_option("--out", out, "Checkpoint path")->required();
  tr->add_option("--seed", tcfg.seed, "Initialization and noise seed");
  tr->add_option("--epochs", tcfg.epochs)->check(CLI::PositiveNumber);
  tr->add_option("--batch", tcfg.batch_size)->check(CLI::PositiveNumber);
  tr->add_option("--lr", tcfg.lr0, "Initial learning rate")->check(CLI::PositiveNumber);
  tr->add_option("--history", history, "Also write the loss table to this file");

  auto* ev = app.add_subcommand("eval", "Paired closed-loop runs, assist off vs on");
  ev->add_option("--ckpt", ckpt, "Checkpoint path")->required();
  ev->add_option("--seeds", seeds, "Terrain seeds, e.g. 100..119")->required();
  ev->add_option("--driver", driver, "Noise mode: white or correlated");
  ev->add_option("--sigma-steer", noise.sigma_steer)->check(CLI::NonNegativeNumber);
  ev->add_option("--sigma-pedal", noise.sigma_pedal)->check(CLI::NonNegativeNumber);
  ev->add_option("--tau", noise.tau, "Correlation time, seconds")->check(CLI::PositiveNumber);
  ev->add_option("--report", report, "Per-run CSV");
  ev->add_flag("--serial", serial, "Use the single-threaded reference runner");

  auto* ex = app.add_subcommand("export-terrain", "Write a terrain file for the browser client");
  ex->add_option("--seed", seed)->required();
  ex->add_option("--length", length, "Meters")->check(CLI::PositiveNumber);
  ex->add_option("--out", out, "Output path, - for stdout")->required();

  auto* sv = app.add_subcommand("serve", "Run the WebSocket assistance service");
  sv->add_option("--ckpt", ckpt, "Checkpoint path (env ASSIST_CKPT)");
  sv->add_option("--port", port, "TCP port, 0 for any (env ASSIST_PORT, default 8765)")->check(CLI::Range(0, 65535));
  sv->add_option("--address", address, "Bind address");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*gen) return gen_data(seeds, minutes, out);
    if (*tr) return train_model(data, out, tcfg, history);
    if (*ev) return evaluate(ckpt, seeds, driver, noise, report, serial);
    if (*ex) return export_terrain(seed, length, out);
    if (*sv) return serve(ckpt, port, address);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
