#include "assist/eval/report.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <stdexcept>

namespace assist::eval {
namespace {

using Getter = std::function<double(const MetricsReport&)>;

void moments(const std::vector<double>& x, double& mean, double& sd) {
  mean = 0.0;
  for (double v : x) mean += v;
  mean = x.empty() ? 0.0 : mean / static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  sd = x.size() > 1 ? std::sqrt(ss / static_cast<double>(x.size() - 1)) : 0.0;
}

Comparison row(const std::string& name, const std::string& unit, const PairedRuns& runs, const Getter& get,
               bool finished_only) {
  std::vector<double> off, on;
  for (const auto& m : runs.unassisted)
    if (!finished_only || m.finished) off.push_back(get(m));
  for (const auto& m : runs.assisted)
    if (!finished_only || m.finished) on.push_back(get(m));
  Comparison c;
  c.metric = name;
  c.unit = unit;
  c.n_off = static_cast<int>(off.size());
  c.n_on = static_cast<int>(on.size());
  moments(off, c.mean_off, c.sd_off);
  moments(on, c.mean_on, c.sd_on);
  try {
    c.welch = welch_t_test(off, on);
    c.tested = true;
  } catch (const std::invalid_argument&) {
    c.tested = false;
  }
  return c;
}

}  // namespace

std::vector<Comparison> compare(const PairedRuns& runs) {
  return {
      row("SDLP", "m", runs, [](const MetricsReport& m) { return m.sdlp; }, false),
      row("SDLP_LIDAR", "m", runs, [](const MetricsReport& m) { return m.sdlp_lidar; }, false),
      row("SM", "m/s", runs, [](const MetricsReport& m) { return m.sm; }, false),
      row("TCT", "s", runs, [](const MetricsReport& m) { return m.tct; }, true),
      row("ZERO", "1/m", runs, [](const MetricsReport& m) { return m.zero; }, false),
      row("CRASH_FRONTAL", "count", runs, [](const MetricsReport& m) { return double(m.crashes.frontal); }, false),
      row("CRASH_SIDE", "count", runs, [](const MetricsReport& m) { return double(m.crashes.side); }, false),
      row("CRASH", "count", runs, [](const MetricsReport& m) { return double(m.crashes.total()); }, false),
  };
}

void write_runs_csv(std::ostream& out, const PairedRuns& runs) {
  out << "seed,assist,sdlp_m,sdlp_lidar_m,sm_mps,tct_s,zero_per_m,frontal,side,crashes,finished\n";
  char buf[256];
  auto emit = [&](std::uint64_t seed, bool assist, const MetricsReport& m) {
    std::snprintf(buf, sizeof(buf), "%llu,%d,%.6f,%.6f,%.6f,%.1f,%.6f,%d,%d,%d,%d\n",
                  static_cast<unsigned long long>(seed), assist ? 1 : 0, m.sdlp, m.sdlp_lidar, m.sm, m.tct, m.zero,
                  m.crashes.frontal, m.crashes.side, m.crashes.total(), m.finished ? 1 : 0);
    out << buf;
  };
  for (std::size_t i = 0; i < runs.seeds.size(); ++i) {
    emit(runs.seeds[i], false, runs.unassisted[i]);
    emit(runs.seeds[i], true, runs.assisted[i]);
  }
}

void write_summary(std::ostream& out, const std::vector<Comparison>& rows) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-14s %-6s %18s %18s %9s %7s %9s\n", "metric", "unit", "unassisted", "assisted",
                "t", "df", "p");
  out << buf;
  for (const auto& c : rows) {
    std::snprintf(buf, sizeof(buf), "%-14s %-6s %8.3f (%7.3f) %8.3f (%7.3f) ", c.metric.c_str(), c.unit.c_str(),
                  c.mean_off, c.sd_off, c.mean_on, c.sd_on);
    out << buf;
    if (c.tested) {
      std::snprintf(buf, sizeof(buf), "%9.3f %7.1f %9.4f\n", c.welch.t, c.welch.df, c.welch.p);
    } else {
      std::snprintf(buf, sizeof(buf), "%9s %7s %9s\n", "-", "-", "-");
    }
    out << buf;
  }
}

}  // namespace assist::eval
