#include "assist/eval/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace assist::eval {
namespace {

template <typename Fn>
std::vector<double> series(const DriveLog& log, Fn&& fn) {
  std::vector<double> out;
  out.reserve(log.records.size());
  for (const auto& r : log.records) out.push_back(fn(r));
  return out;
}

}  // namespace

double sample_sd(std::span<const double> values) {
  if (values.size() < 2) throw std::invalid_argument("sample SD needs at least 2 values");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double sdlp(const DriveLog& log, bool lidar) {
  return sample_sd(series(log, [lidar](const LogRecord& r) { return lidar ? r.offset.lidar : r.offset.geometric; }));
}

double speed_maintenance(const DriveLog& log) {
  return sample_sd(series(log, [](const LogRecord& r) { return r.state.speed; }));
}

double tct(const DriveLog& log) {
  if (!log.finished || log.records.empty()) throw std::runtime_error("tct: run did not reach the end of the terrain");
  return (log.records.back().tick - log.records.front().tick) * log.tick_seconds;
}

double zero_crossings(std::span<const double> steering, double distance_m) {
  if (!(distance_m > 0.0)) throw std::invalid_argument("zero crossings need a positive distance");
  int sign = 0;
  int changes = 0;
  for (double s : steering) {
    const int now = s > 0.0 ? 1 : (s < 0.0 ? -1 : sign);
    if (sign != 0 && now != sign) ++changes;
    sign = now;
  }
  return changes / distance_m;
}

double zero_crossings(const DriveLog& log) {
  return zero_crossings(series(log, [](const LogRecord& r) { return r.applied.steer; }), log.distance);
}

CrashCounts count_crashes(const DriveLog& log) {
  CrashCounts c;
  for (const auto& r : log.records)
    for (const auto& e : r.events) (e.kind == sim::CrashKind::Frontal ? c.frontal : c.side)++;
  return c;
}

MetricsReport compute_metrics(const DriveLog& log) {
  MetricsReport m;
  m.sdlp = sdlp(log);
  m.sdlp_lidar = sdlp(log, true);
  m.sm = speed_maintenance(log);
  m.finished = log.finished;
  m.tct = log.finished ? tct(log) : std::numeric_limits<double>::quiet_NaN();
  m.zero = log.distance > 0.0 ? zero_crossings(log) : 0.0;
  m.crashes = count_crashes(log);
  return m;
}

}  // namespace assist::eval
