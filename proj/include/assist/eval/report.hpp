#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "assist/eval/closed_loop.hpp"
#include "assist/eval/welch.hpp"

namespace assist::eval {

struct Comparison {
  std::string metric;
  std::string unit;
  int n_off = 0;
  int n_on = 0;
  double mean_off = 0.0;
  double sd_off = 0.0;
  double mean_on = 0.0;
  double sd_on = 0.0;
  WelchResult welch;  // unassisted minus assisted
  bool tested = false;  // false when the test is undefined (e.g. zero variance)
};

// Rows for SDLP, SDLP (LiDAR), SM, TCT (finished runs only), ZERO, and
// frontal/side/total crashes.
std::vector<Comparison> compare(const PairedRuns& runs);

// One row per run: seed,assist,sdlp_m,sdlp_lidar_m,sm_mps,tct_s,zero_per_m,frontal,side,crashes,finished
void write_runs_csv(std::ostream& out, const PairedRuns& runs);
void write_summary(std::ostream& out, const std::vector<Comparison>& rows);

}  // namespace assist::eval
