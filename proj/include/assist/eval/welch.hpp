#pragma once

#include <span>

namespace assist::eval {

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;  // two-sided
};

// Unequal-variance two-sample t-test with Welch-Satterthwaite degrees of
// freedom. Throws std::invalid_argument when a sample has fewer than two
// values or both variances are zero.
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);
WelchResult welch_from_moments(double mean_a, double sd_a, int n_a, double mean_b, double sd_b, int n_b);

// Student t cumulative distribution.
double student_t_cdf(double t, double df);

}  // namespace assist::eval
