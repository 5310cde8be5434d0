#include "assist/eval/welch.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

namespace assist::eval {

double student_t_cdf(double t, double df) {
  if (!(df > 0.0)) throw std::invalid_argument("student_t_cdf: df must be positive");
  return boost::math::cdf(boost::math::students_t_distribution<double>(df), t);
}

WelchResult welch_from_moments(double mean_a, double sd_a, int n_a, double mean_b, double sd_b, int n_b) {
  if (n_a < 2 || n_b < 2) throw std::invalid_argument("welch: each sample needs at least 2 values");
  const double va = sd_a * sd_a / n_a;
  const double vb = sd_b * sd_b / n_b;
  if (!(va + vb > 0.0)) throw std::invalid_argument("welch: both samples have zero variance");
  WelchResult r;
  r.t = (mean_a - mean_b) / std::sqrt(va + vb);
  r.df = (va + vb) * (va + vb) / (va * va / (n_a - 1) + vb * vb / (n_b - 1));
  r.p = 2.0 * boost::math::cdf(boost::math::complement(boost::math::students_t_distribution<double>(r.df), std::abs(r.t)));
  return r;
}

WelchResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw std::invalid_argument("welch: each sample needs at least 2 values");
  auto moments = [](std::span<const double> x, double& mean, double& sd) {
    mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    sd = std::sqrt(ss / static_cast<double>(x.size() - 1));
  };
  double ma, sa, mb, sb;
  moments(a, ma, sa);
  moments(b, mb, sb);
  return welch_from_moments(ma, sa, static_cast<int>(a.size()), mb, sb, static_cast<int>(b.size()));
}

}  // namespace assist::eval
