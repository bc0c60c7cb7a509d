#include "hqc/error_profile.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace hqc {

namespace {

void check_domain(double a, double b, int grid_size) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(b > a)) {
    throw std::domain_error("profile domain needs finite b > a");
  }
  if (grid_size < 2) {
    throw std::domain_error("profile grid needs at least 2 samples");
  }
}

// Trapezoid line average on the closed uniform grid: interior samples get
// full weight, endpoints half.  Normalizing by (n-1) full weights turns
// the trapezoid integral into the average.
double trapezoid_mean(const std::vector<double>& samples) {
  const std::size_t n = samples.size();
  double sum = 0.5 * (samples.front() + samples.back());
  for (std::size_t k = 1; k + 1 < n; ++k) sum += samples[k];
  return sum / static_cast<double>(n - 1);
}

void subtract_trapezoid_mean(std::vector<double>& samples) {
  for (int pass = 0; pass < 2; ++pass) {
    const double m = trapezoid_mean(samples);
    for (double& v : samples) v -= m;
  }
}

}  // namespace

ErrorProfile::ErrorProfile(double a, double b, std::vector<double> samples,
                           Generator g, bool zero_mean)
    : a_(a), b_(b), samples_(std::move(samples)), generator_(g),
      zero_mean_(zero_mean) {}

ErrorProfile ErrorProfile::constant(double a, double b, double value,
                                    int grid_size) {
  check_domain(a, b, grid_size);
  if (!std::isfinite(value)) {
    throw std::domain_error("constant profile value must be finite");
  }
  return ErrorProfile(a, b, std::vector<double>(grid_size, value),
                      Generator::Constant, false);
}

ErrorProfile ErrorProfile::sinusoid(double a, double b, double amplitude,
                                    int periods, double phase, int grid_size) {
  check_domain(a, b, grid_size);
  if (!std::isfinite(amplitude) || !std::isfinite(phase)) {
    throw std::domain_error("sinusoid parameters must be finite");
  }
  if (periods < 1) {
    throw std::domain_error("sinusoid needs at least one full period");
  }
  std::vector<double> samples(grid_size);
  const double w = 2.0 * std::numbers::pi * periods / (b - a);
  const double h = (b - a) / (grid_size - 1);
  for (int k = 0; k < grid_size; ++k) {
    samples[k] = amplitude * std::sin(w * (k * h) + phase);
  }
  return ErrorProfile(a, b, std::move(samples), Generator::Sinusoid, false);
}

ErrorProfile ErrorProfile::random_uniform(double a, double b, double scale,
                                          std::uint64_t seed, int grid_size,
                                          bool zero_mean) {
  check_domain(a, b, grid_size);
  if (!std::isfinite(scale) || scale < 0.0) {
    throw std::domain_error("random profile scale must be non-negative");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-scale, scale);
  std::vector<double> samples(grid_size);
  for (double& v : samples) v = dist(rng);
  if (zero_mean) subtract_trapezoid_mean(samples);
  return ErrorProfile(a, b, std::move(samples), Generator::RandomUniform,
                      zero_mean);
}

ErrorProfile ErrorProfile::random_gaussian(double a, double b, double scale,
                                           std::uint64_t seed, int grid_size,
                                           bool zero_mean) {
  check_domain(a, b, grid_size);
  if (!std::isfinite(scale) || scale < 0.0) {
    throw std::domain_error("random profile scale must be non-negative");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, scale);
  std::vector<double> samples(grid_size);
  if (scale > 0.0) {
    for (double& v : samples) v = dist(rng);
  }
  if (zero_mean) subtract_trapezoid_mean(samples);
  return ErrorProfile(a, b, std::move(samples), Generator::RandomGaussian,
                      zero_mean);
}

ErrorProfile ErrorProfile::custom(double a, double b,
                                  std::vector<double> samples) {
  check_domain(a, b, samples.size() > 1 ? static_cast<int>(samples.size()) : 1);
  for (double v : samples) {
    if (!std::isfinite(v)) {
      throw std::domain_error("custom profile samples must be finite");
    }
  }
  return ErrorProfile(a, b, std::move(samples), Generator::Custom, false);
}

double ErrorProfile::mean() const { return trapezoid_mean(samples_); }

double ErrorProfile::value_at(double s) const {
  const double slack = 1e-9 * std::max(1.0, std::abs(b_ - a_));
  if (s < a_ - slack || s > b_ + slack) {
    throw std::domain_error("profile evaluated outside its domain");
  }
  const double h = grid_step();
  const double t = (s - a_) / h;
  const int n = grid_size();
  int k = static_cast<int>(std::floor(t));
  if (k < 0) k = 0;
  if (k > n - 2) k = n - 2;
  const double frac = t - k;
  return samples_[k] + frac * (samples_[k + 1] - samples_[k]);
}

ErrorProfile ErrorProfile::shifted_to_zero_mean() const {
  std::vector<double> shifted = samples_;
  subtract_trapezoid_mean(shifted);
  return ErrorProfile(a_, b_, std::move(shifted), generator_, true);
}

}  // namespace hqc
