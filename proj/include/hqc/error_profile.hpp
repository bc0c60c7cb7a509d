#pragma once

#include <cstdint>
#include <vector>

namespace hqc {

/// Sampled squeezing-control error along one displacement edge: values of
/// the squeezing offset on a uniform closed grid over [a, b].  Integrals of
/// the profile use the trapezoid rule on that grid, and "zero mean" always
/// means the trapezoid line average (integral / length), not the arithmetic
/// sample mean -- the two differ at the endpoints and only the former keeps
/// integral identities exact.
class ErrorProfile {
 public:
  enum class Generator { Constant, Sinusoid, RandomUniform, RandomGaussian, Custom };

  static ErrorProfile constant(double a, double b, double value, int grid_size);

  /// amplitude * sin(2*pi*periods*(s-a)/(b-a) + phase); periods >= 1 so the
  /// profile closes over the domain.
  static ErrorProfile sinusoid(double a, double b, double amplitude,
                               int periods, double phase, int grid_size);

  static ErrorProfile random_uniform(double a, double b, double scale,
                                     std::uint64_t seed, int grid_size,
                                     bool zero_mean);
  static ErrorProfile random_gaussian(double a, double b, double scale,
                                      std::uint64_t seed, int grid_size,
                                      bool zero_mean);

  static ErrorProfile custom(double a, double b, std::vector<double> samples);

  double a() const { return a_; }
  double b() const { return b_; }
  double length() const { return b_ - a_; }
  int grid_size() const { return static_cast<int>(samples_.size()); }
  double grid_step() const { return (b_ - a_) / (grid_size() - 1); }
  const std::vector<double>& samples() const { return samples_; }
  Generator generator() const { return generator_; }
  bool zero_mean() const { return zero_mean_; }

  /// Trapezoid line average of the profile over [a, b].
  double mean() const;

  /// Linear interpolation between grid neighbours; s must lie in [a, b]
  /// up to a small slack.
  double value_at(double s) const;

  /// Copy with the trapezoid mean subtracted (twice, to push the residual
  /// to the last bit).
  ErrorProfile shifted_to_zero_mean() const;

 private:
  ErrorProfile(double a, double b, std::vector<double> samples, Generator g,
               bool zero_mean);

  double a_;
  double b_;
  std::vector<double> samples_;
  Generator generator_;
  bool zero_mean_;
};

}  // namespace hqc
