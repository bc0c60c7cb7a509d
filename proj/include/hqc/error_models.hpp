#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "hqc/error_profile.hpp"
#include "hqc/loops.hpp"
#include "hqc/su2.hpp"

namespace hqc {

/// Trapezoid line average of the squared profile over its domain.
double mean_square(const ErrorProfile& profile);

struct PerturbedSigma {
  double sigma_prime;  // perturbed rotation angle
  double delta_sigma;  // shift relative to the unperturbed angle
};

/// Angle shift caused by displacing the rectangle's top edge by the given
/// profile.  The profile domain must coincide with [loop.a(), loop.b()].
///   XR1: delta = exp(-2d) * integral of (1 - exp(-2 dr))
///   YR1: delta = exp(+2d) * integral of (exp(+2 dr) - 1)
PerturbedSigma perturbed_sigma(const RectLoop& loop,
                               const ErrorProfile& profile);

/// Gate produced by the Hadamard loop pair when each top edge carries its
/// own error profile.  Profile domains must match the loop widths.
QubitGate perturbed_hadamard(double lx, double ly, const ErrorProfile& px,
                             const ErrorProfile& py);

/// The same perturbed gate two ways, for cross-checking: as a product of
/// axis rotations at the shifted angles, and written out entrywise via
/// angle-addition identities.
QubitGate perturbed_hadamard_composed(double delta_sigma_I,
                                      double delta_sigma_II);
QubitGate perturbed_hadamard_expanded(double delta_sigma_I,
                                      double delta_sigma_II);

/// Exact gate fidelity under top-edge errors: |cos(delta_sigma_I)|.
/// Independent of the basis state and of the YR1 loop's error.
double analytic_fidelity(double delta_sigma_I);

struct ApproxFidelity {
  double f_cos;      // |cos(msq * (2 lx - pi/2))|
  double f_quartic;  // 1 - msq^2 * (lx sqrt(2) - pi/(2 sqrt(2)))^2
};

/// Small-error approximations of the fidelity in terms of the mean squared
/// error msq = mean_square(profile).  Requires lx >= pi/4 and msq >= 0.
ApproxFidelity approx_fidelity(double lx, double msq);

/// n-th fidelity revival width: lx at which the cosine model returns to 1.
///   lx = pi/4 + pi*n / (2*msq),  n >= 1, msq > 0.
double revival_length(int n, double msq);

/// One full evaluation of the perturbed gate and every fidelity measure.
struct FidelityReport {
  double lx = 0.0;
  double ly = 0.0;
  std::uint64_t seed = 0;
  double msq = 0.0;            // mean squared error of the XR1 profile
  double delta_sigma_I = 0.0;
  double delta_sigma_II = 0.0;
  double f_exact_j0 = 0.0;     // basis fidelity against the target, j = 0
  double f_exact_j1 = 0.0;
  double f_analytic = 0.0;     // |cos(delta_sigma_I)|
  double f_approx_cos = 0.0;
  double f_approx_quartic = 0.0;
};

/// Builds the perturbed gate from the two profiles and scores it against
/// the ideal composed gate.  `seed` is carried through as metadata.
FidelityReport fidelity_report(double lx, double ly, const ErrorProfile& px,
                               const ErrorProfile& py, std::uint64_t seed = 0);

/// Random-profile family used by sweeps and the command-line driver.
struct NoiseSpec {
  enum class Family { Constant, Uniform, Gaussian, Sinusoid };
  Family family = Family::Uniform;
  double scale = 0.01;   // amplitude / standard deviation / constant value
  int grid_size = 4096;
  bool zero_mean = true; // honored by Uniform and Gaussian only
  int periods = 3;       // Sinusoid
  double phase = 0.0;    // Sinusoid
};

/// Draws one profile of the family over [a, b].  Constant and Sinusoid are
/// deterministic and ignore the seed; zero_mean applies to the random
/// families (a zero-meaned constant would vanish identically).
ErrorProfile make_profile(const NoiseSpec& spec, double a, double b,
                          std::uint64_t seed);

/// Fixed salt that derives the YR1 profile's seed from a sample's base
/// seed (seed ^ salt), keeping the two random streams of one sample
/// decoupled but reproducible.
inline constexpr std::uint64_t kYStreamSeedSalt = 0x9E3779B97F4A7C15ull;

/// Expected mean squared error of a profile family at its configured
/// scale: scale^2 for Constant and Gaussian, scale^2/3 for Uniform,
/// scale^2/2 for Sinusoid.  Used to predict revival positions before any
/// sample is drawn.
double nominal_mean_square(const NoiseSpec& spec);

struct MonteCarloStats {
  int samples = 0;
  double mean_f = 0.0;
  double std_f = 0.0;
  double min_f = 0.0;
  double max_f = 0.0;
  double mean_delta_sigma_I = 0.0;
  double mean_msq = 0.0;
};

/// Independent samples of the exact fidelity under the noise family;
/// sample i draws from seed base_seed + i, so results are reproducible and
/// extending the sample count preserves the earlier draws.
MonteCarloStats monte_carlo_fidelity(double lx, double ly,
                                     const NoiseSpec& spec, int samples,
                                     std::uint64_t base_seed);

struct OrderScanResult {
  std::vector<std::pair<double, double>> points;  // (eps, mean 1 - f)
  double slope = 0.0;      // d log(1-f) / d log(eps), least squares
  double intercept = 0.0;  // log-log intercept
  bool underflow = false;  // too few points above the 1e-15 floor to fit
};

/// Mean infidelity versus error scale on a log-log grid, with the scaling
/// exponent fitted by least squares.  Points whose mean 1 - f falls below
/// 1e-15 sit in rounding noise and are dropped before the fit; if fewer
/// than two survive the result is flagged as underflow.
OrderScanResult order_scan(double lx, const NoiseSpec& family,
                           const std::vector<double>& eps_values,
                           int samples_per_eps, std::uint64_t base_seed);

}  // namespace hqc
