#include "hqc/error_models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hqc {

namespace {

constexpr double kQuarterPi = std::numbers::pi / 4.0;
constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kInfidelityFloor = 1e-15;

void check_matches_domain(const RectLoop& loop, const ErrorProfile& profile) {
  const double slack = 1e-9 * std::max(1.0, std::abs(loop.b()));
  if (std::abs(profile.a() - loop.a()) > slack ||
      std::abs(profile.b() - loop.b()) > slack) {
    throw std::domain_error(
        "error profile domain must match the loop's displacement range");
  }
}

// Trapezoid integral of f(sample) over the profile domain.
template <typename F>
double trapezoid_integral(const ErrorProfile& profile, F f) {
  const std::vector<double>& s = profile.samples();
  const std::size_t n = s.size();
  double sum = 0.5 * (f(s.front()) + f(s.back()));
  for (std::size_t k = 1; k + 1 < n; ++k) sum += f(s[k]);
  return sum * profile.grid_step();
}

}  // namespace

double mean_square(const ErrorProfile& profile) {
  return trapezoid_integral(profile, [](double v) { return v * v; }) /
         profile.length();
}

PerturbedSigma perturbed_sigma(const RectLoop& loop,
                               const ErrorProfile& profile) {
  check_matches_domain(loop, profile);
  // Column area change between heights d and d + dr, exactly:
  //   XR1: e^{-2d} (1 - e^{-2 dr});  YR1: e^{+2d} (e^{+2 dr} - 1).
  // expm1 keeps the dr -> 0 limit fully accurate.
  double delta;
  if (loop.plane() == ControlPlane::XR1) {
    const double shrink = std::exp(-2.0 * loop.d());
    delta = shrink * trapezoid_integral(profile, [](double dr) {
      return -std::expm1(-2.0 * dr);
    });
  } else {
    const double grow = std::exp(2.0 * loop.d());
    delta = grow * trapezoid_integral(profile, [](double dr) {
      return std::expm1(2.0 * dr);
    });
  }
  return PerturbedSigma{surface_sigma(loop) + delta, delta};
}

QubitGate perturbed_hadamard(double lx, double ly, const ErrorProfile& px,
                             const ErrorProfile& py) {
  const HadamardLoops loops = hadamard_loops(lx, ly, px.a(), py.a());
  const PerturbedSigma sx = perturbed_sigma(loops.x_loop, px);
  const PerturbedSigma sy = perturbed_sigma(loops.y_loop, py);
  return compose(axis_rotation(PauliAxis::X, sy.sigma_prime),
                 axis_rotation(PauliAxis::Y, sx.sigma_prime));
}

QubitGate perturbed_hadamard_composed(double delta_sigma_I,
                                      double delta_sigma_II) {
  return compose(axis_rotation(PauliAxis::X, kHalfPi + delta_sigma_II),
                 axis_rotation(PauliAxis::Y, kQuarterPi + delta_sigma_I));
}

QubitGate perturbed_hadamard_expanded(double delta_sigma_I,
                                      double delta_sigma_II) {
  // Angle-addition form of the same product: with c1 = cos(dI),
  // s1 = sin(dI), c2 = cos(dII), s2 = sin(dII),
  //   cos(pi/4 + dI) = (c1 - s1)/sqrt(2),  sin(pi/4 + dI) = (c1 + s1)/sqrt(2),
  //   cos(pi/2 + dII) = -s2,               sin(pi/2 + dII) = c2.
  const double c1 = std::cos(delta_sigma_I);
  const double s1 = std::sin(delta_sigma_I);
  const double c2 = std::cos(delta_sigma_II);
  const double s2 = std::sin(delta_sigma_II);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const double p = (c1 - s1) * inv_sqrt2;  // cos of the Y angle
  const double q = (c1 + s1) * inv_sqrt2;  // sin of the Y angle
  const Complex i(0.0, 1.0);
  return QubitGate::from_entries(-s2 * p - i * c2 * q, s2 * q - i * c2 * p,
                                 -s2 * q - i * c2 * p, -s2 * p + i * c2 * q);
}

double analytic_fidelity(double delta_sigma_I) {
  if (!std::isfinite(delta_sigma_I)) {
    throw std::domain_error("angle shift must be finite");
  }
  return std::abs(std::cos(delta_sigma_I));
}

ApproxFidelity approx_fidelity(double lx, double msq) {
  if (!std::isfinite(lx) || lx < kQuarterPi - 1e-12) {
    throw std::domain_error("fidelity model needs lx >= pi/4");
  }
  if (!std::isfinite(msq) || msq < 0.0) {
    throw std::domain_error("mean squared error must be non-negative");
  }
  const double stretch = 2.0 * lx - kHalfPi;
  const double quartic_root = (lx - kQuarterPi) * std::sqrt(2.0);
  return ApproxFidelity{
      std::abs(std::cos(msq * stretch)),
      1.0 - msq * msq * quartic_root * quartic_root,
  };
}

double revival_length(int n, double msq) {
  if (n < 1) {
    throw std::domain_error("revival index must be at least 1");
  }
  if (!(msq > 0.0) || !std::isfinite(msq)) {
    throw std::domain_error("revival width needs positive mean squared error");
  }
  return kQuarterPi + std::numbers::pi * n / (2.0 * msq);
}

FidelityReport fidelity_report(double lx, double ly, const ErrorProfile& px,
                               const ErrorProfile& py, std::uint64_t seed) {
  const HadamardLoops loops = hadamard_loops(lx, ly, px.a(), py.a());
  const PerturbedSigma sx = perturbed_sigma(loops.x_loop, px);
  const PerturbedSigma sy = perturbed_sigma(loops.y_loop, py);
  const QubitGate target = hadamard_target().scaled(Complex(0.0, -1.0));
  const QubitGate actual =
      compose(axis_rotation(PauliAxis::X, sy.sigma_prime),
              axis_rotation(PauliAxis::Y, sx.sigma_prime));

  FidelityReport r;
  r.lx = lx;
  r.ly = ly;
  r.seed = seed;
  r.msq = mean_square(px);
  r.delta_sigma_I = sx.delta_sigma;
  r.delta_sigma_II = sy.delta_sigma;
  r.f_exact_j0 = basis_fidelity(target, actual, 0);
  r.f_exact_j1 = basis_fidelity(target, actual, 1);
  r.f_analytic = analytic_fidelity(sx.delta_sigma);
  const ApproxFidelity ap = approx_fidelity(lx, r.msq);
  r.f_approx_cos = ap.f_cos;
  r.f_approx_quartic = ap.f_quartic;
  return r;
}

ErrorProfile make_profile(const NoiseSpec& spec, double a, double b,
                          std::uint64_t seed) {
  switch (spec.family) {
    case NoiseSpec::Family::Constant:
      return ErrorProfile::constant(a, b, spec.scale, spec.grid_size);
    case NoiseSpec::Family::Sinusoid:
      return ErrorProfile::sinusoid(a, b, spec.scale, spec.periods, spec.phase,
                                    spec.grid_size);
    case NoiseSpec::Family::Uniform:
      return ErrorProfile::random_uniform(a, b, spec.scale, seed,
                                          spec.grid_size, spec.zero_mean);
    case NoiseSpec::Family::Gaussian:
      return ErrorProfile::random_gaussian(a, b, spec.scale, seed,
                                           spec.grid_size, spec.zero_mean);
  }
  throw std::domain_error("unknown noise family");
}

double nominal_mean_square(const NoiseSpec& spec) {
  const double s2 = spec.scale * spec.scale;
  switch (spec.family) {
    case NoiseSpec::Family::Constant: return s2;
    case NoiseSpec::Family::Gaussian: return s2;
    case NoiseSpec::Family::Uniform: return s2 / 3.0;
    case NoiseSpec::Family::Sinusoid: return s2 / 2.0;
  }
  throw std::domain_error("unknown noise family");
}

MonteCarloStats monte_carlo_fidelity(double lx, double ly,
                                     const NoiseSpec& spec, int samples,
                                     std::uint64_t base_seed) {
  if (samples < 1) {
    throw std::domain_error("sample count must be positive");
  }
  MonteCarloStats stats;
  stats.samples = samples;
  stats.min_f = 2.0;
  stats.max_f = -1.0;
  // Welford accumulation: fidelities cluster tightly below 1, where a
  // sum-of-squares variance would cancel catastrophically.
  double mean_f = 0.0;
  double m2_f = 0.0;
  double sum_ds = 0.0;
  double sum_msq = 0.0;
  for (int i = 0; i < samples; ++i) {
    const std::uint64_t s = base_seed + static_cast<std::uint64_t>(i);
    const ErrorProfile px = make_profile(spec, 0.0, lx, s);
    const ErrorProfile py = make_profile(spec, 0.0, ly, s ^ kYStreamSeedSalt);
    const FidelityReport r = fidelity_report(lx, ly, px, py, s);
    const double delta = r.f_exact_j0 - mean_f;
    mean_f += delta / (i + 1);
    m2_f += delta * (r.f_exact_j0 - mean_f);
    sum_ds += r.delta_sigma_I;
    sum_msq += r.msq;
    stats.min_f = std::min(stats.min_f, r.f_exact_j0);
    stats.max_f = std::max(stats.max_f, r.f_exact_j0);
  }
  stats.mean_f = mean_f;
  stats.mean_delta_sigma_I = sum_ds / samples;
  stats.mean_msq = sum_msq / samples;
  if (samples > 1) {
    stats.std_f = std::sqrt(std::max(0.0, m2_f) / (samples - 1));
  }
  return stats;
}

OrderScanResult order_scan(double lx, const NoiseSpec& family,
                           const std::vector<double>& eps_values,
                           int samples_per_eps, std::uint64_t base_seed) {
  if (eps_values.size() < 3) {
    throw std::domain_error("scaling fit needs at least 3 error scales");
  }
  if (samples_per_eps < 1) {
    throw std::domain_error("sample count must be positive");
  }
  for (double e : eps_values) {
    if (!(e > 0.0) || !(e <= 0.2)) {
      throw std::domain_error("error scales must lie in (0, 0.2]");
    }
  }

  OrderScanResult result;
  result.points.reserve(eps_values.size());
  for (std::size_t k = 0; k < eps_values.size(); ++k) {
    NoiseSpec spec = family;
    spec.scale = eps_values[k];
    double sum = 0.0;
    for (int i = 0; i < samples_per_eps; ++i) {
      const std::uint64_t s =
          base_seed + static_cast<std::uint64_t>(k) * samples_per_eps +
          static_cast<std::uint64_t>(i);
      const ErrorProfile px = make_profile(spec, 0.0, lx, s);
      const PerturbedSigma sx = perturbed_sigma(
          RectLoop(ControlPlane::XR1, 0.0, lx, hadamard_dx(lx)), px);
      // Exact fidelity through the gate itself; the YR1 loop cannot move
      // it, so an unperturbed YR1 angle is used.
      const QubitGate target = hadamard_target().scaled(Complex(0.0, -1.0));
      const QubitGate actual = perturbed_hadamard_composed(sx.delta_sigma, 0.0);
      sum += 1.0 - basis_fidelity(target, actual, 0);
    }
    result.points.emplace_back(eps_values[k], sum / samples_per_eps);
  }

  // Least-squares line through (log eps, log mean-infidelity), skipping
  // points at or below the rounding floor.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int kept = 0;
  for (const auto& [eps, one_minus_f] : result.points) {
    if (one_minus_f < kInfidelityFloor) continue;
    const double lx_ = std::log(eps);
    const double ly_ = std::log(one_minus_f);
    sx += lx_;
    sy += ly_;
    sxx += lx_ * lx_;
    sxy += lx_ * ly_;
    ++kept;
  }
  if (kept < 2) {
    result.underflow = true;
    return result;
  }
  const double denom = kept * sxx - sx * sx;
  result.slope = (kept * sxy - sx * sy) / denom;
  result.intercept = (sy - result.slope * sx) / kept;
  return result;
}

}  // namespace hqc
