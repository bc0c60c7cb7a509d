#include "hqc/loops.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hqc {

namespace {

constexpr double kQuarterPi = std::numbers::pi / 4.0;
constexpr double kHalfPi = std::numbers::pi / 2.0;

// Height integral of one quadrature column, 0 to `top`, of the
// field-strength density: 2 e^{-2t} (XR1) or 2 e^{+2t} (YR1).  expm1 keeps
// the small-top case exact.
double column_area(ControlPlane plane, double top) {
  return plane == ControlPlane::XR1 ? -std::expm1(-2.0 * top)
                                    : std::expm1(2.0 * top);
}

void check_matches_domain(const RectLoop& loop, const ErrorProfile& profile) {
  const double slack = 1e-9 * std::max(1.0, std::abs(loop.b()));
  if (std::abs(profile.a() - loop.a()) > slack ||
      std::abs(profile.b() - loop.b()) > slack) {
    throw std::domain_error(
        "error profile domain must match the loop's displacement range");
  }
}

}  // namespace

RectLoop::RectLoop(ControlPlane plane, double a, double b, double d)
    : plane_(plane), a_(a), b_(b), d_(d) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(d)) {
    throw std::domain_error("rectangle corners must be finite");
  }
  if (!(b > a)) {
    throw std::domain_error("rectangle needs b > a");
  }
  if (!(d > 0.0)) {
    throw std::domain_error("rectangle height must be positive");
  }
}

double surface_sigma(const RectLoop& loop) {
  return loop.side_length() * column_area(loop.plane(), loop.d());
}

double surface_sigma_quadrature(const RectLoop& loop, int grid) {
  if (grid < 2) {
    throw std::domain_error("quadrature grid needs at least 2 nodes");
  }
  // Constant integrand along the displacement axis: the trapezoid sum
  // collapses, but keep the loop explicit so the grid parameter is honest.
  const double h = loop.side_length() / (grid - 1);
  double sum = 0.0;
  for (int k = 0; k < grid; ++k) {
    const double w = (k == 0 || k == grid - 1) ? 0.5 : 1.0;
    sum += w * column_area(loop.plane(), loop.d());
  }
  return sum * h;
}

double surface_sigma_quadrature(const RectLoop& loop,
                                const ErrorProfile& top_edge, int grid) {
  if (grid < 2) {
    throw std::domain_error("quadrature grid needs at least 2 nodes");
  }
  check_matches_domain(loop, top_edge);
  const double h = loop.side_length() / (grid - 1);
  double sum = 0.0;
  for (int k = 0; k < grid; ++k) {
    const double s = loop.a() + k * h;
    const double top = loop.d() + top_edge.value_at(s);
    const double w = (k == 0 || k == grid - 1) ? 0.5 : 1.0;
    sum += w * column_area(loop.plane(), top);
  }
  return sum * h;
}

double hadamard_dx(double lx) {
  // The 1e-9 margin keeps the logarithm singularity at bay.
  if (!std::isfinite(lx) || !(lx > kQuarterPi + 1e-9)) {
    throw std::domain_error(
        "XR1 width must exceed pi/4 ~ 0.7853981633974483: narrower "
        "rectangles cannot accumulate a pi/4 angle at any height");
  }
  // Solves lx * (1 - e^{-2d}) = pi/4; log1p keeps large widths accurate.
  return -0.5 * std::log1p(-kQuarterPi / lx);
}

double hadamard_dy(double ly) {
  if (!std::isfinite(ly) || !(ly > 0.0)) {
    throw std::domain_error("YR1 width must be positive");
  }
  // Solves ly * (e^{2d} - 1) = pi/2.
  return 0.5 * std::log1p(kHalfPi / ly);
}

HadamardLoops hadamard_loops(double lx, double ly, double x0, double y0) {
  const double dx = hadamard_dx(lx);
  const double dy = hadamard_dy(ly);
  return HadamardLoops{
      RectLoop(ControlPlane::XR1, x0, x0 + lx, dx),
      RectLoop(ControlPlane::YR1, y0, y0 + ly, dy),
  };
}

QubitGate holonomy(const RectLoop& loop) {
  const double sigma = surface_sigma(loop);
  const PauliAxis axis =
      loop.plane() == ControlPlane::XR1 ? PauliAxis::Y : PauliAxis::X;
  return axis_rotation(axis, sigma);
}

QubitGate hadamard_gate(double lx, double ly) {
  const HadamardLoops loops = hadamard_loops(lx, ly);
  return compose(holonomy(loops.y_loop), holonomy(loops.x_loop));
}

}  // namespace hqc
