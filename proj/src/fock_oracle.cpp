#include "hqc/fock_oracle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

namespace hqc {

namespace {

constexpr double kMinStep = 1e-6;
constexpr double kMaxStep = 1e-2;
constexpr double kClosureTol = 1e-12;

void check_point(const ControlPoint& p) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.r1)) {
    throw std::domain_error("control point coordinates must be finite");
  }
}

void check_step(double step) {
  if (!(step >= kMinStep && step <= kMaxStep)) {
    throw std::domain_error(
        "finite-difference stride must lie in [1e-6, 1e-2]");
  }
}

ControlPoint shifted(ControlPoint p, ControlDirection mu, double delta) {
  switch (mu) {
    case ControlDirection::X: p.x += delta; break;
    case ControlDirection::Y: p.y += delta; break;
    case ControlDirection::R1: p.r1 += delta; break;
  }
  return p;
}

Eigen::Matrix2cd analytic_field_strength(ControlDirection mu,
                                         ControlDirection nu,
                                         const ControlPoint& p) {
  const std::complex<double> i(0.0, 1.0);
  Eigen::Matrix2cd sigma_x, sigma_y;
  sigma_x << 0.0, 1.0, 1.0, 0.0;
  sigma_y << 0.0, -i, i, 0.0;
  if (mu == ControlDirection::X && nu == ControlDirection::R1) {
    return -2.0 * i * std::exp(-2.0 * p.r1) * sigma_y;
  }
  if (nu == ControlDirection::X && mu == ControlDirection::R1) {
    return 2.0 * i * std::exp(-2.0 * p.r1) * sigma_y;
  }
  if (mu == ControlDirection::Y && nu == ControlDirection::R1) {
    return -2.0 * i * std::exp(2.0 * p.r1) * sigma_x;
  }
  if (nu == ControlDirection::Y && mu == ControlDirection::R1) {
    return 2.0 * i * std::exp(2.0 * p.r1) * sigma_x;
  }
  throw std::domain_error("no analytic reference for this component pair");
}

}  // namespace

FockSpace::FockSpace(int dim) : dim_(dim) {
  if (dim < 4) {
    throw std::domain_error("Fock truncation needs at least 4 levels");
  }
  a_ = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) {
    a_(n - 1, n) = std::sqrt(static_cast<double>(n));
  }
  adag_ = a_.adjoint();
  aa_ = a_ * a_;
  adad_ = adag_ * adag_;
}

Eigen::MatrixXcd squeeze(std::complex<double> nu, const FockSpace& space) {
  const Eigen::MatrixXcd gen =
      nu * space.creation_squared() - std::conj(nu) * space.annihilation_squared();
  return gen.exp();
}

Eigen::MatrixXcd displace(std::complex<double> eta, const FockSpace& space) {
  const Eigen::MatrixXcd gen =
      eta * space.creation() - std::conj(eta) * space.annihilation();
  return gen.exp();
}

Eigen::MatrixXcd control_unitary(const ControlPoint& p,
                                 const FockSpace& space) {
  check_point(p);
  return displace(std::complex<double>(p.x, p.y), space) *
         squeeze(std::complex<double>(p.r1, 0.0), space);
}

double unitarity_defect(const Eigen::MatrixXcd& m) {
  const Eigen::MatrixXcd defect =
      m.adjoint() * m -
      Eigen::MatrixXcd::Identity(m.rows(), m.cols());
  return defect.cwiseAbs().maxCoeff();
}

ConnectionMatrix connection(const ControlPoint& p, ControlDirection mu,
                            double step, const FockSpace& space) {
  check_point(p);
  check_step(step);

  // Only one factor of U = D(x + iy) S(r1) varies along each direction;
  // build the fixed factor once.
  Eigen::MatrixXcd u, up, um;
  const std::complex<double> eta(p.x, p.y);
  switch (mu) {
    case ControlDirection::X: {
      const Eigen::MatrixXcd s = squeeze({p.r1, 0.0}, space);
      u = displace(eta, space) * s;
      up = displace(eta + step, space) * s;
      um = displace(eta - step, space) * s;
      break;
    }
    case ControlDirection::Y: {
      const Eigen::MatrixXcd s = squeeze({p.r1, 0.0}, space);
      const std::complex<double> istep(0.0, step);
      u = displace(eta, space) * s;
      up = displace(eta + istep, space) * s;
      um = displace(eta - istep, space) * s;
      break;
    }
    case ControlDirection::R1: {
      const Eigen::MatrixXcd d = displace(eta, space);
      u = d * squeeze({p.r1, 0.0}, space);
      up = d * squeeze({p.r1 + step, 0.0}, space);
      um = d * squeeze({p.r1 - step, 0.0}, space);
      break;
    }
  }

  const Eigen::MatrixXcd m = (u.adjoint() * (up - um)) / (2.0 * step);
  ConnectionMatrix result;
  result.entries = m.topLeftCorner<2, 2>();
  result.direction = mu;
  result.skew_defect =
      (result.entries + result.entries.adjoint()).cwiseAbs().maxCoeff();
  return result;
}

Eigen::Matrix2cd field_strength(const ControlPoint& p, ControlDirection mu,
                                ControlDirection nu, double step,
                                const FockSpace& space) {
  if (mu == nu) {
    throw std::domain_error("curvature needs two distinct directions");
  }
  const Eigen::Matrix2cd a_mu = connection(p, mu, step, space).entries;
  const Eigen::Matrix2cd a_nu = connection(p, nu, step, space).entries;
  const Eigen::Matrix2cd d_mu_a_nu =
      (connection(shifted(p, mu, step), nu, step, space).entries -
       connection(shifted(p, mu, -step), nu, step, space).entries) /
      (2.0 * step);
  const Eigen::Matrix2cd d_nu_a_mu =
      (connection(shifted(p, nu, step), mu, step, space).entries -
       connection(shifted(p, nu, -step), mu, step, space).entries) /
      (2.0 * step);
  return d_mu_a_nu - d_nu_a_mu + a_mu * a_nu - a_nu * a_mu;
}

std::vector<ControlPoint> rect_path(const RectLoop& loop) {
  const double a = loop.a();
  const double b = loop.b();
  const double d = loop.d();
  std::vector<ControlPoint> path;
  path.reserve(5);
  if (loop.plane() == ControlPlane::XR1) {
    path.push_back({a, 0.0, 0.0});
    path.push_back({b, 0.0, 0.0});
    path.push_back({b, 0.0, d});
    path.push_back({a, 0.0, d});
    path.push_back({a, 0.0, 0.0});
  } else {
    path.push_back({0.0, a, 0.0});
    path.push_back({0.0, b, 0.0});
    path.push_back({0.0, b, d});
    path.push_back({0.0, a, d});
    path.push_back({0.0, a, 0.0});
  }
  return path;
}

std::vector<ControlPoint> perturbed_rect_path(const RectLoop& loop,
                                              const ErrorProfile& top_edge) {
  const double slack = 1e-9 * std::max(1.0, std::abs(loop.b()));
  if (std::abs(top_edge.a() - loop.a()) > slack ||
      std::abs(top_edge.b() - loop.b()) > slack) {
    throw std::domain_error(
        "error profile domain must match the loop's displacement range");
  }
  const bool x_plane = loop.plane() == ControlPlane::XR1;
  const auto point = [x_plane](double s, double t) {
    return x_plane ? ControlPoint{s, 0.0, t} : ControlPoint{0.0, s, t};
  };
  const std::vector<double>& dr = top_edge.samples();
  const int n = top_edge.grid_size();
  const double h = top_edge.grid_step();

  std::vector<ControlPoint> path;
  path.reserve(n + 3);
  path.push_back(point(loop.a(), 0.0));
  path.push_back(point(loop.b(), 0.0));
  // Jagged top edge, traversed right to left; the first point doubles as
  // the top of the right side, the last as the top of the left side.
  for (int k = n - 1; k >= 0; --k) {
    path.push_back(point(loop.a() + k * h, loop.d() + dr[k]));
  }
  path.push_back(point(loop.a(), 0.0));
  return path;
}

OracleHolonomy path_ordered_holonomy(std::span<const ControlPoint> path,
                                     int steps_per_edge,
                                     const FockSpace& space, double step) {
  if (path.size() < 3) {
    throw std::domain_error("closed path needs at least 3 points");
  }
  if (steps_per_edge < 10) {
    throw std::domain_error("path resolution must be at least 10 steps");
  }
  check_step(step);
  for (const ControlPoint& p : path) check_point(p);
  {
    const ControlPoint& first = path.front();
    const ControlPoint& last = path.back();
    if (std::abs(first.x - last.x) > kClosureTol ||
        std::abs(first.y - last.y) > kClosureTol ||
        std::abs(first.r1 - last.r1) > kClosureTol) {
      throw std::domain_error("holonomy path must close on itself");
    }
  }

  // Longest segment gets steps_per_edge sub-steps; shorter ones get
  // proportionally fewer, but always at least one.
  double ref_len = 0.0;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const double dx = path[k + 1].x - path[k].x;
    const double dy = path[k + 1].y - path[k].y;
    const double dr = path[k + 1].r1 - path[k].r1;
    ref_len = std::max(ref_len, std::sqrt(dx * dx + dy * dy + dr * dr));
  }
  if (ref_len == 0.0) {
    throw std::domain_error("holonomy path has zero extent");
  }

  Eigen::Matrix2cd g = Eigen::Matrix2cd::Identity();
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const ControlPoint& from = path[k];
    const double dx = path[k + 1].x - from.x;
    const double dy = path[k + 1].y - from.y;
    const double dr = path[k + 1].r1 - from.r1;
    const double len = std::sqrt(dx * dx + dy * dy + dr * dr);
    if (len == 0.0) continue;
    const int nsub = std::max(
        1, static_cast<int>(std::ceil(steps_per_edge * len / ref_len)));
    const double ddx = dx / nsub;
    const double ddy = dy / nsub;
    const double ddr = dr / nsub;
    for (int j = 0; j < nsub; ++j) {
      const double frac = (j + 0.5) / nsub;
      const ControlPoint mid{from.x + frac * dx, from.y + frac * dy,
                             from.r1 + frac * dr};
      Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
      if (ddx != 0.0) {
        m += connection(mid, ControlDirection::X, step, space).entries * ddx;
      }
      if (ddy != 0.0) {
        m += connection(mid, ControlDirection::Y, step, space).entries * ddy;
      }
      if (ddr != 0.0) {
        m += connection(mid, ControlDirection::R1, step, space).entries * ddr;
      }
      g = m.exp() * g;
    }
  }

  OracleHolonomy result;
  result.gate = QubitGate::from_entries(g(0, 0), g(0, 1), g(1, 0), g(1, 1));
  const Eigen::Matrix2cd defect = g.adjoint() * g - Eigen::Matrix2cd::Identity();
  result.unitarity_defect = defect.cwiseAbs().maxCoeff();
  return result;
}

OracleHolonomy path_ordered_holonomy(const RectLoop& loop, int steps_per_edge,
                                     const FockSpace& space, double step) {
  const std::vector<ControlPoint> path = rect_path(loop);
  return path_ordered_holonomy(std::span<const ControlPoint>(path),
                               steps_per_edge, space, step);
}

std::vector<ConvergenceRow> convergence_check(OracleTarget target,
                                              std::span<const LadderRung> rungs,
                                              const ControlPoint& where,
                                              double lx, double ly) {
  if (rungs.size() < 3) {
    throw std::domain_error("convergence ladder needs at least 3 rungs");
  }
  std::vector<ConvergenceRow> rows;
  rows.reserve(rungs.size());
  for (const LadderRung& rung : rungs) {
    const FockSpace space(rung.dim);
    double error = 0.0;
    switch (target) {
      case OracleTarget::FieldStrengthXR1:
      case OracleTarget::FieldStrengthYR1: {
        const ControlDirection mu = target == OracleTarget::FieldStrengthXR1
                                        ? ControlDirection::X
                                        : ControlDirection::Y;
        const Eigen::Matrix2cd f =
            field_strength(where, mu, ControlDirection::R1, rung.step, space);
        const Eigen::Matrix2cd ref =
            analytic_field_strength(mu, ControlDirection::R1, where);
        error = (f - ref).cwiseAbs().maxCoeff() / ref.cwiseAbs().maxCoeff();
        break;
      }
      case OracleTarget::HolonomyLoopX: {
        const HadamardLoops loops = hadamard_loops(lx, ly);
        const OracleHolonomy h =
            path_ordered_holonomy(loops.x_loop, rung.steps_per_edge, space,
                                  rung.step);
        error = max_norm_diff(h.gate, holonomy(loops.x_loop));
        break;
      }
      case OracleTarget::HolonomyLoopY: {
        const HadamardLoops loops = hadamard_loops(lx, ly);
        const OracleHolonomy h =
            path_ordered_holonomy(loops.y_loop, rung.steps_per_edge, space,
                                  rung.step);
        error = max_norm_diff(h.gate, holonomy(loops.y_loop));
        break;
      }
      case OracleTarget::HadamardPair: {
        const HadamardLoops loops = hadamard_loops(lx, ly);
        const OracleHolonomy hx =
            path_ordered_holonomy(loops.x_loop, rung.steps_per_edge, space,
                                  rung.step);
        const OracleHolonomy hy =
            path_ordered_holonomy(loops.y_loop, rung.steps_per_edge, space,
                                  rung.step);
        const QubitGate composed = compose(hy.gate, hx.gate);
        const QubitGate target_gate =
            hadamard_target().scaled(Complex(0.0, -1.0));
        error = max_norm_diff(composed, target_gate);
        break;
      }
    }
    rows.push_back(ConvergenceRow{rung, error});
  }
  return rows;
}

bool errors_non_increasing(std::span<const ConvergenceRow> rows,
                           double allowance) {
  for (std::size_t k = 1; k < rows.size(); ++k) {
    if (rows[k].error > rows[k - 1].error * (1.0 + allowance)) {
      return false;
    }
  }
  return true;
}

}  // namespace hqc
