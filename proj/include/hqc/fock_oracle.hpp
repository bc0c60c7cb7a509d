#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hqc/error_profile.hpp"
#include "hqc/loops.hpp"
#include "hqc/su2.hpp"

namespace hqc {

/// Truncated oscillator mode: dense annihilation/creation matrices on the
/// lowest `dim` number states, plus the cached quadratic products the
/// squeezing generator needs.  Operators on the truncated space are only
/// an approximation of the infinite-dimensional ones near the cutoff, so
/// everything downstream carries a truncation error that shrinks as dim
/// grows; exponentials of the (exactly anti-Hermitian) truncated
/// generators are still unitary to rounding.
class FockSpace {
 public:
  explicit FockSpace(int dim);

  int dim() const { return dim_; }
  const Eigen::MatrixXcd& annihilation() const { return a_; }
  const Eigen::MatrixXcd& creation() const { return adag_; }
  const Eigen::MatrixXcd& annihilation_squared() const { return aa_; }
  const Eigen::MatrixXcd& creation_squared() const { return adad_; }

 private:
  int dim_;
  Eigen::MatrixXcd a_;
  Eigen::MatrixXcd adag_;
  Eigen::MatrixXcd aa_;
  Eigen::MatrixXcd adad_;
};

/// Point in control space.  The squeezing phase is pinned to zero
/// throughout (only the amplitude r1 is driven), so it is a constant of
/// the type rather than a field.
struct ControlPoint {
  double x = 0.0;
  double y = 0.0;
  double r1 = 0.0;
  static constexpr double theta1 = 0.0;
};

enum class ControlDirection { X, Y, R1 };

/// exp(nu a†a† - conj(nu) a a) on the truncated space.
Eigen::MatrixXcd squeeze(std::complex<double> nu, const FockSpace& space);

/// exp(eta a† - conj(eta) a) on the truncated space.
Eigen::MatrixXcd displace(std::complex<double> eta, const FockSpace& space);

/// Control unitary at a point: displace(x + i y) * squeeze(r1).
Eigen::MatrixXcd control_unitary(const ControlPoint& p, const FockSpace& space);

/// Max-norm of M†M - I.
double unitarity_defect(const Eigen::MatrixXcd& m);

/// Gauge connection on the two lowest number states, computed by central
/// finite differences of the control unitary.  An exact connection is
/// anti-Hermitian; skew_defect records the max-norm of A + A† actually
/// obtained, which bundles truncation and differencing error.
struct ConnectionMatrix {
  Eigen::Matrix2cd entries;
  ControlDirection direction = ControlDirection::X;
  double skew_defect = 0.0;
};

/// A_mu = U† dU/d(mu) restricted to the code block, with dU by central
/// differences of stride `step`.  step must lie in [1e-6, 1e-2]: below
/// that the difference drowns in rounding, above it the O(step^2) bias
/// dominates.
ConnectionMatrix connection(const ControlPoint& p, ControlDirection mu,
                            double step, const FockSpace& space);

/// Curvature component F_{mu nu} = d_mu A_nu - d_nu A_mu + [A_mu, A_nu],
/// all derivatives by central differences of stride `step`.
Eigen::Matrix2cd field_strength(const ControlPoint& p, ControlDirection mu,
                                ControlDirection nu, double step,
                                const FockSpace& space);

struct OracleHolonomy {
  QubitGate gate;
  double unitarity_defect = 0.0;  // of the accumulated 2x2 product
};

/// Corner sequence of a rectangle as a closed control-space path.  XR1
/// rectangles sweep (x, r1) at y = 0; YR1 rectangles sweep (y, r1) at
/// x = 0.
std::vector<ControlPoint> rect_path(const RectLoop& loop);

/// Rectangle path whose top edge is displaced pointwise by the profile:
/// up the right side to d + profile(b), across the sampled jagged top from
/// b to a, and down the left side from d + profile(a).  The profile domain
/// must match [loop.a(), loop.b()].
std::vector<ControlPoint> perturbed_rect_path(const RectLoop& loop,
                                              const ErrorProfile& top_edge);

/// Path-ordered product of per-step connection exponentials along a closed
/// polyline (first point == last point).  Each segment is subdivided in
/// proportion to its length so that the longest segment gets
/// steps_per_edge (>= 10) sub-steps; each sub-step applies
/// exp(sum_mu A_mu(midpoint) * delta_mu).  `step` is the
/// finite-difference stride handed to connection().
OracleHolonomy path_ordered_holonomy(std::span<const ControlPoint> path,
                                     int steps_per_edge,
                                     const FockSpace& space,
                                     double step = 1e-3);

OracleHolonomy path_ordered_holonomy(const RectLoop& loop,
                                     int steps_per_edge,
                                     const FockSpace& space,
                                     double step = 1e-3);

/// What convergence_check measures the truncated-space error of.
enum class OracleTarget {
  FieldStrengthXR1,  // F_{x r1} against -2i e^{-2 r1} sigma_y at `where`
  FieldStrengthYR1,  // F_{y r1} against -2i e^{+2 r1} sigma_x at `where`
  HolonomyLoopX,     // rectangle holonomy against the closed-form rotation
  HolonomyLoopY,
  HadamardPair,      // composed pair against the scaled Hadamard target
};

struct LadderRung {
  int dim = 64;             // Fock truncation
  double step = 1e-3;       // finite-difference stride
  int steps_per_edge = 200; // path resolution (holonomy targets)
};

struct ConvergenceRow {
  LadderRung rung;
  double error = 0.0;  // relative for field strengths, absolute max-norm
                       // for holonomies
};

/// Error of the oracle against the closed-form answer on a ladder of
/// truncation sizes / resolutions.  Deterministic: the same rung always
/// reproduces the same error.
std::vector<ConvergenceRow> convergence_check(OracleTarget target,
                                              std::span<const LadderRung> rungs,
                                              const ControlPoint& where = {},
                                              double lx = 1.0, double ly = 1.0);

/// True when each row's error is at most (1 + allowance) times the
/// previous row's, i.e. the ladder is non-increasing up to wiggle room.
bool errors_non_increasing(std::span<const ConvergenceRow> rows,
                           double allowance = 0.10);

}  // namespace hqc
