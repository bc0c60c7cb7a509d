#pragma once

#include "hqc/error_profile.hpp"
#include "hqc/su2.hpp"

namespace hqc {

/// Control plane a rectangular loop lives in.  XR1 pairs the real
/// displacement quadrature with the squeezing amplitude; YR1 pairs the
/// imaginary quadrature with it.
enum class ControlPlane { XR1, YR1 };

/// Axis-aligned rectangle with base on the zero-squeezing axis, traversed
/// counterclockwise: (a,0) -> (b,0) -> (b,d) -> (a,d) -> (a,0) in
/// (displacement, squeezing) coordinates.
class RectLoop {
 public:
  RectLoop(ControlPlane plane, double a, double b, double d);

  ControlPlane plane() const { return plane_; }
  double a() const { return a_; }
  double b() const { return b_; }
  double d() const { return d_; }
  double side_length() const { return b_ - a_; }

 private:
  ControlPlane plane_;
  double a_;
  double b_;
  double d_;
};

/// Rotation angle accumulated by the loop: the exact surface integral of
/// the field-strength density over the enclosed rectangle.
///   XR1: (b-a) * (1 - exp(-2d));   YR1: (b-a) * (exp(2d) - 1).
double surface_sigma(const RectLoop& loop);

/// Same surface integral by numerical quadrature: trapezoid rule over the
/// displacement coordinate, exact column integrals in the squeezing
/// coordinate.  grid >= 2 is the number of displacement nodes.
double surface_sigma_quadrature(const RectLoop& loop, int grid);

/// Quadrature with the top edge displaced from d to d + top_edge(s); used
/// to cross-check perturbed angles.  The profile domain must match [a, b].
double surface_sigma_quadrature(const RectLoop& loop,
                                const ErrorProfile& top_edge, int grid);

/// Height that makes an XR1 rectangle of width l_x accumulate an angle of
/// exactly pi/4.  Requires l_x > pi/4.
double hadamard_dx(double lx);

/// Height that makes a YR1 rectangle of width l_y accumulate pi/2.
/// Any l_y > 0 works.
double hadamard_dy(double ly);

struct HadamardLoops {
  RectLoop x_loop;  // XR1 rectangle, angle pi/4
  RectLoop y_loop;  // YR1 rectangle, angle pi/2
};

/// The two rectangles whose composed holonomies give the Hadamard gate.
/// x0/y0 place the left edge of each rectangle (the angle only depends on
/// the width, so these default to zero).
HadamardLoops hadamard_loops(double lx, double ly, double x0 = 0.0,
                             double y0 = 0.0);

/// Closed-form holonomy of a rectangle: a rotation by surface_sigma(loop)
/// about Y for XR1 loops and about X for YR1 loops.
QubitGate holonomy(const RectLoop& loop);

/// holonomy(y_loop) * holonomy(x_loop) for hadamard_loops(lx, ly); equals
/// hadamard_target() scaled by -i up to rounding.
QubitGate hadamard_gate(double lx, double ly);

}  // namespace hqc
