#include "hqc/su2.hpp"

#include <cmath>
#include <stdexcept>

namespace hqc {

namespace {
const Complex kI(0.0, 1.0);
}

QubitGate QubitGate::from_entries(Complex e00, Complex e01, Complex e10,
                                  Complex e11) {
  QubitGate g;
  g.e_ = {e00, e01, e10, e11};
  return g;
}

QubitGate QubitGate::adjoint() const {
  return from_entries(std::conj(e_[0]), std::conj(e_[2]), std::conj(e_[1]),
                      std::conj(e_[3]));
}

QubitGate QubitGate::scaled(Complex factor) const {
  return from_entries(factor * e_[0], factor * e_[1], factor * e_[2],
                      factor * e_[3]);
}

Complex QubitGate::determinant() const { return e_[0] * e_[3] - e_[1] * e_[2]; }

Complex QubitGate::trace() const { return e_[0] + e_[3]; }

double QubitGate::unitarity_defect() const {
  const QubitGate p = adjoint() * (*this);
  double defect = 0.0;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      const Complex expect = (r == c) ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
      defect = std::max(defect, std::abs(p(r, c) - expect));
    }
  }
  return defect;
}

QubitGate operator*(const QubitGate& lhs, const QubitGate& rhs) {
  return QubitGate::from_entries(
      lhs.e_[0] * rhs.e_[0] + lhs.e_[1] * rhs.e_[2],
      lhs.e_[0] * rhs.e_[1] + lhs.e_[1] * rhs.e_[3],
      lhs.e_[2] * rhs.e_[0] + lhs.e_[3] * rhs.e_[2],
      lhs.e_[2] * rhs.e_[1] + lhs.e_[3] * rhs.e_[3]);
}

double max_norm_diff(const QubitGate& lhs, const QubitGate& rhs) {
  double m = 0.0;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      m = std::max(m, std::abs(lhs(r, c) - rhs(r, c)));
    }
  }
  return m;
}

QubitGate pauli(PauliAxis axis) {
  switch (axis) {
    case PauliAxis::X:
      return QubitGate::from_entries(0.0, 1.0, 1.0, 0.0);
    case PauliAxis::Y:
      return QubitGate::from_entries(0.0, -kI, kI, 0.0);
    case PauliAxis::Z:
      return QubitGate::from_entries(1.0, 0.0, 0.0, -1.0);
  }
  throw std::domain_error("unknown Pauli axis");
}

QubitGate axis_rotation(PauliAxis axis, double angle) {
  if (!std::isfinite(angle)) {
    throw std::domain_error("rotation angle must be finite");
  }
  const double c = std::cos(angle);
  const Complex ms = -kI * std::sin(angle);
  switch (axis) {
    case PauliAxis::X:
      return QubitGate::from_entries(c, ms, ms, c);
    case PauliAxis::Y:
      return QubitGate::from_entries(c, -kI * ms, kI * ms, c);
    case PauliAxis::Z:
      return QubitGate::from_entries(c + ms, 0.0, 0.0, c - ms);
  }
  throw std::domain_error("unknown Pauli axis");
}

QubitGate compose(const QubitGate& second, const QubitGate& first) {
  return second * first;
}

QubitGate hadamard_target() {
  // sqrt(0.5) is the correctly rounded double for 1/sqrt(2); the
  // reciprocal form lands one ulp low.
  const double s = std::sqrt(0.5);
  return QubitGate::from_entries(s, s, s, -s);
}

double basis_fidelity(const QubitGate& target, const QubitGate& actual,
                      int basis_index) {
  if (basis_index != 0 && basis_index != 1) {
    throw std::domain_error("basis index must be 0 or 1");
  }
  const QubitGate overlap = target.adjoint() * actual;
  return std::abs(overlap(basis_index, basis_index));
}

}  // namespace hqc
