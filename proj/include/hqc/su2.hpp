#pragma once

#include <array>
#include <complex>

namespace hqc {

using Complex = std::complex<double>;

/// Dense 2x2 complex matrix with value semantics, row-major storage.
/// The named constructors below produce unitaries up to rounding; raw
/// entries given to from_entries are stored verbatim.
class QubitGate {
 public:
  QubitGate()
      : e_{Complex(1.0, 0.0), Complex(0.0, 0.0),
           Complex(0.0, 0.0), Complex(1.0, 0.0)} {}

  static QubitGate identity() { return QubitGate(); }
  static QubitGate from_entries(Complex e00, Complex e01, Complex e10,
                                Complex e11);

  Complex operator()(int row, int col) const { return e_[2 * row + col]; }

  QubitGate adjoint() const;
  QubitGate scaled(Complex factor) const;
  Complex determinant() const;
  Complex trace() const;

  /// Max-norm of U†U - I; ~1e-15 for anything produced by axis_rotation.
  double unitarity_defect() const;

  friend QubitGate operator*(const QubitGate& lhs, const QubitGate& rhs);

 private:
  std::array<Complex, 4> e_;
};

/// Largest entrywise |lhs_ij - rhs_ij|.
double max_norm_diff(const QubitGate& lhs, const QubitGate& rhs);

enum class PauliAxis { X, Y, Z };

QubitGate pauli(PauliAxis axis);

/// exp(-i * angle * pauli(axis)).  Closed form: cos(angle) I - i sin(angle) P.
QubitGate axis_rotation(PauliAxis axis, double angle);

/// Matrix product second * first: `first` acts on the state first.
QubitGate compose(const QubitGate& second, const QubitGate& first);

/// The standard Hadamard matrix (1/sqrt(2)) [[1, 1], [1, -1]].
/// Control-loop composition lands on (-i) times this; scale accordingly
/// when comparing.
QubitGate hadamard_target();

/// |<j| target† actual |j>| for basis_index j in {0, 1}.  Both gates are
/// expected in the same overall-phase normalization.
double basis_fidelity(const QubitGate& target, const QubitGate& actual,
                      int basis_index);

}  // namespace hqc
