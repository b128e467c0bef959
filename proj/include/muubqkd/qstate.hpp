#pragma once

#include <complex>
#include <numbers>
#include <utility>

#include "muubqkd/random.hpp"

namespace muubqkd {

using complexd = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHalfPi = std::numbers::pi / 2.0;

// Tolerance for exact state/operator algebra (normalization, unitarity).
inline constexpr double kAlgebraTol = 1e-12;
// Tolerance for phase-insensitive state comparison.
inline constexpr double kPhaseCompareTol = 1e-9;

// Two-level pure state a0|0> + a1|1>.
struct Ket2 {
  complexd a0{1.0, 0.0};
  complexd a1{0.0, 0.0};

  double norm_sq() const { return std::norm(a0) + std::norm(a1); }
  bool is_normalized(double tol = kAlgebraTol) const;
};

// <u|v>
complexd inner(const Ket2& u, const Ket2& v);

// True when |<u|v>| = 1 within tol, i.e. equal up to a global phase.
bool same_up_to_phase(const Ket2& u, const Ket2& v,
                      double tol = kPhaseCompareTol);

// 2x2 complex operator, row-major.
struct Unitary2 {
  complexd m00, m01, m10, m11;

  Ket2 apply(const Ket2& v) const;
  Unitary2 dagger() const;
  complexd trace() const { return m00 + m11; }
  bool is_unitary(double tol = kAlgebraTol) const;
};

Unitary2 operator*(const Unitary2& a, const Unitary2& b);

Unitary2 identity();
Unitary2 pauli_x();
Unitary2 pauli_y();
Unitary2 pauli_z();

// Rotation about the y axis: cos(zeta/2) I - i sin(zeta/2) Y. Real-valued:
// [[cos(zeta/2), -sin(zeta/2)], [sin(zeta/2), cos(zeta/2)]].
// Throws std::domain_error for non-finite input.
Unitary2 ry(double zeta);

// Preparation basis on the theta circle:
//   |0q> = cos(t/2)|0> + sin(t/2)|1>,   |1q> = sin(t/2)|0> - cos(t/2)|1>.
// The sign convention of |1q> is fixed so decoding tables are reproducible.
std::pair<Ket2, Ket2> basis_states(double theta);

// Measurement basis identified by its theta angle.
struct EquatorBasis {
  double theta = 0.0;

  Ket2 state(int index) const;
};

// Hilbert-Schmidt overlap |Tr(U† V)|²; constant 2 across the two unitary
// bases {I, Y} and {ry(±pi/2)}. Throws std::domain_error if an input is not
// unitary.
double muub_overlap(const Unitary2& u, const Unitary2& v);

// |<psi| ry(-pi/2) |psi>|² for |psi> = cos(t/2)|0> + e^{i phi} sin(t/2)|1>.
// Equals 1/2 + sin²(theta) sin²(phi) / 2; minimal (1/2) on the phi = 0
// circle, which is why preparation states are drawn from it.
double encode_overlap(double theta, double phi);

// Born-rule sample: returns 0 with probability |<0q|state>|², else 1.
// Deterministic given the stream state.
int measure(const Ket2& state, const EquatorBasis& basis, RandomStream& rand);

}  // namespace muubqkd
