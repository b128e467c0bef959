#include "muubqkd/qstate.hpp"

#include <cmath>
#include <stdexcept>

namespace muubqkd {

double RandomStream::angle() { return uniform() * 2.0 * kPi; }

bool Ket2::is_normalized(double tol) const {
  return std::abs(norm_sq() - 1.0) <= tol;
}

complexd inner(const Ket2& u, const Ket2& v) {
  return std::conj(u.a0) * v.a0 + std::conj(u.a1) * v.a1;
}

bool same_up_to_phase(const Ket2& u, const Ket2& v, double tol) {
  return std::abs(std::abs(inner(u, v)) - 1.0) <= tol;
}

Ket2 Unitary2::apply(const Ket2& v) const {
  return {m00 * v.a0 + m01 * v.a1, m10 * v.a0 + m11 * v.a1};
}

Unitary2 Unitary2::dagger() const {
  return {std::conj(m00), std::conj(m10), std::conj(m01), std::conj(m11)};
}

Unitary2 operator*(const Unitary2& a, const Unitary2& b) {
  return {a.m00 * b.m00 + a.m01 * b.m10, a.m00 * b.m01 + a.m01 * b.m11,
          a.m10 * b.m00 + a.m11 * b.m10, a.m10 * b.m01 + a.m11 * b.m11};
}

bool Unitary2::is_unitary(double tol) const {
  const Unitary2 p = dagger() * (*this);
  return std::abs(p.m00 - 1.0) <= tol && std::abs(p.m11 - 1.0) <= tol &&
         std::abs(p.m01) <= tol && std::abs(p.m10) <= tol;
}

Unitary2 identity() { return {{1, 0}, {0, 0}, {0, 0}, {1, 0}}; }
Unitary2 pauli_x() { return {{0, 0}, {1, 0}, {1, 0}, {0, 0}}; }
Unitary2 pauli_y() { return {{0, 0}, {0, -1}, {0, 1}, {0, 0}}; }
Unitary2 pauli_z() { return {{1, 0}, {0, 0}, {0, 0}, {-1, 0}}; }

Unitary2 ry(double zeta) {
  if (!std::isfinite(zeta)) throw std::domain_error("ry: non-finite angle");
  const double c = std::cos(zeta / 2.0);
  const double s = std::sin(zeta / 2.0);
  return {{c, 0}, {-s, 0}, {s, 0}, {c, 0}};
}

std::pair<Ket2, Ket2> basis_states(double theta) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  return {Ket2{{c, 0}, {s, 0}}, Ket2{{s, 0}, {-c, 0}}};
}

Ket2 EquatorBasis::state(int index) const {
  auto [k0, k1] = basis_states(theta);
  return index == 0 ? k0 : k1;
}

double muub_overlap(const Unitary2& u, const Unitary2& v) {
  if (!u.is_unitary() || !v.is_unitary())
    throw std::domain_error("muub_overlap: input is not unitary");
  return std::norm((u.dagger() * v).trace());
}

double encode_overlap(double theta, double phi) {
  const double s = std::sin(theta);
  const double sp = std::sin(phi);
  return 0.5 + 0.5 * s * s * sp * sp;
}

int measure(const Ket2& state, const EquatorBasis& basis, RandomStream& rand) {
  const double p0 = std::norm(inner(basis.state(0), state));
  const double p1 = std::norm(inner(basis.state(1), state));
  return rand.uniform() * (p0 + p1) < p0 ? 0 : 1;
}

}  // namespace muubqkd
