#include "muubqkd/attack.hpp"

#include <cmath>
#include <stdexcept>

#include "muubqkd/security.hpp"

namespace muubqkd {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

double checked_cos_angle(double cos_value, const char* what) {
  if (!(cos_value >= -1.0 && cos_value <= 1.0))
    throw std::domain_error(std::string(what) + ": cosine out of [-1, 1]");
  return std::acos(cos_value);
}

}  // namespace

void AttackParams::validate() const {
  if (!(q >= 0.0 && q <= 0.5))
    throw std::domain_error("AttackParams: Q out of [0, 0.5]");
  if (!std::isfinite(x) || !std::isfinite(y))
    throw std::domain_error("AttackParams: non-finite angle");
}

AttackParams AttackParams::from_angles(double x, double y) {
  const double denom = 2.0 + (std::cos(y) - std::cos(x));
  if (denom <= 1e-12)
    throw std::domain_error("fidelity_from_angles: degenerate denominator");
  const double f = (1.0 + std::cos(y)) / denom;
  AttackParams params{1.0 - f, x, y};
  params.validate();
  return params;
}

AttackParams AttackParams::from_disturbance(double q, double cos_y) {
  if (!(q >= 0.0 && q < 1.0))
    throw std::domain_error("AttackParams: Q out of range");
  const double f = 1.0 - q;
  // F(1 - cos x) = Q(1 + cos y)  =>  cos x = (1 - 2Q - Q cos y) / F
  const double cos_x = (1.0 - 2.0 * q - q * cos_y) / f;
  AttackParams params{q, checked_cos_angle(cos_x, "from_disturbance"),
                      checked_cos_angle(cos_y, "from_disturbance")};
  params.validate();
  return params;
}

AttackParams AttackParams::from_overlaps(double q, double cos_x,
                                         double cos_y) {
  AttackParams params{q, checked_cos_angle(cos_x, "from_overlaps"),
                      checked_cos_angle(cos_y, "from_overlaps")};
  params.validate();
  return params;
}

double dot(const Vec4& a, const Vec4& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

AncillaSet build_ancillas(const AttackParams& params) {
  params.validate();
  const double rf = std::sqrt(params.fidelity());
  const double rq = std::sqrt(params.q);
  const double cx = std::cos(params.x / 2.0), sx = std::sin(params.x / 2.0);
  const double cy = std::cos(params.y / 2.0), sy = std::sin(params.y / 2.0);
  return {
      {rf * cx, rf * sx, 0.0, 0.0},   // e00
      {0.0, 0.0, rq * cy, rq * sy},   // e01
      {0.0, 0.0, rq * cy, -rq * sy},  // e10
      {rf * cx, -rf * sx, 0.0, 0.0},  // e11
  };
}

AncillaSet basis_change_ancillas(double theta, const AncillaSet& anc) {
  const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
  const double c1 = c * c, c2 = c * s, c3 = s * s;
  AncillaSet out;
  for (int k = 0; k < 4; ++k) {
    const double e00 = anc.e00[k], e01 = anc.e01[k];
    const double e10 = anc.e10[k], e11 = anc.e11[k];
    out.e00[k] = c1 * e00 + c2 * e01 + c2 * e10 + c3 * e11;
    out.e01[k] = c2 * e00 - c1 * e01 + c3 * e10 - c2 * e11;
    out.e10[k] = c2 * e00 + c3 * e01 - c1 * e10 - c2 * e11;
    out.e11[k] = c3 * e00 - c2 * e01 - c2 * e10 + c1 * e11;
  }
  return out;
}

Matrix gram_matrix(const AttackParams& params) {
  params.validate();
  const double al = params.alpha();
  const double r = 1.0 / kSqrt2;
  Matrix m(4);
  m(0, 0) = m(1, 1) = m(2, 2) = m(3, 3) = 1.0;
  m(0, 2) = m(2, 0) = r;
  m(0, 3) = m(3, 0) = al * r;
  m(1, 2) = m(2, 1) = -al * r;
  m(1, 3) = m(3, 1) = r;
  // Equiprobable weights 1/4 make the trace one and the spectrum equal to
  // that of the joint density operator.
  Matrix g(4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) g(i, j) = 0.25 * m(i, j);
  return g;
}

GramSpectrum lambda_closed(double alpha) {
  if (std::abs(alpha) > 1.0 + 1e-9)
    throw std::domain_error("lambda_closed: |alpha| > 1");
  const double root = std::sqrt(2.0 * alpha * alpha + 2.0);
  return {alpha, std::sqrt(alpha * alpha + 1.0), (2.0 + root) / 8.0,
          (2.0 - root) / 8.0};
}

double von_neumann_entropy(const Matrix& m) {
  if (!m.is_symmetric(1e-9))
    throw std::domain_error("von_neumann_entropy: matrix not symmetric");
  if (std::abs(m.trace() - 1.0) > 1e-9)
    throw std::domain_error("von_neumann_entropy: trace differs from one");
  double entropy = 0.0;
  for (double lambda : symmetric_eigenvalues(m)) {
    if (lambda < -1e-9)
      throw std::domain_error("von_neumann_entropy: negative eigenvalue");
    if (lambda <= 0.0) continue;  // 0 log 0 = 0
    entropy -= lambda * std::log2(lambda);
  }
  return entropy;
}

// (2 - a sqrt 2)/4 lies in [0, (2 - sqrt 2)/4] for |alpha| <= 1; roundoff in
// a * sqrt 2 can push the lower end a few ulp below zero.
static double entropy_argument(double a) {
  return std::max(0.0, (2.0 - a * kSqrt2) / 4.0);
}

double eve_information_general(double q, double cos_y) {
  if (!(q >= 0.0 && q <= 0.5))
    throw std::domain_error("eve_information_general: Q out of [0, 0.5]");
  if (!(cos_y >= -1.0 && cos_y <= 1.0))
    throw std::domain_error("eve_information_general: cos y out of [-1, 1]");
  const double alpha = 1.0 - 2.0 * q * (1.0 + cos_y);
  return binary_entropy(entropy_argument(std::sqrt(alpha * alpha + 1.0)));
}

double eve_information_optimal(double q) {
  if (!(q >= 0.0 && q <= 0.25 + 1e-12))
    throw std::domain_error("eve_information_optimal: Q out of [0, 0.25]");
  const double a = std::sqrt((1.0 - 4.0 * q) * (1.0 - 4.0 * q) + 1.0);
  return binary_entropy(entropy_argument(a));
}

double lm05_eve_information(double q) {
  if (!(q >= 0.0 && q <= 0.25 + 1e-12))
    throw std::domain_error("lm05_eve_information: Q out of [0, 0.25]");
  return binary_entropy(1.0 - 2.0 * q);
}

JointState JointState::pure(const Ket2& state) {
  return {1, {state.a0, state.a1}};
}

JointState attach_ancillas(const Ket2& prep, const AncillaSet& anc) {
  JointState joint{4, std::vector<complexd>(8)};
  for (int k = 0; k < 4; ++k) {
    joint.amp[k] = prep.a0 * anc.e00[k] + prep.a1 * anc.e10[k];
    joint.amp[4 + k] = prep.a0 * anc.e01[k] + prep.a1 * anc.e11[k];
  }
  return joint;
}

void apply_qubit_unitary(JointState& state, const Unitary2& u) {
  const std::size_t d = state.anc_dim;
  for (std::size_t k = 0; k < d; ++k) {
    const complexd a0 = state.amp[k];
    const complexd a1 = state.amp[d + k];
    state.amp[k] = u.m00 * a0 + u.m01 * a1;
    state.amp[d + k] = u.m10 * a0 + u.m11 * a1;
  }
}

std::array<double, 2> outcome_probabilities(const JointState& state,
                                            const EquatorBasis& basis) {
  const std::size_t d = state.anc_dim;
  std::array<double, 2> probs{0.0, 0.0};
  for (int m = 0; m < 2; ++m) {
    const Ket2 out = basis.state(m);
    for (std::size_t k = 0; k < d; ++k) {
      probs[m] += std::norm(std::conj(out.a0) * state.amp[k] +
                            std::conj(out.a1) * state.amp[d + k]);
    }
  }
  return probs;
}

InducedError attack_induced_error(double theta, const AttackParams& params,
                                  Encoding encoding) {
  const AncillaSet anc = build_ancillas(params);
  const EquatorBasis prep_basis{theta};
  const EquatorBasis rotated_basis{theta + kHalfPi};
  const Unitary2 enc_op =
      encoding == Encoding::kRotate ? ry(-kHalfPi) : identity();

  // Forward path: flip probability seen by a control measurement in the
  // preparation basis (identical for both preparation bits).
  const JointState fwd = attach_ancillas(prep_basis.state(0), anc);
  const double q_forward = outcome_probabilities(fwd, prep_basis)[1];

  // Backward path: probability of a wrong conclusive decoding, averaged over
  // the preparation bit and the uniform measurement choice. A conclusive
  // verdict arises from outcome 1-b in the same basis (announcing bit 1) or
  // outcome b in the rotated basis (announcing bit 0).
  double p_conclusive = 0.0;
  double p_wrong = 0.0;
  for (int b = 0; b < 2; ++b) {
    JointState joint = attach_ancillas(prep_basis.state(b), anc);
    apply_qubit_unitary(joint, enc_op);

    const double p_same = 0.25 * outcome_probabilities(joint, prep_basis)[1 - b];
    const double p_rot = 0.25 * outcome_probabilities(joint, rotated_basis)[b];
    p_conclusive += p_same + p_rot;
    p_wrong += encoding == Encoding::kIdentity ? p_same : p_rot;
  }
  const double q_backward = p_conclusive > 0.0 ? p_wrong / p_conclusive : 0.0;
  return {q_forward, q_backward};
}

}  // namespace muubqkd
