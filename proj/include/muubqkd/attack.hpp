#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "muubqkd/linalg.hpp"
#include "muubqkd/qstate.hpp"

namespace muubqkd {

// Symmetric forward-path attack. Q is the flip probability induced on the
// travelling qubit, x the angle between the no-flip ancillas (<E00|E11> =
// F cos x) and y the angle between the flip ancillas (<E01|E10> = Q cos y).
struct AttackParams {
  double q = 0.0;
  double x = 0.0;
  double y = 0.0;

  double fidelity() const { return 1.0 - q; }
  double alpha() const { return fidelity() * std::cos(x) - q * std::cos(y); }

  // Throws std::domain_error unless Q in [0, 0.5] and the angles are finite.
  void validate() const;

  // Disturbance fixed by the angles: F = (1+cos y)/(2 + (cos y - cos x)).
  // The result always satisfies the symmetric-disturbance constraint
  // F(1 - cos x) = Q(1 + cos y).
  static AttackParams from_angles(double x, double y);

  // Fix (Q, cos y) and solve the symmetric-disturbance constraint for x.
  static AttackParams from_disturbance(double q, double cos_y);

  // Unconstrained construction from the raw overlaps.
  static AttackParams from_overlaps(double q, double cos_x, double cos_y);
};

using Vec4 = std::array<double, 4>;

double dot(const Vec4& a, const Vec4& b);

// Explicit real realization of the four ancilla states. E00/E11 span the
// no-flip plane, E01/E10 the flip plane, so all cross overlaps vanish:
//   <E00|E00> = <E11|E11> = F,   <E01|E01> = <E10|E10> = Q,
//   <E00|E11> = F cos x,         <E01|E10> = Q cos y.
struct AncillaSet {
  Vec4 e00, e01, e10, e11;
};

AncillaSet build_ancillas(const AttackParams& params);

// The same interaction expressed in the theta preparation basis:
//   Eq00 = C1 E00 + C2 E01 + C2 E10 + C3 E11
//   Eq01 = C2 E00 - C1 E01 + C3 E10 - C2 E11
//   Eq10 = C2 E00 + C3 E01 - C1 E10 - C2 E11
//   Eq11 = C3 E00 - C2 E01 - C2 E10 + C1 E11
// with C1 = cos²(t/2), C2 = cos(t/2) sin(t/2), C3 = sin²(t/2). The Gram
// spectrum of the resulting joint states is theta-independent.
AncillaSet basis_change_ancillas(double theta, const AncillaSet& anc);

// Weighted Gram matrix (1/4) <Psi_i|Psi_j> of the four equiprobable
// post-encoding joint states; its spectrum equals that of the joint
// Bob-Eve density operator.
Matrix gram_matrix(const AttackParams& params);

struct GramSpectrum {
  double alpha;         // F cos x - Q cos y
  double a;             // sqrt(alpha² + 1)
  double lambda_plus;   // (2 + sqrt(2 alpha² + 2)) / 8, multiplicity 2
  double lambda_minus;  // (2 - sqrt(2 alpha² + 2)) / 8, multiplicity 2
};

// Closed-form spectrum of gram_matrix. Throws std::domain_error when
// |alpha| > 1 + 1e-9.
GramSpectrum lambda_closed(double alpha);

// -sum lambda_i log2 lambda_i over the spectrum, with 0 log 0 = 0.
// Requires a symmetric PSD matrix of unit trace (tolerance 1e-9).
double von_neumann_entropy(const Matrix& m);

// Eve's information h((2 - a sqrt 2)/4) with a = sqrt([1-2Q(1+cos y)]² + 1),
// assuming the symmetric-disturbance constraint. Q in [0, 0.5].
double eve_information_general(double q, double cos_y);

// Optimal line cos y = 1: h( (1 - sqrt((1-4Q)² + 1)/sqrt 2) / 2 ).
// Q in [0, 0.25]; monotone nondecreasing, max ~0.6009 at Q = 0.25.
double eve_information_optimal(double q);

// Baseline protocol with orthogonal encodings: h(1 - 2Q), Q in [0, 0.25].
double lm05_eve_information(double q);

// ---- joint qubit (x) ancilla evolution ----

// Pure state of the travelling qubit together with Eve's ancilla;
// amp[m * anc_dim + k] is the amplitude of |m>|k>. anc_dim == 1 when no
// attack is attached.
struct JointState {
  std::size_t anc_dim = 1;
  std::vector<complexd> amp;

  static JointState pure(const Ket2& state);
};

// Forward interaction by linearity of U|b>|E> = |b>|E_bb> + |b̄>|E_bb̄>.
JointState attach_ancillas(const Ket2& prep, const AncillaSet& anc);

// (U ⊗ I_E) |state>
void apply_qubit_unitary(JointState& state, const Unitary2& u);

// Born probabilities of the two outcomes when only the qubit is measured.
std::array<double, 2> outcome_probabilities(const JointState& state,
                                            const EquatorBasis& basis);

enum class Encoding { kIdentity, kRotate };

struct InducedError {
  double q_forward;              // control-mode flip probability
  double q_backward_conclusive;  // P(wrong | conclusive) in encoding mode
};

// Exact error probabilities the attack induces on a theta-basis preparation,
// from the joint pure-state evolution through the given encoding to the
// receiver's measurement. q_forward equals Q for every theta when the
// parameters satisfy the symmetric-disturbance constraint.
InducedError attack_induced_error(double theta, const AttackParams& params,
                                  Encoding encoding);

}  // namespace muubqkd
