// Acceptance suite: runs every top-level criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exits nonzero on any failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "cli_helpers.hpp"
#include "muubqkd/attack.hpp"
#include "muubqkd/protocol.hpp"
#include "muubqkd/qstate.hpp"
#include "muubqkd/security.hpp"
#include "oracles.hpp"

using namespace muubqkd;

namespace {

int failures = 0;

void report(int index, const char* name, bool ok, const std::string& detail) {
  std::printf("%s  %2d. %-28s %s\n", ok ? "PASS" : "FAIL", index, name,
              detail.c_str());
  if (!ok) ++failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double binomial_3sigma(double p, std::uint64_t n) {
  return 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

// 1. Overlap constants of the two encoding bases.
void criterion_muub_constants() {
  const Unitary2 first[2] = {identity(), pauli_y()};
  const Unitary2 second[2] = {ry(kHalfPi), ry(-kHalfPi)};
  double worst = 0.0;
  for (const auto& u : first)
    for (const auto& v : second)
      worst = std::max(worst, std::abs(muub_overlap(u, v) - 2.0));
  const double id = muub_overlap(identity(), identity());
  const bool ok = worst <= 1e-12 && std::abs(id - 4.0) <= 1e-12;
  report(1, "muub constants", ok,
         "max |overlap-2| = " + fmt(worst) + ", (I,I) = " + fmt(id));
}

// 2. Noiseless session: quarter sift rate, error-free conclusives.
void criterion_noiseless_session() {
  SessionConfig config;
  config.n_pulses = 100000;
  config.control_prob = 0.5;
  config.seed = 20240811;
  const SessionStats s = run_session(config);
  const double tol = binomial_3sigma(0.25, s.em_rounds);
  const bool ok = std::abs(s.sift_rate - 0.25) < tol && s.q_ab_hat == 0.0;
  report(2, "noiseless sift rate 1/4", ok,
         "sift_rate = " + fmt(s.sift_rate) + " (3sigma = " + fmt(tol) +
             "), q_ab_hat = " + fmt(s.q_ab_hat));
}

// 3. Eavesdropper maximum and the Gram-eigensolver oracle.
void criterion_eve_maximum() {
  const double peak = eve_information_optimal(0.25);
  bool ok = std::abs(peak - 0.6009) <= 1e-3;

  std::mt19937_64 gen(101);
  std::uniform_real_distribution<double> qd(0.0, 0.25);
  std::uniform_real_distribution<double> cy(-1.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double q = qd(gen);
    const double cos_y = cy(gen);
    const AttackParams p = AttackParams::from_disturbance(q, cos_y);
    const double oracle = von_neumann_entropy(gram_matrix(p)) - 1.0;
    worst = std::max(worst,
                     std::abs(eve_information_general(q, cos_y) - oracle));
  }
  ok = ok && worst <= 1e-9;
  report(3, "eve information maximum", ok,
         "I_E(0.25) = " + fmt(peak) + ", max |I_E - (S-1)| = " + fmt(worst));
}

// 4. Threshold areas of the positive-rate regions.
void criterion_threshold_areas() {
  const double muub2 = threshold_area(Protocol::kMuub2, 2000);
  const double lm05 = threshold_area(Protocol::kLm05, 2000);
  const bool ok = std::abs(muub2 - 0.037) <= 0.002 &&
                  std::abs(lm05 - 0.017) <= 0.002 && muub2 > lm05;
  report(4, "threshold areas", ok,
         "muub2 = " + fmt(muub2) + ", lm05 = " + fmt(lm05));
}

// 5. Gram spectrum is independent of the preparation basis.
void criterion_basis_independence() {
  std::mt19937_64 gen(202);
  std::uniform_real_distribution<double> full(0.0, 2.0 * kPi);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const AttackParams p = oracles::random_constrained_params(gen);
    const double theta = full(gen);
    const AncillaSet anc = build_ancillas(p);
    const auto base = symmetric_eigenvalues(gram_matrix(p));
    const auto changed = symmetric_eigenvalues(oracles::gram_of(
        oracles::joint_states(theta, basis_change_ancillas(theta, anc))));
    for (int k = 0; k < 4; ++k)
      worst = std::max(worst, std::abs(base[k] - changed[k]));
  }
  report(5, "basis independence", worst <= 1e-9,
         "max eigenvalue drift = " + fmt(worst));
}

// 6. Symmetric-disturbance law and the alpha identity.
void criterion_symmetric_disturbance() {
  std::mt19937_64 gen(303);
  std::uniform_real_distribution<double> full(0.0, 2.0 * kPi);
  double worst_q = 0.0, worst_id = 0.0;
  for (int i = 0; i < 100; ++i) {
    const AttackParams p = oracles::random_constrained_params(gen);
    worst_id = std::max(
        worst_id,
        std::abs(p.alpha() - (1.0 - 2.0 * p.q * (1.0 + std::cos(p.y)))));
    for (int j = 0; j < 5; ++j) {
      const double q_fwd =
          attack_induced_error(full(gen), p, Encoding::kIdentity).q_forward;
      worst_q = std::max(worst_q, std::abs(q_fwd - p.q));
    }
  }
  const bool ok = worst_q <= 1e-12 && worst_id <= 1e-12;
  report(6, "symmetric disturbance law", ok,
         "max |q_fwd - Q| = " + fmt(worst_q) +
             ", max identity residual = " + fmt(worst_id));
}

// 7. Standalone error bound under maximal eavesdropper information.
void criterion_qab_bound() {
  const double bound = qab_bound();
  report(7, "standalone q_ab bound", std::abs(bound - 0.0794) <= 1e-3,
         "bound = " + fmt(bound));
}

// 8. Attack-driven Monte Carlo and the operating-point classifier.
void criterion_attack_monte_carlo() {
  SessionConfig config;
  config.n_pulses = 200000;  // ~1e5 control rounds at c = 0.5
  config.control_prob = 0.5;
  config.seed = 424242;
  config.attack = AttackParams::from_disturbance(0.25, 1.0);
  const SessionStats s = run_session(config);
  const double tol = binomial_3sigma(0.25, s.cm_used);
  bool ok = std::abs(s.q_hat - 0.25) < tol;

  const auto good = classify_point(Protocol::kMuub2, 0.25, 0.05);
  const auto bad = classify_point(Protocol::kMuub2, 0.25, 0.10);
  ok = ok && good.region == Region::kDistillable &&
       bad.region == Region::kNonDistillable;
  report(8, "attack-driven monte carlo", ok,
         "q_hat = " + fmt(s.q_hat) + " over " + std::to_string(s.cm_used) +
             " control rounds (3sigma = " + fmt(tol) + "), rates " +
             fmt(good.rate) + " / " + fmt(bad.rate));
}

// 9. Baseline protocol: complete leakage at Q = 0.25, unit sift rate.
void criterion_lm05_baseline() {
  const double gain = lm05_eve_information(0.25);
  SessionConfig config;
  config.n_pulses = 100000;
  config.control_prob = 0.5;
  config.seed = 515151;
  const SessionStats s = run_lm05_session(config);
  const bool ok = gain == 1.0 && s.sift_rate == 1.0 && s.em_errors == 0 &&
                  s.cm_errors == 0;
  report(9, "lm05 baseline", ok,
         "I_E(0.25) = " + fmt(gain) + ", sift_rate = " + fmt(s.sift_rate) +
             ", errors = " + std::to_string(s.em_errors));
}

// 10. Byte-identical CLI output under a fixed seed.
void criterion_determinism() {
  const auto log_a = cli::temp_path("acc_rounds_a.csv");
  const auto log_b = cli::temp_path("acc_rounds_b.csv");
  const std::string base =
      "simulate --pulses 100000 --control-prob 0.5 --seed 7 --log ";
  const auto a = cli::run(base + log_a.string());
  const auto b = cli::run(base + log_b.string());
  const std::string csv_a = cli::read_file(log_a);
  const std::string csv_b = cli::read_file(log_b);
  const bool ok = a.exit_code == 0 && b.exit_code == 0 && !a.out.empty() &&
                  a.out == b.out && !csv_a.empty() && csv_a == csv_b;
  report(10, "byte determinism", ok,
         "json bytes = " + std::to_string(a.out.size()) +
             ", csv bytes = " + std::to_string(csv_a.size()));
  std::filesystem::remove(log_a);
  std::filesystem::remove(log_b);
}

}  // namespace

int main() {
  criterion_muub_constants();
  criterion_noiseless_session();
  criterion_eve_maximum();
  criterion_threshold_areas();
  criterion_basis_independence();
  criterion_symmetric_disturbance();
  criterion_qab_bound();
  criterion_attack_monte_carlo();
  criterion_lm05_baseline();
  criterion_determinism();

  if (failures == 0)
    std::printf("all criteria passed\n");
  else
    std::printf("%d criterion(s) failed\n", failures);
  return failures;
}
