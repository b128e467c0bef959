#include "muubqkd/protocol.hpp"

#include <cmath>
#include <stdexcept>

namespace muubqkd {

namespace {

// Uniform theta-circle replacement state.
Ket2 random_equator_state(RandomStream& rand) {
  return basis_states(rand.angle()).first;
}

void apply_noise_joint(JointState& joint, const NoiseSpec& spec,
                       RandomStream& rand) {
  switch (spec.kind) {
    case NoiseSpec::Kind::kNone:
      return;
    case NoiseSpec::Kind::kRotation:
      apply_qubit_unitary(joint, ry(spec.value));
      return;
    case NoiseSpec::Kind::kDepolarize:
      // Replacement decouples the qubit from any attached ancilla; the
      // receiver's statistics then come from the fresh state alone.
      if (rand.uniform() < spec.value)
        joint = JointState::pure(random_equator_state(rand));
      return;
  }
}

int sample_outcome(const JointState& joint, const EquatorBasis& basis,
                   RandomStream& rand) {
  const auto p = outcome_probabilities(joint, basis);
  return rand.uniform() * (p[0] + p[1]) < p[0] ? 0 : 1;
}

struct SessionAccumulator {
  SessionStats stats;

  void control(bool discarded, bool error) {
    ++stats.cm_rounds;
    if (discarded) {
      ++stats.cm_discarded;
    } else {
      ++stats.cm_used;
      if (error) ++stats.cm_errors;
    }
  }

  void encoding(const Verdict& verdict, bool correct) {
    ++stats.em_rounds;
    if (verdict.conclusive) {
      ++stats.em_conclusive;
      if (!correct) ++stats.em_errors;
    } else {
      ++stats.em_inconclusive;
    }
  }

  SessionStats finish(const SessionConfig& config) {
    stats.n_pulses = config.n_pulses;
    if (stats.cm_used > 0)
      stats.q_hat = static_cast<double>(stats.cm_errors) /
                    static_cast<double>(stats.cm_used);
    if (stats.em_conclusive > 0)
      stats.q_ab_hat = static_cast<double>(stats.em_errors) /
                       static_cast<double>(stats.em_conclusive);
    const std::uint64_t denom =
        config.sift_rate_per_pulse ? config.n_pulses : stats.em_rounds;
    if (denom > 0)
      stats.sift_rate = static_cast<double>(stats.em_conclusive) /
                        static_cast<double>(denom);
    return stats;
  }
};

// One control round: preparation, forward noise, optional attack, Alice's
// measurement. Returns the record; shared by both protocols.
SiftRecord run_control_round(const SessionConfig& config,
                             const AncillaSet* anc, std::uint64_t round,
                             double theta, std::size_t basis_idx, int prep_bit,
                             const Ket2& noisy_prep, RandomStream& rand) {
  double meas_theta = theta;
  bool discarded = false;
  if (config.random_cm_basis) {
    const std::size_t alice_idx = rand.index(config.bases.size());
    if (alice_idx != basis_idx) {
      meas_theta = config.bases[alice_idx];
      discarded = true;
    }
  }
  const EquatorBasis meas_basis{meas_theta};
  int outcome;
  if (anc != nullptr) {
    const JointState joint = attach_ancillas(noisy_prep, *anc);
    outcome = sample_outcome(joint, meas_basis, rand);
  } else {
    outcome = measure(noisy_prep, meas_basis, rand);
  }

  SiftRecord rec;
  rec.round = round;
  rec.mode = Mode::kControl;
  rec.theta = theta;
  rec.prep_bit = prep_bit;
  rec.outcome_bit = outcome;
  rec.discarded = discarded;
  rec.correct = !discarded && outcome == prep_bit;
  return rec;
}

template <typename EncodingRound>
SessionStats run_generic(const SessionConfig& config,
                         std::vector<SiftRecord>* log,
                         EncodingRound&& encoding_round) {
  config.validate();
  std::optional<AncillaSet> anc;
  if (config.attack) anc = build_ancillas(*config.attack);
  const AncillaSet* anc_ptr = anc ? &*anc : nullptr;

  SessionAccumulator acc;
  if (log != nullptr) {
    log->clear();
    log->reserve(config.n_pulses);
  }

  for (std::uint64_t round = 0; round < config.n_pulses; ++round) {
    RandomStream rand = RandomStream::for_round(config.seed, round);
    const bool control = rand.uniform() < config.control_prob;
    const std::size_t basis_idx = rand.index(config.bases.size());
    const double theta = config.bases[basis_idx];
    const int prep_bit = rand.bit();
    const Ket2 prep = EquatorBasis{theta}.state(prep_bit);
    const Ket2 noisy = apply_noise(prep, config.noise_forward, rand);

    SiftRecord rec;
    if (control) {
      rec = run_control_round(config, anc_ptr, round, theta, basis_idx,
                              prep_bit, noisy, rand);
      acc.control(rec.discarded, !rec.discarded && !rec.correct);
    } else {
      JointState joint = anc_ptr != nullptr ? attach_ancillas(noisy, *anc_ptr)
                                            : JointState::pure(noisy);
      rec = encoding_round(config, round, theta, prep_bit, joint, rand);
      acc.encoding(rec.verdict, rec.correct);
    }
    if (log != nullptr) log->push_back(rec);
  }
  return acc.finish(config);
}

}  // namespace

NoiseSpec NoiseSpec::rotation(double delta) {
  NoiseSpec spec{Kind::kRotation, delta};
  spec.validate();
  return spec;
}

NoiseSpec NoiseSpec::depolarize(double p) {
  NoiseSpec spec{Kind::kDepolarize, p};
  spec.validate();
  return spec;
}

void NoiseSpec::validate() const {
  if (!std::isfinite(value))
    throw std::invalid_argument("NoiseSpec: non-finite parameter");
  if (kind == Kind::kDepolarize && !(value >= 0.0 && value <= 1.0))
    throw std::invalid_argument("NoiseSpec: probability out of [0, 1]");
}

Ket2 apply_noise(const Ket2& state, const NoiseSpec& spec,
                 RandomStream& rand) {
  switch (spec.kind) {
    case NoiseSpec::Kind::kNone:
      return state;
    case NoiseSpec::Kind::kRotation:
      return ry(spec.value).apply(state);
    case NoiseSpec::Kind::kDepolarize:
      if (rand.uniform() < spec.value) return random_equator_state(rand);
      return state;
  }
  return state;
}

void SessionConfig::validate() const {
  if (n_pulses < 1) throw std::invalid_argument("SessionConfig: no pulses");
  if (!(control_prob >= 0.0 && control_prob <= 1.0))
    throw std::invalid_argument("SessionConfig: control_prob out of [0, 1]");
  if (bases.empty()) throw std::invalid_argument("SessionConfig: no bases");
  for (std::size_t i = 0; i < bases.size(); ++i) {
    if (!std::isfinite(bases[i]))
      throw std::invalid_argument("SessionConfig: non-finite basis angle");
    for (std::size_t j = i + 1; j < bases.size(); ++j) {
      // Bases theta and theta + pi are the same projective measurement.
      const double d = std::remainder(bases[i] - bases[j], kPi);
      if (std::abs(d) < 1e-9)
        throw std::invalid_argument("SessionConfig: duplicate basis angle");
    }
  }
  noise_forward.validate();
  noise_backward.validate();
  if (attack) attack->validate();
}

Verdict sift(double /*prep_theta*/, int prep_bit, MeasChoice choice,
             int outcome_bit) {
  if (choice == MeasChoice::kSame && outcome_bit != prep_bit)
    return {true, 1};  // flip is impossible under I
  if (choice == MeasChoice::kRotated && outcome_bit == prep_bit)
    return {true, 0};  // ry(-pi/2) maps |b> onto the opposite rotated state
  return {false, 0};
}

SessionStats run_session(const SessionConfig& config,
                         std::vector<SiftRecord>* log) {
  const Unitary2 rotate = ry(-kHalfPi);
  auto em_round = [&rotate](const SessionConfig& cfg, std::uint64_t round,
                            double theta, int prep_bit, JointState& joint,
                            RandomStream& rand) {
    const int enc_bit = rand.bit();
    if (enc_bit == 1) apply_qubit_unitary(joint, rotate);
    apply_noise_joint(joint, cfg.noise_backward, rand);

    const MeasChoice choice =
        rand.bit() == 0 ? MeasChoice::kSame : MeasChoice::kRotated;
    const EquatorBasis meas_basis{
        choice == MeasChoice::kSame ? theta : theta + kHalfPi};
    const int outcome = sample_outcome(joint, meas_basis, rand);
    const Verdict verdict = sift(theta, prep_bit, choice, outcome);

    SiftRecord rec;
    rec.round = round;
    rec.mode = Mode::kEncoding;
    rec.theta = theta;
    rec.prep_bit = prep_bit;
    rec.encoding_bit = enc_bit;
    rec.meas_choice = choice;
    rec.outcome_bit = outcome;
    rec.verdict = verdict;
    rec.correct = verdict.conclusive && verdict.bit == enc_bit;
    return rec;
  };
  return run_generic(config, log, em_round);
}

SessionStats run_lm05_session(const SessionConfig& config,
                              std::vector<SiftRecord>* log) {
  const Unitary2 flip{{0, 0}, {1, 0}, {-1, 0}, {0, 0}};  // iY
  auto em_round = [&flip](const SessionConfig& cfg, std::uint64_t round,
                          double theta, int prep_bit, JointState& joint,
                          RandomStream& rand) {
    const int enc_bit = rand.bit();
    if (enc_bit == 1) apply_qubit_unitary(joint, flip);
    apply_noise_joint(joint, cfg.noise_backward, rand);

    // iY flips every theta-circle state onto its orthogonal partner, so the
    // preparation-basis outcome decodes the encoding directly.
    const int outcome = sample_outcome(joint, EquatorBasis{theta}, rand);
    const Verdict verdict{true, outcome == prep_bit ? 0 : 1};

    SiftRecord rec;
    rec.round = round;
    rec.mode = Mode::kEncoding;
    rec.theta = theta;
    rec.prep_bit = prep_bit;
    rec.encoding_bit = enc_bit;
    rec.meas_choice = MeasChoice::kSame;
    rec.outcome_bit = outcome;
    rec.verdict = verdict;
    rec.correct = verdict.bit == enc_bit;
    return rec;
  };
  return run_generic(config, log, em_round);
}

}  // namespace muubqkd
