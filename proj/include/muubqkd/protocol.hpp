#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "muubqkd/attack.hpp"
#include "muubqkd/qstate.hpp"
#include "muubqkd/random.hpp"

namespace muubqkd {

struct NoiseSpec {
  enum class Kind { kNone, kRotation, kDepolarize };

  Kind kind = Kind::kNone;
  double value = 0.0;  // rotation angle (radians) or replacement probability

  static NoiseSpec none() { return {}; }
  static NoiseSpec rotation(double delta);
  static NoiseSpec depolarize(double p);

  void validate() const;  // throws std::invalid_argument
};

// rotation(delta) applies ry(delta); depolarize(p) replaces the state with a
// uniformly random theta-circle state with probability p.
Ket2 apply_noise(const Ket2& state, const NoiseSpec& spec, RandomStream& rand);

struct SessionConfig {
  std::uint64_t n_pulses = 0;
  double control_prob = 0.5;
  std::vector<double> bases{0.0, kHalfPi};
  NoiseSpec noise_forward;
  NoiseSpec noise_backward;
  std::optional<AttackParams> attack;
  std::uint64_t seed = 0;
  // Control mode: when set, Alice draws her measurement basis uniformly from
  // `bases` and mismatched rounds are discarded. Default keeps her basis
  // equal to the preparation basis.
  bool random_cm_basis = false;
  // Report the conclusive fraction relative to all pulses instead of
  // encoding-mode rounds only.
  bool sift_rate_per_pulse = false;

  void validate() const;  // throws std::invalid_argument
};

enum class Mode { kEncoding, kControl };
enum class MeasChoice { kSame, kRotated };

struct Verdict {
  bool conclusive = false;
  int bit = 0;  // inferred encoding bit, meaningful only when conclusive

  bool operator==(const Verdict&) const = default;
};

// Exclusion decoding. With preparation |b> in the theta basis and encodings
// {I, R = ry(-pi/2)}:
//   same basis, outcome flipped          -> I impossible  -> conclusive(1)
//   rotated basis (theta + pi/2), outcome == b -> R impossible -> conclusive(0)
// every other outcome is consistent with both encodings and is discarded.
Verdict sift(double prep_theta, int prep_bit, MeasChoice choice,
             int outcome_bit);

struct SiftRecord {
  std::uint64_t round = 0;
  Mode mode = Mode::kEncoding;
  double theta = 0.0;
  int prep_bit = 0;
  int encoding_bit = -1;  // -1 for control rounds
  MeasChoice meas_choice = MeasChoice::kSame;
  int outcome_bit = 0;
  Verdict verdict;
  bool discarded = false;  // control round with mismatched basis
  bool correct = false;
};

struct SessionStats {
  std::uint64_t n_pulses = 0;
  std::uint64_t cm_rounds = 0;
  std::uint64_t cm_used = 0;
  std::uint64_t cm_discarded = 0;
  std::uint64_t cm_errors = 0;
  std::uint64_t em_rounds = 0;
  std::uint64_t em_conclusive = 0;
  std::uint64_t em_inconclusive = 0;
  std::uint64_t em_errors = 0;  // wrong conclusive decodings

  double q_hat = 0.0;     // cm_errors / cm_used
  double q_ab_hat = 0.0;  // em_errors / em_conclusive
  double sift_rate = 0.0;
};

// Two-MUUB protocol session: encoding mode with Alice's uniform choice of
// {I, ry(-pi/2)} and Bob's uniform {same, rotated} measurement, control mode
// with probability control_prob. Deterministic given the seed.
SessionStats run_session(const SessionConfig& config,
                         std::vector<SiftRecord>* log = nullptr);

// Baseline session: encodings {I, iY}, Bob measures in the preparation
// basis, every encoding round decodes (flip detected = bit 1).
SessionStats run_lm05_session(const SessionConfig& config,
                              std::vector<SiftRecord>* log = nullptr);

}  // namespace muubqkd
