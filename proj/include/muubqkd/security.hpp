#pragma once

#include <cstddef>
#include <vector>

namespace muubqkd {

enum class Protocol { kMuub2, kLm05 };

// Analysis region: Q up to the point of maximal eavesdropper information,
// Q_AB up to the point of vanishing mutual information.
inline constexpr double kMaxQ = 0.25;
inline constexpr double kMaxQab = 0.5;

// Shannon binary entropy in bits, 0 log 0 = 0. p in [0, 1].
double binary_entropy(double p);

// Eavesdropper information curve for the given protocol, q in [0, 0.25].
double eve_information(Protocol protocol, double q);

// Secret key rate 1 - I_E(q) - h(q_ab); may be negative.
double key_rate(Protocol protocol, double q, double q_ab);

// Area (in Q x Q_AB units) of the positive-rate subregion of
// [0, 0.25] x [0, 0.5], midpoint-rule quadrature with `resolution` cells per
// axis (>= 100).
double threshold_area(Protocol protocol, std::size_t resolution);

// Largest q_ab admitting a positive rate when the eavesdropper is assumed to
// hold maximal information: solves h(q) = 1 - I_E(0.25) by bisection to
// 1e-10. Roughly 0.0791 for the two-MUUB protocol.
double qab_bound();

struct IePoint {
  double q;
  double i_e;
};

// `steps` uniform samples of the information curve on [0, 0.25], endpoints
// included. steps >= 2.
std::vector<IePoint> ie_curve(Protocol protocol, std::size_t steps);

struct KeyRatePoint {
  double q;
  double q_ab;
  double i_e;
  double rate;
};

struct KeyRateGrid {
  Protocol protocol;
  std::size_t q_cells = 0;
  std::size_t qab_cells = 0;
  std::vector<KeyRatePoint> points;  // row-major, q outer, cell midpoints
};

KeyRateGrid keyrate_grid(Protocol protocol, std::size_t q_cells,
                         std::size_t qab_cells);

enum class Region { kDistillable, kNonDistillable };

struct Classification {
  double rate;
  Region region;
};

// Distillable iff the key rate at the estimated operating point is positive.
Classification classify_point(Protocol protocol, double q_hat,
                              double q_ab_hat);

}  // namespace muubqkd
