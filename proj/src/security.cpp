#include "muubqkd/security.hpp"

#include <cmath>
#include <stdexcept>

#include "muubqkd/attack.hpp"

namespace muubqkd {

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error("binary_entropy: p out of [0, 1]");
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

double eve_information(Protocol protocol, double q) {
  return protocol == Protocol::kMuub2 ? eve_information_optimal(q)
                                      : lm05_eve_information(q);
}

double key_rate(Protocol protocol, double q, double q_ab) {
  if (!(q >= 0.0 && q <= kMaxQ + 1e-12))
    throw std::domain_error("key_rate: q out of [0, 0.25]");
  if (!(q_ab >= 0.0 && q_ab <= kMaxQab + 1e-12))
    throw std::domain_error("key_rate: q_ab out of [0, 0.5]");
  return 1.0 - eve_information(protocol, q) - binary_entropy(q_ab);
}

double threshold_area(Protocol protocol, std::size_t resolution) {
  if (resolution < 100)
    throw std::domain_error("threshold_area: resolution below 100");
  const double dq = kMaxQ / static_cast<double>(resolution);
  const double dqab = kMaxQab / static_cast<double>(resolution);
  const double cell = dq * dqab;

  double area = 0.0;
  for (std::size_t i = 0; i < resolution; ++i) {
    const double q = (static_cast<double>(i) + 0.5) * dq;
    const double ie = eve_information(protocol, q);
    for (std::size_t j = 0; j < resolution; ++j) {
      const double q_ab = (static_cast<double>(j) + 0.5) * dqab;
      if (1.0 - ie - binary_entropy(q_ab) > 0.0)
        area += cell;
      else
        break;  // h is increasing on [0, 0.5]: the rest of the row is out
    }
  }
  return area;
}

double qab_bound() {
  const double target = 1.0 - eve_information_optimal(kMaxQ);
  double lo = 0.0, hi = kMaxQab;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    (binary_entropy(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<IePoint> ie_curve(Protocol protocol, std::size_t steps) {
  if (steps < 2) throw std::domain_error("ie_curve: fewer than 2 steps");
  std::vector<IePoint> curve;
  curve.reserve(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    const double q =
        kMaxQ * static_cast<double>(k) / static_cast<double>(steps - 1);
    curve.push_back({q, eve_information(protocol, q)});
  }
  return curve;
}

KeyRateGrid keyrate_grid(Protocol protocol, std::size_t q_cells,
                         std::size_t qab_cells) {
  if (q_cells < 1 || qab_cells < 1)
    throw std::domain_error("keyrate_grid: empty grid");
  KeyRateGrid grid{protocol, q_cells, qab_cells, {}};
  grid.points.reserve(q_cells * qab_cells);
  const double dq = kMaxQ / static_cast<double>(q_cells);
  const double dqab = kMaxQab / static_cast<double>(qab_cells);
  for (std::size_t i = 0; i < q_cells; ++i) {
    const double q = (static_cast<double>(i) + 0.5) * dq;
    const double ie = eve_information(protocol, q);
    for (std::size_t j = 0; j < qab_cells; ++j) {
      const double q_ab = (static_cast<double>(j) + 0.5) * dqab;
      grid.points.push_back({q, q_ab, ie, 1.0 - ie - binary_entropy(q_ab)});
    }
  }
  return grid;
}

Classification classify_point(Protocol protocol, double q_hat,
                              double q_ab_hat) {
  const double rate = key_rate(protocol, q_hat, q_ab_hat);
  return {rate, rate > 0.0 ? Region::kDistillable : Region::kNonDistillable};
}

}  // namespace muubqkd
