#include "spdt/exposure.hpp"

#include <cmath>
#include <stdexcept>

namespace spdt {

double concentration(double t, double t_s, double t_l, const ExposureParams& params,
                     double b) {
  if (b <= 0.0) throw std::domain_error("concentration: decay rate b must be positive");
  if (t < 0.0 || t_s < 0.0) throw std::domain_error("concentration: negative time");
  if (t_l < t_s) throw std::domain_error("concentration: stay ends before it starts");
  if (t < t_s) return 0.0;
  const double c_inf = params.g / (b * params.V);
  if (t <= t_l) return c_inf * -std::expm1(-b * (t - t_s));
  return c_inf * -std::expm1(-b * (t_l - t_s)) * std::exp(-b * (t - t_l));
}

double link_exposure(const SPDTLink& link, const ExposureParams& params, double b) {
  if (b <= 0.0) throw std::domain_error("link_exposure: decay rate b must be positive");
  const double K = params.g * params.p / (params.V * b * b);
  // An early-arriving neighbor inhales nothing before the source shows up:
  // the buildup clock starts no earlier than the neighbor can see it.
  const double ts = static_cast<double>(std::min(link.t_s, link.t_s2));
  const double tl = static_cast<double>(link.t_l);
  const double ts2 = static_cast<double>(link.t_s2);
  const double tl2 = static_cast<double>(link.t_l2);

  // Each branch is the window integral of p*C(t), factored so every
  // exponential argument is <= 0 (differences of ordered timestamps only).
  double e = 0.0;
  switch (classify_link(link)) {
    case LinkKind::DirectOnly:
      e = K * (b * (tl2 - ts2) + std::exp(-b * (tl2 - ts)) - std::exp(-b * (ts2 - ts)));
      break;
    case LinkKind::Mixed:
      e = K * (b * (tl - ts2) - std::expm1(-b * (tl2 - tl)) + std::exp(-b * (tl2 - ts)) -
               std::exp(-b * (ts2 - ts)));
      break;
    case LinkKind::IndirectOnly:
      // product form: buildup over the stay times the decay window; avoids
      // the cancellation the expanded four-term sum hits for short stays
      e = K * -std::expm1(-b * (tl - ts)) *
          (std::exp(-b * (ts2 - tl)) - std::exp(-b * (tl2 - tl)));
      break;
  }
  // The integrand is non-negative; tiny negatives are cancellation noise at
  // the kind boundaries.
  return e > 0.0 ? e : 0.0;
}

double infection_probability(double total_exposure, double sigma) {
  if (total_exposure < 0.0)
    throw std::domain_error("infection_probability: negative exposure");
  if (sigma < 0.0) throw std::domain_error("infection_probability: negative sigma");
  return -std::expm1(-sigma * total_exposure);
}

double sample_decay_rate(const DecayConfig& cfg, Rng& rng) {
  if (!(cfg.r_min < cfg.r_median && cfg.r_median < cfg.r_max))
    throw std::domain_error("sample_decay_rate: need r_min < r_median < r_max");
  const bool low_half = rng.uniform() < 0.5;
  const double r = low_half ? rng.uniform(cfg.r_min, cfg.r_median)
                            : rng.uniform(cfg.r_median, cfg.r_max);
  return 1.0 / (60.0 * r);
}

}  // namespace spdt
