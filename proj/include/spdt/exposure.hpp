#pragma once
// Airborne infection-risk model for one SPDT link: particle concentration
// around an infected host, inhaled dose over the neighbor's window, and the
// dose-response infection probability.
//
// Concentration follows V dC/dt = g - b V C: while the host is present
//   C(t) = g/(bV) (1 - e^{-b(t - t_s)}),
// and after it leaves the field decays as C(t_l) e^{-b(t - t_l)}.
// Integrating p*C(t) over the neighbor window [t_s2, t_l2] gives the dose
//   E_l = g p/(V b^2) [ b(t_i - t_s2) + e^{b t_l}(e^{-b t_i} - e^{-b t_l2})
//                       + e^{b t_s}(e^{-b t_l2} - e^{-b t_s2}) ]
// where t_i marks the end of the concurrent part of the window: t_l2 for a
// DirectOnly link, t_l for Mixed, t_s2 for IndirectOnly; if the neighbor
// arrives before the host, t_s is first clamped to t_s2.

#include "spdt/contact.hpp"
#include "spdt/rng.hpp"

namespace spdt {

struct ExposureParams {
  double g = 0.304;            // particle generation rate, PFU/s
  double p = 7.5 / 60000.0;    // pulmonary ventilation, m^3/s (7.5 L/min)
  double V = 2512.0;           // proximity air volume, m^3
  double sigma = 0.33;         // per-PFU infectiousness
};

// Particle decay time r (minutes) is drawn per link; b = 1/(60 r) per second.
struct DecayConfig {
  double r_min = 7.5;     // minutes
  double r_max = 300.0;   // minutes
  double r_median = 60.0; // population median r_t
};

// Concentration (particles/m^3) at time t for a host stay [t_s, t_l].
// t < t_s gives 0. Negative times are a domain error.
double concentration(double t, double t_s, double t_l, const ExposureParams& params,
                     double b);

// Inhaled dose (PFU) over one link. Evaluated per LinkKind in a factored form
// whose exponentials all have non-positive arguments, so raw epoch-scale
// timestamps cannot overflow.
double link_exposure(const SPDTLink& link, const ExposureParams& params, double b);

// P_I = 1 - e^{-sigma E}. Negative exposure is a domain error.
double infection_probability(double total_exposure, double sigma);

// Draw r with exact median r_median: with prob 1/2 uniform on
// [r_min, r_median], else uniform on [r_median, r_max]. Returns b = 1/(60 r).
// Invalid configs (not r_min < r_median < r_max) are a domain error.
double sample_decay_rate(const DecayConfig& cfg, Rng& rng);

}  // namespace spdt
