#pragma once
// Maximum-likelihood estimation of the generator parameters from observed
// contact samples, plus the root-squared-error goodness-of-fit metric.

#include <cstdint>
#include <span>
#include <vector>

#include "spdt/contact.hpp"

namespace spdt {

// Empirical samples of the co-location interaction parameters.
struct CipSamples {
  std::vector<int64_t> active_periods;    // t_a, steps, >= 1
  std::vector<int64_t> activation_freqs;  // activations per node-day, >= 0
  std::vector<int64_t> degrees;           // links per stay, >= 1
  std::vector<int64_t> link_delays;       // t_c, steps, >= 0
  std::vector<int64_t> delay_ta;          // paired t_a for each delay
  std::vector<int64_t> link_durations;    // t_d, steps, >= 1
};

// Read the samples off a (typically generated) network: stays are groups of
// links sharing (host, t_s, t_l); t_a = (t_l-t_s)/dt, d = links per stay,
// t_c = (t_s2-t_s)/dt, t_d = (t_l2-t_s2)/dt. Activation frequencies count
// stays per node-day over all node_count x horizon_days cells (zeros kept).
CipSamples extract_cip(const TemporalContactNetwork& net);

// Geometric MLE on {1,2,...}: rho_hat = m / sum(s).
double fit_geometric(std::span<const int64_t> samples);

// Inverts the stationary activation frequency q z rho/(q+rho) = h_bar:
// q_hat = h_bar rho / (z rho - h_bar). Infeasible when h_bar >= z rho.
double fit_activation_q(std::span<const int64_t> freq_samples, double rho, int z);

// Truncated-geometric MLE for the link-creation probability. The likelihood
// marginalizes each delay over the observed active-period set (truncation
// points A_l = t_a^l + delta); `paired` instead ties each delay to its own
// activation's truncation point. Solved by bisection on the score.
double fit_truncated_geometric(std::span<const int64_t> delays,
                               std::span<const int64_t> active_periods,
                               int delta_steps, bool paired = false);

struct PowerlawFit {
  double alpha = 0, xi = 0;
  bool converged = false;
  bool boundary = false;  // an estimate pinned at its search bound
  int iterations = 0;
};

// Alternating solve of the two score equations of the geometric/power-law
// degree mixture (upper support limit psi treated as 1): fix alpha, solve the
// xi score; fix xi, solve the alpha score; stop when both move < 1e-6.
PowerlawFit fit_powerlaw_degree(std::span<const int64_t> degrees, double alpha_init);

// Root squared error between two equal-length binned proportion vectors.
double rse(std::span<const double> observed, std::span<const double> reference);

// Proportions over unit-width bins lo..hi (inclusive): out[i] is the fraction
// of samples equal to lo+i. Samples outside the range are ignored.
std::vector<double> empirical_pmf(std::span<const int64_t> samples, int64_t lo,
                                  int64_t hi);

}  // namespace spdt
