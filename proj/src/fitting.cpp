#include "spdt/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

#include "spdt/numerics.hpp"

namespace spdt {

CipSamples extract_cip(const TemporalContactNetwork& net) {
  CipSamples s;
  if (net.dt_s <= 0) throw std::invalid_argument("extract_cip: network has no time step");

  // Group links into stays by (host, t_s, t_l).
  std::vector<size_t> order(net.links.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    const auto& x = net.links[a];
    const auto& y = net.links[b];
    return std::tie(x.host, x.t_s, x.t_l, x.t_s2, x.t_l2, x.nbr) <
           std::tie(y.host, y.t_s, y.t_l, y.t_s2, y.t_l2, y.nbr);
  });

  // Stays per node-day, zeros included.
  std::vector<int64_t> freq(static_cast<size_t>(net.node_count) *
                                static_cast<size_t>(std::max(net.horizon_days, 0)),
                            0);

  size_t i = 0;
  while (i < order.size()) {
    const auto& first = net.links[order[i]];
    size_t j = i;
    while (j < order.size()) {
      const auto& l = net.links[order[j]];
      if (l.host != first.host || l.t_s != first.t_s || l.t_l != first.t_l) break;
      ++j;
    }
    const int64_t t_a = (first.t_l - first.t_s) / net.dt_s;
    if (t_a >= 1) {
      s.active_periods.push_back(t_a);
      s.degrees.push_back(static_cast<int64_t>(j - i));
      for (size_t k = i; k < j; ++k) {
        const auto& l = net.links[order[k]];
        s.link_delays.push_back((l.t_s2 - l.t_s) / net.dt_s);
        s.delay_ta.push_back(t_a);
        const int64_t t_d = (l.t_l2 - l.t_s2) / net.dt_s;
        if (t_d >= 1) s.link_durations.push_back(t_d);  // horizon clamp can zero it
      }
      const int d = day_of(first.t_s);
      if (d >= 0 && d < net.horizon_days && first.host < net.node_count)
        ++freq[static_cast<size_t>(first.host) * net.horizon_days + d];
    }
    i = j;
  }
  s.activation_freqs = std::move(freq);
  return s;
}

double fit_geometric(std::span<const int64_t> samples) {
  if (samples.empty()) throw std::invalid_argument("fit_geometric: no samples");
  int64_t total = 0;
  for (int64_t v : samples) {
    if (v < 1) throw std::invalid_argument("fit_geometric: samples must be >= 1");
    total += v;
  }
  return static_cast<double>(samples.size()) / static_cast<double>(total);
}

double fit_activation_q(std::span<const int64_t> freq_samples, double rho, int z) {
  if (freq_samples.empty()) throw std::invalid_argument("fit_activation_q: no samples");
  if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("fit_activation_q: bad rho");
  if (z <= 0) throw std::invalid_argument("fit_activation_q: bad z");
  int64_t total = 0;
  for (int64_t v : freq_samples) {
    if (v < 0) throw std::invalid_argument("fit_activation_q: negative frequency");
    total += v;
  }
  const double h = static_cast<double>(total) / static_cast<double>(freq_samples.size());
  if (h == 0.0) return 0.0;
  if (h >= z * rho)
    throw std::runtime_error("fit_activation_q: mean frequency " + std::to_string(h) +
                             " >= z*rho = " + std::to_string(z * rho) +
                             "; stationary rate unreachable");
  return h * rho / (z * rho - h);
}

namespace {

// d log L / dp for the truncated-geometric delay likelihood, in the two
// flavors. Terms of the form (1-p)^A are exp(A log1p(-p)).
double trunc_geom_score(double p, std::span<const int64_t> delays,
                        std::span<const int64_t> truncs, bool paired) {
  const size_t n = delays.size();
  const double log1mp = std::log1p(-p);
  int64_t delay_total = 0;
  for (int64_t t : delays) delay_total += t;

  if (paired) {
    // sum_k A_k (1-p)^{A_k-1} / (1 - (1-p)^{A_k})
    const double tail = kahan_transform_sum(n, [&](size_t k) {
      const double A = static_cast<double>(truncs[k]);
      const double qA = std::exp(A * log1mp);  // (1-p)^A
      return A * (qA / (1.0 - p)) / (1.0 - qA);
    });
    return static_cast<double>(n) / p - static_cast<double>(delay_total) / (1.0 - p) -
           tail;
  }
  // Marginal over the observed truncation-point set: the per-sample factor
  // p(1-p)^t is common, so the mixture collapses and the correction is the
  // ratio of two sums over the set.
  const size_t m = truncs.size();
  const double num = kahan_transform_sum(m, [&](size_t l) {
    const double A = static_cast<double>(truncs[l]);
    const double qA = std::exp(A * log1mp);
    const double denom = 1.0 - qA;
    return A * (qA / (1.0 - p)) / (denom * denom);
  });
  const double den = kahan_transform_sum(m, [&](size_t l) {
    const double A = static_cast<double>(truncs[l]);
    return 1.0 / (1.0 - std::exp(A * log1mp));
  });
  return static_cast<double>(n) / p - static_cast<double>(delay_total) / (1.0 - p) -
         static_cast<double>(n) * num / den;
}

}  // namespace

double fit_truncated_geometric(std::span<const int64_t> delays,
                               std::span<const int64_t> active_periods, int delta_steps,
                               bool paired) {
  if (delays.empty()) throw std::invalid_argument("fit_truncated_geometric: no delays");
  if (active_periods.empty())
    throw std::invalid_argument("fit_truncated_geometric: no active periods");
  if (paired && active_periods.size() != delays.size())
    throw std::invalid_argument("fit_truncated_geometric: paired mode needs one t_a per delay");
  std::vector<int64_t> truncs(active_periods.size());
  for (size_t i = 0; i < truncs.size(); ++i) {
    if (active_periods[i] < 1)
      throw std::invalid_argument("fit_truncated_geometric: t_a must be >= 1");
    truncs[i] = active_periods[i] + delta_steps;
  }
  for (int64_t t : delays)
    if (t < 0) throw std::invalid_argument("fit_truncated_geometric: negative delay");

  auto score = [&](double p) { return trunc_geom_score(p, delays, truncs, paired); };
  const double lo = 1e-9, hi = 1.0 - 1e-9;
  const double s_lo = score(lo), s_hi = score(hi);
  // The likelihood is increasing where the score is positive, so a score with
  // no sign change puts the optimum at the matching boundary.
  if (s_lo > 0.0 && s_hi > 0.0) return hi;
  if (s_lo < 0.0 && s_hi < 0.0) return lo;
  return bisect_root(score, lo, hi, 200, 1e-12);
}

namespace {

// Helpers for the degree-mixture score equations with psi = 1 and L = ln xi:
//   G(D) = (1 - xi^D)/D          (-> -L at D = 0)
//   H(D) = dG/dD = L xi^D / D + (1 - xi^D)/D^2
// both via series in D L near zero to dodge the 0/0.
double G_of(double D, double L) {
  const double x = D * L;
  if (std::fabs(x) < 1e-4) {
    // (1-e^x)/D = -L (1 + x/2 + x^2/6 + x^3/24)
    return -L * (1.0 + x * (0.5 + x * (1.0 / 6.0 + x / 24.0)));
  }
  return -std::expm1(x) / D;
}

// H(D) = -dG/dD = L xi^D / D + (1 - xi^D)/D^2; series near D L = 0.
double H_of(double D, double L) {
  const double x = D * L;
  if (std::fabs(x) < 1e-3) {
    // H = L^2 (1/2 + x/3 + x^2/8 + x^3/30 + ...)
    return L * L * (0.5 + x * (1.0 / 3.0 + x * (0.125 + x / 30.0)));
  }
  const double xiD = std::exp(x);
  return L * xiD / D + (1.0 - xiD) / (D * D);
}

struct DegreeHist {
  std::vector<int64_t> value;
  std::vector<int64_t> count;
  int64_t n = 0;
};

DegreeHist histogram(std::span<const int64_t> degrees) {
  std::map<int64_t, int64_t> m;
  for (int64_t d : degrees) {
    if (d < 1) throw std::invalid_argument("fit_powerlaw_degree: degrees must be >= 1");
    ++m[d];
  }
  DegreeHist h;
  for (auto [v, c] : m) {
    h.value.push_back(v);
    h.count.push_back(c);
    h.n += c;
  }
  return h;
}

// T(d) = G(d - beta - 1) - G(d - beta): the (unnormalized) mixture pmf factor.
double T_of(double d, double beta, double L) {
  return G_of(d - beta - 1.0, L) - G_of(d - beta, L);
}

double score_beta(double beta, double xi, const DegreeHist& h) {
  const double L = std::log(xi);
  const double n = static_cast<double>(h.n);
  // normalizer: d/dbeta of n[ln beta - ln(xi^-beta - 1)] = n/beta + n L/(1 - xi^beta)
  double s = n / beta + n * L / -std::expm1(beta * L);
  double acc = 0.0, comp = 0.0;
  for (size_t i = 0; i < h.value.size(); ++i) {
    const double d = static_cast<double>(h.value[i]);
    const double t = T_of(d, beta, L);
    // dT/dbeta = H(d-beta-1) - H(d-beta): chain rule in -beta with H = -G'
    const double dt = H_of(d - beta - 1.0, L) - H_of(d - beta, L);
    const double term = static_cast<double>(h.count[i]) * dt / t;
    const double y = term - comp;
    const double tt = acc + y;
    comp = (tt - acc) - y;
    acc = tt;
  }
  return s + acc;
}

double score_xi(double xi, double beta, const DegreeHist& h) {
  const double L = std::log(xi);
  const double n = static_cast<double>(h.n);
  // normalizer part: d/dxi of -n ln(xi^-beta - 1) = n beta xi^{-beta-1}/(xi^{-beta}-1)
  double s = n * beta * std::exp(-(beta + 1.0) * L) / std::expm1(-beta * L);
  double acc = 0.0, comp = 0.0;
  for (size_t i = 0; i < h.value.size(); ++i) {
    const double d = static_cast<double>(h.value[i]);
    const double t = T_of(d, beta, L);
    // dT/dxi = xi^{d-beta-2} (xi - 1)
    const double dt = std::exp((d - beta - 2.0) * L) * (xi - 1.0);
    const double term = static_cast<double>(h.count[i]) * dt / t;
    const double y = term - comp;
    const double tt = acc + y;
    comp = (tt - acc) - y;
    acc = tt;
  }
  return s + acc;
}

// Bracketed solve with the boundary convention of the other fitters: no sign
// change lands on the bound where the likelihood still increases.
double solve_score(const std::function<double(double)>& f, double lo, double hi,
                   bool* hit_boundary) {
  const double flo = f(lo), fhi = f(hi);
  if (flo > 0.0 && fhi > 0.0) {
    *hit_boundary = true;
    return hi;
  }
  if (flo < 0.0 && fhi < 0.0) {
    *hit_boundary = true;
    return lo;
  }
  return bisect_root(f, lo, hi, 200, 1e-12);
}

}  // namespace

PowerlawFit fit_powerlaw_degree(std::span<const int64_t> degrees, double alpha_init) {
  if (degrees.empty()) throw std::invalid_argument("fit_powerlaw_degree: no samples");
  if (!(alpha_init > 1.0 && alpha_init < 16.0))
    throw std::invalid_argument("fit_powerlaw_degree: alpha_init out of range");
  const DegreeHist hist = histogram(degrees);

  PowerlawFit fit;
  double beta = alpha_init;
  double xi = 0.5;
  const double xi_lo = 1e-6, xi_hi = 1.0 - 1e-6;
  const double beta_lo = 1.0 + 1e-6, beta_hi = 16.0;

  for (int it = 1; it <= 100; ++it) {
    bool b1 = false, b2 = false;
    const double xi_new =
        solve_score([&](double x) { return score_xi(x, beta, hist); }, xi_lo, xi_hi, &b1);
    const double beta_new = solve_score(
        [&](double b) { return score_beta(b, xi_new, hist); }, beta_lo, beta_hi, &b2);
    const bool done = std::fabs(beta_new - beta) < 1e-6 && std::fabs(xi_new - xi) < 1e-6;
    beta = beta_new;
    xi = xi_new;
    fit.iterations = it;
    fit.boundary = b1 || b2;
    if (done) {
      fit.converged = true;
      break;
    }
  }
  if (!fit.converged)
    throw std::runtime_error(
        "fit_powerlaw_degree: no convergence after 100 alternations (alpha=" +
        std::to_string(beta) + ", xi=" + std::to_string(xi) + ")");
  fit.alpha = beta;
  fit.xi = xi;
  return fit;
}

double rse(std::span<const double> observed, std::span<const double> reference) {
  if (observed.size() != reference.size())
    throw std::invalid_argument("rse: length mismatch");
  const double s = kahan_transform_sum(observed.size(), [&](size_t i) {
    const double d = observed[i] - reference[i];
    return d * d;
  });
  return std::sqrt(s);
}

std::vector<double> empirical_pmf(std::span<const int64_t> samples, int64_t lo,
                                  int64_t hi) {
  if (hi < lo) throw std::invalid_argument("empirical_pmf: empty range");
  std::vector<double> out(static_cast<size_t>(hi - lo + 1), 0.0);
  if (samples.empty()) return out;
  for (int64_t v : samples)
    if (v >= lo && v <= hi) out[static_cast<size_t>(v - lo)] += 1.0;
  const double n = static_cast<double>(samples.size());
  for (double& x : out) x /= n;
  return out;
}

}  // namespace spdt
