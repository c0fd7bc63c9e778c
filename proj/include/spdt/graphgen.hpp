#pragma once
// Activity-driven generator for synthetic SPDT contact networks.
//
// Each node alternates geometric active/waiting periods (transition probs
// rho, q) on a dt_s-step clock. An active period of t_a steps is one stay
// [t_s, t_l]; it draws an activation degree d and creates d links. Each link
// picks a neighbor (reinforced toward the existing contact set, with triadic
// closure and attractiveness-weighted population draws), a creation delay
// t_c from a truncated geometric over the stay plus the indirect window, and
// a duration t_d; the neighbor window is [t_s + t_c*dt, + t_d*dt].

#include <cstdint>
#include <vector>

#include "spdt/contact.hpp"
#include "spdt/rng.hpp"

namespace spdt {

struct GraphGenParams {
  uint32_t N = 0;
  int T_days = 0;
  int64_t dt_s = 300;

  double rho = 0.085;  // active -> inactive transition prob
  double q = 0.0048;   // inactive -> active transition prob

  // Activation-degree law Pr(d=k) = (1-lambda) lambda^{k-1}; lambda is either
  // shared (homogeneous) or drawn per node from the bounded power law
  // f(x) = alpha x^{-(alpha+1)} / (xi^{-alpha} - psi^{-alpha}) on [xi, psi].
  bool heterogeneous = false;
  double lambda = 0.32;
  double alpha = 2.963, xi = 0.26, psi = 0.999;

  double p_c = 0.02;    // per-step link-creation prob (delay law)
  double p_b = 0.0;     // per-step link-break prob; 0 means "use rho"
  int delta_steps = 36; // indirect window in steps (3 h at 300 s)

  double eta_reinf = 0.1;  // reinforcement constant
  double mu = 0.4;         // triadic-closure fraction

  double p_break() const { return p_b > 0 ? p_b : rho; }
  int64_t delta_s() const { return delta_steps * dt_s; }
  int steps_per_day() const { return static_cast<int>(kSecondsPerDay / dt_s); }
};

// --- primitive samplers (exposed for direct testing) ------------------------

// t_a ~ Geom(rho) on {1,2,...}
int64_t sample_active_period(double rho, Rng& rng);
// t_w ~ Geom(q) on {1,2,...}
int64_t sample_waiting_period(double q, Rng& rng);

// Stationary state of the two-state chain: Active with prob q/(q+rho).
bool initial_state_active(double rho, double q, Rng& rng);

// d ~ Geom with Pr(d=k) = (1-lambda) lambda^{k-1}
int64_t sample_activation_degree(double lambda, Rng& rng);

// lambda_i from the bounded power law via inverse CDF:
// x = (xi^{-a} - U (xi^{-a} - psi^{-a}))^{-1/a}
double sample_lambda(double alpha, double xi, double psi, Rng& rng);

// t_c on {0..t_a+delta-1}, Pr(t)= p_c (1-p_c)^t / (1-(1-p_c)^{t_a+delta})
int64_t sample_link_delay(double p_c, int64_t t_a, int64_t delta_steps, Rng& rng);

// t_d ~ Geom(p_b) on {1,2,...}
int64_t sample_link_duration(double p_b, Rng& rng);

// Marginal activation-degree pmf under heterogeneous lambda:
// Pr(d=k) = integral of (1-x) x^{k-1} f(x) dx over [xi, psi], in closed form.
double mixture_degree_pmf(int64_t k, double alpha, double xi, double psi);

// --- neighbor selection machinery -------------------------------------------
// Exposed so the reinforcement / triadic-closure behavior is testable without
// running a whole generation. Contact sets are mutual; during a day a node
// sees others' sets as of the day start (snapshot) plus its own live picks,
// which makes generation independent of the node-processing order.

class NeighborSelector {
 public:
  NeighborSelector(const GraphGenParams& params, uint64_t seed);

  // Pick a partner for `host`, excluding `used` (this activation's picks).
  // New picks are appended to the host's live set.
  NodeId select_neighbor(NodeId host, const std::vector<NodeId>& used, Rng& rng);

  // Commit the day's picks into the shared snapshot (mutual) and clear the
  // live overlays. Call once per generated day, single-threaded.
  void merge_day();

  // Test/inspection helpers.
  void add_contact_pair(NodeId a, NodeId b);  // directly into the snapshot
  size_t contact_count(NodeId u) const;       // snapshot + live
  const std::vector<double>& lambdas() const { return lambda_; }

 private:
  NodeId pick_population(NodeId host, const std::vector<NodeId>& used, Rng& rng);
  bool is_contact(NodeId u, NodeId v) const;  // snapshot + live view of u

  const GraphGenParams params_;
  std::vector<std::vector<NodeId>> contacts_;  // snapshot, read-only in-day
  std::vector<std::vector<NodeId>> today_;     // per-host live picks
  std::vector<double> lambda_;                 // per-node attractiveness

  // Walker alias table over lambda_ for weighted population draws.
  std::vector<double> alias_prob_;
  std::vector<uint32_t> alias_idx_;
  void build_alias();
};

// Generate the full network. Deterministic given (params, seed); identical
// results for any `jobs` (0 = library default) because nodes advance on
// private streams and contact sets merge at day boundaries in node order.
TemporalContactNetwork generate_network(const GraphGenParams& params, uint64_t seed,
                                        int jobs = 0);

// Memoryless comparison baseline: every node activates each step with
// probability `activation_prob` and, when active, creates `m` links to
// uniformly random distinct others lasting exactly one step (direct only).
struct AdnParams {
  uint32_t N = 0;
  int T_days = 0;
  int64_t dt_s = 300;
  double activation_prob = 0.01;
  int m = 1;
};

TemporalContactNetwork generate_adn_baseline(const AdnParams& params, uint64_t seed);

}  // namespace spdt
