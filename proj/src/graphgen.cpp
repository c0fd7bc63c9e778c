#include "spdt/graphgen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace spdt {

namespace {

// Stream tags; arbitrary but fixed so files regenerate bit-identically.
constexpr uint64_t kTagTimeline = 0xA11;
constexpr uint64_t kTagLambda = 0x1AB;
constexpr uint64_t kTagAdn = 0xAD0;

void check_prob(double p, const char* what) {
  if (!(p > 0.0 && p <= 1.0))
    throw std::invalid_argument(std::string(what) + " must be in (0, 1]");
}

}  // namespace

int64_t sample_active_period(double rho, Rng& rng) { return geometric1(rho, rng); }

int64_t sample_waiting_period(double q, Rng& rng) { return geometric1(q, rng); }

bool initial_state_active(double rho, double q, Rng& rng) {
  return rng.uniform() < q / (q + rho);
}

int64_t sample_activation_degree(double lambda, Rng& rng) {
  // Pr(d=k) = (1-lambda) lambda^{k-1} is Geom(1-lambda) on {1,2,...}
  return geometric1(1.0 - lambda, rng);
}

double sample_lambda(double alpha, double xi, double psi, Rng& rng) {
  const double xa = std::pow(xi, -alpha);
  const double pa = std::pow(psi, -alpha);
  const double u = rng.uniform();
  return std::pow(xa - u * (xa - pa), -1.0 / alpha);
}

int64_t sample_link_delay(double p_c, int64_t t_a, int64_t delta_steps, Rng& rng) {
  return truncated_geometric(p_c, t_a + delta_steps, rng);
}

int64_t sample_link_duration(double p_b, Rng& rng) { return geometric1(p_b, rng); }

double mixture_degree_pmf(int64_t k, double alpha, double xi, double psi) {
  if (k < 1) return 0.0;
  const double lnxi = std::log(xi);
  const double lnpsi = std::log(psi);
  // (psi^D - xi^D)/D evaluated stably; -> lnpsi - lnxi as D -> 0. The
  // expm1 form handles the cancellation near D = 0 but its argument can
  // overflow for large D, where the plain difference is already exact.
  auto pow_diff = [&](double D) {
    const double x = D * (lnpsi - lnxi);
    if (std::abs(x) > 0.5)
      return (std::exp(D * lnpsi) - std::exp(D * lnxi)) / D;
    const double frac = x == 0.0 ? 1.0 : std::expm1(x) / x;
    return std::exp(D * lnxi) * frac * (lnpsi - lnxi);
  };
  const double norm = alpha / (std::pow(xi, -alpha) - std::pow(psi, -alpha));
  const double kd = static_cast<double>(k);
  return norm * (pow_diff(kd - alpha - 1.0) - pow_diff(kd - alpha));
}

// --- NeighborSelector --------------------------------------------------------

NeighborSelector::NeighborSelector(const GraphGenParams& params, uint64_t seed)
    : params_(params) {
  const uint32_t n = params.N;
  contacts_.resize(n);
  today_.resize(n);
  lambda_.assign(n, params.lambda);
  if (params.heterogeneous) {
    for (uint32_t i = 0; i < n; ++i) {
      Rng r = Rng::stream(seed, kTagLambda, i);
      lambda_[i] = sample_lambda(params.alpha, params.xi, params.psi, r);
    }
    build_alias();
  }
}

void NeighborSelector::build_alias() {
  // Walker alias table; deterministic construction order.
  const size_t n = lambda_.size();
  alias_prob_.assign(n, 1.0);
  alias_idx_.resize(n);
  double total = 0.0;
  for (double l : lambda_) total += l;
  std::vector<double> scaled(n);
  for (size_t i = 0; i < n; ++i) {
    scaled[i] = lambda_[i] * static_cast<double>(n) / total;
    alias_idx_[i] = static_cast<uint32_t>(i);
  }
  std::vector<uint32_t> small, large;
  for (size_t i = 0; i < n; ++i)
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<uint32_t>(i));
  while (!small.empty() && !large.empty()) {
    uint32_t s = small.back();
    small.pop_back();
    uint32_t l = large.back();
    large.pop_back();
    alias_prob_[s] = scaled[s];
    alias_idx_[s] = l;
    scaled[l] -= 1.0 - scaled[s];
    (scaled[l] < 1.0 ? small : large).push_back(l);
  }
  // leftovers carry probability 1 (already initialized)
}

bool NeighborSelector::is_contact(NodeId u, NodeId v) const {
  const auto& snap = contacts_[u];
  if (std::find(snap.begin(), snap.end(), v) != snap.end()) return true;
  const auto& live = today_[u];
  return std::find(live.begin(), live.end(), v) != live.end();
}

size_t NeighborSelector::contact_count(NodeId u) const {
  return contacts_[u].size() + today_[u].size();
}

void NeighborSelector::add_contact_pair(NodeId a, NodeId b) {
  auto add = [this](NodeId u, NodeId v) {
    auto& s = contacts_[u];
    if (std::find(s.begin(), s.end(), v) == s.end()) s.push_back(v);
  };
  add(a, b);
  add(b, a);
}

NodeId NeighborSelector::select_neighbor(NodeId host, const std::vector<NodeId>& used,
                                         Rng& rng) {
  auto in_used = [&used](NodeId v) {
    return std::find(used.begin(), used.end(), v) != used.end();
  };
  const auto& snap = contacts_[host];
  const auto& live = today_[host];
  const double n_t = static_cast<double>(snap.size() + live.size());

  // Reinforcement: revisit a known contact with probability n_t/(n_t + eta).
  if (n_t > 0.0 && rng.uniform() < n_t / (n_t + params_.eta_reinf)) {
    std::vector<NodeId> avail;
    avail.reserve(snap.size() + live.size());
    for (NodeId v : snap)
      if (!in_used(v)) avail.push_back(v);
    for (NodeId v : live)
      if (!in_used(v)) avail.push_back(v);
    if (!avail.empty()) return avail[rng.below(avail.size())];
    // every known contact already used this activation; fall through
  }

  // Triadic closure: a contact of a contact, seen through the day snapshot.
  if (rng.uniform() < params_.mu) {
    std::vector<NodeId> cand;
    auto scan = [&](NodeId w) {
      for (NodeId v : contacts_[w])
        if (v != host && !is_contact(host, v) && !in_used(v)) cand.push_back(v);
    };
    for (NodeId w : snap) scan(w);
    for (NodeId w : live) scan(w);
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    if (!cand.empty()) {
      NodeId v = cand[rng.below(cand.size())];
      today_[host].push_back(v);
      return v;
    }
  }

  return pick_population(host, used, rng);
}

NodeId NeighborSelector::pick_population(NodeId host, const std::vector<NodeId>& used,
                                         Rng& rng) {
  const uint32_t n = params_.N;
  auto in_used = [&used](NodeId v) {
    return std::find(used.begin(), used.end(), v) != used.end();
  };
  auto eligible = [&](NodeId v) { return v != host && !is_contact(host, v) && !in_used(v); };

  for (int tries = 0; tries < 64; ++tries) {
    NodeId v;
    if (params_.heterogeneous) {
      uint32_t i = static_cast<uint32_t>(rng.below(n));
      v = rng.uniform() < alias_prob_[i] ? i : alias_idx_[i];
    } else {
      v = static_cast<NodeId>(rng.below(n));
    }
    if (eligible(v)) {
      today_[host].push_back(v);
      return v;
    }
  }

  // Rejection stalled (host knows almost everyone): enumerate what's left.
  std::vector<NodeId> elig;
  for (NodeId v = 0; v < n; ++v)
    if (eligible(v)) elig.push_back(v);
  if (elig.empty()) {
    // Saturated host: reuse an existing contact rather than failing.
    const auto& snap = contacts_[host];
    const auto& live = today_[host];
    const size_t total = snap.size() + live.size();
    if (total == 0) throw std::logic_error("select_neighbor: no candidates (N < 2?)");
    size_t k = rng.below(total);
    return k < snap.size() ? snap[k] : live[k - snap.size()];
  }
  NodeId v;
  if (params_.heterogeneous) {
    double total = 0.0;
    for (NodeId e : elig) total += lambda_[e];
    double u = rng.uniform() * total;
    size_t k = 0;
    for (; k + 1 < elig.size(); ++k) {
      u -= lambda_[elig[k]];
      if (u <= 0.0) break;
    }
    v = elig[k];
  } else {
    v = elig[rng.below(elig.size())];
  }
  today_[host].push_back(v);
  return v;
}

void NeighborSelector::merge_day() {
  // Host side first, then the mutual side; membership checks keep the sets
  // duplicate-free when both endpoints picked each other on the same day.
  auto add = [](std::vector<NodeId>& s, NodeId v) {
    if (std::find(s.begin(), s.end(), v) == s.end()) s.push_back(v);
  };
  const uint32_t n = static_cast<uint32_t>(contacts_.size());
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v : today_[u]) add(contacts_[u], v);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v : today_[u]) add(contacts_[v], u);
  for (NodeId u = 0; u < n; ++u) today_[u].clear();
}

// --- full generation ---------------------------------------------------------

TemporalContactNetwork generate_network(const GraphGenParams& params, uint64_t seed,
                                        int jobs) {
  if (params.N < 2) throw std::invalid_argument("generate_network: need N >= 2");
  if (params.T_days < 0) throw std::invalid_argument("generate_network: negative horizon");
  if (params.dt_s <= 0 || kSecondsPerDay % params.dt_s != 0)
    throw std::invalid_argument("generate_network: dt_s must divide a day");
  check_prob(params.rho, "rho");
  check_prob(params.q, "q");
  check_prob(params.p_c, "p_c");
  check_prob(params.p_break(), "p_b");
  if (!(params.lambda > 0.0 && params.lambda < 1.0) && !params.heterogeneous)
    throw std::invalid_argument("generate_network: lambda must be in (0, 1)");
  if (params.mu < 0.0 || params.mu > 1.0)
    throw std::invalid_argument("generate_network: mu must be in [0, 1]");
  if (params.eta_reinf < 0.0)
    throw std::invalid_argument("generate_network: eta must be non-negative");
  if (params.delta_steps < 0)
    throw std::invalid_argument("generate_network: negative delta");

  TemporalContactNetwork net;
  net.node_count = params.N;
  net.horizon_days = params.T_days;
  net.delta_s = params.delta_s();
  net.dt_s = params.dt_s;
  net.name = "generated";
  if (params.T_days == 0) {
    net.finalize();
    return net;
  }

  const int z = params.steps_per_day();
  const int64_t t_end = static_cast<int64_t>(params.T_days) * kSecondsPerDay;
  const int64_t total_steps = static_cast<int64_t>(params.T_days) * z;

  NeighborSelector selector(params, seed);
  const auto& lambdas = selector.lambdas();

  std::vector<Rng> stream(params.N, Rng(0));
  std::vector<int64_t> next_step(params.N, 0);
  std::vector<char> next_active(params.N, 0);
  for (uint32_t i = 0; i < params.N; ++i) {
    stream[i] = Rng::stream(seed, kTagTimeline, i);
    next_active[i] = initial_state_active(params.rho, params.q, stream[i]) ? 1 : 0;
  }

  std::vector<std::vector<SPDTLink>> day_links(params.N);
#if defined(_OPENMP)
  const int nthreads = jobs > 0 ? jobs : omp_get_max_threads();
#else
  (void)jobs;
#endif

  for (int day = 0; day < params.T_days; ++day) {
    const int64_t day_end = std::min<int64_t>(static_cast<int64_t>(day + 1) * z, total_steps);

#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic, 64) num_threads(nthreads)
#endif
    for (long long ii = 0; ii < static_cast<long long>(params.N); ++ii) {
      const NodeId i = static_cast<NodeId>(ii);
      Rng& rng = stream[i];
      auto& out = day_links[i];
      while (next_step[i] < day_end) {
        if (!next_active[i]) {
          next_step[i] += sample_waiting_period(params.q, rng);
          next_active[i] = 1;
          continue;
        }
        const int64_t s = next_step[i];
        const int64_t t_a = sample_active_period(params.rho, rng);
        next_step[i] = s + t_a;
        next_active[i] = 0;
        if (s >= total_steps) break;
        const int64_t t_s = s * params.dt_s;
        const int64_t t_l = std::min((s + t_a) * params.dt_s, t_end);

        const int64_t d = sample_activation_degree(lambdas[i], rng);
        std::vector<NodeId> used;
        used.reserve(static_cast<size_t>(d));
        for (int64_t k = 0; k < d; ++k) {
          const NodeId v = selector.select_neighbor(i, used, rng);
          used.push_back(v);
          const int64_t t_c = sample_link_delay(params.p_c, t_a, params.delta_steps, rng);
          const int64_t t_d = sample_link_duration(params.p_break(), rng);
          const int64_t t_s2 = t_s + t_c * params.dt_s;
          if (t_s2 >= t_end) continue;          // window never opens inside the horizon
          if (t_s2 > t_l + net.delta_s) continue;  // stay clamp broke the delay bound
          const int64_t t_l2 = std::min(t_s2 + t_d * params.dt_s, t_end);
          out.push_back({i, v, t_s, t_l, t_s2, t_l2, 0.0});
        }
      }
    }

    selector.merge_day();
    for (uint32_t i = 0; i < params.N; ++i) {
      net.links.insert(net.links.end(), day_links[i].begin(), day_links[i].end());
      day_links[i].clear();
    }
  }

  net.finalize();
  return net;
}

TemporalContactNetwork generate_adn_baseline(const AdnParams& params, uint64_t seed) {
  if (params.N < 2) throw std::invalid_argument("generate_adn_baseline: need N >= 2");
  if (params.m < 1 || static_cast<uint32_t>(params.m) >= params.N)
    throw std::invalid_argument("generate_adn_baseline: need 1 <= m < N");
  check_prob(params.activation_prob, "activation_prob");

  TemporalContactNetwork net;
  net.node_count = params.N;
  net.horizon_days = params.T_days;
  net.dt_s = params.dt_s;
  net.delta_s = 0;
  net.name = "adn";
  const int64_t steps = params.T_days * (kSecondsPerDay / params.dt_s);
  for (uint32_t i = 0; i < params.N; ++i) {
    Rng rng = Rng::stream(seed, kTagAdn, i);
    for (int64_t t = 0; t < steps; ++t) {
      if (rng.uniform() >= params.activation_prob) continue;
      std::vector<NodeId> picked;
      while (picked.size() < static_cast<size_t>(params.m)) {
        NodeId v = static_cast<NodeId>(rng.below(params.N));
        if (v == i) continue;
        if (std::find(picked.begin(), picked.end(), v) != picked.end()) continue;
        picked.push_back(v);
      }
      for (NodeId v : picked)
        net.links.push_back(
            {i, v, t * params.dt_s, (t + 1) * params.dt_s, t * params.dt_s,
             (t + 1) * params.dt_s, 0.0});
    }
  }
  net.finalize();
  return net;
}

}  // namespace spdt
