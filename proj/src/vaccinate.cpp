#include "spdt/vaccinate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace spdt {

namespace {

constexpr uint64_t kTagAcquaint = 0xACF;
constexpr uint64_t kTagPool = 0xF001;
constexpr uint64_t kTagRvOrder = 0x8F0;

// One stay of a host with its qualifying distinct-neighbor count.
struct Stay {
  NodeId host;
  int64_t t_s, t_l;
  int64_t d;  // distinct neighbors
};

// Group window links into stays and count distinct neighbors, honoring the
// direct-only filter (a neighbor counts if any of its links in the stay has a
// concurrent part).
std::vector<Stay> collect_stays(const TemporalContactNetwork& net, int window_days,
                                bool use_indirect) {
  const int64_t t_max = static_cast<int64_t>(window_days) * kSecondsPerDay;
  struct Rec {
    NodeId host;
    int64_t t_s, t_l;
    NodeId nbr;
    bool direct;
  };
  std::vector<Rec> recs;
  for (const auto& l : net.links) {
    if (l.t_s >= t_max) continue;
    recs.push_back(
        {l.host, l.t_s, l.t_l, l.nbr, classify_link(l) != LinkKind::IndirectOnly});
  }
  std::sort(recs.begin(), recs.end(), [](const Rec& a, const Rec& b) {
    return std::tie(a.host, a.t_s, a.t_l, a.nbr) < std::tie(b.host, b.t_s, b.t_l, b.nbr);
  });

  std::vector<Stay> stays;
  size_t i = 0;
  while (i < recs.size()) {
    size_t j = i;
    int64_t d = 0;
    while (j < recs.size() && recs[j].host == recs[i].host && recs[j].t_s == recs[i].t_s &&
           recs[j].t_l == recs[i].t_l) {
      // count each distinct neighbor once if any of its links qualifies
      size_t k = j;
      bool qualifies = false;
      while (k < recs.size() && recs[k].host == recs[i].host &&
             recs[k].t_s == recs[i].t_s && recs[k].t_l == recs[i].t_l &&
             recs[k].nbr == recs[j].nbr) {
        qualifies = qualifies || use_indirect || recs[k].direct;
        ++k;
      }
      if (qualifies) ++d;
      j = k;
    }
    if (d >= 1) stays.push_back({recs[i].host, recs[i].t_s, recs[i].t_l, d});
    i = j;
  }
  return stays;
}

}  // namespace

size_t LocationClassTable::class_of(int64_t d) const {
  if (d < 1) throw std::invalid_argument("class_of: need at least one contact");
  for (size_t i = 0; i < bounds.size(); ++i)
    if (d >= bounds[i].first && d <= bounds[i].second) return i;
  return bounds.size() - 1;  // beyond the last upper bound
}

std::vector<MovementProfile> build_movement_profiles(const TemporalContactNetwork& net,
                                                     int window_days,
                                                     const LocationClassTable& classes,
                                                     bool use_indirect) {
  const auto stays = collect_stays(net, window_days, use_indirect);
  std::vector<std::vector<int64_t>> freqs(net.node_count);
  for (const auto& s : stays) {
    if (s.host >= net.node_count) continue;
    if (freqs[s.host].empty()) freqs[s.host].assign(classes.size(), 0);
    ++freqs[s.host][classes.class_of(s.d)];
  }
  std::vector<MovementProfile> out;
  for (NodeId v = 0; v < net.node_count; ++v) {
    if (freqs[v].empty()) continue;
    out.push_back({v, std::move(freqs[v])});
  }
  return out;
}

double imv_class_weight(const LocationClassTable& classes, size_t class_idx, double beta) {
  if (class_idx >= classes.size()) throw std::invalid_argument("bad class index");
  if (!(beta > 0.0 && beta < 1.0))
    throw std::invalid_argument("imv_class_weight: beta must be in (0, 1)");
  const auto [lo, hi] = classes.bounds[class_idx];
  const double lg = std::log1p(-beta);
  return 0.5 * (2.0 - std::exp(static_cast<double>(lo) * lg) -
                std::exp(static_cast<double>(hi) * lg));
}

std::vector<double> rank_imv(const std::vector<MovementProfile>& profiles,
                             uint32_t node_count, const LocationClassTable& classes,
                             double beta) {
  std::vector<double> w(classes.size());
  for (size_t i = 0; i < classes.size(); ++i) w[i] = imv_class_weight(classes, i, beta);
  std::vector<double> score(node_count, 0.0);
  for (const auto& p : profiles) {
    if (p.node >= node_count) continue;
    double s = 0.0;
    for (size_t i = 0; i < p.freqs.size() && i < w.size(); ++i)
      s += static_cast<double>(p.freqs[i]) * w[i];
    score[p.node] = s;
  }
  return score;
}

std::vector<double> rank_imv_exact(const TemporalContactNetwork& net, int window_days,
                                   double beta, bool use_indirect) {
  if (!(beta > 0.0 && beta < 1.0))
    throw std::invalid_argument("rank_imv_exact: beta must be in (0, 1)");
  const auto stays = collect_stays(net, window_days, use_indirect);
  std::vector<double> score(net.node_count, 0.0);
  const double lg = std::log1p(-beta);
  for (const auto& s : stays) {
    if (s.host >= net.node_count) continue;
    score[s.host] += -std::expm1(static_cast<double>(s.d) * lg);  // 1-(1-beta)^d
  }
  return score;
}

std::vector<double> rank_imv_temporal(const TemporalContactNetwork& net, int window_days,
                                      double beta0, double t0_s, bool use_indirect) {
  if (!(beta0 > 0.0) || !(1.6 * beta0 < 1.0))
    throw std::invalid_argument("rank_imv_temporal: need 0 < 1.6*beta0 < 1");
  if (!(t0_s > 0.0)) throw std::invalid_argument("rank_imv_temporal: t0 must be positive");
  const auto stays = collect_stays(net, window_days, use_indirect);
  std::vector<double> score(net.node_count, 0.0);
  for (const auto& s : stays) {
    if (s.host >= net.node_count) continue;
    const double t_i = static_cast<double>(s.t_l - s.t_s);
    const double beta = 1.6 * beta0 * -std::expm1(-t_i / t0_s);
    if (beta <= 0.0) continue;  // zero-duration stay spreads nothing
    score[s.host] += -std::expm1(static_cast<double>(s.d) * std::log1p(-beta));
  }
  return score;
}

std::vector<std::vector<NodeId>> contact_partners(const TemporalContactNetwork& net,
                                                  int window_days, bool use_indirect) {
  const int64_t t_max = static_cast<int64_t>(window_days) * kSecondsPerDay;
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (const auto& l : net.links) {
    if (l.t_s >= t_max || l.host == l.nbr) continue;
    if (!use_indirect && classify_link(l) == LinkKind::IndirectOnly) continue;
    pairs.emplace_back(std::min(l.host, l.nbr), std::max(l.host, l.nbr));
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  std::vector<std::vector<NodeId>> adj(net.node_count);
  for (const auto& [u, v] : pairs) {
    if (u >= net.node_count || v >= net.node_count) continue;
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  return adj;
}

std::vector<double> rank_acquaintance(const TemporalContactNetwork& net, int window_days,
                                      uint64_t seed, bool use_indirect) {
  const auto partners = contact_partners(net, window_days, use_indirect);
  std::vector<double> score(net.node_count, 0.0);
  for (NodeId u = 0; u < net.node_count; ++u) {
    if (partners[u].empty()) continue;
    Rng r = Rng::stream(seed, kTagAcquaint, u);
    score[partners[u][r.below(partners[u].size())]] += 1.0;
  }
  return score;
}

std::vector<double> rank_degree(const TemporalContactNetwork& net, int window_days,
                                bool use_indirect) {
  const auto partners = contact_partners(net, window_days, use_indirect);
  std::vector<double> score(net.node_count, 0.0);
  for (NodeId u = 0; u < net.node_count; ++u)
    score[u] = static_cast<double>(partners[u].size());
  return score;
}

MassVaccinationResult apply_mass_vaccination(uint32_t node_count,
                                             std::span<const double> scores, double P,
                                             double F, uint64_t seed) {
  if (!(P >= 0.0 && P <= 1.0))
    throw std::invalid_argument("apply_mass_vaccination: P must be in [0, 1]");
  if (!(F > 0.0 && F <= 1.0))
    throw std::invalid_argument("apply_mass_vaccination: F must be in (0, 1]");
  if (!scores.empty() && scores.size() != node_count)
    throw std::invalid_argument("apply_mass_vaccination: scores/node_count mismatch");

  MassVaccinationResult res;
  res.requested = static_cast<size_t>(P * static_cast<double>(node_count));

  // Information pool: floor(F*N) distinct nodes by partial shuffle.
  std::vector<NodeId> pool(node_count);
  std::iota(pool.begin(), pool.end(), 0u);
  size_t pool_size = static_cast<size_t>(F * static_cast<double>(node_count));
  if (F >= 1.0) pool_size = node_count;
  if (pool_size < node_count) {
    Rng r = Rng::stream(seed, kTagPool);
    for (size_t i = 0; i < pool_size; ++i) {
      const size_t j = i + static_cast<size_t>(r.below(node_count - i));
      std::swap(pool[i], pool[j]);
    }
    pool.resize(pool_size);
  }

  const size_t take = std::min(res.requested, pool.size());
  res.shortfall = res.requested - take;

  if (scores.empty()) {
    // Random strategy: an order-independent shuffle of the pool.
    Rng r = Rng::stream(seed, kTagRvOrder);
    for (size_t i = 0; i + 1 < pool.size(); ++i) {
      const size_t j = i + static_cast<size_t>(r.below(pool.size() - i));
      std::swap(pool[i], pool[j]);
    }
  } else {
    std::sort(pool.begin(), pool.end(), [&](NodeId a, NodeId b) {
      if (scores[a] != scores[b]) return scores[a] > scores[b];
      return a < b;
    });
  }
  res.vaccinated.assign(pool.begin(), pool.begin() + static_cast<long>(take));
  std::sort(res.vaccinated.begin(), res.vaccinated.end());
  return res;
}

double efficiency(double z_ref, double z_vac) {
  if (!(z_ref > 0.0)) throw std::domain_error("efficiency: reference outbreak must be > 0");
  return (z_ref - z_vac) / z_ref * 100.0;
}

std::vector<bool> top_fraction_set(std::span<const double> scores, double P) {
  if (!(P >= 0.0 && P <= 1.0))
    throw std::invalid_argument("top_fraction_set: P must be in [0, 1]");
  const size_t n = scores.size();
  const size_t k = static_cast<size_t>(P * static_cast<double>(n));
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });
  std::vector<bool> in(n, false);
  for (size_t i = 0; i < k && i < n; ++i) in[order[i]] = true;
  return in;
}

}  // namespace spdt
