#include "spdt/epidemic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace spdt {

namespace {

// Stream purposes. Keys are (run_seed, tag, day, id) unless noted.
constexpr uint64_t kTagDecay = 0xDECA;     // per (day, link index)
constexpr uint64_t kTagInfect = 0x1F;      // per (day, receiving node)
constexpr uint64_t kTagSeeds = 0x5EED;     // per run
constexpr uint64_t kTagSeedTau = 0x7A0;    // per seed node
constexpr uint64_t kTagDetect = 0xD7C;     // per (day, detected node)
constexpr uint64_t kTagRingRoll = 0x816;   // per (day, infected, candidate)

bool infectious_on(const CompartmentState& st, NodeId v, int day) {
  return st.status[v] == kInfectious && st.inf_start[v] <= day;
}

// Dose received by one neighbor from its day-d link range, in canonical link
// order. Shared by the grouped-parallel and serial paths so both accumulate
// in the exact same floating-point order.
double group_exposure(const TemporalContactNetwork& net, std::span<const SPDTLink> links,
                      const CompartmentState& st, const DiseaseParams& params, int day,
                      uint64_t run_seed, const uint32_t* idx, uint32_t begin,
                      uint32_t end) {
  (void)net;
  double e = 0.0;
  for (uint32_t k = begin; k < end; ++k) {
    const uint32_t li = idx[k];
    const SPDTLink& l = links[li];
    if (!infectious_on(st, l.host, day)) continue;
    Rng r = Rng::stream(run_seed, kTagDecay, static_cast<uint64_t>(day), li);
    const double b = sample_decay_rate(params.decay, r);
    e += link_exposure(l, params.exposure, b);
  }
  return e;
}

std::vector<NodeId> choose_seeds(uint32_t node_count, int count, uint64_t run_seed) {
  if (count < 0 || static_cast<uint32_t>(count) > node_count)
    throw std::invalid_argument("choose_seeds: seed count out of range");
  Rng rng = Rng::stream(run_seed, kTagSeeds);
  std::vector<NodeId> out;
  out.reserve(static_cast<size_t>(count));
  // Floyd's distinct sampler: k-th draw lands in a growing prefix.
  std::vector<char> taken(node_count, 0);
  for (uint32_t j = node_count - static_cast<uint32_t>(count); j < node_count; ++j) {
    NodeId t = static_cast<NodeId>(rng.below(j + 1));
    if (taken[t]) t = static_cast<NodeId>(j);
    taken[t] = 1;
    out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

DayGroups build_day_groups(const TemporalContactNetwork& net) {
  DayGroups g;
  g.link_idx.resize(net.links.size());
  const int days = net.horizon_days;
  g.day_offset.assign(static_cast<size_t>(std::max(days, 0)) + 1, 0);
  for (int d = 0; d < days; ++d) {
    const size_t lo = net.day_offset[static_cast<size_t>(d)];
    const size_t hi = net.day_offset[static_cast<size_t>(d) + 1];
    // Stable sort of the day's canonical range by receiver keeps the
    // canonical order inside each group.
    std::vector<uint32_t> idx(hi - lo);
    for (size_t i = lo; i < hi; ++i) idx[i - lo] = static_cast<uint32_t>(i);
    std::stable_sort(idx.begin(), idx.end(), [&](uint32_t a, uint32_t b) {
      return net.links[a].nbr < net.links[b].nbr;
    });
    for (size_t i = 0; i < idx.size(); ++i) g.link_idx[lo + i] = idx[i];
    size_t i = 0;
    while (i < idx.size()) {
      const NodeId nbr = net.links[idx[i]].nbr;
      size_t j = i;
      while (j < idx.size() && net.links[idx[j]].nbr == nbr) ++j;
      g.groups.push_back({nbr, static_cast<uint32_t>(lo + i), static_cast<uint32_t>(lo + j)});
      i = j;
    }
    g.day_offset[static_cast<size_t>(d) + 1] = static_cast<uint32_t>(g.groups.size());
  }
  return g;
}

DailyMetrics step_day(const TemporalContactNetwork& net, const DayGroups& groups,
                      CompartmentState& state, const DiseaseParams& params, int day,
                      uint64_t run_seed, const SimulationOptions& opts,
                      std::vector<int64_t>* ring_vaccinated_count) {
  DailyMetrics m;
  m.day = day;
  const uint32_t n = state.size();
  std::vector<int32_t> pending(n, -1);  // tau for nodes infected today

  const bool have_links =
      day >= 0 && static_cast<size_t>(day) + 1 < groups.day_offset.size();

  auto roll_infection = [&](NodeId v, double dose) {
    if (dose <= 0.0) return;
    const double p_i = infection_probability(dose, params.exposure.sigma);
    Rng r = Rng::stream(run_seed, kTagInfect, static_cast<uint64_t>(day), v);
    if (r.uniform() < p_i)
      pending[v] = static_cast<int32_t>(
          r.uniform_int(params.tau_min, params.tau_max));
  };

  if (have_links && opts.serial_reference) {
    // Reference: one pass over the day's links in grouped order (which is
    // how the canonical order reads when walked group by group).
    const uint32_t glo = groups.day_offset[static_cast<size_t>(day)];
    const uint32_t ghi = groups.day_offset[static_cast<size_t>(day) + 1];
    for (uint32_t gi = glo; gi < ghi; ++gi) {
      const auto& grp = groups.groups[gi];
      if (state.status[grp.nbr] != kSusceptible) continue;
      const double e = group_exposure(net, net.links, state, params, day, run_seed,
                                      groups.link_idx.data(), grp.begin, grp.end);
      roll_infection(grp.nbr, e);
    }
  } else if (have_links) {
    const uint32_t glo = groups.day_offset[static_cast<size_t>(day)];
    const uint32_t ghi = groups.day_offset[static_cast<size_t>(day) + 1];
#if defined(_OPENMP)
    const int nthreads = opts.jobs > 0 ? opts.jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 32) num_threads(nthreads)
#endif
    for (long long gi = glo; gi < static_cast<long long>(ghi); ++gi) {
      const auto& grp = groups.groups[static_cast<size_t>(gi)];
      if (state.status[grp.nbr] != kSusceptible) continue;
      const double e = group_exposure(net, net.links, state, params, day, run_seed,
                                      groups.link_idx.data(), grp.begin, grp.end);
      roll_infection(grp.nbr, e);
    }
  }

  // Commit the day's infections: infectious from tomorrow, for tau days.
  for (NodeId v = 0; v < n; ++v) {
    if (pending[v] < 0) continue;
    state.status[v] = kInfectious;
    state.inf_start[v] = day + 1;
    state.inf_end[v] = day + pending[v];
    ++m.I_n;
  }

  // Ring vaccination reacts to today's detected infections.
  int64_t ringed = 0;
  if (opts.ring && day >= opts.ring->deploy_day) {
    const RingConfig& ring = *opts.ring;
    for (NodeId v = 0; v < n; ++v) {
      if (pending[v] < 0) continue;
      Rng det = Rng::stream(run_seed, kTagDetect, static_cast<uint64_t>(day), v);
      if (det.uniform() >= ring.F_detect) continue;
      if (v >= ring.partners.size()) continue;
      for (NodeId w : ring.partners[v]) {
        if (state.status[w] != kSusceptible) continue;
        bool take;
        if (ring.threshold_mode) {
          take = w < ring.top_set.size() && ring.top_set[w];
        } else {
          Rng roll = Rng::stream(run_seed, kTagRingRoll, static_cast<uint64_t>(day), v, w);
          take = roll.uniform() < ring.P;
        }
        if (take) {
          state.status[w] = kRecovered;
          ++ringed;
        }
      }
    }
  }
  if (ring_vaccinated_count) ring_vaccinated_count->push_back(ringed);

  // Prevalence for the day, then end-of-day recoveries. Nodes committed
  // today have inf_start = day+1 and are excluded from both.
  for (NodeId v = 0; v < n; ++v) {
    if (state.status[v] != kInfectious || state.inf_start[v] > day) continue;
    ++m.I_p;
    if (state.inf_end[v] <= day) state.status[v] = kRecovered;
  }
  return m;
}

SimulationRun run_simulation(const TemporalContactNetwork& net, const DayGroups& groups,
                             const DiseaseParams& params, int horizon_days,
                             uint64_t seed, const SimulationOptions& opts) {
  if (horizon_days < 0) throw std::invalid_argument("run_simulation: negative horizon");
  if (params.tau_min < 1 || params.tau_max < params.tau_min)
    throw std::invalid_argument("run_simulation: bad infectious period");
  const uint32_t n = net.node_count;
  CompartmentState state(n);

  SimulationRun run;
  if (opts.vaccinated)
    for (NodeId v : *opts.vaccinated) {
      if (v >= n) throw std::invalid_argument("run_simulation: vaccinated id out of range");
      state.status[v] = kRecovered;
    }

  run.seeds = params.seed_nodes.empty()
                  ? choose_seeds(n, params.seed_count, seed)
                  : params.seed_nodes;
  for (NodeId v : run.seeds) {
    if (v >= n) throw std::invalid_argument("run_simulation: seed id out of range");
    if (state.status[v] != kSusceptible) continue;  // a vaccinated seed stays immune
    int tau = params.seed_tau;
    if (tau <= 0) {
      Rng r = Rng::stream(seed, kTagSeedTau, v);
      tau = static_cast<int>(r.uniform_int(params.tau_min, params.tau_max));
    }
    state.status[v] = kInfectious;
    state.inf_start[v] = 0;
    state.inf_end[v] = tau - 1;
  }

  int64_t cumulative = 0;
  std::vector<int64_t> prevalence;
  prevalence.reserve(static_cast<size_t>(horizon_days));
  const bool track_ring = opts.ring != nullptr;
  for (int day = 0; day < horizon_days; ++day) {
    DailyMetrics m = step_day(net, groups, state, params, day, seed, opts,
                              track_ring ? &run.ring_vaccinated : nullptr);
    cumulative += m.I_n;
    m.I_a = cumulative;
    prevalence.push_back(m.I_p);
    run.daily.push_back(m);
  }
  run.outbreak_size = cumulative;
  const double tau_mean = 0.5 * (params.tau_min + params.tau_max);
  run.mean_R = reproduction_rate(prevalence, tau_mean).mean;
  return run;
}

SimulationRun run_simulation(const TemporalContactNetwork& net,
                             const DiseaseParams& params, int horizon_days,
                             uint64_t seed, const SimulationOptions& opts) {
  const DayGroups groups = build_day_groups(net);
  return run_simulation(net, groups, params, horizon_days, seed, opts);
}

ReproductionSeries reproduction_rate(std::span<const int64_t> prevalence,
                                     double tau_mean, int delta_days) {
  if (delta_days < 1) throw std::invalid_argument("reproduction_rate: bad delta");
  ReproductionSeries out;
  double total = 0.0;
  for (size_t t = 0; t + static_cast<size_t>(delta_days) < prevalence.size(); ++t) {
    const int64_t a = prevalence[t];
    const int64_t b = prevalence[t + static_cast<size_t>(delta_days)];
    if (a <= 0 || b <= 0) continue;
    const double r = 1.0 + tau_mean / delta_days *
                               std::log(static_cast<double>(b) / static_cast<double>(a));
    out.values.emplace_back(static_cast<int>(t), r);
    total += r;
  }
  if (!out.values.empty()) out.mean = total / static_cast<double>(out.values.size());
  return out;
}

std::vector<NodeId> identify_hidden_spreaders(const TemporalContactNetwork& net,
                                              int window_days) {
  const int64_t t_max = static_cast<int64_t>(window_days) * kSecondsPerDay;
  std::vector<char> has_link(net.node_count, 0), has_direct(net.node_count, 0);
  for (const auto& l : net.links) {
    if (l.t_s >= t_max || l.host >= net.node_count) continue;
    has_link[l.host] = 1;
    if (classify_link(l) != LinkKind::IndirectOnly) has_direct[l.host] = 1;
  }
  std::vector<NodeId> out;
  for (NodeId v = 0; v < net.node_count; ++v)
    if (has_link[v] && !has_direct[v]) out.push_back(v);
  return out;
}

NodeClasses classify_nodes(const TemporalContactNetwork& net, int window_days) {
  const int64_t t_max = static_cast<int64_t>(window_days) * kSecondsPerDay;
  std::vector<std::pair<NodeId, NodeId>> direct_pairs;
  std::vector<char> active(net.node_count, 0);
  for (const auto& l : net.links) {
    if (l.t_s >= t_max || l.host >= net.node_count) continue;
    active[l.host] = 1;
    if (classify_link(l) != LinkKind::IndirectOnly) direct_pairs.emplace_back(l.host, l.nbr);
  }
  std::sort(direct_pairs.begin(), direct_pairs.end());
  direct_pairs.erase(std::unique(direct_pairs.begin(), direct_pairs.end()),
                     direct_pairs.end());
  std::vector<uint32_t> ndirect(net.node_count, 0);
  for (const auto& [h, w] : direct_pairs) ++ndirect[h];

  NodeClasses c;
  for (NodeId v = 0; v < net.node_count; ++v) {
    if (!active[v]) continue;
    const uint32_t d = ndirect[v];
    if (d == 0) c.indirect_only.push_back(v);
    else if (d <= 2) c.low.push_back(v);
    else if (d <= 10) c.average.push_back(v);
    else if (d <= 20) c.high.push_back(v);
    else c.hub.push_back(v);
  }
  return c;
}

MonteCarloResult monte_carlo(const TemporalContactNetwork& net,
                             const DiseaseParams& params, int horizon_days,
                             int replicates, uint64_t base_seed,
                             const SimulationOptions& opts) {
  if (replicates < 1) throw std::invalid_argument("monte_carlo: need replicates >= 1");
  const DayGroups groups = build_day_groups(net);
  std::vector<SimulationRun> runs(static_cast<size_t>(replicates));
#if defined(_OPENMP)
  const int nthreads = opts.jobs > 0 ? opts.jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
#endif
  for (long long i = 0; i < replicates; ++i) {
    SimulationOptions inner = opts;
    inner.jobs = 1;  // replicates own the parallelism here
    runs[static_cast<size_t>(i)] =
        run_simulation(net, groups, params, horizon_days,
                       base_seed + static_cast<uint64_t>(i), inner);
  }

  MonteCarloResult res;
  res.outbreaks.reserve(runs.size());
  res.mean_I_n.assign(static_cast<size_t>(horizon_days), 0.0);
  res.mean_I_p.assign(static_cast<size_t>(horizon_days), 0.0);
  res.mean_I_a.assign(static_cast<size_t>(horizon_days), 0.0);
  std::vector<int64_t> sum_n(static_cast<size_t>(horizon_days), 0);
  std::vector<int64_t> sum_p(static_cast<size_t>(horizon_days), 0);
  std::vector<int64_t> sum_a(static_cast<size_t>(horizon_days), 0);
  int64_t outbreak_total = 0;
  double r_total = 0.0;
  for (const auto& run : runs) {
    res.outbreaks.push_back(run.outbreak_size);
    outbreak_total += run.outbreak_size;
    r_total += run.mean_R;
    for (size_t d = 0; d < run.daily.size(); ++d) {
      sum_n[d] += run.daily[d].I_n;
      sum_p[d] += run.daily[d].I_p;
      sum_a[d] += run.daily[d].I_a;
    }
  }
  const double k = static_cast<double>(replicates);
  for (int d = 0; d < horizon_days; ++d) {
    res.mean_I_n[static_cast<size_t>(d)] = static_cast<double>(sum_n[static_cast<size_t>(d)]) / k;
    res.mean_I_p[static_cast<size_t>(d)] = static_cast<double>(sum_p[static_cast<size_t>(d)]) / k;
    res.mean_I_a[static_cast<size_t>(d)] = static_cast<double>(sum_a[static_cast<size_t>(d)]) / k;
  }
  res.mean_outbreak = static_cast<double>(outbreak_total) / k;
  res.mean_R = r_total / k;
  return res;
}

}  // namespace spdt
