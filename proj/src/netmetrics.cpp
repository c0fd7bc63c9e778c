#include "spdt/netmetrics.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace spdt {

StaticProjection static_projection(std::span<const SPDTLink> links, uint32_t node_count,
                                   const ProjectionConfig& cfg) {
  StaticProjection proj;
  proj.node_count = node_count;
  const double b = cfg.b();
  for (const auto& l : links) {
    if (link_exposure(l, cfg.exposure, b) >= cfg.threshold)
      proj.edges.emplace_back(l.host, l.nbr);
  }
  std::sort(proj.edges.begin(), proj.edges.end());
  proj.edges.erase(std::unique(proj.edges.begin(), proj.edges.end()), proj.edges.end());
  return proj;
}

StaticProjection static_projection(const TemporalContactNetwork& net,
                                   const ProjectionConfig& cfg) {
  return static_projection(std::span<const SPDTLink>(net.links), net.node_count, cfg);
}

NodeMetrics degree_and_clustering(const StaticProjection& proj) {
  const uint32_t n = proj.node_count;
  NodeMetrics m;
  m.in_degree.assign(n, 0);
  m.out_degree.assign(n, 0);
  m.degree.assign(n, 0);
  m.clustering.assign(n, 0.0);

  for (const auto& [u, v] : proj.edges) {
    if (u >= n || v >= n) throw std::invalid_argument("projection edge id out of range");
    ++m.out_degree[u];
    ++m.in_degree[v];
  }

  // Symmetric closure, deduplicated, as a CSR with sorted neighbor lists.
  std::vector<std::pair<NodeId, NodeId>> und;
  und.reserve(proj.edges.size());
  for (const auto& [u, v] : proj.edges) {
    if (u == v) continue;
    und.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(und.begin(), und.end());
  und.erase(std::unique(und.begin(), und.end()), und.end());

  std::vector<uint32_t> off(n + 1, 0);
  for (const auto& [u, v] : und) {
    ++off[u + 1];
    ++off[v + 1];
  }
  for (uint32_t i = 0; i < n; ++i) off[i + 1] += off[i];
  std::vector<NodeId> adj(und.size() * 2);
  std::vector<uint32_t> cur(off.begin(), off.end() - 1);
  for (const auto& [u, v] : und) {
    adj[cur[u]++] = v;
    adj[cur[v]++] = u;
  }
  for (uint32_t i = 0; i < n; ++i) {
    std::sort(adj.begin() + off[i], adj.begin() + off[i + 1]);
    m.degree[i] = off[i + 1] - off[i];
  }

  // Triangles per node: each closing edge (v, w) of u's neighborhood shows up
  // twice across the pairwise intersections, so the sum counts 2*triangles(u)
  // and the k(k-1)/2 denominator simplifies against it.
#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic, 256)
#endif
  for (long long ui = 0; ui < static_cast<long long>(n); ++ui) {
    const uint32_t u = static_cast<uint32_t>(ui);
    const uint32_t k = m.degree[u];
    if (k < 2) continue;
    uint64_t closed2 = 0;
    for (uint32_t e = off[u]; e < off[u + 1]; ++e) {
      const NodeId v = adj[e];
      uint32_t a = off[u], b = off[v];
      while (a < off[u + 1] && b < off[v + 1]) {
        if (adj[a] < adj[b]) ++a;
        else if (adj[a] > adj[b]) ++b;
        else { ++closed2; ++a; ++b; }
      }
    }
    m.clustering[u] = static_cast<double>(closed2) /
                      (static_cast<double>(k) * static_cast<double>(k - 1));
  }
  return m;
}

std::vector<DailyAggregate> daily_aggregates(const TemporalContactNetwork& net,
                                             const ProjectionConfig& cfg) {
  std::vector<DailyAggregate> out(static_cast<size_t>(std::max(net.horizon_days, 0)));
  for (int d = 0; d < net.horizon_days; ++d) {
    auto& agg = out[static_cast<size_t>(d)];
    agg.day = d;
    const StaticProjection proj = static_projection(net.day_slice(d), net.node_count, cfg);
    if (proj.edges.empty()) continue;
    agg.present = true;
    const NodeMetrics m = degree_and_clustering(proj);
    uint64_t deg_sum = 0;
    double clus_sum = 0.0;
    uint32_t touched = 0;
    for (uint32_t v = 0; v < net.node_count; ++v) {
      if (m.degree[v] == 0 && m.in_degree[v] == 0 && m.out_degree[v] == 0) continue;
      ++touched;
      deg_sum += m.degree[v];
      clus_sum += m.clustering[v];
    }
    if (touched > 0) {
      agg.mean_degree = static_cast<double>(deg_sum) / touched;
      agg.mean_clustering = clus_sum / touched;
    }
  }
  return out;
}

namespace {

// Day-aggregated directed adjacency: one arc (u -> v) per day on which a link
// with that receiver window starts, deduplicated within the day.
struct DayAdjacency {
  int days = 0;
  uint32_t n = 0;
  std::vector<std::vector<uint32_t>> off;  // per-day CSR
  std::vector<std::vector<NodeId>> adj;
};

DayAdjacency build_day_adjacency(const TemporalContactNetwork& net) {
  DayAdjacency da;
  da.days = std::max(net.horizon_days, 0);
  da.n = net.node_count;
  da.off.resize(static_cast<size_t>(da.days));
  da.adj.resize(static_cast<size_t>(da.days));
  for (int d = 0; d < da.days; ++d) {
    auto slice = net.day_slice(d);
    std::vector<std::pair<NodeId, NodeId>> arcs;
    arcs.reserve(slice.size());
    for (const auto& l : slice) {
      if (l.host == l.nbr) continue;
      arcs.emplace_back(l.host, l.nbr);
    }
    std::sort(arcs.begin(), arcs.end());
    arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
    auto& off = da.off[static_cast<size_t>(d)];
    auto& adj = da.adj[static_cast<size_t>(d)];
    off.assign(da.n + 1, 0);
    adj.resize(arcs.size());
    for (const auto& [u, v] : arcs) ++off[u + 1];
    for (uint32_t i = 0; i < da.n; ++i) off[i + 1] += off[i];
    std::vector<uint32_t> cur(off.begin(), off.end() - 1);
    for (const auto& [u, v] : arcs) adj[cur[u]++] = v;
  }
  return da;
}

// Per-source BFS over (node, day) states. An arc taken on day d2 can follow a
// state reached on day d when 1 <= d2 - d <= gap; the first hop may use any
// day. level[] is the hop count of the state's first visit, preds[] the
// shortest-path DAG, dist[] the per-node minimum over days.
struct TemporalBfs {
  std::vector<int32_t> level;
  std::vector<std::vector<uint32_t>> preds;
  std::vector<int32_t> dist;
  int days = 0;
  uint32_t n = 0;

  uint32_t id(NodeId v, int d) const { return static_cast<uint32_t>(d) * n + v; }
};

void temporal_bfs(const DayAdjacency& da, NodeId s, int gap, TemporalBfs& out) {
  out.days = da.days;
  out.n = da.n;
  const size_t states = static_cast<size_t>(da.days) * da.n;
  out.level.assign(states, -1);
  out.preds.assign(states, {});
  out.dist.assign(da.n, -1);

  std::vector<uint32_t> frontier, next;
  for (int d = 0; d < da.days; ++d) {
    const auto& off = da.off[static_cast<size_t>(d)];
    const auto& adj = da.adj[static_cast<size_t>(d)];
    for (uint32_t e = off[s]; e < off[s + 1]; ++e) {
      const NodeId v = adj[e];
      const uint32_t st = out.id(v, d);
      if (out.level[st] < 0) {
        out.level[st] = 1;
        frontier.push_back(st);
        if (out.dist[v] < 0) out.dist[v] = 1;
      }
    }
  }

  int lvl = 1;
  while (!frontier.empty()) {
    next.clear();
    for (uint32_t st : frontier) {
      const NodeId v = static_cast<NodeId>(st % da.n);
      const int d = static_cast<int>(st / da.n);
      for (int d2 = d + 1; d2 <= d + gap && d2 < da.days; ++d2) {
        const auto& off = da.off[static_cast<size_t>(d2)];
        const auto& adj = da.adj[static_cast<size_t>(d2)];
        for (uint32_t e = off[v]; e < off[v + 1]; ++e) {
          const NodeId w = adj[e];
          if (w == s) continue;  // never walk back into the source
          const uint32_t st2 = out.id(w, d2);
          if (out.level[st2] < 0) {
            out.level[st2] = lvl + 1;
            out.preds[st2].push_back(st);
            next.push_back(st2);
            if (out.dist[w] < 0) out.dist[w] = lvl + 1;
          } else if (out.level[st2] == lvl + 1) {
            out.preds[st2].push_back(st);
          }
        }
      }
    }
    frontier.swap(next);
    ++lvl;
  }
}

// Walk the predecessor DAG backward from every terminal state of t and credit
// the interior nodes of each shortest path. Day-assignment variants of the
// same node sequence collapse to one path when dedupe is on.
void credit_paths(const TemporalBfs& bfs, NodeId s, NodeId t, bool dedupe, size_t cap,
                  std::vector<int64_t>& credit) {
  const int L = bfs.dist[t];
  if (L < 2) return;  // unreachable or a direct neighbor: nobody in between

  std::vector<std::vector<NodeId>> seqs;
  std::vector<NodeId> cur(static_cast<size_t>(L) + 1);
  cur[0] = s;
  cur[static_cast<size_t>(L)] = t;
  bool capped = false;

  std::function<void(uint32_t)> dfs = [&](uint32_t st) {
    if (capped) return;
    const int lvl = bfs.level[st];
    cur[static_cast<size_t>(lvl)] = static_cast<NodeId>(st % bfs.n);
    if (lvl == 1) {
      seqs.push_back(cur);
      if (seqs.size() >= cap) capped = true;
      return;
    }
    for (uint32_t p : bfs.preds[st]) dfs(p);
  };
  for (int d = 0; d < bfs.days && !capped; ++d) {
    const uint32_t st = bfs.id(t, d);
    if (bfs.level[st] == L) dfs(st);
  }

  if (dedupe) {
    std::sort(seqs.begin(), seqs.end());
    seqs.erase(std::unique(seqs.begin(), seqs.end()), seqs.end());
  }
  for (const auto& seq : seqs)
    for (size_t i = 1; i + 1 < seq.size(); ++i) ++credit[seq[i]];
}

TemporalCentrality centralities_impl(const TemporalContactNetwork& net,
                                     const TemporalPathConfig& cfg, bool parallel) {
  if (cfg.max_gap_days < 1)
    throw std::invalid_argument("temporal_centralities: gap must be >= 1");
  const DayAdjacency da = build_day_adjacency(net);
  const uint32_t n = net.node_count;
  const uint32_t sources =
      cfg.sample_sources > 0 && cfg.sample_sources < n ? cfg.sample_sources : n;

  TemporalCentrality tc;
  tc.betweenness.assign(n, 0.0);
  tc.closeness.assign(n, 0.0);
  if (da.days == 0 || n == 0) return tc;

  int max_threads = 1;
#if defined(_OPENMP)
  if (parallel) max_threads = cfg.jobs > 0 ? cfg.jobs : omp_get_max_threads();
#else
  (void)parallel;
#endif

  // Integer credit and hop-count histograms per thread, merged exactly, so
  // the result cannot depend on scheduling.
  const int max_level = da.days;  // a shortest path advances >= one day per hop
  std::vector<std::vector<int64_t>> bc_tl(static_cast<size_t>(max_threads),
                                          std::vector<int64_t>(n, 0));
  std::vector<std::vector<int64_t>> cc_hist(
      static_cast<size_t>(max_threads),
      std::vector<int64_t>(static_cast<size_t>(n) * static_cast<size_t>(max_level + 1),
                           0));

#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic) num_threads(max_threads) if (parallel)
#endif
  for (long long si = 0; si < static_cast<long long>(sources); ++si) {
#if defined(_OPENMP)
    const int tid = omp_get_thread_num();
#else
    const int tid = 0;
#endif
    const NodeId s = static_cast<NodeId>(si);
    TemporalBfs bfs;
    temporal_bfs(da, s, cfg.max_gap_days, bfs);
    auto& bc = bc_tl[static_cast<size_t>(tid)];
    auto& hist = cc_hist[static_cast<size_t>(tid)];
    for (NodeId t = 0; t < n; ++t) {
      if (t == s || bfs.dist[t] < 0) continue;
      const int lvl = std::min(bfs.dist[t], max_level);
      ++hist[static_cast<size_t>(t) * (max_level + 1) + static_cast<size_t>(lvl)];
      credit_paths(bfs, s, t, cfg.dedupe_node_sequences, cfg.max_paths_per_pair, bc);
    }
  }

  for (const auto& bc : bc_tl)
    for (uint32_t v = 0; v < n; ++v) tc.betweenness[v] += static_cast<double>(bc[v]);
  for (uint32_t v = 0; v < n; ++v) {
    double sum = 0.0;
    for (int lvl = 1; lvl <= max_level; ++lvl) {
      int64_t cnt = 0;
      for (const auto& hist : cc_hist)
        cnt += hist[static_cast<size_t>(v) * (max_level + 1) + static_cast<size_t>(lvl)];
      if (cnt > 0) sum += static_cast<double>(cnt) / static_cast<double>(lvl);
    }
    tc.closeness[v] = sum;
  }
  return tc;
}

}  // namespace

TemporalCentrality temporal_centralities(const TemporalContactNetwork& net,
                                         const TemporalPathConfig& cfg) {
  return centralities_impl(net, cfg, true);
}

TemporalCentrality temporal_centralities_serial(const TemporalContactNetwork& net,
                                                const TemporalPathConfig& cfg) {
  return centralities_impl(net, cfg, false);
}

}  // namespace spdt
