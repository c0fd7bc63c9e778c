#include <algorithm>
#include <cstdio>
#include <memory>
#include <utility>

#include "cli_common.hpp"
#include "spdt/netmetrics.hpp"

namespace cli {

std::vector<std::string> run_metrics(const MetricsOpts& o) {
  apply_jobs(o.jobs);
  ensure_dir(o.outdir);
  const auto net = spdt::load_network(o.network);

  spdt::Config c;
  c.set("metrics", "network", o.network);
  c.set("metrics", "threshold", fmt(o.threshold));
  c.set("metrics", "max_gap_days", std::to_string(o.max_gap_days));
  c.set("metrics", "temporal", o.temporal ? "true" : "false");
  exposure_into_config(o.exposure, c, "exposure");
  const auto header = header_lines(c, 0);

  spdt::ProjectionConfig proj_cfg;
  proj_cfg.exposure = to_exposure(o.exposure);
  proj_cfg.r_minutes = o.exposure.r_t;
  proj_cfg.threshold = o.threshold;

  const auto proj = spdt::static_projection(net, proj_cfg);
  const auto metrics = spdt::degree_and_clustering(proj);

  spdt::TemporalCentrality tc;
  if (o.temporal) {
    spdt::TemporalPathConfig tp;
    tp.max_gap_days = o.max_gap_days;
    tp.dedupe_node_sequences = !o.count_day_variants;
    tp.max_paths_per_pair = o.max_paths;
    tp.sample_sources = o.sample_sources;
    tp.jobs = o.jobs;
    tc = spdt::temporal_centralities(net, tp);
  }

  const std::string prefix =
      o.out_prefix.empty() ? path_join(o.outdir, "metrics") : o.out_prefix;
  std::vector<std::string> artifacts;

  std::string nodes = render_header(header);
  nodes += o.temporal
               ? "# columns = node in_degree out_degree degree clustering bc_t cc_t\n"
               : "# columns = node in_degree out_degree degree clustering\n";
  for (uint32_t v = 0; v < net.node_count; ++v) {
    char line[256];
    if (o.temporal)
      std::snprintf(line, sizeof(line), "%u\t%u\t%u\t%u\t%s\t%s\t%s\n", v,
                    metrics.in_degree[v], metrics.out_degree[v], metrics.degree[v],
                    fmt(metrics.clustering[v]).c_str(), fmt(tc.betweenness[v]).c_str(),
                    fmt(tc.closeness[v]).c_str());
    else
      std::snprintf(line, sizeof(line), "%u\t%u\t%u\t%u\t%s\n", v, metrics.in_degree[v],
                    metrics.out_degree[v], metrics.degree[v],
                    fmt(metrics.clustering[v]).c_str());
    nodes += line;
  }
  write_text(prefix + "_nodes.tsv", nodes);
  artifacts.push_back(prefix + "_nodes.tsv");

  // log2-binned undirected degree distribution
  uint32_t d_max = 0;
  for (uint32_t v = 0; v < net.node_count; ++v) d_max = std::max(d_max, metrics.degree[v]);
  std::string hist = render_header(header);
  hist += "# columns = degree_lo degree_hi nodes fraction\n";
  for (uint32_t lo = 1; lo <= std::max(d_max, 1u); lo *= 2) {
    const uint32_t hi = lo * 2 - 1;
    uint64_t count = 0;
    for (uint32_t v = 0; v < net.node_count; ++v)
      if (metrics.degree[v] >= lo && metrics.degree[v] <= hi) ++count;
    char line[128];
    std::snprintf(line, sizeof(line), "%u\t%u\t%llu\t%s\n", lo, hi,
                  static_cast<unsigned long long>(count),
                  fmt(net.node_count ? static_cast<double>(count) / net.node_count : 0.0)
                      .c_str());
    hist += line;
  }
  write_text(prefix + "_degree_hist.tsv", hist);
  artifacts.push_back(prefix + "_degree_hist.tsv");

  if (o.daily) {
    const auto days = spdt::daily_aggregates(net, proj_cfg);
    std::string daily = render_header(header);
    daily += "# columns = day present mean_degree mean_clustering\n";
    for (const auto& d : days) {
      char line[128];
      std::snprintf(line, sizeof(line), "%d\t%d\t%s\t%s\n", d.day, d.present ? 1 : 0,
                    fmt(d.mean_degree).c_str(), fmt(d.mean_clustering).c_str());
      daily += line;
    }
    write_text(prefix + "_daily.tsv", daily);
    artifacts.push_back(prefix + "_daily.tsv");
  }

  uint64_t deg_sum = 0;
  uint32_t touched = 0;
  for (uint32_t v = 0; v < net.node_count; ++v) {
    deg_sum += metrics.degree[v];
    if (metrics.degree[v] > 0) ++touched;
  }
  std::printf("metrics: %zu projected edges, %u/%u nodes with an edge, mean degree %.3f\n",
              proj.edges.size(), touched, net.node_count,
              touched ? static_cast<double>(deg_sum) / touched : 0.0);
  return artifacts;
}

void register_metrics(CLI::App& app) {
  auto o = std::make_shared<MetricsOpts>();
  o->outdir = default_outdir();
  auto* sub = app.add_subcommand(
      "metrics", "Static projection, degree/clustering and temporal centralities");
  sub->configurable(true);
  sub->fallthrough(true);
  sub->add_option("--network", o->network, "input link file")->required();
  add_exposure_options(sub, o->exposure);
  sub->add_option("--threshold", o->threshold, "edge exposure threshold (PFU)")
      ->capture_default_str();
  sub->add_flag("--daily", o->daily, "also write per-day aggregates");
  sub->add_flag("--temporal", o->temporal, "also compute temporal centralities");
  sub->add_option("--max-gap-days", o->max_gap_days,
                  "max day gap between consecutive path hops")
      ->capture_default_str();
  sub->add_option("--sample-sources", o->sample_sources,
                  "expand only this many sources (0: all)")
      ->capture_default_str();
  sub->add_flag("--count-day-variants", o->count_day_variants,
                "count day-assignment variants as distinct paths");
  sub->add_option("--max-paths", o->max_paths, "path enumeration cap per node pair")
      ->capture_default_str();
  sub->add_option("--out-prefix", o->out_prefix,
                  "output prefix (default <outdir>/metrics)");
  sub->add_option("--outdir", o->outdir, "output directory")->capture_default_str();
  sub->add_option("--jobs", o->jobs, "worker threads (0: all cores)")
      ->capture_default_str();
  // A configurable section plus the subcommand on the command line counts as two
  // parse occurrences in CLI11; run the command once regardless.
  auto once = std::make_shared<bool>(false);
  sub->callback([o, once]() {
    if (std::exchange(*once, true)) return;
    run_metrics(*o);
  });
}

}  // namespace cli
