#include <cstdio>
#include <memory>
#include <utility>

#include "cli_common.hpp"
#include "spdt/ingest.hpp"

namespace cli {

std::vector<std::string> run_ingest(const IngestOpts& o) {
  apply_jobs(o.jobs);
  ensure_dir(o.outdir);

  spdt::Config c;
  c.set("ingest", "input", o.input);
  c.set("ingest", "radius_m", fmt(o.radius));
  c.set("ingest", "max_gap_s", std::to_string(o.max_gap));
  c.set("ingest", "delta_s", std::to_string(o.delta));
  c.set("ingest", "min_updates", std::to_string(o.min_updates));
  const auto header = header_lines(c, 0);  // extraction is deterministic

  spdt::VisitExtractionConfig cfg;
  cfg.radius_m = o.radius;
  cfg.max_gap_s = o.max_gap;
  cfg.delta_s = o.delta;
  cfg.min_nbr_updates = o.min_updates;

  auto updates = spdt::load_updates(o.input);
  std::printf("ingest: %zu updates from %s\n", updates.size(), o.input.c_str());
  auto sdt = spdt::ingest_updates(std::move(updates), cfg);
  auto variants = spdt::build_network_variants(std::move(sdt));

  std::vector<std::string> artifacts;
  auto save = [&](const spdt::TemporalContactNetwork& n) {
    const std::string path = path_join(o.outdir, n.name + ".links");
    spdt::save_network(n, path, header);
    artifacts.push_back(path);
  };
  save(variants.sdt);
  save(variants.sst);
  save(variants.ddt);
  save(variants.dst);
  save(variants.ldt);
  save(variants.lst);

  std::string tsv = render_header(header);
  tsv += "# columns = variant links direct mixed indirect isolated_nodes\n";
  std::printf("%-6s %10s %10s %10s %10s %10s\n", "variant", "links", "direct", "mixed",
              "indirect", "isolated");
  for (const auto& s : variants.stats) {
    char line[160];
    std::snprintf(line, sizeof(line), "%s\t%zu\t%zu\t%zu\t%zu\t%zu\n", s.name.c_str(),
                  s.links, s.direct_only, s.mixed, s.indirect_only, s.isolated_nodes);
    tsv += line;
    std::printf("%-6s %10zu %10zu %10zu %10zu %10zu\n", s.name.c_str(), s.links,
                s.direct_only, s.mixed, s.indirect_only, s.isolated_nodes);
  }
  const std::string tsv_path = path_join(o.outdir, "variants.tsv");
  write_text(tsv_path, tsv);
  artifacts.push_back(tsv_path);
  return artifacts;
}

void register_ingest(CLI::App& app) {
  auto o = std::make_shared<IngestOpts>();
  o->outdir = default_outdir();
  auto* sub = app.add_subcommand(
      "ingest", "Extract SPDT contact networks from location updates");
  sub->configurable(true);
  sub->fallthrough(true);
  sub->add_option("--input", o->input, "location update file (user, lat, lon, time)")
      ->required();
  sub->add_option("--outdir", o->outdir, "output directory")->capture_default_str();
  sub->add_option("--radius", o->radius, "co-location radius (m)")->capture_default_str();
  sub->add_option("--max-gap", o->max_gap, "max silence inside a visit (s)")
      ->capture_default_str();
  sub->add_option("--delta", o->delta, "indirect transmission window (s)")
      ->capture_default_str();
  sub->add_option("--min-updates", o->min_updates,
                  "updates required to count a neighbor presence")
      ->capture_default_str();
  sub->add_option("--jobs", o->jobs, "worker threads (0: all cores)")
      ->capture_default_str();
  // A configurable section plus the subcommand on the command line counts as two
  // parse occurrences in CLI11; run the command once regardless.
  auto once = std::make_shared<bool>(false);
  sub->callback([o, once]() {
    if (std::exchange(*once, true)) return;
    run_ingest(*o);
  });
}

}  // namespace cli
