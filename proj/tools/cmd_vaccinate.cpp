#include <algorithm>
#include <cstdio>
#include <memory>
#include <utility>
#include <stdexcept>

#include "cli_common.hpp"
#include "spdt/vaccinate.hpp"

namespace cli {

namespace {

// Mean stay duration over distinct (host, t_s, t_l) stays in the window —
// the fallback t0 for the stay-time ranking when none is given.
double mean_stay_seconds(const spdt::TemporalContactNetwork& net, int window_days) {
  const int64_t t_end = static_cast<int64_t>(window_days) * 86400;
  std::vector<std::tuple<spdt::NodeId, int64_t, int64_t>> stays;
  for (const auto& l : net.links)
    if (l.t_s < t_end) stays.emplace_back(l.host, l.t_s, l.t_l);
  std::sort(stays.begin(), stays.end());
  stays.erase(std::unique(stays.begin(), stays.end()), stays.end());
  if (stays.empty())
    throw std::runtime_error("imvt: no stays in the ranking window; pass --t0");
  double sum = 0;
  for (const auto& [h, s, l] : stays) sum += static_cast<double>(l - s);
  return sum / static_cast<double>(stays.size());
}

std::vector<double> strategy_scores(const std::string& strategy,
                                    const spdt::TemporalContactNetwork& net,
                                    const VaccinateOpts& o, uint64_t seed,
                                    double* t0_used) {
  const int w = o.window_days;
  if (strategy == "rv") return {};
  if (strategy == "av") return spdt::rank_acquaintance(net, w, seed, o.use_indirect);
  if (strategy == "dv") return spdt::rank_degree(net, w, o.use_indirect);
  if (strategy == "imv") {
    spdt::LocationClassTable classes;
    const auto profiles = spdt::build_movement_profiles(net, w, classes, o.use_indirect);
    return spdt::rank_imv(profiles, net.node_count, classes, o.beta);
  }
  if (strategy == "imve") return spdt::rank_imv_exact(net, w, o.beta, o.use_indirect);
  if (strategy == "imvt") {
    const double t0 = o.t0 > 0 ? o.t0 : mean_stay_seconds(net, w);
    if (t0_used) *t0_used = t0;
    return spdt::rank_imv_temporal(net, w, o.beta0, t0, o.use_indirect);
  }
  throw std::runtime_error("unknown strategy '" + strategy +
                           "' (expected rv, av, dv, imv, imve or imvt)");
}

}  // namespace

std::vector<std::string> run_vaccinate(const VaccinateOpts& o) {
  apply_jobs(o.jobs);
  ensure_dir(o.outdir);
  const auto net = spdt::load_network(o.network);
  const uint64_t seed = resolve_seed(o.seed);
  const int horizon = o.horizon_days > 0 ? o.horizon_days : net.horizon_days;

  double t0_used = o.t0;
  const auto scores = strategy_scores(o.strategy, net, o, seed, &t0_used);

  spdt::Config c;
  c.set("vaccinate", "network", o.network);
  c.set("vaccinate", "strategy", o.strategy);
  c.set("vaccinate", "coverage", fmt(o.coverage));
  c.set("vaccinate", "fraction", fmt(o.fraction));
  c.set("vaccinate", "beta", fmt(o.beta));
  if (o.strategy == "imvt") {
    c.set("vaccinate", "beta0", fmt(o.beta0));
    c.set("vaccinate", "t0", fmt(t0_used));
  }
  c.set("vaccinate", "window_days", std::to_string(o.window_days));
  c.set("vaccinate", "use_indirect", o.use_indirect ? "true" : "false");
  c.set("vaccinate", "ring", o.ring ? "true" : "false");
  if (o.ring) {
    c.set("vaccinate", "detect_prob", fmt(o.detect_prob));
    c.set("vaccinate", "deploy_day", std::to_string(o.deploy_day));
    c.set("vaccinate", "ring_random", o.ring_random ? "true" : "false");
  }
  c.set("vaccinate", "horizon_days", std::to_string(horizon));
  c.set("vaccinate", "replicates", std::to_string(o.replicates));
  exposure_into_config(o.exposure, c, "exposure");
  disease_into_config(o.disease, c, "disease");
  const auto header = header_lines(c, seed);

  const auto params = to_disease(o.disease, o.exposure);
  const auto groups = spdt::build_day_groups(net);
  const std::string prefix =
      o.out_prefix.empty() ? path_join(o.outdir, "vac") : o.out_prefix;
  std::vector<std::string> artifacts;

  spdt::SimulationOptions base_opts;
  base_opts.jobs = o.jobs;

  std::vector<int64_t> z_ref(o.replicates), z_vac(o.replicates);
  std::vector<int64_t> ring_counts(o.replicates, 0);
  spdt::MassVaccinationResult mass;

  if (!o.ring) {
    mass = spdt::apply_mass_vaccination(net.node_count, scores, o.coverage, o.fraction,
                                        seed);
    spdt::SimulationOptions vac_opts = base_opts;
    vac_opts.vaccinated = &mass.vaccinated;
    for (int rep = 0; rep < o.replicates; ++rep) {
      z_ref[rep] = spdt::run_simulation(net, groups, params, horizon, seed + rep,
                                        base_opts)
                       .outbreak_size;
      z_vac[rep] = spdt::run_simulation(net, groups, params, horizon, seed + rep,
                                        vac_opts)
                       .outbreak_size;
    }

    std::string ids = render_header(header);
    char meta[160];
    std::snprintf(meta, sizeof(meta), "# requested = %zu\n# shortfall = %zu\n",
                  mass.requested, mass.shortfall);
    ids += meta;
    for (spdt::NodeId v : mass.vaccinated) ids += std::to_string(v) + "\n";
    write_text(prefix + "_vaccinated.ids", ids);
    artifacts.push_back(prefix + "_vaccinated.ids");
  } else {
    spdt::RingConfig ring;
    ring.threshold_mode = !o.ring_random && o.strategy != "rv";
    if (ring.threshold_mode)
      ring.top_set = spdt::top_fraction_set(scores, o.coverage);
    else
      ring.P = o.coverage;
    ring.F_detect = o.detect_prob;
    ring.deploy_day = o.deploy_day;
    ring.partners = spdt::contact_partners(net, net.horizon_days, true);

    spdt::SimulationOptions ring_opts = base_opts;
    ring_opts.ring = &ring;
    for (int rep = 0; rep < o.replicates; ++rep) {
      z_ref[rep] = spdt::run_simulation(net, groups, params, horizon, seed + rep,
                                        base_opts)
                       .outbreak_size;
      const auto run =
          spdt::run_simulation(net, groups, params, horizon, seed + rep, ring_opts);
      z_vac[rep] = run.outbreak_size;
      for (int64_t n : run.ring_vaccinated) ring_counts[rep] += n;
    }
  }

  double mean_ref = 0, mean_vac = 0;
  for (int rep = 0; rep < o.replicates; ++rep) {
    mean_ref += static_cast<double>(z_ref[rep]);
    mean_vac += static_cast<double>(z_vac[rep]);
  }
  mean_ref /= std::max(o.replicates, 1);
  mean_vac /= std::max(o.replicates, 1);
  const bool have_eta = mean_ref > 0;
  const double eta = have_eta ? spdt::efficiency(mean_ref, mean_vac) : 0.0;

  std::string out = render_header(header);
  out += "# mean_outbreak_ref = " + fmt(mean_ref) + "\n";
  out += "# mean_outbreak_vac = " + fmt(mean_vac) + "\n";
  out += "# efficiency_pct = " + (have_eta ? fmt(eta) : std::string("nan")) + "\n";
  if (!o.ring) {
    char meta[160];
    std::snprintf(meta, sizeof(meta), "# vaccinated = %zu\n# shortfall = %zu\n",
                  mass.vaccinated.size(), mass.shortfall);
    out += meta;
    out += "# columns = rep outbreak_ref outbreak_vac\n";
    for (int rep = 0; rep < o.replicates; ++rep)
      out += std::to_string(rep) + "\t" + std::to_string(z_ref[rep]) + "\t" +
             std::to_string(z_vac[rep]) + "\n";
  } else {
    out += "# columns = rep outbreak_ref outbreak_vac ring_vaccinated\n";
    for (int rep = 0; rep < o.replicates; ++rep)
      out += std::to_string(rep) + "\t" + std::to_string(z_ref[rep]) + "\t" +
             std::to_string(z_vac[rep]) + "\t" + std::to_string(ring_counts[rep]) +
             "\n";
  }
  write_text(prefix + "_outbreaks.tsv", out);
  artifacts.push_back(prefix + "_outbreaks.tsv");

  std::printf("vaccinate: %s %s, mean outbreak %.2f -> %.2f (%s%%)\n",
              o.strategy.c_str(), o.ring ? "ring" : "mass", mean_ref, mean_vac,
              have_eta ? fmt(eta).c_str() : "nan");
  return artifacts;
}

void register_vaccinate(CLI::App& app) {
  auto o = std::make_shared<VaccinateOpts>();
  o->outdir = default_outdir();
  auto* sub = app.add_subcommand("vaccinate",
                                 "Rank nodes, vaccinate and compare outbreak sizes");
  sub->configurable(true);
  sub->fallthrough(true);
  sub->add_option("--network", o->network, "input link file")->required();
  sub->add_option("--strategy", o->strategy, "rv|av|dv|imv|imve|imvt")
      ->capture_default_str();
  sub->add_option("--coverage", o->coverage, "P: fraction of nodes to vaccinate")
      ->capture_default_str();
  sub->add_option("--fraction", o->fraction,
                  "F: fraction of nodes whose information is available")
      ->capture_default_str();
  sub->add_option("--beta", o->beta, "ranking transmission probability")
      ->capture_default_str();
  sub->add_option("--beta0", o->beta0, "base beta for the stay-time ranking")
      ->capture_default_str();
  sub->add_option("--t0", o->t0,
                  "stay-time scale in seconds (0: mean stay in the window)")
      ->capture_default_str();
  sub->add_option("--window-days", o->window_days, "ranking window")
      ->capture_default_str();
  sub->add_flag("--use-indirect", o->use_indirect,
                "count indirect-only contacts when ranking");
  sub->add_flag("--ring", o->ring, "post-outbreak ring deployment");
  sub->add_option("--detect-prob", o->detect_prob, "ring: infection detection prob")
      ->capture_default_str();
  sub->add_option("--deploy-day", o->deploy_day, "ring: first active day")
      ->capture_default_str();
  sub->add_flag("--ring-random", o->ring_random,
                "ring: vaccinate each candidate with prob P instead of top-P");
  sub->add_option("--horizon-days", o->horizon_days,
                  "simulated days (0: network horizon)")
      ->capture_default_str();
  sub->add_option("--replicates", o->replicates, "paired replicates")
      ->capture_default_str();
  sub->add_option("--seed", o->seed, "RNG seed (default: random, recorded)");
  add_exposure_options(sub, o->exposure);
  add_disease_options(sub, o->disease);
  sub->add_option("--out-prefix", o->out_prefix, "output prefix (default <outdir>/vac)");
  sub->add_option("--outdir", o->outdir, "output directory")->capture_default_str();
  sub->add_option("--jobs", o->jobs, "worker threads (0: all cores)")
      ->capture_default_str();
  // A configurable section plus the subcommand on the command line counts as two
  // parse occurrences in CLI11; run the command once regardless.
  auto once = std::make_shared<bool>(false);
  sub->callback([o, once]() {
    if (std::exchange(*once, true)) return;
    run_vaccinate(*o);
  });
}

}  // namespace cli
