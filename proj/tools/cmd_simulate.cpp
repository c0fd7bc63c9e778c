#include <cmath>
#include <cstdio>
#include <memory>
#include <utility>

#include "cli_common.hpp"
#include "spdt/epidemic.hpp"

namespace cli {

std::vector<std::string> run_simulate(const SimulateOpts& o) {
  apply_jobs(o.jobs);
  ensure_dir(o.outdir);
  const uint64_t seed = resolve_seed(o.seed);
  const auto net = spdt::load_network(o.network);
  const int horizon = o.horizon_days > 0 ? o.horizon_days : net.horizon_days;

  spdt::Config c;
  c.set("simulate", "network", o.network);
  c.set("simulate", "horizon_days", std::to_string(horizon));
  c.set("simulate", "replicates", std::to_string(o.replicates));
  c.set("simulate", "seed", std::to_string(seed));
  exposure_into_config(o.exposure, c, "exposure");
  disease_into_config(o.disease, c, "disease");
  const auto header = header_lines(c, seed);

  const spdt::DiseaseParams params = to_disease(o.disease, o.exposure);
  spdt::SimulationOptions sim;
  sim.jobs = o.jobs;
  sim.serial_reference = o.serial;
  const auto mc = spdt::monte_carlo(net, params, horizon, o.replicates, seed, sim);

  const std::string prefix =
      o.out_prefix.empty() ? path_join(o.outdir, "sim") : o.out_prefix;

  std::string daily = render_header(header);
  daily += "# columns = day mean_new mean_prevalence mean_cumulative R_t\n";
  const double tau_mean = 0.5 * (o.disease.tau_min + o.disease.tau_max);
  for (int d = 0; d < horizon; ++d) {
    const double ip = mc.mean_I_p[static_cast<size_t>(d)];
    double rt = std::nan("");
    if (d + 1 < horizon) {
      const double ip2 = mc.mean_I_p[static_cast<size_t>(d) + 1];
      if (ip > 0.0 && ip2 > 0.0) rt = 1.0 + tau_mean * std::log(ip2 / ip);
    }
    char line[256];
    std::snprintf(line, sizeof(line), "%d\t%s\t%s\t%s\t%s\n", d,
                  fmt(mc.mean_I_n[static_cast<size_t>(d)]).c_str(), fmt(ip).c_str(),
                  fmt(mc.mean_I_a[static_cast<size_t>(d)]).c_str(),
                  std::isnan(rt) ? "nan" : fmt(rt).c_str());
    daily += line;
  }
  write_text(prefix + "_daily.tsv", daily);

  std::string summary = render_header(header);
  summary += "# mean_outbreak = " + fmt(mc.mean_outbreak) + "\n";
  summary += "# mean_R = " + fmt(mc.mean_R) + "\n";
  summary += "# columns = replicate outbreak\n";
  for (size_t i = 0; i < mc.outbreaks.size(); ++i)
    summary += std::to_string(i) + "\t" + std::to_string(mc.outbreaks[i]) + "\n";
  write_text(prefix + "_summary.tsv", summary);

  std::printf("simulate: %d replicates x %d days on %s: mean outbreak %.2f, mean R %.3f\n",
              o.replicates, horizon, net.name.c_str(), mc.mean_outbreak, mc.mean_R);
  return {prefix + "_daily.tsv", prefix + "_summary.tsv"};
}

void register_simulate(CLI::App& app) {
  auto o = std::make_shared<SimulateOpts>();
  o->outdir = default_outdir();
  auto* sub = app.add_subcommand(
      "simulate", "Run the stochastic SIR diffusion model on a contact network");
  sub->configurable(true);
  sub->fallthrough(true);
  sub->add_option("--network", o->network, "input link file")->required();
  sub->add_option("--horizon-days", o->horizon_days,
                  "days to simulate (0: network horizon)")
      ->capture_default_str();
  sub->add_option("--replicates", o->replicates, "independent runs")
      ->capture_default_str();
  sub->add_option("--seed", o->seed, "base seed; replicate i uses seed+i");
  add_exposure_options(sub, o->exposure);
  add_disease_options(sub, o->disease);
  sub->add_flag("--serial", o->serial, "use the serial reference inner loop");
  sub->add_option("--out-prefix", o->out_prefix, "output prefix (default <outdir>/sim)");
  sub->add_option("--outdir", o->outdir, "output directory")->capture_default_str();
  sub->add_option("--jobs", o->jobs, "worker threads (0: all cores)")
      ->capture_default_str();
  // A configurable section plus the subcommand on the command line counts as two
  // parse occurrences in CLI11; run the command once regardless.
  auto once = std::make_shared<bool>(false);
  sub->callback([o, once]() {
    if (std::exchange(*once, true)) return;
    run_simulate(*o);
  });
}

}  // namespace cli
