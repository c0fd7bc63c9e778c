#include <cstdio>
#include <memory>
#include <utility>

#include "cli_common.hpp"
#include "spdt/graphgen.hpp"

namespace cli {

namespace {

spdt::Config resolved_config(const GenerateOpts& o, uint64_t seed) {
  spdt::Config c;
  c.set("generate", "nodes", std::to_string(o.nodes));
  c.set("generate", "days", std::to_string(o.days));
  c.set("generate", "dt_s", std::to_string(o.dt));
  c.set("generate", "seed", std::to_string(seed));
  if (o.baseline_adn) {
    c.set("generate", "baseline", "adn");
    c.set("generate", "activation_prob", fmt(o.activation_prob));
    c.set("generate", "m", std::to_string(o.m));
    return c;
  }
  c.set("generate", "rho", fmt(o.rho));
  c.set("generate", "q", fmt(o.q));
  c.set("generate", "mode", o.heterogeneous ? "heterogeneous" : "homogeneous");
  if (o.heterogeneous) {
    c.set("generate", "alpha", fmt(o.alpha));
    c.set("generate", "xi", fmt(o.xi));
    c.set("generate", "psi", fmt(o.psi));
  } else {
    c.set("generate", "lambda", fmt(o.lambda));
  }
  c.set("generate", "p_c", fmt(o.p_c));
  if (o.p_b > 0) c.set("generate", "p_b", fmt(o.p_b));
  c.set("generate", "delta_steps", std::to_string(o.delta_steps));
  c.set("generate", "eta", fmt(o.eta));
  c.set("generate", "mu", fmt(o.mu));
  return c;
}

}  // namespace

std::vector<std::string> run_generate(const GenerateOpts& o) {
  apply_jobs(o.jobs);
  ensure_dir(o.outdir);
  const uint64_t seed = resolve_seed(o.seed);
  const spdt::Config c = resolved_config(o, seed);
  const auto header = header_lines(c, seed);

  spdt::TemporalContactNetwork net;
  if (o.baseline_adn) {
    spdt::AdnParams p;
    p.N = o.nodes;
    p.T_days = o.days;
    p.dt_s = o.dt;
    p.activation_prob = o.activation_prob;
    p.m = o.m;
    net = spdt::generate_adn_baseline(p, seed);
  } else {
    spdt::GraphGenParams p;
    p.N = o.nodes;
    p.T_days = o.days;
    p.dt_s = o.dt;
    p.rho = o.rho;
    p.q = o.q;
    p.heterogeneous = o.heterogeneous;
    p.lambda = o.lambda;
    p.alpha = o.alpha;
    p.xi = o.xi;
    p.psi = o.psi;
    p.p_c = o.p_c;
    p.p_b = o.p_b;
    p.delta_steps = o.delta_steps;
    p.eta_reinf = o.eta;
    p.mu = o.mu;
    net = spdt::generate_network(p, seed, o.jobs);
  }

  const std::string out =
      o.out.empty() ? path_join(o.outdir, "generated.links") : o.out;
  spdt::save_network(net, out, header);
  const auto kinds = spdt::count_kinds(net);
  std::printf("generate: %u nodes, %d days -> %zu links (%zu direct, %zu mixed, %zu "
              "indirect) -> %s\n",
              net.node_count, net.horizon_days, net.links.size(), kinds.direct_only,
              kinds.mixed, kinds.indirect_only, out.c_str());
  return {out};
}

void register_generate(CLI::App& app) {
  auto o = std::make_shared<GenerateOpts>();
  o->outdir = default_outdir();
  auto* sub =
      app.add_subcommand("generate", "Generate a synthetic SPDT contact network");
  sub->configurable(true);
  sub->fallthrough(true);
  sub->add_option("--nodes", o->nodes, "number of nodes")->capture_default_str();
  sub->add_option("--days", o->days, "horizon in days")->capture_default_str();
  sub->add_option("--dt", o->dt, "time step (s)")->capture_default_str();
  sub->add_option("--rho", o->rho, "active->waiting switch probability")
      ->capture_default_str();
  sub->add_option("--q", o->q, "waiting->active switch probability")
      ->capture_default_str();
  sub->add_flag("--heterogeneous", o->heterogeneous,
                "draw per-node activation-degree parameters from a power law");
  sub->add_option("--lambda", o->lambda, "activation-degree parameter (homogeneous)")
      ->capture_default_str();
  sub->add_option("--alpha", o->alpha, "power-law exponent")->capture_default_str();
  sub->add_option("--xi", o->xi, "power-law lower bound")->capture_default_str();
  sub->add_option("--psi", o->psi, "power-law upper bound")->capture_default_str();
  sub->add_option("--p-c", o->p_c, "per-step link-creation probability")
      ->capture_default_str();
  sub->add_option("--p-b", o->p_b, "per-step link-break probability (0: use rho)")
      ->capture_default_str();
  sub->add_option("--delta-steps", o->delta_steps, "indirect window (steps)")
      ->capture_default_str();
  sub->add_option("--eta", o->eta, "contact-reinforcement constant")
      ->capture_default_str();
  sub->add_option("--mu", o->mu, "triadic-closure fraction")->capture_default_str();
  sub->add_flag("--baseline-adn", o->baseline_adn,
                "memoryless activity-driven baseline instead");
  sub->add_option("--activation-prob", o->activation_prob,
                  "per-step activation probability (baseline)")
      ->capture_default_str();
  sub->add_option("--m", o->m, "links per activation (baseline)")->capture_default_str();
  sub->add_option("--seed", o->seed, "RNG seed (default: random, recorded in outputs)");
  sub->add_option("--out", o->out, "output link file (default <outdir>/generated.links)");
  sub->add_option("--outdir", o->outdir, "output directory")->capture_default_str();
  sub->add_option("--jobs", o->jobs, "worker threads (0: all cores)")
      ->capture_default_str();
  // A configurable section plus the subcommand on the command line counts as two
  // parse occurrences in CLI11; run the command once regardless.
  auto once = std::make_shared<bool>(false);
  sub->callback([o, once]() {
    if (std::exchange(*once, true)) return;
    run_generate(*o);
  });
}

}  // namespace cli
