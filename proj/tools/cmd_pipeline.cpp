#include <cstdio>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>

#include "cli_common.hpp"

// Experiment pipeline: one config file drives any subset of the stages
//   ingest -> fit -> generate -> simulate -> metrics -> vaccinate
// (a section per stage, executed in that fixed order when present). Stages
// that consume a network use the stage's `network` key when given, otherwise
// the last network the pipeline produced (ingest's chosen variant or the
// generated file). Every artifact is hashed into <outdir>/manifest.txt at the
// end so reruns can be compared byte-for-byte.

namespace cli {

namespace {

// Section keys accept both dash and underscore spellings; normalize once.
std::map<std::string, std::string> norm_section(const spdt::Config& c,
                                                const std::string& sec) {
  std::map<std::string, std::string> m;
  const auto it = c.sections().find(sec);
  if (it == c.sections().end()) return m;
  for (const auto& [k, v] : it->second) {
    std::string nk = k;
    for (char& ch : nk)
      if (ch == '-') ch = '_';
    m[nk] = v;
  }
  return m;
}

using Section = std::map<std::string, std::string>;

std::string gs(const Section& m, const std::string& key, const std::string& fb) {
  const auto it = m.find(key);
  return it == m.end() ? fb : it->second;
}

double gd(const Section& m, const std::string& key, double fb) {
  const auto it = m.find(key);
  if (it == m.end()) return fb;
  size_t pos = 0;
  const double v = std::stod(it->second, &pos);
  if (pos != it->second.size())
    throw std::runtime_error("bad number for '" + key + "': " + it->second);
  return v;
}

int64_t gi(const Section& m, const std::string& key, int64_t fb) {
  const auto it = m.find(key);
  if (it == m.end()) return fb;
  size_t pos = 0;
  const int64_t v = std::stoll(it->second, &pos);
  if (pos != it->second.size())
    throw std::runtime_error("bad integer for '" + key + "': " + it->second);
  return v;
}

bool gb(const Section& m, const std::string& key, bool fb) {
  const auto it = m.find(key);
  if (it == m.end()) return fb;
  const std::string& v = it->second;
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw std::runtime_error("bad boolean for '" + key + "': " + v);
}

std::string require(const Section& m, const std::string& key, const std::string& stage) {
  const auto it = m.find(key);
  if (it == m.end())
    throw std::runtime_error("[" + stage + "] is missing required key '" + key + "'");
  return it->second;
}

void read_exposure(const Section& m, ExposureOpts& x) {
  x.g = gd(m, "g", x.g);
  x.p_lpm = gd(m, "p_lpm", x.p_lpm);
  x.V = gd(m, "V", x.V);
  x.sigma = gd(m, "sigma", x.sigma);
  x.r_min = gd(m, "r_min", x.r_min);
  x.r_max = gd(m, "r_max", x.r_max);
  x.r_t = gd(m, "r_t", x.r_t);
}

void read_disease(const Section& m, DiseaseOpts& d) {
  d.tau_min = static_cast<int>(gi(m, "tau_min", d.tau_min));
  d.tau_max = static_cast<int>(gi(m, "tau_max", d.tau_max));
  d.seed_tau = static_cast<int>(gi(m, "seed_tau", d.seed_tau));
  d.seed_count = static_cast<int>(gi(m, "seed_count", d.seed_count));
  const auto it = m.find("seed_node");
  if (it != m.end()) {
    std::string list = it->second;
    for (char& ch : list)
      if (ch == ',') ch = ' ';
    std::istringstream ss(list);
    uint32_t v;
    while (ss >> v) d.seed_nodes.push_back(v);
  }
}

struct Plan {
  spdt::Config resolved;            // config with every choice pinned
  std::vector<std::string> stages;  // execution order
  std::string outdir;
  uint64_t base_seed = 0;
  int jobs = 0;
};

constexpr const char* kStageOrder[] = {"ingest", "fit",     "generate",
                                       "simulate", "metrics", "vaccinate"};

}  // namespace

int run_pipeline(const PipelineOpts& o) {
  spdt::Config cfg;
  try {
    cfg = spdt::Config::load(o.config_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "pipeline: %s\n", e.what());
    return 1;
  }

  static const std::set<std::string> known = {"pipeline", "ingest",  "fit",
                                              "generate", "simulate", "metrics",
                                              "vaccinate", "exposure", "disease"};
  for (const auto& [sec, kv] : cfg.sections())
    if (!sec.empty() && !known.count(sec))
      std::fprintf(stderr, "pipeline: ignoring unknown section [%s]\n", sec.c_str());

  Plan plan;
  const auto pipe = norm_section(cfg, "pipeline");
  plan.outdir = o.outdir_set ? o.outdir : gs(pipe, "outdir", o.outdir);
  plan.jobs = o.jobs != 0 ? o.jobs : static_cast<int>(gi(pipe, "jobs", 0));
  if (o.seed)
    plan.base_seed = *o.seed;
  else if (pipe.count("seed"))
    plan.base_seed = static_cast<uint64_t>(gi(pipe, "seed", 0));
  else
    plan.base_seed = resolve_seed(std::nullopt);

  plan.resolved = cfg;
  plan.resolved.set("pipeline", "outdir", plan.outdir);
  plan.resolved.set("pipeline", "seed", std::to_string(plan.base_seed));
  plan.resolved.set("pipeline", "jobs", std::to_string(plan.jobs));

  for (const char* s : kStageOrder)
    if (cfg.has_section(s)) plan.stages.push_back(s);
  if (plan.stages.empty()) {
    std::fprintf(stderr, "pipeline: no stage sections in %s\n", o.config_path.c_str());
    return 1;
  }

  const auto exposure_sec = norm_section(cfg, "exposure");
  const auto disease_sec = norm_section(cfg, "disease");

  // Resolve per-stage choices (seeds, chained networks, output paths) up
  // front so --dry-run shows exactly what would run.
  struct StageSpec {
    std::string name;
    std::string network;  // resolved input network, when the stage takes one
    uint64_t seed = 0;
  };
  std::vector<StageSpec> specs;
  std::string chain;  // last produced network
  std::string fit_out;
  try {
  for (const auto& name : plan.stages) {
    const auto m = norm_section(cfg, name);
    StageSpec s;
    s.name = name;
    const std::string stage_outdir = gs(m, "outdir", plan.outdir);
    if (name == "ingest") {
      chain = path_join(stage_outdir, gs(m, "use", "sdt") + ".links");
    } else if (name == "generate") {
      s.seed = m.count("seed") ? static_cast<uint64_t>(gi(m, "seed", 0))
                               : plan.base_seed + 1;
      chain = gs(m, "out", path_join(stage_outdir, "generated.links"));
      plan.resolved.set(name, "seed", std::to_string(s.seed));
      plan.resolved.set(name, "out", chain);
    } else {
      if (m.count("network"))
        s.network = m.at("network");
      else if (!chain.empty())
        s.network = chain;
      else
        throw std::runtime_error("[" + name +
                                 "] has no `network` key and no earlier stage "
                                 "produced one");
      plan.resolved.set(name, "network", s.network);
      if (name == "fit") {
        fit_out = gs(m, "out", path_join(stage_outdir, "fitted.cfg"));
        plan.resolved.set(name, "out", fit_out);
      } else if (name == "simulate") {
        s.seed = m.count("seed") ? static_cast<uint64_t>(gi(m, "seed", 0))
                                 : plan.base_seed + 2;
        plan.resolved.set(name, "seed", std::to_string(s.seed));
      } else if (name == "vaccinate") {
        s.seed = m.count("seed") ? static_cast<uint64_t>(gi(m, "seed", 0))
                                 : plan.base_seed + 3;
        plan.resolved.set(name, "seed", std::to_string(s.seed));
      }
    }
    specs.push_back(std::move(s));
  }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "pipeline: %s\n", e.what());
    return 1;
  }

  if (o.dry_run) {
    std::printf("pipeline plan (dry run):\n");
    for (size_t i = 0; i < specs.size(); ++i)
      std::printf("  stage %zu: %s\n", i + 1, specs[i].name.c_str());
    std::printf("%s", plan.resolved.canonical().c_str());
    return 0;
  }

  ensure_dir(plan.outdir);
  std::vector<std::pair<std::string, std::vector<std::string>>> produced;
  for (const auto& spec : specs) {
    std::printf("[%s]\n", spec.name.c_str());
    auto m = norm_section(cfg, spec.name);
    const std::string stage_outdir = gs(m, "outdir", plan.outdir);
    try {
      std::vector<std::string> artifacts;
      if (spec.name == "ingest") {
        IngestOpts s;
        s.input = require(m, "input", "ingest");
        s.outdir = stage_outdir;
        s.radius = gd(m, "radius", s.radius);
        s.max_gap = gi(m, "max_gap", s.max_gap);
        s.delta = gi(m, "delta", s.delta);
        s.min_updates = static_cast<int>(gi(m, "min_updates", s.min_updates));
        s.jobs = static_cast<int>(gi(m, "jobs", plan.jobs));
        artifacts = run_ingest(s);
      } else if (spec.name == "fit") {
        FitOpts s;
        s.network = spec.network;
        s.out = fit_out;
        s.outdir = stage_outdir;
        s.delta_steps = static_cast<int>(gi(m, "delta_steps", s.delta_steps));
        s.paired = gb(m, "paired", s.paired);
        s.alpha_init = gd(m, "alpha_init", s.alpha_init);
        artifacts = run_fit(s);
      } else if (spec.name == "generate") {
        // `params_from = fit` overlays the fitted parameters; explicit keys in
        // this section still win.
        if (gs(m, "params_from", "") == "fit") {
          if (fit_out.empty())
            throw std::runtime_error("params_from = fit requires a [fit] stage");
          const auto fitted = norm_section(spdt::Config::load(fit_out), "generate");
          for (const auto& [k, v] : fitted) m.emplace(k, v);  // no overwrite
          if (!m.count("heterogeneous") && fitted.count("mode"))
            m["heterogeneous"] =
                fitted.at("mode") == "heterogeneous" ? "true" : "false";
        }
        GenerateOpts s;
        s.nodes = static_cast<uint32_t>(gi(m, "nodes", s.nodes));
        s.days = static_cast<int>(gi(m, "days", s.days));
        s.dt = m.count("dt") ? gi(m, "dt", s.dt) : gi(m, "dt_s", s.dt);
        s.rho = gd(m, "rho", s.rho);
        s.q = gd(m, "q", s.q);
        s.heterogeneous = gb(m, "heterogeneous", s.heterogeneous);
        s.lambda = gd(m, "lambda", s.lambda);
        s.alpha = gd(m, "alpha", s.alpha);
        s.xi = gd(m, "xi", s.xi);
        s.psi = gd(m, "psi", s.psi);
        s.p_c = gd(m, "p_c", s.p_c);
        s.p_b = gd(m, "p_b", s.p_b);
        s.delta_steps = static_cast<int>(gi(m, "delta_steps", s.delta_steps));
        s.eta = gd(m, "eta", s.eta);
        s.mu = gd(m, "mu", s.mu);
        s.baseline_adn = gb(m, "baseline_adn", s.baseline_adn);
        s.activation_prob = gd(m, "activation_prob", s.activation_prob);
        s.m = static_cast<int>(gi(m, "m", s.m));
        s.seed = spec.seed;
        s.out = gs(m, "out", path_join(stage_outdir, "generated.links"));
        s.outdir = stage_outdir;
        s.jobs = static_cast<int>(gi(m, "jobs", plan.jobs));
        artifacts = run_generate(s);
      } else if (spec.name == "simulate") {
        SimulateOpts s;
        s.network = spec.network;
        s.horizon_days = static_cast<int>(gi(m, "horizon_days", s.horizon_days));
        s.replicates = static_cast<int>(gi(m, "replicates", s.replicates));
        s.seed = spec.seed;
        read_exposure(exposure_sec, s.exposure);
        read_disease(disease_sec, s.disease);
        s.serial = gb(m, "serial", s.serial);
        s.out_prefix = gs(m, "out_prefix", path_join(stage_outdir, "sim"));
        s.outdir = stage_outdir;
        s.jobs = static_cast<int>(gi(m, "jobs", plan.jobs));
        artifacts = run_simulate(s);
      } else if (spec.name == "metrics") {
        MetricsOpts s;
        s.network = spec.network;
        read_exposure(exposure_sec, s.exposure);
        s.threshold = gd(m, "threshold", s.threshold);
        s.daily = gb(m, "daily", s.daily);
        s.temporal = gb(m, "temporal", s.temporal);
        s.max_gap_days = static_cast<int>(gi(m, "max_gap_days", s.max_gap_days));
        s.sample_sources =
            static_cast<uint32_t>(gi(m, "sample_sources", s.sample_sources));
        s.count_day_variants = gb(m, "count_day_variants", s.count_day_variants);
        s.max_paths = static_cast<uint64_t>(
            gi(m, "max_paths", static_cast<int64_t>(s.max_paths)));
        s.out_prefix = gs(m, "out_prefix", path_join(stage_outdir, "metrics"));
        s.outdir = stage_outdir;
        s.jobs = static_cast<int>(gi(m, "jobs", plan.jobs));
        artifacts = run_metrics(s);
      } else if (spec.name == "vaccinate") {
        VaccinateOpts s;
        s.network = spec.network;
        s.strategy = gs(m, "strategy", s.strategy);
        s.coverage = gd(m, "coverage", s.coverage);
        s.fraction = gd(m, "fraction", s.fraction);
        s.beta = gd(m, "beta", s.beta);
        s.beta0 = gd(m, "beta0", s.beta0);
        s.t0 = gd(m, "t0", s.t0);
        s.window_days = static_cast<int>(gi(m, "window_days", s.window_days));
        s.use_indirect = gb(m, "use_indirect", s.use_indirect);
        s.ring = gb(m, "ring", s.ring);
        s.detect_prob = gd(m, "detect_prob", s.detect_prob);
        s.deploy_day = static_cast<int>(gi(m, "deploy_day", s.deploy_day));
        s.ring_random = gb(m, "ring_random", s.ring_random);
        s.horizon_days = static_cast<int>(gi(m, "horizon_days", s.horizon_days));
        s.replicates = static_cast<int>(gi(m, "replicates", s.replicates));
        s.seed = spec.seed;
        read_exposure(exposure_sec, s.exposure);
        read_disease(disease_sec, s.disease);
        s.out_prefix = gs(m, "out_prefix", path_join(stage_outdir, "vac"));
        s.outdir = stage_outdir;
        s.jobs = static_cast<int>(gi(m, "jobs", plan.jobs));
        artifacts = run_vaccinate(s);
      }
      produced.emplace_back(spec.name, std::move(artifacts));
    } catch (const std::exception& e) {
      std::fprintf(stderr, "pipeline: stage '%s' failed: %s\n", spec.name.c_str(),
                   e.what());
      return 1;
    }
  }

  std::string manifest = render_header(header_lines(plan.resolved, plan.base_seed));
  manifest += "# columns = stage artifact fnv64\n";
  for (const auto& [stage, artifacts] : produced)
    for (const auto& path : artifacts)
      manifest += stage + "\t" + path + "\t" + spdt::hash_hex(file_hash(path)) + "\n";
  const std::string manifest_path = path_join(plan.outdir, "manifest.txt");
  write_text(manifest_path, manifest);
  std::printf("pipeline: %zu stage(s) done, manifest at %s\n", produced.size(),
              manifest_path.c_str());
  return 0;
}

void register_pipeline(CLI::App& app) {
  auto o = std::make_shared<PipelineOpts>();
  o->outdir = default_outdir();
  auto* sub = app.add_subcommand("pipeline",
                                 "Run configured stages end to end with a manifest");
  sub->add_option("config", o->config_path, "experiment config file")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--outdir", o->outdir, "output directory (beats [pipeline] outdir)")
      ->capture_default_str();
  sub->add_flag("--dry-run", o->dry_run, "print the resolved plan and exit");
  sub->add_option("--seed", o->seed, "base seed (beats [pipeline] seed)");
  sub->add_option("--jobs", o->jobs, "worker threads (0: all cores)")
      ->capture_default_str();
  sub->callback([o, sub]() {
    PipelineOpts opts = *o;
    opts.outdir_set = sub->count("--outdir") > 0;
    const int rc = run_pipeline(opts);
    if (rc != 0) throw CLI::RuntimeError(rc);
  });
}

}  // namespace cli
