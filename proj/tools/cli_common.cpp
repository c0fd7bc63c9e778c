#include "cli_common.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace cli {

uint64_t resolve_seed(const std::optional<uint64_t>& seed) {
  if (seed) return *seed;
  std::random_device rd;
  return (static_cast<uint64_t>(rd()) << 32) | rd();
}

std::string default_outdir() {
  const char* e = std::getenv("SPDT_OUTDIR");
  return (e && *e) ? std::string(e) : std::string(".");
}

std::vector<std::string> header_lines(const spdt::Config& resolved, uint64_t seed) {
  return {std::string("tool_version = ") + spdt::kToolVersion,
          "config_hash = " + spdt::hash_hex(resolved.hash()),
          "seed = " + std::to_string(seed)};
}

std::string render_header(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) {
    out += "# ";
    out += l;
    out += '\n';
  }
  return out;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw std::runtime_error("write failed: " + path);
}

std::string path_join(const std::string& dir, const std::string& name) {
  if (dir.empty() || dir == ".") return name;
  return (std::filesystem::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
  if (dir.empty() || dir == ".") return;
  std::filesystem::create_directories(dir);
}

uint64_t file_hash(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot hash missing file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return spdt::fnv1a64(ss.str());
}

void apply_jobs(int jobs) {
#if defined(_OPENMP)
  if (jobs > 0) omp_set_num_threads(jobs);
#else
  (void)jobs;
#endif
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

void add_exposure_options(CLI::App* sub, ExposureOpts& x) {
  sub->add_option("--g", x.g, "particle generation rate (PFU/s)")
      ->capture_default_str();
  sub->add_option("--p-lpm", x.p_lpm, "breathing rate (L/min)")->capture_default_str();
  sub->add_option("--V", x.V, "proximity air volume (m^3)")->capture_default_str();
  sub->add_option("--sigma", x.sigma, "per-particle infectiousness")
      ->capture_default_str();
  sub->add_option("--r-min", x.r_min, "minimum particle decay time (min)")
      ->capture_default_str();
  sub->add_option("--r-max", x.r_max, "maximum particle decay time (min)")
      ->capture_default_str();
  sub->add_option("--r-t", x.r_t, "median particle decay time (min)")
      ->capture_default_str();
}

spdt::ExposureParams to_exposure(const ExposureOpts& x) {
  spdt::ExposureParams p;
  p.g = x.g;
  p.p = x.p_lpm / 60000.0;  // L/min -> m^3/s
  p.V = x.V;
  p.sigma = x.sigma;
  return p;
}

spdt::DecayConfig to_decay(const ExposureOpts& x) {
  spdt::DecayConfig d;
  d.r_min = x.r_min;
  d.r_max = x.r_max;
  d.r_median = x.r_t;
  return d;
}

void exposure_into_config(const ExposureOpts& x, spdt::Config& c,
                          const std::string& sec) {
  c.set(sec, "g", fmt(x.g));
  c.set(sec, "p_lpm", fmt(x.p_lpm));
  c.set(sec, "V", fmt(x.V));
  c.set(sec, "sigma", fmt(x.sigma));
  c.set(sec, "r_min", fmt(x.r_min));
  c.set(sec, "r_max", fmt(x.r_max));
  c.set(sec, "r_t", fmt(x.r_t));
}

void add_disease_options(CLI::App* sub, DiseaseOpts& d) {
  sub->add_option("--tau-min", d.tau_min, "shortest infectious period (days)")
      ->capture_default_str();
  sub->add_option("--tau-max", d.tau_max, "longest infectious period (days)")
      ->capture_default_str();
  sub->add_option("--seed-tau", d.seed_tau,
                  "fixed infectious period for seed nodes (0: draw like the rest)")
      ->capture_default_str();
  sub->add_option("--seed-count", d.seed_count, "number of initially infected nodes")
      ->capture_default_str();
  sub->add_option("--seed-node", d.seed_nodes,
                  "explicit seed node id (repeatable; overrides --seed-count)");
}

spdt::DiseaseParams to_disease(const DiseaseOpts& d, const ExposureOpts& x) {
  spdt::DiseaseParams p;
  p.exposure = to_exposure(x);
  p.decay = to_decay(x);
  p.tau_min = d.tau_min;
  p.tau_max = d.tau_max;
  p.seed_tau = d.seed_tau;
  p.seed_count = d.seed_count;
  p.seed_nodes.assign(d.seed_nodes.begin(), d.seed_nodes.end());
  return p;
}

void disease_into_config(const DiseaseOpts& d, spdt::Config& c, const std::string& sec) {
  c.set(sec, "tau_min", std::to_string(d.tau_min));
  c.set(sec, "tau_max", std::to_string(d.tau_max));
  c.set(sec, "seed_tau", std::to_string(d.seed_tau));
  c.set(sec, "seed_count", std::to_string(d.seed_count));
  if (!d.seed_nodes.empty()) {
    std::string s;
    for (uint32_t v : d.seed_nodes) {
      if (!s.empty()) s += ' ';
      s += std::to_string(v);
    }
    c.set(sec, "seed_nodes", s);
  }
}

}  // namespace cli
