#pragma once
// Shared plumbing for the command-line tool: option structs reused by the
// pipeline runner, config/seed/header helpers, and the per-command entry
// points. Every output file starts with '# key = value' lines carrying the
// tool version, the hash of the resolved parameter set and the seed, so any
// artifact can be traced back to what produced it.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spdt/config.hpp"
#include "spdt/contact.hpp"
#include "spdt/epidemic.hpp"
#include "spdt/exposure.hpp"
#include "spdt/graphgen.hpp"

namespace cli {

// --- common helpers ---------------------------------------------------------

uint64_t resolve_seed(const std::optional<uint64_t>& seed);
std::string default_outdir();  // $SPDT_OUTDIR when set, else "."
std::vector<std::string> header_lines(const spdt::Config& resolved, uint64_t seed);
std::string render_header(const std::vector<std::string>& lines);
void write_text(const std::string& path, const std::string& content);
std::string path_join(const std::string& dir, const std::string& name);
void ensure_dir(const std::string& dir);
uint64_t file_hash(const std::string& path);
void apply_jobs(int jobs);
std::string fmt(double v);

// Exposure + decay options shared by simulate / metrics / vaccinate.
struct ExposureOpts {
  double g = 0.304;
  double p_lpm = 7.5;
  double V = 2512.0;
  double sigma = 0.33;
  double r_min = 7.5;
  double r_max = 300.0;
  double r_t = 60.0;  // median decay time (minutes)
};

void add_exposure_options(CLI::App* sub, ExposureOpts& x);
spdt::ExposureParams to_exposure(const ExposureOpts& x);
spdt::DecayConfig to_decay(const ExposureOpts& x);
void exposure_into_config(const ExposureOpts& x, spdt::Config& c, const std::string& sec);

// Disease-course options shared by simulate / vaccinate.
struct DiseaseOpts {
  int tau_min = 3, tau_max = 5;
  int seed_tau = 0;
  int seed_count = 1;
  std::vector<uint32_t> seed_nodes;
};

void add_disease_options(CLI::App* sub, DiseaseOpts& d);
spdt::DiseaseParams to_disease(const DiseaseOpts& d, const ExposureOpts& x);
void disease_into_config(const DiseaseOpts& d, spdt::Config& c, const std::string& sec);

// --- per-command option structs ----------------------------------------------

struct IngestOpts {
  std::string input;
  std::string outdir = ".";
  double radius = 20.0;
  int64_t max_gap = 1800;
  int64_t delta = 10800;
  int min_updates = 2;
  int jobs = 0;
};

struct GenerateOpts {
  uint32_t nodes = 1000;
  int days = 7;
  int64_t dt = 300;
  double rho = 0.085;
  double q = 0.0048;
  bool heterogeneous = false;
  double lambda = 0.32;
  double alpha = 2.963;
  double xi = 0.26;
  double psi = 0.999;
  double p_c = 0.02;
  double p_b = 0.0;
  int delta_steps = 36;
  double eta = 0.1;
  double mu = 0.4;
  bool baseline_adn = false;
  double activation_prob = 0.01;
  int m = 1;
  std::optional<uint64_t> seed;
  std::string out;  // default <outdir>/generated.links
  std::string outdir = ".";
  int jobs = 0;
};

struct FitOpts {
  std::string network;
  std::string out;  // default <outdir>/fitted.cfg
  std::string outdir = ".";
  int delta_steps = 36;
  bool paired = false;
  double alpha_init = 2.0;
};

struct SimulateOpts {
  std::string network;
  int horizon_days = 0;  // 0: use the network horizon
  int replicates = 1;
  std::optional<uint64_t> seed;
  ExposureOpts exposure;
  DiseaseOpts disease;
  bool serial = false;
  std::string out_prefix;  // default <outdir>/sim
  std::string outdir = ".";
  int jobs = 0;
};

struct MetricsOpts {
  std::string network;
  ExposureOpts exposure;
  double threshold = 0.01;
  bool daily = false;
  bool temporal = false;
  int max_gap_days = 5;
  uint32_t sample_sources = 0;
  bool count_day_variants = false;
  uint64_t max_paths = 100000;
  std::string out_prefix;  // default <outdir>/metrics
  std::string outdir = ".";
  int jobs = 0;
};

struct VaccinateOpts {
  std::string network;
  std::string strategy = "imv";  // rv av dv imv imve imvt
  double coverage = 0.01;        // P
  double fraction = 1.0;         // F, information availability
  double beta = 0.1;
  double beta0 = 0.1;
  double t0 = 0.0;  // seconds; 0: mean stay duration in the ranking window
  int window_days = 7;
  bool use_indirect = false;
  bool ring = false;
  double detect_prob = 1.0;
  int deploy_day = 7;
  bool ring_random = false;
  int horizon_days = 0;
  int replicates = 10;
  std::optional<uint64_t> seed;
  ExposureOpts exposure;
  DiseaseOpts disease;
  std::string out_prefix;  // default <outdir>/vac
  std::string outdir = ".";
  int jobs = 0;
};

struct PipelineOpts {
  std::string config_path;
  std::string outdir = ".";
  bool outdir_set = false;  // --outdir given on the command line (beats config)
  bool dry_run = false;
  std::optional<uint64_t> seed;
  int jobs = 0;
};

// --- entry points (return artifact paths for the pipeline manifest) ----------

std::vector<std::string> run_ingest(const IngestOpts& o);
std::vector<std::string> run_generate(const GenerateOpts& o);
std::vector<std::string> run_fit(const FitOpts& o);
std::vector<std::string> run_simulate(const SimulateOpts& o);
std::vector<std::string> run_metrics(const MetricsOpts& o);
std::vector<std::string> run_vaccinate(const VaccinateOpts& o);
int run_pipeline(const PipelineOpts& o);

void register_ingest(CLI::App& app);
void register_generate(CLI::App& app);
void register_fit(CLI::App& app);
void register_simulate(CLI::App& app);
void register_metrics(CLI::App& app);
void register_vaccinate(CLI::App& app);
void register_pipeline(CLI::App& app);

}  // namespace cli
