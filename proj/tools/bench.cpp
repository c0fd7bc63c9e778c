// Timing + equivalence harness for the kernels that have both an OpenMP and a
// plain serial implementation: the epidemic day loop (grouped-by-neighbor
// parallel vs single-pass reference), the temporal-centrality BFS and the
// generator under different thread counts. Exits nonzero if any pair of
// implementations disagrees, so it doubles as a consistency check.

#include <chrono>
#include <cstdio>
#include <functional>

#include "CLI11.hpp"
#include "spdt/epidemic.hpp"
#include "spdt/graphgen.hpp"
#include "spdt/netmetrics.hpp"
#include "spdt/numerics.hpp"
#include "spdt/rng.hpp"

namespace {

double seconds(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

int g_failures = 0;

void report(const char* name, double t_serial, double t_parallel, bool equal) {
  std::printf("%-28s serial %8.3fs   parallel %8.3fs   speedup %5.2fx   %s\n", name,
              t_serial, t_parallel, t_parallel > 0 ? t_serial / t_parallel : 0.0,
              equal ? "match" : "MISMATCH");
  if (!equal) ++g_failures;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs OpenMP benchmarks with equivalence checks"};
  uint32_t nodes = 2000;
  int days = 7;
  int replicates = 4;
  uint64_t seed = 42;
  int jobs = 0;
  app.add_option("--nodes", nodes)->capture_default_str();
  app.add_option("--days", days)->capture_default_str();
  app.add_option("--replicates", replicates)->capture_default_str();
  app.add_option("--seed", seed)->capture_default_str();
  app.add_option("--jobs", jobs, "threads for the parallel side (0: all cores)")
      ->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  spdt::GraphGenParams gp;
  gp.N = nodes;
  gp.T_days = days;
  gp.heterogeneous = true;

  // Generator: jobs=1 vs jobs=N must produce the identical network.
  spdt::TemporalContactNetwork net1, netN;
  const double t_gen1 = seconds([&] { net1 = spdt::generate_network(gp, seed, 1); });
  const double t_genN = seconds([&] { netN = spdt::generate_network(gp, seed, jobs); });
  report("generate", t_gen1, t_genN, net1 == netN);
  std::printf("  network: %u nodes, %zu links, %d days\n", net1.node_count,
              net1.links.size(), net1.horizon_days);

  // Epidemic: single-pass serial reference vs grouped parallel day loop.
  spdt::DiseaseParams dp;
  dp.seed_count = 10;
  const auto groups = spdt::build_day_groups(net1);
  spdt::SimulationOptions serial_opts, par_opts;
  serial_opts.serial_reference = true;
  serial_opts.jobs = 1;
  par_opts.jobs = jobs;
  bool sim_equal = true;
  double t_sim_serial = 0, t_sim_par = 0;
  for (int rep = 0; rep < replicates; ++rep) {
    spdt::SimulationRun a, b;
    t_sim_serial += seconds([&] {
      a = spdt::run_simulation(net1, groups, dp, days, seed + rep, serial_opts);
    });
    t_sim_par += seconds(
        [&] { b = spdt::run_simulation(net1, groups, dp, days, seed + rep, par_opts); });
    if (a.outbreak_size != b.outbreak_size || a.daily.size() != b.daily.size())
      sim_equal = false;
    else
      for (size_t d = 0; d < a.daily.size(); ++d)
        if (a.daily[d].I_n != b.daily[d].I_n || a.daily[d].I_p != b.daily[d].I_p)
          sim_equal = false;
  }
  report("epidemic day loop", t_sim_serial, t_sim_par, sim_equal);

  // Temporal centralities: plain BFS loop vs OpenMP-over-sources.
  spdt::TemporalPathConfig tp;
  tp.sample_sources = nodes > 400 ? 400 : 0;  // keep the all-pairs side bounded
  tp.jobs = jobs;
  spdt::TemporalCentrality ser, par;
  const double t_c_serial =
      seconds([&] { ser = spdt::temporal_centralities_serial(net1, tp); });
  const double t_c_par = seconds([&] { par = spdt::temporal_centralities(net1, tp); });
  bool cent_equal =
      ser.betweenness == par.betweenness && ser.closeness == par.closeness;
  report("temporal centralities", t_c_serial, t_c_par, cent_equal);

  // Compensated summation: blocked (parallel-friendly) vs straight Kahan.
  std::vector<double> xs(1 << 22);
  spdt::Rng rng = spdt::Rng::stream(seed, 0xBE7C);
  for (auto& x : xs) x = rng.uniform(-1.0, 1.0) * 1e6;
  double s_blocked = 0, s_serial = 0;
  const double t_k_serial = seconds([&] { s_serial = spdt::kahan_sum_serial(xs); });
  const double t_k_blocked = seconds([&] { s_blocked = spdt::kahan_sum_blocked(xs); });
  report("compensated sum", t_k_serial, t_k_blocked,
         std::abs(s_blocked - s_serial) <= 1e-6 * std::max(1.0, std::abs(s_serial)));

  if (g_failures) {
    std::printf("%d kernel pair(s) disagree\n", g_failures);
    return 1;
  }
  std::printf("all kernel pairs agree\n");
  return 0;
}
