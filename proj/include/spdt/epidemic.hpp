#pragma once
// Daily-stepped stochastic SIR simulation over a temporal contact network.
// Within a day, every susceptible node accumulates the inhaled dose from all
// links it receives from infectious hosts (each link gets a fresh decay
// rate); one Bernoulli trial on P_I = 1 - e^{-sigma E} decides infection.
// Newly infected nodes start transmitting the following day (the day step
// doubles as a latent period) and recover after tau days.
//
// All randomness is drawn from counter-based streams keyed by
// (run seed, purpose, day, node/link), so results are identical for any
// thread count and any link iteration order.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "spdt/contact.hpp"
#include "spdt/exposure.hpp"

namespace spdt {

struct DiseaseParams {
  ExposureParams exposure;
  DecayConfig decay;
  int tau_min = 3, tau_max = 5;  // infectious period, uniform in days
  int seed_tau = 0;              // >0: fixed infectious period for seed nodes
  int seed_count = 1;            // used when seed_nodes is empty
  std::vector<NodeId> seed_nodes;
};

enum : uint8_t { kSusceptible = 0, kInfectious = 1, kRecovered = 2 };

struct CompartmentState {
  std::vector<uint8_t> status;
  std::vector<int32_t> inf_start;  // first infectious day
  std::vector<int32_t> inf_end;    // last infectious day

  explicit CompartmentState(uint32_t n = 0)
      : status(n, kSusceptible), inf_start(n, 0), inf_end(n, 0) {}
  uint32_t size() const { return static_cast<uint32_t>(status.size()); }
};

struct DailyMetrics {
  int day = 0;
  int64_t I_n = 0;  // new infections committed this day
  int64_t I_p = 0;  // nodes infectious during this day
  int64_t I_a = 0;  // cumulative new infections (seeds excluded)
};

// Day-d links of each network, grouped by receiving neighbor so per-neighbor
// dose accumulation is a private serial loop (deterministic under OpenMP).
// Built once per network and shared read-only across replicates.
struct DayGroups {
  struct Group {
    NodeId nbr;
    uint32_t begin, end;  // range in link_idx
  };
  std::vector<uint32_t> link_idx;      // day-major, grouped by nbr, stable
  std::vector<Group> groups;           // concatenated per day
  std::vector<uint32_t> day_offset;    // day d -> groups[day_offset[d]..day_offset[d+1])
};

DayGroups build_day_groups(const TemporalContactNetwork& net);

// Ring (post-outbreak) vaccination hook: from deploy_day on, each newly
// infected node is detected with prob F_detect; the susceptible contacts of a
// detected node are vaccinated if they rank in the global top-P set
// (threshold mode) or each with probability P (random mode), effective the
// next day.
struct RingConfig {
  bool threshold_mode = true;
  std::vector<bool> top_set;  // global top-P membership (threshold mode)
  double P = 0.0;             // per-candidate prob in random mode
  double F_detect = 1.0;
  int deploy_day = 7;
  std::vector<std::vector<NodeId>> partners;  // undirected contact adjacency
};

struct SimulationOptions {
  const std::vector<NodeId>* vaccinated = nullptr;  // recovered before day 0
  const RingConfig* ring = nullptr;
  int jobs = 0;                  // OpenMP threads; 0 = runtime default
  bool serial_reference = false; // plain single-pass reference implementation
};

// One simulated day. Commits infections drawn from day-d exposure (infectious
// from day+1), applies the ring hook, then recoveries. Returns the day's
// counts (I_a filled in by the caller).
DailyMetrics step_day(const TemporalContactNetwork& net, const DayGroups& groups,
                      CompartmentState& state, const DiseaseParams& params, int day,
                      uint64_t run_seed, const SimulationOptions& opts,
                      std::vector<int64_t>* ring_vaccinated_count = nullptr);

struct SimulationRun {
  std::vector<DailyMetrics> daily;
  int64_t outbreak_size = 0;  // I_a at the horizon
  double mean_R = 0.0;        // mean reproduction rate (NaN-free; 0 if undefined)
  std::vector<NodeId> seeds;
  std::vector<int64_t> ring_vaccinated;  // per day, when a ring hook is set
};

SimulationRun run_simulation(const TemporalContactNetwork& net,
                             const DiseaseParams& params, int horizon_days,
                             uint64_t seed, const SimulationOptions& opts = {});

// Same but reuses precomputed day groups (monte_carlo path).
SimulationRun run_simulation(const TemporalContactNetwork& net, const DayGroups& groups,
                             const DiseaseParams& params, int horizon_days,
                             uint64_t seed, const SimulationOptions& opts = {});

// R(t) = 1 + (tau/Delta) ln(I_p(t+Delta)/I_p(t)); days with zero prevalence
// at either end contribute nothing.
struct ReproductionSeries {
  std::vector<std::pair<int, double>> values;  // (day, R)
  double mean = 0.0;
};

ReproductionSeries reproduction_rate(std::span<const int64_t> prevalence,
                                     double tau_mean, int delta_days = 1);

// Nodes that originate at least one link in the first `window_days` whose
// every originated link there is IndirectOnly — invisible to a model that
// drops indirect transmission.
std::vector<NodeId> identify_hidden_spreaders(const TemporalContactNetwork& net,
                                              int window_days = 5);

// Partition by distinct direct-contact neighbors (links with a concurrent
// component) originated in the window: low 1-2, average 3-10, high 11-20,
// hub >20. Nodes with links but no direct neighbor are reported separately.
struct NodeClasses {
  std::vector<NodeId> low, average, high, hub;
  std::vector<NodeId> indirect_only;  // active in window, zero direct
};

NodeClasses classify_nodes(const TemporalContactNetwork& net, int window_days = 5);

struct MonteCarloResult {
  std::vector<int64_t> outbreaks;      // per replicate
  std::vector<double> mean_I_n, mean_I_p, mean_I_a;  // per day, replicate mean
  double mean_outbreak = 0.0;
  double mean_R = 0.0;
};

// Replicate i runs with seed base_seed + i; replicates are independent and
// run in parallel.
MonteCarloResult monte_carlo(const TemporalContactNetwork& net,
                             const DiseaseParams& params, int horizon_days,
                             int replicates, uint64_t base_seed,
                             const SimulationOptions& opts = {});

}  // namespace spdt
