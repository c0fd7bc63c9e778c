#pragma once
// Vaccination strategies: movement-information ranking (class-frequency,
// exact-contact and stay-time variants), acquaintance and degree baselines,
// random vaccination, mass (preventive) deployment with partial information
// availability, and the efficiency metric. Ring (post-outbreak) deployment
// lives in the epidemic loop; this module builds its ranking inputs.

#include <cstdint>
#include <span>
#include <vector>

#include "spdt/contact.hpp"
#include "spdt/epidemic.hpp"
#include "spdt/rng.hpp"

namespace spdt {

// Contact-size classes a visited location can fall into.
struct LocationClassTable {
  // inclusive (lo, hi) bounds; the last class is open-ended in spirit and hi
  // only caps the weight formula.
  std::vector<std::pair<int64_t, int64_t>> bounds = {
      {1, 5}, {6, 15}, {16, 25}, {26, 50}, {51, 100}, {101, 1000}};
  size_t size() const { return bounds.size(); }
  // class index for a visit with d contacts (d >= 1); counts beyond the last
  // lower bound land in the last class.
  size_t class_of(int64_t d) const;
};

struct MovementProfile {
  NodeId node = 0;
  std::vector<int64_t> freqs;  // visits per class
};

// Group a host's links by identical (host, t_s, t_l) stays inside the first
// `window_days`, count distinct neighbors per stay (only direct-component
// links unless use_indirect), and bucket each stay into its class.
std::vector<MovementProfile> build_movement_profiles(const TemporalContactNetwork& net,
                                                     int window_days,
                                                     const LocationClassTable& classes,
                                                     bool use_indirect = false);

// Average spreading potential of one visit to a class-i location:
// w_i = (2 - (1-beta)^{lo_i} - (1-beta)^{hi_i}) / 2.
double imv_class_weight(const LocationClassTable& classes, size_t class_idx,
                        double beta);

// W = sum_i f_i w_i. Scores indexed by node id; higher ranks first.
std::vector<double> rank_imv(const std::vector<MovementProfile>& profiles,
                             uint32_t node_count, const LocationClassTable& classes,
                             double beta);

// Exact-contact variant: each stay contributes 1 - (1-beta)^d.
std::vector<double> rank_imv_exact(const TemporalContactNetwork& net, int window_days,
                                   double beta, bool use_indirect = false);

// Stay-time variant: per stay beta = 1.6 beta0 (1 - e^{-t_i/t0}), t_i the
// stay duration, then the exact-contact formula.
std::vector<double> rank_imv_temporal(const TemporalContactNetwork& net,
                                      int window_days, double beta0, double t0_s,
                                      bool use_indirect = false);

// Every node present in the window names one uniformly random contact; the
// score is how often a node was named.
std::vector<double> rank_acquaintance(const TemporalContactNetwork& net,
                                      int window_days, uint64_t seed,
                                      bool use_indirect = false);

// Distinct contacts in the window.
std::vector<double> rank_degree(const TemporalContactNetwork& net, int window_days,
                                bool use_indirect = false);

struct MassVaccinationResult {
  std::vector<NodeId> vaccinated;  // sorted
  size_t requested = 0;            // floor(P*N)
  size_t shortfall = 0;            // requested - vaccinated when pool too small
};

// Sample an information pool of floor(F*N) nodes, rank inside the pool (empty
// scores = random order, the RV strategy) and pick the top floor(P*N).
MassVaccinationResult apply_mass_vaccination(uint32_t node_count,
                                             std::span<const double> scores, double P,
                                             double F, uint64_t seed);

// eta = (z_ref - z_vac)/z_ref * 100.
double efficiency(double z_ref, double z_vac);

// Undirected contact adjacency used by ring vaccination and the acquaintance
// strategy: partners over all links (or the window), optionally direct-only.
std::vector<std::vector<NodeId>> contact_partners(const TemporalContactNetwork& net,
                                                  int window_days,
                                                  bool use_indirect = true);

// Global top-P membership bitmap for threshold-mode ring vaccination: the
// floor(P*N) best nodes by (score desc, id asc).
std::vector<bool> top_fraction_set(std::span<const double> scores, double P);

}  // namespace spdt
