#pragma once
// Contact-network extraction from geo-tagged location-update streams.
// Per user, consecutive updates staying within a small radius form a visit;
// other users' update runs around the visit center that start during the
// stay or within delta seconds after it become SPDT links.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "spdt/contact.hpp"

namespace spdt {

struct LocationUpdate {
  int64_t user = 0;         // id as given in the input; remapped to dense NodeId later
  double lat = 0, lon = 0;  // degrees
  int64_t time = 0;         // seconds
};

struct VisitExtractionConfig {
  double radius_m = 20.0;    // co-location radius
  int64_t max_gap_s = 1800;  // max silence inside one visit
  int64_t delta_s = 10800;   // indirect window
  int min_nbr_updates = 2;   // updates required to count a neighbor presence
};

struct Visit {
  NodeId user = 0;
  double lat = 0, lon = 0;  // center: member update minimizing summed distance
  int64_t arrive = 0;       // first member update time
  int64_t depart = 0;       // last member update time
  std::vector<uint32_t> members;  // indices into the user's update array
};

// Great-circle distance in meters between two WGS-84 points.
double haversine_m(double lat1, double lon1, double lat2, double lon2);

// Greedy stay-point scan over one user's time-ordered updates: a run grows
// while each update lies within radius_m of the run's first update and the
// gap to the previous member is at most max_gap_s. The center is the member
// update with minimal summed distance to all members (ties: earliest).
// Single-update runs yield zero-duration visits and are kept.
std::vector<Visit> extract_visits(std::span<const LocationUpdate> user_updates,
                                  const VisitExtractionConfig& cfg);

// Per-user time-ordered updates with users remapped to dense ids 0..N-1
// (order of first appearance of the original ids after sorting by id).
struct UpdateTable {
  std::vector<std::vector<LocationUpdate>> by_user;  // times shifted to start at 0
  std::vector<int64_t> original_ids;                 // dense id -> input id
  int64_t t0 = 0;                                    // subtracted offset
};

UpdateTable index_updates(std::vector<LocationUpdate> raw);

// All SPDT links for the given host visits: for each visit, every other user
// with a qualifying update run (>= min_nbr_updates updates, each within
// radius_m of the visit center, internal gaps <= max_gap_s) whose window
// starts in [t_s, t_l + delta] contributes one link per run.
std::vector<SPDTLink> build_links(const std::vector<std::vector<Visit>>& visits_by_user,
                                  const UpdateTable& table,
                                  const VisitExtractionConfig& cfg);

// Full pipeline: updates -> visits -> links -> network (the raw variant).
TemporalContactNetwork ingest_updates(std::vector<LocationUpdate> raw,
                                      const VisitExtractionConfig& cfg,
                                      const std::string& name = "sdt");

// One row of the variant comparison table.
struct VariantStats {
  std::string name;
  size_t links = 0;
  size_t direct_only = 0, mixed = 0, indirect_only = 0;
  size_t isolated_nodes = 0;
};

// The six standard variants of a raw (sparse) network:
//   sdt  raw extraction          sst  strip_indirect(sdt)
//   ddt  densify(sdt)            dst  strip_indirect(ddt)
//   ldt  collapse_indirect(ddt)  lst  strip_indirect(ldt)
struct NetworkVariants {
  TemporalContactNetwork sdt, sst, ddt, dst, ldt, lst;
  std::vector<VariantStats> stats;  // one row per variant, in the order above
};

NetworkVariants build_network_variants(TemporalContactNetwork sdt);

// Parse "user_id, lat, lon, unix_time" lines (comma or whitespace separated;
// '#' lines skipped). Throws std::runtime_error naming the offending line.
std::vector<LocationUpdate> parse_updates(const std::string& text);
std::vector<LocationUpdate> load_updates(const std::string& path);

}  // namespace spdt
