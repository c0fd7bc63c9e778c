#pragma once
// Network characterization: exposure-thresholded static projection, degree
// and clustering (whole-network and per-day), and time-respecting-path
// centralities over day-aggregated links.

#include <cstdint>
#include <span>
#include <vector>

#include "spdt/contact.hpp"
#include "spdt/exposure.hpp"

namespace spdt {

// A link becomes a static edge when its inhaled dose at a fixed decay rate
// reaches the threshold (default 0.01 PFU at r = 60 min).
struct ProjectionConfig {
  ExposureParams exposure;
  double r_minutes = 60.0;
  double threshold = 0.01;
  double b() const { return 1.0 / (60.0 * r_minutes); }
};

struct StaticProjection {
  uint32_t node_count = 0;
  std::vector<std::pair<NodeId, NodeId>> edges;  // directed, sorted, unique
};

StaticProjection static_projection(const TemporalContactNetwork& net,
                                   const ProjectionConfig& cfg);

// Projection of a span of links (used for per-day aggregates).
StaticProjection static_projection(std::span<const SPDTLink> links,
                                   uint32_t node_count, const ProjectionConfig& cfg);

struct NodeMetrics {
  std::vector<uint32_t> in_degree, out_degree;
  std::vector<uint32_t> degree;        // undirected view
  std::vector<double> clustering;      // triangles / (k(k-1)/2), 0 when k < 2
};

// Clustering neglects edge directions (symmetric closure of the edge set).
NodeMetrics degree_and_clustering(const StaticProjection& proj);

struct DailyAggregate {
  int day = 0;
  bool present = false;    // any edge this day
  double mean_degree = 0;  // over nodes with >= 1 edge that day
  double mean_clustering = 0;
};

std::vector<DailyAggregate> daily_aggregates(const TemporalContactNetwork& net,
                                             const ProjectionConfig& cfg);

// Time-respecting paths walk day-aggregated directed links with consecutive
// day gaps in [1, max_gap_days]; path length is the hop count and the
// shortest path over any start day is counted.
struct TemporalPathConfig {
  int max_gap_days = 5;
  // Count each shortest path once per distinct node sequence (day-assignment
  // variants deduplicated). Switching this off counts (node, day) sequences.
  bool dedupe_node_sequences = true;
  // Safety valve for betweenness path enumeration per (source, target).
  size_t max_paths_per_pair = 100000;
  // When non-zero, only this many sources (lowest ids) are expanded — the
  // sampled variant for large networks.
  uint32_t sample_sources = 0;
  int jobs = 0;
};

struct TemporalCentrality {
  std::vector<double> betweenness;  // BC^t: shortest paths through the node
  std::vector<double> closeness;    // CC^t: sum over sources of 1/dist
};

TemporalCentrality temporal_centralities(const TemporalContactNetwork& net,
                                         const TemporalPathConfig& cfg);

// Serial reference of the same computation (no OpenMP), for equivalence tests.
TemporalCentrality temporal_centralities_serial(const TemporalContactNetwork& net,
                                                const TemporalPathConfig& cfg);

}  // namespace spdt
