#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "spdt/netmetrics.hpp"

using namespace spdt;

namespace {

SPDTLink mk(NodeId host, NodeId nbr, int64_t ts, int64_t tl, int64_t ts2, int64_t tl2) {
  return SPDTLink{host, nbr, ts, tl, ts2, tl2, 0.0};
}

TemporalContactNetwork make_net(uint32_t nodes, int days, std::vector<SPDTLink> links) {
  TemporalContactNetwork net;
  net.node_count = nodes;
  net.horizon_days = days;
  net.links = std::move(links);
  net.finalize();
  return net;
}

// one-hour direct contact inside a two-hour stay, shifted to a given day
SPDTLink strong(NodeId host, NodeId nbr, int day) {
  const int64_t t0 = static_cast<int64_t>(day) * kSecondsPerDay;
  return mk(host, nbr, t0, t0 + 7200, t0, t0 + 3600);
}

// thirty-second brush: dose far below the default threshold
SPDTLink weak(NodeId host, NodeId nbr, int day) {
  const int64_t t0 = static_cast<int64_t>(day) * kSecondsPerDay;
  return mk(host, nbr, t0, t0 + 7200, t0, t0 + 30);
}

}  // namespace

TEST_SUITE("netmetrics") {

TEST_CASE("projection keeps links whose dose clears the threshold") {
  auto net = make_net(4, 1, {strong(0, 1, 0), weak(2, 3, 0), strong(0, 1, 0)});
  ProjectionConfig cfg;  // threshold 0.01 PFU at r = 60 min
  auto proj = static_projection(net, cfg);
  REQUIRE(proj.edges.size() == 1);  // duplicate strong links collapse
  CHECK(proj.edges[0] == std::pair<NodeId, NodeId>{0, 1});

  // a permissive threshold lets the brush through
  ProjectionConfig loose;
  loose.threshold = 1e-9;
  CHECK(static_projection(net, loose).edges.size() == 2);

  // a longer decay time raises every dose
  ProjectionConfig slow;
  slow.r_minutes = 300.0;
  slow.threshold = 0.01;
  CHECK(static_projection(net, slow).edges.size() >= 1);
}

TEST_CASE("degree and clustering on a triangle with a pendant") {
  auto net = make_net(4, 1, {
    strong(0, 1, 0), strong(1, 2, 0), strong(2, 0, 0), strong(2, 3, 0),
  });
  ProjectionConfig cfg;
  auto m = degree_and_clustering(static_projection(net, cfg));
  CHECK(m.out_degree == std::vector<uint32_t>{1, 1, 2, 0});
  CHECK(m.in_degree == std::vector<uint32_t>{1, 1, 1, 1});
  CHECK(m.degree == std::vector<uint32_t>{2, 2, 3, 1});
  CHECK(m.clustering[0] == doctest::Approx(1.0));
  CHECK(m.clustering[1] == doctest::Approx(1.0));
  CHECK(m.clustering[2] == doctest::Approx(1.0 / 3.0));
  CHECK(m.clustering[3] == 0.0);
}

TEST_CASE("daily aggregates track presence per day") {
  auto net = make_net(3, 2, {strong(0, 1, 0), strong(1, 2, 0), strong(2, 0, 0)});
  ProjectionConfig cfg;
  auto days = daily_aggregates(net, cfg);
  REQUIRE(days.size() == 2);
  CHECK(days[0].present);
  CHECK(days[0].mean_degree == doctest::Approx(2.0));
  CHECK(days[0].mean_clustering == doctest::Approx(1.0));
  CHECK_FALSE(days[1].present);
  CHECK(days[1].mean_degree == 0.0);
}

TEST_CASE("temporal distances on a two-day relay chain") {
  auto net = make_net(3, 2, {strong(0, 1, 0), strong(1, 2, 1)});
  TemporalPathConfig cfg;
  auto tc = temporal_centralities(net, cfg);
  // closeness collects 1/dist over sources reaching the node
  CHECK(tc.closeness[0] == 0.0);
  CHECK(tc.closeness[1] == doctest::Approx(1.0));        // from 0, one hop
  CHECK(tc.closeness[2] == doctest::Approx(1.5));        // 1/2 from 0, 1 from 1
  CHECK(tc.betweenness[0] == 0.0);
  CHECK(tc.betweenness[1] == doctest::Approx(1.0));      // relays 0 -> 2
  CHECK(tc.betweenness[2] == 0.0);
}

TEST_CASE("paths cannot wait longer than the allowed gap") {
  auto net = make_net(3, 7, {strong(0, 1, 0), strong(1, 2, 6)});
  TemporalPathConfig tight;  // max gap 5 days
  auto tc = temporal_centralities(net, tight);
  CHECK(tc.closeness[2] == doctest::Approx(1.0));  // reachable from 1 only
  CHECK(tc.betweenness[1] == 0.0);
  TemporalPathConfig loose;
  loose.max_gap_days = 6;
  auto tc2 = temporal_centralities(net, loose);
  CHECK(tc2.closeness[2] == doctest::Approx(1.5));
  CHECK(tc2.betweenness[1] == doctest::Approx(1.0));
}

TEST_CASE("tied shortest paths all count") {
  auto net = make_net(4, 2, {
    strong(0, 1, 0), strong(0, 2, 0), strong(1, 3, 1), strong(2, 3, 1),
  });
  TemporalPathConfig cfg;
  auto tc = temporal_centralities(net, cfg);
  CHECK(tc.betweenness[1] == doctest::Approx(1.0));
  CHECK(tc.betweenness[2] == doctest::Approx(1.0));
  CHECK(tc.closeness[3] == doctest::Approx(0.5 + 1.0 + 1.0));  // from 0, 1, 2
}

TEST_CASE("day-assignment variants of one node sequence dedupe by default") {
  auto net = make_net(3, 3, {strong(0, 1, 0), strong(1, 2, 1), strong(1, 2, 2)});
  TemporalPathConfig dedupe;
  auto tc = temporal_centralities(net, dedupe);
  CHECK(tc.betweenness[1] == doctest::Approx(1.0));
  TemporalPathConfig variants;
  variants.dedupe_node_sequences = false;
  auto tc2 = temporal_centralities(net, variants);
  CHECK(tc2.betweenness[1] == doctest::Approx(2.0));
}

TEST_CASE("sampled sources restrict the expansion") {
  auto net = make_net(3, 2, {strong(0, 1, 0), strong(1, 2, 1)});
  TemporalPathConfig cfg;
  cfg.sample_sources = 1;  // only node 0
  auto tc = temporal_centralities(net, cfg);
  CHECK(tc.closeness[1] == doctest::Approx(1.0));
  CHECK(tc.closeness[2] == doctest::Approx(0.5));
  CHECK(tc.betweenness[1] == doctest::Approx(1.0));
}

TEST_CASE("path enumeration honors its cap") {
  // a 2x2 ladder gives four tied two-hop paths 0 -> 5
  auto net = make_net(6, 2, {
    strong(0, 1, 0), strong(0, 2, 0), strong(0, 3, 0), strong(0, 4, 0),
    strong(1, 5, 1), strong(2, 5, 1), strong(3, 5, 1), strong(4, 5, 1),
  });
  TemporalPathConfig cfg;
  auto full = temporal_centralities(net, cfg);
  double total = 0;
  for (NodeId v : {1, 2, 3, 4}) total += full.betweenness[v];
  CHECK(total == doctest::Approx(4.0));
  TemporalPathConfig capped;
  capped.max_paths_per_pair = 2;
  auto cut = temporal_centralities(net, capped);
  double total2 = 0;
  for (NodeId v : {1, 2, 3, 4}) total2 += cut.betweenness[v];
  CHECK(total2 <= 2.0);
}

TEST_CASE("gap validation") {
  auto net = make_net(2, 1, {strong(0, 1, 0)});
  TemporalPathConfig bad;
  bad.max_gap_days = 0;
  CHECK_THROWS_AS((void)temporal_centralities(net, bad), std::invalid_argument);
}

}  // TEST_SUITE
