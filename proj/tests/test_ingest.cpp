#include "doctest.h"

#include <algorithm>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "spdt/ingest.hpp"

using namespace spdt;

namespace {

// exact metres-per-degree of latitude for the haversine radius in use
constexpr double kMPerDeg = 111194.92664455874;

double at_m(double metres) { return metres / kMPerDeg; }

LocationUpdate up(int64_t user, double metres, int64_t t) {
  return LocationUpdate{user, at_m(metres), 0.0, t};
}

// six users around one spot: a long host stay, an overlapping guest, a
// straddling guest, a late arrival inside the relay window, one a second too
// late, and a single-ping user
std::vector<LocationUpdate> planted_trace() {
  std::vector<LocationUpdate> raw;
  for (int64_t t : {0, 900, 1800, 2700, 3600}) raw.push_back(up(100, 0, t));
  raw.push_back(up(200, 5, 600));
  raw.push_back(up(200, 5, 1200));
  raw.push_back(up(300, 8, 3000));
  raw.push_back(up(300, 8, 3600));
  raw.push_back(up(300, 8, 4800));
  raw.push_back(up(400, 3, 5400));
  raw.push_back(up(400, 3, 6000));
  raw.push_back(up(500, 0, 14401));
  raw.push_back(up(500, 0, 15000));
  raw.push_back(up(600, 0, 1000));
  return raw;
}

using LinkTuple = std::tuple<NodeId, NodeId, int64_t, int64_t, int64_t, int64_t>;

std::vector<LinkTuple> link_tuples(const TemporalContactNetwork& net) {
  std::vector<LinkTuple> out;
  for (const auto& l : net.links)
    out.emplace_back(l.host, l.nbr, l.t_s, l.t_l, l.t_s2, l.t_l2);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_SUITE("ingest") {

TEST_CASE("haversine distance") {
  CHECK(haversine_m(0, 0, 1, 0) == doctest::Approx(kMPerDeg).epsilon(1e-12));
  CHECK(haversine_m(0, 0, 0, 1) == doctest::Approx(kMPerDeg).epsilon(1e-12));
  CHECK(haversine_m(47.5, 19.0, 47.5, 19.0) == 0.0);
  CHECK(haversine_m(10, 20, -30, 40) == doctest::Approx(haversine_m(-30, 40, 10, 20)));
  // a 10 m step reads as 10 m
  CHECK(haversine_m(0, 0, at_m(10), 0) == doctest::Approx(10.0).epsilon(1e-9));
}

TEST_CASE("stay scan splits on silence and drift") {
  VisitExtractionConfig cfg;
  std::vector<LocationUpdate> u = {
      up(1, 0, 0), up(1, 10, 600), up(1, 15, 1200),  // one stay
      up(1, 15, 3301),                               // 2101 s silence
      up(1, 100, 3900),                              // 85 m from the new anchor
  };
  auto visits = extract_visits(u, cfg);
  REQUIRE(visits.size() == 3);
  CHECK(visits[0].members == std::vector<uint32_t>{0, 1, 2});
  CHECK(visits[0].arrive == 0);
  CHECK(visits[0].depart == 1200);
  // centroid update: the 10 m member has the smallest summed distance
  CHECK(visits[0].lat == u[1].lat);
  // single-update visits survive with zero duration
  CHECK(visits[1].members == std::vector<uint32_t>{3});
  CHECK(visits[1].arrive == visits[1].depart);
  CHECK(visits[2].members == std::vector<uint32_t>{4});
}

TEST_CASE("stay radius is anchored at the first member") {
  VisitExtractionConfig cfg;
  // 15 m hops: each within reach of the previous update but the third is
  // 30 m from the anchor, so the run must break there
  std::vector<LocationUpdate> u = {up(1, 0, 0), up(1, 15, 300), up(1, 30, 600)};
  auto visits = extract_visits(u, cfg);
  REQUIRE(visits.size() == 2);
  CHECK(visits[0].members == std::vector<uint32_t>{0, 1});
  CHECK(visits[1].members == std::vector<uint32_t>{2});
}

TEST_CASE("center ties go to the earliest member") {
  VisitExtractionConfig cfg;
  std::vector<LocationUpdate> u = {up(1, 0, 0), up(1, 18, 300)};
  auto visits = extract_visits(u, cfg);
  REQUIRE(visits.size() == 1);
  CHECK(visits[0].lat == u[0].lat);
  CHECK(visits[0].depart == 300);
}

TEST_CASE("update indexing remaps ids and rebases time") {
  std::vector<LocationUpdate> raw = {
      {42, 1.0, 2.0, 1000},
      {7, 1.0, 2.0, 1300},
      {99, 1.0, 2.0, 1100},
      {7, 1.0, 2.0, 1050},
  };
  auto table = index_updates(raw);
  CHECK(table.original_ids == std::vector<int64_t>{7, 42, 99});
  CHECK(table.t0 == 1000);
  REQUIRE(table.by_user.size() == 3);
  REQUIRE(table.by_user[0].size() == 2);  // user 7, time-ordered
  CHECK(table.by_user[0][0].time == 50);
  CHECK(table.by_user[0][1].time == 300);
  CHECK(table.by_user[1][0].time == 0);    // user 42
  CHECK(table.by_user[2][0].time == 100);  // user 99
}

TEST_CASE("planted trace yields the exact link table") {
  auto net = ingest_updates(planted_trace(), VisitExtractionConfig{});
  CHECK(net.node_count == 6);
  CHECK(net.horizon_days == 1);
  CHECK(count_isolated(net) == 0);

  const auto kinds = count_kinds(net);
  CHECK(kinds.total() == 10);
  CHECK(kinds.direct_only == 1);
  CHECK(kinds.mixed == 1);
  CHECK(kinds.indirect_only == 8);

  // dense ids follow sorted original ids: 100..600 -> 0..5
  std::vector<LinkTuple> expect = {
      {0, 1, 0, 3600, 600, 1200},       // fully concurrent guest
      {0, 2, 0, 3600, 3000, 4800},      // straddles the host departure
      {0, 3, 0, 3600, 5400, 6000},      // arrives after departure
      {1, 2, 600, 1200, 3000, 4800},
      {1, 3, 600, 1200, 5400, 6000},
      {2, 3, 3000, 4800, 5400, 6000},
      {2, 4, 3000, 4800, 14401, 15000},
      {3, 4, 5400, 6000, 14401, 15000},
      {5, 2, 1000, 1000, 3000, 4800},   // zero-duration host visit still links
      {5, 3, 1000, 1000, 5400, 6000},
  };
  CHECK(link_tuples(net) == expect);
  // user 500's run starts 1 s past t_l + delta of the host stay: no 0->4 link
  for (const auto& l : net.links) CHECK_FALSE((l.host == 0 && l.nbr == 4));
}

TEST_CASE("single-ping neighbors count once the update floor drops") {
  VisitExtractionConfig cfg;
  cfg.min_nbr_updates = 1;
  auto net = ingest_updates(planted_trace(), cfg);
  std::vector<NodeId> host0;
  for (const auto& l : net.links)
    if (l.host == 0) host0.push_back(l.nbr);
  std::sort(host0.begin(), host0.end());
  CHECK(host0 == std::vector<NodeId>{1, 2, 3, 5});
}

TEST_CASE("ingest is deterministic and absolute time drops out") {
  auto a = ingest_updates(planted_trace(), VisitExtractionConfig{});
  auto raw = planted_trace();
  for (auto& u : raw) u.time += 5'000'000'000;  // same trace, different epoch
  auto b = ingest_updates(std::move(raw), VisitExtractionConfig{});
  CHECK(serialize_network(a) == serialize_network(b));
}

TEST_CASE("empty input gives an empty network") {
  auto net = ingest_updates({}, VisitExtractionConfig{});
  CHECK(net.node_count == 0);
  CHECK(net.links.empty());
  CHECK(net.horizon_days == 0);
}

TEST_CASE("variant table tracks the transform chain") {
  auto net = ingest_updates(planted_trace(), VisitExtractionConfig{});
  auto v = build_network_variants(std::move(net));
  REQUIRE(v.stats.size() == 6);
  std::vector<std::string> names;
  for (const auto& s : v.stats) names.push_back(s.name);
  CHECK(names == std::vector<std::string>{"sdt", "sst", "ddt", "dst", "ldt", "lst"});

  const auto& sdt = v.stats[0];
  CHECK(sdt.links == 10);
  CHECK(sdt.direct_only == 1);
  CHECK(sdt.mixed == 1);
  CHECK(sdt.indirect_only == 8);
  CHECK(sdt.isolated_nodes == 0);

  // stripping keeps the direct link and truncates the straddler
  const auto& sst = v.stats[1];
  CHECK(sst.links == 2);
  CHECK(sst.direct_only == 2);
  CHECK(sst.indirect_only == 0);
  CHECK(sst.isolated_nodes == 3);

  // a one-day network has nothing to densify
  CHECK(v.stats[2].links == 10);
  CHECK(v.stats[2].indirect_only == 8);
  CHECK(v.stats[3].links == v.stats[1].links);

  // Collapsing pulls each delayed window back to the host's arrival; windows
  // longer than the stay straddle its end (mixed), and the zero-duration stay
  // of the single-ping user still counts as delayed (t_s2 = t_s = t_l).
  const auto& ldt = v.stats[4];
  CHECK(ldt.links == 10);
  CHECK(ldt.direct_only == 6);
  CHECK(ldt.mixed == 2);
  CHECK(ldt.indirect_only == 2);
  const auto& lst = v.stats[5];
  CHECK(lst.links == 8);
  CHECK(lst.direct_only == 8);
  CHECK(lst.isolated_nodes == 1);  // the single-ping user loses both links

  // every collapsed link starts with its stay
  for (const auto& l : v.ldt.links)
    if (classify_link(l) == LinkKind::DirectOnly) CHECK(l.t_s2 >= l.t_s);
}

TEST_CASE("trace parsing: separators, comments and line-numbered errors") {
  auto ups = parse_updates("42, 37.75, -122.42, 1234567890\n"
                           "# a comment line\n"
                           "7\t37.70\t-122.40\t1234567000\n"
                           "\n"
                           "8 10 20 30 # trailing note\n");
  REQUIRE(ups.size() == 3);
  CHECK(ups[0].user == 42);
  CHECK(ups[0].lat == 37.75);
  CHECK(ups[0].lon == -122.42);
  CHECK(ups[0].time == 1234567890);
  CHECK(ups[1].user == 7);
  CHECK(ups[2].time == 30);

  CHECK(parse_updates("").empty());
  CHECK_THROWS_WITH_AS((void)parse_updates("42, 37.75\n"),
                       doctest::Contains("line 1"), std::runtime_error);
  CHECK_THROWS_WITH_AS((void)parse_updates("1 2 3 4\nxx yy\n"),
                       doctest::Contains("line 2"), std::runtime_error);
  CHECK_THROWS_WITH_AS((void)parse_updates("1 2 3 4 5\n"),
                       doctest::Contains("trailing junk"), std::runtime_error);
  CHECK_THROWS_WITH_AS((void)parse_updates("1 95 0 0\n"),
                       doctest::Contains("out of range"), std::runtime_error);
  CHECK_THROWS_WITH_AS((void)parse_updates("1 0 190 0\n"),
                       doctest::Contains("out of range"), std::runtime_error);
}

}  // TEST_SUITE
