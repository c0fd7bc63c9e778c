#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "spdt/contact.hpp"

using namespace spdt;

namespace {

SPDTLink mk(NodeId host, NodeId nbr, int64_t ts, int64_t tl, int64_t ts2, int64_t tl2) {
  SPDTLink l;
  l.host = host;
  l.nbr = nbr;
  l.t_s = ts;
  l.t_l = tl;
  l.t_s2 = ts2;
  l.t_l2 = tl2;
  return l;
}

TemporalContactNetwork make_net(uint32_t nodes, int days, std::vector<SPDTLink> links) {
  TemporalContactNetwork net;
  net.node_count = nodes;
  net.horizon_days = days;
  net.links = std::move(links);
  net.finalize();
  return net;
}

}  // namespace

TEST_SUITE("contact") {

TEST_CASE("link classification boundaries") {
  // neighbor leaves exactly at host departure: still fully concurrent
  CHECK(classify_link(mk(0, 1, 0, 100, 50, 100)) == LinkKind::DirectOnly);
  CHECK(classify_link(mk(0, 1, 0, 100, 50, 99)) == LinkKind::DirectOnly);
  CHECK(classify_link(mk(0, 1, 0, 100, 50, 101)) == LinkKind::Mixed);
  CHECK(classify_link(mk(0, 1, 0, 100, 99, 150)) == LinkKind::Mixed);
  // neighbor arrives exactly at host departure: no overlap left
  CHECK(classify_link(mk(0, 1, 0, 100, 100, 150)) == LinkKind::IndirectOnly);
  CHECK(classify_link(mk(0, 1, 0, 100, 120, 150)) == LinkKind::IndirectOnly);
  CHECK(std::string(to_string(LinkKind::Mixed)) == "mixed");
}

TEST_CASE("finalize sorts links and builds a covering day index") {
  auto net = make_net(4, 3, {
    mk(2, 3, 200000, 210000, 201000, 202000),   // day 2
    mk(0, 1, 1000, 5000, 2000, 3000),           // day 0
    mk(1, 2, 90000, 95000, 91000, 92000),       // day 1
    mk(0, 2, 1000, 5000, 4000, 4500),           // day 0
  });
  REQUIRE(net.day_offset.size() == 4);
  CHECK(net.day_slice(0).size() == 2);
  CHECK(net.day_slice(1).size() == 1);
  CHECK(net.day_slice(2).size() == 1);
  CHECK(net.day_slice(-1).empty());
  CHECK(net.day_slice(3).empty());
  // canonical order: ascending neighbor arrival
  CHECK(net.links[0].t_s2 == 2000);
  CHECK(net.links[1].t_s2 == 4000);
  size_t total = 0;
  for (int d = 0; d < net.horizon_days; ++d) total += net.day_slice(d).size();
  CHECK(total == net.links.size());
}

TEST_CASE("finalize derives the horizon when unset") {
  TemporalContactNetwork net;
  net.node_count = 2;
  net.links = {mk(0, 1, 1000, 5000, 2000, 90000)};  // neighbor window ends on day 1
  net.finalize();
  CHECK(net.horizon_days == 2);
}

TEST_CASE("day_of and horizon-edge clamping") {
  CHECK(day_of(0) == 0);
  CHECK(day_of(86399) == 0);
  CHECK(day_of(86400) == 1);
  // a neighbor window starting past the declared horizon stays indexed in the last day
  auto net = make_net(2, 1, {mk(0, 1, 80000, 86300, 86500, 87000)});
  CHECK(net.day_slice(0).size() == 1);
}

TEST_CASE("strip_indirect drops the delayed channel") {
  auto net = make_net(5, 1, {
    mk(0, 1, 0, 3600, 600, 1200),      // direct
    mk(0, 2, 0, 3600, 1800, 7200),     // mixed -> truncated
    mk(0, 3, 0, 3600, 5400, 9000),     // indirect -> dropped
  });
  auto stripped = strip_indirect(net);
  CHECK(stripped.node_count == 5);
  REQUIRE(stripped.links.size() == 2);
  auto c = count_kinds(stripped);
  CHECK(c.direct_only == 2);
  CHECK(c.mixed == 0);
  CHECK(c.indirect_only == 0);
  for (const auto& l : stripped.links)
    if (l.nbr == 2) CHECK(l.t_l2 == 3600);
  // node 3 lost its only link but remains in the node set
  CHECK(count_isolated(stripped) == 2);  // nodes 3 and 4
  // idempotent
  CHECK(strip_indirect(stripped) == stripped);
}

TEST_CASE("collapse_indirect pulls delayed windows onto the stay") {
  auto net = make_net(3, 1, {
    mk(0, 1, 0, 3600, 5400, 9000),   // indirect
    mk(0, 2, 0, 3600, 1800, 7200),   // mixed, untouched
  });
  auto ldt = collapse_indirect(net);
  REQUIRE(ldt.links.size() == 2);
  auto c = count_kinds(ldt);
  CHECK(c.indirect_only == 0);
  for (const auto& l : ldt.links) {
    if (l.nbr == 1) {
      CHECK(l.t_s2 == 0);
      CHECK(l.t_l2 == 3600);  // duration preserved
    }
    if (l.nbr == 2) CHECK(l.t_s2 == 1800);
  }
}

TEST_CASE("densify copies a single present day across the horizon") {
  auto net = make_net(2, 3, {mk(0, 1, 1000, 4000, 2000, 3000)});
  auto ddt = densify(net);
  REQUIRE(ddt.links.size() == 3);
  for (int d = 0; d < 3; ++d) {
    auto slice = ddt.day_slice(d);
    REQUIRE(slice.size() == 1);
    const int64_t shift = static_cast<int64_t>(d) * kSecondsPerDay;
    CHECK(slice[0].t_s == 1000 + shift);
    CHECK(slice[0].t_l == 4000 + shift);
    CHECK(slice[0].t_s2 == 2000 + shift);
    CHECK(slice[0].t_l2 == 3000 + shift);
  }
}

TEST_CASE("densify cycles present days over absent ones") {
  // host present on days 0 and 1 of 4; day 2 copies day 0, day 3 copies day 1
  auto net = make_net(3, 4, {
    mk(0, 1, 1000, 4000, 2000, 3000),
    mk(0, 2, 86400 + 500, 86400 + 900, 86400 + 600, 86400 + 800),
  });
  auto ddt = densify(net);
  REQUIRE(ddt.links.size() == 4);
  auto d2 = ddt.day_slice(2);
  REQUIRE(d2.size() == 1);
  CHECK(d2[0].nbr == 1);
  CHECK(d2[0].t_s2 == 2000 + 2 * kSecondsPerDay);
  auto d3 = ddt.day_slice(3);
  REQUIRE(d3.size() == 1);
  CHECK(d3[0].nbr == 2);
  CHECK(d3[0].t_s2 == 86400 + 600 + 2 * kSecondsPerDay);
}

TEST_CASE("densify clamps or drops copies spilling past the horizon") {
  // host stay ends late on day 0; one neighbor window crosses midnight
  auto net = make_net(3, 3, {
    mk(0, 1, 85000, 86300, 86000, 86200),  // inside day 0
    mk(0, 2, 85000, 86300, 87000, 88000),  // neighbor arrives on day 1 (indirect)
  });
  auto ddt = densify(net);
  // copies on day 1 keep both; on day 2 the late window starts past the
  // horizon and is dropped
  CHECK(ddt.links.size() == 5);
  int64_t t_end = 3 * kSecondsPerDay;
  for (const auto& l : ddt.links) {
    CHECK(l.t_s2 < t_end);
    CHECK(l.t_l2 <= t_end);
    CHECK(l.t_l <= t_end);
  }
  // a fully present host is left alone
  CHECK(densify(ddt).links.size() >= ddt.links.size());
}

TEST_CASE("collapse after densify keeps the link count") {
  auto net = make_net(4, 3, {
    mk(0, 1, 1000, 4000, 2000, 3000),
    mk(0, 2, 1000, 4000, 9000, 12000),
    mk(1, 3, 90000, 94000, 91000, 92000),
  });
  auto ddt = densify(net);
  auto ldt = collapse_indirect(ddt);
  CHECK(ldt.links.size() == ddt.links.size());
  CHECK(count_kinds(ldt).indirect_only == 0);
}

TEST_CASE("kind and isolation counts") {
  auto net = make_net(6, 1, {
    mk(0, 1, 0, 3600, 600, 1200),
    mk(0, 2, 0, 3600, 1800, 7200),
    mk(3, 1, 0, 3600, 5400, 9000),
  });
  auto c = count_kinds(net);
  CHECK(c.direct_only == 1);
  CHECK(c.mixed == 1);
  CHECK(c.indirect_only == 1);
  CHECK(c.total() == 3);
  CHECK(count_isolated(net) == 2);  // 4 and 5
}

TEST_CASE("serialize/parse round trip is byte identical") {
  auto net = make_net(4, 2, {
    mk(0, 1, 1000, 5000, 2000, 3000),
    mk(2, 3, 90000, 95000, 91000, 99000),
  });
  net.name = "sdt";
  const std::string text = serialize_network(net);
  auto parsed = parse_network(text);
  CHECK(parsed == net);
  CHECK(parsed.name == "sdt");
  CHECK(serialize_network(parsed) == text);
}

TEST_CASE("file round trip") {
  auto net = make_net(3, 1, {mk(0, 1, 0, 3600, 600, 1200)});
  net.name = "roundtrip";
  auto path = (std::filesystem::temp_directory_path() / "spdt_contact_rt.links").string();
  save_network(net, path, {"tool_version = 0.0-test"});
  auto loaded = load_network(path);
  CHECK(loaded == net);
  std::filesystem::remove(path);
}

TEST_CASE("parser reports malformed records with line numbers") {
  CHECK_THROWS_WITH_AS((void)parse_network("# name = x\n\n0 1 0 10 0 ten\n"),
                       doctest::Contains("line 3"), std::runtime_error);
  CHECK_THROWS_WITH_AS((void)parse_network("0 1 0 10 0 10 99\n"),
                       doctest::Contains("trailing junk"), std::runtime_error);
  CHECK_THROWS_WITH_AS((void)parse_network("0 1 10 0 0 10\n"),
                       doctest::Contains("inverted interval"), std::runtime_error);
}

TEST_CASE("parser derives node count when the header is absent") {
  auto net = parse_network("0 7 0 10 5 10\n");
  CHECK(net.node_count == 8);
  CHECK(net.horizon_days == 1);
  auto empty = parse_network("# just a comment\n");
  CHECK(empty.node_count == 0);
  CHECK(empty.links.empty());
}

}  // TEST_SUITE
