#include "spdt/contact.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace spdt {

namespace {

// Canonical link order: by neighbor window, then host stay, then ids.
// Day indexing and all downstream per-day grouping rely on this order, so it
// must be a strict total order on the full record.
bool link_less(const SPDTLink& a, const SPDTLink& b) {
  return std::tie(a.t_s2, a.t_l2, a.t_s, a.t_l, a.host, a.nbr) <
         std::tie(b.t_s2, b.t_l2, b.t_s, b.t_l, b.host, b.nbr);
}

}  // namespace

void TemporalContactNetwork::finalize() {
  if (horizon_days <= 0 && !links.empty()) {
    int64_t t_max = 0;
    for (const auto& l : links) t_max = std::max({t_max, l.t_l, l.t_l2});
    horizon_days = static_cast<int>(day_of(t_max)) + 1;
  }
  if (horizon_days < 0) horizon_days = 0;
  std::sort(links.begin(), links.end(), link_less);

  const int days = horizon_days;
  day_offset.assign(static_cast<size_t>(days) + 1, 0);
  if (days == 0) {
    if (!links.empty())
      throw std::logic_error("finalize: links present but horizon is zero days");
    return;
  }
  for (const auto& l : links) {
    int64_t d = day_of(l.t_s2);
    if (d < 0) d = 0;
    if (d >= days) d = days - 1;  // windows touching the horizon edge stay in the last day
    ++day_offset[static_cast<size_t>(d) + 1];
  }
  for (size_t i = 1; i < day_offset.size(); ++i) day_offset[i] += day_offset[i - 1];
}

TemporalContactNetwork strip_indirect(const TemporalContactNetwork& net) {
  TemporalContactNetwork out;
  out.node_count = net.node_count;
  out.horizon_days = net.horizon_days;
  out.delta_s = net.delta_s;
  out.dt_s = net.dt_s;
  out.name = net.name;
  out.links.reserve(net.links.size());
  for (const auto& l : net.links) {
    switch (classify_link(l)) {
      case LinkKind::DirectOnly:
        out.links.push_back(l);
        break;
      case LinkKind::Mixed: {
        SPDTLink t = l;
        t.t_l2 = l.t_l;  // keep only the part overlapping the host stay
        out.links.push_back(t);
        break;
      }
      case LinkKind::IndirectOnly:
        break;
    }
  }
  out.finalize();
  return out;
}

TemporalContactNetwork densify(const TemporalContactNetwork& net) {
  TemporalContactNetwork out;
  out.node_count = net.node_count;
  out.horizon_days = net.horizon_days;
  out.delta_s = net.delta_s;
  out.dt_s = net.dt_s;
  out.name = net.name;
  out.links = net.links;

  const int days = net.horizon_days;
  if (days <= 0 || net.links.empty()) {
    out.finalize();
    return out;
  }
  const int64_t t_end = static_cast<int64_t>(days) * kSecondsPerDay;

  // Group the host's link indices by the day the stay starts.
  std::map<NodeId, std::map<int, std::vector<size_t>>> by_host;
  for (size_t i = 0; i < net.links.size(); ++i) {
    const auto& l = net.links[i];
    int64_t d = day_of(l.t_s);
    if (d < 0 || d >= days) continue;
    by_host[l.host][static_cast<int>(d)].push_back(i);
  }

  for (auto& [host, day_map] : by_host) {
    std::vector<int> present;
    present.reserve(day_map.size());
    for (const auto& [d, idxs] : day_map) present.push_back(d);
    const size_t k = present.size();
    if (k == 0 || k == static_cast<size_t>(days)) continue;

    size_t j = 0;  // counts absent days, ascending
    for (int d = 0; d < days; ++d) {
      if (day_map.count(d)) continue;
      const int src = present[j % k];
      ++j;
      const int64_t shift = static_cast<int64_t>(d - src) * kSecondsPerDay;
      for (size_t idx : day_map[src]) {
        SPDTLink c = net.links[idx];
        c.t_s += shift;
        c.t_l += shift;
        c.t_s2 += shift;
        c.t_l2 += shift;
        // Copies shifted toward the horizon edge can spill past it; clamp the
        // open ends and drop windows pushed entirely outside.
        if (c.t_s2 >= t_end) continue;
        c.t_l = std::min(c.t_l, t_end);
        c.t_l2 = std::min(c.t_l2, t_end);
        if (c.t_s2 > c.t_l + net.delta_s) continue;
        out.links.push_back(c);
      }
    }
  }
  out.finalize();
  return out;
}

TemporalContactNetwork collapse_indirect(const TemporalContactNetwork& net) {
  TemporalContactNetwork out;
  out.node_count = net.node_count;
  out.horizon_days = net.horizon_days;
  out.delta_s = net.delta_s;
  out.dt_s = net.dt_s;
  out.name = net.name;
  out.links.reserve(net.links.size());
  for (const auto& l : net.links) {
    SPDTLink t = l;
    if (classify_link(l) == LinkKind::IndirectOnly) {
      const int64_t dur = l.t_l2 - l.t_s2;
      t.t_s2 = l.t_s;
      t.t_l2 = l.t_s + dur;
    }
    out.links.push_back(t);
  }
  out.finalize();
  return out;
}

LinkKindCounts count_kinds(const TemporalContactNetwork& net) {
  LinkKindCounts c;
  for (const auto& l : net.links) {
    switch (classify_link(l)) {
      case LinkKind::DirectOnly: ++c.direct_only; break;
      case LinkKind::Mixed: ++c.mixed; break;
      case LinkKind::IndirectOnly: ++c.indirect_only; break;
    }
  }
  return c;
}

size_t count_isolated(const TemporalContactNetwork& net) {
  std::vector<char> seen(net.node_count, 0);
  for (const auto& l : net.links) {
    if (l.host < net.node_count) seen[l.host] = 1;
    if (l.nbr < net.node_count) seen[l.nbr] = 1;
  }
  size_t n = 0;
  for (char s : seen) n += (s == 0);
  return n;
}

std::string serialize_network(const TemporalContactNetwork& net,
                              const std::vector<std::string>& extra_header) {
  std::string out;
  out.reserve(64 * net.links.size() + 256);
  for (const auto& h : extra_header) {
    out += "# ";
    out += h;
    out += '\n';
  }
  auto kv = [&out](const char* key, const std::string& val) {
    out += "# ";
    out += key;
    out += " = ";
    out += val;
    out += '\n';
  };
  kv("name", net.name);
  kv("node_count", std::to_string(net.node_count));
  kv("horizon_days", std::to_string(net.horizon_days));
  kv("delta_s", std::to_string(net.delta_s));
  kv("dt_s", std::to_string(net.dt_s));
  kv("link_count", std::to_string(net.links.size()));
  char buf[160];
  for (const auto& l : net.links) {
    int n = std::snprintf(buf, sizeof(buf), "%u %u %lld %lld %lld %lld\n", l.host, l.nbr,
                          static_cast<long long>(l.t_s), static_cast<long long>(l.t_l),
                          static_cast<long long>(l.t_s2), static_cast<long long>(l.t_l2));
    out.append(buf, static_cast<size_t>(n));
  }
  return out;
}

void save_network(const TemporalContactNetwork& net, const std::string& path,
                  const std::vector<std::string>& extra_header) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  const std::string body = serialize_network(net, extra_header);
  f.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!f) throw std::runtime_error("write failed: " + path);
}

namespace {

std::string_view trim(std::string_view s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string_view::npos) return {};
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

TemporalContactNetwork parse_network(const std::string& text) {
  TemporalContactNetwork net;
  net.horizon_days = 0;
  bool have_nodes = false;
  size_t lineno = 0;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string_view line = trim(std::string_view(text).substr(pos, eol - pos));
    pos = eol + 1;
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string_view body = trim(line.substr(1));
      size_t eq = body.find('=');
      if (eq == std::string_view::npos) continue;  // free-form comment
      std::string key(trim(body.substr(0, eq)));
      std::string val(trim(body.substr(eq + 1)));
      if (key == "name") net.name = val;
      else if (key == "node_count") { net.node_count = static_cast<NodeId>(std::stoull(val)); have_nodes = true; }
      else if (key == "horizon_days") net.horizon_days = std::stoi(val);
      else if (key == "delta_s") net.delta_s = std::stoll(val);
      else if (key == "dt_s") net.dt_s = std::stoll(val);
      // link_count and tool bookkeeping keys are informational
      continue;
    }
    long long v[6];
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (int i = 0; i < 6; ++i) {
      while (p < end && (*p == ' ' || *p == '\t')) ++p;
      auto [next, ec] = std::from_chars(p, end, v[i]);
      if (ec != std::errc()) {
        throw std::runtime_error("bad link record at line " + std::to_string(lineno) + ": '" +
                                 std::string(line) + "'");
      }
      p = next;
    }
    while (p < end && (*p == ' ' || *p == '\t')) ++p;
    if (p != end)
      throw std::runtime_error("trailing junk in link record at line " + std::to_string(lineno));
    SPDTLink l;
    l.host = static_cast<NodeId>(v[0]);
    l.nbr = static_cast<NodeId>(v[1]);
    l.t_s = v[2];
    l.t_l = v[3];
    l.t_s2 = v[4];
    l.t_l2 = v[5];
    if (l.t_l < l.t_s || l.t_l2 < l.t_s2)
      throw std::runtime_error("inverted interval at line " + std::to_string(lineno));
    net.links.push_back(l);
  }
  if (!have_nodes) {
    NodeId mx = 0;
    for (const auto& l : net.links) mx = std::max({mx, l.host, l.nbr});
    net.node_count = net.links.empty() ? 0 : mx + 1;
  }
  net.finalize();
  return net;
}

TemporalContactNetwork load_network(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_network(ss.str());
}

}  // namespace spdt
