#include "spdt/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace spdt {

double haversine_m(double lat1, double lon1, double lat2, double lon2) {
  constexpr double kR = 6371000.0;
  constexpr double kD2R = 3.14159265358979323846 / 180.0;
  const double p1 = lat1 * kD2R, p2 = lat2 * kD2R;
  const double dp = (lat2 - lat1) * kD2R, dl = (lon2 - lon1) * kD2R;
  const double sp = std::sin(0.5 * dp), sl = std::sin(0.5 * dl);
  const double a = sp * sp + std::cos(p1) * std::cos(p2) * sl * sl;
  return 2.0 * kR * std::asin(std::min(1.0, std::sqrt(a)));
}

std::vector<Visit> extract_visits(std::span<const LocationUpdate> user_updates,
                                  const VisitExtractionConfig& cfg) {
  std::vector<Visit> out;
  const size_t n = user_updates.size();
  size_t i = 0;
  while (i < n) {
    const auto& anchor = user_updates[i];
    size_t j = i + 1;
    while (j < n &&
           user_updates[j].time - user_updates[j - 1].time <= cfg.max_gap_s &&
           haversine_m(anchor.lat, anchor.lon, user_updates[j].lat, user_updates[j].lon) <=
               cfg.radius_m) {
      ++j;
    }
    // center = member with minimal summed distance to the others (tie: earliest)
    size_t best = i;
    double best_sum = -1.0;
    for (size_t a = i; a < j; ++a) {
      double s = 0.0;
      for (size_t b = i; b < j; ++b)
        s += haversine_m(user_updates[a].lat, user_updates[a].lon, user_updates[b].lat,
                         user_updates[b].lon);
      if (best_sum < 0.0 || s < best_sum) {
        best_sum = s;
        best = a;
      }
    }
    Visit v;
    v.user = 0;  // caller knows the dense id; filled by ingest
    v.lat = user_updates[best].lat;
    v.lon = user_updates[best].lon;
    v.arrive = user_updates[i].time;
    v.depart = user_updates[j - 1].time;
    v.members.reserve(j - i);
    for (size_t k = i; k < j; ++k) v.members.push_back(static_cast<uint32_t>(k));
    out.push_back(std::move(v));
    i = j;
  }
  return out;
}

UpdateTable index_updates(std::vector<LocationUpdate> raw) {
  UpdateTable table;
  if (raw.empty()) return table;
  std::vector<int64_t> ids;
  ids.reserve(raw.size());
  for (const auto& u : raw) ids.push_back(u.user);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  table.original_ids = ids;

  std::unordered_map<int64_t, uint32_t> dense;
  dense.reserve(ids.size());
  for (size_t i = 0; i < ids.size(); ++i) dense[ids[i]] = static_cast<uint32_t>(i);

  int64_t t0 = raw.front().time;
  for (const auto& u : raw) t0 = std::min(t0, u.time);
  table.t0 = t0;

  table.by_user.resize(ids.size());
  for (auto& u : raw) {
    u.time -= t0;
    table.by_user[dense[u.user]].push_back(u);
  }
  for (auto& v : table.by_user)
    std::stable_sort(v.begin(), v.end(),
                     [](const LocationUpdate& a, const LocationUpdate& b) {
                       return a.time < b.time;
                     });
  return table;
}

namespace {

// Flat lat/lon grid over the update cloud for radius queries. Cell size is
// the radius expressed in degrees (lon scaled by the cloud's mid-latitude);
// good enough away from the poles, which GPS mobility traces are.
class UpdateGrid {
 public:
  UpdateGrid(const UpdateTable& table, double radius_m) {
    double lat_sum = 0.0;
    size_t count = 0;
    for (const auto& v : table.by_user)
      for (const auto& u : v) {
        lat_sum += u.lat;
        ++count;
      }
    const double lat_mid = count ? lat_sum / static_cast<double>(count) : 0.0;
    const double m_per_deg_lat = 111132.0;
    double m_per_deg_lon = 111320.0 * std::cos(lat_mid * 3.14159265358979323846 / 180.0);
    if (m_per_deg_lon < 1000.0) m_per_deg_lon = 1000.0;  // stay sane near poles
    cell_lat_ = radius_m / m_per_deg_lat;
    cell_lon_ = radius_m / m_per_deg_lon;
    for (uint32_t user = 0; user < table.by_user.size(); ++user) {
      const auto& v = table.by_user[user];
      std::unordered_set<uint64_t> cells;
      for (const auto& u : v) cells.insert(key(u.lat, u.lon));
      for (uint64_t c : cells) grid_[c].push_back(user);
    }
  }

  // Users with any update in the 3x3 cells around (lat, lon).
  std::vector<uint32_t> nearby_users(double lat, double lon) const {
    std::vector<uint32_t> out;
    const int64_t ci = static_cast<int64_t>(std::floor(lat / cell_lat_));
    const int64_t cj = static_cast<int64_t>(std::floor(lon / cell_lon_));
    for (int64_t di = -1; di <= 1; ++di)
      for (int64_t dj = -1; dj <= 1; ++dj) {
        auto it = grid_.find(pack(ci + di, cj + dj));
        if (it == grid_.end()) continue;
        out.insert(out.end(), it->second.begin(), it->second.end());
      }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

 private:
  static uint64_t pack(int64_t i, int64_t j) {
    return (static_cast<uint64_t>(i) << 32) ^ static_cast<uint64_t>(j & 0xffffffff);
  }
  uint64_t key(double lat, double lon) const {
    return pack(static_cast<int64_t>(std::floor(lat / cell_lat_)),
                static_cast<int64_t>(std::floor(lon / cell_lon_)));
  }
  double cell_lat_ = 1.0, cell_lon_ = 1.0;
  std::unordered_map<uint64_t, std::vector<uint32_t>> grid_;
};

}  // namespace

std::vector<SPDTLink> build_links(const std::vector<std::vector<Visit>>& visits_by_user,
                                  const UpdateTable& table,
                                  const VisitExtractionConfig& cfg) {
  const UpdateGrid grid(table, cfg.radius_m * 2.0);  // query margin: 2x radius
  const uint32_t n = static_cast<uint32_t>(table.by_user.size());
  std::vector<std::vector<SPDTLink>> per_host(n);

#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic)
#endif
  for (long long hi = 0; hi < static_cast<long long>(n); ++hi) {
    const uint32_t host = static_cast<uint32_t>(hi);
    for (const auto& visit : visits_by_user[host]) {
      const int64_t t_s = visit.arrive, t_l = visit.depart;
      for (uint32_t other : grid.nearby_users(visit.lat, visit.lon)) {
        if (other == host) continue;
        const auto& upd = table.by_user[other];
        // qualifying runs: consecutive updates inside the radius of the visit
        // center with internal gaps <= max_gap_s
        size_t a = 0;
        while (a < upd.size()) {
          if (haversine_m(visit.lat, visit.lon, upd[a].lat, upd[a].lon) > cfg.radius_m) {
            ++a;
            continue;
          }
          size_t b = a + 1;
          while (b < upd.size() && upd[b].time - upd[b - 1].time <= cfg.max_gap_s &&
                 haversine_m(visit.lat, visit.lon, upd[b].lat, upd[b].lon) <= cfg.radius_m)
            ++b;
          if (b - a >= static_cast<size_t>(cfg.min_nbr_updates)) {
            const int64_t t_s2 = upd[a].time, t_l2 = upd[b - 1].time;
            if (t_s2 >= t_s && t_s2 <= t_l + cfg.delta_s)
              per_host[host].push_back({host, other, t_s, t_l, t_s2, t_l2, 0.0});
          }
          a = b;
        }
      }
    }
  }

  std::vector<SPDTLink> links;
  for (auto& v : per_host) {
    links.insert(links.end(), v.begin(), v.end());
    v.clear();
  }
  return links;
}

TemporalContactNetwork ingest_updates(std::vector<LocationUpdate> raw,
                                      const VisitExtractionConfig& cfg,
                                      const std::string& name) {
  UpdateTable table = index_updates(std::move(raw));
  const uint32_t n = static_cast<uint32_t>(table.by_user.size());

  std::vector<std::vector<Visit>> visits(n);
#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic)
#endif
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    visits[static_cast<size_t>(i)] =
        extract_visits(table.by_user[static_cast<size_t>(i)], cfg);
    for (auto& v : visits[static_cast<size_t>(i)]) v.user = static_cast<NodeId>(i);
  }

  TemporalContactNetwork net;
  net.node_count = n;
  net.delta_s = cfg.delta_s;
  net.name = name;
  net.links = build_links(visits, table, cfg);
  int64_t t_max = 0;
  for (const auto& v : table.by_user)
    for (const auto& u : v) t_max = std::max(t_max, u.time);
  net.horizon_days = n == 0 ? 0 : day_of(t_max) + 1;
  net.finalize();
  return net;
}

NetworkVariants build_network_variants(TemporalContactNetwork sdt) {
  NetworkVariants out;
  sdt.name = "sdt";
  out.sdt = std::move(sdt);
  out.sst = strip_indirect(out.sdt);
  out.sst.name = "sst";
  out.ddt = densify(out.sdt);
  out.ddt.name = "ddt";
  out.dst = strip_indirect(out.ddt);
  out.dst.name = "dst";
  out.ldt = collapse_indirect(out.ddt);
  out.ldt.name = "ldt";
  out.lst = strip_indirect(out.ldt);
  out.lst.name = "lst";

  auto row = [](const TemporalContactNetwork& n) {
    VariantStats s;
    s.name = n.name;
    const auto kinds = count_kinds(n);
    s.links = kinds.total();
    s.direct_only = kinds.direct_only;
    s.mixed = kinds.mixed;
    s.indirect_only = kinds.indirect_only;
    s.isolated_nodes = count_isolated(n);
    return s;
  };
  out.stats = {row(out.sdt), row(out.sst), row(out.ddt),
               row(out.dst), row(out.ldt), row(out.lst)};
  return out;
}

std::vector<LocationUpdate> parse_updates(const std::string& text) {
  std::vector<LocationUpdate> out;
  size_t pos = 0, lineno = 0;
  while (pos < text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++lineno;
    // strip comments and padding; fields split on commas or whitespace
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    for (char& c : line)
      if (c == ',' || c == '\t' || c == '\r') c = ' ';
    if (line.find_first_not_of(' ') == std::string::npos) continue;
    std::istringstream ss(line);
    LocationUpdate u;
    if (!(ss >> u.user >> u.lat >> u.lon >> u.time))
      throw std::runtime_error("bad update at line " + std::to_string(lineno) + ": '" +
                               line + "'");
    std::string extra;
    if (ss >> extra)
      throw std::runtime_error("trailing junk at line " + std::to_string(lineno));
    if (u.lat < -90.0 || u.lat > 90.0 || u.lon < -180.0 || u.lon > 180.0)
      throw std::runtime_error("coordinates out of range at line " + std::to_string(lineno));
    out.push_back(u);
  }
  return out;
}

std::vector<LocationUpdate> load_updates(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_updates(ss.str());
}

}  // namespace spdt
