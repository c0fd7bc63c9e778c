#pragma once
// Core data model: nodes, SPDT links, temporal contact networks, the
// network-variant transforms (strip / densify / collapse) and link-file
// serialization.
//
// An SPDT (same place, different time) link is a directed transmission
// opportunity host -> neighbor at a shared location. The host occupies
// [t_s, t_l]; the neighbor occupies [t_s2, t_l2], which may overlap the
// host's stay (direct component) and/or trail its departure by up to
// delta seconds (indirect component: lingering airborne particles).

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace spdt {

using NodeId = uint32_t;

constexpr int64_t kSecondsPerDay = 86400;

struct SPDTLink {
  NodeId host = 0;
  NodeId nbr = 0;
  int64_t t_s = 0;   // host arrival
  int64_t t_l = 0;   // host departure
  int64_t t_s2 = 0;  // neighbor arrival  (t_s')
  int64_t t_l2 = 0;  // neighbor departure (t_l')
  double decay_rate = 0.0;  // particle decay b (1/s); 0 = not assigned

  friend bool operator==(const SPDTLink& a, const SPDTLink& b) {
    return a.host == b.host && a.nbr == b.nbr && a.t_s == b.t_s && a.t_l == b.t_l &&
           a.t_s2 == b.t_s2 && a.t_l2 == b.t_l2;
  }
};

enum class LinkKind { DirectOnly, Mixed, IndirectOnly };

// Exhaustive classification by where the neighbor window sits relative to
// the host departure:
//   t_l2 <= t_l         -> DirectOnly   (whole stay overlaps the host)
//   t_s2 <  t_l < t_l2  -> Mixed        (straddles the departure)
//   t_s2 >= t_l         -> IndirectOnly (arrives after the host left)
inline LinkKind classify_link(const SPDTLink& l) {
  if (l.t_l2 <= l.t_l) return LinkKind::DirectOnly;
  if (l.t_s2 >= l.t_l) return LinkKind::IndirectOnly;
  return LinkKind::Mixed;
}

inline const char* to_string(LinkKind k) {
  switch (k) {
    case LinkKind::DirectOnly: return "direct";
    case LinkKind::Mixed: return "mixed";
    case LinkKind::IndirectOnly: return "indirect";
  }
  return "?";
}

struct TemporalContactNetwork {
  uint32_t node_count = 0;
  int horizon_days = 0;
  int64_t delta_s = 10800;  // indirect window
  int64_t dt_s = 300;       // generator time step
  std::string name;
  std::vector<SPDTLink> links;  // canonical order after finalize()

  // CSR day index over links: day d (by neighbor arrival) occupies
  // [day_offset[d], day_offset[d+1]).
  std::vector<size_t> day_offset;

  // Sort links canonically (by neighbor arrival, then the remaining fields)
  // and rebuild the day index. Must be called after links are edited.
  void finalize();

  std::span<const SPDTLink> day_slice(int day) const {
    if (day < 0 || day + 1 >= static_cast<int>(day_offset.size()))
      return {};
    return {links.data() + day_offset[day],
            links.data() + day_offset[day + 1]};
  }

  bool operator==(const TemporalContactNetwork& o) const {
    return node_count == o.node_count && horizon_days == o.horizon_days &&
           delta_s == o.delta_s && dt_s == o.dt_s && links == o.links;
  }
};

// Day containing a timestamp.
inline int day_of(int64_t t) { return static_cast<int>(t / kSecondsPerDay); }

// --- network-variant transforms -------------------------------------------

// Remove the indirect transmission channel: IndirectOnly links are dropped,
// Mixed links truncated to the concurrent part (t_l2 := t_l). Nodes left
// linkless stay in the node set as isolates.
TemporalContactNetwork strip_indirect(const TemporalContactNetwork& net);

// Fill each host's absent days with copies of its present days (a host is
// present on the day its stay starts). Present days are cycled in order and
// each copy is shifted by a whole number of days.
TemporalContactNetwork densify(const TemporalContactNetwork& net);

// Rewrite every IndirectOnly link so the neighbor window starts at the host
// arrival (duration preserved). Link count is unchanged; no link of the
// result is IndirectOnly.
TemporalContactNetwork collapse_indirect(const TemporalContactNetwork& net);

// --- statistics -------------------------------------------------------------

struct LinkKindCounts {
  size_t direct_only = 0;
  size_t mixed = 0;
  size_t indirect_only = 0;
  size_t total() const { return direct_only + mixed + indirect_only; }
};

LinkKindCounts count_kinds(const TemporalContactNetwork& net);

// Nodes that appear in no link, as host or neighbor.
size_t count_isolated(const TemporalContactNetwork& net);

// --- serialization ----------------------------------------------------------
// Text format: '#'-prefixed "key = value" header lines followed by one link
// per line as six space-separated integers:
//   host nbr t_s t_l t_s2 t_l2
// Round-trip (save -> load -> save) is byte-identical.

std::string serialize_network(const TemporalContactNetwork& net,
                              const std::vector<std::string>& extra_header = {});
void save_network(const TemporalContactNetwork& net, const std::string& path,
                  const std::vector<std::string>& extra_header = {});
TemporalContactNetwork parse_network(const std::string& text);
TemporalContactNetwork load_network(const std::string& path);

}  // namespace spdt
