#pragma once

// Time-varying connectivity graph. A snapshot fixes every node position at
// one instant and derives the feasible links; edge weights are one-way
// propagation delays in milliseconds. Ground stations talk to satellites they
// see above the elevation threshold, satellites talk to their ring neighbors
// in the same plane when inter-satellite links are enabled, and ground
// stations never talk to each other directly unless explicitly allowed.

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "leosim/errors.hpp"
#include "leosim/geodesy.hpp"
#include "leosim/orbits.hpp"

namespace leosim::topology {

inline constexpr double kSpeedOfLightKmS = 299792.458;
inline constexpr double kInfiniteDelay = std::numeric_limits<double>::infinity();

enum class NodeKind { Satellite, GroundStation };

struct NodeRef {
  NodeKind kind = NodeKind::Satellite;
  int id = -1;        // unique across the scenario, stable between snapshots
  int plane = -1;     // satellites only
  int slot = -1;      // satellites only
  int gs_index = -1;  // ground stations only
};

enum class IslMode {
  RingAdjacent,      // same plane, neighboring slots on the ring
  SamePlaneInRange,  // same plane, any pair within max_isl_range_km
};

struct LinkRules {
  bool enable_intersatellite_links = false;
  double min_elevation_deg = 25.0;
  bool allow_gs_gs = false;
  IslMode isl_mode = IslMode::RingAdjacent;
  // No distance cap by default; set a finite value to prune long in-plane
  // links (required for SamePlaneInRange).
  double max_isl_range_km = std::numeric_limits<double>::infinity();
};

struct Edge {
  int a = -1;  // a < b
  int b = -1;
  double delay_ms = 0.0;
};

// Result of one single-source shortest path computation.
struct RoutingTable {
  int source = -1;
  std::vector<double> distance_ms;  // kInfiniteDelay where unreachable
  std::vector<int> predecessor;     // -1 at the source and where unreachable
  std::vector<int> next_hop;        // -1 where unreachable or dst == source
};

class TopologySnapshot {
 public:
  double time_s = 0.0;
  std::vector<NodeRef> nodes;                    // indexed by node id
  std::vector<geodesy::EciPosition> positions;   // parallel to nodes
  std::vector<Edge> edges;
  std::vector<std::vector<std::pair<int, double>>> adjacency;  // id -> (peer, delay_ms)

  TopologySnapshot() : cache_(std::make_unique<RouteCache>()) {}
  TopologySnapshot(TopologySnapshot&&) = default;
  TopologySnapshot& operator=(TopologySnapshot&&) = default;

  double edge_delay_ms(int a, int b) const {
    for (const auto& [peer, delay] : adjacency[static_cast<size_t>(a)])
      if (peer == b) return delay;
    return kInfiniteDelay;
  }

  // Routing tables are computed on first use and cached; the cache is guarded
  // so concurrent readers of one snapshot stay safe.
  const RoutingTable& routes_from(int source) const;

 private:
  struct RouteCache {
    std::mutex mutex;
    std::unordered_map<int, RoutingTable> tables;
  };
  std::unique_ptr<RouteCache> cache_;  // owned indirectly so snapshots can move
};

namespace detail {

inline double distance_km(const geodesy::EciPosition& a, const geodesy::EciPosition& b) {
  const double dx = a.x_km - b.x_km;
  const double dy = a.y_km - b.y_km;
  const double dz = a.z_km - b.z_km;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

inline bool ring_adjacent(int slot_a, int slot_b, int per_plane) {
  if (per_plane < 2) return false;
  const int d = std::abs(slot_a - slot_b);
  return d == 1 || d == per_plane - 1;
}

}  // namespace detail

// Dijkstra from one source with deterministic tie-breaking: the frontier pops
// by (distance, node id) and an equal-cost relaxation keeps the predecessor
// with the smaller id.
inline RoutingTable shortest_paths(const TopologySnapshot& snap, int source) {
  const int n = static_cast<int>(snap.nodes.size());
  if (source < 0 || source >= n)
    throw std::invalid_argument("shortest_paths: source id " + std::to_string(source) +
                                " out of range");
  RoutingTable t;
  t.source = source;
  t.distance_ms.assign(static_cast<size_t>(n), kInfiniteDelay);
  t.predecessor.assign(static_cast<size_t>(n), -1);
  t.next_hop.assign(static_cast<size_t>(n), -1);

  using Item = std::pair<double, int>;  // (distance, node id)
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> frontier;
  t.distance_ms[static_cast<size_t>(source)] = 0.0;
  frontier.emplace(0.0, source);

  while (!frontier.empty()) {
    const auto [dist, u] = frontier.top();
    frontier.pop();
    if (dist > t.distance_ms[static_cast<size_t>(u)]) continue;  // stale entry
    for (const auto& [v, w] : snap.adjacency[static_cast<size_t>(u)]) {
      const double cand = dist + w;
      double& dv = t.distance_ms[static_cast<size_t>(v)];
      int& pv = t.predecessor[static_cast<size_t>(v)];
      if (cand < dv) {
        dv = cand;
        pv = u;
        frontier.emplace(cand, v);
      } else if (cand == dv && pv >= 0 && u < pv) {
        pv = u;  // same cost through a smaller-id neighbor
      }
    }
  }

  for (int dst = 0; dst < n; ++dst) {
    if (dst == source || t.predecessor[static_cast<size_t>(dst)] < 0) continue;
    int hop = dst;
    while (t.predecessor[static_cast<size_t>(hop)] != source)
      hop = t.predecessor[static_cast<size_t>(hop)];
    t.next_hop[static_cast<size_t>(dst)] = hop;
  }
  return t;
}

inline const RoutingTable& TopologySnapshot::routes_from(int source) const {
  std::lock_guard<std::mutex> lock(cache_->mutex);
  auto it = cache_->tables.find(source);
  if (it == cache_->tables.end())
    it = cache_->tables.emplace(source, shortest_paths(*this, source)).first;
  return it->second;
}

// Builds the graph for one instant. Satellites keep their ids from the input
// order; ground stations follow, in declaration order, so ids stay stable
// across snapshots.
inline TopologySnapshot build_snapshot(double time_s,
                                       const std::vector<orbits::SatelliteElement>& satellites,
                                       const std::vector<geodesy::GeoPoint>& ground_stations,
                                       const LinkRules& rules,
                                       double earth_phase_theta0_deg = 0.0) {
  if (rules.isl_mode == IslMode::SamePlaneInRange &&
      !(rules.max_isl_range_km < std::numeric_limits<double>::infinity()))
    throw ConfigError("build_snapshot: SamePlaneInRange needs a finite max_isl_range_km");

  TopologySnapshot snap;
  snap.time_s = time_s;
  const int sat_count = static_cast<int>(satellites.size());
  const int gs_count = static_cast<int>(ground_stations.size());
  snap.nodes.reserve(static_cast<size_t>(sat_count + gs_count));
  snap.positions.reserve(static_cast<size_t>(sat_count + gs_count));

  for (int i = 0; i < sat_count; ++i) {
    const auto& s = satellites[static_cast<size_t>(i)];
    NodeRef ref;
    ref.kind = NodeKind::Satellite;
    ref.id = i;
    ref.plane = s.plane;
    ref.slot = s.slot;
    snap.nodes.push_back(ref);
    snap.positions.push_back(orbits::propagate(s.elements, time_s));
  }
  for (int g = 0; g < gs_count; ++g) {
    NodeRef ref;
    ref.kind = NodeKind::GroundStation;
    ref.id = sat_count + g;
    ref.gs_index = g;
    snap.nodes.push_back(ref);
    snap.positions.push_back(
        geodesy::geodetic_to_eci(ground_stations[static_cast<size_t>(g)], time_s,
                                 earth_phase_theta0_deg));
  }

  auto add_edge = [&snap](int a, int b, double km) {
    Edge e;
    e.a = std::min(a, b);
    e.b = std::max(a, b);
    e.delay_ms = km / kSpeedOfLightKmS * 1000.0;
    snap.edges.push_back(e);
  };

  // Ground-to-satellite visibility.
  for (int g = 0; g < gs_count; ++g) {
    const int gid = sat_count + g;
    const auto& gpos = snap.positions[static_cast<size_t>(gid)];
    for (int i = 0; i < sat_count; ++i) {
      const auto& spos = snap.positions[static_cast<size_t>(i)];
      if (geodesy::elevation_angle(gpos, spos) >= rules.min_elevation_deg)
        add_edge(gid, i, detail::distance_km(gpos, spos));
    }
  }

  // In-plane inter-satellite links.
  if (rules.enable_intersatellite_links) {
    // slot count per plane, needed for the ring wraparound
    std::unordered_map<int, int> plane_size;
    for (const auto& s : satellites)
      if (s.plane >= 0) plane_size[s.plane] = std::max(plane_size[s.plane], s.slot + 1);

    for (int i = 0; i < sat_count; ++i) {
      for (int j = i + 1; j < sat_count; ++j) {
        const auto& a = satellites[static_cast<size_t>(i)];
        const auto& b = satellites[static_cast<size_t>(j)];
        if (a.plane < 0 || a.plane != b.plane) continue;  // unknown or different plane
        const double km = detail::distance_km(snap.positions[static_cast<size_t>(i)],
                                              snap.positions[static_cast<size_t>(j)]);
        if (km > rules.max_isl_range_km) continue;
        const bool linked = rules.isl_mode == IslMode::SamePlaneInRange ||
                            detail::ring_adjacent(a.slot, b.slot, plane_size[a.plane]);
        if (linked) add_edge(i, j, km);
      }
    }
  }

  if (rules.allow_gs_gs) {
    for (int g = 0; g < gs_count; ++g)
      for (int h = g + 1; h < gs_count; ++h)
        add_edge(sat_count + g, sat_count + h,
                 detail::distance_km(snap.positions[static_cast<size_t>(sat_count + g)],
                                     snap.positions[static_cast<size_t>(sat_count + h)]));
  }

  snap.adjacency.assign(snap.nodes.size(), {});
  for (const auto& e : snap.edges) {
    snap.adjacency[static_cast<size_t>(e.a)].emplace_back(e.b, e.delay_ms);
    snap.adjacency[static_cast<size_t>(e.b)].emplace_back(e.a, e.delay_ms);
  }
  for (auto& adj : snap.adjacency) std::sort(adj.begin(), adj.end());
  return snap;
}

// A missing route is a value, not an error.
struct RouteResult {
  bool reachable = false;
  std::vector<int> path;  // node ids, source first, empty when unreachable
  double delay_ms = kInfiniteDelay;
};

inline RouteResult route(const TopologySnapshot& snap, int source, int destination) {
  const int n = static_cast<int>(snap.nodes.size());
  if (source < 0 || source >= n || destination < 0 || destination >= n)
    throw std::invalid_argument("route: node id out of range");
  RouteResult res;
  if (source == destination) {
    res.reachable = true;
    res.path = {source};
    res.delay_ms = 0.0;
    return res;
  }
  const RoutingTable& t = snap.routes_from(source);
  if (t.predecessor[static_cast<size_t>(destination)] < 0) return res;
  std::vector<int> rev;
  for (int hop = destination; hop != -1; hop = t.predecessor[static_cast<size_t>(hop)])
    rev.push_back(hop);
  res.reachable = true;
  res.path.assign(rev.rbegin(), rev.rend());
  res.delay_ms = t.distance_ms[static_cast<size_t>(destination)];
  return res;
}

// Sum of edge delays along an explicit path. Throws when two consecutive
// nodes are not linked in this snapshot.
inline double path_delay_ms(const TopologySnapshot& snap, const std::vector<int>& path) {
  if (path.empty()) throw std::invalid_argument("path_delay_ms: empty path");
  double total = 0.0;
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    const double d = snap.edge_delay_ms(path[i], path[i + 1]);
    if (d == kInfiniteDelay)
      throw std::invalid_argument("path_delay_ms: nodes " + std::to_string(path[i]) + " and " +
                                  std::to_string(path[i + 1]) +
                                  " are not linked in this snapshot");
    total += d;
  }
  return total;
}

}  // namespace leosim::topology
