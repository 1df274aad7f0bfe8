#pragma once

#include "tilearray/array.hpp"
#include "tilearray/geometry.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tilearray {

enum class RegionKind { tile, inter_tile, centre };

inline const char* region_kind_name(RegionKind k) {
  switch (k) {
    case RegionKind::tile: return "TILE";
    case RegionKind::inter_tile: return "INTER_TILE";
    default: return "CENTRE";
  }
}

// Identifier carrying the kind and the tile indices that anchor the region:
// T_r_c for a tile plate, I_r0_c0_r1_c1 for the strip joining two adjacent
// tiles (indices ordered), C_r_c for the centre cell whose north-west tile is
// (r, c). String form is the canonical identity and sort key.
struct RegionId {
  RegionKind kind = RegionKind::tile;
  int r0 = 0, c0 = 0, r1 = 0, c1 = 0;  // r1/c1 used by inter_tile only

  std::string str() const {
    char buf[48];
    switch (kind) {
      case RegionKind::tile:
        std::snprintf(buf, sizeof buf, "T_%d_%d", r0, c0);
        break;
      case RegionKind::inter_tile:
        std::snprintf(buf, sizeof buf, "I_%d_%d_%d_%d", r0, c0, r1, c1);
        break;
      default:
        std::snprintf(buf, sizeof buf, "C_%d_%d", r0, c0);
        break;
    }
    return buf;
  }
  friend bool operator==(const RegionId& a, const RegionId& b) {
    return a.kind == b.kind && a.r0 == b.r0 && a.c0 == b.c0 && a.r1 == b.r1 && a.c1 == b.c1;
  }
  friend bool operator!=(const RegionId& a, const RegionId& b) { return !(a == b); }
  friend bool operator<(const RegionId& a, const RegionId& b) { return a.str() < b.str(); }
};

struct Rect {
  double xmin = 0, ymin = 0, xmax = 0, ymax = 0;
  bool contains(const Vec2& p) const {
    return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
  }
  Vec2 centre() const { return Vec2{(xmin + xmax) / 2.0, (ymin + ymax) / 2.0}; }
};

struct Region {
  RegionId id;
  Rect rect;
  Vec2 centre;
};

struct RegionMap {
  std::vector<Region> regions;
  Rect bounds;

  const Region* find(const RegionId& id) const {
    for (const Region& r : regions)
      if (r.id == id) return &r;
    return nullptr;
  }
};

// Static partition of the array's bounding rectangle: E_W x E_W plates on
// tile centres, (D - E_W) x E_W strips between edge-adjacent plates, and
// (D - E_W)^2 centre cells between tile quadruples.
inline RegionMap segment_regions(const ArrayConfig& config, const TileGeometry& geom) {
  config.validate();
  const double d = config.inter_tile_distance;
  const double w = geom.effector_width;
  if (d <= w) throw std::invalid_argument("pitch must exceed effector width");
  const double half = w / 2.0;

  RegionMap map;
  const auto add = [&](const RegionId& id, const Rect& rect) {
    map.regions.push_back(Region{id, rect, rect.centre()});
  };

  for (int r = 0; r < config.rows; ++r)
    for (int c = 0; c < config.cols; ++c) {
      const Vec2 o = tile_origin(config, r, c);
      add(RegionId{RegionKind::tile, r, c, 0, 0},
          Rect{o.x - half, o.y - half, o.x + half, o.y + half});
      if (c + 1 < config.cols) {  // strip to the east neighbor
        const Vec2 e = tile_origin(config, r, c + 1);
        add(RegionId{RegionKind::inter_tile, r, c, r, c + 1},
            Rect{o.x + half, o.y - half, e.x - half, o.y + half});
      }
      if (r + 1 < config.rows) {  // strip to the south neighbor
        const Vec2 s = tile_origin(config, r + 1, c);
        add(RegionId{RegionKind::inter_tile, r, c, r + 1, c},
            Rect{o.x - half, s.y + half, o.x + half, o.y - half});
      }
      if (c + 1 < config.cols && r + 1 < config.rows) {
        const Vec2 se = tile_origin(config, r + 1, c + 1);
        add(RegionId{RegionKind::centre, r, c, 0, 0},
            Rect{o.x + half, se.y + half, se.x - half, o.y - half});
      }
    }

  map.bounds = map.regions.front().rect;
  for (const Region& r : map.regions) {
    map.bounds.xmin = std::min(map.bounds.xmin, r.rect.xmin);
    map.bounds.ymin = std::min(map.bounds.ymin, r.rect.ymin);
    map.bounds.xmax = std::max(map.bounds.xmax, r.rect.xmax);
    map.bounds.ymax = std::max(map.bounds.ymax, r.rect.ymax);
  }
  return map;
}

// Raw containment lookup; points on shared boundaries go to the
// lexicographically smallest region identifier.
inline RegionId locate_region_raw(const RegionMap& map, const Vec2& xy) {
  const Region* best = nullptr;
  for (const Region& r : map.regions)
    if (r.rect.contains(xy) && (best == nullptr || r.id.str() < best->id.str())) best = &r;
  if (best == nullptr) throw std::domain_error("query point outside the array surface");
  return best->id;
}

// Debounces raw region lookups: the reported region switches only after the
// point has stayed in one new region for a full dwell interval.
class DwellTracker {
 public:
  DwellTracker(const RegionId& initial, double t0, double dwell_s = 0.5)
      : reported_(initial), dwell_(dwell_s), last_time_(t0) {}

  RegionId observe(double t, const RegionId& raw) {
    last_time_ = t;
    if (raw == reported_) {
      candidate_.reset();
      return reported_;
    }
    if (!candidate_ || *candidate_ != raw) {
      candidate_ = raw;
      candidate_since_ = t;
      return reported_;
    }
    if (t - candidate_since_ >= dwell_ - 1e-9) {
      reported_ = raw;
      candidate_.reset();
    }
    return reported_;
  }

  const RegionId& reported() const { return reported_; }

 private:
  RegionId reported_;
  double dwell_;
  double last_time_;
  std::optional<RegionId> candidate_;
  double candidate_since_ = 0.0;
};

// ---------------------------------------------------------------------------
// Region adjacency graph and shortest paths
// ---------------------------------------------------------------------------

struct RegionGraph {
  struct Edge {
    int to = 0;
    double weight = 0.0;  // directed weight [mm]
  };
  std::vector<RegionId> nodes;                 // index order = map order
  std::vector<std::vector<Edge>> adjacency;    // per node, directed edges

  int index_of(const RegionId& id) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (nodes[i] == id) return static_cast<int>(i);
    return -1;
  }
};

// Directed multiplier table keyed by (from kind, to kind). Entering a strip
// from a centre cell is discouraged by default: the paper-before-this-code
// found centre-to-plate moves hardest, and every route out of a centre cell
// passes through a strip.
using WeightOverrides = std::map<std::pair<RegionKind, RegionKind>, double>;

inline WeightOverrides default_weight_overrides() {
  return {{{RegionKind::centre, RegionKind::inter_tile}, 4.0}};
}

namespace detail {

// Rectangles adjacent when they share a boundary segment of positive length.
inline bool rects_edge_adjacent(const Rect& a, const Rect& b) {
  const double eps = 1e-9;
  const double ox = std::min(a.xmax, b.xmax) - std::max(a.xmin, b.xmin);
  const double oy = std::min(a.ymax, b.ymax) - std::max(a.ymin, b.ymin);
  const bool touch_x = std::abs(a.xmax - b.xmin) < eps || std::abs(b.xmax - a.xmin) < eps;
  const bool touch_y = std::abs(a.ymax - b.ymin) < eps || std::abs(b.ymax - a.ymin) < eps;
  return (touch_x && oy > eps) || (touch_y && ox > eps);
}

}  // namespace detail

inline RegionGraph build_graph(const RegionMap& map,
                               const WeightOverrides& overrides = default_weight_overrides()) {
  for (const auto& [key, mult] : overrides)
    if (mult < 0.0) throw std::invalid_argument("negative weight multiplier");
  const auto multiplier = [&](RegionKind from, RegionKind to) {
    const auto it = overrides.find({from, to});
    return it == overrides.end() ? 1.0 : it->second;
  };

  RegionGraph g;
  g.nodes.reserve(map.regions.size());
  for (const Region& r : map.regions) g.nodes.push_back(r.id);
  g.adjacency.assign(map.regions.size(), {});
  for (std::size_t i = 0; i < map.regions.size(); ++i)
    for (std::size_t j = i + 1; j < map.regions.size(); ++j) {
      const Region& a = map.regions[i];
      const Region& b = map.regions[j];
      if (!detail::rects_edge_adjacent(a.rect, b.rect)) continue;
      const double dist = (a.centre - b.centre).norm();
      g.adjacency[i].push_back({static_cast<int>(j), dist * multiplier(a.id.kind, b.id.kind)});
      g.adjacency[j].push_back({static_cast<int>(i), dist * multiplier(b.id.kind, a.id.kind)});
    }
  return g;
}

struct PathPlan {
  std::vector<RegionId> sequence;  // first = current, last = goal
  double cost = 0.0;

  bool complete() const { return sequence.size() <= 1; }
  const RegionId& goal() const { return sequence.back(); }
};

// Dijkstra with deterministic lexicographic tie-breaking on the full path
// string sequence.
inline PathPlan plan_path(const RegionGraph& graph, const RegionId& from, const RegionId& to) {
  const int s = graph.index_of(from);
  const int t = graph.index_of(to);
  if (s < 0 || t < 0) throw std::invalid_argument("plan endpoints must be graph nodes");

  const int n = static_cast<int>(graph.nodes.size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, inf);
  std::vector<std::vector<std::string>> key(n);  // id strings along the best path
  std::vector<int> prev(n, -1);
  std::vector<char> done(n, 0);
  dist[s] = 0.0;
  key[s] = {graph.nodes[s].str()};

  for (int round = 0; round < n; ++round) {
    int u = -1;
    for (int i = 0; i < n; ++i) {
      if (done[i] || dist[i] == inf) continue;
      if (u < 0 || dist[i] < dist[u] || (dist[i] == dist[u] && key[i] < key[u])) u = i;
    }
    if (u < 0) break;
    done[u] = 1;
    for (const RegionGraph::Edge& e : graph.adjacency[u]) {
      if (done[e.to]) continue;
      const double cand = dist[u] + e.weight;
      std::vector<std::string> cand_key = key[u];
      cand_key.push_back(graph.nodes[e.to].str());
      if (cand < dist[e.to] || (cand == dist[e.to] && cand_key < key[e.to])) {
        dist[e.to] = cand;
        key[e.to] = std::move(cand_key);
        prev[e.to] = u;
      }
    }
  }
  if (dist[t] == inf) throw std::runtime_error("goal region unreachable");

  PathPlan plan;
  plan.cost = dist[t];
  for (int v = t; v >= 0; v = prev[v]) plan.sequence.push_back(graph.nodes[v]);
  std::reverse(plan.sequence.begin(), plan.sequence.end());
  return plan;
}

// Advances the plan when the object follows it, replans from scratch when it
// strays, and collapses to the goal alone on arrival.
inline PathPlan replan_on_transition(const PathPlan& plan, const RegionId& observed,
                                     const RegionGraph& graph) {
  if (observed == plan.goal()) return PathPlan{{observed}, 0.0};
  if (!plan.sequence.empty() && observed == plan.sequence.front()) return plan;
  if (plan.sequence.size() >= 2 && observed == plan.sequence[1]) {
    const int u = graph.index_of(plan.sequence[0]);
    PathPlan next;
    next.sequence.assign(plan.sequence.begin() + 1, plan.sequence.end());
    next.cost = plan.cost;
    for (const RegionGraph::Edge& e : graph.adjacency[u])
      if (graph.nodes[e.to] == observed) {
        next.cost = plan.cost - e.weight;
        break;
      }
    return next;
  }
  return plan_path(graph, observed, plan.goal());
}

}  // namespace tilearray
