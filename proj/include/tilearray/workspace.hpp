#pragma once

#include "tilearray/array.hpp"
#include "tilearray/geometry.hpp"
#include "tilearray/tile.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace tilearray {

// Uniformly spaced sample axis: value(i) = start + i * step.
struct GridAxis {
  double start = 0.0;
  double step = 0.0;
  int count = 1;
  double value(int i) const { return start + step * i; }
};

// Cartesian product grid over (delta, phi, r). Linear index runs r fastest,
// then phi, then delta.
struct PoseGrid {
  GridAxis delta;
  GridAxis phi;
  GridAxis r;

  int size() const { return delta.count * phi.count * r.count; }
  int index(int i_delta, int i_phi, int i_r) const {
    return (i_delta * phi.count + i_phi) * r.count + i_r;
  }
  TilePose pose(int i_delta, int i_phi, int i_r) const {
    return TilePose(delta.value(i_delta), phi.value(i_phi), r.value(i_r));
  }
};

// Default resolution: 64 x 32 x 24 samples. delta covers the full circle
// half-open (2*pi identified with 0); phi spans [0, theta_max] inclusive;
// r spans (10, 131.5] from above the degenerate fold to just under the
// symmetric reach bound.
inline PoseGrid default_pose_grid(const TileGeometry& geom = TileGeometry{}) {
  PoseGrid g;
  g.delta = GridAxis{0.0, kTwoPi / 64.0, 64};
  g.phi = GridAxis{0.0, geom.theta_max / 31.0, 32};
  const double r_lo = 10.0, r_hi = 131.5;
  const double step = (r_hi - r_lo) / 24.0;
  g.r = GridAxis{r_lo + step, step, 24};
  return g;
}

struct WorkspaceSet {
  PoseGrid grid;
  std::vector<std::uint8_t> valid;  // one flag per grid point
  bool radially_symmetric = false;

  int valid_count() const {
    int n = 0;
    for (std::uint8_t v : valid) n += v;
    return n;
  }
};

namespace detail {

// True when, for every (phi, r), the delta column is uniformly valid or
// uniformly invalid.
inline bool mask_is_radial(const PoseGrid& grid, const std::vector<std::uint8_t>& mask) {
  for (int ip = 0; ip < grid.phi.count; ++ip)
    for (int ir = 0; ir < grid.r.count; ++ir) {
      const std::uint8_t first = mask[grid.index(0, ip, ir)];
      for (int id = 1; id < grid.delta.count; ++id)
        if (mask[grid.index(id, ip, ir)] != first) return false;
    }
  return true;
}

}  // namespace detail

// Flags each grid pose by IK feasibility. phi = 0 rows are evaluated once
// (delta is canonical there) and copied across the delta axis.
inline WorkspaceSet enumerate_workspace(const TileGeometry& geom, const PoseGrid& grid) {
  if (grid.size() <= 0) throw std::invalid_argument("empty pose grid");
  WorkspaceSet ws;
  ws.grid = grid;
  ws.valid.assign(static_cast<std::size_t>(grid.size()), 0);
  for (int ip = 0; ip < grid.phi.count; ++ip) {
    const bool zero_tilt = grid.phi.value(ip) == 0.0;
    for (int ir = 0; ir < grid.r.count; ++ir) {
      if (zero_tilt) {
        const std::uint8_t flag = pose_feasible(grid.pose(0, ip, ir), geom) ? 1 : 0;
        for (int id = 0; id < grid.delta.count; ++id) ws.valid[grid.index(id, ip, ir)] = flag;
      } else {
        for (int id = 0; id < grid.delta.count; ++id)
          ws.valid[grid.index(id, ip, ir)] =
              pose_feasible(grid.pose(id, ip, ir), geom) ? 1 : 0;
      }
    }
  }
  ws.radially_symmetric = detail::mask_is_radial(grid, ws.valid);
  return ws;
}

// Keeps a (phi, r) pair only when it is valid at every sampled delta, making
// validity independent of tilt azimuth.
inline WorkspaceSet radially_symmetric_subset(const WorkspaceSet& ws) {
  WorkspaceSet out;
  out.grid = ws.grid;
  out.valid.assign(ws.valid.size(), 0);
  out.radially_symmetric = true;
  const PoseGrid& g = ws.grid;
  for (int ip = 0; ip < g.phi.count; ++ip)
    for (int ir = 0; ir < g.r.count; ++ir) {
      bool all = true;
      for (int id = 0; id < g.delta.count && all; ++id) all = ws.valid[g.index(id, ip, ir)] != 0;
      if (all)
        for (int id = 0; id < g.delta.count; ++id) out.valid[g.index(id, ip, ir)] = 1;
    }
  return out;
}

// ---------------------------------------------------------------------------
// Inter-tile material separations
// ---------------------------------------------------------------------------

enum class PairRelation { edge, diagonal };

// alpha: for edge neighbors, the larger of the two distances between bonded
// like-signed corner pairs of the facing edges (the strip's extreme fiber).
// beta: for diagonal neighbors, the distance between the single bonded
// nearest-corner pair. For edge relations beta reports the smaller fiber; for
// diagonal relations the single pair serves as both.
struct PairSeparation {
  double alpha = 0.0;
  double beta = 0.0;
};

inline PairRelation classify_offset(const Vec2& offset) {
  const double ax = std::abs(offset.x), ay = std::abs(offset.y);
  const double eps = 1e-9;
  if (ax < eps && ay < eps) throw std::invalid_argument("zero neighbor offset");
  if (ax < eps || ay < eps) return PairRelation::edge;
  if (std::abs(ax - ay) < eps) return PairRelation::diagonal;
  throw std::invalid_argument("offset must be an edge or diagonal neighbor displacement");
}

namespace detail {

inline int sign_of(double v) { return v > 0.0 ? 1 : -1; }

// Separation computed from cached corner sets; b's corners live in a frame
// displaced by offset from a's. Corner correspondence is fixed (bonded at the
// neutral pose) so separations vary continuously with pose.
inline PairSeparation pair_separation_corners(const CornerSet& a, const CornerSet& b,
                                              const Vec2& offset) {
  const Vec3 off{offset.x, offset.y, 0.0};
  const PairRelation rel = classify_offset(offset);
  PairSeparation s;
  if (rel == PairRelation::edge) {
    double d0, d1;
    if (std::abs(offset.y) < 1e-9) {
      const int sx = sign_of(offset.x);
      d0 = distance(a.at(sx, +1), b.at(-sx, +1) + off);
      d1 = distance(a.at(sx, -1), b.at(-sx, -1) + off);
    } else {
      const int sy = sign_of(offset.y);
      d0 = distance(a.at(+1, sy), b.at(+1, -sy) + off);
      d1 = distance(a.at(-1, sy), b.at(-1, -sy) + off);
    }
    s.alpha = std::max(d0, d1);
    s.beta = std::min(d0, d1);
  } else {
    const int sx = sign_of(offset.x), sy = sign_of(offset.y);
    const double d = distance(a.at(sx, sy), b.at(-sx, -sy) + off);
    s.alpha = d;
    s.beta = d;
  }
  return s;
}

}  // namespace detail

// offset is the base-to-base displacement of tile b relative to tile a, e.g.
// (D, 0) for an east edge neighbor or (D, D) for the north-east diagonal.
inline PairSeparation pair_separation(const TilePose& pose_a, const TilePose& pose_b,
                                      const Vec2& offset, const TileGeometry& geom) {
  return detail::pair_separation_corners(end_effector_corners(pose_a, geom),
                                         end_effector_corners(pose_b, geom), offset);
}

// Edge strips require L >= alpha; diagonal corner joins require sqrt(2)*L >= beta.
inline bool check_pair_valid(const TilePose& pose_a, const TilePose& pose_b,
                             PairRelation relation, const ArrayConfig& config,
                             const TileGeometry& geom) {
  const double d = config.inter_tile_distance;
  const Vec2 offset = relation == PairRelation::edge ? Vec2{d, 0.0} : Vec2{d, d};
  const PairSeparation s = pair_separation(pose_a, pose_b, offset, geom);
  return relation == PairRelation::edge ? s.alpha <= config.material_length
                                        : s.beta <= std::sqrt(2.0) * config.material_length;
}

inline bool check_pair_valid(const TilePose& pose_a, const TilePose& pose_b, const Vec2& offset,
                             const ArrayConfig& config, const TileGeometry& geom) {
  const PairRelation rel = classify_offset(offset);
  const PairSeparation s = pair_separation(pose_a, pose_b, offset, geom);
  return rel == PairRelation::edge ? s.alpha <= config.material_length
                                   : s.beta <= std::sqrt(2.0) * config.material_length;
}

// ---------------------------------------------------------------------------
// Shared workspace: poses a tile may hold no matter what valid poses its
// eight neighbors hold.
// ---------------------------------------------------------------------------

enum class SharedPath { naive, aligned, radial };

struct SharedWorkspaceResult {
  WorkspaceSet retained;
  std::uint64_t pair_checks = 0;  // separation evaluations performed
  SharedPath path = SharedPath::naive;
};

namespace detail {

// The eight neighbor offsets in pitch units.
struct OffsetUnit {
  int sx, sy;
};
inline constexpr OffsetUnit kEdgeUnits[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
inline constexpr OffsetUnit kDiagUnits[4] = {{1, 1}, {-1, 1}, {-1, -1}, {1, -1}};

struct PoseCache {
  std::vector<int> grid_index;   // grid index of each member pose
  std::vector<int> delta_index;  // delta axis index of each member pose
  std::vector<CornerSet> corners;
  std::vector<int> member_at;  // grid index -> member position, -1 if absent

  int size() const { return static_cast<int>(grid_index.size()); }
};

inline PoseCache build_pose_cache(const WorkspaceSet& ws, const TileGeometry& geom) {
  PoseCache c;
  const PoseGrid& g = ws.grid;
  c.member_at.assign(ws.valid.size(), -1);
  for (int id = 0; id < g.delta.count; ++id)
    for (int ip = 0; ip < g.phi.count; ++ip)
      for (int ir = 0; ir < g.r.count; ++ir) {
        const int gi = g.index(id, ip, ir);
        if (!ws.valid[gi]) continue;
        c.member_at[gi] = c.size();
        c.grid_index.push_back(gi);
        c.delta_index.push_back(id);
        c.corners.push_back(end_effector_corners(g.pose(id, ip, ir), geom));
      }
  return c;
}

// True when the single pair (a at origin, b at offset) respects the material.
inline bool pair_ok(const CornerSet& a, const CornerSet& b, const OffsetUnit& u, double pitch,
                    double material_length) {
  const Vec2 offset{u.sx * pitch, u.sy * pitch};
  const PairSeparation s = pair_separation_corners(a, b, offset);
  return (u.sx != 0 && u.sy != 0) ? s.beta <= std::sqrt(2.0) * material_length
                                  : s.alpha <= material_length;
}

// Maps a member pose to the member with its delta index remapped; the target
// must exist (callers guarantee the mask is closed under the map).
inline int remap_member(const PoseCache& cache, const PoseGrid& grid, int member,
                        int new_delta_index) {
  const int gi = cache.grid_index[member];
  const int within = gi - grid.index(cache.delta_index[member], 0, 0);
  const int target = cache.member_at[grid.index(new_delta_index, 0, 0) + within];
  if (target < 0) throw std::logic_error("workspace mask not closed under symmetry map");
  return target;
}

inline bool delta_axis_is_full_circle(const GridAxis& delta) {
  return std::abs(delta.start) < 1e-12 &&
         std::abs(delta.step * delta.count - kTwoPi) < 1e-9;
}

// valid(delta) == valid(-delta) on the stored mask, index map i -> (n-i) % n.
inline bool mask_mirror_closed(const PoseGrid& grid, const std::vector<std::uint8_t>& mask) {
  const int n = grid.delta.count;
  for (int id = 0; id < n; ++id) {
    const int mid = (n - id) % n;
    for (int ip = 0; ip < grid.phi.count; ++ip)
      for (int ir = 0; ir < grid.r.count; ++ir)
        if (mask[grid.index(id, ip, ir)] != mask[grid.index(mid, ip, ir)]) return false;
  }
  return true;
}

inline WorkspaceSet mask_to_workspace(const PoseGrid& grid, const PoseCache& cache,
                                      const std::vector<std::uint8_t>& retained_members) {
  WorkspaceSet out;
  out.grid = grid;
  out.valid.assign(static_cast<std::size_t>(grid.size()), 0);
  for (int m = 0; m < cache.size(); ++m)
    if (retained_members[m]) out.valid[cache.grid_index[m]] = 1;
  out.radially_symmetric = mask_is_radial(grid, out.valid);
  return out;
}

}  // namespace detail

// Brute-force oracle: every member pose against every member pose for all
// eight neighbor offsets, no early exit, no symmetry use.
inline SharedWorkspaceResult shared_workspace_naive(const WorkspaceSet& ws,
                                                    const ArrayConfig& config,
                                                    const TileGeometry& geom) {
  if (ws.valid.empty()) throw std::invalid_argument("empty workspace");
  const detail::PoseCache cache = detail::build_pose_cache(ws, geom);
  const int v = cache.size();
  const double pitch = config.inter_tile_distance;
  const double length = config.material_length;

  std::vector<std::uint8_t> keep(static_cast<std::size_t>(v), 1);
  SharedWorkspaceResult result;
  for (int p = 0; p < v; ++p) {
    bool ok = true;
    for (const auto& units : {detail::kEdgeUnits, detail::kDiagUnits})
      for (int u = 0; u < 4; ++u)
        for (int q = 0; q < v; ++q) {
          ok = detail::pair_ok(cache.corners[p], cache.corners[q], units[u], pitch, length) && ok;
          ++result.pair_checks;
        }
    keep[p] = ok ? 1 : 0;
  }
  result.retained = detail::mask_to_workspace(ws.grid, cache, keep);
  result.path = SharedPath::naive;
  return result;
}

// Symmetry-reduced computation of the same retained set.
//
// The plate orientation model carries no twist, so conjugating both poses of
// a neighbor pair by a rigid z-rotation or a vertical mirror maps the pair
// check onto another neighbor direction's check exactly. Two reductions
// follow:
//  - aligned path (validity mirror-symmetric in delta, ~4 P^2 checks):
//    north, north-east and north-west tables are computed in full; their
//    mirror images supply south, south-east and south-west; the east and west
//    tables restrict partner poses to a closed half circle of delta and
//    complete the exclusion sets by the mirror.
//  - radial path (radially symmetric workspace with delta samples divisible
//    by 4, ~P^2 checks): only the north and north-east tables are computed,
//    each over a closed half circle of partners, and all other directions are
//    index rotations of those exclusion sets.
// Falls back to the brute-force oracle when the workspace offers no usable
// symmetry. Equality with the oracle is exact except for pairs whose
// separation ties the material limit to the last floating-point digit.
inline SharedWorkspaceResult shared_workspace_symmetric(const WorkspaceSet& ws,
                                                        const ArrayConfig& config,
                                                        const TileGeometry& geom) {
  if (ws.valid.empty()) throw std::invalid_argument("empty workspace");
  const PoseGrid& g = ws.grid;
  const int n = g.delta.count;
  const bool full_circle = detail::delta_axis_is_full_circle(g.delta);
  const bool radial_ok = ws.radially_symmetric && full_circle && n % 4 == 0;
  const bool aligned_ok =
      full_circle && n % 2 == 0 && detail::mask_mirror_closed(g, ws.valid);
  if (!radial_ok && !aligned_ok) return shared_workspace_naive(ws, config, geom);

  const detail::PoseCache cache = detail::build_pose_cache(ws, geom);
  const int v = cache.size();
  const double pitch = config.inter_tile_distance;
  const double length = config.material_length;
  SharedWorkspaceResult result;

  // Exclusion mask per direction: excl[p] set when some partner pose forbids
  // p for that neighbor direction.
  const auto excl_over = [&](const detail::OffsetUnit& unit,
                             const std::vector<int>& partners) {
    std::vector<std::uint8_t> excl(static_cast<std::size_t>(v), 0);
    for (int p = 0; p < v; ++p) {
      bool hit = false;
      for (const int q : partners) {
        const bool ok = detail::pair_ok(cache.corners[p], cache.corners[q], unit, pitch, length);
        ++result.pair_checks;
        hit = hit || !ok;
      }
      excl[p] = hit ? 1 : 0;
    }
    return excl;
  };

  const auto members_with_delta = [&](auto&& index_pred) {
    std::vector<int> out;
    for (int m = 0; m < v; ++m)
      if (index_pred(cache.delta_index[m])) out.push_back(m);
    return out;
  };
  std::vector<int> all(static_cast<std::size_t>(v));
  for (int m = 0; m < v; ++m) all[m] = m;

  const auto remapped = [&](const std::vector<std::uint8_t>& excl, auto&& index_map) {
    std::vector<std::uint8_t> out(static_cast<std::size_t>(v), 0);
    for (int m = 0; m < v; ++m) {
      const int target = detail::remap_member(cache, g, m, index_map(cache.delta_index[m]));
      out[m] = excl[target];
    }
    return out;
  };
  const auto mirror_complete = [&](const std::vector<std::uint8_t>& half,
                                   auto&& index_map) {
    std::vector<std::uint8_t> out(static_cast<std::size_t>(v), 0);
    for (int m = 0; m < v; ++m) {
      const int target = detail::remap_member(cache, g, m, index_map(cache.delta_index[m]));
      out[m] = half[m] | half[target];
    }
    return out;
  };

  std::vector<std::vector<std::uint8_t>> excl;
  if (radial_ok) {
    // Index maps: mirror across the y axis and across the x=y diagonal.
    const auto m_y = [n](int i) { return ((n / 2 - i) % n + n) % n; };
    const auto m_d = [n](int i) { return ((n / 4 - i) % n + n) % n; };
    const auto rot = [n](int i, int quarters) { return ((i + quarters * (n / 4)) % n + n) % n; };
    const std::vector<int> half_my = members_with_delta([&](int i) { return i <= m_y(i); });
    const std::vector<int> half_md = members_with_delta([&](int i) { return i <= m_d(i); });

    const auto north_half = excl_over({0, 1}, half_my);
    const auto north_east_half = excl_over({1, 1}, half_md);
    const auto north = mirror_complete(north_half, m_y);
    const auto north_east = mirror_complete(north_east_half, m_d);

    excl.push_back(north);
    excl.push_back(remapped(north, [&](int i) { return rot(i, 1); }));   // east
    excl.push_back(remapped(north, [&](int i) { return rot(i, 2); }));   // south
    excl.push_back(remapped(north, [&](int i) { return rot(i, -1); }));  // west
    excl.push_back(north_east);
    excl.push_back(remapped(north_east, [&](int i) { return rot(i, 1); }));   // south-east
    excl.push_back(remapped(north_east, [&](int i) { return rot(i, 2); }));   // south-west
    excl.push_back(remapped(north_east, [&](int i) { return rot(i, -1); }));  // north-west
    result.path = SharedPath::radial;
  } else {
    const auto m_x = [n](int i) { return (n - i) % n; };
    const std::vector<int> half_mx = members_with_delta([&](int i) { return i <= m_x(i); });

    const auto north = excl_over({0, 1}, all);
    const auto north_east = excl_over({1, 1}, all);
    const auto north_west = excl_over({-1, 1}, all);
    const auto east = mirror_complete(excl_over({1, 0}, half_mx), m_x);
    const auto west = mirror_complete(excl_over({-1, 0}, half_mx), m_x);

    excl.push_back(north);
    excl.push_back(east);
    excl.push_back(remapped(north, m_x));  // south
    excl.push_back(west);
    excl.push_back(north_east);
    excl.push_back(north_west);
    excl.push_back(remapped(north_east, m_x));  // south-east
    excl.push_back(remapped(north_west, m_x));  // south-west
    result.path = SharedPath::aligned;
  }

  std::vector<std::uint8_t> keep(static_cast<std::size_t>(v), 1);
  for (int m = 0; m < v; ++m)
    for (const auto& e : excl)
      if (e[m]) {
        keep[m] = 0;
        break;
      }
  result.retained = detail::mask_to_workspace(g, cache, keep);
  return result;
}

// ---------------------------------------------------------------------------
// Material-length sweeps
// ---------------------------------------------------------------------------

namespace detail {

inline PairSeparation alpha_beta_max_cached(const PoseCache& cache, bool radial, double pitch) {
  const int v = cache.size();
  if (v == 0) throw std::invalid_argument("empty workspace");
  PairSeparation best{0.0, 0.0};
  const int edge_count = radial ? 1 : 4;
  for (int u = 0; u < edge_count; ++u)
    for (int p = 0; p < v; ++p)
      for (int q = 0; q < v; ++q) {
        const Vec2 off{kEdgeUnits[u].sx * pitch, kEdgeUnits[u].sy * pitch};
        best.alpha = std::max(best.alpha,
                              pair_separation_corners(cache.corners[p], cache.corners[q], off).alpha);
      }
  for (int u = 0; u < edge_count; ++u)
    for (int p = 0; p < v; ++p)
      for (int q = 0; q < v; ++q) {
        const Vec2 off{kDiagUnits[u].sx * pitch, kDiagUnits[u].sy * pitch};
        best.beta = std::max(best.beta,
                             pair_separation_corners(cache.corners[p], cache.corners[q], off).beta);
      }
  return best;
}

}  // namespace detail

// Maxima of alpha over edge-adjacent pose pairs and beta over diagonal pairs.
// A radially symmetric workspace needs only one direction of each kind; other
// workspaces scan all four.
inline PairSeparation alpha_beta_max(const WorkspaceSet& ws, double pitch,
                                     const TileGeometry& geom) {
  const detail::PoseCache cache = detail::build_pose_cache(ws, geom);
  return detail::alpha_beta_max_cached(cache, ws.radially_symmetric, pitch);
}

// Shortest material that keeps every pose pair feasible: both the edge bound
// alpha_max and the diagonal bound beta_max / sqrt(2) must be met.
inline double min_material_length(const WorkspaceSet& ws, double pitch,
                                  const TileGeometry& geom) {
  const PairSeparation s = alpha_beta_max(ws, pitch, geom);
  return std::max(s.alpha, s.beta / std::sqrt(2.0));
}

struct SweepResult {
  struct Row {
    double pitch;       // D [mm]
    double alpha_max;   // [mm]
    double beta_max;    // [mm]
    double min_length;  // L_min [mm]
  };
  std::vector<Row> rows;  // ascending in pitch
};

inline SweepResult sweep_material(const WorkspaceSet& ws, std::vector<double> pitches,
                                  const TileGeometry& geom) {
  const detail::PoseCache cache = detail::build_pose_cache(ws, geom);
  std::sort(pitches.begin(), pitches.end());
  SweepResult out;
  for (const double d : pitches) {
    const PairSeparation s = detail::alpha_beta_max_cached(cache, ws.radially_symmetric, d);
    out.rows.push_back({d, s.alpha, s.beta, std::max(s.alpha, s.beta / std::sqrt(2.0))});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Taut assist pose
// ---------------------------------------------------------------------------

struct TautAssist {
  TilePose assist_pose = neutral_pose();
  double alpha = 0.0;  // achieved separation [mm]
  double gamma = 0.0;  // inclination of the taut strip, positive when the
                       // assist edge sits above the receiving edge [rad]
  bool taut = false;   // |alpha - L| within tolerance
};

inline constexpr double kTautToleranceMm = 2.0;

// Chooses the assisting neighbor's pose (tile at offset (D, 0) from the
// receiving tile) that tenses the strip between them. Candidates keep their
// tilt azimuth on the inter-tile axis (delta in {0, pi}); among candidates
// within the taut tolerance the strip inclination gamma is maximized; if none
// reaches tolerance the closest separation wins and the result is flagged
// not taut. gamma is measured between the midpoints of the facing effector
// edges.
inline TautAssist taut_assist_pose(const TilePose& receiving_pose, const ArrayConfig& config,
                                   const WorkspaceSet& ws, const TileGeometry& geom) {
  const PoseGrid& g = ws.grid;
  const double pitch = config.inter_tile_distance;
  const Vec2 offset{pitch, 0.0};
  const Vec3 off3{pitch, 0.0, 0.0};

  const CornerSet recv = end_effector_corners(receiving_pose, geom);
  const Vec3 recv_mid = (recv.at(+1, +1) + recv.at(+1, -1)) * 0.5;

  bool found = false;
  TautAssist best;
  double best_key = 0.0;  // |alpha - L| when hunting, -gamma when taut
  for (int id = 0; id < g.delta.count; ++id) {
    const double delta = g.delta.value(id);
    if (std::abs(std::sin(delta)) > 1e-9) continue;  // off-axis azimuth
    for (int ip = 0; ip < g.phi.count; ++ip)
      for (int ir = 0; ir < g.r.count; ++ir) {
        if (!ws.valid[g.index(id, ip, ir)]) continue;
        const TilePose pose = g.pose(id, ip, ir);
        const CornerSet cand = end_effector_corners(pose, geom);
        const double alpha = detail::pair_separation_corners(recv, cand, offset).alpha;
        const Vec3 cand_mid = (cand.at(-1, +1) + cand.at(-1, -1)) * 0.5 + off3;
        const Vec3 d = cand_mid - recv_mid;
        const double gamma = std::atan2(d.z, std::hypot(d.x, d.y));
        const double miss = std::abs(alpha - config.material_length);
        const bool taut = miss <= kTautToleranceMm;

        bool better;
        if (!found) {
          better = true;
        } else if (taut != best.taut) {
          better = taut;
        } else if (taut) {
          better = gamma > best.gamma || (gamma == best.gamma && miss < best_key);
        } else {
          better = miss < best_key || (miss == best_key && gamma > best.gamma);
        }
        if (better) {
          best = TautAssist{pose, alpha, gamma, taut};
          best_key = miss;
          found = true;
        }
      }
  }
  if (!found) throw std::invalid_argument("workspace holds no axis-aligned candidate poses");
  return best;
}

// Per-extension taut curves: for each r in the grid and each queried material
// length, the steepest taut strip inclination and the tilt achieving it.
struct TautCurve {
  struct Row {
    double material_length;  // [mm]
    double max_phi;          // tilt of the best candidate [rad]
    double max_gamma;        // [rad]
    double r;                // extension of the curve [mm]
  };
  std::vector<Row> rows;  // grouped by r ascending, material length ascending
};

inline TautCurve taut_curve(const TilePose& receiving_pose, const ArrayConfig& config,
                            const WorkspaceSet& ws, const TileGeometry& geom,
                            std::vector<double> lengths) {
  const PoseGrid& g = ws.grid;
  const Vec2 offset{config.inter_tile_distance, 0.0};
  const Vec3 off3{offset.x, 0.0, 0.0};
  const CornerSet recv = end_effector_corners(receiving_pose, geom);
  const Vec3 recv_mid = (recv.at(+1, +1) + recv.at(+1, -1)) * 0.5;
  std::sort(lengths.begin(), lengths.end());

  struct Candidate {
    double phi, alpha, gamma;
  };
  TautCurve out;
  for (int ir = 0; ir < g.r.count; ++ir) {
    std::vector<Candidate> cands;
    for (int id = 0; id < g.delta.count; ++id) {
      if (std::abs(std::sin(g.delta.value(id))) > 1e-9) continue;
      for (int ip = 0; ip < g.phi.count; ++ip) {
        if (!ws.valid[g.index(id, ip, ir)]) continue;
        const TilePose pose = g.pose(id, ip, ir);
        const CornerSet cand = end_effector_corners(pose, geom);
        const double alpha = detail::pair_separation_corners(recv, cand, offset).alpha;
        const Vec3 cand_mid = (cand.at(-1, +1) + cand.at(-1, -1)) * 0.5 + off3;
        const Vec3 d = cand_mid - recv_mid;
        cands.push_back({pose.phi, alpha, std::atan2(d.z, std::hypot(d.x, d.y))});
      }
    }
    if (cands.empty()) continue;
    for (const double length : lengths) {
      bool any = false;
      Candidate best{0.0, 0.0, 0.0};
      for (const Candidate& c : cands) {
        if (std::abs(c.alpha - length) > kTautToleranceMm) continue;
        if (!any || c.gamma > best.gamma) {
          best = c;
          any = true;
        }
      }
      if (any) out.rows.push_back({length, best.phi, best.gamma, g.r.value(ir)});
    }
  }
  return out;
}

}  // namespace tilearray
