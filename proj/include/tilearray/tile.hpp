#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "tilearray/geometry.hpp"

// Kinematics of a single three-legged parallel tile. Each leg is a
// two-segment chain of equal halves driven by one motor angle theta measured
// up from the base plane; the distal plate carries a square end-effector.

namespace tilearray {

// Mechanism dimensions. Millimetres / radians.
struct TileGeometry {
  double leg_length = 140.0;       // full leg, both segments combined
  double base_radius = 44.01;      // leg anchors on the base circle
  // Leg anchor azimuths; the plate attachment points mirror this layout at
  // the same radius in the plate frame.
  std::array<double, 3> leg_azimuth = {kPi / 3.0, kPi, 5.0 * kPi / 3.0};
  double theta_min = 0.0;
  double theta_max = 7.0 * kPi / 18.0;
  double effector_width = 150.0;   // square end-effector side E_W
  double effector_height = 5.0;    // plate surface offset E_H above the plate frame
};

// End-effector pose: tilt azimuth delta in [0, 2*pi), tilt angle phi >= 0,
// extension r > 0 (distance from tile base origin to plate centre).
// phi = 0 makes the pose azimuth-free, so delta canonicalizes to 0.
struct TilePose {
  double delta = 0.0;
  double phi = 0.0;
  double r = 90.0;

  TilePose() = default;
  TilePose(double delta_, double phi_, double r_) {
    if (phi_ < 0.0) throw std::invalid_argument("TilePose: phi must be >= 0");
    if (r_ <= 0.0) throw std::invalid_argument("TilePose: r must be > 0");
    phi = phi_;
    r = r_;
    delta = (phi_ == 0.0) ? 0.0 : wrap_angle(delta_);
  }
};

inline TilePose neutral_pose() { return TilePose(0.0, 0.0, 90.0); }

// One motor angle per leg, same order as TileGeometry::leg_azimuth.
struct LegAngles {
  std::array<double, 3> theta = {0.0, 0.0, 0.0};
};

// Plate centre position for a pose: r * (sin(phi)cos(delta), sin(phi)sin(delta), cos(phi)).
inline Vec3 pose_to_translation(const TilePose& p) {
  const double sp = std::sin(p.phi);
  return {p.r * sp * std::cos(p.delta), p.r * sp * std::sin(p.delta),
          p.r * std::cos(p.phi)};
}

// Base-to-plate transform. The plate tilts toward azimuth delta by phi
// without twisting about its own normal (tilt-only orientation).
inline RigidTransform pose_to_transform(const TilePose& p) {
  return {tilt_rotation(p.delta, p.phi), pose_to_translation(p)};
}

// The four end-effector corners. Indexed by the sign of the local x and y
// coordinate: at(sx, sy) with sx, sy in {-1, +1} is the corner at
// (sx*E_W/2, sy*E_W/2, E_H) in the plate frame.
struct CornerSet {
  Vec3 c[2][2];

  Vec3& at(int sx, int sy) { return c[(sx + 1) / 2][(sy + 1) / 2]; }
  const Vec3& at(int sx, int sy) const { return c[(sx + 1) / 2][(sy + 1) / 2]; }
};

inline CornerSet corners_from_transform(const RigidTransform& h, const TileGeometry& g) {
  const double e = g.effector_width / 2.0;
  CornerSet out;
  for (int sx : {-1, 1})
    for (int sy : {-1, 1})
      out.at(sx, sy) = h.apply({sx * e, sy * e, g.effector_height});
  return out;
}

inline CornerSet end_effector_corners(const TilePose& p, const TileGeometry& g) {
  return corners_from_transform(pose_to_transform(p), g);
}

// Leg anchor on the base circle.
inline Vec3 base_point(const TileGeometry& g, int leg) {
  const double a = g.leg_azimuth[leg];
  return {g.base_radius * std::cos(a), g.base_radius * std::sin(a), 0.0};
}

// Matching attachment point on the plate, in world coordinates.
inline Vec3 plate_point(const TilePose& p, const TileGeometry& g, int leg) {
  const double a = g.leg_azimuth[leg];
  return pose_to_transform(p).apply(
      {g.base_radius * std::cos(a), g.base_radius * std::sin(a), 0.0});
}

// Elbow of the two-segment leg at motor angle theta: the lower segment of
// length l/2 leaves the anchor folded radially inward at theta = 0 and
// sweeps up toward vertical as theta grows.
inline Vec3 elbow_point(const TileGeometry& g, int leg, double theta) {
  const double a = g.leg_azimuth[leg];
  const Vec3 radial{std::cos(a), std::sin(a), 0.0};
  const double half = g.leg_length / 2.0;
  return base_point(g, leg) + radial * (-half * std::cos(theta)) +
         Vec3{0.0, 0.0, half * std::sin(theta)};
}

// Distance defect of the upper segment: zero when the leg closes the chain.
inline double leg_residual(const TilePose& p, const TileGeometry& g, int leg, double theta) {
  return distance(plate_point(p, g, leg), elbow_point(g, leg, theta)) -
         g.leg_length / 2.0;
}

namespace detail {

// Joint-limit acceptance tolerance: poses computed from boundary values may
// land a few ulps outside [theta_min, theta_max].
inline constexpr double kThetaLimitSlack = 1e-9;

// Solves one leg's closure equation A*cos(theta) + B*sin(theta) = C for the
// in-range root, preferring the smaller angle when both roots qualify.
inline std::optional<double> solve_leg(const TilePose& p, const TileGeometry& g, int leg) {
  const Vec3 q = plate_point(p, g, leg) - base_point(g, leg);
  const double a = g.leg_azimuth[leg];
  const Vec3 radial{std::cos(a), std::sin(a), 0.0};
  const double A = -g.leg_length * q.dot(radial);
  const double B = g.leg_length * q.z;
  const double C = q.dot(q);
  const double mag = std::hypot(A, B);
  if (mag < 1e-12) {
    // Plate point coincides with the anchor; the chain closes at any angle.
    if (std::abs(C) < 1e-12) return g.theta_min;
    return std::nullopt;
  }
  const double ratio = C / mag;
  if (std::abs(ratio) > 1.0 + 1e-12) return std::nullopt;
  const double base = std::atan2(B, A);
  const double off = std::acos(std::clamp(ratio, -1.0, 1.0));
  std::optional<double> best;
  for (double cand : {base - off, base + off}) {
    // Normalize into (-pi, pi] before the range test.
    double t = std::remainder(cand, kTwoPi);
    if (t < g.theta_min - kThetaLimitSlack || t > g.theta_max + kThetaLimitSlack)
      continue;
    t = std::clamp(t, g.theta_min, g.theta_max);
    if (!best || t < *best) best = t;
  }
  return best;
}

}  // namespace detail

// Motor angles reaching a pose, or nullopt when any leg cannot close within
// its joint limits.
inline std::optional<LegAngles> inverse_kinematics(const TilePose& p, const TileGeometry& g) {
  LegAngles out;
  for (int leg = 0; leg < 3; ++leg) {
    auto t = detail::solve_leg(p, g, leg);
    if (!t) return std::nullopt;
    out.theta[leg] = *t;
  }
  return out;
}

inline bool pose_feasible(const TilePose& p, const TileGeometry& g) {
  return inverse_kinematics(p, g).has_value();
}

namespace detail {

// Pose candidate in solver coordinates (u, v, r) with u = phi*cos(delta),
// v = phi*sin(delta): smooth through phi = 0.
struct UvrPose {
  double u = 0.0, v = 0.0, r = 90.0;

  TilePose to_pose() const {
    const double phi = std::hypot(u, v);
    if (phi < 1e-12) return TilePose(0.0, 0.0, r);
    return TilePose(std::atan2(v, u), phi, r);
  }
};

inline Vec3 fk_residual(const UvrPose& c, const std::array<Vec3, 3>& elbows,
                        const TileGeometry& g) {
  const Mat3 rot = tilt_rotation_uv(c.u, c.v);
  const double phi = std::hypot(c.u, c.v);
  const double delta = (phi < 1e-14) ? 0.0 : std::atan2(c.v, c.u);
  const double sp = std::sin(phi);
  const Vec3 t{c.r * sp * std::cos(delta), c.r * sp * std::sin(delta), c.r * std::cos(phi)};
  Vec3 f;
  double* out[3] = {&f.x, &f.y, &f.z};
  for (int leg = 0; leg < 3; ++leg) {
    const double a = g.leg_azimuth[leg];
    const Vec3 local{g.base_radius * std::cos(a), g.base_radius * std::sin(a), 0.0};
    *out[leg] = distance(rot * local + t, elbows[leg]) - g.leg_length / 2.0;
  }
  return f;
}

// Damped least-squares refinement from one start. Returns a pose whose leg
// residuals all vanish, or nullopt when the iteration stalls.
inline std::optional<TilePose> fk_refine(UvrPose c, const std::array<Vec3, 3>& elbows,
                                         const TileGeometry& g) {
  constexpr int kMaxIter = 100;
  constexpr double kTol = 1e-11;
  double lambda = 1e-3;
  Vec3 f = fk_residual(c, elbows, g);
  double cost = f.dot(f);
  for (int iter = 0; iter < kMaxIter; ++iter) {
    if (std::max({std::abs(f.x), std::abs(f.y), std::abs(f.z)}) < kTol) {
      if (c.r <= 0.0) return std::nullopt;
      return c.to_pose();
    }
    // Numeric Jacobian, central differences.
    constexpr double h = 1e-7;
    Mat3 J;
    for (int col = 0; col < 3; ++col) {
      UvrPose lo = c, hi = c;
      double* plo[3] = {&lo.u, &lo.v, &lo.r};
      double* phi_[3] = {&hi.u, &hi.v, &hi.r};
      *plo[col] -= h;
      *phi_[col] += h;
      const Vec3 flo = fk_residual(lo, elbows, g);
      const Vec3 fhi = fk_residual(hi, elbows, g);
      J.m[0][col] = (fhi.x - flo.x) / (2 * h);
      J.m[1][col] = (fhi.y - flo.y) / (2 * h);
      J.m[2][col] = (fhi.z - flo.z) / (2 * h);
    }
    const Mat3 Jt = J.transposed();
    const Mat3 JtJ = Jt * J;
    const Vec3 Jtf = Jt * f;
    bool stepped = false;
    for (int attempt = 0; attempt < 8 && !stepped; ++attempt) {
      Mat3 A = JtJ;
      for (int i = 0; i < 3; ++i) A.m[i][i] += lambda;
      if (std::abs(A.det()) < 1e-30) {
        lambda *= 10.0;
        continue;
      }
      const Vec3 step = solve3(A, Jtf);
      UvrPose trial{c.u - step.x, c.v - step.y, std::max(c.r - step.z, 1e-6)};
      const Vec3 ft = fk_residual(trial, elbows, g);
      const double ct = ft.dot(ft);
      if (ct < cost) {
        c = trial;
        f = ft;
        cost = ct;
        lambda = std::max(lambda * 0.3, 1e-12);
        stepped = true;
      } else {
        lambda *= 10.0;
      }
    }
    if (!stepped) return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace detail

// Pose reached at the given motor angles. Iterative least squares on the
// tilt components and extension; `seed` (e.g. the previous pose on a
// continuous path) makes the solve a short warm refinement. Without a seed a
// deterministic multi-start search runs, seeded from the symmetric-case
// estimate r = l * mean(sin(theta)) and a coarse tilt grid. A candidate only
// counts as the answer when inverse_kinematics maps it back to the input
// angles, so branch-inconsistent chain closures are rejected.
inline std::optional<TilePose> forward_kinematics(const LegAngles& angles,
                                                  const TileGeometry& g,
                                                  std::optional<TilePose> seed = std::nullopt) {
  std::array<Vec3, 3> elbows;
  for (int leg = 0; leg < 3; ++leg) elbows[leg] = elbow_point(g, leg, angles.theta[leg]);

  const auto matches_angles = [&](const TilePose& p) {
    auto ik = inverse_kinematics(p, g);
    if (!ik) return false;
    for (int leg = 0; leg < 3; ++leg)
      if (std::abs(ik->theta[leg] - angles.theta[leg]) > 1e-7) return false;
    return true;
  };

  if (seed) {
    detail::UvrPose c{seed->phi * std::cos(seed->delta), seed->phi * std::sin(seed->delta),
                      seed->r};
    if (auto p = detail::fk_refine(c, elbows, g); p && matches_angles(*p)) return p;
  }

  double mean_sin = 0.0;
  for (double t : angles.theta) mean_sin += std::sin(t);
  mean_sin /= 3.0;
  const double r0 = std::clamp(g.leg_length * mean_sin, 1.0, g.leg_length - 1.0);

  struct Start {
    double score;
    detail::UvrPose c;
  };
  std::vector<Start> starts;
  starts.push_back({0.0, {0.0, 0.0, r0}});
  for (int i = 0; i < 12; ++i) {
    const double d = i * kPi / 6.0;
    for (double phi : {0.05, 0.15, 0.3, 0.5, 0.75, 1.0}) {
      starts.push_back({0.0, {phi * std::cos(d), phi * std::sin(d), r0}});
    }
  }
  for (auto& s : starts) {
    const Vec3 f = detail::fk_residual(s.c, elbows, g);
    s.score = f.dot(f);
  }
  std::stable_sort(starts.begin(), starts.end(),
                   [](const Start& a, const Start& b) { return a.score < b.score; });

  const int tries = std::min<int>(starts.size(), 16);
  for (int i = 0; i < tries; ++i) {
    if (auto p = detail::fk_refine(starts[i].c, elbows, g); p && matches_angles(*p)) return p;
  }
  return std::nullopt;
}

}  // namespace tilearray
