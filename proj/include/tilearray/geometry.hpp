#pragma once

#include <cmath>

// Small fixed-size linear algebra used throughout the library.
// Lengths are millimetres, angles radians unless noted otherwise.

namespace tilearray {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Wraps an angle into [0, 2*pi).
inline double wrap_angle(double a) {
  double w = std::fmod(a, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  // fmod can return exactly 2*pi after the correction when a is a tiny
  // negative value; fold that back to zero.
  if (w >= kTwoPi) w = 0.0;
  return w;
}

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double norm() const { return std::hypot(x, y); }
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

inline double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

// Row-major 3x3 matrix.
struct Mat3 {
  double m[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

  static Mat3 identity() { return Mat3{}; }

  static Mat3 rot_z(double a) {
    const double c = std::cos(a), s = std::sin(a);
    Mat3 r;
    r.m[0][0] = c; r.m[0][1] = -s; r.m[0][2] = 0;
    r.m[1][0] = s; r.m[1][1] = c;  r.m[1][2] = 0;
    r.m[2][0] = 0; r.m[2][1] = 0;  r.m[2][2] = 1;
    return r;
  }

  static Mat3 rot_y(double a) {
    const double c = std::cos(a), s = std::sin(a);
    Mat3 r;
    r.m[0][0] = c;  r.m[0][1] = 0; r.m[0][2] = s;
    r.m[1][0] = 0;  r.m[1][1] = 1; r.m[1][2] = 0;
    r.m[2][0] = -s; r.m[2][1] = 0; r.m[2][2] = c;
    return r;
  }

  Vec3 operator*(const Vec3& v) const {
    return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
  }

  Mat3 operator*(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        r.m[i][j] = m[i][0] * o.m[0][j] + m[i][1] * o.m[1][j] + m[i][2] * o.m[2][j];
    return r;
  }

  Mat3 transposed() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.m[i][j] = m[j][i];
    return r;
  }

  double det() const {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  }
};

// Tilt of the vertical axis toward azimuth delta by angle phi, with no twist
// about z: rotation by phi about the horizontal axis R_z(delta)*y_hat.
// Smooth in the tilt components (phi*cos(delta), phi*sin(delta)), identity at
// phi = 0 regardless of delta.
inline Mat3 tilt_rotation(double delta, double phi) {
  return Mat3::rot_z(delta) * Mat3::rot_y(phi) * Mat3::rot_z(-delta);
}

// Same rotation parametrized by the smooth tilt components u = phi*cos(delta),
// v = phi*sin(delta); used by iterative solvers to avoid the phi = 0
// coordinate singularity.
inline Mat3 tilt_rotation_uv(double u, double v) {
  const double phi = std::hypot(u, v);
  if (phi < 1e-14) return Mat3::identity();
  return tilt_rotation(std::atan2(v, u), phi);
}

// Rigid transform: p_world = rotation * p_local + translation.
struct RigidTransform {
  Mat3 rotation;
  Vec3 translation;

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
};

// Solves the 3x3 system A*x = b by Cramer's rule. The caller guarantees A is
// well-conditioned enough for the use at hand (damped normal equations).
inline Vec3 solve3(const Mat3& A, const Vec3& b) {
  const double d = A.det();
  Mat3 ax = A, ay = A, az = A;
  ax.m[0][0] = b.x; ax.m[1][0] = b.y; ax.m[2][0] = b.z;
  ay.m[0][1] = b.x; ay.m[1][1] = b.y; ay.m[2][1] = b.z;
  az.m[0][2] = b.x; az.m[1][2] = b.y; az.m[2][2] = b.z;
  return {ax.det() / d, ay.det() / d, az.det() / d};
}

}  // namespace tilearray
