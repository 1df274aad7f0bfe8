#include "tilearray/tile.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace ta = tilearray;

namespace {

// ---------------------------------------------------------------------------
// Independent oracles. These reimplement the governing formulas directly so
// library regressions cannot hide behind self-consistency.
// ---------------------------------------------------------------------------

// Rodrigues rotation about a unit axis, written out long-hand.
ta::Vec3 rodrigues(const ta::Vec3& axis, double angle, const ta::Vec3& p) {
  const double c = std::cos(angle), s = std::sin(angle);
  const ta::Vec3 kxp = axis.cross(p);
  const double kdp = axis.dot(p);
  return p * c + kxp * s + axis * (kdp * (1.0 - c));
}

// Plate attachment point via axis-angle: tilt about the horizontal axis
// perpendicular to the tilt azimuth, then translate by Eq. 1.
ta::Vec3 oracle_plate_point(double delta, double phi, double r, double radius,
                            double azimuth) {
  const ta::Vec3 axis{-std::sin(delta), std::cos(delta), 0.0};
  const ta::Vec3 local{radius * std::cos(azimuth), radius * std::sin(azimuth), 0.0};
  const ta::Vec3 rotated = rodrigues(axis, phi, local);
  const ta::Vec3 t{r * std::sin(phi) * std::cos(delta), r * std::sin(phi) * std::sin(delta),
                   r * std::cos(phi)};
  return rotated + t;
}

ta::Vec3 oracle_elbow(const ta::TileGeometry& g, int leg, double theta) {
  const double a = g.leg_azimuth[leg];
  const double half = g.leg_length / 2.0;
  return ta::Vec3{g.base_radius * std::cos(a) - half * std::cos(theta) * std::cos(a),
                  g.base_radius * std::sin(a) - half * std::cos(theta) * std::sin(a),
                  half * std::sin(theta)};
}

// Checks that motor angles close every leg chain for a pose, using only the
// oracle formulas above.
void expect_closes_chain(const ta::TilePose& p, const ta::LegAngles& angles,
                         const ta::TileGeometry& g, double tol) {
  for (int leg = 0; leg < 3; ++leg) {
    const ta::Vec3 plate =
        oracle_plate_point(p.delta, p.phi, p.r, g.base_radius, g.leg_azimuth[leg]);
    const ta::Vec3 elbow = oracle_elbow(g, leg, angles.theta[leg]);
    EXPECT_NEAR(ta::distance(plate, elbow), g.leg_length / 2.0, tol)
        << "leg " << leg << " at pose (" << p.delta << ", " << p.phi << ", " << p.r << ")";
  }
}

ta::TileGeometry geom() { return ta::TileGeometry{}; }

}  // namespace

// ---------------------------------------------------------------------------
// Pose canonicalization and translation
// ---------------------------------------------------------------------------

TEST(TilePose, CanonicalizesDeltaAtZeroPhi) {
  const ta::TilePose p(ta::kPi / 2.0, 0.0, 90.0);
  EXPECT_EQ(p.delta, 0.0);
  EXPECT_EQ(p.phi, 0.0);
  EXPECT_EQ(p.r, 90.0);
}

TEST(TilePose, WrapsDeltaIntoRange) {
  const ta::TilePose p(-ta::kPi / 2.0, 0.3, 90.0);
  EXPECT_NEAR(p.delta, 3.0 * ta::kPi / 2.0, 1e-12);
  EXPECT_THROW(ta::TilePose(0.0, -0.1, 90.0), std::invalid_argument);
  EXPECT_THROW(ta::TilePose(0.0, 0.1, 0.0), std::invalid_argument);
}

TEST(PoseToTranslation, AxisCases) {
  // Straight up.
  const ta::Vec3 up = ta::pose_to_translation(ta::TilePose(0.0, 0.0, 90.0));
  EXPECT_NEAR(up.x, 0.0, 1e-12);
  EXPECT_NEAR(up.y, 0.0, 1e-12);
  EXPECT_NEAR(up.z, 90.0, 1e-12);

  // Fully tipped toward +x.
  const ta::Vec3 flat = ta::pose_to_translation(ta::TilePose(0.0, ta::kPi / 2.0, 100.0));
  EXPECT_NEAR(flat.x, 100.0, 1e-9);
  EXPECT_NEAR(flat.y, 0.0, 1e-9);
  EXPECT_NEAR(flat.z, 0.0, 1e-9);
}

TEST(PoseToTranslation, FrozenOracleValues) {
  // 90 * sin(25 deg) and 90 * cos(25 deg), frozen from a scalar oracle.
  const ta::Vec3 t = ta::pose_to_translation(ta::TilePose(ta::kPi / 2.0, 5.0 * ta::kPi / 36.0, 90.0));
  EXPECT_NEAR(t.x, 0.0, 1e-9);
  EXPECT_NEAR(t.y, 38.03564355666295, 1e-9);
  EXPECT_NEAR(t.z, 81.56770083329849, 1e-9);
}

TEST(PoseToTransform, TranslationAndRotationShape) {
  const ta::RigidTransform h = ta::pose_to_transform(ta::TilePose(0.0, ta::kPi / 6.0, 100.0));
  EXPECT_NEAR(h.translation.x, 50.0, 1e-9);
  EXPECT_NEAR(h.translation.y, 0.0, 1e-12);
  EXPECT_NEAR(h.translation.z, 86.602540378443865, 1e-9);
  // At delta = 0 the tilt is a pure y-rotation.
  const ta::Vec3 xhat = h.rotation * ta::Vec3{1, 0, 0};
  EXPECT_NEAR(xhat.x, std::cos(ta::kPi / 6.0), 1e-12);
  EXPECT_NEAR(xhat.z, -std::sin(ta::kPi / 6.0), 1e-12);
}

TEST(PoseToTransform, RotationIsOrthonormalRightHanded) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> ud(0.0, ta::kTwoPi), up(0.0, 1.2), ur(20.0, 120.0);
  for (int i = 0; i < 200; ++i) {
    const ta::RigidTransform h = ta::pose_to_transform(ta::TilePose(ud(rng), up(rng), ur(rng)));
    const ta::Mat3 should_be_identity = h.rotation * h.rotation.transposed();
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c)
        EXPECT_NEAR(should_be_identity.m[r][c], r == c ? 1.0 : 0.0, 1e-9);
    EXPECT_NEAR(h.rotation.det(), 1.0, 1e-9);
  }
}

TEST(PoseToTransform, TiltHasNoTwist) {
  // The plate normal must equal the translation direction, and the plate
  // x-axis must stay in the plane spanned by x_hat and z_hat when delta = 0,
  // or rotate rigidly with delta otherwise.
  const double delta = 1.1, phi = 0.4;
  const ta::RigidTransform h = ta::pose_to_transform(ta::TilePose(delta, phi, 90.0));
  const ta::Vec3 n = h.rotation * ta::Vec3{0, 0, 1};
  EXPECT_NEAR(n.x, std::sin(phi) * std::cos(delta), 1e-12);
  EXPECT_NEAR(n.y, std::sin(phi) * std::sin(delta), 1e-12);
  EXPECT_NEAR(n.z, std::cos(phi), 1e-12);
  // No twist: the horizontal axis perpendicular to the tilt azimuth is fixed.
  const ta::Vec3 axis{-std::sin(delta), std::cos(delta), 0.0};
  const ta::Vec3 mapped = h.rotation * axis;
  EXPECT_NEAR(mapped.x, axis.x, 1e-12);
  EXPECT_NEAR(mapped.y, axis.y, 1e-12);
  EXPECT_NEAR(mapped.z, 0.0, 1e-12);
}

// ---------------------------------------------------------------------------
// Corners
// ---------------------------------------------------------------------------

TEST(Corners, IdentityTransform) {
  ta::TileGeometry g = geom();
  g.effector_height = 5.0;
  const ta::CornerSet c = ta::corners_from_transform(ta::RigidTransform{}, g);
  EXPECT_NEAR(c.at(+1, +1).x, 75.0, 1e-12);
  EXPECT_NEAR(c.at(+1, +1).y, 75.0, 1e-12);
  EXPECT_NEAR(c.at(+1, +1).z, 5.0, 1e-12);
  EXPECT_NEAR(c.at(-1, +1).x, -75.0, 1e-12);
  EXPECT_NEAR(c.at(-1, -1).y, -75.0, 1e-12);
}

TEST(Corners, FrozenTiltedValues) {
  // Pose (0, pi/6, 90), E_H = 0. Oracle: x = 75*cos30 + 45 = 109.9519053,
  // z = -75*sin30 + 90*cos30 = 40.44228634.
  ta::TileGeometry g = geom();
  g.effector_height = 0.0;
  const ta::CornerSet c = ta::end_effector_corners(ta::TilePose(0.0, ta::kPi / 6.0, 90.0), g);
  EXPECT_NEAR(c.at(+1, +1).x, 109.95190528383290, 1e-9);
  EXPECT_NEAR(c.at(+1, +1).y, 75.0, 1e-9);
  EXPECT_NEAR(c.at(+1, +1).z, 40.442286340599478, 1e-9);
  // The +x edge drops, the -x edge rises.
  EXPECT_LT(c.at(+1, +1).z, c.at(-1, +1).z);
  // Corner pairs stay E_W apart along the plate edges (rigid square).
  EXPECT_NEAR(ta::distance(c.at(+1, +1), c.at(+1, -1)), 150.0, 1e-9);
  EXPECT_NEAR(ta::distance(c.at(+1, +1), c.at(-1, +1)), 150.0, 1e-9);
}

// ---------------------------------------------------------------------------
// Inverse kinematics
// ---------------------------------------------------------------------------

TEST(InverseKinematics, SymmetricExtensionLaw) {
  // Straight-up poses obey r = l * sin(theta) on every leg.
  const ta::TileGeometry g = geom();
  const double theta = ta::kPi / 4.0;
  const double r = g.leg_length * std::sin(theta);  // 98.99494936611666
  const auto ik = ta::inverse_kinematics(ta::TilePose(0.0, 0.0, r), g);
  ASSERT_TRUE(ik.has_value());
  for (int leg = 0; leg < 3; ++leg) EXPECT_NEAR(ik->theta[leg], theta, 1e-9);
  expect_closes_chain(ta::TilePose(0.0, 0.0, r), *ik, g, 1e-9);
}

TEST(InverseKinematics, SymmetricLawSweep) {
  const ta::TileGeometry g = geom();
  for (double theta = 0.05; theta < g.theta_max; theta += 0.037) {
    const double r = g.leg_length * std::sin(theta);
    const auto ik = ta::inverse_kinematics(ta::TilePose(0.0, 0.0, r), g);
    ASSERT_TRUE(ik.has_value()) << "theta " << theta;
    for (int leg = 0; leg < 3; ++leg) EXPECT_NEAR(ik->theta[leg], theta, 1e-9);
  }
}

TEST(InverseKinematics, BoundaryAcceptedBeyondRejected) {
  const ta::TileGeometry g = geom();
  const double reach = g.leg_length * std::sin(g.theta_max);  // 131.5569669100272
  const auto at_limit = ta::inverse_kinematics(ta::TilePose(0.0, 0.0, reach), g);
  ASSERT_TRUE(at_limit.has_value());
  for (int leg = 0; leg < 3; ++leg) EXPECT_NEAR(at_limit->theta[leg], g.theta_max, 1e-9);

  EXPECT_FALSE(ta::inverse_kinematics(ta::TilePose(0.0, 0.0, reach + 1e-3), g).has_value());
  EXPECT_FALSE(ta::inverse_kinematics(ta::TilePose(0.0, 0.0, reach + 10.0), g).has_value());
  EXPECT_FALSE(ta::inverse_kinematics(ta::TilePose(0.0, 0.0, 139.9), g).has_value());
}

TEST(InverseKinematics, ResultsCloseChainsOnRandomPoses) {
  const ta::TileGeometry g = geom();
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> ud(0.0, ta::kTwoPi), up(0.0, 1.2), ur(15.0, 131.0);
  int feasible = 0;
  for (int i = 0; i < 2000; ++i) {
    const ta::TilePose p(ud(rng), up(rng), ur(rng));
    const auto ik = ta::inverse_kinematics(p, g);
    if (!ik) continue;
    ++feasible;
    expect_closes_chain(p, *ik, g, 1e-9);
    for (int leg = 0; leg < 3; ++leg) {
      EXPECT_GE(ik->theta[leg], g.theta_min);
      EXPECT_LE(ik->theta[leg], g.theta_max);
    }
  }
  EXPECT_GT(feasible, 300);
}

TEST(InverseKinematics, ThreeFoldSymmetry) {
  const ta::TileGeometry g = geom();
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> ud(0.0, ta::kTwoPi), up(0.0, 1.2), ur(15.0, 131.0);
  for (int i = 0; i < 1500; ++i) {
    const ta::TilePose p(ud(rng), up(rng), ur(rng));
    const ta::TilePose q(p.delta + 2.0 * ta::kPi / 3.0, p.phi, p.r);
    EXPECT_EQ(ta::pose_feasible(p, g), ta::pose_feasible(q, g))
        << "pose (" << p.delta << ", " << p.phi << ", " << p.r << ")";
  }
}

TEST(InverseKinematics, MirrorSymmetry) {
  // The leg layout is symmetric in y, so feasibility is invariant under
  // delta -> -delta.
  const ta::TileGeometry g = geom();
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> ud(0.0, ta::kTwoPi), up(0.0, 1.2), ur(15.0, 131.0);
  for (int i = 0; i < 1500; ++i) {
    const ta::TilePose p(ud(rng), up(rng), ur(rng));
    const ta::TilePose q(-p.delta, p.phi, p.r);
    EXPECT_EQ(ta::pose_feasible(p, g), ta::pose_feasible(q, g));
  }
}

// ---------------------------------------------------------------------------
// Forward kinematics
// ---------------------------------------------------------------------------

TEST(ForwardKinematics, SymmetricTriples) {
  const ta::TileGeometry g = geom();
  {
    ta::LegAngles a;
    a.theta = {ta::kPi / 4.0, ta::kPi / 4.0, ta::kPi / 4.0};
    const auto p = ta::forward_kinematics(a, g);
    ASSERT_TRUE(p.has_value());
    EXPECT_NEAR(p->delta, 0.0, 1e-9);
    EXPECT_NEAR(p->phi, 0.0, 1e-7);
    EXPECT_NEAR(p->r, 98.994949366116654, 1e-6);
  }
  {
    ta::LegAngles a;
    a.theta = {7.0 * ta::kPi / 18.0, 7.0 * ta::kPi / 18.0, 7.0 * ta::kPi / 18.0};
    const auto p = ta::forward_kinematics(a, g);
    ASSERT_TRUE(p.has_value());
    EXPECT_NEAR(p->phi, 0.0, 1e-7);
    EXPECT_NEAR(p->r, 131.556966910027, 1e-6);
  }
}

TEST(ForwardKinematics, RoundTripSinglePose) {
  const ta::TileGeometry g = geom();
  const ta::TilePose p(ta::kPi / 6.0, ta::kPi / 18.0, 95.0);
  const auto ik = ta::inverse_kinematics(p, g);
  ASSERT_TRUE(ik.has_value());
  const auto back = ta::forward_kinematics(*ik, g);
  ASSERT_TRUE(back.has_value());
  EXPECT_NEAR(back->delta, p.delta, 1e-6);
  EXPECT_NEAR(back->phi, p.phi, 1e-6);
  EXPECT_NEAR(back->r, p.r, 1e-6);
}

TEST(ForwardKinematics, RoundTripRandomPoses) {
  const ta::TileGeometry g = geom();
  std::mt19937 rng(19);
  std::uniform_real_distribution<double> ud(0.0, ta::kTwoPi), up(0.0, 1.1), ur(15.0, 131.0);
  int tested = 0;
  for (int i = 0; i < 400 && tested < 120; ++i) {
    const ta::TilePose p(ud(rng), up(rng), ur(rng));
    const auto ik = ta::inverse_kinematics(p, g);
    if (!ik) continue;
    ++tested;
    const auto back = ta::forward_kinematics(*ik, g);
    ASSERT_TRUE(back.has_value()) << "pose (" << p.delta << ", " << p.phi << ", " << p.r << ")";
    if (p.phi > 1e-9) EXPECT_NEAR(back->delta, p.delta, 1e-6);
    EXPECT_NEAR(back->phi, p.phi, 1e-6);
    EXPECT_NEAR(back->r, p.r, 1e-6);
  }
  EXPECT_GE(tested, 120);
}

TEST(ForwardKinematics, WarmSeedFollowsPath) {
  // Walking a continuous pose path with warm seeds must track without jumps.
  const ta::TileGeometry g = geom();
  ta::TilePose prev = ta::neutral_pose();
  for (int i = 0; i <= 60; ++i) {
    const double s = i / 60.0;
    const ta::TilePose p(1.0 + 0.8 * s, 0.05 + 0.5 * s, 90.0 - 30.0 * s);
    const auto ik = ta::inverse_kinematics(p, g);
    ASSERT_TRUE(ik.has_value());
    const auto back = ta::forward_kinematics(*ik, g, prev);
    ASSERT_TRUE(back.has_value());
    EXPECT_NEAR(back->delta, p.delta, 1e-6);
    EXPECT_NEAR(back->phi, p.phi, 1e-6);
    EXPECT_NEAR(back->r, p.r, 1e-6);
    prev = *back;
  }
}

int main(int argc, char** argv) {
  ::testing::InitGoogleTest(&argc, argv);
  return RUN_ALL_TESTS();
}
