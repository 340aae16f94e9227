#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "scenes.hpp"
#include "trimark/error.hpp"
#include "trimark/geometry.hpp"

using namespace trimark;
using trimark::testing::rot_z;

namespace {

constexpr double kPi = std::numbers::pi;

void expect_vec(const Vec3& a, const Vec3& b, double tol) {
  EXPECT_NEAR(a.x, b.x, tol);
  EXPECT_NEAR(a.y, b.y, tol);
  EXPECT_NEAR(a.z, b.z, tol);
}

void expect_mat(const Mat3& a, const Mat3& b, double tol) {
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) EXPECT_NEAR(a.m[r][c], b.m[r][c], tol) << "at " << r << "," << c;
}

Mat3 rz90() {
  Mat3 m;
  m.m = {{{0, -1, 0}, {1, 0, 0}, {0, 0, 1}}};
  return m;
}

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  for (;;) {
    Vec3 v{n(rng), n(rng), n(rng)};
    const double len = norm(v);
    if (len > 1e-6) return v / len;
  }
}

Mat3 random_rotation(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, kPi);
  return rodrigues(angle(rng) * random_unit(rng));
}

// Independent Rodrigues: R = cI + s[k]x + (1-c) k k^T, written out elementwise.
Mat3 rodrigues_oracle(const Vec3& axis, double angle) {
  const double c = std::cos(angle), s = std::sin(angle), v = 1.0 - c;
  const double x = axis.x, y = axis.y, z = axis.z;
  Mat3 r;
  r.m = {{{c + x * x * v, x * y * v - z * s, x * z * v + y * s},
          {y * x * v + z * s, c + y * y * v, y * z * v - x * s},
          {z * x * v - y * s, z * y * v + x * s, c + z * z * v}}};
  return r;
}

}  // namespace

TEST(BuildFrame, RightAngleTriangleVertexAnchor) {
  const Triangle tri{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  const Frame f = build_frame(tri, AnchorChoice::vertex(0, 1));
  expect_vec(f.origin, {0, 0, 0}, 1e-15);
  expect_vec(f.axis1, {1, 0, 0}, 1e-15);
  expect_vec(f.axis2, {0, 0, 1}, 1e-15);
  expect_vec(f.axis3, {0, -1, 0}, 1e-15);
  EXPECT_TRUE(is_valid_frame(f));
}

TEST(BuildFrame, CollinearIsDegenerate) {
  const Triangle tri{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
  for (const auto& a : AnchorChoice::presets()) {
    try {
      build_frame(tri, a);
      FAIL() << "expected DegenerateTriangle";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::DegenerateTriangle);
    }
  }
}

TEST(BuildFrame, CentroidAnchor) {
  const Triangle tri{{0, 0, 0}, {2, 0, 0}, {0, 2, 0}};
  const Frame f = build_frame(tri, AnchorChoice::centroid(0));
  expect_vec(f.origin, {2.0 / 3.0, 2.0 / 3.0, 0}, 1e-15);
  expect_vec(f.axis1, {-std::sqrt(0.5), -std::sqrt(0.5), 0}, 1e-15);
  EXPECT_TRUE(is_valid_frame(f));
}

TEST(BuildFrame, EdgeMidpointAnchor) {
  const Triangle tri{{0, 0, 0}, {2, 0, 0}, {0, 2, 0}};
  const Frame f = build_frame(tri, AnchorChoice::edge_midpoint(0, 2));
  expect_vec(f.origin, {1, 0, 0}, 1e-15);
  expect_vec(f.axis1, {-1 / std::sqrt(5.0), 2 / std::sqrt(5.0), 0}, 1e-15);
}

TEST(BuildFrame, InvalidAnchorsRejected) {
  EXPECT_THROW(validate(AnchorChoice::vertex(1, 1)), Error);
  EXPECT_THROW(validate(AnchorChoice::vertex(0, 3)), Error);
  EXPECT_THROW(validate(AnchorChoice::edge_midpoint(3, 0)), Error);
  EXPECT_NO_THROW(validate(AnchorChoice::edge_midpoint(2, 1)));
}

TEST(BuildFrame, AxesInvariantUnderScaling) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 50; ++i) {
    const Triangle tri{{u(rng), u(rng), u(rng)}, {u(rng), u(rng), u(rng)}, {u(rng), u(rng), u(rng)}};
    for (const auto& a : AnchorChoice::presets()) {
      const Frame f = build_frame(tri, a);
      const double s = 0.1 + 5.0 * (u(rng) + 1.0);
      const Triangle scaled{f.origin + s * (tri.p0 - f.origin), f.origin + s * (tri.p1 - f.origin),
                            f.origin + s * (tri.p2 - f.origin)};
      const Frame g = build_frame(scaled, a);
      expect_vec(g.axis1, f.axis1, 1e-9);
      expect_vec(g.axis2, f.axis2, 1e-9);
      expect_vec(g.axis3, f.axis3, 1e-9);
    }
  }
}

TEST(FrameRotation, SameFrameIsIdentity) {
  const Frame f{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  expect_mat(frame_rotation(f, f), Mat3::identity(), 1e-15);
}

TEST(FrameRotation, QuarterTurnAboutZ) {
  const Frame a{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  const Mat3 r = rz90();
  const Frame b{{0, 0, 0}, r * a.axis1, r * a.axis2, r * a.axis3};
  expect_mat(frame_rotation(a, b), r, 1e-15);
  expect_mat(orientation_transform(a.orientation(), b.orientation()), r, 1e-15);
}

TEST(FrameRotation, GeneralPathSingular) {
  try {
    orientation_transform(Mat3{}, Mat3::identity());
    FAIL() << "expected SingularMatrix";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularMatrix);
  }
}

TEST(FrameRotation, RandomFramesProperties) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 200; ++i) {
    const Triangle ta{{u(rng), u(rng), u(rng)}, {u(rng), u(rng), u(rng)}, {u(rng), u(rng), u(rng)}};
    const Triangle tb{{u(rng), u(rng), u(rng)}, {u(rng), u(rng), u(rng)}, {u(rng), u(rng), u(rng)}};
    const AnchorChoice anchor = AnchorChoice::presets()[i % 4];
    const Frame a = build_frame(ta, anchor), b = build_frame(tb, anchor);
    const Mat3 r = frame_rotation(a, b);
    EXPECT_TRUE(is_rotation(r, 1e-9));
    expect_mat(r * a.orientation(), b.orientation(), 1e-9);
    expect_mat(frame_rotation(a, a), Mat3::identity(), 1e-12);
    expect_mat(orientation_transform(a.orientation(), b.orientation()), r, 1e-9);
  }
}

TEST(Rodrigues, Examples) {
  expect_mat(rodrigues({0, 0, 0}), Mat3::identity(), 0.0);
  expect_mat(rodrigues({0, 0, kPi / 2}), rz90(), 1e-15);
}

TEST(Rodrigues, MatchesOracleAndIsOrthonormal) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> angle(-2 * kPi, 2 * kPi);
  for (int i = 0; i < 500; ++i) {
    const Vec3 axis = random_unit(rng);
    const double a = angle(rng);
    const Mat3 r = rodrigues(a * axis);
    expect_mat(r, rodrigues_oracle(axis, a), 1e-12);
    expect_mat(transpose(r) * r, Mat3::identity(), 1e-12);
  }
}

TEST(Rodrigues, TinyAngleSeries) {
  const Vec3 v{3e-10, -2e-10, 1e-10};
  const Mat3 r = rodrigues(v);
  expect_mat(r, Mat3::identity() + skew(v), 1e-18);
}

TEST(AxisAngle, Examples) {
  AxisAngle aa = axis_angle_from_rotation(Mat3::identity());
  expect_vec(aa.axis, {0, 0, 1}, 0.0);
  EXPECT_EQ(aa.angle, 0.0);

  aa = axis_angle_from_rotation(rz90());
  expect_vec(aa.axis, {0, 0, 1}, 1e-15);
  EXPECT_NEAR(aa.angle, kPi / 2, 1e-15);

  Mat3 flip;
  flip.m = {{{1, 0, 0}, {0, -1, 0}, {0, 0, -1}}};
  aa = axis_angle_from_rotation(flip);
  expect_vec(aa.axis, {1, 0, 0}, 1e-15);
  EXPECT_NEAR(aa.angle, kPi, 1e-15);
}

TEST(AxisAngle, RejectsNonRotation) {
  Mat3 m = Mat3::identity();
  m.m[0][0] = -1.0;  // reflection
  try {
    axis_angle_from_rotation(m);
    FAIL() << "expected NotARotation";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotARotation);
  }
  EXPECT_THROW(axis_angle_from_rotation(2.0 * Mat3::identity()), Error);
}

TEST(AxisAngle, RoundTripIncludingHalfTurns) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> angle(0.0, kPi);
  for (int i = 0; i < 500; ++i) {
    const Vec3 axis = random_unit(rng);
    // Every fifth sample sits at or within 1e-7 of pi.
    const double a = i % 5 == 0 ? kPi - (i % 10 == 0 ? 0.0 : 1e-7) : angle(rng);
    const Mat3 r = rodrigues(a * axis);
    const AxisAngle aa = axis_angle_from_rotation(r);
    EXPECT_GE(aa.angle, 0.0);
    EXPECT_LE(aa.angle, kPi);
    expect_mat(rodrigues(aa.angle * aa.axis), r, 1e-6);
  }
}

TEST(Theta, IdentityIsZero) {
  const Theta t = theta_from_pose(Pose{});
  for (const auto& row : t.m)
    for (double v : row) EXPECT_EQ(v, 0.0);
}

TEST(Theta, QuarterTurnLayout) {
  Pose p;
  p.rotation = rot_z(kPi / 2);
  p.translation = {1, 2, 3};
  const Theta t = theta_from_pose(p);
  const double h = kPi / 2;
  const double expected[4][4] = {{0, -h, 0, 1}, {h, 0, 0, 2}, {0, 0, 0, 3}, {0, 0, 0, 0}};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) EXPECT_NEAR(t.m[r][c], expected[r][c], 1e-15) << r << "," << c;
}

TEST(Theta, RoundTrip) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int i = 0; i < 500; ++i) {
    Pose p;
    p.rotation = random_rotation(rng);
    p.translation = {u(rng), u(rng), u(rng)};
    const Pose q = pose_from_theta(theta_from_pose(p));
    expect_mat(q.rotation, p.rotation, 1e-9);
    expect_vec(q.translation, p.translation, 1e-15);
  }
}

TEST(Theta, MalformedRejected) {
  Theta t = theta_from_pose(Pose{});
  t.m[0][1] = 0.5;  // not mirrored
  try {
    pose_from_theta(t);
    FAIL() << "expected MalformedTheta";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MalformedTheta);
  }
  Theta u = theta_from_pose(Pose{});
  u.m[3][3] = 1.0;
  EXPECT_THROW(pose_from_theta(u), Error);
}

TEST(Matrix, InverseAndDeterminant) {
  Mat3 a;
  a.m = {{{2, 1, 0}, {0, 3, 1}, {1, 0, 4}}};
  EXPECT_NEAR(determinant(a), 25.0, 1e-12);
  expect_mat(a * inverse(a), Mat3::identity(), 1e-14);
}

TEST(PoseAlgebra, ComposeInverse) {
  std::mt19937_64 rng(29);
  Pose p;
  p.rotation = random_rotation(rng);
  p.translation = {0.3, -0.2, 1.5};
  const Pose id = compose(p, inverse(p));
  expect_mat(id.rotation, Mat3::identity(), 1e-14);
  expect_vec(id.translation, {0, 0, 0}, 1e-14);
}
