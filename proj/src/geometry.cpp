#include "trimark/geometry.hpp"

#include <algorithm>
#include <string>

#include "trimark/error.hpp"

namespace trimark {

bool is_finite(const Vec3& a) { return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z); }

Mat3 operator*(const Mat3& a, const Mat3& b) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.m[i][j] = a.m[i][0] * b.m[0][j] + a.m[i][1] * b.m[1][j] + a.m[i][2] * b.m[2][j];
  return r;
}

Vec3 operator*(const Mat3& a, const Vec3& v) {
  return {a.m[0][0] * v.x + a.m[0][1] * v.y + a.m[0][2] * v.z,
          a.m[1][0] * v.x + a.m[1][1] * v.y + a.m[1][2] * v.z,
          a.m[2][0] * v.x + a.m[2][1] * v.y + a.m[2][2] * v.z};
}

Mat3 operator+(const Mat3& a, const Mat3& b) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.m[i][j] = a.m[i][j] + b.m[i][j];
  return r;
}

Mat3 operator-(const Mat3& a, const Mat3& b) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.m[i][j] = a.m[i][j] - b.m[i][j];
  return r;
}

Mat3 operator*(double s, const Mat3& a) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.m[i][j] = s * a.m[i][j];
  return r;
}

Mat3 transpose(const Mat3& a) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.m[i][j] = a.m[j][i];
  return r;
}

double determinant(const Mat3& a) {
  const auto& m = a.m;
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

Mat3 inverse(const Mat3& a) {
  const double det = determinant(a);
  if (!(std::abs(det) >= 1e-12)) {
    throw Error(ErrorCode::SingularMatrix, "matrix determinant " + std::to_string(det) + " is below 1e-12");
  }
  const auto& m = a.m;
  Mat3 r;
  r.m[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / det;
  r.m[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det;
  r.m[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det;
  r.m[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / det;
  r.m[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
  r.m[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det;
  r.m[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / det;
  r.m[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / det;
  r.m[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;
  return r;
}

double frobenius_norm(const Mat3& a) {
  double s = 0.0;
  for (const auto& row : a.m)
    for (double v : row) s += v * v;
  return std::sqrt(s);
}

Mat3 skew(const Vec3& v) {
  Mat3 r;
  r.m[0][1] = -v.z;
  r.m[0][2] = v.y;
  r.m[1][0] = v.z;
  r.m[1][2] = -v.x;
  r.m[2][0] = -v.y;
  r.m[2][1] = v.x;
  return r;
}

bool is_finite(const Mat3& a) {
  for (const auto& row : a.m)
    for (double v : row)
      if (!std::isfinite(v)) return false;
  return true;
}

bool is_rotation(const Mat3& r, double tol) {
  if (!is_finite(r)) return false;
  const Mat3 g = transpose(r) * r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (std::abs(g.m[i][j] - (i == j ? 1.0 : 0.0)) > tol) return false;
  return std::abs(determinant(r) - 1.0) <= tol;
}

Pose compose(const Pose& outer, const Pose& inner) {
  return {outer.rotation * inner.rotation, outer.rotation * inner.translation + outer.translation};
}

Pose inverse(const Pose& p) {
  const Mat3 rt = transpose(p.rotation);
  return {rt, -(rt * p.translation)};
}

std::array<AnchorChoice, 4> AnchorChoice::presets() {
  return {vertex(0, 1), vertex(1, 2), centroid(0), edge_midpoint(0, 2)};
}

void validate(const AnchorChoice& anchor) {
  auto in_range = [](int i) { return i >= 0 && i < 3; };
  if (!in_range(anchor.target_vertex)) {
    throw Error(ErrorCode::InvalidArgument, "anchor target vertex out of range");
  }
  if (anchor.kind != AnchorChoice::Kind::Centroid && !in_range(anchor.origin_index)) {
    throw Error(ErrorCode::InvalidArgument, "anchor origin index out of range");
  }
  if (anchor.kind == AnchorChoice::Kind::Vertex && anchor.origin_index == anchor.target_vertex) {
    throw Error(ErrorCode::InvalidArgument, "vertex anchor needs two distinct vertices");
  }
}

bool is_valid_frame(const Frame& f, double tol) {
  const Vec3 axes[3] = {f.axis1, f.axis2, f.axis3};
  for (const auto& a : axes)
    if (!is_finite(a) || std::abs(norm(a) - 1.0) > tol) return false;
  if (std::abs(dot(f.axis1, f.axis2)) > tol || std::abs(dot(f.axis1, f.axis3)) > tol ||
      std::abs(dot(f.axis2, f.axis3)) > tol)
    return false;
  return std::abs(determinant(f.orientation()) - 1.0) <= tol && is_finite(f.origin);
}

Frame build_frame(const Triangle& tri, const AnchorChoice& anchor, double area_epsilon) {
  validate(anchor);
  const Vec3 n = tri.normal();
  const double n_len = norm(n);
  if (!(n_len > area_epsilon)) {
    throw Error(ErrorCode::DegenerateTriangle, "triangle area is below epsilon");
  }

  Frame f;
  switch (anchor.kind) {
    case AnchorChoice::Kind::Vertex: f.origin = tri.vertex(anchor.origin_index); break;
    case AnchorChoice::Kind::Centroid: f.origin = tri.centroid(); break;
    case AnchorChoice::Kind::EdgeMidpoint:
      f.origin = 0.5 * (tri.vertex(anchor.origin_index) + tri.vertex((anchor.origin_index + 1) % 3));
      break;
  }

  f.axis2 = n / n_len;
  // The target lies in the triangle plane, so this projection only removes
  // rounding error and keeps axis1 exactly orthogonal to the normal.
  Vec3 d = tri.vertex(anchor.target_vertex) - f.origin;
  d = d - dot(d, f.axis2) * f.axis2;
  const double d_len = norm(d);
  if (!(d_len > 1e-12)) {
    throw Error(ErrorCode::DegenerateTriangle, "first axis has zero length");
  }
  f.axis1 = d / d_len;
  f.axis3 = cross(f.axis1, f.axis2);
  return f;
}

Mat3 frame_rotation(const Frame& a, const Frame& b) { return b.orientation() * transpose(a.orientation()); }

Mat3 orientation_transform(const Mat3& a, const Mat3& b) { return b * inverse(a); }

Mat3 rodrigues(const Vec3& rotation_vector) {
  const double angle = norm(rotation_vector);
  const Mat3 k = skew(rotation_vector);
  if (angle < 1e-9) {
    return Mat3::identity() + k + 0.5 * (k * k);
  }
  const Mat3 ku = (1.0 / angle) * k;
  return Mat3::identity() + std::sin(angle) * ku + (1.0 - std::cos(angle)) * (ku * ku);
}

namespace {

// (R - R^T) vee = 2 sin(angle) axis
Vec3 antisymmetric_part(const Mat3& r) {
  return {r.m[2][1] - r.m[1][2], r.m[0][2] - r.m[2][0], r.m[1][0] - r.m[0][1]};
}

double angle_of(const Mat3& r) {
  const double s = 0.5 * norm(antisymmetric_part(r));
  const double c = 0.5 * (r.m[0][0] + r.m[1][1] + r.m[2][2] - 1.0);
  return std::atan2(s, c);
}

}  // namespace

AxisAngle axis_angle_from_rotation(const Mat3& r) {
  if (!is_rotation(r, 1e-6)) {
    throw Error(ErrorCode::NotARotation, "matrix is not orthonormal with det +1");
  }
  const Vec3 w = antisymmetric_part(r);
  const double angle = angle_of(r);
  if (angle < 1e-12) return {};

  const double c = std::cos(angle);
  if (c > -0.5) {
    return {w / norm(w), angle};
  }

  // Near pi the antisymmetric part vanishes; read the axis from the
  // symmetric part instead: (R + R^T)/2 = c I + (1 - c) a a^T.
  Mat3 aat;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      aat.m[i][j] = (0.5 * (r.m[i][j] + r.m[j][i]) - (i == j ? c : 0.0)) / (1.0 - c);
  int k = 0;
  for (int i = 1; i < 3; ++i)
    if (aat.m[i][i] > aat.m[k][k]) k = i;
  const double ak = std::sqrt(std::max(aat.m[k][k], 0.0));
  Vec3 axis;
  for (int i = 0; i < 3; ++i) axis[i] = (i == k) ? ak : aat.m[i][k] / ak;
  axis = axis / norm(axis);
  if (dot(axis, w) < 0.0) axis = -axis;
  return {axis, angle};
}

Vec3 rotation_vector(const Mat3& r) {
  const AxisAngle aa = axis_angle_from_rotation(r);
  return aa.angle * aa.axis;
}

double rotation_angle_between(const Mat3& a, const Mat3& b) { return angle_of(transpose(a) * b); }

Theta theta_from_pose(const Pose& p) {
  const Vec3 r = rotation_vector(p.rotation);
  Theta t;
  t.m[0] = {0.0, -r.z, r.y, p.translation.x};
  t.m[1] = {r.z, 0.0, -r.x, p.translation.y};
  t.m[2] = {-r.y, r.x, 0.0, p.translation.z};
  t.m[3] = {0.0, 0.0, 0.0, 0.0};
  return t;
}

Pose pose_from_theta(const Theta& t) {
  constexpr double tol = 1e-9;
  for (int i = 0; i < 3; ++i) {
    if (std::abs(t.m[i][i]) > tol) throw Error(ErrorCode::MalformedTheta, "nonzero diagonal in rotation block");
    for (int j = i + 1; j < 3; ++j)
      if (std::abs(t.m[i][j] + t.m[j][i]) > tol)
        throw Error(ErrorCode::MalformedTheta, "rotation block is not skew-symmetric");
  }
  for (int j = 0; j < 4; ++j)
    if (std::abs(t.m[3][j]) > tol) throw Error(ErrorCode::MalformedTheta, "bottom row must be zero");

  const Vec3 r{0.5 * (t.m[2][1] - t.m[1][2]), 0.5 * (t.m[0][2] - t.m[2][0]), 0.5 * (t.m[1][0] - t.m[0][1])};
  return {rodrigues(r), t.translation()};
}

}  // namespace trimark
