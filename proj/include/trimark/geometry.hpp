#pragma once

// Fixed-size linear algebra plus the triangle-frame pose mathematics:
// building an orthonormal frame from three points, the rotation aligning two
// such frames, and the 4x4 Theta packing of (rotation vector, translation).

#include <array>
#include <cmath>

namespace trimark {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  constexpr double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
};

constexpr Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
constexpr Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
constexpr Vec3 operator*(double s, const Vec3& a) { return {s * a.x, s * a.y, s * a.z}; }
constexpr Vec3 operator*(const Vec3& a, double s) { return s * a; }
constexpr Vec3 operator/(const Vec3& a, double s) { return {a.x / s, a.y / s, a.z / s}; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
bool is_finite(const Vec3& a);

/// Row-major 3x3 matrix, m[r][c].
struct Mat3 {
  std::array<std::array<double, 3>, 3> m{};

  static constexpr Mat3 identity() {
    Mat3 r;
    r.m[0][0] = r.m[1][1] = r.m[2][2] = 1.0;
    return r;
  }
  static constexpr Mat3 from_columns(const Vec3& c0, const Vec3& c1, const Vec3& c2) {
    Mat3 r;
    for (int i = 0; i < 3; ++i) {
      r.m[i][0] = c0[i];
      r.m[i][1] = c1[i];
      r.m[i][2] = c2[i];
    }
    return r;
  }

  constexpr std::array<double, 3>& operator[](int r) { return m[r]; }
  constexpr const std::array<double, 3>& operator[](int r) const { return m[r]; }

  constexpr Vec3 column(int c) const { return {m[0][c], m[1][c], m[2][c]}; }
};

Mat3 operator*(const Mat3& a, const Mat3& b);
Vec3 operator*(const Mat3& a, const Vec3& v);
Mat3 operator+(const Mat3& a, const Mat3& b);
Mat3 operator-(const Mat3& a, const Mat3& b);
Mat3 operator*(double s, const Mat3& a);

Mat3 transpose(const Mat3& a);
double determinant(const Mat3& a);
/// General inverse; throws SingularMatrix when |det| < 1e-12.
Mat3 inverse(const Mat3& a);
double frobenius_norm(const Mat3& a);
/// Skew-symmetric cross-product matrix [v]x.
Mat3 skew(const Vec3& v);
bool is_finite(const Mat3& a);
/// Orthonormal columns and det +1, both within `tol`.
bool is_rotation(const Mat3& r, double tol = 1e-9);

/// p_camera = rotation * p_marker + translation.
struct Pose {
  Mat3 rotation = Mat3::identity();
  Vec3 translation{};

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
};

Pose compose(const Pose& outer, const Pose& inner);
Pose inverse(const Pose& p);

struct Triangle {
  Vec3 p0, p1, p2;

  const Vec3& vertex(int i) const { return i == 0 ? p0 : (i == 1 ? p1 : p2); }
  Vec3 centroid() const { return (p0 + p1 + p2) / 3.0; }
  /// Un-normalized normal (p1 - p0) x (p2 - p0); its norm is twice the area.
  Vec3 normal() const { return cross(p1 - p0, p2 - p0); }
};

inline constexpr double kDefaultAreaEpsilon = 1e-12;

/// Which characteristic point of the triangle seeds the frame origin and
/// which vertex the first axis points at. Edge k joins vertex k and k+1 (mod 3).
struct AnchorChoice {
  enum class Kind { Vertex, Centroid, EdgeMidpoint };

  Kind kind = Kind::Vertex;
  int origin_index = 0;  // vertex index or edge index; unused for Centroid
  int target_vertex = 1;

  static AnchorChoice vertex(int i, int j) { return {Kind::Vertex, i, j}; }
  static AnchorChoice centroid(int j) { return {Kind::Centroid, 0, j}; }
  static AnchorChoice edge_midpoint(int edge, int j) { return {Kind::EdgeMidpoint, edge, j}; }

  /// The four named presets accepted by the CLI: v01, v12, centroid, midpoint.
  static std::array<AnchorChoice, 4> presets();

  bool operator==(const AnchorChoice&) const = default;
};

/// Throws InvalidArgument for out-of-range indices or Vertex(i, i).
void validate(const AnchorChoice& anchor);

struct Frame {
  Vec3 origin;
  Vec3 axis1, axis2, axis3;

  /// Orientation matrix with the axes as columns.
  Mat3 orientation() const { return Mat3::from_columns(axis1, axis2, axis3); }
};

bool is_valid_frame(const Frame& f, double tol = 1e-9);

/// axis1 toward the anchor target, axis2 along the triangle normal,
/// axis3 = axis1 x axis2. Throws DegenerateTriangle.
Frame build_frame(const Triangle& tri, const AnchorChoice& anchor,
                  double area_epsilon = kDefaultAreaEpsilon);

/// Rotation R with R * M_A = M_B for two valid frames (uses M_A^T).
Mat3 frame_rotation(const Frame& a, const Frame& b);

/// R = B * A^-1 for arbitrary orientation matrices; throws SingularMatrix.
Mat3 orientation_transform(const Mat3& a, const Mat3& b);

Mat3 rodrigues(const Vec3& rotation_vector);

struct AxisAngle {
  Vec3 axis{0.0, 0.0, 1.0};
  double angle = 0.0;  // radians, [0, pi]
};

/// Inverse of rodrigues. Throws NotARotation if `r` fails a 1e-6 check.
AxisAngle axis_angle_from_rotation(const Mat3& r);
Vec3 rotation_vector(const Mat3& r);

/// Geodesic distance between two rotations, radians.
double rotation_angle_between(const Mat3& a, const Mat3& b);

/// Rows [0,-rz,ry,tx], [rz,0,-rx,ty], [-ry,rx,0,tz], [0,0,0,0] where
/// (rx,ry,rz) is the rotation vector.
struct Theta {
  std::array<std::array<double, 4>, 4> m{};

  Vec3 rotation_vector() const { return {m[2][1], m[0][2], m[1][0]}; }
  Vec3 translation() const { return {m[0][3], m[1][3], m[2][3]}; }
};

Theta theta_from_pose(const Pose& p);
/// Throws MalformedTheta if the 3x3 block is not skew-symmetric within 1e-9
/// or the bottom row is nonzero.
Pose pose_from_theta(const Theta& t);

}  // namespace trimark
