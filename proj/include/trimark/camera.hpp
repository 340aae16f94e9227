#pragma once

#include <array>

#include "trimark/geometry.hpp"

namespace trimark {

/// Pinhole intrinsics in continuous pixel coordinates (see image.hpp).
struct CameraIntrinsics {
  double fx = 800.0;
  double fy = 800.0;
  double cx = 320.0;
  double cy = 240.0;
  int width = 640;
  int height = 480;

  Mat3 matrix() const;
};

/// Throws InvalidArgument unless fx, fy > 0 and the principal point is in the image.
void validate(const CameraIntrinsics& cam);

/// Square marker of side `side` meters centered at the marker-frame origin in
/// the z = 0 plane.
struct MarkerGeometry {
  double side = 0.1;

  /// (-s/2,-s/2,0), (s/2,-s/2,0), (s/2,s/2,0), (-s/2,s/2,0).
  std::array<Vec3, 4> corners() const;
};

/// u = fx x/z + cx, v = fy y/z + cy. Throws BehindCamera for z <= 1e-9.
Point2 project_point(const CameraIntrinsics& cam, const Vec3& p);

}  // namespace trimark
