#include "trimark/camera.hpp"

#include <cmath>

#include "trimark/error.hpp"

namespace trimark {

Mat3 CameraIntrinsics::matrix() const {
  Mat3 k;
  k.m[0] = {fx, 0.0, cx};
  k.m[1] = {0.0, fy, cy};
  k.m[2] = {0.0, 0.0, 1.0};
  return k;
}

void validate(const CameraIntrinsics& cam) {
  if (!(cam.fx > 0.0) || !(cam.fy > 0.0) || !std::isfinite(cam.fx) || !std::isfinite(cam.fy))
    throw Error(ErrorCode::InvalidArgument, "camera fx and fy must be positive and finite");
  if (cam.width < 1 || cam.height < 1) throw Error(ErrorCode::InvalidArgument, "image size must be positive");
  if (!(cam.cx >= 0.0 && cam.cx < cam.width) || !(cam.cy >= 0.0 && cam.cy < cam.height))
    throw Error(ErrorCode::InvalidArgument, "principal point must lie inside the image");
}

std::array<Vec3, 4> MarkerGeometry::corners() const {
  const double h = 0.5 * side;
  return {Vec3{-h, -h, 0.0}, Vec3{h, -h, 0.0}, Vec3{h, h, 0.0}, Vec3{-h, h, 0.0}};
}

Point2 project_point(const CameraIntrinsics& cam, const Vec3& p) {
  if (!(p.z > 1e-9)) throw Error(ErrorCode::BehindCamera, "point is not in front of the camera");
  return {cam.fx * p.x / p.z + cam.cx, cam.fy * p.y / p.z + cam.cy};
}

}  // namespace trimark
