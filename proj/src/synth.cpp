#include "trimark/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "trimark/error.hpp"

namespace trimark {

std::array<Point2, 4> project_marker(const Pose& pose, const MarkerGeometry& geom, const CameraIntrinsics& cam) {
  const auto corners = geom.corners();
  std::array<Point2, 4> out{};
  for (int j = 0; j < 4; ++j) out[j] = project_point(cam, pose.apply(corners[j]));
  return out;
}

namespace {

void add_noise(GrayImage& img, const std::vector<double>& clean, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma > 0.0 ? sigma : 1.0);
  for (std::size_t i = 0; i < clean.size(); ++i) {
    const double v = sigma > 0.0 ? clean[i] + noise(rng) : clean[i];
    img.pixels[i] = static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
  }
}

}  // namespace

GrayImage render_blank(const CameraIntrinsics& cam, std::uint8_t background_level, double noise_sigma,
                       std::uint64_t seed) {
  validate(cam);
  GrayImage img(cam.width, cam.height);
  const std::vector<double> clean(img.pixels.size(), background_level);
  add_noise(img, clean, noise_sigma, seed);
  return img;
}

GrayImage render_marker(const ScenePose& scene, const MarkerTemplate& tmpl, const MarkerGeometry& geom,
                        const CameraIntrinsics& cam) {
  validate(cam);
  if (!(geom.side > 0.0)) throw Error(ErrorCode::InvalidArgument, "marker side must be positive");
  const int g = tmpl.cells.size;
  if (g < 1) throw Error(ErrorCode::InvalidArgument, "template has an empty grid");

  for (const auto& c : geom.corners()) {
    if (!(scene.pose.apply(c).z > 1e-9)) throw Error(ErrorCode::BehindCamera, "marker corner behind the camera");
  }
  const auto projected = project_marker(scene.pose, geom, cam);
  double u0 = projected[0].x, u1 = u0, v0 = projected[0].y, v1 = v0;
  for (const auto& p : projected) {
    if (!(p.x >= 2.0 && p.x <= cam.width - 2.0 && p.y >= 2.0 && p.y <= cam.height - 2.0)) {
      throw Error(ErrorCode::MarkerOutOfFrame, "projected marker corner is within 2 px of the border or outside");
    }
    u0 = std::min(u0, p.x);
    u1 = std::max(u1, p.x);
    v0 = std::min(v0, p.y);
    v1 = std::max(v1, p.y);
  }
  if (std::abs(signed_area(projected)) < 400.0) {
    throw Error(ErrorCode::MarkerTooSmall, "projected marker covers less than 400 px^2");
  }

  // Marker plane (x, y, 1) -> image is K [r1 r2 t]; invert it to go back.
  const Mat3& r = scene.pose.rotation;
  const Mat3 plane_to_image =
      cam.matrix() * Mat3::from_columns(r.column(0), r.column(1), scene.pose.translation);
  const Mat3 image_to_plane = inverse(plane_to_image);

  const double half = 0.5 * geom.side;
  auto sample = [&](double u, double v) -> double {
    const Vec3 q = image_to_plane * Vec3{u, v, 1.0};
    const double x = q.x / q.z, y = q.y / q.z;
    if (!(x >= -half && x < half && y >= -half && y < half)) return scene.background_level;
    if (!(scene.pose.apply({x, y, 0.0}).z > 0.0)) return scene.background_level;
    const int col = std::min(g - 1, static_cast<int>((x + half) / geom.side * g));
    const int row = std::min(g - 1, static_cast<int>((y + half) / geom.side * g));
    return tmpl.cells.at(row, col) ? kLightCellLevel : kDarkCellLevel;
  };

  GrayImage img(cam.width, cam.height);
  std::vector<double> clean(img.pixels.size(), scene.background_level);
  const int x_lo = std::max(0, static_cast<int>(std::floor(u0)) - 1);
  const int x_hi = std::min(cam.width - 1, static_cast<int>(std::ceil(u1)) + 1);
  const int y_lo = std::max(0, static_cast<int>(std::floor(v0)) - 1);
  const int y_hi = std::min(cam.height - 1, static_cast<int>(std::ceil(v1)) + 1);
  for (int y = y_lo; y <= y_hi; ++y) {
    for (int x = x_lo; x <= x_hi; ++x) {
      const double s = sample(x + 0.25, y + 0.25) + sample(x + 0.75, y + 0.25) + sample(x + 0.25, y + 0.75) +
                       sample(x + 0.75, y + 0.75);
      clean[static_cast<std::size_t>(y) * cam.width + x] = 0.25 * s;
    }
  }
  add_noise(img, clean, scene.noise_sigma, scene.seed);
  return img;
}

}  // namespace trimark
