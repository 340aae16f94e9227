#pragma once

#include <cstdint>

#include "trimark/camera.hpp"
#include "trimark/geometry.hpp"
#include "trimark/image.hpp"
#include "trimark/registration.hpp"

namespace trimark {

struct ScenePose {
  Pose pose;  // marker -> camera
  int template_id = 0;
  std::uint8_t background_level = 230;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
};

inline constexpr std::uint8_t kDarkCellLevel = 20;
inline constexpr std::uint8_t kLightCellLevel = 235;

/// Renders the template on a flat background through a pinhole camera with
/// 2x2 supersampling, then adds seeded Gaussian noise. Throws BehindCamera,
/// MarkerOutOfFrame (corner within 2 px of the border) or MarkerTooSmall
/// (projected area under 400 px^2).
GrayImage render_marker(const ScenePose& scene, const MarkerTemplate& tmpl, const MarkerGeometry& geom,
                        const CameraIntrinsics& cam);

/// Background-only frame with the same noise model.
GrayImage render_blank(const CameraIntrinsics& cam, std::uint8_t background_level, double noise_sigma = 0.0,
                       std::uint64_t seed = 0);

/// Analytic image positions of the four canonical marker corners.
std::array<Point2, 4> project_marker(const Pose& pose, const MarkerGeometry& geom, const CameraIntrinsics& cam);

}  // namespace trimark
