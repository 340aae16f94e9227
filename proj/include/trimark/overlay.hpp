#pragma once

#include "trimark/camera.hpp"
#include "trimark/geometry.hpp"
#include "trimark/image.hpp"

namespace trimark {

inline constexpr Rgb kRed{255, 0, 0};
inline constexpr Rgb kGreen{0, 255, 0};
inline constexpr Rgb kBlue{0, 0, 255};

/// Bresenham between the pixels containing a and b, clipped to the image.
void draw_line(RgbImage& img, Point2 a, Point2 b, Rgb color);

/// Marker outline (green), axis triad of length `side` (x red, y green,
/// z blue) and a wireframe cube of edge `cube_size` standing on the marker
/// on the camera-facing side (marker -z). Throws BehindCamera, drawing
/// nothing, if any vertex is not in front of the camera.
void draw_pose_overlay(RgbImage& img, const Pose& pose, const CameraIntrinsics& cam, const MarkerGeometry& geom,
                       double cube_size);

}  // namespace trimark
