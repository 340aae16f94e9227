#include "trimark/overlay.hpp"

#include <cmath>
#include <cstdlib>
#include <vector>

namespace trimark {

void draw_line(RgbImage& img, Point2 a, Point2 b, Rgb color) {
  // Continuous coordinates -> pixel indices.
  long x0 = std::lround(std::floor(a.x)), y0 = std::lround(std::floor(a.y));
  const long x1 = std::lround(std::floor(b.x)), y1 = std::lround(std::floor(b.y));
  const long dx = std::labs(x1 - x0), dy = -std::labs(y1 - y0);
  const long sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
  long err = dx + dy;
  for (;;) {
    if (x0 >= 0 && y0 >= 0 && x0 < img.width && y0 < img.height) img.set(static_cast<int>(x0), static_cast<int>(y0), color);
    if (x0 == x1 && y0 == y1) break;
    const long e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
}

void draw_pose_overlay(RgbImage& img, const Pose& pose, const CameraIntrinsics& cam, const MarkerGeometry& geom,
                       double cube_size) {
  const auto base = geom.corners();
  const double s = geom.side;

  std::vector<Vec3> points(base.begin(), base.end());  // 0..3 marker outline
  const double c = 0.5 * cube_size;
  for (double z : {0.0, -cube_size}) {  // 4..11 cube
    points.push_back({-c, -c, z});
    points.push_back({c, -c, z});
    points.push_back({c, c, z});
    points.push_back({-c, c, z});
  }
  points.push_back({0.0, 0.0, 0.0});  // 12 origin
  points.push_back({s, 0.0, 0.0});    // 13..15 axis tips
  points.push_back({0.0, s, 0.0});
  points.push_back({0.0, 0.0, s});

  // Project everything first so a bad pose draws nothing.
  std::vector<Point2> px;
  px.reserve(points.size());
  for (const auto& p : points) px.push_back(project_point(cam, pose.apply(p)));

  for (int i = 0; i < 4; ++i) {
    draw_line(img, px[4 + i], px[4 + (i + 1) % 4], kGreen);
    draw_line(img, px[8 + i], px[8 + (i + 1) % 4], kGreen);
    draw_line(img, px[4 + i], px[8 + i], kGreen);
  }
  draw_line(img, px[12], px[13], kRed);
  draw_line(img, px[12], px[14], kGreen);
  draw_line(img, px[12], px[15], kBlue);
  for (int i = 0; i < 4; ++i) draw_line(img, px[i], px[(i + 1) % 4], kGreen);
}

}  // namespace trimark
