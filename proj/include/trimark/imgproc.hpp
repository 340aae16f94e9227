#pragma once

#include <cstdint>
#include <vector>

#include "trimark/image.hpp"

namespace trimark {

/// BT.601 luma, rounded half up.
GrayImage to_grayscale(const RgbImage& img);
RgbImage to_rgb(const GrayImage& img);

/// 0 where pixel < t, 1 otherwise (equality maps to white).
BinaryImage threshold(const GrayImage& img, int t);

struct OtsuResult {
  int threshold = 0;
  bool degenerate = false;  // every pixel had this same value
};

/// Maximizes between-class variance for the split {v < t} / {v >= t};
/// ties go to the smaller t.
OtsuResult otsu_threshold(const GrayImage& img);

struct Component {
  int label = 0;
  int area = 0;
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // inclusive bbox
  double cx = 0.0, cy = 0.0;           // centroid, pixel-index coordinates
};

struct LabelMap {
  int width = 0;
  int height = 0;
  std::vector<std::int32_t> labels;  // 0 = background
  std::vector<Component> components;  // components[i].label == i + 1

  std::int32_t at(int x, int y) const { return labels[static_cast<std::size_t>(y) * width + x]; }
  const Component& component(int label) const { return components[label - 1]; }
};

enum class Connectivity { Four = 4, Eight = 8 };

/// Two-pass union-find labeling of pixels equal to `foreground`. Labels are
/// dense 1..N in row-major order of each component's first pixel.
LabelMap label_components(const BinaryImage& bin, std::uint8_t foreground = 0,
                          Connectivity connectivity = Connectivity::Eight);

}  // namespace trimark
