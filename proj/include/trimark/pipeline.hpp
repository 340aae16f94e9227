#pragma once

#include <optional>
#include <vector>

#include "trimark/corners.hpp"
#include "trimark/geometry.hpp"
#include "trimark/image.hpp"
#include "trimark/imgproc.hpp"
#include "trimark/registration.hpp"

namespace trimark {

struct PipelineConfig {
  std::optional<int> threshold;  // empty: Otsu
  Connectivity connectivity = Connectivity::Eight;
  int min_area = 64;
  int max_area = 0;  // 0: a quarter of the image area
  HarrisParams harris;
  int nms_radius = 3;
  double min_response = 1000.0;
  double hull_tolerance = 2.5;
  bool refine_corners = true;
  RefineParams refine;
  int rectify_size = 64;
  int grid = 8;
  int tau = 0;
  AnchorChoice anchor = AnchorChoice::vertex(0, 1);
  int max_coast = 5;
  double marker_side = 0.1;  // meters
};

/// Throws InvalidArgument on out-of-range settings.
void validate(const PipelineConfig& cfg);

struct Detection {
  Quad quad;
  MatchResult match;
};

struct DetectionRun {
  std::vector<Detection> detections;
  std::vector<QuadDiagnostic> skipped;
  int threshold_used = 0;
  std::size_t corner_count = 0;
  std::size_t candidate_count = 0;
};

/// threshold -> label -> Harris -> quads -> rectify -> decode -> match.
DetectionRun detect_markers(const GrayImage& img, const std::vector<MarkerTemplate>& library,
                            const PipelineConfig& cfg = {});

}  // namespace trimark
