#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trimark/geometry.hpp"
#include "trimark/pose.hpp"

namespace trimark {

// JSON detection and pose records. Output is stable: keys sorted, doubles
// printed with the shortest round-trip representation, arrays of fixed length.

struct DetectionRecord {
  int frame = 0;
  int marker_id = 0;
  int rotation = 0;
  std::array<Point2, 4> corners{};  // quad vertex order
  int hamming = 0;
};

/// `pose` is absent for Lost records; `reprojection_rms` only for measured poses.
struct PoseRecord {
  int frame = 0;
  int marker_id = 0;
  TrackStatus status = TrackStatus::Tracked;
  std::optional<Pose> pose;
  std::optional<double> reprojection_rms;
};

std::string detections_to_json(const std::vector<DetectionRecord>& records);
std::vector<DetectionRecord> detections_from_json(std::string_view text);

std::string poses_to_json(const std::vector<PoseRecord>& records);
std::vector<PoseRecord> poses_from_json(std::string_view text);

}  // namespace trimark
