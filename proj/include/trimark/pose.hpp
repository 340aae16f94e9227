#pragma once

#include <deque>
#include <optional>
#include <span>

#include "trimark/camera.hpp"
#include "trimark/corners.hpp"
#include "trimark/geometry.hpp"
#include "trimark/registration.hpp"

namespace trimark {

struct Backprojection {
  Pose pose;           // from the planar homography decomposition
  Triangle measured;   // camera-space images of canonical corners 0, 1, 2
};

/// Quad vertex that shows canonical marker corner `corner` for a match with
/// the given rotation index.
int quad_vertex_for_corner(int corner, int rotation_index);

/// Planar homography decomposition against the known marker size. Throws
/// DegenerateConfiguration or BehindCamera.
Backprojection backproject_marker(const Quad& quad, const MatchResult& match, const CameraIntrinsics& cam,
                                  const MarkerGeometry& geom);

/// Builds the same kind of frame on both triangles and returns the rigid
/// motion taking `reference` onto `measured`.
Pose estimate_pose(const Triangle& reference, const Triangle& measured, const AnchorChoice& anchor);

struct MarkerDetection {
  Quad quad;
  MatchResult match;
  Pose pose;
  double reprojection_rms = 0.0;  // px, over all four corners
};

MarkerDetection marker_pose(const Quad& quad, const MatchResult& match, const CameraIntrinsics& cam,
                            const MarkerGeometry& geom, const AnchorChoice& anchor = AnchorChoice::vertex(0, 1));

double reprojection_rms(const Pose& pose, const Quad& quad, int rotation_index, const CameraIntrinsics& cam,
                        const MarkerGeometry& geom);

struct TimedPose {
  double timestamp = 0.0;
  Pose pose;
};

/// Zero-order hold for one entry; otherwise linear in translation and in
/// rotation-vector space, from the last two entries. Throws EmptyHistory or
/// NonmonotonicTimestamps.
Pose extrapolate_pose(std::span<const TimedPose> history, double t_query);

enum class TrackStatus { Tracked, Coasting, Lost };

const char* to_string(TrackStatus s) noexcept;

/// Single-owner per-marker track. `output` is the pose emitted by the last
/// update (absent when Lost).
struct TrackState {
  int marker_id = 0;
  std::deque<TimedPose> history;
  std::size_t capacity = 3;
  int max_coast = 5;
  int frames_coasted = 0;
  TrackStatus status = TrackStatus::Lost;
  std::optional<double> last_timestamp;
  std::optional<Pose> output;
};

/// A detection pushes its pose (restarting the history after Lost). A miss
/// coasts on the extrapolated pose until max_coast consecutive misses have
/// been seen, then the track is Lost. Throws NonmonotonicTimestamps.
TrackState track_update(TrackState state, const std::optional<Pose>& detection, double timestamp);

}  // namespace trimark
