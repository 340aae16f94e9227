#include "trimark/pose.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "trimark/error.hpp"

namespace trimark {

namespace {

// Orthogonal polar factor, i.e. the rotation nearest in Frobenius norm for
// matrices with positive determinant.
Mat3 closest_rotation(Mat3 x) {
  for (int i = 0; i < 60; ++i) {
    const Mat3 next = 0.5 * (x + transpose(inverse(x)));
    const double delta = frobenius_norm(next - x);
    x = next;
    if (delta < 1e-15) break;
  }
  return x;
}

}  // namespace

int quad_vertex_for_corner(int corner, int rotation_index) { return (((corner - rotation_index) % 4) + 4) % 4; }

Backprojection backproject_marker(const Quad& quad, const MatchResult& match, const CameraIntrinsics& cam,
                                  const MarkerGeometry& geom) {
  validate(cam);
  if (!(geom.side > 0.0)) throw Error(ErrorCode::InvalidArgument, "marker side must be positive");

  const auto corners = geom.corners();
  std::array<Point2, 4> plane{}, pixels{};
  for (int j = 0; j < 4; ++j) {
    plane[j] = {corners[j].x, corners[j].y};
    pixels[j] = quad.vertices[quad_vertex_for_corner(j, match.rotation_index)];
  }
  const Homography h = homography_dlt(plane, pixels);
  const Mat3 g = inverse(cam.matrix()) * h.h;
  const Vec3 g1 = g.column(0), g2 = g.column(1), g3 = g.column(2);

  const double scale_sum = norm(g1) + norm(g2);
  if (!(scale_sum > 0.0)) throw Error(ErrorCode::DegenerateConfiguration, "homography has a null column");
  double lambda = 2.0 / scale_sum;
  if (lambda * g3.z < 0.0) lambda = -lambda;

  const Vec3 c1 = lambda * g1, c2 = lambda * g2;
  Backprojection out;
  out.pose.rotation = closest_rotation(Mat3::from_columns(c1, c2, cross(c1, c2)));
  out.pose.translation = lambda * g3;

  for (const auto& c : corners) {
    if (!(out.pose.apply(c).z > 0.0)) {
      throw Error(ErrorCode::BehindCamera, "decomposed marker pose puts a corner behind the camera");
    }
  }
  out.measured = {out.pose.apply(corners[0]), out.pose.apply(corners[1]), out.pose.apply(corners[2])};
  return out;
}

Pose estimate_pose(const Triangle& reference, const Triangle& measured, const AnchorChoice& anchor) {
  const Frame a = build_frame(reference, anchor);
  const Frame b = build_frame(measured, anchor);
  Pose p;
  p.rotation = frame_rotation(a, b);
  p.translation = b.origin - p.rotation * a.origin;
  return p;
}

double reprojection_rms(const Pose& pose, const Quad& quad, int rotation_index, const CameraIntrinsics& cam,
                        const MarkerGeometry& geom) {
  const auto corners = geom.corners();
  double sum = 0.0;
  for (int j = 0; j < 4; ++j) {
    const Point2 p = project_point(cam, pose.apply(corners[j]));
    const Point2& q = quad.vertices[quad_vertex_for_corner(j, rotation_index)];
    sum += (p.x - q.x) * (p.x - q.x) + (p.y - q.y) * (p.y - q.y);
  }
  return std::sqrt(sum / 4.0);
}

MarkerDetection marker_pose(const Quad& quad, const MatchResult& match, const CameraIntrinsics& cam,
                            const MarkerGeometry& geom, const AnchorChoice& anchor) {
  const Backprojection bp = backproject_marker(quad, match, cam, geom);
  const auto c = geom.corners();
  const Triangle reference{c[0], c[1], c[2]};

  MarkerDetection det;
  det.quad = quad;
  det.match = match;
  det.pose = estimate_pose(reference, bp.measured, anchor);
  det.reprojection_rms = reprojection_rms(det.pose, quad, match.rotation_index, cam, geom);
  return det;
}

Pose extrapolate_pose(std::span<const TimedPose> history, double t_query) {
  if (history.empty()) throw Error(ErrorCode::EmptyHistory, "cannot extrapolate from an empty history");
  for (std::size_t i = 1; i < history.size(); ++i) {
    if (!(history[i].timestamp > history[i - 1].timestamp))
      throw Error(ErrorCode::NonmonotonicTimestamps, "history timestamps must strictly increase");
  }
  const TimedPose& last = history.back();
  if (!(t_query >= last.timestamp))
    throw Error(ErrorCode::NonmonotonicTimestamps, "query time precedes the last observation");
  if (history.size() == 1) return last.pose;

  const TimedPose& prev = history[history.size() - 2];
  const double alpha = (t_query - last.timestamp) / (last.timestamp - prev.timestamp);

  const Mat3 step = last.pose.rotation * transpose(prev.pose.rotation);
  Pose out;
  out.rotation = rodrigues(alpha * rotation_vector(step)) * last.pose.rotation;
  out.translation = last.pose.translation + alpha * (last.pose.translation - prev.pose.translation);
  return out;
}

const char* to_string(TrackStatus s) noexcept {
  switch (s) {
    case TrackStatus::Tracked: return "Tracked";
    case TrackStatus::Coasting: return "Coasting";
    case TrackStatus::Lost: return "Lost";
  }
  return "Lost";
}

TrackState track_update(TrackState state, const std::optional<Pose>& detection, double timestamp) {
  if (state.last_timestamp && !(timestamp > *state.last_timestamp)) {
    throw Error(ErrorCode::NonmonotonicTimestamps, "track updates must have increasing timestamps");
  }
  state.last_timestamp = timestamp;

  if (detection) {
    if (state.status == TrackStatus::Lost) state.history.clear();
    state.history.push_back({timestamp, *detection});
    while (state.history.size() > std::max<std::size_t>(state.capacity, 2)) state.history.pop_front();
    state.status = TrackStatus::Tracked;
    state.frames_coasted = 0;
    state.output = *detection;
    return state;
  }

  if (state.status == TrackStatus::Lost || state.history.empty()) {
    state.status = TrackStatus::Lost;
    state.output.reset();
    return state;
  }

  ++state.frames_coasted;
  if (state.frames_coasted < state.max_coast) {
    const std::vector<TimedPose> hist(state.history.begin(), state.history.end());
    state.status = TrackStatus::Coasting;
    state.output = extrapolate_pose(hist, timestamp);
  } else {
    state.status = TrackStatus::Lost;
    state.output.reset();
  }
  return state;
}

}  // namespace trimark
