#pragma once

// Seeded synthetic scene sweeps shared by the unit and acceptance suites.

#include <cmath>
#include <numbers>
#include <optional>
#include <random>

#include "trimark/camera.hpp"
#include "trimark/error.hpp"
#include "trimark/geometry.hpp"
#include "trimark/library.hpp"
#include "trimark/synth.hpp"

namespace trimark::testing {

inline CameraIntrinsics vga_camera() { return CameraIntrinsics{800.0, 800.0, 320.0, 240.0, 640, 480}; }

inline Mat3 rot_x(double a) { return rodrigues({a, 0.0, 0.0}); }
inline Mat3 rot_y(double a) { return rodrigues({0.0, a, 0.0}); }
inline Mat3 rot_z(double a) { return rodrigues({0.0, 0.0, a}); }
inline double deg(double d) { return d * std::numbers::pi / 180.0; }

/// Angle between the optical axis and the marker normal.
inline double incidence(const Pose& p) {
  const Vec3 n = p.rotation.column(2);
  return std::acos(std::clamp(std::abs(n.z), 0.0, 1.0));
}

struct SweepScene {
  ScenePose scene;
  double distance = 0.0;
  double incidence = 0.0;
};

/// Random pose with distance in [d_min, d_max], incidence in [0, max_incidence],
/// uniformly random in-plane rotation, marker fully inside the frame.
class SceneSweep {
 public:
  SceneSweep(std::uint64_t seed, double d_min = 0.4, double d_max = 1.0, double max_incidence = deg(60.0))
      : rng_(seed), d_min_(d_min), d_max_(d_max), max_incidence_(max_incidence) {}

  SweepScene next(const CameraIntrinsics& cam, const MarkerGeometry& geom, int template_id, double noise = 0.0) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (;;) {
      const double d = d_min_ + (d_max_ - d_min_) * unit(rng_);
      const double tilt = max_incidence_ * unit(rng_);
      const double tilt_dir = 2.0 * std::numbers::pi * unit(rng_);
      const double spin = 2.0 * std::numbers::pi * unit(rng_);
      const Vec3 axis{std::cos(tilt_dir), std::sin(tilt_dir), 0.0};
      Pose p;
      p.rotation = rodrigues(tilt * axis) * rot_z(spin);
      const double ox = (unit(rng_) - 0.5) * 0.5 * cam.width / cam.fx;
      const double oy = (unit(rng_) - 0.5) * 0.5 * cam.height / cam.fy;
      p.translation = {ox * d, oy * d, d};

      SweepScene out;
      out.scene.pose = p;
      out.scene.template_id = template_id;
      out.scene.background_level = 230;
      out.scene.noise_sigma = noise;
      out.scene.seed = rng_();
      out.distance = norm(p.translation);
      out.incidence = incidence(p);
      try {
        const auto px = project_marker(p, geom, cam);
        bool inside = true;
        for (const auto& q : px) inside = inside && q.x > 4 && q.y > 4 && q.x < cam.width - 4 && q.y < cam.height - 4;
        if (!inside) continue;
      } catch (const Error&) {
        continue;
      }
      return out;
    }
  }

 private:
  std::mt19937_64 rng_;
  double d_min_, d_max_, max_incidence_;
};

}  // namespace trimark::testing
