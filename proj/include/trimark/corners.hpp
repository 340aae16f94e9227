#pragma once

#include <array>
#include <string>
#include <vector>

#include "trimark/geometry.hpp"
#include "trimark/image.hpp"
#include "trimark/imgproc.hpp"

namespace trimark {

struct CornernessMap {
  int width = 0;
  int height = 0;
  std::vector<double> response;

  double at(int x, int y) const { return response[static_cast<std::size_t>(y) * width + x]; }
};

struct HarrisParams {
  double window_sigma = 1.0;
  double k = 0.04;
};

/// Harris response det(M) - k trace(M)^2 with Sobel gradients (scaled by 1/8,
/// i.e. intensity per pixel) and a Gaussian window truncated at 3 sigma.
/// Pixels whose kernels leave the image get 0. Throws ImageTooSmall below 3x3.
CornernessMap harris_response(const GrayImage& img, const HarrisParams& params = {});

/// A local maximum of the corner-ness map. (x, y) is the subpixel position in
/// pixel-index coordinates (pixel centers at integers); (px, py) is the pixel
/// that won suppression.
struct Corner {
  double x = 0.0;
  double y = 0.0;
  double response = 0.0;
  int px = 0;
  int py = 0;
};

/// Non-maximum suppression over a Chebyshev window plus per-axis parabolic
/// refinement (clamped to +-0.5 px). Equal responses: the row-major earlier
/// pixel survives. Sorted by descending response.
std::vector<Corner> local_maxima(const CornernessMap& map, int radius, double min_response);

/// Four vertices in continuous image coordinates, counter-clockwise in the
/// (x right, y down) frame, i.e. positive shoelace area, starting at the
/// vertex with the smallest (y, x).
struct Quad {
  std::array<Point2, 4> vertices{};
  int component_label = 0;
};

struct QuadParams {
  int min_area = 64;
  int max_area = 0;  // 0: no upper bound
  double association_radius = 2.0;
  // Corners farther than this from the component's convex hull are interior
  // pattern corners, not outline corners.
  double hull_tolerance = 2.5;
  double min_vertex_separation = 2.0;
};

struct QuadDiagnostic {
  int component_label = 0;
  std::string reason;
};

struct QuadExtraction {
  std::vector<Quad> quads;
  std::vector<QuadDiagnostic> skipped;
};

QuadExtraction extract_quads(const LabelMap& labels, const std::vector<Corner>& corners,
                             const QuadParams& params = {});

struct RefineParams {
  int half_window = 3;
  int iterations = 5;
  double max_shift = 3.0;  // px; larger moves are rejected
};

/// Gradient-orthogonality refinement of a corner estimate (continuous image
/// coordinates): the point minimizing sum w_i (g_i . (q - p_i))^2 over a
/// Gaussian-weighted window, i.e. the least-squares intersection of the edge
/// lines through the window. Returns `guess` if the system is singular or the
/// estimate drifts beyond max_shift.
Point2 refine_corner(const GrayImage& img, Point2 guess, const RefineParams& params = {});

/// Orders four points per the Quad convention and checks convexity and
/// vertex separation. Returns false if the points cannot form a valid quad.
bool order_quad(std::array<Point2, 4>& pts, double min_separation = 2.0);

double signed_area(const std::array<Point2, 4>& pts);

}  // namespace trimark
