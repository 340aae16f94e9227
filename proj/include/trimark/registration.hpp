#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trimark/corners.hpp"
#include "trimark/error.hpp"
#include "trimark/geometry.hpp"
#include "trimark/image.hpp"

namespace trimark {

/// Projective map between planes, scaled so h[2][2] = 1 when it is not ~0.
struct Homography {
  Mat3 h = Mat3::identity();

  Point2 apply(const Point2& p) const;
  Homography inverse() const;
};

/// Exact 4-point DLT on Hartley-normalized coordinates. Throws
/// DegenerateConfiguration if three points of either set are collinear.
Homography homography_dlt(const std::array<Point2, 4>& src, const std::array<Point2, 4>& dst);

/// Square bit grid, row-major, row 0 at the top.
struct BitGrid {
  int size = 0;
  std::vector<std::uint8_t> bits;

  BitGrid() = default;
  explicit BitGrid(int g, std::uint8_t fill = 0) : size(g), bits(static_cast<std::size_t>(g) * g, fill) {}

  std::uint8_t at(int row, int col) const { return bits[static_cast<std::size_t>(row) * size + col]; }
  std::uint8_t& at(int row, int col) { return bits[static_cast<std::size_t>(row) * size + col]; }

  /// Rotated by `quarter_turns` x 90 degrees counter-clockwise as displayed.
  BitGrid rotated(int quarter_turns) const;

  bool operator==(const BitGrid&) const = default;
};

int hamming(const BitGrid& a, const BitGrid& b);

struct MarkerTemplate {
  int id = 0;
  BitGrid cells;
};

using MarkerCode = BitGrid;

struct MatchResult {
  int marker_id = 0;
  int rotation_index = 0;  // CCW quarter-turns applied to the template
  int hamming = 0;
};

/// Samples the quad interior onto an N x N square with bilinear interpolation;
/// samples falling outside the source are 255.
GrayImage rectify(const GrayImage& img, const Quad& quad, int out_size);

/// Mean of each cell's pixels, bit 1 if the mean is >= 128. Throws
/// GridTooFine when cells are narrower than 4 px.
MarkerCode decode_code(const GrayImage& rect, int grid);

/// Best (id, rotation) with Hamming distance <= tau, if any. Throws
/// GridMismatch when the code and library grids differ.
std::optional<MatchResult> match_template(const MarkerCode& code, const std::vector<MarkerTemplate>& library,
                                          int tau = 0);

struct LibraryIssue {
  ErrorCode code;
  std::size_t index_a = 0;  // offending template
  std::size_t index_b = 0;  // collision partner (== index_a for self-collisions)
  int rotation = 0;
  std::string message;
};

/// Library-wide invariants: grid >= 4, shared grid size, unique ids, black
/// border ring, and every distinct (template, rotation) pair more than
/// 2*tau apart. Returns the first violation.
std::optional<LibraryIssue> check_library(const std::vector<MarkerTemplate>& library, int tau = 0);

}  // namespace trimark
