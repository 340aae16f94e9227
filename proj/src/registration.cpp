#include "trimark/registration.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace trimark {

Point2 Homography::apply(const Point2& p) const {
  const auto& m = h.m;
  const double w = m[2][0] * p.x + m[2][1] * p.y + m[2][2];
  return {(m[0][0] * p.x + m[0][1] * p.y + m[0][2]) / w, (m[1][0] * p.x + m[1][1] * p.y + m[1][2]) / w};
}

namespace {

Mat3 normalize_scale(Mat3 m) {
  if (std::abs(m.m[2][2]) > 1e-12) m = (1.0 / m.m[2][2]) * m;
  return m;
}

void require_general_position(const std::array<Point2, 4>& pts, const char* which) {
  double x0 = pts[0].x, x1 = pts[0].x, y0 = pts[0].y, y1 = pts[0].y;
  for (const auto& p : pts) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw Error(ErrorCode::DegenerateConfiguration, std::string(which) + " points are not finite");
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  const double scale2 = (x1 - x0) * (x1 - x0) + (y1 - y0) * (y1 - y0);
  static constexpr int triples[4][3] = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
  for (const auto& t : triples) {
    const Point2 &a = pts[t[0]], &b = pts[t[1]], &c = pts[t[2]];
    const double cr = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    if (!(std::abs(cr) > 1e-9 * scale2)) {
      throw Error(ErrorCode::DegenerateConfiguration, std::string(which) + " has three collinear points");
    }
  }
}

// Translate to the centroid and scale the mean distance to sqrt(2).
Mat3 normalizing_transform(const std::array<Point2, 4>& pts) {
  double cx = 0.0, cy = 0.0;
  for (const auto& p : pts) {
    cx += 0.25 * p.x;
    cy += 0.25 * p.y;
  }
  double mean = 0.0;
  for (const auto& p : pts) mean += 0.25 * std::hypot(p.x - cx, p.y - cy);
  const double s = std::sqrt(2.0) / mean;
  Mat3 t;
  t.m[0] = {s, 0.0, -s * cx};
  t.m[1] = {0.0, s, -s * cy};
  t.m[2] = {0.0, 0.0, 1.0};
  return t;
}

Point2 transform(const Mat3& t, const Point2& p) {
  return {t.m[0][0] * p.x + t.m[0][1] * p.y + t.m[0][2], t.m[1][0] * p.x + t.m[1][1] * p.y + t.m[1][2]};
}

}  // namespace

Homography Homography::inverse() const { return {normalize_scale(trimark::inverse(h))}; }

Homography homography_dlt(const std::array<Point2, 4>& src, const std::array<Point2, 4>& dst) {
  require_general_position(src, "source quad");
  require_general_position(dst, "destination quad");

  const Mat3 ts = normalizing_transform(src);
  const Mat3 td = normalizing_transform(dst);

  // Eight equations in h00..h21 with h22 = 1.
  double a[8][9] = {};
  for (int i = 0; i < 4; ++i) {
    const Point2 p = transform(ts, src[i]);
    const Point2 q = transform(td, dst[i]);
    double* r0 = a[2 * i];
    double* r1 = a[2 * i + 1];
    r0[0] = p.x; r0[1] = p.y; r0[2] = 1.0;
    r0[6] = -q.x * p.x; r0[7] = -q.x * p.y; r0[8] = q.x;
    r1[3] = p.x; r1[4] = p.y; r1[5] = 1.0;
    r1[6] = -q.y * p.x; r1[7] = -q.y * p.y; r1[8] = q.y;
  }

  for (int col = 0; col < 8; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 8; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    if (!(std::abs(a[pivot][col]) > 1e-12)) {
      throw Error(ErrorCode::DegenerateConfiguration, "homography system is singular");
    }
    if (pivot != col)
      for (int c = 0; c < 9; ++c) std::swap(a[col][c], a[pivot][c]);
    for (int r = 0; r < 8; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (int c = col; c < 9; ++c) a[r][c] -= f * a[col][c];
    }
  }

  Mat3 hn;
  for (int i = 0; i < 8; ++i) hn.m[i / 3][i % 3] = a[i][8] / a[i][i];
  hn.m[2][2] = 1.0;

  const Mat3 h = trimark::inverse(td) * hn * ts;
  return {normalize_scale(h)};
}

BitGrid BitGrid::rotated(int quarter_turns) const {
  const int q = ((quarter_turns % 4) + 4) % 4;
  BitGrid cur = *this;
  for (int k = 0; k < q; ++k) {
    BitGrid next(size);
    for (int r = 0; r < size; ++r)
      for (int c = 0; c < size; ++c) next.at(r, c) = cur.at(c, size - 1 - r);
    cur = std::move(next);
  }
  return cur;
}

int hamming(const BitGrid& a, const BitGrid& b) {
  if (a.size != b.size) throw Error(ErrorCode::GridMismatch, "grids differ in size");
  int d = 0;
  for (std::size_t i = 0; i < a.bits.size(); ++i) d += a.bits[i] != b.bits[i];
  return d;
}

namespace {

double sample_bilinear(const GrayImage& img, double u, double v) {
  if (!(u >= 0.0 && v >= 0.0 && u <= img.width && v <= img.height)) return 255.0;
  const double x = u - 0.5, y = v - 0.5;
  const double fx0 = std::floor(x), fy0 = std::floor(y);
  const double ax = x - fx0, ay = y - fy0;
  const int x0 = std::clamp(static_cast<int>(fx0), 0, img.width - 1);
  const int x1 = std::clamp(static_cast<int>(fx0) + 1, 0, img.width - 1);
  const int y0 = std::clamp(static_cast<int>(fy0), 0, img.height - 1);
  const int y1 = std::clamp(static_cast<int>(fy0) + 1, 0, img.height - 1);
  const double top = (1.0 - ax) * img.at(x0, y0) + ax * img.at(x1, y0);
  const double bottom = (1.0 - ax) * img.at(x0, y1) + ax * img.at(x1, y1);
  return (1.0 - ay) * top + ay * bottom;
}

}  // namespace

GrayImage rectify(const GrayImage& img, const Quad& quad, int out_size) {
  if (out_size < 1) throw Error(ErrorCode::InvalidArgument, "rectified size must be positive");
  const double n = out_size;
  const Homography h = homography_dlt({Point2{0.0, 0.0}, Point2{n, 0.0}, Point2{n, n}, Point2{0.0, n}}, quad.vertices);

  GrayImage out(out_size, out_size);
  for (int y = 0; y < out_size; ++y) {
    for (int x = 0; x < out_size; ++x) {
      const Point2 p = h.apply({x + 0.5, y + 0.5});
      const double s = sample_bilinear(img, p.x, p.y);
      out.at(x, y) = static_cast<std::uint8_t>(std::clamp(std::lround(s), 0L, 255L));
    }
  }
  return out;
}

MarkerCode decode_code(const GrayImage& rect, int grid) {
  if (grid < 1) throw Error(ErrorCode::InvalidArgument, "grid must be positive");
  if (rect.width != rect.height) throw Error(ErrorCode::InvalidArgument, "rectified image must be square");
  const int n = rect.width;
  if (n < 4 * grid) {
    throw Error(ErrorCode::GridTooFine,
                std::to_string(grid) + " cells on " + std::to_string(n) + " px leaves fewer than 4 px per cell");
  }
  MarkerCode code(grid);
  for (int r = 0; r < grid; ++r) {
    const int y0 = r * n / grid, y1 = (r + 1) * n / grid;
    for (int c = 0; c < grid; ++c) {
      const int x0 = c * n / grid, x1 = (c + 1) * n / grid;
      long sum = 0;
      for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) sum += rect.at(x, y);
      const long count = static_cast<long>(y1 - y0) * (x1 - x0);
      code.at(r, c) = sum >= 128L * count ? 1 : 0;
    }
  }
  return code;
}

std::optional<MatchResult> match_template(const MarkerCode& code, const std::vector<MarkerTemplate>& library,
                                          int tau) {
  std::optional<MatchResult> best;
  for (const auto& t : library) {
    if (t.cells.size != code.size) {
      throw Error(ErrorCode::GridMismatch, "code grid " + std::to_string(code.size) + " vs template grid " +
                                               std::to_string(t.cells.size));
    }
    BitGrid rotated = t.cells;
    for (int r = 0; r < 4; ++r) {
      if (r > 0) rotated = rotated.rotated(1);
      const int d = hamming(code, rotated);
      if (!best || d < best->hamming) best = MatchResult{t.id, r, d};
    }
  }
  if (best && best->hamming <= tau) return best;
  return std::nullopt;
}

std::optional<LibraryIssue> check_library(const std::vector<MarkerTemplate>& library, int tau) {
  std::set<int> ids;
  for (std::size_t i = 0; i < library.size(); ++i) {
    const MarkerTemplate& t = library[i];
    const int g = t.cells.size;
    if (g < 4) return LibraryIssue{ErrorCode::InvalidArgument, i, i, 0, "grid size must be at least 4"};
    if (g != library.front().cells.size)
      return LibraryIssue{ErrorCode::MixedGridSize, i, 0, 0,
                          "marker " + std::to_string(t.id) + " has grid " + std::to_string(g) + ", expected " +
                              std::to_string(library.front().cells.size)};
    if (!ids.insert(t.id).second)
      return LibraryIssue{ErrorCode::DuplicateId, i, i, 0, "duplicate marker id " + std::to_string(t.id)};
    for (int k = 0; k < g; ++k) {
      if (t.cells.at(0, k) || t.cells.at(g - 1, k) || t.cells.at(k, 0) || t.cells.at(k, g - 1))
        return LibraryIssue{ErrorCode::BorderViolation, i, i, 0,
                            "marker " + std::to_string(t.id) + " has a white cell in its border ring"};
    }
  }

  for (std::size_t i = 0; i < library.size(); ++i) {
    const BitGrid& a = library[i].cells;
    for (int r = 1; r < 4; ++r) {
      if (hamming(a.rotated(r), a) <= 2 * tau)
        return LibraryIssue{ErrorCode::RotationCollision, i, i, r,
                            "marker " + std::to_string(library[i].id) + " collides with itself at rotation " +
                                std::to_string(r)};
    }
    for (std::size_t j = i + 1; j < library.size(); ++j) {
      for (int r = 0; r < 4; ++r) {
        if (hamming(a.rotated(r), library[j].cells) <= 2 * tau)
          return LibraryIssue{ErrorCode::RotationCollision, j, i, r,
                              "marker " + std::to_string(library[i].id) + " at rotation " + std::to_string(r) +
                                  " collides with marker " + std::to_string(library[j].id)};
      }
    }
  }
  return std::nullopt;
}

}  // namespace trimark
