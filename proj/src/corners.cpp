#include "trimark/corners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "trimark/error.hpp"

namespace trimark {

namespace {

std::vector<double> gaussian_kernel(double sigma, int& radius) {
  radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    k[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
    sum += k[i + radius];
  }
  for (double& v : k) v /= sum;
  return k;
}

}  // namespace

CornernessMap harris_response(const GrayImage& img, const HarrisParams& params) {
  const int w = img.width, h = img.height;
  if (w < 3 || h < 3) throw Error(ErrorCode::ImageTooSmall, "Harris needs at least a 3x3 image");
  if (!(params.window_sigma > 0.0)) throw Error(ErrorCode::InvalidArgument, "window sigma must be positive");

  const std::size_t n = static_cast<std::size_t>(w) * h;
  std::vector<double> ixx(n, 0.0), iyy(n, 0.0), ixy(n, 0.0);
  for (int y = 1; y < h - 1; ++y) {
    const std::uint8_t* up = &img.pixels[static_cast<std::size_t>(y - 1) * w];
    const std::uint8_t* mid = up + w;
    const std::uint8_t* dn = mid + w;
    for (int x = 1; x < w - 1; ++x) {
      const double gx = ((up[x + 1] + 2.0 * mid[x + 1] + dn[x + 1]) - (up[x - 1] + 2.0 * mid[x - 1] + dn[x - 1])) / 8.0;
      const double gy = ((dn[x - 1] + 2.0 * dn[x] + dn[x + 1]) - (up[x - 1] + 2.0 * up[x] + up[x + 1])) / 8.0;
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      ixx[i] = gx * gx;
      iyy[i] = gy * gy;
      ixy[i] = gx * gy;
    }
  }

  int r = 0;
  const std::vector<double> g = gaussian_kernel(params.window_sigma, r);

  CornernessMap out;
  out.width = w;
  out.height = h;
  out.response.assign(n, 0.0);

  // Valid output region: gradients exist on [1, w-2], the window needs r more.
  const int x_lo = 1 + r, x_hi = w - 2 - r;
  const int y_lo = 1 + r, y_hi = h - 2 - r;
  if (x_lo > x_hi || y_lo > y_hi) return out;

  std::vector<double> hxx(n, 0.0), hyy(n, 0.0), hxy(n, 0.0);
  for (int y = 1; y < h - 1; ++y) {
    const std::size_t row = static_cast<std::size_t>(y) * w;
    for (int x = x_lo; x <= x_hi; ++x) {
      double sxx = 0.0, syy = 0.0, sxy = 0.0;
      for (int k = -r; k <= r; ++k) {
        const double wk = g[k + r];
        const std::size_t i = row + x + k;
        sxx += wk * ixx[i];
        syy += wk * iyy[i];
        sxy += wk * ixy[i];
      }
      hxx[row + x] = sxx;
      hyy[row + x] = syy;
      hxy[row + x] = sxy;
    }
  }
  for (int y = y_lo; y <= y_hi; ++y) {
    for (int x = x_lo; x <= x_hi; ++x) {
      double sxx = 0.0, syy = 0.0, sxy = 0.0;
      for (int k = -r; k <= r; ++k) {
        const double wk = g[k + r];
        const std::size_t i = static_cast<std::size_t>(y + k) * w + x;
        sxx += wk * hxx[i];
        syy += wk * hyy[i];
        sxy += wk * hxy[i];
      }
      const double det = sxx * syy - sxy * sxy;
      const double tr = sxx + syy;
      out.response[static_cast<std::size_t>(y) * w + x] = det - params.k * tr * tr;
    }
  }
  return out;
}

namespace {

double parabolic_offset(double left, double center, double right) {
  const double denom = left - 2.0 * center + right;
  if (!(denom < 0.0)) return 0.0;
  return std::clamp(0.5 * (left - right) / denom, -0.5, 0.5);
}

}  // namespace

std::vector<Corner> local_maxima(const CornernessMap& map, int radius, double min_response) {
  if (radius < 1) throw Error(ErrorCode::InvalidArgument, "suppression radius must be >= 1");
  const int w = map.width, h = map.height;
  std::vector<Corner> out;

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double v = map.at(x, y);
      if (!(v >= min_response) || !(v > 0.0)) continue;

      bool keep = true;
      const int y0 = std::max(0, y - radius), y1 = std::min(h - 1, y + radius);
      const int x0 = std::max(0, x - radius), x1 = std::min(w - 1, x + radius);
      for (int ny = y0; ny <= y1 && keep; ++ny) {
        for (int nx = x0; nx <= x1; ++nx) {
          if (nx == x && ny == y) continue;
          const double q = map.at(nx, ny);
          const bool earlier = ny < y || (ny == y && nx < x);
          if (q > v || (q == v && earlier)) {
            keep = false;
            break;
          }
        }
      }
      if (!keep) continue;

      Corner c;
      c.px = x;
      c.py = y;
      c.response = v;
      c.x = x;
      c.y = y;
      if (x > 0 && x < w - 1) c.x += parabolic_offset(map.at(x - 1, y), v, map.at(x + 1, y));
      if (y > 0 && y < h - 1) c.y += parabolic_offset(map.at(x, y - 1), v, map.at(x, y + 1));
      out.push_back(c);
    }
  }

  std::stable_sort(out.begin(), out.end(), [](const Corner& a, const Corner& b) { return a.response > b.response; });
  return out;
}

double signed_area(const std::array<Point2, 4>& pts) {
  double s = 0.0;
  for (int i = 0; i < 4; ++i) {
    const Point2& a = pts[i];
    const Point2& b = pts[(i + 1) % 4];
    s += a.x * b.y - b.x * a.y;
  }
  return 0.5 * s;
}

bool order_quad(std::array<Point2, 4>& pts, double min_separation) {
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y) < min_separation) return false;

  Point2 c{0.0, 0.0};
  for (const auto& p : pts) {
    c.x += 0.25 * p.x;
    c.y += 0.25 * p.y;
  }
  std::sort(pts.begin(), pts.end(), [&](const Point2& a, const Point2& b) {
    return std::atan2(a.y - c.y, a.x - c.x) < std::atan2(b.y - c.y, b.x - c.x);
  });

  for (int i = 0; i < 4; ++i) {
    const Point2& a = pts[i];
    const Point2& b = pts[(i + 1) % 4];
    const Point2& d = pts[(i + 2) % 4];
    const double turn = (b.x - a.x) * (d.y - b.y) - (b.y - a.y) * (d.x - b.x);
    if (!(turn > 0.0)) return false;
  }

  // y values within 1e-6 count as tied so float noise cannot flip the start.
  constexpr double kTie = 1e-6;
  int start = 0;
  for (int i = 1; i < 4; ++i) {
    const double dy = pts[i].y - pts[start].y;
    if (dy < -kTie || (std::abs(dy) <= kTie && pts[i].x < pts[start].x)) start = i;
  }
  std::rotate(pts.begin(), pts.begin() + start, pts.end());
  return true;
}

namespace {

double cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Andrew's monotone chain; returns a closed-free CCW polygon.
std::vector<Point2> convex_hull(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Point2& a, const Point2& b) { return a.x == b.x && a.y == b.y; }),
            pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    const Point2& p = pts[i - 1];
    while (k >= t && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  return hull;
}

double segment_distance(const Point2& p, const Point2& a, const Point2& b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

double boundary_distance(const Point2& p, const std::vector<Point2>& hull) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < hull.size(); ++i) {
    best = std::min(best, segment_distance(p, hull[i], hull[(i + 1) % hull.size()]));
  }
  return best;
}

// Hull of the union of the component's pixel squares, pixel-index coordinates.
std::vector<Point2> component_hull(const LabelMap& labels, const Component& comp) {
  std::vector<Point2> pts;
  pts.reserve(4 * static_cast<std::size_t>(comp.y1 - comp.y0 + 1));
  for (int y = comp.y0; y <= comp.y1; ++y) {
    int lo = -1, hi = -1;
    for (int x = comp.x0; x <= comp.x1; ++x) {
      if (labels.at(x, y) == comp.label) {
        if (lo < 0) lo = x;
        hi = x;
      }
    }
    if (lo < 0) continue;
    pts.push_back({lo - 0.5, y - 0.5});
    pts.push_back({lo - 0.5, y + 0.5});
    pts.push_back({hi + 0.5, y - 0.5});
    pts.push_back({hi + 0.5, y + 0.5});
  }
  return convex_hull(std::move(pts));
}

// Label of the nearest labeled pixel within `radius` of (x, y), or 0.
int nearest_label(const LabelMap& labels, double x, double y, double radius) {
  const int r = static_cast<int>(std::ceil(radius));
  const int cx = static_cast<int>(std::lround(x)), cy = static_cast<int>(std::lround(y));
  int best = 0;
  double best_d = radius * radius + 1e-12;
  for (int ny = cy - r; ny <= cy + r; ++ny) {
    if (ny < 0 || ny >= labels.height) continue;
    for (int nx = cx - r; nx <= cx + r; ++nx) {
      if (nx < 0 || nx >= labels.width) continue;
      const int l = labels.at(nx, ny);
      if (l == 0) continue;
      const double d = (nx - x) * (nx - x) + (ny - y) * (ny - y);
      if (d < best_d) {
        best_d = d;
        best = l;
      }
    }
  }
  return best;
}

}  // namespace

QuadExtraction extract_quads(const LabelMap& labels, const std::vector<Corner>& corners, const QuadParams& params) {
  QuadExtraction out;
  const std::size_t n_comp = labels.components.size();

  // corners arrive sorted by descending response, so each bucket is too.
  std::vector<std::vector<const Corner*>> assigned(n_comp + 1);
  for (const auto& c : corners) {
    const int l = nearest_label(labels, c.x, c.y, params.association_radius);
    if (l > 0) assigned[l].push_back(&c);
  }

  for (const Component& comp : labels.components) {
    if (comp.area < params.min_area) {
      out.skipped.push_back({comp.label, "area below minimum"});
      continue;
    }
    if (params.max_area > 0 && comp.area > params.max_area) {
      out.skipped.push_back({comp.label, "area above maximum"});
      continue;
    }

    const double pad = params.association_radius;
    std::vector<const Corner*> inside;
    for (const Corner* c : assigned[comp.label]) {
      if (c->x >= comp.x0 - pad && c->x <= comp.x1 + pad && c->y >= comp.y0 - pad && c->y <= comp.y1 + pad)
        inside.push_back(c);
    }
    if (inside.size() < 4) {
      out.skipped.push_back({comp.label, "fewer than 4 corners"});
      continue;
    }

    const std::vector<Point2> hull = component_hull(labels, comp);
    std::vector<const Corner*> outline;
    for (const Corner* c : inside) {
      if (boundary_distance({c->x, c->y}, hull) <= params.hull_tolerance) outline.push_back(c);
    }
    if (outline.size() < 4) {
      out.skipped.push_back({comp.label, "fewer than 4 outline corners"});
      continue;
    }

    Quad q;
    q.component_label = comp.label;
    for (int i = 0; i < 4; ++i) q.vertices[i] = {outline[i]->x + 0.5, outline[i]->y + 0.5};
    if (!order_quad(q.vertices, params.min_vertex_separation)) {
      out.skipped.push_back({comp.label, "corners do not form a convex quad"});
      continue;
    }
    out.quads.push_back(q);
  }
  return out;
}

}  // namespace trimark

namespace trimark {

Point2 refine_corner(const GrayImage& img, Point2 guess, const RefineParams& params) {
  const int w = img.width, h = img.height;
  const int hw = params.half_window;
  const double sigma = std::max(1.0, 0.5 * (hw + 1));
  // Work in pixel-index coordinates.
  Point2 q{guess.x - 0.5, guess.y - 0.5};
  const Point2 start = q;

  for (int it = 0; it < params.iterations; ++it) {
    const int cx = static_cast<int>(std::lround(q.x)), cy = static_cast<int>(std::lround(q.y));
    double a00 = 0.0, a01 = 0.0, a11 = 0.0, b0 = 0.0, b1 = 0.0;
    for (int y = cy - hw; y <= cy + hw; ++y) {
      if (y < 1 || y > h - 2) continue;
      for (int x = cx - hw; x <= cx + hw; ++x) {
        if (x < 1 || x > w - 2) continue;
        const double gx = (img.at(x + 1, y - 1) + 2.0 * img.at(x + 1, y) + img.at(x + 1, y + 1)) -
                          (img.at(x - 1, y - 1) + 2.0 * img.at(x - 1, y) + img.at(x - 1, y + 1));
        const double gy = (img.at(x - 1, y + 1) + 2.0 * img.at(x, y + 1) + img.at(x + 1, y + 1)) -
                          (img.at(x - 1, y - 1) + 2.0 * img.at(x, y - 1) + img.at(x + 1, y - 1));
        const double dx = x - q.x, dy = y - q.y;
        const double wt = std::exp(-0.5 * (dx * dx + dy * dy) / (sigma * sigma));
        const double gxx = wt * gx * gx, gxy = wt * gx * gy, gyy = wt * gy * gy;
        a00 += gxx;
        a01 += gxy;
        a11 += gyy;
        b0 += gxx * x + gxy * y;
        b1 += gxy * x + gyy * y;
      }
    }
    const double det = a00 * a11 - a01 * a01;
    const double scale = a00 + a11;
    if (!(scale > 0.0) || !(det > 1e-6 * scale * scale)) return guess;
    const Point2 next{(a11 * b0 - a01 * b1) / det, (a00 * b1 - a01 * b0) / det};
    const double step = std::hypot(next.x - q.x, next.y - q.y);
    q = next;
    if (std::hypot(q.x - start.x, q.y - start.y) > params.max_shift) return guess;
    if (step < 1e-4) break;
  }
  return {q.x + 0.5, q.y + 0.5};
}

}  // namespace trimark
