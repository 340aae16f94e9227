#include "trimark/imgproc.hpp"

#include <algorithm>
#include <array>
#include <numeric>

#include "trimark/error.hpp"

namespace trimark {

GrayImage to_grayscale(const RgbImage& img) {
  GrayImage out(img.width, img.height);
  for (std::size_t i = 0, j = 0; i < out.pixels.size(); ++i, j += 3) {
    // Integer form of round-half-up(0.299 R + 0.587 G + 0.114 B).
    const unsigned luma = 299u * img.pixels[j] + 587u * img.pixels[j + 1] + 114u * img.pixels[j + 2];
    out.pixels[i] = static_cast<std::uint8_t>(std::min(255u, (luma + 500u) / 1000u));
  }
  return out;
}

RgbImage to_rgb(const GrayImage& img) {
  RgbImage out(img.width, img.height);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    out.pixels[3 * i] = out.pixels[3 * i + 1] = out.pixels[3 * i + 2] = img.pixels[i];
  }
  return out;
}

BinaryImage threshold(const GrayImage& img, int t) {
  BinaryImage out(img.width, img.height);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) out.pixels[i] = img.pixels[i] < t ? 0 : 1;
  return out;
}

namespace {

__extension__ typedef unsigned __int128 u128;

// Between-class variance up to the constant factor 1/N^2, as the fraction
// (S0*N1 - S1*N0)^2 / (N0*N1).
struct SplitScore {
  std::uint64_t diff = 0;  // |S0*N1 - S1*N0|
  std::uint64_t weight = 0;  // N0*N1; 0 when one class is empty
};

// a > b, exactly when the products fit in 128 bits.
bool better(const SplitScore& a, const SplitScore& b, bool exact) {
  if (a.weight == 0) return false;
  if (b.weight == 0) return a.diff > 0;
  if (exact) {
    const u128 lhs = static_cast<u128>(a.diff) * a.diff * b.weight;
    const u128 rhs = static_cast<u128>(b.diff) * b.diff * a.weight;
    return lhs > rhs;
  }
  const long double da = static_cast<long double>(a.diff);
  const long double db = static_cast<long double>(b.diff);
  return da * da / static_cast<long double>(a.weight) > db * db / static_cast<long double>(b.weight);
}

}  // namespace

OtsuResult otsu_threshold(const GrayImage& img) {
  if (img.pixels.empty()) throw Error(ErrorCode::InvalidArgument, "empty image");
  std::array<std::uint64_t, 256> hist{};
  for (auto v : img.pixels) ++hist[v];

  const std::uint64_t total = img.pixels.size();
  for (int v = 0; v < 256; ++v) {
    if (hist[v] == total) return {v, true};
  }

  std::uint64_t total_sum = 0;
  for (int v = 0; v < 256; ++v) total_sum += hist[v] * static_cast<std::uint64_t>(v);

  // diff^2 * weight <= 255^2 N^4 * N^2 / 4
  const bool exact = total <= 400000;
  SplitScore best;
  int best_t = 0;
  std::uint64_t n0 = 0, s0 = 0;
  for (int t = 1; t < 256; ++t) {
    n0 += hist[t - 1];
    s0 += hist[t - 1] * static_cast<std::uint64_t>(t - 1);
    const std::uint64_t n1 = total - n0;
    const std::uint64_t s1 = total_sum - s0;
    SplitScore score;
    if (n0 > 0 && n1 > 0) {
      const std::uint64_t a = s0 * n1, b = s1 * n0;
      score = {a > b ? a - b : b - a, n0 * n1};
    }
    if (better(score, best, exact)) {
      best = score;
      best_t = t;
    }
  }
  return {best_t, false};
}

namespace {

struct DisjointSet {
  std::vector<std::int32_t> parent;

  std::int32_t make() {
    parent.push_back(static_cast<std::int32_t>(parent.size()));
    return parent.back();
  }
  std::int32_t find(std::int32_t a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  }
  void unite(std::int32_t a, std::int32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent[a] = b;
  }
};

}  // namespace

LabelMap label_components(const BinaryImage& bin, std::uint8_t foreground, Connectivity connectivity) {
  const int w = bin.width, h = bin.height;
  LabelMap out;
  out.width = w;
  out.height = h;
  out.labels.assign(bin.pixels.size(), 0);

  // Provisional labels are 1-based; slot 0 of the set is a dummy.
  DisjointSet sets;
  sets.make();
  const bool eight = connectivity == Connectivity::Eight;

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (bin.pixels[i] != foreground) continue;

      std::int32_t neighbors[4];
      int count = 0;
      auto take = [&](int nx, int ny) {
        if (nx < 0 || nx >= w || ny < 0) return;
        const std::int32_t l = out.labels[static_cast<std::size_t>(ny) * w + nx];
        if (l != 0) neighbors[count++] = l;
      };
      take(x - 1, y);
      take(x, y - 1);
      if (eight) {
        take(x - 1, y - 1);
        take(x + 1, y - 1);
      }

      if (count == 0) {
        out.labels[i] = sets.make();
        continue;
      }
      std::int32_t l = *std::min_element(neighbors, neighbors + count);
      for (int k = 0; k < count; ++k) sets.unite(l, neighbors[k]);
      out.labels[i] = l;
    }
  }

  std::vector<std::int32_t> dense(sets.parent.size(), 0);
  std::vector<double> sum_x, sum_y;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (out.labels[i] == 0) continue;
      const std::int32_t root = sets.find(out.labels[i]);
      if (dense[root] == 0) {
        dense[root] = static_cast<std::int32_t>(out.components.size()) + 1;
        Component c;
        c.label = dense[root];
        c.x0 = c.x1 = x;
        c.y0 = c.y1 = y;
        out.components.push_back(c);
        sum_x.push_back(0.0);
        sum_y.push_back(0.0);
      }
      const std::int32_t l = dense[root];
      out.labels[i] = l;
      Component& c = out.components[l - 1];
      ++c.area;
      c.x0 = std::min(c.x0, x);
      c.x1 = std::max(c.x1, x);
      c.y1 = y;
      sum_x[l - 1] += x;
      sum_y[l - 1] += y;
    }
  }
  for (std::size_t k = 0; k < out.components.size(); ++k) {
    out.components[k].cx = sum_x[k] / out.components[k].area;
    out.components[k].cy = sum_y[k] / out.components[k].area;
  }
  return out;
}

}  // namespace trimark
