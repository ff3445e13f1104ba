#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "quadtok/error.hpp"

namespace quadtok {

/// Axis-aligned rectangle in pixel units.
struct PixelRect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  friend bool operator==(const PixelRect&, const PixelRect&) = default;
};

/// Row-major 8-bit RGB raster.
class RgbImage {
 public:
  RgbImage() = default;

  RgbImage(int width, int height)
      : RgbImage(width, height, std::vector<std::uint8_t>(checked_size(width, height), 0)) {}

  RgbImage(int width, int height, std::vector<std::uint8_t> pixels)
      : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (pixels_.size() != checked_size(width, height)) {
      throw PreconditionError("RgbImage: pixel buffer length must be 3*W*H");
    }
  }

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return pixels_.empty(); }

  std::span<const std::uint8_t> pixels() const { return pixels_; }
  std::span<std::uint8_t> pixels() { return pixels_; }

  const std::uint8_t* at(int x, int y) const { return &pixels_[offset(x, y)]; }
  std::uint8_t* at(int x, int y) { return &pixels_[offset(x, y)]; }

  void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    auto* p = at(x, y);
    p[0] = r;
    p[1] = g;
    p[2] = b;
  }

  friend bool operator==(const RgbImage&, const RgbImage&) = default;

 private:
  static std::size_t checked_size(int width, int height) {
    if (width < 1 || height < 1) {
      throw PreconditionError("RgbImage: width and height must be >= 1");
    }
    return std::size_t{3} * static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }

  std::size_t offset(int x, int y) const {
    return 3 * (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
                static_cast<std::size_t>(x));
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

/// Row-major 8-bit intensity raster.
class GrayImage {
 public:
  GrayImage() = default;

  GrayImage(int width, int height, std::uint8_t fill = 0)
      : GrayImage(width, height,
                  std::vector<std::uint8_t>(checked_size(width, height), fill)) {}

  GrayImage(int width, int height, std::vector<std::uint8_t> pixels)
      : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (pixels_.size() != checked_size(width, height)) {
      throw PreconditionError("GrayImage: pixel buffer length must be W*H");
    }
  }

  int width() const { return width_; }
  int height() const { return height_; }

  std::span<const std::uint8_t> pixels() const { return pixels_; }
  std::span<std::uint8_t> pixels() { return pixels_; }

  std::uint8_t at(int x, int y) const { return pixels_[offset(x, y)]; }
  std::uint8_t& at(int x, int y) { return pixels_[offset(x, y)]; }

  bool contains(const PixelRect& r) const {
    return r.w >= 1 && r.h >= 1 && r.x >= 0 && r.y >= 0 && r.x + r.w <= width_ &&
           r.y + r.h <= height_;
  }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  static std::size_t checked_size(int width, int height) {
    if (width < 1 || height < 1) {
      throw PreconditionError("GrayImage: width and height must be >= 1");
    }
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }

  std::size_t offset(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

/// BT.601 luma in integer arithmetic: round(0.299 R + 0.587 G + 0.114 B), ties up.
constexpr std::uint8_t luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  const unsigned weighted = 299u * r + 587u * g + 114u * b;
  return static_cast<std::uint8_t>(std::min(255u, (weighted + 500u) / 1000u));
}

inline GrayImage to_grayscale(const RgbImage& img) {
  GrayImage out(img.width(), img.height());
  auto src = img.pixels();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] = luma(src[3 * i], src[3 * i + 1], src[3 * i + 2]);
  }
  return out;
}

/// Nearest positive multiple of `block` (ties round up, never below `block`).
constexpr int nearest_block_multiple(int extent, int block) {
  const long long q = (2LL * extent + block) / (2LL * block);
  return static_cast<int>(std::max(1LL, q) * block);
}

/// Bilinear resample with half-pixel centers.
inline RgbImage resize_bilinear(const RgbImage& img, int out_w, int out_h) {
  if (out_w < 1 || out_h < 1) {
    throw PreconditionError("resize_bilinear: output dimensions must be >= 1");
  }
  if (out_w == img.width() && out_h == img.height()) {
    return img;
  }
  struct Tap {
    int i0, i1;
    double f;
  };
  auto taps = [](int in, int out) {
    std::vector<Tap> t(static_cast<std::size_t>(out));
    const double scale = static_cast<double>(in) / out;
    for (int o = 0; o < out; ++o) {
      double s = (o + 0.5) * scale - 0.5;
      s = std::clamp(s, 0.0, static_cast<double>(in - 1));
      const int i0 = static_cast<int>(std::floor(s));
      const int i1 = std::min(i0 + 1, in - 1);
      t[static_cast<std::size_t>(o)] = {i0, i1, s - i0};
    }
    return t;
  };
  const auto tx = taps(img.width(), out_w);
  const auto ty = taps(img.height(), out_h);

  RgbImage out(out_w, out_h);
  for (int y = 0; y < out_h; ++y) {
    const Tap& vy = ty[static_cast<std::size_t>(y)];
    for (int x = 0; x < out_w; ++x) {
      const Tap& vx = tx[static_cast<std::size_t>(x)];
      const auto* p00 = img.at(vx.i0, vy.i0);
      const auto* p10 = img.at(vx.i1, vy.i0);
      const auto* p01 = img.at(vx.i0, vy.i1);
      const auto* p11 = img.at(vx.i1, vy.i1);
      auto* d = out.at(x, y);
      for (int c = 0; c < 3; ++c) {
        const double top = p00[c] + (p10[c] - p00[c]) * vx.f;
        const double bot = p01[c] + (p11[c] - p01[c]) * vx.f;
        const double v = top + (bot - top) * vy.f;
        d[c] = static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
      }
    }
  }
  return out;
}

/// Resizes so both dimensions are the nearest positive multiple of `block`.
inline RgbImage resize_to_block_multiple(const RgbImage& img, int block) {
  if (block < 1) {
    throw PreconditionError("resize_to_block_multiple: block size must be >= 1");
  }
  return resize_bilinear(img, nearest_block_multiple(img.width(), block),
                         nearest_block_multiple(img.height(), block));
}

/// Integer summed-area tables of values and squared values, (W+1) x (H+1).
class SummedAreaTable {
 public:
  SummedAreaTable() = default;

  explicit SummedAreaTable(const GrayImage& g)
      : width_(g.width()),
        height_(g.height()),
        sum_(cells(), 0),
        sq_(cells(), 0) {
    const std::size_t stride = static_cast<std::size_t>(width_) + 1;
    for (int y = 0; y < height_; ++y) {
      std::uint64_t row_sum = 0;
      std::uint64_t row_sq = 0;
      const std::size_t above = static_cast<std::size_t>(y) * stride;
      const std::size_t here = above + stride;
      for (int x = 0; x < width_; ++x) {
        const std::uint64_t v = g.at(x, y);
        row_sum += v;
        row_sq += v * v;
        const auto xi = static_cast<std::size_t>(x) + 1;
        sum_[here + xi] = sum_[above + xi] + row_sum;
        sq_[here + xi] = sq_[above + xi] + row_sq;
      }
    }
  }

  int width() const { return width_; }
  int height() const { return height_; }

  /// Cumulative sum over the top-left `y` rows and `x` columns.
  std::uint64_t sum_at(int x, int y) const { return sum_[index(x, y)]; }
  std::uint64_t sq_at(int x, int y) const { return sq_[index(x, y)]; }

  std::uint64_t region_sum(const PixelRect& r) const {
    check(r);
    return box(sum_, r);
  }

  std::uint64_t region_sq_sum(const PixelRect& r) const {
    check(r);
    return box(sq_, r);
  }

 private:
  std::size_t cells() const {
    return (static_cast<std::size_t>(width_) + 1) * (static_cast<std::size_t>(height_) + 1);
  }

  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * (static_cast<std::size_t>(width_) + 1) +
           static_cast<std::size_t>(x);
  }

  void check(const PixelRect& r) const {
    if (r.w < 1 || r.h < 1 || r.x < 0 || r.y < 0 || r.x + r.w > width_ ||
        r.y + r.h > height_) {
      throw BoundsError("summed-area table: rectangle empty or out of bounds");
    }
  }

  std::uint64_t box(const std::vector<std::uint64_t>& t, const PixelRect& r) const {
    return t[index(r.x + r.w, r.y + r.h)] - t[index(r.x, r.y + r.h)] -
           t[index(r.x + r.w, r.y)] + t[index(r.x, r.y)];
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint64_t> sum_;
  std::vector<std::uint64_t> sq_;
};

inline SummedAreaTable build_sat(const GrayImage& g) { return SummedAreaTable(g); }

/// n * sum(x^2) - (sum x)^2 over the rectangle, exact. Equals n^2 * Var.
inline unsigned __int128 scaled_variance_numerator(const SummedAreaTable& sat,
                                                   const PixelRect& r) {
  const unsigned __int128 n = static_cast<unsigned __int128>(r.w) * r.h;
  const unsigned __int128 s = sat.region_sum(r);
  const unsigned __int128 q = sat.region_sq_sum(r);
  // Cauchy-Schwarz guarantees n*q >= s*s for integer data.
  return n * q - s * s;
}

/// Population variance E[x^2] - E[x]^2 over the rectangle.
inline double region_variance(const SummedAreaTable& sat, const PixelRect& r) {
  const auto num = scaled_variance_numerator(sat, r);
  const long double n = static_cast<long double>(r.w) * r.h;
  return std::max(0.0, static_cast<double>(static_cast<long double>(num) / (n * n)));
}

/// Largest forward-difference gradient magnitude inside the rectangle. Pixels on
/// the right/bottom edge of the rectangle fall back to backward differences.
inline double region_max_gradient(const GrayImage& g, const PixelRect& r) {
  if (!g.contains(r)) {
    throw BoundsError("region_max_gradient: rectangle empty or out of bounds");
  }
  int best_sq = 0;
  const int x_end = r.x + r.w;
  const int y_end = r.y + r.h;
  for (int y = r.y; y < y_end; ++y) {
    for (int x = r.x; x < x_end; ++x) {
      int dx = 0;
      int dy = 0;
      if (x + 1 < x_end) {
        dx = g.at(x + 1, y) - g.at(x, y);
      } else if (x > r.x) {
        dx = g.at(x, y) - g.at(x - 1, y);
      }
      if (y + 1 < y_end) {
        dy = g.at(x, y + 1) - g.at(x, y);
      } else if (y > r.y) {
        dy = g.at(x, y) - g.at(x, y - 1);
      }
      best_sq = std::max(best_sq, dx * dx + dy * dy);
    }
  }
  return std::sqrt(static_cast<double>(best_sq));
}

/// Grayscale raster bundled with its summed-area table.
struct Frame {
  GrayImage gray;
  SummedAreaTable sat;

  explicit Frame(GrayImage g) : gray(std::move(g)), sat(gray) {}

  int width() const { return gray.width(); }
  int height() const { return gray.height(); }
};

}  // namespace quadtok
