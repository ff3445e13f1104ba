#pragma once

#include <algorithm>
#include <array>
#include <cstdint>

#include "quadtok/pipeline.hpp"
#include "quadtok/raster.hpp"

namespace quadtok {

namespace detail {

inline void blend(std::uint8_t* p, const std::array<std::uint8_t, 3>& c, int alpha_256) {
  for (int k = 0; k < 3; ++k) {
    p[k] = static_cast<std::uint8_t>((p[k] * (256 - alpha_256) + c[static_cast<std::size_t>(k)] * alpha_256) / 256);
  }
}

}  // namespace detail

/// Draws a reduction on top of the source image, at source resolution.
/// Leaf borders are 1-px red lines, representative blocks get a blue wash,
/// and when mode decisions exist chunks are tinted green (static),
/// amber (shifted) or magenta (replaced).
inline RgbImage render_overlay(const RgbImage& source, const Reduction& red) {
  RgbImage out = source;
  const int b = red.layout.block;
  const double sx = static_cast<double>(source.width()) / red.layout.width;
  const double sy = static_cast<double>(source.height()) / red.layout.height;
  auto to_src = [&](const BlockRect& r) {
    const int x0 = static_cast<int>(r.x0 * b * sx);
    const int y0 = static_cast<int>(r.y0 * b * sy);
    const int x1 = std::min(source.width(), static_cast<int>((r.x0 + r.w) * b * sx));
    const int y1 = std::min(source.height(), static_cast<int>((r.y0 + r.h) * b * sy));
    return PixelRect{x0, y0, std::max(1, x1 - x0), std::max(1, y1 - y0)};
  };
  auto fill = [&](const PixelRect& r, const std::array<std::uint8_t, 3>& c, int a) {
    for (int y = r.y; y < std::min(source.height(), r.y + r.h); ++y)
      for (int x = r.x; x < std::min(source.width(), r.x + r.w); ++x) detail::blend(out.at(x, y), c, a);
  };

  static constexpr std::array<std::array<std::uint8_t, 3>, 3> kModeTint = {{
      {40, 200, 60},   // static
      {240, 170, 20},  // shifted
      {220, 40, 200},  // replaced
  }};
  for (std::size_t k = 0; k < red.decisions.size() && k < red.layout.chunks.size(); ++k) {
    fill(to_src(red.layout.chunks[k]), kModeTint[static_cast<std::size_t>(red.decisions[k].mode)], 64);
  }
  for (const auto& e : red.selection.entries) {
    fill(to_src({e.coord.x, e.coord.y, 1, 1}), {30, 90, 255}, 110);
  }
  const std::array<std::uint8_t, 3> edge = {255, 0, 0};
  auto put = [&](int x, int y) {
    if (x >= 0 && y >= 0 && x < source.width() && y < source.height()) {
      std::copy(edge.begin(), edge.end(), out.at(x, y));
    }
  };
  for (const auto& leaf : red.partition.all_leaves()) {
    const PixelRect r = to_src(leaf);
    for (int x = r.x; x < r.x + r.w; ++x) {
      put(x, r.y);
      put(x, r.y + r.h - 1);
    }
    for (int y = r.y; y < r.y + r.h; ++y) {
      put(r.x, y);
      put(r.x + r.w - 1, y);
    }
  }
  return out;
}

}  // namespace quadtok
