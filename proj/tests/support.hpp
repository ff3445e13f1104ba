#pragma once

// Test-only helpers: seeded image builders and brute-force oracles that do
// not reuse the library's summed-area or quadtree code.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "quadtok/quadtok.hpp"

namespace quadtok::testing {

enum class Content { Uniform, Noise, Panels };

inline GrayImage make_gray(std::mt19937_64& rng, Content kind, int w, int h) {
  GrayImage g(w, h, static_cast<std::uint8_t>(rng() & 0xFF));
  if (kind == Content::Noise) {
    for (auto& p : g.pixels()) p = static_cast<std::uint8_t>(rng() & 0xFF);
  } else if (kind == Content::Panels) {
    const int n = 1 + static_cast<int>(rng() % 12);
    for (int k = 0; k < n; ++k) {
      const int x0 = static_cast<int>(rng() % w);
      const int y0 = static_cast<int>(rng() % h);
      const int x1 = x0 + 1 + static_cast<int>(rng() % (w - x0));
      const int y1 = y0 + 1 + static_cast<int>(rng() % (h - y0));
      const auto v = static_cast<std::uint8_t>(rng() & 0xFF);
      for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) g.at(x, y) = v;
    }
  }
  return g;
}

/// Per-block cover count; a partition tiles the grid iff every count is 1.
inline std::vector<int> coverage(const std::vector<BlockRect>& leaves, int w_blocks, int h_blocks,
                                 bool* out_of_grid = nullptr) {
  std::vector<int> cnt(static_cast<std::size_t>(w_blocks) * h_blocks, 0);
  for (const auto& r : leaves) {
    for (int y = r.y0; y <= r.y1(); ++y)
      for (int x = r.x0; x <= r.x1(); ++x) {
        if (x < 0 || y < 0 || x >= w_blocks || y >= h_blocks) {
          if (out_of_grid) *out_of_grid = true;
          continue;
        }
        ++cnt[static_cast<std::size_t>(y) * w_blocks + x];
      }
  }
  return cnt;
}

inline bool tiles_exactly(const std::vector<BlockRect>& leaves, int w_blocks, int h_blocks) {
  bool oob = false;
  const auto cnt = coverage(leaves, w_blocks, h_blocks, &oob);
  if (oob) return false;
  for (int c : cnt)
    if (c != 1) return false;
  return true;
}

inline bool tiles_exactly(const LeafPartition& p) {
  return tiles_exactly(p.all_leaves(), p.layout.w_blocks, p.layout.h_blocks);
}

/// Two-pass w*h*Var over the pixels of a block rectangle.
inline double naive_score(const GrayImage& g, const BlockRect& node, int block) {
  const PixelRect r = node.pixels(block);
  const double n = static_cast<double>(r.w) * r.h;
  double sum = 0.0;
  for (int y = r.y; y < r.y + r.h; ++y)
    for (int x = r.x; x < r.x + r.w; ++x) sum += g.at(x, y);
  const double mean = sum / n;
  double acc = 0.0;
  for (int y = r.y; y < r.y + r.h; ++y)
    for (int x = r.x; x < r.x + r.w; ++x) acc += (g.at(x, y) - mean) * (g.at(x, y) - mean);
  return acc;
}

struct OracleResult {
  int leaf_violations = 0;   // leaf that should have split
  int split_violations = 0;  // ancestor that should not have split
  int structure_errors = 0;  // leaves not forming a valid quadtree
};

/// Walks the ideal quadtree of `chunk` top-down. Every node that contains a
/// produced leaf as a strict descendant must have exceeded the threshold; every
/// produced leaf must not exceed it (or be a single block).
inline void check_stop_rec(const GrayImage& g, const BlockRect& node, int block, double threshold,
                           const std::vector<BlockRect>& leaves, OracleResult& r) {
  bool is_leaf = false;
  bool has_inside = false;
  for (const auto& l : leaves) {
    if (l == node) is_leaf = true;
    else if (node.contains(l)) has_inside = true;
  }
  // Exact integer variance numerator avoids borderline float disagreements.
  const PixelRect pr = node.pixels(block);
  long double s = 0, sq = 0;
  for (int y = pr.y; y < pr.y + pr.h; ++y)
    for (int x = pr.x; x < pr.x + pr.w; ++x) {
      s += g.at(x, y);
      sq += static_cast<long double>(g.at(x, y)) * g.at(x, y);
    }
  const long double n = static_cast<long double>(pr.w) * pr.h;
  const long double score = (n * sq - s * s) / n;
  const bool splittable = node.w > 1 || node.h > 1;
  if (is_leaf) {
    if (has_inside) ++r.structure_errors;
    if (splittable && score > threshold) ++r.leaf_violations;
    return;
  }
  if (!has_inside || !splittable) {
    ++r.structure_errors;
    return;
  }
  if (!(score > threshold)) ++r.split_violations;
  const int hw = node.w / 2, hh = node.h / 2;
  check_stop_rec(g, {node.x0, node.y0, hw, hh}, block, threshold, leaves, r);
  check_stop_rec(g, {node.x0 + hw, node.y0, hw, hh}, block, threshold, leaves, r);
  check_stop_rec(g, {node.x0, node.y0 + hh, hw, hh}, block, threshold, leaves, r);
  check_stop_rec(g, {node.x0 + hw, node.y0 + hh, hw, hh}, block, threshold, leaves, r);
}

inline OracleResult stop_oracle(const Frame& f, const LeafPartition& p, double alpha) {
  OracleResult r;
  for (std::size_t k = 0; k < p.layout.chunks.size(); ++k) {
    check_stop_rec(f.gray, p.layout.chunks[k], p.layout.block, 1000.0 * alpha, p.chunk_leaves[k], r);
  }
  return r;
}

/// True when every leaf of `fine` lies inside exactly one leaf of `coarse`.
inline bool refines(const std::vector<BlockRect>& fine, const std::vector<BlockRect>& coarse) {
  for (const auto& f : fine) {
    int parents = 0;
    for (const auto& c : coarse)
      if (c.contains(f)) ++parents;
    if (parents != 1) return false;
  }
  return true;
}

/// Same check via a block label map; `coarse` must tile the grid.
inline bool refines_grid(const std::vector<BlockRect>& fine, const std::vector<BlockRect>& coarse,
                         int w_blocks, int h_blocks) {
  std::vector<int> label(static_cast<std::size_t>(w_blocks) * h_blocks, -1);
  for (std::size_t k = 0; k < coarse.size(); ++k) {
    const auto& c = coarse[k];
    if (c.x0 < 0 || c.y0 < 0 || c.x1() >= w_blocks || c.y1() >= h_blocks) return false;
    for (int y = c.y0; y <= c.y1(); ++y)
      for (int x = c.x0; x <= c.x1(); ++x) {
        auto& l = label[static_cast<std::size_t>(y) * w_blocks + x];
        if (l != -1) return false;
        l = static_cast<int>(k);
      }
  }
  for (const auto& f : fine) {
    if (f.x0 < 0 || f.y0 < 0 || f.x1() >= w_blocks || f.y1() >= h_blocks) return false;
    const int want = label[static_cast<std::size_t>(f.y0) * w_blocks + f.x0];
    if (want < 0) return false;
    for (int y = f.y0; y <= f.y1(); ++y)
      for (int x = f.x0; x <= f.x1(); ++x)
        if (label[static_cast<std::size_t>(y) * w_blocks + x] != want) return false;
  }
  return true;
}

/// Gray frame replicated into RGB, for driving the full resize pipeline.
inline RgbImage to_rgb(const GrayImage& g) {
  RgbImage out(g.width(), g.height());
  for (int y = 0; y < g.height(); ++y)
    for (int x = 0; x < g.width(); ++x) {
      const auto v = g.at(x, y);
      out.set(x, y, v, v, v);
    }
  return out;
}

/// Signature of a chunk computed straight from pixels.
inline std::vector<std::vector<int>> naive_signature(const GrayImage& g, const BlockRect& chunk,
                                                     int block) {
  std::vector<std::vector<int>> s(static_cast<std::size_t>(chunk.h),
                                  std::vector<int>(static_cast<std::size_t>(chunk.w)));
  for (int i = 0; i < chunk.h; ++i)
    for (int j = 0; j < chunk.w; ++j) {
      double sum = 0;
      for (int y = 0; y < block; ++y)
        for (int x = 0; x < block; ++x) sum += g.at((chunk.x0 + j) * block + x, (chunk.y0 + i) * block + y);
      s[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          static_cast<int>(std::floor(sum / (block * block) + 0.5));
    }
  return s;
}

/// Image whose 28-px blocks take the given values (row-major, rows x cols).
inline GrayImage blocks_image(const std::vector<std::vector<int>>& v, int block = 28) {
  const int rows = static_cast<int>(v.size());
  const int cols = static_cast<int>(v[0].size());
  GrayImage g(cols * block, rows * block);
  for (int y = 0; y < rows * block; ++y)
    for (int x = 0; x < cols * block; ++x)
      g.at(x, y) = static_cast<std::uint8_t>(v[static_cast<std::size_t>(y / block)][static_cast<std::size_t>(x / block)]);
  return g;
}

}  // namespace quadtok::testing
