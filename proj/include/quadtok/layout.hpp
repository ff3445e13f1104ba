#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <vector>

#include "quadtok/error.hpp"
#include "quadtok/raster.hpp"

namespace quadtok {

/// Vision-encoder geometry: a merged token covers merge_size x merge_size patches.
struct GridConfig {
  int patch_size = 14;
  int merge_size = 2;

  int block() const { return patch_size * merge_size; }

  friend bool operator==(const GridConfig&, const GridConfig&) = default;
};

/// Side length in pixels of one merged-token block.
constexpr int block_size(int patch_size, int merge_size) {
  if (patch_size < 1 || merge_size < 1) {
    throw PreconditionError("block_size: patch and merge size must be >= 1");
  }
  return patch_size * merge_size;
}

/// Coordinate on the merged-token grid.
struct BlockCoord {
  int x = 0;
  int y = 0;

  friend bool operator==(const BlockCoord&, const BlockCoord&) = default;
  friend auto operator<=>(const BlockCoord&, const BlockCoord&) = default;
};

/// Rectangle on the merged-token grid, in whole blocks.
struct BlockRect {
  int x0 = 0;
  int y0 = 0;
  int w = 1;
  int h = 1;

  constexpr int x1() const { return x0 + w - 1; }
  constexpr int y1() const { return y0 + h - 1; }
  constexpr long long area() const { return static_cast<long long>(w) * h; }

  constexpr bool contains(const BlockRect& o) const {
    return o.x0 >= x0 && o.y0 >= y0 && o.x1() <= x1() && o.y1() <= y1();
  }
  constexpr bool contains(BlockCoord c) const {
    return c.x >= x0 && c.x <= x1() && c.y >= y0 && c.y <= y1();
  }

  constexpr BlockRect translated(int dx, int dy) const { return {x0 + dx, y0 + dy, w, h}; }

  constexpr PixelRect pixels(int block) const { return {x0 * block, y0 * block, w * block, h * block}; }

  friend bool operator==(const BlockRect&, const BlockRect&) = default;
  friend auto operator<=>(const BlockRect&, const BlockRect&) = default;
};

/// floor(log2(n)) for n >= 1, exact on integers.
constexpr int floor_log2(unsigned long long n) {
  return static_cast<int>(std::bit_width(n)) - 1;
}

/// Centered square-chunk tiling of a block-aligned image plus its 1x1 margin leaves.
struct ChunkLayout {
  int width = 0;   // pixels
  int height = 0;  // pixels
  int block = 0;   // pixels
  int w_blocks = 0;
  int h_blocks = 0;
  int depth = 0;
  int chunk_px = 0;      // chunk side C in pixels
  int chunk_blocks = 0;  // chunk side in blocks, 2^(depth-1)
  int n_x = 0;
  int n_y = 0;
  int off_x = 0;  // pixels, multiple of block
  int off_y = 0;
  std::vector<BlockRect> chunks;   // row-major
  std::vector<BlockRect> margins;  // row-major, 1x1 each

  long long dense_tokens() const { return static_cast<long long>(w_blocks) * h_blocks; }

  /// Chunk-region bounds in blocks.
  BlockRect chunk_region() const {
    return {off_x / block, off_y / block, n_x * chunk_blocks, n_y * chunk_blocks};
  }

  friend bool operator==(const ChunkLayout&, const ChunkLayout&) = default;
};

inline ChunkLayout compute_chunk_layout(int width, int height, int block) {
  if (block < 1) {
    throw PreconditionError("compute_chunk_layout: block size must be >= 1");
  }
  if (width < block || height < block || width % block != 0 || height % block != 0) {
    throw PreconditionError("compute_chunk_layout: image dimensions must be positive multiples "
                            "of the block size");
  }
  ChunkLayout l;
  l.width = width;
  l.height = height;
  l.block = block;
  l.w_blocks = width / block;
  l.h_blocks = height / block;
  const int d_w = floor_log2(static_cast<unsigned>(l.w_blocks));
  const int d_h = floor_log2(static_cast<unsigned>(l.h_blocks));
  l.depth = std::max(1, std::min(d_h, d_w));
  l.chunk_blocks = 1 << (l.depth - 1);
  l.chunk_px = block * l.chunk_blocks;
  l.n_x = width / l.chunk_px;
  l.n_y = height / l.chunk_px;
  // Centering snaps down to the block grid.
  l.off_x = ((width - l.n_x * l.chunk_px) / (2 * block)) * block;
  l.off_y = ((height - l.n_y * l.chunk_px) / (2 * block)) * block;

  const BlockRect region = l.chunk_region();
  l.chunks.reserve(static_cast<std::size_t>(l.n_x) * static_cast<std::size_t>(l.n_y));
  for (int cy = 0; cy < l.n_y; ++cy) {
    for (int cx = 0; cx < l.n_x; ++cx) {
      l.chunks.push_back({region.x0 + cx * l.chunk_blocks, region.y0 + cy * l.chunk_blocks,
                          l.chunk_blocks, l.chunk_blocks});
    }
  }
  l.margins.reserve(static_cast<std::size_t>(l.dense_tokens() - region.area()));
  for (int y = 0; y < l.h_blocks; ++y) {
    for (int x = 0; x < l.w_blocks; ++x) {
      if (!region.contains(BlockCoord{x, y})) {
        l.margins.push_back({x, y, 1, 1});
      }
    }
  }
  return l;
}

}  // namespace quadtok
