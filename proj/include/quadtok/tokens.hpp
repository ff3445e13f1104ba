#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <tuple>
#include <vector>

#include "quadtok/conditional.hpp"
#include "quadtok/error.hpp"
#include "quadtok/layout.hpp"
#include "quadtok/quadtree.hpp"

namespace quadtok {

/// Contiguous run of dense patch-tensor rows {first, ..., first + count - 1}.
struct PatchRows {
  std::int64_t first = 0;
  std::int64_t count = 0;

  std::int64_t last() const { return first + count - 1; }

  std::vector<std::int64_t> indices() const {
    std::vector<std::int64_t> out(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = first + i;
    return out;
  }

  friend bool operator==(const PatchRows&, const PatchRows&) = default;
};

/// Rows of the dense patch tensor that make up the merged token at `coord`:
/// k = (y * w_blocks + x) * m^2, then m^2 consecutive rows.
inline PatchRows patch_rows(BlockCoord coord, int w_blocks, int h_blocks, int merge_size) {
  if (merge_size < 1 || w_blocks < 1 || h_blocks < 1) {
    throw PreconditionError("patch_rows: grid and merge size must be >= 1");
  }
  if (coord.x < 0 || coord.y < 0 || coord.x >= w_blocks || coord.y >= h_blocks) {
    throw PreconditionError("patch_rows: coordinate outside dense grid");
  }
  const std::int64_t m2 = static_cast<std::int64_t>(merge_size) * merge_size;
  return {(static_cast<std::int64_t>(coord.y) * w_blocks + coord.x) * m2, m2};
}

struct TokenEntry {
  BlockRect leaf;
  BlockCoord coord;
  PatchRows rows;

  friend bool operator==(const TokenEntry&, const TokenEntry&) = default;
};

/// Retained tokens in raster order of their representative coordinate.
struct TokenSelection {
  std::vector<TokenEntry> entries;
  int w_blocks = 0;
  int h_blocks = 0;
  int merge_size = 0;

  friend bool operator==(const TokenSelection&, const TokenSelection&) = default;
};

inline TokenSelection select_tokens(const LeafPartition& partition) {
  TokenSelection sel;
  sel.w_blocks = partition.layout.w_blocks;
  sel.h_blocks = partition.layout.h_blocks;
  sel.merge_size = partition.config.merge_size;
  sel.entries.reserve(partition.leaf_count());
  auto add = [&](const BlockRect& leaf) {
    const BlockCoord c = representative(leaf);
    sel.entries.push_back({leaf, c, patch_rows(c, sel.w_blocks, sel.h_blocks, sel.merge_size)});
  };
  for (const auto& leaves : partition.chunk_leaves) {
    for (const auto& leaf : leaves) add(leaf);
  }
  for (const auto& leaf : partition.margins) add(leaf);
  std::sort(sel.entries.begin(), sel.entries.end(), [](const TokenEntry& a, const TokenEntry& b) {
    return std::tie(a.coord.y, a.coord.x) < std::tie(b.coord.y, b.coord.x);
  });
  return sel;
}

/// Near-aspect rectangle holding N tokens; trailing slots repeat the last token.
struct PackedGrid {
  int rows = 0;  // H_g
  int cols = 0;  // W_g
  int count = 0;  // N, real tokens
  int pad_count = 0;

  int slots() const { return rows * cols; }
  /// Index into TokenSelection::entries for a slot in row-major order.
  int entry_for_slot(int slot) const { return std::min(slot, count - 1); }
  bool is_pad(int slot) const { return slot >= count; }

  friend bool operator==(const PackedGrid&, const PackedGrid&) = default;
};

/// W_g = max(1, round(sqrt(N * w / h))), H_g = ceil(N / W_g).
inline PackedGrid pack_grid(int n, int w_blocks, int h_blocks) {
  if (n < 1 || w_blocks < 1 || h_blocks < 1) {
    throw PreconditionError("pack_grid: token count and grid dims must be >= 1");
  }
  PackedGrid g;
  g.count = n;
  const double aspect_cols = std::sqrt(static_cast<double>(n) * w_blocks / h_blocks);
  g.cols = std::max(1, static_cast<int>(std::lround(aspect_cols)));
  g.rows = (n + g.cols - 1) / g.cols;
  g.pad_count = g.slots() - n;
  return g;
}

struct ModeTallies {
  int static_chunks = 0;
  int shifted_chunks = 0;
  int replaced_chunks = 0;

  friend bool operator==(const ModeTallies&, const ModeTallies&) = default;
};

struct CompressionReport {
  long long dense_tokens = 0;
  long long kept_tokens = 0;
  double compression_rate = 0.0;
  std::vector<int> chunk_leaf_counts;
  std::optional<ModeTallies> tallies;

  friend bool operator==(const CompressionReport&, const CompressionReport&) = default;
};

inline CompressionReport compression_report(const TokenSelection& selection,
                                            const LeafPartition& partition,
                                            const std::vector<ModeDecision>* decisions = nullptr) {
  CompressionReport r;
  r.dense_tokens = static_cast<long long>(selection.w_blocks) * selection.h_blocks;
  r.kept_tokens = static_cast<long long>(selection.entries.size());
  if (r.dense_tokens < 1 || r.kept_tokens < 1) {
    throw PreconditionError("compression_report: empty selection");
  }
  r.compression_rate = 1.0 - static_cast<double>(r.kept_tokens) / static_cast<double>(r.dense_tokens);
  r.chunk_leaf_counts.reserve(partition.chunk_leaves.size());
  for (const auto& leaves : partition.chunk_leaves) {
    r.chunk_leaf_counts.push_back(static_cast<int>(leaves.size()));
  }
  if (decisions) {
    ModeTallies t;
    for (const auto& d : *decisions) {
      switch (d.mode) {
        case Mode::Static:
          ++t.static_chunks;
          break;
        case Mode::Shifted:
          ++t.shifted_chunks;
          break;
        case Mode::Replaced:
          ++t.replaced_chunks;
          break;
      }
    }
    r.tallies = t;
  }
  return r;
}

}  // namespace quadtok
