#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "quadtok/error.hpp"
#include "quadtok/layout.hpp"
#include "quadtok/raster.hpp"

namespace quadtok {

/// Scores a node and decides whether it subdivides.
///
/// Variance: score = (pixel area) * Var(gray), split while score > 1000 * alpha.
/// Gradient: score = max forward-difference gradient magnitude, split while score > alpha.
class SplitCriterion {
 public:
  enum class Kind { Variance, Gradient };

  static constexpr double kVarianceScale = 1000.0;

  static SplitCriterion variance(double alpha) { return {Kind::Variance, alpha}; }
  static SplitCriterion gradient(double alpha) { return {Kind::Gradient, alpha}; }

  Kind kind() const { return kind_; }
  double alpha() const { return alpha_; }

  double threshold() const {
    return kind_ == Kind::Variance ? kVarianceScale * alpha_ : alpha_;
  }

  std::string_view name() const { return kind_ == Kind::Variance ? "variance" : "gradient"; }

  friend bool operator==(const SplitCriterion&, const SplitCriterion&) = default;

 private:
  SplitCriterion(Kind kind, double alpha) : kind_(kind), alpha_(alpha) {
    if (!(alpha > 0.0)) {
      throw PreconditionError("SplitCriterion: alpha must be > 0");
    }
  }

  Kind kind_;
  double alpha_;
};

inline SplitCriterion::Kind parse_criterion_kind(std::string_view s) {
  if (s == "variance") return SplitCriterion::Kind::Variance;
  if (s == "gradient") return SplitCriterion::Kind::Gradient;
  throw PreconditionError("unknown criterion '" + std::string(s) +
                          "' (expected variance or gradient)");
}

inline SplitCriterion make_criterion(SplitCriterion::Kind kind, double alpha) {
  return kind == SplitCriterion::Kind::Variance ? SplitCriterion::variance(alpha)
                                                : SplitCriterion::gradient(alpha);
}

inline double node_score(const SplitCriterion& criterion, const Frame& frame,
                         const BlockRect& node, int block) {
  const PixelRect r = node.pixels(block);
  if (!frame.gray.contains(r)) {
    throw BoundsError("node_score: node outside image");
  }
  if (criterion.kind() == SplitCriterion::Kind::Variance) {
    // w*h*Var = (n*sum(x^2) - sum(x)^2) / n with a single rounding step.
    const long double n = static_cast<long double>(r.w) * r.h;
    return static_cast<double>(
        static_cast<long double>(scaled_variance_numerator(frame.sat, r)) / n);
  }
  return region_max_gradient(frame.gray, r);
}

inline bool should_split(const SplitCriterion& criterion, double score, const BlockRect& node) {
  if (node.w <= 1 && node.h <= 1) {
    return false;
  }
  return score > criterion.threshold();
}

namespace detail {

inline void build_quadtree_rec(const BlockRect& node, const SplitCriterion& criterion,
                               const Frame& frame, int block, std::vector<BlockRect>& out) {
  if (!should_split(criterion, node_score(criterion, frame, node, block), node)) {
    out.push_back(node);
    return;
  }
  const int hw = node.w / 2;
  const int hh = node.h / 2;
  // top-left, top-right, bottom-left, bottom-right
  build_quadtree_rec({node.x0, node.y0, hw, hh}, criterion, frame, block, out);
  build_quadtree_rec({node.x0 + hw, node.y0, hw, hh}, criterion, frame, block, out);
  build_quadtree_rec({node.x0, node.y0 + hh, hw, hh}, criterion, frame, block, out);
  build_quadtree_rec({node.x0 + hw, node.y0 + hh, hw, hh}, criterion, frame, block, out);
}

}  // namespace detail

/// Depth-first adaptive quadtree inside one square power-of-two chunk.
inline std::vector<BlockRect> build_chunk_quadtree(const BlockRect& chunk,
                                                   const SplitCriterion& criterion,
                                                   const Frame& frame, int block) {
  if (chunk.w != chunk.h || chunk.w < 1 || !std::has_single_bit(static_cast<unsigned>(chunk.w))) {
    throw PreconditionError("build_chunk_quadtree: chunk side must be a power of two in blocks");
  }
  std::vector<BlockRect> leaves;
  detail::build_quadtree_rec(chunk, criterion, frame, block, leaves);
  return leaves;
}

/// Quadtree leaves of every chunk plus the layout's margin leaves.
struct LeafPartition {
  GridConfig config;
  ChunkLayout layout;
  std::vector<std::vector<BlockRect>> chunk_leaves;  // indexed like layout.chunks
  std::vector<BlockRect> margins;

  std::size_t leaf_count() const {
    std::size_t n = margins.size();
    for (const auto& c : chunk_leaves) n += c.size();
    return n;
  }

  /// Chunk leaves in chunk order, then margins.
  std::vector<BlockRect> all_leaves() const {
    std::vector<BlockRect> out;
    out.reserve(leaf_count());
    for (const auto& c : chunk_leaves) out.insert(out.end(), c.begin(), c.end());
    out.insert(out.end(), margins.begin(), margins.end());
    return out;
  }

  friend bool operator==(const LeafPartition&, const LeafPartition&) = default;
};

inline LeafPartition partition_image(const Frame& frame, const ChunkLayout& layout,
                                     const GridConfig& config, const SplitCriterion& criterion) {
  if (frame.width() != layout.width || frame.height() != layout.height ||
      layout.block != config.block()) {
    throw PreconditionError("partition_image: layout does not match frame or grid config");
  }
  LeafPartition p;
  p.config = config;
  p.layout = layout;
  p.chunk_leaves.reserve(layout.chunks.size());
  for (const auto& chunk : layout.chunks) {
    p.chunk_leaves.push_back(build_chunk_quadtree(chunk, criterion, frame, layout.block));
  }
  p.margins = layout.margins;
  return p;
}

/// Center block of a leaf: floor((x0+x1)/2), floor((y0+y1)/2).
constexpr BlockCoord representative(const BlockRect& leaf) {
  return {(leaf.x0 + leaf.x1()) / 2, (leaf.y0 + leaf.y1()) / 2};
}

}  // namespace quadtok
