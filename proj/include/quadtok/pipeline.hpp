#pragma once

#include <optional>
#include <string>
#include <vector>

#include "quadtok/conditional.hpp"
#include "quadtok/error.hpp"
#include "quadtok/layout.hpp"
#include "quadtok/quadtree.hpp"
#include "quadtok/raster.hpp"
#include "quadtok/tokens.hpp"

namespace quadtok {

/// End-to-end settings shared by the CLI subcommands.
struct RunConfig {
  GridConfig grid;
  SplitCriterion::Kind criterion = SplitCriterion::Kind::Variance;
  double alpha = 8.0;
  bool conditional = true;
  bool resize = true;
  ConditionalParams params;

  SplitCriterion split() const { return make_criterion(criterion, alpha); }

  void validate() const {
    if (grid.patch_size < 1 || grid.merge_size < 1) {
      throw PreconditionError("patch and merge size must be >= 1");
    }
    (void)split();
    params.validate();
  }
};

/// Everything computed for one frame.
struct Reduction {
  int source_width = 0;
  int source_height = 0;
  ChunkLayout layout;
  LeafPartition partition;
  TokenSelection selection;
  PackedGrid packed;
  std::vector<ModeDecision> decisions;  // empty for single-image runs
  CompressionReport report;
};

/// Resizes (when enabled) and converts to a grayscale frame on the block grid.
inline Frame prepare_frame(const RgbImage& img, const RunConfig& cfg) {
  const int b = cfg.grid.block();
  if (cfg.resize) {
    return Frame(to_grayscale(resize_to_block_multiple(img, b)));
  }
  if (img.width() % b != 0 || img.height() % b != 0) {
    throw PreconditionError("image is " + std::to_string(img.width()) + "x" +
                            std::to_string(img.height()) +
                            ", not a multiple of the block size " + std::to_string(b) +
                            " (drop --no-resize to resample)");
  }
  return Frame(to_grayscale(img));
}

namespace detail {

inline Reduction finish_reduction(int src_w, int src_h, LeafPartition partition,
                                  std::vector<ModeDecision> decisions, bool with_tallies) {
  Reduction r;
  r.source_width = src_w;
  r.source_height = src_h;
  r.layout = partition.layout;
  r.selection = select_tokens(partition);
  r.packed = pack_grid(static_cast<int>(r.selection.entries.size()), r.layout.w_blocks,
                       r.layout.h_blocks);
  r.decisions = std::move(decisions);
  r.report = compression_report(r.selection, partition, with_tallies ? &r.decisions : nullptr);
  r.partition = std::move(partition);
  return r;
}

}  // namespace detail

/// Independent reduction of a single prepared frame.
inline Reduction reduce_frame(const Frame& frame, const RunConfig& cfg, int src_w, int src_h) {
  cfg.validate();
  const auto layout = compute_chunk_layout(frame.width(), frame.height(), cfg.grid.block());
  auto partition = partition_image(frame, layout, cfg.grid, cfg.split());
  return detail::finish_reduction(src_w, src_h, std::move(partition), {}, false);
}

inline Reduction reduce_image(const RgbImage& img, const RunConfig& cfg) {
  return reduce_frame(prepare_frame(img, cfg), cfg, img.width(), img.height());
}

/// Processes an ordered sequence of screenshots, carrying state between frames.
/// One instance per trajectory; not shared across threads.
class TrajectoryReducer {
 public:
  explicit TrajectoryReducer(RunConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

  Reduction push(const RgbImage& img) {
    return push_frame(prepare_frame(img, cfg_), img.width(), img.height());
  }

  Reduction push_frame(const Frame& frame, int src_w, int src_h) {
    const auto layout = compute_chunk_layout(frame.width(), frame.height(), cfg_.grid.block());
    ++frames_;
    if (!cfg_.conditional) {
      auto partition = partition_image(frame, layout, cfg_.grid, cfg_.split());
      std::vector<ModeDecision> modes(layout.chunks.size());
      return detail::finish_reduction(src_w, src_h, std::move(partition), std::move(modes), true);
    }
    auto result =
        conditional_partition(frame, state_, layout, cfg_.grid, cfg_.split(), cfg_.params);
    state_ = std::move(result.state);
    return detail::finish_reduction(src_w, src_h, std::move(result.partition),
                                    std::move(result.decisions), true);
  }

  int frames() const { return frames_; }
  const RunConfig& config() const { return cfg_; }

 private:
  RunConfig cfg_;
  std::optional<TrajectoryState> state_;
  int frames_ = 0;
};

}  // namespace quadtok
