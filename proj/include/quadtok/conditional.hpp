#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string_view>
#include <vector>

#include "quadtok/error.hpp"
#include "quadtok/layout.hpp"
#include "quadtok/quadtree.hpp"
#include "quadtok/raster.hpp"

namespace quadtok {

/// Thresholds for the static / shifted / replaced decision.
struct ConditionalParams {
  double tau_static = 0.97;
  double tau_shift = 0.94;
  double gamma = 0.03;
  double rho_min = 0.5;
  int d_max = 4;  // blocks

  void validate() const {
    auto unit = [](double v) { return v > 0.0 && v <= 1.0; };
    if (!unit(tau_static) || !unit(tau_shift) || !unit(rho_min) || !(gamma >= 0.0) ||
        d_max < 0) {
      throw PreconditionError("ConditionalParams: thresholds out of range");
    }
  }

  friend bool operator==(const ConditionalParams&, const ConditionalParams&) = default;
};

/// Block shift. di moves rows (vertical), dj moves columns (horizontal):
/// current(i, j) is compared against previous(i - di, j - dj).
struct Shift {
  int di = 0;
  int dj = 0;

  friend bool operator==(const Shift&, const Shift&) = default;
};

/// Per-block rounded mean grayscale of one chunk.
class ChunkSignature {
 public:
  ChunkSignature() = default;
  ChunkSignature(int rows, int cols, std::uint8_t fill = 0)
      : rows_(rows), cols_(cols), cells_(static_cast<std::size_t>(rows) * cols, fill) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::uint8_t at(int i, int j) const { return cells_[index(i, j)]; }
  std::uint8_t& at(int i, int j) { return cells_[index(i, j)]; }

  friend bool operator==(const ChunkSignature&, const ChunkSignature&) = default;

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(j);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::uint8_t> cells_;
};

inline ChunkSignature compute_signature(const Frame& frame, const BlockRect& chunk, int block) {
  if (!frame.gray.contains(chunk.pixels(block))) {
    throw BoundsError("compute_signature: chunk outside image");
  }
  ChunkSignature sig(chunk.h, chunk.w);
  const std::uint64_t n = static_cast<std::uint64_t>(block) * block;
  for (int i = 0; i < chunk.h; ++i) {
    for (int j = 0; j < chunk.w; ++j) {
      const BlockRect cell{chunk.x0 + j, chunk.y0 + i, 1, 1};
      const std::uint64_t s = frame.sat.region_sum(cell.pixels(block));
      sig.at(i, j) = static_cast<std::uint8_t>((2 * s + n) / (2 * n));
    }
  }
  return sig;
}

namespace detail {

inline void require_same_dims(const ChunkSignature& a, const ChunkSignature& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() < 1 || a.cols() < 1) {
    throw PreconditionError("signature dimensions differ");
  }
}

/// Sum of absolute differences over the overlap, and the overlap size.
struct OverlapDiff {
  std::uint64_t abs_sum = 0;
  std::uint64_t count = 0;
};

inline OverlapDiff overlap_diff(const ChunkSignature& cur, const ChunkSignature& prev, Shift d) {
  OverlapDiff r;
  const int i_lo = std::max(0, d.di);
  const int i_hi = std::min(cur.rows(), cur.rows() + d.di);
  const int j_lo = std::max(0, d.dj);
  const int j_hi = std::min(cur.cols(), cur.cols() + d.dj);
  for (int i = i_lo; i < i_hi; ++i) {
    for (int j = j_lo; j < j_hi; ++j) {
      r.abs_sum += static_cast<std::uint64_t>(
          std::abs(static_cast<int>(cur.at(i, j)) - static_cast<int>(prev.at(i - d.di, j - d.dj))));
      ++r.count;
    }
  }
  return r;
}

inline double similarity_of(const OverlapDiff& o) {
  if (o.count == 0) return 0.0;
  return 1.0 - static_cast<double>(o.abs_sum) / (255.0 * static_cast<double>(o.count));
}

}  // namespace detail

/// 1 - sum|S_t - S_prev| / (255 * rows * cols).
inline double similarity(const ChunkSignature& cur, const ChunkSignature& prev) {
  detail::require_same_dims(cur, prev);
  return detail::similarity_of(detail::overlap_diff(cur, prev, {0, 0}));
}

struct ShiftedSimilarity {
  double sim = 0.0;
  double rho = 0.0;  // overlap fraction
};

inline ShiftedSimilarity shifted_similarity(const ChunkSignature& cur,
                                            const ChunkSignature& prev, Shift delta) {
  detail::require_same_dims(cur, prev);
  const auto o = detail::overlap_diff(cur, prev, delta);
  const double total = static_cast<double>(cur.rows()) * cur.cols();
  return {detail::similarity_of(o), static_cast<double>(o.count) / total};
}

enum class Mode { Static, Shifted, Replaced };

constexpr std::string_view mode_name(Mode m) {
  switch (m) {
    case Mode::Static:
      return "static";
    case Mode::Shifted:
      return "shifted";
    case Mode::Replaced:
      return "replaced";
  }
  return "replaced";
}

struct ModeDecision {
  Mode mode = Mode::Replaced;
  Shift delta;  // meaningful for Shifted only
  double sim_zero = 0.0;
  std::optional<double> best_sim;  // absent for Static and first frames

  friend bool operator==(const ModeDecision&, const ModeDecision&) = default;
};

/// Static if the zero-shift similarity clears tau_static; otherwise searches
/// |di|, |dj| <= d_max over shifts with overlap >= rho_min for the best match.
/// Ties prefer the smaller |di| + |dj|, then row-major (di, then dj) order.
inline ModeDecision classify_mode(const ChunkSignature& cur, const ChunkSignature& prev,
                                  const ConditionalParams& params) {
  detail::require_same_dims(cur, prev);
  ModeDecision out;
  out.sim_zero = similarity(cur, prev);
  if (out.sim_zero >= params.tau_static) {
    out.mode = Mode::Static;
    return out;
  }

  const std::uint64_t total = static_cast<std::uint64_t>(cur.rows()) * cur.cols();
  bool found = false;
  detail::OverlapDiff best;
  Shift best_delta;
  for (int di = -params.d_max; di <= params.d_max; ++di) {
    for (int dj = -params.d_max; dj <= params.d_max; ++dj) {
      const auto o = detail::overlap_diff(cur, prev, {di, dj});
      if (o.count == 0 || static_cast<double>(o.count) < params.rho_min * static_cast<double>(total)) {
        continue;
      }
      bool better = !found;
      if (found) {
        // Compare abs_sum / count exactly; lower mean difference is higher similarity.
        const unsigned __int128 lhs = static_cast<unsigned __int128>(o.abs_sum) * best.count;
        const unsigned __int128 rhs = static_cast<unsigned __int128>(best.abs_sum) * o.count;
        if (lhs < rhs) {
          better = true;
        } else if (lhs == rhs) {
          // Row-major iteration already visits earlier candidates first, so only a
          // strictly smaller L1 norm displaces the incumbent.
          better = std::abs(di) + std::abs(dj) < std::abs(best_delta.di) + std::abs(best_delta.dj);
        }
      }
      if (better) {
        found = true;
        best = o;
        best_delta = {di, dj};
      }
    }
  }
  if (!found) {
    return out;
  }
  const double best_sim = detail::similarity_of(best);
  out.best_sim = best_sim;
  if (best_sim >= params.tau_shift && best_sim >= out.sim_zero + params.gamma) {
    out.mode = Mode::Shifted;
    out.delta = best_delta;
  }
  return out;
}

/// Previous-frame leaves usable as priors for the current chunk.
inline std::vector<BlockRect> prior_leaves(const ModeDecision& decision,
                                           const std::vector<BlockRect>& prev_leaves,
                                           const BlockRect& chunk) {
  switch (decision.mode) {
    case Mode::Static:
      return prev_leaves;
    case Mode::Shifted: {
      std::vector<BlockRect> out;
      for (const auto& leaf : prev_leaves) {
        // Coarse means max(pixel w, pixel h) >= 2b, i.e. at least two blocks.
        if (std::max(leaf.w, leaf.h) < 2) continue;
        const BlockRect moved = leaf.translated(decision.delta.dj, decision.delta.di);
        if (chunk.contains(moved)) out.push_back(moved);
      }
      return out;
    }
    case Mode::Replaced:
      break;
  }
  return {};
}

/// Replaces each independent leaf by the priors it contains when they cover it exactly.
inline std::vector<BlockRect> refine_partition(const std::vector<BlockRect>& independent,
                                               const std::vector<BlockRect>& priors) {
  std::vector<BlockRect> out;
  out.reserve(independent.size());
  std::vector<BlockRect> inside;
  for (const auto& leaf : independent) {
    inside.clear();
    long long area = 0;
    for (const auto& p : priors) {
      if (leaf.contains(p)) {
        inside.push_back(p);
        area += p.area();
      }
    }
    if (!inside.empty() && area == leaf.area()) {
      out.insert(out.end(), inside.begin(), inside.end());
    } else {
      out.push_back(leaf);
    }
  }
  return out;
}

/// What the next frame needs from this one.
struct TrajectoryState {
  int width = 0;
  int height = 0;
  int block = 0;
  std::vector<std::vector<BlockRect>> chunk_leaves;
  std::vector<ChunkSignature> signatures;
};

struct ConditionalResult {
  LeafPartition partition;
  std::vector<ModeDecision> decisions;  // one per chunk
  TrajectoryState state;
};

inline ConditionalResult conditional_partition(const Frame& frame,
                                               const std::optional<TrajectoryState>& state,
                                               const ChunkLayout& layout, const GridConfig& config,
                                               const SplitCriterion& criterion,
                                               const ConditionalParams& params) {
  params.validate();
  ConditionalResult r;
  r.partition = partition_image(frame, layout, config, criterion);
  r.decisions.assign(layout.chunks.size(), ModeDecision{});

  r.state.width = layout.width;
  r.state.height = layout.height;
  r.state.block = layout.block;
  r.state.signatures.reserve(layout.chunks.size());
  for (const auto& chunk : layout.chunks) {
    r.state.signatures.push_back(compute_signature(frame, chunk, layout.block));
  }

  const bool comparable = state && state->width == layout.width &&
                          state->height == layout.height && state->block == layout.block &&
                          state->chunk_leaves.size() == layout.chunks.size() &&
                          state->signatures.size() == layout.chunks.size();
  if (comparable) {
    for (std::size_t k = 0; k < layout.chunks.size(); ++k) {
      const auto decision =
          classify_mode(r.state.signatures[k], state->signatures[k], params);
      r.decisions[k] = decision;
      const auto priors = prior_leaves(decision, state->chunk_leaves[k], layout.chunks[k]);
      if (!priors.empty()) {
        r.partition.chunk_leaves[k] = refine_partition(r.partition.chunk_leaves[k], priors);
      }
    }
  }
  r.state.chunk_leaves = r.partition.chunk_leaves;
  return r;
}

}  // namespace quadtok
