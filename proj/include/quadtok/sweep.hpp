#pragma once

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "quadtok/pipeline.hpp"

namespace quadtok {

/// Alpha values swept by default for each criterion.
inline std::vector<double> default_alphas(SplitCriterion::Kind kind) {
  if (kind == SplitCriterion::Kind::Variance) return {1, 4, 8, 16, 32, 64};
  return {10, 15, 30, 60, 120};
}

struct SweepRow {
  std::string criterion;
  double alpha = 0.0;
  double mean_compression_rate = 0.0;
  double mean_kept_tokens = 0.0;
  int images = 0;
};

/// Mean compression per alpha over prepared frames; rows sorted by alpha.
inline std::vector<SweepRow> run_sweep(const std::vector<Frame>& frames, const RunConfig& base,
                                       SplitCriterion::Kind kind, std::vector<double> alphas) {
  if (frames.empty()) {
    throw PreconditionError("sweep: empty corpus");
  }
  std::sort(alphas.begin(), alphas.end());
  alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());
  std::vector<SweepRow> rows;
  rows.reserve(alphas.size());
  for (double alpha : alphas) {
    RunConfig cfg = base;
    cfg.criterion = kind;
    cfg.alpha = alpha;
    SweepRow row{std::string(cfg.split().name()), alpha, 0.0, 0.0,
                 static_cast<int>(frames.size())};
    for (const auto& f : frames) {
      const auto red = reduce_frame(f, cfg, f.width(), f.height());
      row.mean_compression_rate += red.report.compression_rate;
      row.mean_kept_tokens += static_cast<double>(red.report.kept_tokens);
    }
    row.mean_compression_rate /= static_cast<double>(frames.size());
    row.mean_kept_tokens /= static_cast<double>(frames.size());
    rows.push_back(row);
  }
  return rows;
}

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "criterion,alpha,mean_compression_rate,mean_kept_tokens,images\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%g,%.6f,%.6f,%d\n", r.criterion.c_str(), r.alpha,
                  r.mean_compression_rate, r.mean_kept_tokens, r.images);
    os << buf;
  }
}

}  // namespace quadtok
