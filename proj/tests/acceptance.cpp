// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
//   acceptance [--only N]

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"

using namespace quadtok;
namespace qt = quadtok::testing;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

Frame prepared(const RgbImage& img) { return prepare_frame(img, RunConfig{}); }

LeafPartition independent(const Frame& f, double alpha = 8.0) {
  const auto layout = compute_chunk_layout(f.width(), f.height(), 28);
  return partition_image(f, layout, GridConfig{}, SplitCriterion::variance(alpha));
}

/// Shifts a gray frame by (sx, sy) pixels, filling uncovered pixels with noise.
GrayImage shifted(const GrayImage& g, int sx, int sy, std::mt19937_64& rng) {
  GrayImage out(g.width(), g.height());
  for (int y = 0; y < g.height(); ++y)
    for (int x = 0; x < g.width(); ++x) {
      const int src_x = x - sx, src_y = y - sy;
      out.at(x, y) = (src_x >= 0 && src_y >= 0 && src_x < g.width() && src_y < g.height())
                         ? g.at(src_x, src_y)
                         : static_cast<std::uint8_t>(rng() & 0xFF);
    }
  return out;
}

// 1. Tiling soundness over mixed random images, independent and conditional.
Outcome tiling_soundness() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1001);
  int violations = 0, partitions = 0;
  for (int i = 0; i < 200; ++i) {
    const auto kind = static_cast<qt::Content>(i % 3);
    // Mostly screen-sized, with a tail of tiny and extreme aspect ratios.
    const int w = 28 + static_cast<int>(rng() % (2408 - 28 + 1));
    const int h = (i % 5 == 0) ? 28 + static_cast<int>(rng() % 200)
                               : 28 + static_cast<int>(rng() % (2408 - 28 + 1));
    const auto raw = qt::make_gray(rng, kind, w, h);
    const Frame a = prepared(qt::to_rgb(raw));
    const auto pa = independent(a);
    ++partitions;
    if (!qt::tiles_exactly(pa)) ++violations;

    // Second frame: identical, block-shifted, or redrawn.
    const int variant = static_cast<int>(rng() % 3);
    GrayImage next = a.gray;
    if (variant == 1) {
      const int sx = 28 * (static_cast<int>(rng() % 9) - 4);
      const int sy = 28 * (static_cast<int>(rng() % 9) - 4);
      next = shifted(a.gray, sx, sy, rng);
    } else if (variant == 2) {
      next = qt::make_gray(rng, qt::Content::Panels, a.width(), a.height());
    }
    const Frame b(std::move(next));
    const auto layout = pa.layout;
    const auto r1 = conditional_partition(a, std::nullopt, layout, GridConfig{},
                                          SplitCriterion::variance(8), {});
    const auto r2 = conditional_partition(b, r1.state, layout, GridConfig{},
                                          SplitCriterion::variance(8), {});
    partitions += 2;
    if (!qt::tiles_exactly(r1.partition)) ++violations;
    if (!qt::tiles_exactly(r2.partition)) ++violations;
  }
  const double secs = seconds_since(t0);
  return {violations == 0 && secs < 60.0,
          fmt("%d partitions, %d violations, %.1f s (limit 60 s)", partitions, violations, secs)};
}

// 2. Brute-force stop-criterion oracle.
Outcome stop_criterion_oracle() {
  std::mt19937_64 rng(2002);
  qt::OracleResult total;
  long long leaves = 0;
  const double alphas[] = {1, 8, 64};
  for (int i = 0; i < 50; ++i) {
    Frame f = (i % 2 == 0)
                  ? prepared(synth::corpus_image(777, i))
                  : prepared(qt::to_rgb(qt::make_gray(rng, static_cast<qt::Content>(i % 3),
                                                      28 + static_cast<int>(rng() % 1200),
                                                      28 + static_cast<int>(rng() % 1200))));
    const double alpha = alphas[i % 3];
    const auto p = independent(f, alpha);
    const auto o = qt::stop_oracle(f, p, alpha);
    total.leaf_violations += o.leaf_violations;
    total.split_violations += o.split_violations;
    total.structure_errors += o.structure_errors;
    leaves += static_cast<long long>(p.leaf_count());
  }
  const int bad = total.leaf_violations + total.split_violations + total.structure_errors;
  return {bad == 0, fmt("50 images, %lld leaves; leaf=%d split=%d structure=%d violations", leaves,
                        total.leaf_violations, total.split_violations, total.structure_errors)};
}

// 3. Kept tokens non-increasing in alpha; coarser partitions are unions of finer leaves.
Outcome alpha_monotonicity() {
  const std::vector<double> alphas = {1, 4, 8, 16, 32, 64};
  int count_violations = 0, nesting_violations = 0;
  for (int i = 0; i < 20; ++i) {
    const Frame f = prepared(synth::corpus_image(3003, i));
    std::vector<BlockRect> finer;
    std::size_t prev = SIZE_MAX;
    for (double a : alphas) {
      const auto p = independent(f, a);
      auto leaves = p.all_leaves();
      if (leaves.size() > prev) ++count_violations;
      if (!finer.empty() &&
          !qt::refines_grid(finer, leaves, p.layout.w_blocks, p.layout.h_blocks)) {
        ++nesting_violations;
      }
      prev = leaves.size();
      finer = std::move(leaves);
    }
  }
  return {count_violations == 0 && nesting_violations == 0,
          fmt("20 images x 6 alphas; count=%d nesting=%d violations", count_violations,
              nesting_violations)};
}

// 4. Uniform and noise extremes.
Outcome extremes() {
  std::mt19937_64 rng(4004);
  int bad = 0;
  std::string first_bad;
  const int sizes[][2] = {{1080, 2400}, {1440, 900}, {28, 28}, {300, 4000}, {2408, 1092}};
  for (const auto& s : sizes) {
    RunConfig cfg;
    const auto uni = reduce_image(qt::to_rgb(GrayImage(s[0], s[1], 180)), cfg);
    const long long want = static_cast<long long>(uni.layout.chunks.size() + uni.layout.margins.size());
    if (uni.report.kept_tokens != want) {
      ++bad;
      first_bad = fmt("uniform %dx%d kept %lld want %lld", s[0], s[1], uni.report.kept_tokens, want);
    }
    // Noise generated on the block grid so resampling cannot smooth it.
    const auto l = compute_chunk_layout(nearest_block_multiple(s[0], 28),
                                        nearest_block_multiple(s[1], 28), 28);
    cfg.alpha = 1;
    const Frame nf(qt::make_gray(rng, qt::Content::Noise, l.width, l.height));
    const auto noise = reduce_frame(nf, cfg, l.width, l.height);
    if (noise.report.kept_tokens != noise.report.dense_tokens || noise.report.compression_rate != 0.0) {
      ++bad;
      first_bad = fmt("noise %dx%d kept %lld of %lld", s[0], s[1], noise.report.kept_tokens,
                      noise.report.dense_tokens);
    }
  }
  return {bad == 0, bad == 0 ? "5 sizes: uniform = chunks + margins, noise at alpha=1 = dense"
                             : fmt("%d mismatches; %s", bad, first_bad.c_str())};
}

// 5. Constant trajectory.
Outcome conditional_identity() {
  RunConfig cfg;
  TrajectoryReducer r(cfg);
  const auto img = synth::generate_screenshot(5005, 1080, 2400);
  std::vector<Reduction> out;
  for (int i = 0; i < 5; ++i) out.push_back(r.push(img));
  const auto first = out[0].partition.all_leaves();
  int differing = 0, non_static = 0;
  for (int i = 1; i < 5; ++i) {
    if (out[i].partition.all_leaves() != first) ++differing;
    for (const auto& d : out[i].decisions) non_static += d.mode != Mode::Static;
  }
  return {differing == 0 && non_static == 0,
          fmt("frames 2-5: %d partitions differ from frame 1, %d non-static chunks", differing,
              non_static)};
}

// 6. Shift recovery on constructed scroll pairs.
Outcome shift_recovery() {
  std::mt19937_64 rng(6006);
  const int W = 1092, H = 2408, pad = 4 * 28;
  long long eligible = 0, recovered = 0, static_first = 0;
  for (int i = 0; i < 100; ++i) {
    int sx = 0, sy = 0;
    while (sx == 0 && sy == 0) {
      sx = static_cast<int>(rng() % 9) - 4;
      sy = static_cast<int>(rng() % 9) - 4;
    }
    // Page with room for the shift on every side; both frames are block-aligned crops.
    const auto page = synth::generate_screenshot(6006 + static_cast<std::uint64_t>(i), W + 2 * pad,
                                                 H + 2 * pad);
    const auto a = synth::crop(page, pad, pad, W, H);
    const auto b = synth::crop(page, pad + 28 * sx, pad + 28 * sy, W, H);
    // b(y) = a(y + 28 sy), so cur(i) = prev(i - di) with di = -sy.
    const Shift want{-sy, -sx};
    const Frame fa(to_grayscale(a));
    const Frame fb(to_grayscale(b));
    const auto layout = compute_chunk_layout(W, H, 28);
    for (const auto& chunk : layout.chunks) {
      const auto sa = compute_signature(fa, chunk, 28);
      const auto sb = compute_signature(fb, chunk, 28);
      const auto d = classify_mode(sb, sa, ConditionalParams{});
      if (d.mode == Mode::Static) {
        ++static_first;
        continue;
      }
      ++eligible;
      if (d.mode == Mode::Shifted && d.delta == want) ++recovered;
    }
  }
  const double frac = eligible ? static_cast<double>(recovered) / static_cast<double>(eligible) : 0.0;
  return {eligible > 0 && frac >= 0.95,
          fmt("%lld/%lld non-static chunks recovered exact shift (%.2f%%, need >= 95%%); %lld "
              "static-first",
              recovered, eligible, 100.0 * frac, static_first)};
}

// 7. Conditional refinement never coarsens; ablation is never finer on static chunks.
Outcome refinement_never_coarsens() {
  std::mt19937_64 rng(7007);
  int containment = 0, finer_ablation = 0, static_chunks = 0, refined_chunks = 0;
  for (int i = 0; i < 100; ++i) {
    const auto base = synth::generate_screenshot(7007 + static_cast<std::uint64_t>(i), 1092, 2408);
    const Frame a(to_grayscale(base));
    GrayImage g = a.gray;
    switch (i % 4) {
      case 0:  // scroll
        g = shifted(a.gray, 0, -28 * (1 + static_cast<int>(rng() % 4)), rng);
        break;
      case 1:  // faint sensor noise; stays static
        for (auto& p : g.pixels())
          p = static_cast<std::uint8_t>(std::clamp(static_cast<int>(p) + static_cast<int>(rng() % 7) - 3, 0, 255));
        break;
      case 2: {  // local edit: one repainted panel
        const int x0 = static_cast<int>(rng() % 900), y0 = static_cast<int>(rng() % 2200);
        const auto v = static_cast<std::uint8_t>(rng() & 0xFF);
        for (int y = y0; y < std::min(2408, y0 + 60); ++y)
          for (int x = x0; x < std::min(1092, x0 + 180); ++x) g.at(x, y) = v;
        break;
      }
      default:  // different screen
        g = to_grayscale(synth::generate_screenshot(90000 + static_cast<std::uint64_t>(i), 1092, 2408));
    }
    const Frame b(std::move(g));
    const auto layout = compute_chunk_layout(1092, 2408, 28);
    const auto crit = SplitCriterion::variance(8);
    const auto r1 = conditional_partition(a, std::nullopt, layout, GridConfig{}, crit, {});
    const auto r2 = conditional_partition(b, r1.state, layout, GridConfig{}, crit, {});
    const auto ind = partition_image(b, layout, GridConfig{}, crit);
    if (!qt::refines_grid(r2.partition.all_leaves(), ind.all_leaves(), layout.w_blocks,
                          layout.h_blocks)) {
      ++containment;
    }
    for (std::size_t k = 0; k < layout.chunks.size(); ++k) {
      const auto& cond = r2.partition.chunk_leaves[k];
      const auto& abl = ind.chunk_leaves[k];
      if (cond != abl) ++refined_chunks;
      if (r2.decisions[k].mode != Mode::Static) continue;
      ++static_chunks;
      // Strictly finer: the ablation refines the conditional leaves and has more of them.
      if (abl.size() > cond.size() &&
          qt::refines_grid(abl, cond, layout.w_blocks, layout.h_blocks)) {
        ++finer_ablation;
      }
    }
  }
  return {containment == 0 && finer_ablation == 0,
          fmt("100 pairs; containment=%d, ablation finer on %d of %d static chunks; %d chunks refined",
              containment, finer_ablation, static_chunks, refined_chunks)};
}

// 8. Index math against brute-force enumeration.
Outcome index_math() {
  const int w = 39, h = 86, m = 2;
  // Dense tensor order: blocks in raster order, each contributing its m x m
  // patches in raster order.
  std::vector<std::vector<std::int64_t>> rows_of(static_cast<std::size_t>(w * h));
  std::int64_t k = 0;
  for (int by = 0; by < h; ++by)
    for (int bx = 0; bx < w; ++bx)
      for (int py = 0; py < m; ++py)
        for (int px = 0; px < m; ++px) rows_of[static_cast<std::size_t>(by * w + bx)].push_back(k++);
  int bad_rows = 0;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (patch_rows({x, y}, w, h, m).indices() != rows_of[static_cast<std::size_t>(y * w + x)]) {
        ++bad_rows;
      }
    }

  int bad_pack = 0;
  for (auto [gw, gh] : {std::pair{w, h}, std::pair{h, w}}) {
    for (int n = 1; n <= 256; ++n) {
      // round(sqrt(n*gw/gh)) = c  iff  (2c-1)^2 gh <= 4 n gw < (2c+1)^2 gh
      int cols = 0;
      for (int c = 0; c <= n + 1; ++c) {
        const long long lo = (2LL * c - 1) * (2LL * c - 1) * gh;
        const long long hi = (2LL * c + 1) * (2LL * c + 1) * gh;
        const long long v = 4LL * n * gw;
        if ((c == 0 || lo <= v) && v < hi) {
          cols = c;
          break;
        }
      }
      cols = std::max(cols, 1);
      int rows = 0;
      while (rows * cols < n) ++rows;
      const auto g = pack_grid(n, gw, gh);
      if (g.cols != cols || g.rows != rows || g.pad_count != rows * cols - n || g.count != n) {
        ++bad_pack;
        continue;
      }
      for (int s = 0; s < rows * cols; ++s) {
        const int entry = s < n ? s : n - 1;
        if (g.entry_for_slot(s) != entry || g.is_pad(s) != (s >= n)) {
          ++bad_pack;
          break;
        }
      }
    }
  }
  return {bad_rows == 0 && bad_pack == 0,
          fmt("%d coordinates, %d patch_rows mismatches; N=1..256 on 39x86 and 86x39, %d pack_grid "
              "mismatches",
              w * h, bad_rows, bad_pack)};
}

int run_cli(const std::string& args, const fs::path& out, const fs::path& err) {
  const std::string cmd = std::string("'") + QUADTOK_CLI_PATH + "' " + args + " >'" + out.string() +
                          "' 2>'" + err.string() + "'";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag)
      : path(fs::temp_directory_path() / ("quadtok_accept_" + tag)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

// 9. Corpus compression band and sweep monotonicity, through the CLI.
Outcome compression_band() {
  TempDir tmp("corpus");
  const auto corpus = tmp.path / "corpus";
  if (run_cli("synth --out '" + corpus.string() + "' --count 50 --seed 20240601",
              tmp.path / "o.txt", tmp.path / "e.txt") != 0) {
    return {false, "synth failed: " + slurp(tmp.path / "e.txt")};
  }
  const auto csv = tmp.path / "sweep.csv";
  if (run_cli("sweep '" + corpus.string() + "' --out '" + csv.string() + "'", tmp.path / "o.txt",
              tmp.path / "e.txt") != 0) {
    return {false, "sweep failed: " + slurp(tmp.path / "e.txt")};
  }
  std::istringstream in(slurp(csv));
  std::string line;
  std::getline(in, line);
  double prev = -1.0, at8 = -1.0;
  bool monotone = true;
  int rows = 0;
  std::string series;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string crit, alpha, rate, kept, images;
    std::getline(ss, crit, ',');
    std::getline(ss, alpha, ',');
    std::getline(ss, rate, ',');
    std::getline(ss, kept, ',');
    std::getline(ss, images, ',');
    const double r = std::stod(rate);
    if (r < prev) monotone = false;
    prev = r;
    if (std::stod(alpha) == 8.0) at8 = r;
    if (images != "50") monotone = false;
    series += (rows ? " " : "") + alpha + ":" + fmt("%.3f", r);
    ++rows;
  }
  const bool band = at8 >= 0.20 && at8 <= 0.60;
  return {band && monotone && rows == 6,
          fmt("alpha=8 mean %.4f (band [0.20, 0.60]); sweep %s [%s]", at8,
              monotone ? "monotone" : "NOT monotone", series.c_str())};
}

// 10. Byte-identical CLI output and per-frame latency.
Outcome determinism_and_performance() {
  TempDir tmp("determinism");
  const auto img = tmp.path / "s.png";
  save_png(synth::generate_screenshot(1010, 1092, 2408), img);
  const auto j1 = tmp.path / "a.json", j2 = tmp.path / "b.json";
  bool identical = run_cli("reduce '" + img.string() + "' --out '" + j1.string() + "'",
                           tmp.path / "o", tmp.path / "e") == 0 &&
                   run_cli("reduce '" + img.string() + "' --out '" + j2.string() + "'",
                           tmp.path / "o", tmp.path / "e") == 0 &&
                   slurp(j1) == slurp(j2) && !slurp(j1).empty();
  const auto t1 = tmp.path / "a.jsonl", t2 = tmp.path / "b.jsonl";
  const std::string frames = "'" + img.string() + "' '" + img.string() + "'";
  identical = identical &&
              run_cli("trajectory " + frames + " --out '" + t1.string() + "'", tmp.path / "o",
                      tmp.path / "e") == 0 &&
              run_cli("trajectory " + frames + " --out '" + t2.string() + "'", tmp.path / "o",
                      tmp.path / "e") == 0 &&
              slurp(t1) == slurp(t2);

  // Partition + selection + report on a block-aligned grayscale frame, both
  // orientations; the median of 7 runs must fit the budget.
  double worst = 0.0;
  for (auto [w, h] : {std::pair{2408, 1092}, std::pair{1092, 2408}}) {
    const auto gray = to_grayscale(synth::generate_screenshot(1011, w, h));
    std::vector<double> ms;
    for (int rep = 0; rep < 7; ++rep) {
      const auto t0 = Clock::now();
      const Frame f(gray);
      const auto red = reduce_frame(f, RunConfig{}, w, h);
      ms.push_back(1000.0 * seconds_since(t0));
      if (red.report.kept_tokens < 1) return {false, "empty reduction"};
    }
    std::sort(ms.begin(), ms.end());
    worst = std::max(worst, ms[3]);
  }
  return {identical && worst < 250.0,
          fmt("CLI reduce/trajectory output %s; median frame time %.1f ms (limit 250 ms)",
              identical ? "byte-identical" : "DIFFERS", worst)};
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc == 3 && std::string(argv[1]) == "--only") only = std::atoi(argv[2]);

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"tiling soundness", tiling_soundness},
      {"stop-criterion oracle", stop_criterion_oracle},
      {"alpha monotonicity", alpha_monotonicity},
      {"extremes", extremes},
      {"conditional identity", conditional_identity},
      {"shift recovery", shift_recovery},
      {"refinement never coarsens", refinement_never_coarsens},
      {"index math", index_math},
      {"compression band", compression_band},
      {"determinism and performance", determinism_and_performance},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (only && id != only) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s  %2d  %-28s %s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
