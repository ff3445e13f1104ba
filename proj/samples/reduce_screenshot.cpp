// Minimal library usage: reduce one screenshot and list what survives.
//
//   reduce_screenshot [IMAGE]
//
// Without an argument a synthetic phone screenshot is used.

#include <cstdio>

#include "quadtok/quadtok.hpp"

int main(int argc, char** argv) {
  using namespace quadtok;

  const RgbImage img = argc > 1 ? load_image(argv[1]) : synth::generate_screenshot(1, 1080, 2400);

  RunConfig cfg;  // p=14, m=2, variance criterion, alpha=8
  const Reduction red = reduce_image(img, cfg);

  std::printf("input %dx%d -> grid %dx%d blocks, %zu chunks of %d px, %zu margin blocks\n",
              img.width(), img.height(), red.layout.w_blocks, red.layout.h_blocks,
              red.layout.chunks.size(), red.layout.chunk_px, red.layout.margins.size());
  std::printf("kept %lld of %lld tokens (compression %.2f%%), packed as %dx%d (+%d pad)\n",
              red.report.kept_tokens, red.report.dense_tokens,
              100.0 * red.report.compression_rate, red.packed.rows, red.packed.cols,
              red.packed.pad_count);

  const auto& e = red.selection.entries;
  for (std::size_t i = 0; i < e.size() && i < 5; ++i) {
    std::printf("  token (%d,%d) leaf %dx%d at (%d,%d), patch rows %lld..%lld\n", e[i].coord.x,
                e[i].coord.y, e[i].leaf.w, e[i].leaf.h, e[i].leaf.x0, e[i].leaf.y0,
                static_cast<long long>(e[i].rows.first), static_cast<long long>(e[i].rows.last()));
  }
  return 0;
}
