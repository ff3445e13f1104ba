#pragma once

// Seeded generator of GUI-like screenshots: status/app bars, list rows with
// text-like glyph strips, cards, icon dots, photo banners, navigation bars.
// Output depends only on (seed, width, height); no platform-dependent
// distributions are used.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "quadtok/raster.hpp"

namespace quadtok::synth {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
};

/// mt19937_64 with hand-rolled range mapping so sequences are portable.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }
  /// Uniform integer in [lo, hi].
  int uniform(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next() % span);
  }
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return unit() < p; }

 private:
  std::mt19937_64 eng_;
};

class Canvas {
 public:
  Canvas(int w, int h, Rgb fill) : img_(w, h) { fill_rect(0, 0, w, h, fill); }

  int width() const { return img_.width(); }
  int height() const { return img_.height(); }
  RgbImage& image() { return img_; }

  void put(int x, int y, Rgb c) {
    if (x >= 0 && y >= 0 && x < width() && y < height()) img_.set(x, y, c.r, c.g, c.b);
  }

  void fill_rect(int x, int y, int w, int h, Rgb c) {
    const int x0 = std::max(0, x), y0 = std::max(0, y);
    const int x1 = std::min(width(), x + w), y1 = std::min(height(), y + h);
    for (int yy = y0; yy < y1; ++yy)
      for (int xx = x0; xx < x1; ++xx) img_.set(xx, yy, c.r, c.g, c.b);
  }

  void fill_round_rect(int x, int y, int w, int h, int radius, Rgb c) {
    radius = std::min({radius, w / 2, h / 2});
    for (int yy = 0; yy < h; ++yy) {
      for (int xx = 0; xx < w; ++xx) {
        const int cx = xx < radius ? radius - xx : (xx >= w - radius ? xx - (w - radius - 1) : 0);
        const int cy = yy < radius ? radius - yy : (yy >= h - radius ? yy - (h - radius - 1) : 0);
        if (cx * cx + cy * cy <= radius * radius) put(x + xx, y + yy, c);
      }
    }
  }

  void fill_circle(int cx, int cy, int r, Rgb c) {
    for (int y = -r; y <= r; ++y)
      for (int x = -r; x <= r; ++x)
        if (x * x + y * y <= r * r) put(cx + x, cy + y, c);
  }

  void stroke_rect(int x, int y, int w, int h, Rgb c) {
    fill_rect(x, y, w, 1, c);
    fill_rect(x, y + h - 1, w, 1, c);
    fill_rect(x, y, 1, h, c);
    fill_rect(x + w - 1, y, 1, h, c);
  }

  /// Text-like strip: words of pseudo-glyphs built from stroke segments.
  /// Returns the x after the last glyph.
  int text(Rng& rng, int x, int y, int size, int max_w, Rgb c) {
    const int gw = std::max(3, size * 6 / 10);
    const int gap = std::max(1, size / 8);
    const int stroke = std::max(1, size / 9);
    int cx = x;
    const int x_end = x + max_w;
    while (cx + gw <= x_end) {
      const int word = rng.uniform(2, 9);
      for (int k = 0; k < word && cx + gw <= x_end; ++k) {
        glyph(rng, cx, y, gw, size, stroke, c);
        cx += gw + gap;
      }
      cx += gw;  // space
      if (rng.chance(0.15)) break;
    }
    return cx;
  }

  /// Smooth photo-like region: gradient sky, hills, blobs, mild sensor noise.
  void photo(Rng& rng, int x, int y, int w, int h) {
    const Rgb top{static_cast<std::uint8_t>(rng.uniform(60, 200)),
                  static_cast<std::uint8_t>(rng.uniform(90, 210)),
                  static_cast<std::uint8_t>(rng.uniform(150, 255))};
    const Rgb ground{static_cast<std::uint8_t>(rng.uniform(30, 140)),
                     static_cast<std::uint8_t>(rng.uniform(60, 170)),
                     static_cast<std::uint8_t>(rng.uniform(20, 110))};
    const double phase = rng.unit() * 6.28;
    const double freq = 2.0 + rng.unit() * 5.0;
    for (int yy = 0; yy < h; ++yy) {
      for (int xx = 0; xx < w; ++xx) {
        const double fx = static_cast<double>(xx) / w;
        const double fy = static_cast<double>(yy) / h;
        const double horizon = 0.55 + 0.12 * std::sin(fx * freq + phase);
        const Rgb base = fy < horizon ? top : ground;
        const double shade = fy < horizon ? 1.0 - 0.35 * fy : 0.8 + 0.2 * std::sin(fx * 40 + fy * 25);
        const int n = static_cast<int>(rng.next() % 13) - 6;
        put(x + xx, y + yy,
            {clamp8(base.r * shade + n), clamp8(base.g * shade + n), clamp8(base.b * shade + n)});
      }
    }
    const int blobs = rng.uniform(1, 4);
    for (int i = 0; i < blobs; ++i) {
      const int r = std::min({rng.uniform(std::max(2, h / 12), std::max(3, h / 5)), w / 2, h / 2});
      if (r < 1) break;
      const int bx = x + rng.uniform(r, w - r);
      const int by = y + rng.uniform(r, h - r);
      const Rgb c{static_cast<std::uint8_t>(rng.uniform(0, 255)),
                  static_cast<std::uint8_t>(rng.uniform(0, 255)),
                  static_cast<std::uint8_t>(rng.uniform(0, 255))};
      fill_circle(bx, by, r, c);
    }
  }

  void icon(Rng& rng, int cx, int cy, int r, Rgb c) {
    switch (rng.uniform(0, 3)) {
      case 0:
        fill_circle(cx, cy, r, c);
        break;
      case 1:
        fill_round_rect(cx - r, cy - r, 2 * r, 2 * r, r / 3, c);
        break;
      case 2: {
        const int t = std::max(1, r / 3);
        fill_rect(cx - r, cy - t / 2, 2 * r, t, c);
        fill_rect(cx - t / 2, cy - r, t, 2 * r, c);
        break;
      }
      default:
        for (int k = -1; k <= 1; ++k) fill_rect(cx - r, cy + k * r * 2 / 3, 2 * r, std::max(1, r / 4), c);
        break;
    }
  }

  static std::uint8_t clamp8(double v) {
    return static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
  }

 private:
  void glyph(Rng& rng, int x, int y, int gw, int gh, int stroke, Rgb c) {
    // Randomly lit segments of a 7-segment-like cell plus an optional ascender.
    const int mid = y + gh / 2;
    const int segs = static_cast<int>(rng.next() & 0x7F) | 0x11;
    if (segs & 1) fill_rect(x, y + gh / 4, gw, stroke, c);
    if (segs & 2) fill_rect(x, mid, gw, stroke, c);
    if (segs & 4) fill_rect(x, y + gh - stroke, gw, stroke, c);
    if (segs & 8) fill_rect(x, y + gh / 4, stroke, gh / 4 + 1, c);
    if (segs & 16) fill_rect(x, mid, stroke, gh / 2, c);
    if (segs & 32) fill_rect(x + gw - stroke, y + gh / 4, stroke, gh / 4 + 1, c);
    if (segs & 64) fill_rect(x + gw - stroke, mid, stroke, gh / 2, c);
    if (rng.chance(0.2)) fill_rect(x + gw / 2, y, stroke, gh / 3, c);
  }

  RgbImage img_;
};

struct Theme {
  Rgb background, surface, text, subtle, primary, divider;
};

inline Theme random_theme(Rng& rng) {
  const bool dark = rng.chance(0.3);
  auto jitter = [&](int base, int amp) {
    return static_cast<std::uint8_t>(std::clamp(base + rng.uniform(-amp, amp), 0, 255));
  };
  const Rgb primary{static_cast<std::uint8_t>(rng.uniform(20, 230)),
                    static_cast<std::uint8_t>(rng.uniform(20, 200)),
                    static_cast<std::uint8_t>(rng.uniform(60, 240))};
  if (dark) {
    const auto bg = jitter(24, 10);
    return {{bg, bg, static_cast<std::uint8_t>(bg + 4)},
            {jitter(44, 8), jitter(44, 8), jitter(50, 8)},
            {jitter(230, 15), jitter(230, 15), jitter(230, 15)},
            {jitter(150, 20), jitter(150, 20), jitter(150, 20)},
            primary,
            {jitter(60, 6), jitter(60, 6), jitter(60, 6)}};
  }
  const auto bg = jitter(248, 7);
  return {{bg, bg, bg},
          {255, 255, 255},
          {jitter(30, 20), jitter(30, 20), jitter(30, 20)},
          {jitter(110, 25), jitter(110, 25), jitter(110, 25)},
          primary,
          {jitter(222, 8), jitter(222, 8), jitter(222, 8)}};
}

namespace detail {

inline void status_bar(Canvas& cv, Rng& rng, const Theme& t, int h, Rgb bg) {
  const int w = cv.width();
  cv.fill_rect(0, 0, w, h, bg);
  const int sz = std::max(6, h / 2);
  cv.text(rng, w / 24, (h - sz) / 2, sz, w / 8, t.text);
  for (int i = 0; i < 3; ++i) cv.icon(rng, w - w / 20 - i * (sz + sz / 2), h / 2, sz / 2, t.text);
}

inline int list_row(Canvas& cv, Rng& rng, const Theme& t, int y, int h, int margin) {
  const int w = cv.width();
  const int r = h / 4;
  const bool avatar = rng.chance(0.7);
  int tx = margin;
  if (avatar) {
    cv.fill_circle(margin + r, y + h / 2, r, {static_cast<std::uint8_t>(rng.uniform(40, 220)),
                                               static_cast<std::uint8_t>(rng.uniform(40, 220)),
                                               static_cast<std::uint8_t>(rng.uniform(40, 220))});
    tx = margin + 2 * r + margin / 2;
  }
  const int sz = std::max(6, h / 5);
  cv.text(rng, tx, y + h / 4 - sz / 2, sz, (w - tx - margin) * rng.uniform(50, 90) / 100, t.text);
  if (rng.chance(0.7)) {
    cv.text(rng, tx, y + h / 2 + sz / 4, sz * 4 / 5, (w - tx - margin) * rng.uniform(40, 95) / 100,
            t.subtle);
  }
  if (rng.chance(0.4)) cv.icon(rng, w - margin - sz, y + h / 2, sz / 2 + 1, t.subtle);
  if (rng.chance(0.6)) cv.fill_rect(tx, y + h - 1, w - tx, std::max(1, h / 60), t.divider);
  return y + h;
}

inline int card(Canvas& cv, Rng& rng, const Theme& t, int y, int h, int margin) {
  const int w = cv.width();
  const int cw = w - 2 * margin;
  cv.fill_round_rect(margin + 2, y + 3, cw, h, margin / 2, t.divider);  // shadow
  cv.fill_round_rect(margin, y, cw, h, margin / 2, t.surface);
  int cy = y + margin / 2;
  const int inner = margin / 2;
  if (rng.chance(0.5) && h > 6 * margin) {
    const int ph = h * rng.uniform(35, 55) / 100;
    cv.photo(rng, margin + inner, cy, cw - 2 * inner, ph);
    cy += ph + inner;
  }
  const int sz = std::max(7, margin * 6 / 10);
  while (cy + sz < y + h - inner) {
    cv.text(rng, margin + inner, cy, sz, (cw - 2 * inner) * rng.uniform(40, 100) / 100,
            cy == y + margin / 2 ? t.text : t.subtle);
    cy += sz * 2;
  }
  return y + h;
}

inline int button_row(Canvas& cv, Rng& rng, const Theme& t, int y, int h, int margin) {
  const int w = cv.width();
  const int n = rng.uniform(1, 3);
  const int bw = (w - (n + 1) * margin) / n;
  for (int i = 0; i < n; ++i) {
    const int bx = margin + i * (bw + margin);
    const bool filled = i == n - 1;
    cv.fill_round_rect(bx, y + h / 6, bw, h * 2 / 3, h / 3, filled ? t.primary : t.divider);
    const int sz = std::max(6, h / 4);
    cv.text(rng, bx + bw / 3, y + h / 2 - sz / 2, sz, bw / 3, filled ? Rgb{255, 255, 255} : t.text);
  }
  return y + h;
}

inline void nav_bar(Canvas& cv, Rng& rng, const Theme& t, int y, int h) {
  const int w = cv.width();
  cv.fill_rect(0, y, w, h, t.surface);
  cv.fill_rect(0, y, w, std::max(1, h / 40), t.divider);
  const int n = rng.uniform(3, 5);
  for (int i = 0; i < n; ++i) {
    const int cx = w * (2 * i + 1) / (2 * n);
    cv.icon(rng, cx, y + h * 2 / 5, h / 6, i == 0 ? t.primary : t.subtle);
    const int sz = std::max(5, h / 8);
    cv.text(rng, cx - h / 4, y + h * 7 / 10, sz, h / 2, i == 0 ? t.primary : t.subtle);
  }
}

/// Fills rows [y0, y1) of the content area with stacked widgets.
inline void content(Canvas& cv, Rng& rng, const Theme& t, int y0, int y1) {
  const int w = cv.width();
  const int margin = std::max(8, w / 24);
  int y = y0 + margin / 2;
  while (y < y1) {
    const int kind = rng.uniform(0, 11);
    if (kind <= 3) {
      y = list_row(cv, rng, t, y, std::max(24, w * rng.uniform(15, 22) / 100), margin);
    } else if (kind <= 5) {
      y = card(cv, rng, t, y, std::max(40, w * rng.uniform(35, 80) / 100), margin);
    } else if (kind == 6) {
      const int sz = std::max(8, w / 28);
      cv.text(rng, margin, y + sz / 2, sz, w / 2, t.primary);
      y += 2 * sz;
    } else if (kind == 7) {
      y = button_row(cv, rng, t, y, std::max(20, w / 8), margin);
    } else if (kind == 8) {
      const int ph = std::max(20, w * rng.uniform(30, 55) / 100);
      cv.photo(rng, 0, y, w, ph);
      y += ph;
    } else {
      y += std::max(10, w * rng.uniform(5, 25) / 100);  // whitespace
    }
    y += rng.uniform(margin / 4, 2 * margin);
  }
}

inline void sidebar(Canvas& cv, Rng& rng, const Theme& t, int x, int y, int w, int h) {
  cv.fill_rect(x, y, w, h, t.surface);
  cv.fill_rect(x + w - 1, y, 1, h, t.divider);
  const int sz = std::max(8, w / 16);
  for (int yy = y + sz; yy + sz < y + h; yy += sz * 3) {
    if (rng.chance(0.2)) continue;
    cv.icon(rng, x + sz * 2, yy + sz / 2, sz / 2, t.subtle);
    cv.text(rng, x + sz * 4, yy, sz, w - sz * 6, t.text);
  }
}

}  // namespace detail

/// One GUI-like screenshot. Portrait frames get a phone layout, landscape a
/// desktop layout with sidebar.
inline RgbImage generate_screenshot(std::uint64_t seed, int width, int height) {
  Rng rng(seed * 0x9E3779B97F4A7C15ULL + 0x632BE59BD9B4E019ULL);
  const Theme t = random_theme(rng);
  Canvas cv(width, height, t.background);
  if (height >= width) {
    const int status_h = std::max(8, height / 40);
    const int app_h = std::max(16, height / 16);
    const int nav_h = rng.chance(0.7) ? std::max(16, height / 14) : 0;
    detail::content(cv, rng, t, status_h + app_h, height - nav_h);
    const Rgb bar = rng.chance(0.5) ? t.primary : t.surface;
    detail::status_bar(cv, rng, t, status_h, bar);
    cv.fill_rect(0, status_h, width, app_h, bar);
    const int sz = std::max(8, app_h / 3);
    cv.icon(rng, width / 14, status_h + app_h / 2, sz / 2 + 1, t.text);
    cv.text(rng, width / 7, status_h + app_h / 2 - sz / 2, sz, width / 2, t.text);
    cv.icon(rng, width - width / 14, status_h + app_h / 2, sz / 2 + 1, t.text);
    if (nav_h > 0) detail::nav_bar(cv, rng, t, height - nav_h, nav_h);
    if (rng.chance(0.3)) {
      const int r = std::max(8, width / 14);
      cv.fill_circle(width - 2 * r, height - nav_h - 2 * r, r, t.primary);
      cv.icon(rng, width - 2 * r, height - nav_h - 2 * r, r / 3, {255, 255, 255});
    }
  } else {
    const int title_h = std::max(10, height / 30);
    const int side_w = width * rng.uniform(15, 24) / 100;
    cv.fill_rect(0, 0, width, title_h, t.surface);
    cv.text(rng, width / 3, title_h / 4, std::max(6, title_h / 2), width / 3, t.subtle);
    for (int i = 0; i < 3; ++i) cv.fill_circle(title_h * (i + 1), title_h / 2, title_h / 4, t.subtle);
    detail::sidebar(cv, rng, t, 0, title_h, side_w, height - title_h);
    // Content column rendered on its own canvas to reuse the portrait widgets.
    const int col_w = std::min(width - side_w, std::max(width / 2, (width - side_w) * 3 / 4));
    Canvas col(col_w, height - title_h, t.background);
    detail::content(col, rng, t, 0, col.height());
    const int col_x = side_w + (width - side_w - col_w) / 2;
    for (int y = 0; y < col.height(); ++y)
      for (int x = 0; x < col_w; ++x) {
        const auto* p = col.image().at(x, y);
        cv.put(col_x + x, title_h + y, {p[0], p[1], p[2]});
      }
  }
  return std::move(cv.image());
}

/// Crop of a tall page. Used to build scroll trajectories.
inline RgbImage crop(const RgbImage& img, int x, int y, int w, int h) {
  RgbImage out(w, h);
  for (int yy = 0; yy < h; ++yy) {
    const auto* src = img.at(x, y + yy);
    std::copy(src, src + 3 * w, out.at(0, yy));
  }
  return out;
}

/// Frames of a page scrolling by `step_px` per frame under a fixed top bar of
/// `header_px` rows. Frame k shows the page window starting at k * step_px.
inline std::vector<RgbImage> generate_scroll_sequence(std::uint64_t seed, int width, int height,
                                                      int frames, int step_px, int header_px) {
  const int page_h = height + std::max(0, frames - 1) * std::abs(step_px);
  const RgbImage page = generate_screenshot(seed, width, page_h);
  std::vector<RgbImage> out;
  out.reserve(static_cast<std::size_t>(frames));
  for (int k = 0; k < frames; ++k) {
    const int top = step_px >= 0 ? k * step_px : (frames - 1 - k) * -step_px;
    RgbImage f = crop(page, 0, top, width, height);
    if (header_px > 0) {
      for (int y = 0; y < std::min(header_px, height); ++y) {
        std::copy(page.at(0, y), page.at(0, y) + 3 * width, f.at(0, y));
      }
    }
    out.push_back(std::move(f));
  }
  return out;
}

/// Screen sizes the corpus cycles through (phones and desktops, mostly unaligned).
inline constexpr std::array<std::array<int, 2>, 6> kCorpusSizes = {{
    {1080, 2400}, {1080, 1920}, {720, 1600}, {1440, 900}, {1280, 800}, {1170, 2532},
}};

inline RgbImage corpus_image(std::uint64_t seed, int index) {
  const auto& sz = kCorpusSizes[static_cast<std::size_t>(index) % kCorpusSizes.size()];
  return generate_screenshot(seed + static_cast<std::uint64_t>(index) * 7919ULL, sz[0], sz[1]);
}

}  // namespace quadtok::synth
