#pragma once

// Machine-readable per-frame output. Field order is fixed and floats are
// quantized to 6 decimal places, so dump(parse(dump(r))) == dump(r).

#include <nlohmann/json.hpp>

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "quadtok/error.hpp"
#include "quadtok/pipeline.hpp"

namespace quadtok {

inline constexpr const char* kSchemaVersion = "1.0";
inline constexpr int kSchemaMajor = 1;
inline constexpr const char* kToolVersion = "quadtok 0.3.0";

using Json = nlohmann::ordered_json;

/// Rounds to 6 decimal places; the canonical precision of every float in a record.
inline double quantize6(double v) {
  const double q = std::round(v * 1e6) / 1e6;
  return q == 0.0 ? 0.0 : q;  // no negative zero
}

struct ReductionRecord {
  struct Config {
    int patch_size = 14;
    int merge_size = 2;
    std::string criterion = "variance";
    double alpha = 8.0;
    bool conditional = false;
    bool resize = true;
    double tau_static = 0.97;
    double tau_shift = 0.94;
    double gamma = 0.03;
    double rho_min = 0.5;
    int d_max = 4;
    bool operator==(const Config&) const = default;
  };
  struct Image {
    int width = 0;
    int height = 0;
    int resized_width = 0;
    int resized_height = 0;
    bool operator==(const Image&) const = default;
  };
  struct Layout {
    int b = 0;
    int d = 0;
    int C = 0;
    int w_blocks = 0;
    int h_blocks = 0;
    int off_x = 0;
    int off_y = 0;
    std::vector<BlockRect> chunks;
    int margins = 0;
    bool operator==(const Layout&) const = default;
  };
  struct Token {
    int x = 0;
    int y = 0;
    std::vector<std::int64_t> patch_rows;
    bool pad = false;
    bool operator==(const Token&) const = default;
  };
  struct Packed {
    int h = 0;
    int w = 0;
    int pad_count = 0;
    bool operator==(const Packed&) const = default;
  };
  struct ModeEntry {
    int chunk_index = 0;
    std::string mode;
    double sim_zero = 0.0;
    std::optional<double> best_sim;
    std::optional<Shift> delta;
    bool operator==(const ModeEntry&) const = default;
  };
  struct Report {
    long long dense_tokens = 0;
    long long kept_tokens = 0;
    double compression_rate = 0.0;
    std::vector<int> chunk_leaf_counts;
    std::optional<ModeTallies> mode_tallies;
    bool operator==(const Report&) const = default;
  };

  std::string schema_version = kSchemaVersion;
  std::string tool_version = kToolVersion;
  std::optional<int> frame;
  std::string source;
  Config config;
  Image image;
  Layout layout;
  std::vector<BlockRect> leaves;
  std::vector<Token> tokens;  // packed-grid slot order; pad slots repeat the last token
  Packed packed_grid;
  std::vector<ModeEntry> modes;
  Report report;

  bool operator==(const ReductionRecord&) const = default;
};

inline ReductionRecord make_record(const Reduction& red, const RunConfig& cfg,
                                   std::string source = {}, std::optional<int> frame = {}) {
  ReductionRecord r;
  r.frame = frame;
  r.source = std::move(source);
  r.config = {cfg.grid.patch_size,
              cfg.grid.merge_size,
              std::string(cfg.split().name()),
              quantize6(cfg.alpha),
              frame.has_value() && cfg.conditional,
              cfg.resize,
              quantize6(cfg.params.tau_static),
              quantize6(cfg.params.tau_shift),
              quantize6(cfg.params.gamma),
              quantize6(cfg.params.rho_min),
              cfg.params.d_max};
  r.image = {red.source_width, red.source_height, red.layout.width, red.layout.height};
  const auto& l = red.layout;
  r.layout = {l.block,   l.depth, l.chunk_px, l.w_blocks,
              l.h_blocks, l.off_x, l.off_y,   l.chunks,
              static_cast<int>(l.margins.size())};
  r.leaves = red.partition.all_leaves();
  const auto& entries = red.selection.entries;
  r.tokens.reserve(static_cast<std::size_t>(red.packed.slots()));
  for (int slot = 0; slot < red.packed.slots(); ++slot) {
    const auto& e = entries[static_cast<std::size_t>(red.packed.entry_for_slot(slot))];
    r.tokens.push_back({e.coord.x, e.coord.y, e.rows.indices(), red.packed.is_pad(slot)});
  }
  r.packed_grid = {red.packed.rows, red.packed.cols, red.packed.pad_count};
  for (std::size_t k = 0; k < red.decisions.size(); ++k) {
    const auto& d = red.decisions[k];
    ReductionRecord::ModeEntry m;
    m.chunk_index = static_cast<int>(k);
    m.mode = std::string(mode_name(d.mode));
    m.sim_zero = quantize6(d.sim_zero);
    if (d.best_sim) m.best_sim = quantize6(*d.best_sim);
    if (d.mode == Mode::Shifted) m.delta = d.delta;
    r.modes.push_back(std::move(m));
  }
  r.report = {red.report.dense_tokens, red.report.kept_tokens,
              quantize6(red.report.compression_rate), red.report.chunk_leaf_counts,
              red.report.tallies};
  return r;
}

namespace detail {

inline Json rect_json(const BlockRect& b) {
  Json j;
  j["x0"] = b.x0;
  j["y0"] = b.y0;
  j["w"] = b.w;
  j["h"] = b.h;
  return j;
}

inline BlockRect rect_from(const Json& j) {
  return {j.at("x0").get<int>(), j.at("y0").get<int>(), j.at("w").get<int>(),
          j.at("h").get<int>()};
}

inline Json rects_json(const std::vector<BlockRect>& v) {
  Json a = Json::array();
  for (const auto& b : v) a.push_back(rect_json(b));
  return a;
}

inline std::vector<BlockRect> rects_from(const Json& j) {
  std::vector<BlockRect> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(rect_from(e));
  return out;
}

}  // namespace detail

inline Json to_json(const ReductionRecord& r) {
  Json j;
  j["schema_version"] = r.schema_version;
  j["tool_version"] = r.tool_version;
  if (r.frame) j["frame"] = *r.frame;
  j["source"] = r.source;

  auto& c = j["config"];
  c["patch_size"] = r.config.patch_size;
  c["merge_size"] = r.config.merge_size;
  c["criterion"] = r.config.criterion;
  c["alpha"] = r.config.alpha;
  c["conditional"] = r.config.conditional;
  c["resize"] = r.config.resize;
  c["tau_static"] = r.config.tau_static;
  c["tau_shift"] = r.config.tau_shift;
  c["gamma"] = r.config.gamma;
  c["rho_min"] = r.config.rho_min;
  c["d_max"] = r.config.d_max;

  auto& im = j["image"];
  im["width"] = r.image.width;
  im["height"] = r.image.height;
  im["resized_width"] = r.image.resized_width;
  im["resized_height"] = r.image.resized_height;

  auto& l = j["layout"];
  l["b"] = r.layout.b;
  l["d"] = r.layout.d;
  l["C"] = r.layout.C;
  l["w_blocks"] = r.layout.w_blocks;
  l["h_blocks"] = r.layout.h_blocks;
  l["off_x"] = r.layout.off_x;
  l["off_y"] = r.layout.off_y;
  l["chunks"] = detail::rects_json(r.layout.chunks);
  l["margins"] = r.layout.margins;

  j["leaves"] = detail::rects_json(r.leaves);

  Json tokens = Json::array();
  for (const auto& t : r.tokens) {
    Json e;
    e["x"] = t.x;
    e["y"] = t.y;
    e["patch_rows"] = t.patch_rows;
    e["pad"] = t.pad;
    tokens.push_back(std::move(e));
  }
  j["tokens"] = std::move(tokens);

  auto& pg = j["packed_grid"];
  pg["h"] = r.packed_grid.h;
  pg["w"] = r.packed_grid.w;
  pg["pad_count"] = r.packed_grid.pad_count;

  Json modes = Json::array();
  for (const auto& m : r.modes) {
    Json e;
    e["chunk_index"] = m.chunk_index;
    e["mode"] = m.mode;
    e["sim_zero"] = m.sim_zero;
    e["best_sim"] = m.best_sim ? Json(*m.best_sim) : Json(nullptr);
    e["delta"] = m.delta ? Json::array({m.delta->di, m.delta->dj}) : Json(nullptr);
    modes.push_back(std::move(e));
  }
  j["modes"] = std::move(modes);

  auto& rep = j["report"];
  rep["dense_tokens"] = r.report.dense_tokens;
  rep["kept_tokens"] = r.report.kept_tokens;
  rep["compression_rate"] = r.report.compression_rate;
  rep["chunk_leaf_counts"] = r.report.chunk_leaf_counts;
  if (r.report.mode_tallies) {
    auto& t = rep["mode_tallies"];
    t["static"] = r.report.mode_tallies->static_chunks;
    t["shifted"] = r.report.mode_tallies->shifted_chunks;
    t["replaced"] = r.report.mode_tallies->replaced_chunks;
  }
  return j;
}

/// Parses a record, rejecting schema majors other than the one this build writes.
inline ReductionRecord record_from_json(const Json& j) {
  try {
    ReductionRecord r;
    r.schema_version = j.at("schema_version").get<std::string>();
    const auto dot = r.schema_version.find('.');
    const std::string major = r.schema_version.substr(0, dot);
    if (major.empty() || major.find_first_not_of("0123456789") != std::string::npos ||
        std::stoi(major) != kSchemaMajor) {
      throw SchemaError("unsupported schema_version '" + r.schema_version + "'");
    }
    r.tool_version = j.at("tool_version").get<std::string>();
    if (j.contains("frame")) r.frame = j.at("frame").get<int>();
    r.source = j.at("source").get<std::string>();

    const auto& c = j.at("config");
    r.config = {c.at("patch_size").get<int>(),     c.at("merge_size").get<int>(),
                c.at("criterion").get<std::string>(), c.at("alpha").get<double>(),
                c.at("conditional").get<bool>(),   c.at("resize").get<bool>(),
                c.at("tau_static").get<double>(),  c.at("tau_shift").get<double>(),
                c.at("gamma").get<double>(),       c.at("rho_min").get<double>(),
                c.at("d_max").get<int>()};

    const auto& im = j.at("image");
    r.image = {im.at("width").get<int>(), im.at("height").get<int>(),
               im.at("resized_width").get<int>(), im.at("resized_height").get<int>()};

    const auto& l = j.at("layout");
    r.layout = {l.at("b").get<int>(),        l.at("d").get<int>(),
                l.at("C").get<int>(),        l.at("w_blocks").get<int>(),
                l.at("h_blocks").get<int>(), l.at("off_x").get<int>(),
                l.at("off_y").get<int>(),    detail::rects_from(l.at("chunks")),
                l.at("margins").get<int>()};

    r.leaves = detail::rects_from(j.at("leaves"));
    for (const auto& t : j.at("tokens")) {
      r.tokens.push_back({t.at("x").get<int>(), t.at("y").get<int>(),
                          t.at("patch_rows").get<std::vector<std::int64_t>>(),
                          t.at("pad").get<bool>()});
    }
    const auto& pg = j.at("packed_grid");
    r.packed_grid = {pg.at("h").get<int>(), pg.at("w").get<int>(), pg.at("pad_count").get<int>()};

    for (const auto& m : j.at("modes")) {
      ReductionRecord::ModeEntry e;
      e.chunk_index = m.at("chunk_index").get<int>();
      e.mode = m.at("mode").get<std::string>();
      e.sim_zero = m.at("sim_zero").get<double>();
      if (!m.at("best_sim").is_null()) e.best_sim = m.at("best_sim").get<double>();
      if (!m.at("delta").is_null()) {
        const auto& d = m.at("delta");
        e.delta = Shift{d.at(0).get<int>(), d.at(1).get<int>()};
      }
      r.modes.push_back(std::move(e));
    }

    const auto& rep = j.at("report");
    r.report.dense_tokens = rep.at("dense_tokens").get<long long>();
    r.report.kept_tokens = rep.at("kept_tokens").get<long long>();
    r.report.compression_rate = rep.at("compression_rate").get<double>();
    r.report.chunk_leaf_counts = rep.at("chunk_leaf_counts").get<std::vector<int>>();
    if (rep.contains("mode_tallies")) {
      const auto& t = rep.at("mode_tallies");
      r.report.mode_tallies =
          ModeTallies{t.at("static").get<int>(), t.at("shifted").get<int>(),
                      t.at("replaced").get<int>()};
    }
    return r;
  } catch (const Json::exception& e) {
    throw SchemaError(std::string("malformed record: ") + e.what());
  }
}

inline ReductionRecord parse_record(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  return record_from_json(j);
}

/// Canonical text form. indent < 0 gives a single line (JSON-lines).
inline std::string dump_record(const ReductionRecord& r, int indent = -1) {
  return to_json(r).dump(indent);
}

}  // namespace quadtok
