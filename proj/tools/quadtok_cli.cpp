// quadtok: screenshot token reduction from the command line.
//
//   quadtok reduce IMAGE [--out FILE]
//   quadtok trajectory FRAME... | DIR [--no-conditional] [--out FILE]
//   quadtok overlay IMAGE --out PNG [--prev IMAGE]
//   quadtok sweep IMAGE... | DIR [--criterion C] [--alphas a,b,...] [--out FILE]

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "quadtok/quadtok.hpp"

namespace fs = std::filesystem;
using namespace quadtok;

namespace {

struct Options {
  int patch_size = 14;
  int merge_size = 2;
  std::string criterion = "variance";
  double alpha = 8.0;
  bool no_conditional = false;
  bool no_resize = false;
  ConditionalParams params;
  std::string out;

  RunConfig run_config() const {
    RunConfig cfg;
    cfg.grid = {patch_size, merge_size};
    cfg.criterion = parse_criterion_kind(criterion);
    cfg.alpha = alpha;
    cfg.conditional = !no_conditional;
    cfg.resize = !no_resize;
    cfg.params = params;
    cfg.validate();
    return cfg;
  }
};

void add_grid_flags(CLI::App* app, Options& o) {
  app->add_option("--patch-size", o.patch_size, "ViT patch size in pixels")
      ->check(CLI::PositiveNumber);
  app->add_option("--merge-size", o.merge_size, "Patches merged per token along each axis")
      ->check(CLI::PositiveNumber);
  app->add_option("--criterion", o.criterion, "Split criterion")
      ->check(CLI::IsMember({"variance", "gradient"}));
  app->add_option("--alpha", o.alpha, "Split threshold parameter")->check(CLI::PositiveNumber);
  app->add_flag("--no-resize", o.no_resize,
                "Require block-aligned input instead of resampling");
}

void add_conditional_flags(CLI::App* app, Options& o) {
  app->add_option("--tau-static", o.params.tau_static, "Static similarity threshold");
  app->add_option("--tau-shift", o.params.tau_shift, "Shifted similarity threshold");
  app->add_option("--gamma", o.params.gamma, "Required gain of best shift over zero shift");
  app->add_option("--rho-min", o.params.rho_min, "Minimum overlap fraction for a shift");
  app->add_option("--d-max", o.params.d_max, "Shift search radius in blocks");
}

bool is_image_path(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

/// Expands directories to their image files in name order.
std::vector<fs::path> expand_inputs(const std::vector<std::string>& inputs) {
  std::vector<fs::path> out;
  for (const auto& in : inputs) {
    const fs::path p(in);
    if (fs::is_directory(p)) {
      std::vector<fs::path> files;
      for (const auto& e : fs::directory_iterator(p)) {
        if (e.is_regular_file() && is_image_path(e.path())) files.push_back(e.path());
      }
      std::sort(files.begin(), files.end());
      out.insert(out.end(), files.begin(), files.end());
    } else {
      out.push_back(p);
    }
  }
  return out;
}

/// Writes to --out or stdout; throws IoError if the file cannot be written.
void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw IoError("cannot write to stdout");
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + out_path + "' for writing");
  f << text;
  f.close();
  if (!f) throw IoError("cannot write '" + out_path + "'");
}

int cmd_reduce(const std::string& image, const Options& o) {
  const auto cfg = o.run_config();
  const auto img = load_image(image);
  const auto red = reduce_image(img, cfg);
  emit(o.out, dump_record(make_record(red, cfg, image), 2) + "\n");
  return 0;
}

int cmd_trajectory(const std::vector<std::string>& inputs, const Options& o) {
  const auto cfg = o.run_config();
  const auto frames = expand_inputs(inputs);
  if (frames.empty()) throw PreconditionError("trajectory: no frames given");
  TrajectoryReducer reducer(cfg);
  std::string lines;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    RgbImage img;
    try {
      img = load_image(frames[i]);
    } catch (const Error& e) {
      throw Error("frame " + std::to_string(i) + " (" + frames[i].string() + "): " + e.what());
    }
    const auto red = reducer.push(img);
    lines += dump_record(make_record(red, cfg, frames[i].string(), static_cast<int>(i)));
    lines += '\n';
  }
  emit(o.out, lines);
  return 0;
}

int cmd_overlay(const std::string& image, const std::string& prev, const Options& o) {
  if (o.out.empty()) throw PreconditionError("overlay: --out is required");
  auto cfg = o.run_config();
  const auto img = load_image(image);
  Reduction red;
  if (!prev.empty()) {
    cfg.conditional = true;
    TrajectoryReducer reducer(cfg);
    reducer.push(load_image(prev));
    red = reducer.push(img);
  } else {
    red = reduce_image(img, cfg);
  }
  save_png(render_overlay(img, red), o.out);
  return 0;
}

int cmd_sweep(const std::vector<std::string>& inputs, const std::vector<double>& alphas,
              const Options& o) {
  auto cfg = o.run_config();
  const auto kind = parse_criterion_kind(o.criterion);
  const auto paths = expand_inputs(inputs);
  if (paths.empty()) throw PreconditionError("sweep: empty corpus");
  std::vector<Frame> frames;
  frames.reserve(paths.size());
  for (const auto& p : paths) frames.push_back(prepare_frame(load_image(p), cfg));
  const auto rows = run_sweep(frames, cfg, kind, alphas.empty() ? default_alphas(kind) : alphas);
  std::ostringstream os;
  write_sweep_csv(os, rows);
  emit(o.out, os.str());
  return 0;
}

int cmd_synth(const std::string& dir, int count, std::uint64_t seed, int width, int height,
              int frames, int scroll_px) {
  fs::create_directories(dir);
  char name[64];
  if (frames > 0) {
    const int w = width > 0 ? width : 1080;
    const int h = height > 0 ? height : 2400;
    const auto seq = synth::generate_scroll_sequence(seed, w, h, frames, scroll_px, h / 10);
    for (std::size_t i = 0; i < seq.size(); ++i) {
      std::snprintf(name, sizeof(name), "frame_%03zu.png", i);
      save_png(seq[i], fs::path(dir) / name);
    }
    return 0;
  }
  for (int i = 0; i < count; ++i) {
    const RgbImage img = (width > 0 && height > 0)
                             ? synth::generate_screenshot(seed + static_cast<std::uint64_t>(i) * 7919ULL, width, height)
                             : synth::corpus_image(seed, i);
    std::snprintf(name, sizeof(name), "screen_%03d.png", i);
    save_png(img, fs::path(dir) / name);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive-quadtree visual token reduction for GUI screenshots"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  Options o;

  std::string reduce_image_path;
  auto* reduce = app.add_subcommand("reduce", "Reduce one screenshot and print its JSON record");
  reduce->add_option("image", reduce_image_path, "PNG or JPEG screenshot")->required();
  reduce->add_option("--out", o.out, "Output file (default stdout)");
  add_grid_flags(reduce, o);

  std::vector<std::string> traj_inputs;
  auto* traj = app.add_subcommand("trajectory", "Reduce ordered frames, one JSON record per line");
  traj->add_option("frames", traj_inputs, "Frame files in order, or a directory")->required();
  traj->add_option("--out", o.out, "Output file (default stdout)");
  traj->add_flag("--no-conditional", o.no_conditional, "Partition every frame independently");
  add_grid_flags(traj, o);
  add_conditional_flags(traj, o);

  std::string overlay_image;
  std::string overlay_prev;
  auto* overlay = app.add_subcommand("overlay", "Render leaves and retained tokens onto the image");
  overlay->add_option("image", overlay_image, "PNG or JPEG screenshot")->required();
  overlay->add_option("--out", o.out, "Output PNG")->required();
  overlay->add_option("--prev", overlay_prev, "Previous frame; tints chunks by temporal mode");
  add_grid_flags(overlay, o);
  add_conditional_flags(overlay, o);

  std::vector<std::string> sweep_inputs;
  std::vector<double> sweep_alphas;
  auto* sweep = app.add_subcommand("sweep", "Mean compression per alpha over a corpus, as CSV");
  sweep->add_option("inputs", sweep_inputs, "Images or a directory of images")->required();
  sweep->add_option("--alphas", sweep_alphas, "Alpha values (comma separated)")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  sweep->add_option("--out", o.out, "Output CSV (default stdout)");
  add_grid_flags(sweep, o);

  std::string synth_dir;
  int synth_count = 50;
  std::uint64_t synth_seed = 20240601;
  int synth_w = 0;
  int synth_h = 0;
  int synth_frames = 0;
  int synth_scroll = 56;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic GUI screenshot corpus");
  synth->group("");  // hidden
  synth->add_option("--out", synth_dir, "Output directory")->required();
  synth->add_option("--count", synth_count, "Number of screenshots")->check(CLI::PositiveNumber);
  synth->add_option("--seed", synth_seed, "Generator seed");
  synth->add_option("--width", synth_w, "Fixed width (default: cycle corpus sizes)");
  synth->add_option("--height", synth_h, "Fixed height");
  synth->add_option("--frames", synth_frames, "Emit a scrolling trajectory of this many frames");
  synth->add_option("--scroll-px", synth_scroll, "Scroll distance per frame in pixels");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*reduce) return cmd_reduce(reduce_image_path, o);
    if (*traj) return cmd_trajectory(traj_inputs, o);
    if (*overlay) return cmd_overlay(overlay_image, overlay_prev, o);
    if (*sweep) return cmd_sweep(sweep_inputs, sweep_alphas, o);
    if (*synth) {
      return cmd_synth(synth_dir, synth_count, synth_seed, synth_w, synth_h, synth_frames,
                       synth_scroll);
    }
  } catch (const std::exception& e) {
    std::cerr << "quadtok: error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
