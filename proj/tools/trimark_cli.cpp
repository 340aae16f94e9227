// trimark-cli: batch front end over the C API.
//
// Exit codes: 0 success, 2 input/environment error, 3 usage error.

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "trimark/trimark.h"

namespace {

constexpr int kExitInput = 2;
constexpr int kExitUsage = 3;

struct Failure {
  int exit_code;
  std::string message;
};

[[noreturn]] void usage_error(const std::string& msg) { throw Failure{kExitUsage, msg}; }
[[noreturn]] void input_error(const std::string& msg) { throw Failure{kExitInput, msg}; }

// Status from the library -> input error with the library's message.
void check(trimark_status s, const std::string& context = {}) {
  if (s == TRIMARK_OK) return;
  std::string msg = trimark_last_error();
  if (!context.empty()) msg = context + ": " + msg;
  input_error(msg);
}

template <class T>
struct Owned {
  T* p = nullptr;
  void (*destroy)(T*) = nullptr;
  Owned(void (*d)(T*)) : destroy(d) {}
  Owned(const Owned&) = delete;
  Owned& operator=(const Owned&) = delete;
  ~Owned() {
    if (p) destroy(p);
  }
};

struct CString {
  char* p = nullptr;
  ~CString() { trimark_free(p); }
};

template <class T>
struct CArray {
  T* p = nullptr;
  std::size_t n = 0;
  ~CArray() { trimark_free(p); }
};

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) input_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) input_error("cannot read '" + path + "'");
  return ss.str();
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) input_error("cannot open '" + out_path + "' for writing");
  out << text;
  if (!out) input_error("cannot write '" + out_path + "'");
}

trimark_camera load_camera(const std::string& path) {
  trimark_camera cam;
  check(trimark_camera_load(path.c_str(), &cam));
  return cam;
}

// Pipeline flags shared by detect and track. Unset flags leave the value
// from --config (or the default) alone.
struct PipelineFlags {
  std::string config_path;
  std::optional<std::string> threshold;
  std::optional<int> connectivity, min_area, max_area, nms_radius, rectify_size, grid, tau;
  std::optional<double> harris_k, window_sigma, min_response;
  bool no_refine = false;

  void add(CLI::App* app) {
    app->add_option("--config", config_path, "pipeline configuration JSON")->check(CLI::ExistingFile);
    app->add_option("--threshold", threshold, "binarization threshold 0..255 or 'auto'");
    app->add_option("--connectivity", connectivity, "4 or 8")->check(CLI::IsMember({4, 8}));
    app->add_option("--min-area", min_area, "smallest candidate component (px^2)");
    app->add_option("--max-area", max_area, "largest candidate component (px^2), 0 = image area / 4");
    app->add_option("--harris-k", harris_k, "Harris sensitivity");
    app->add_option("--window-sigma", window_sigma, "Harris window sigma");
    app->add_option("--nms-radius", nms_radius, "corner suppression radius");
    app->add_option("--min-response", min_response, "minimum corner response");
    app->add_flag("--no-refine", no_refine, "keep Harris corner positions unrefined");
    app->add_option("--rectify-size", rectify_size, "rectified marker size N");
    app->add_option("--grid", grid, "marker grid size G");
    app->add_option("--tau", tau, "Hamming tolerance");
  }

  trimark_config resolve() const {
    trimark_config cfg;
    trimark_config_default(&cfg);
    if (!config_path.empty()) {
      const std::string text = read_text(config_path);
      check(trimark_config_parse_json(text.c_str(), &cfg), config_path);
    }
    if (threshold) {
      if (*threshold == "auto") {
        cfg.threshold = -1;
      } else {
        try {
          std::size_t used = 0;
          cfg.threshold = std::stoi(*threshold, &used);
          if (used != threshold->size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
          usage_error("--threshold: expected 0..255 or 'auto', got '" + *threshold + "'");
        }
      }
    }
    if (connectivity) cfg.connectivity = *connectivity;
    if (min_area) cfg.min_area = *min_area;
    if (max_area) cfg.max_area = *max_area;
    if (harris_k) cfg.harris_k = *harris_k;
    if (window_sigma) cfg.window_sigma = *window_sigma;
    if (nms_radius) cfg.nms_radius = *nms_radius;
    if (min_response) cfg.min_response = *min_response;
    if (no_refine) cfg.refine_corners = 0;
    if (rectify_size) cfg.rectify_size = *rectify_size;
    if (grid) cfg.grid = *grid;
    if (tau) cfg.tau = *tau;
    if (trimark_config_validate(&cfg) != TRIMARK_OK) usage_error(trimark_last_error());
    return cfg;
  }
};

trimark_anchor parse_anchor_flag(const std::string& text) {
  trimark_anchor a;
  if (trimark_anchor_parse(text.c_str(), &a) != TRIMARK_OK) usage_error(std::string("--anchor: ") + trimark_last_error());
  return a;
}

std::vector<double> parse_list(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
      if (used != item.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      usage_error(std::string(flag) + ": '" + item + "' is not a number");
    }
  }
  return out;
}

// ---- detect

struct DetectArgs {
  std::string input, templates, out;
  PipelineFlags flags;
};

int run_detect(const DetectArgs& a) {
  const trimark_config cfg = a.flags.resolve();
  Owned<trimark_library> lib(trimark_library_destroy);
  check(trimark_library_load(a.templates.c_str(), cfg.tau, &lib.p));
  Owned<trimark_image> img(trimark_image_destroy);
  check(trimark_image_load(a.input.c_str(), &img.p));

  CArray<trimark_detection> dets;
  check(trimark_detect(img.p, lib.p, &cfg, 0, &dets.p, &dets.n), a.input);
  CString json;
  check(trimark_detections_to_json(dets.p, dets.n, &json.p));
  emit(json.p, a.out);
  return 0;
}

// ---- pose

struct PoseArgs {
  std::string detections, camera, anchor = "v01", out;
  double marker_size = 0.0;
};

int run_pose(const PoseArgs& a) {
  const trimark_anchor anchor = parse_anchor_flag(a.anchor);
  const trimark_camera cam = load_camera(a.camera);
  const std::string text = read_text(a.detections);
  CArray<trimark_detection> dets;
  check(trimark_detections_from_json(text.c_str(), &dets.p, &dets.n), a.detections);

  std::vector<trimark_pose_record> recs;
  for (std::size_t i = 0; i < dets.n; ++i) {
    trimark_pose_record r{};
    r.frame = dets.p[i].frame;
    r.marker_id = dets.p[i].marker_id;
    r.status = TRIMARK_TRACKED;
    if (trimark_marker_pose(&dets.p[i], &cam, a.marker_size, &anchor, &r.pose, &r.reprojection_rms) != TRIMARK_OK) {
      std::cerr << "warning: detection " << i << " (marker " << r.marker_id << "): " << trimark_last_error()
                << "; skipped\n";
      continue;
    }
    r.has_pose = 1;
    r.has_rms = 1;
    recs.push_back(r);
  }
  CString json;
  check(trimark_poses_to_json(recs.data(), recs.size(), &json.p));
  emit(json.p, a.out);
  return 0;
}

// ---- track

struct TrackArgs {
  std::vector<std::string> inputs;
  std::string templates, camera, anchor = "v01", out;
  std::vector<double> timestamps;
  double marker_size = 0.0;
  std::optional<int> coast;
  PipelineFlags flags;
};

bool is_pattern(const std::string& s) {
  const auto pos = s.find('%');
  return pos != std::string::npos && s.find_first_of("diu", pos) != std::string::npos;
}

std::string format_index(const std::string& pattern, int i) {
  const int n = std::snprintf(nullptr, 0, pattern.c_str(), i);
  if (n < 0) usage_error("--inputs: bad pattern '" + pattern + "'");
  std::string s(static_cast<std::size_t>(n) + 1, '\0');
  std::snprintf(s.data(), s.size(), pattern.c_str(), i);
  s.resize(static_cast<std::size_t>(n));
  return s;
}

// printf-style pattern: frames from index 0 (or 1 if 0 is absent) up to the
// first missing file.
std::vector<std::string> expand_inputs(const std::vector<std::string>& inputs) {
  if (inputs.size() != 1 || !is_pattern(inputs[0])) return inputs;
  const std::string& pattern = inputs[0];
  std::vector<std::string> out;
  int i = std::filesystem::exists(format_index(pattern, 0)) ? 0 : 1;
  for (;; ++i) {
    std::string path = format_index(pattern, i);
    if (!std::filesystem::exists(path)) break;
    out.push_back(std::move(path));
  }
  if (out.empty()) input_error("--inputs: no files match '" + pattern + "'");
  return out;
}

int run_track(const TrackArgs& a) {
  trimark_config cfg = a.flags.resolve();
  if (a.coast) {
    if (*a.coast < 0) usage_error("--coast must be non-negative");
    cfg.max_coast = *a.coast;
  }
  const trimark_anchor anchor = parse_anchor_flag(a.anchor);
  const std::vector<std::string> frames = expand_inputs(a.inputs);

  std::vector<double> stamps = a.timestamps;
  if (stamps.empty()) {
    for (std::size_t i = 0; i < frames.size(); ++i) stamps.push_back(static_cast<double>(i));
  }
  if (stamps.size() != frames.size())
    usage_error("--timestamps: " + std::to_string(stamps.size()) + " values for " + std::to_string(frames.size()) +
                " frames");
  for (std::size_t i = 1; i < stamps.size(); ++i) {
    if (!(stamps[i] > stamps[i - 1]))
      usage_error("--timestamps: not strictly increasing at frame " + std::to_string(i));
  }

  const trimark_camera cam = load_camera(a.camera);
  Owned<trimark_library> lib(trimark_library_destroy);
  check(trimark_library_load(a.templates.c_str(), cfg.tau, &lib.p));

  std::map<int, trimark_tracker*> tracks;
  struct TrackGuard {
    std::map<int, trimark_tracker*>& t;
    ~TrackGuard() {
      for (auto& [id, tr] : t) trimark_tracker_destroy(tr);
    }
  } guard{tracks};

  std::vector<trimark_pose_record> recs;
  for (std::size_t f = 0; f < frames.size(); ++f) {
    Owned<trimark_image> img(trimark_image_destroy);
    check(trimark_image_load(frames[f].c_str(), &img.p));
    CArray<trimark_detection> dets;
    check(trimark_detect(img.p, lib.p, &cfg, static_cast<int>(f), &dets.p, &dets.n), frames[f]);

    // One measurement per marker per frame: the lowest Hamming distance wins.
    std::map<int, std::pair<trimark_pose, double>> measured;
    std::map<int, int> best_hamming;
    for (std::size_t i = 0; i < dets.n; ++i) {
      const trimark_detection& d = dets.p[i];
      auto it = best_hamming.find(d.marker_id);
      if (it != best_hamming.end() && it->second <= d.hamming) continue;
      trimark_pose pose;
      double rms = 0.0;
      if (trimark_marker_pose(&d, &cam, cfg.marker_side, &anchor, &pose, &rms) != TRIMARK_OK) {
        std::cerr << "warning: " << frames[f] << ": marker " << d.marker_id << ": " << trimark_last_error() << "\n";
        continue;
      }
      best_hamming[d.marker_id] = d.hamming;
      measured[d.marker_id] = {pose, rms};
    }
    for (const auto& [id, m] : measured) {
      if (tracks.count(id)) continue;
      trimark_tracker* tr = nullptr;
      check(trimark_tracker_create(id, cfg.max_coast, &tr));
      tracks[id] = tr;
    }

    for (auto it = tracks.begin(); it != tracks.end();) {
      const auto m = measured.find(it->first);
      trimark_pose_record r{};
      if (trimark_tracker_update(it->second, m != measured.end() ? &m->second.first : nullptr, stamps[f], &r) !=
          TRIMARK_OK)
        usage_error(trimark_last_error());
      r.frame = static_cast<int>(f);
      if (m != measured.end()) {
        r.has_rms = 1;
        r.reprojection_rms = m->second.second;
      }
      recs.push_back(r);
      // A lost track is reported once, then forgotten until redetected.
      if (r.status == TRIMARK_LOST) {
        trimark_tracker_destroy(it->second);
        it = tracks.erase(it);
      } else {
        ++it;
      }
    }
  }

  CString json;
  check(trimark_poses_to_json(recs.data(), recs.size(), &json.p));
  emit(json.p, a.out);
  return 0;
}

// ---- synth

struct SynthArgs {
  int template_id = 0;
  std::string templates, pose, camera, out;
  double marker_size = 0.0, noise = 0.0;
  std::uint64_t seed = 0;
  int background = 230;
};

int run_synth(const SynthArgs& a) {
  const std::vector<double> v = parse_list(a.pose, "--pose");
  if (v.size() != 6) usage_error("--pose: expected rx,ry,rz,tx,ty,tz");
  trimark_pose pose;
  if (trimark_pose_from_rotation_vector(v.data(), v.data() + 3, &pose) != TRIMARK_OK)
    usage_error(std::string("--pose: ") + trimark_last_error());

  const trimark_camera cam = load_camera(a.camera);
  Owned<trimark_library> lib(trimark_library_destroy);
  if (a.templates.empty()) {
    check(trimark_library_builtin(&lib.p));
  } else {
    check(trimark_library_load(a.templates.c_str(), 0, &lib.p));
  }
  Owned<trimark_image> img(trimark_image_destroy);
  check(trimark_synth_render(lib.p, a.template_id, &pose, &cam, a.marker_size, a.background, a.noise, a.seed,
                             &img.p));
  check(trimark_image_save(img.p, a.out.c_str()), a.out);
  return 0;
}

// ---- overlay

struct OverlayArgs {
  std::string input, poses, camera, out;
  double marker_size = 0.1;
  std::optional<double> cube_size;
};

int run_overlay(const OverlayArgs& a) {
  const trimark_camera cam = load_camera(a.camera);
  const std::string text = read_text(a.poses);
  CArray<trimark_pose_record> recs;
  check(trimark_poses_from_json(text.c_str(), &recs.p, &recs.n), a.poses);

  Owned<trimark_image> src(trimark_image_destroy);
  check(trimark_image_load(a.input.c_str(), &src.p));
  Owned<trimark_image> rgb(trimark_image_destroy);
  check(trimark_image_to_rgb(src.p, &rgb.p));

  const double cube = a.cube_size.value_or(a.marker_size);
  for (std::size_t i = 0; i < recs.n; ++i) {
    const trimark_pose_record& r = recs.p[i];
    if (!r.has_pose) continue;
    const trimark_status s = trimark_overlay_draw(rgb.p, &r.pose, &cam, a.marker_size, cube);
    if (s == TRIMARK_ERR_BEHIND_CAMERA) {
      std::cerr << "warning: pose " << i << " (frame " << r.frame << ", marker " << r.marker_id
                << ") is not in front of the camera; skipped\n";
      continue;
    }
    check(s, a.poses);
  }
  check(trimark_image_save(rgb.p, a.out.c_str()), a.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Square fiducial marker detection, pose and tracking"};
  app.set_version_flag("--version", trimark_version());
  app.require_subcommand(1);

  DetectArgs det;
  auto* detect = app.add_subcommand("detect", "detect markers in one image");
  detect->add_option("--input", det.input, "PGM or PPM image")->required();
  detect->add_option("--templates", det.templates, "template library")->required();
  detect->add_option("--out", det.out, "output JSON (default stdout)");
  det.flags.add(detect);

  PoseArgs pose;
  auto* posecmd = app.add_subcommand("pose", "estimate marker poses from detections");
  posecmd->add_option("--detections", pose.detections, "detection records JSON")->required();
  posecmd->add_option("--camera", pose.camera, "camera intrinsics JSON")->required();
  posecmd->add_option("--marker-size", pose.marker_size, "marker side in meters")
      ->required()
      ->check(CLI::PositiveNumber);
  posecmd->add_option("--anchor", pose.anchor, "v01, v12, centroid, midpoint");
  posecmd->add_option("--out", pose.out, "output JSON (default stdout)");

  TrackArgs tr;
  auto* track = app.add_subcommand("track", "detect, pose and track over a frame sequence");
  track->add_option("--inputs", tr.inputs, "frame files in order, or one printf pattern like f%03d.pgm")
      ->required()
      ->delimiter(',');
  track->add_option("--templates", tr.templates, "template library")->required();
  track->add_option("--camera", tr.camera, "camera intrinsics JSON")->required();
  track->add_option("--marker-size", tr.marker_size, "marker side in meters")->required()->check(CLI::PositiveNumber);
  track->add_option("--timestamps", tr.timestamps, "per-frame timestamps (default: frame index)")->delimiter(',');
  track->add_option("--coast", tr.coast, "misses tolerated before a track is lost");
  track->add_option("--anchor", tr.anchor, "v01, v12, centroid, midpoint");
  track->add_option("--out", tr.out, "output JSON (default stdout)");
  tr.flags.add(track);

  SynthArgs syn;
  auto* synth = app.add_subcommand("synth", "render a synthetic marker image");
  synth->add_option("--template", syn.template_id, "template id")->required();
  synth->add_option("--templates", syn.templates, "template library (default: built-in)");
  synth->add_option("--pose", syn.pose, "rx,ry,rz,tx,ty,tz (rotation vector in radians, meters)")
      ->required()
      ->allow_extra_args(false);
  synth->add_option("--camera", syn.camera, "camera intrinsics JSON")->required();
  synth->add_option("--marker-size", syn.marker_size, "marker side in meters")->required()->check(CLI::PositiveNumber);
  synth->add_option("--noise", syn.noise, "Gaussian noise sigma")->check(CLI::NonNegativeNumber);
  synth->add_option("--seed", syn.seed, "noise seed");
  synth->add_option("--background", syn.background, "background gray level")->check(CLI::Range(0, 255));
  synth->add_option("--out", syn.out, "output PGM")->required();

  OverlayArgs ov;
  auto* overlay = app.add_subcommand("overlay", "draw pose overlays onto an image");
  overlay->add_option("--input", ov.input, "PGM or PPM image")->required();
  overlay->add_option("--poses", ov.poses, "pose records JSON")->required();
  overlay->add_option("--camera", ov.camera, "camera intrinsics JSON")->required();
  overlay->add_option("--out", ov.out, "output PPM")->required();
  overlay->add_option("--marker-size", ov.marker_size, "marker side in meters")->check(CLI::PositiveNumber);
  overlay->add_option("--cube-size", ov.cube_size, "cube edge in meters (default: marker size)")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*detect) return run_detect(det);
    if (*posecmd) return run_pose(pose);
    if (*track) return run_track(tr);
    if (*synth) return run_synth(syn);
    if (*overlay) return run_overlay(ov);
  } catch (const Failure& f) {
    std::cerr << "trimark-cli: " << f.message << "\n";
    return f.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "trimark-cli: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitUsage;
}
