#include "trimark/trimark.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include <json.hpp>

#include "trimark/error.hpp"
#include "trimark/formats.hpp"
#include "trimark/imgproc.hpp"
#include "trimark/library.hpp"
#include "trimark/overlay.hpp"
#include "trimark/pipeline.hpp"
#include "trimark/pose.hpp"
#include "trimark/records.hpp"
#include "trimark/synth.hpp"

using namespace trimark;

struct trimark_image {
  int channels = 1;
  GrayImage gray;
  RgbImage rgb;
};

struct trimark_library {
  std::vector<MarkerTemplate> templates;
};

struct trimark_tracker {
  TrackState state;
};

namespace {

thread_local std::string g_last_error;

trimark_status fail(trimark_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

template <class F>
trimark_status guarded(F&& f) {
  try {
    f();
    return TRIMARK_OK;
  } catch (const Error& e) {
    return fail(static_cast<trimark_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(TRIMARK_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(TRIMARK_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(TRIMARK_ERR_INTERNAL, "unknown exception");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

template <class T>
T* dup_array(const std::vector<T>& v) {
  if (v.empty()) return nullptr;
  T* p = static_cast<T*>(std::malloc(v.size() * sizeof(T)));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, v.data(), v.size() * sizeof(T));
  return p;
}

CameraIntrinsics to_cpp(const trimark_camera& c) {
  CameraIntrinsics cam;
  cam.fx = c.fx;
  cam.fy = c.fy;
  cam.cx = c.cx;
  cam.cy = c.cy;
  cam.width = c.width;
  cam.height = c.height;
  return cam;
}

trimark_camera to_c(const CameraIntrinsics& cam) {
  return {cam.fx, cam.fy, cam.cx, cam.cy, cam.width, cam.height};
}

AnchorChoice to_cpp(const trimark_anchor& a) {
  switch (a.kind) {
    case TRIMARK_ANCHOR_VERTEX: return AnchorChoice::vertex(a.origin_index, a.target_vertex);
    case TRIMARK_ANCHOR_CENTROID: return AnchorChoice::centroid(a.target_vertex);
    case TRIMARK_ANCHOR_EDGE_MIDPOINT: return AnchorChoice::edge_midpoint(a.origin_index, a.target_vertex);
    default: throw Error(ErrorCode::InvalidArgument, "unknown anchor kind " + std::to_string(a.kind));
  }
}

trimark_anchor to_c(const AnchorChoice& a) {
  int kind = TRIMARK_ANCHOR_VERTEX;
  if (a.kind == AnchorChoice::Kind::Centroid) kind = TRIMARK_ANCHOR_CENTROID;
  if (a.kind == AnchorChoice::Kind::EdgeMidpoint) kind = TRIMARK_ANCHOR_EDGE_MIDPOINT;
  return {kind, a.origin_index, a.target_vertex};
}

Pose to_cpp(const trimark_pose& p) {
  Pose out;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) out.rotation.m[r][c] = p.rotation[3 * r + c];
  out.translation = {p.translation[0], p.translation[1], p.translation[2]};
  return out;
}

trimark_pose to_c(const Pose& p) {
  trimark_pose out{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) out.rotation[3 * r + c] = p.rotation.m[r][c];
  for (int i = 0; i < 3; ++i) out.translation[i] = p.translation[i];
  return out;
}

PipelineConfig to_cpp(const trimark_config& c) {
  PipelineConfig cfg;
  if (c.threshold >= 0) cfg.threshold = c.threshold;
  require(c.connectivity == 4 || c.connectivity == 8, "connectivity must be 4 or 8");
  cfg.connectivity = c.connectivity == 4 ? Connectivity::Four : Connectivity::Eight;
  cfg.min_area = c.min_area;
  cfg.max_area = c.max_area;
  cfg.harris.k = c.harris_k;
  cfg.harris.window_sigma = c.window_sigma;
  cfg.nms_radius = c.nms_radius;
  cfg.min_response = c.min_response;
  cfg.refine_corners = c.refine_corners != 0;
  cfg.rectify_size = c.rectify_size;
  cfg.grid = c.grid;
  cfg.tau = c.tau;
  cfg.anchor = to_cpp(c.anchor);
  cfg.max_coast = c.max_coast;
  cfg.marker_side = c.marker_side;
  return cfg;
}

trimark_detection to_c(const DetectionRecord& r) {
  trimark_detection d{};
  d.frame = r.frame;
  d.marker_id = r.marker_id;
  d.rotation = r.rotation;
  d.hamming = r.hamming;
  for (int k = 0; k < 4; ++k) {
    d.corners[2 * k] = r.corners[k].x;
    d.corners[2 * k + 1] = r.corners[k].y;
  }
  return d;
}

DetectionRecord to_cpp(const trimark_detection& d) {
  DetectionRecord r;
  r.frame = d.frame;
  r.marker_id = d.marker_id;
  r.rotation = d.rotation;
  r.hamming = d.hamming;
  for (int k = 0; k < 4; ++k) r.corners[k] = {d.corners[2 * k], d.corners[2 * k + 1]};
  return r;
}

trimark_pose_record to_c(const PoseRecord& r) {
  trimark_pose_record out{};
  out.frame = r.frame;
  out.marker_id = r.marker_id;
  out.status = static_cast<int>(r.status);
  out.has_pose = r.pose.has_value();
  out.pose = to_c(r.pose.value_or(Pose{}));
  out.has_rms = r.reprojection_rms.has_value();
  out.reprojection_rms = r.reprojection_rms.value_or(0.0);
  return out;
}

PoseRecord to_cpp(const trimark_pose_record& r) {
  PoseRecord out;
  out.frame = r.frame;
  out.marker_id = r.marker_id;
  require(r.status >= TRIMARK_TRACKED && r.status <= TRIMARK_LOST, "unknown track status");
  out.status = static_cast<TrackStatus>(r.status);
  if (r.has_pose) out.pose = to_cpp(r.pose);
  if (r.has_rms) out.reprojection_rms = r.reprojection_rms;
  return out;
}

trimark_image* wrap(GrayImage g) {
  auto* h = new trimark_image;
  h->channels = 1;
  h->gray = std::move(g);
  return h;
}

trimark_image* wrap(RgbImage c) {
  auto* h = new trimark_image;
  h->channels = 3;
  h->rgb = std::move(c);
  return h;
}

trimark_image* decode(std::span<const std::uint8_t> bytes) {
  if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '3' || bytes[1] == '6')) return wrap(read_ppm(bytes));
  return wrap(read_pgm(bytes));
}

GrayImage gray_of(const trimark_image& img) {
  return img.channels == 1 ? img.gray : to_grayscale(img.rgb);
}

const MarkerTemplate& find_template(const std::vector<MarkerTemplate>& lib, int id) {
  for (const auto& t : lib)
    if (t.id == id) return t;
  throw Error(ErrorCode::UnknownTemplate, "no template with id " + std::to_string(id));
}

int parse_index(const std::string& s) {
  require(s.size() == 1 && s[0] >= '0' && s[0] <= '9', "anchor index must be a single digit");
  return s[0] - '0';
}

AnchorChoice parse_anchor(const std::string& text) {
  if (text == "v01") return AnchorChoice::vertex(0, 1);
  if (text == "v12") return AnchorChoice::vertex(1, 2);
  if (text == "centroid") return AnchorChoice::centroid(0);
  if (text == "midpoint") return AnchorChoice::edge_midpoint(0, 2);

  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t colon = text.find(':', start);
    parts.push_back(text.substr(start, colon - start));
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  AnchorChoice a;
  if (parts[0] == "vertex" && parts.size() == 3) {
    a = AnchorChoice::vertex(parse_index(parts[1]), parse_index(parts[2]));
  } else if (parts[0] == "centroid" && parts.size() == 2) {
    a = AnchorChoice::centroid(parse_index(parts[1]));
  } else if (parts[0] == "edge" && parts.size() == 3) {
    a = AnchorChoice::edge_midpoint(parse_index(parts[1]), parse_index(parts[2]));
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown anchor '" + text + "'");
  }
  validate(a);
  return a;
}

}  // namespace

extern "C" {

const char* trimark_version(void) { return "0.3.0"; }

const char* trimark_status_name(trimark_status status) {
  if (status == TRIMARK_OK) return "Ok";
  if (status == TRIMARK_ERR_INTERNAL) return "Internal";
  if (status >= TRIMARK_ERR_INVALID_ARGUMENT && status <= TRIMARK_ERR_UNKNOWN_TEMPLATE)
    return to_string(static_cast<ErrorCode>(status));
  return "Unknown";
}

const char* trimark_last_error(void) { return g_last_error.c_str(); }

void trimark_free(void* p) { std::free(p); }

// ---- images

trimark_status trimark_image_load(const char* path, trimark_image** out) {
  return guarded([&] {
    require(path && out, "null argument");
    const auto bytes = read_file(path);
    try {
      *out = decode(bytes);
    } catch (const Error& e) {
      throw Error(e.code(), std::string(path) + ": " + e.what());
    }
  });
}

trimark_status trimark_image_decode(const uint8_t* bytes, size_t len, trimark_image** out) {
  return guarded([&] {
    require((bytes || len == 0) && out, "null argument");
    *out = decode({bytes, len});
  });
}

trimark_status trimark_image_create(int width, int height, int channels, trimark_image** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    require(width > 0 && height > 0, "image dimensions must be positive");
    require(channels == 1 || channels == 3, "channels must be 1 or 3");
    *out = channels == 1 ? wrap(GrayImage(width, height)) : wrap(RgbImage(width, height));
  });
}

trimark_status trimark_image_encode(const trimark_image* img, uint8_t** bytes, size_t* len) {
  return guarded([&] {
    require(img && bytes && len, "null argument");
    const auto data = img->channels == 1 ? write_pgm(img->gray) : write_ppm(img->rgb);
    *bytes = dup_array(data);
    *len = data.size();
  });
}

trimark_status trimark_image_save(const trimark_image* img, const char* path) {
  return guarded([&] {
    require(img && path, "null argument");
    write_file(path, img->channels == 1 ? write_pgm(img->gray) : write_ppm(img->rgb));
  });
}

int trimark_image_width(const trimark_image* img) { return img->channels == 1 ? img->gray.width : img->rgb.width; }
int trimark_image_height(const trimark_image* img) {
  return img->channels == 1 ? img->gray.height : img->rgb.height;
}
int trimark_image_channels(const trimark_image* img) { return img->channels; }
uint8_t* trimark_image_data(trimark_image* img) {
  return img->channels == 1 ? img->gray.pixels.data() : img->rgb.pixels.data();
}

trimark_status trimark_image_to_rgb(const trimark_image* img, trimark_image** out) {
  return guarded([&] {
    require(img && out, "null argument");
    *out = wrap(img->channels == 1 ? to_rgb(img->gray) : img->rgb);
  });
}

void trimark_image_destroy(trimark_image* img) { delete img; }

// ---- library

trimark_status trimark_library_load(const char* path, int tau, trimark_library** out) {
  return guarded([&] {
    require(path && out, "null argument");
    const std::string text = read_text_file(path);
    auto lib = std::make_unique<trimark_library>();
    try {
      lib->templates = parse_template_library(text, tau);
    } catch (const Error& e) {
      throw Error(e.code(), std::string(path) + ": " + e.what());
    }
    *out = lib.release();
  });
}

trimark_status trimark_library_parse(const char* text, int tau, trimark_library** out) {
  return guarded([&] {
    require(text && out, "null argument");
    auto lib = std::make_unique<trimark_library>();
    lib->templates = parse_template_library(text, tau);
    *out = lib.release();
  });
}

trimark_status trimark_library_builtin(trimark_library** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = new trimark_library{builtin_library()};
  });
}

size_t trimark_library_size(const trimark_library* lib) { return lib->templates.size(); }
int trimark_library_grid(const trimark_library* lib) {
  return lib->templates.empty() ? 0 : lib->templates.front().cells.size;
}
int trimark_library_id_at(const trimark_library* lib, size_t index) {
  return index < lib->templates.size() ? lib->templates[index].id : -1;
}
void trimark_library_destroy(trimark_library* lib) { delete lib; }

// ---- camera / anchor / config

void trimark_camera_default(trimark_camera* out) { *out = to_c(CameraIntrinsics{}); }

trimark_status trimark_camera_load(const char* path, trimark_camera* out) {
  return guarded([&] {
    require(path && out, "null argument");
    const std::string text = read_text_file(path);
    try {
      *out = to_c(parse_camera_json(text));
    } catch (const Error& e) {
      throw Error(e.code(), std::string(path) + ": " + e.what());
    }
  });
}

trimark_status trimark_camera_parse(const char* json, trimark_camera* out) {
  return guarded([&] {
    require(json && out, "null argument");
    *out = to_c(parse_camera_json(json));
  });
}

trimark_status trimark_anchor_parse(const char* text, trimark_anchor* out) {
  return guarded([&] {
    require(text && out, "null argument");
    *out = to_c(parse_anchor(text));
  });
}

void trimark_config_default(trimark_config* out) {
  const PipelineConfig d;
  out->threshold = -1;
  out->connectivity = static_cast<int>(d.connectivity);
  out->min_area = d.min_area;
  out->max_area = d.max_area;
  out->harris_k = d.harris.k;
  out->window_sigma = d.harris.window_sigma;
  out->nms_radius = d.nms_radius;
  out->min_response = d.min_response;
  out->refine_corners = d.refine_corners ? 1 : 0;
  out->rectify_size = d.rectify_size;
  out->grid = d.grid;
  out->tau = d.tau;
  out->anchor = to_c(d.anchor);
  out->max_coast = d.max_coast;
  out->marker_side = d.marker_side;
}

trimark_status trimark_config_parse_json(const char* json, trimark_config* cfg) {
  return guarded([&] {
    require(json && cfg, "null argument");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(json);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::Parse, std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw Error(ErrorCode::Parse, "config: expected a JSON object");

    trimark_config next = *cfg;
    auto integer = [](const nlohmann::json& v, const std::string& key) {
      if (!v.is_number_integer()) throw Error(ErrorCode::Parse, "config: '" + key + "' must be an integer");
      return v.get<int>();
    };
    auto number = [](const nlohmann::json& v, const std::string& key) {
      if (!v.is_number()) throw Error(ErrorCode::Parse, "config: '" + key + "' must be a number");
      return v.get<double>();
    };
    for (const auto& [key, v] : j.items()) {
      if (key == "threshold") {
        if (v.is_string() && v.get<std::string>() == "auto") {
          next.threshold = -1;
        } else {
          next.threshold = integer(v, key);
        }
      } else if (key == "connectivity") {
        next.connectivity = integer(v, key);
      } else if (key == "min_area") {
        next.min_area = integer(v, key);
      } else if (key == "max_area") {
        next.max_area = integer(v, key);
      } else if (key == "harris_k") {
        next.harris_k = number(v, key);
      } else if (key == "window_sigma") {
        next.window_sigma = number(v, key);
      } else if (key == "nms_radius") {
        next.nms_radius = integer(v, key);
      } else if (key == "min_response") {
        next.min_response = number(v, key);
      } else if (key == "refine_corners") {
        if (!v.is_boolean()) throw Error(ErrorCode::Parse, "config: 'refine_corners' must be a boolean");
        next.refine_corners = v.get<bool>() ? 1 : 0;
      } else if (key == "rectify_size") {
        next.rectify_size = integer(v, key);
      } else if (key == "grid") {
        next.grid = integer(v, key);
      } else if (key == "tau") {
        next.tau = integer(v, key);
      } else if (key == "anchor") {
        if (!v.is_string()) throw Error(ErrorCode::Parse, "config: 'anchor' must be a string");
        next.anchor = to_c(parse_anchor(v.get<std::string>()));
      } else if (key == "max_coast") {
        next.max_coast = integer(v, key);
      } else if (key == "marker_side") {
        next.marker_side = number(v, key);
      } else {
        throw Error(ErrorCode::Parse, "config: unknown key '" + key + "'");
      }
    }
    validate(to_cpp(next));
    *cfg = next;
  });
}

trimark_status trimark_config_validate(const trimark_config* cfg) {
  return guarded([&] {
    require(cfg != nullptr, "null argument");
    validate(to_cpp(*cfg));
  });
}

// ---- detection / pose

trimark_status trimark_detect(const trimark_image* img, const trimark_library* lib, const trimark_config* cfg,
                              int frame, trimark_detection** out, size_t* count) {
  return guarded([&] {
    require(img && lib && out && count, "null argument");
    PipelineConfig pc;
    if (cfg) pc = to_cpp(*cfg);
    const DetectionRun run = detect_markers(gray_of(*img), lib->templates, pc);
    std::vector<trimark_detection> dets;
    dets.reserve(run.detections.size());
    for (const Detection& d : run.detections) {
      DetectionRecord r;
      r.frame = frame;
      r.marker_id = d.match.marker_id;
      r.rotation = d.match.rotation_index;
      r.hamming = d.match.hamming;
      r.corners = d.quad.vertices;
      dets.push_back(to_c(r));
    }
    *out = dup_array(dets);
    *count = dets.size();
  });
}

trimark_status trimark_marker_pose(const trimark_detection* det, const trimark_camera* cam, double marker_side,
                                   const trimark_anchor* anchor, trimark_pose* out, double* rms) {
  return guarded([&] {
    require(det && cam && out, "null argument");
    require(marker_side > 0.0, "marker side must be positive");
    require(det->rotation >= 0 && det->rotation <= 3, "rotation index must be in 0..3");
    const CameraIntrinsics c = to_cpp(*cam);
    validate(c);
    Quad q;
    for (int k = 0; k < 4; ++k) q.vertices[k] = {det->corners[2 * k], det->corners[2 * k + 1]};
    const MatchResult m{det->marker_id, det->rotation, det->hamming};
    const AnchorChoice a = anchor ? to_cpp(*anchor) : AnchorChoice::vertex(0, 1);
    const MarkerDetection md = marker_pose(q, m, c, MarkerGeometry{marker_side}, a);
    *out = to_c(md.pose);
    if (rms) *rms = md.reprojection_rms;
  });
}

trimark_status trimark_pose_from_rotation_vector(const double rv[3], const double t[3], trimark_pose* out) {
  return guarded([&] {
    require(rv && t && out, "null argument");
    Pose p;
    p.rotation = rodrigues({rv[0], rv[1], rv[2]});
    p.translation = {t[0], t[1], t[2]};
    require(is_finite(p.rotation) && std::isfinite(t[0]) && std::isfinite(t[1]) && std::isfinite(t[2]),
            "pose must be finite");
    *out = to_c(p);
  });
}

trimark_status trimark_theta_from_pose(const trimark_pose* pose, double theta[16]) {
  return guarded([&] {
    require(pose && theta, "null argument");
    const Pose p = to_cpp(*pose);
    if (!is_rotation(p.rotation, 1e-6)) throw Error(ErrorCode::NotARotation, "pose rotation is not orthonormal");
    const Theta th = theta_from_pose(p);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) theta[4 * r + c] = th.m[r][c];
  });
}

trimark_status trimark_pose_from_theta(const double theta[16], trimark_pose* out) {
  return guarded([&] {
    require(theta && out, "null argument");
    Theta th;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) th.m[r][c] = theta[4 * r + c];
    *out = to_c(pose_from_theta(th));
  });
}

// ---- tracking

trimark_status trimark_tracker_create(int marker_id, int max_coast, trimark_tracker** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    require(max_coast >= 0, "max_coast must be non-negative");
    auto* t = new trimark_tracker;
    t->state.marker_id = marker_id;
    t->state.max_coast = max_coast;
    *out = t;
  });
}

trimark_status trimark_tracker_update(trimark_tracker* tr, const trimark_pose* detection, double timestamp,
                                      trimark_pose_record* out) {
  return guarded([&] {
    require(tr && out, "null argument");
    std::optional<Pose> det;
    if (detection) det = to_cpp(*detection);
    tr->state = track_update(std::move(tr->state), det, timestamp);
    PoseRecord r;
    r.marker_id = tr->state.marker_id;
    r.status = tr->state.status;
    r.pose = tr->state.output;
    *out = to_c(r);
  });
}

int trimark_tracker_status(const trimark_tracker* tr) { return static_cast<int>(tr->state.status); }

void trimark_tracker_destroy(trimark_tracker* tr) { delete tr; }

// ---- JSON

trimark_status trimark_detections_to_json(const trimark_detection* dets, size_t count, char** out) {
  return guarded([&] {
    require((dets || count == 0) && out, "null argument");
    std::vector<DetectionRecord> recs;
    for (size_t i = 0; i < count; ++i) recs.push_back(to_cpp(dets[i]));
    *out = dup_string(detections_to_json(recs));
  });
}

trimark_status trimark_detections_from_json(const char* json, trimark_detection** out, size_t* count) {
  return guarded([&] {
    require(json && out && count, "null argument");
    std::vector<trimark_detection> dets;
    for (const auto& r : detections_from_json(json)) dets.push_back(to_c(r));
    *out = dup_array(dets);
    *count = dets.size();
  });
}

trimark_status trimark_poses_to_json(const trimark_pose_record* recs, size_t count, char** out) {
  return guarded([&] {
    require((recs || count == 0) && out, "null argument");
    std::vector<PoseRecord> v;
    for (size_t i = 0; i < count; ++i) v.push_back(to_cpp(recs[i]));
    *out = dup_string(poses_to_json(v));
  });
}

trimark_status trimark_poses_from_json(const char* json, trimark_pose_record** out, size_t* count) {
  return guarded([&] {
    require(json && out && count, "null argument");
    std::vector<trimark_pose_record> v;
    for (const auto& r : poses_from_json(json)) v.push_back(to_c(r));
    *out = dup_array(v);
    *count = v.size();
  });
}

// ---- synth / overlay

trimark_status trimark_synth_render(const trimark_library* lib, int template_id, const trimark_pose* pose,
                                    const trimark_camera* cam, double marker_side, int background,
                                    double noise_sigma, uint64_t seed, trimark_image** out) {
  return guarded([&] {
    require(pose && cam && out, "null argument");
    require(marker_side > 0.0, "marker side must be positive");
    require(background >= 0 && background <= 255, "background must be in 0..255");
    require(noise_sigma >= 0.0, "noise sigma must be non-negative");
    const CameraIntrinsics c = to_cpp(*cam);
    validate(c);
    const auto& templates = lib ? lib->templates : builtin_library();
    ScenePose scene;
    scene.pose = to_cpp(*pose);
    scene.template_id = template_id;
    scene.background_level = static_cast<std::uint8_t>(background);
    scene.noise_sigma = noise_sigma;
    scene.seed = seed;
    *out = wrap(render_marker(scene, find_template(templates, template_id), MarkerGeometry{marker_side}, c));
  });
}

trimark_status trimark_synth_blank(const trimark_camera* cam, int background, double noise_sigma, uint64_t seed,
                                   trimark_image** out) {
  return guarded([&] {
    require(cam && out, "null argument");
    require(background >= 0 && background <= 255, "background must be in 0..255");
    require(noise_sigma >= 0.0, "noise sigma must be non-negative");
    const CameraIntrinsics c = to_cpp(*cam);
    validate(c);
    *out = wrap(render_blank(c, static_cast<std::uint8_t>(background), noise_sigma, seed));
  });
}

trimark_status trimark_overlay_draw(trimark_image* img, const trimark_pose* pose, const trimark_camera* cam,
                                    double marker_side, double cube_size) {
  return guarded([&] {
    require(img && pose && cam, "null argument");
    require(img->channels == 3, "overlay needs an RGB image");
    require(marker_side > 0.0 && cube_size > 0.0, "marker and cube sizes must be positive");
    draw_pose_overlay(img->rgb, to_cpp(*pose), to_cpp(*cam), MarkerGeometry{marker_side}, cube_size);
  });
}

}  // extern "C"
