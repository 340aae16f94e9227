#include "trimark/records.hpp"

#include <json.hpp>

#include "trimark/error.hpp"

namespace trimark {

using nlohmann::json;

namespace {

json parse_array(std::string_view text, const char* what) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Parse, std::string(what) + ": " + e.what());
  }
  if (!j.is_array()) throw Error(ErrorCode::Parse, std::string(what) + ": expected a JSON array");
  return j;
}

[[noreturn]] void bad_record(const char* what, std::size_t index, const std::string& detail) {
  throw Error(ErrorCode::Parse, std::string(what) + " record " + std::to_string(index) + ": " + detail);
}

const json& field(const json& obj, const char* key, const char* what, std::size_t index) {
  if (!obj.is_object()) bad_record(what, index, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) bad_record(what, index, std::string("missing \"") + key + "\"");
  return *it;
}

int int_field(const json& obj, const char* key, const char* what, std::size_t index) {
  const json& v = field(obj, key, what, index);
  if (!v.is_number_integer()) bad_record(what, index, std::string("\"") + key + "\" must be an integer");
  return v.get<int>();
}

std::vector<double> numbers(const json& v, std::size_t n, const char* key, const char* what, std::size_t index) {
  if (!v.is_array() || v.size() != n) {
    bad_record(what, index, std::string("\"") + key + "\" must hold " + std::to_string(n) + " numbers");
  }
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) bad_record(what, index, std::string("\"") + key + "\" must hold numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string detections_to_json(const std::vector<DetectionRecord>& records) {
  json arr = json::array();
  for (const auto& r : records) {
    json corners = json::array();
    for (const auto& p : r.corners) corners.push_back({p.x, p.y});
    arr.push_back({{"frame", r.frame},
                   {"marker_id", r.marker_id},
                   {"rotation", r.rotation},
                   {"corners", corners},
                   {"hamming", r.hamming}});
  }
  return dump(arr);
}

std::vector<DetectionRecord> detections_from_json(std::string_view text) {
  constexpr const char* what = "detection";
  const json arr = parse_array(text, "detections file");
  std::vector<DetectionRecord> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const json& o = arr[i];
    DetectionRecord r;
    r.frame = int_field(o, "frame", what, i);
    r.marker_id = int_field(o, "marker_id", what, i);
    r.rotation = int_field(o, "rotation", what, i);
    r.hamming = int_field(o, "hamming", what, i);
    if (r.rotation < 0 || r.rotation > 3) bad_record(what, i, "\"rotation\" must be in 0..3");
    const json& corners = field(o, "corners", what, i);
    if (!corners.is_array() || corners.size() != 4) bad_record(what, i, "\"corners\" must hold 4 points");
    for (int k = 0; k < 4; ++k) {
      const auto uv = numbers(corners[k], 2, "corners", what, i);
      r.corners[k] = {uv[0], uv[1]};
    }
    out.push_back(r);
  }
  return out;
}

std::string poses_to_json(const std::vector<PoseRecord>& records) {
  json arr = json::array();
  for (const auto& r : records) {
    json o = {{"frame", r.frame}, {"marker_id", r.marker_id}, {"status", to_string(r.status)}};
    if (r.pose) {
      json rot = json::array(), trans = json::array(), theta = json::array();
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) rot.push_back(r.pose->rotation.m[i][j]);
      for (int i = 0; i < 3; ++i) trans.push_back(r.pose->translation[i]);
      const Theta t = theta_from_pose(*r.pose);
      for (const auto& row : t.m)
        for (double v : row) theta.push_back(v);
      o["rotation_matrix"] = rot;
      o["translation"] = trans;
      o["theta"] = theta;
    } else {
      o["rotation_matrix"] = nullptr;
      o["translation"] = nullptr;
      o["theta"] = nullptr;
    }
    o["reprojection_rms"] = r.reprojection_rms ? json(*r.reprojection_rms) : json(nullptr);
    arr.push_back(o);
  }
  return dump(arr);
}

std::vector<PoseRecord> poses_from_json(std::string_view text) {
  constexpr const char* what = "pose";
  const json arr = parse_array(text, "poses file");
  std::vector<PoseRecord> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const json& o = arr[i];
    PoseRecord r;
    r.frame = int_field(o, "frame", what, i);
    r.marker_id = int_field(o, "marker_id", what, i);
    const json& status = field(o, "status", what, i);
    if (status == "Tracked") r.status = TrackStatus::Tracked;
    else if (status == "Coasting") r.status = TrackStatus::Coasting;
    else if (status == "Lost") r.status = TrackStatus::Lost;
    else bad_record(what, i, "unknown status");

    const json& rot = field(o, "rotation_matrix", what, i);
    const json& trans = field(o, "translation", what, i);
    if (!rot.is_null() || !trans.is_null()) {
      const auto rv = numbers(rot, 9, "rotation_matrix", what, i);
      const auto tv = numbers(trans, 3, "translation", what, i);
      Pose p;
      for (int k = 0; k < 9; ++k) p.rotation.m[k / 3][k % 3] = rv[k];
      p.translation = {tv[0], tv[1], tv[2]};
      if (!is_rotation(p.rotation, 1e-6)) bad_record(what, i, "\"rotation_matrix\" is not a rotation");
      r.pose = p;
    }
    if (auto it = o.find("reprojection_rms"); it != o.end() && !it->is_null()) {
      if (!it->is_number()) bad_record(what, i, "\"reprojection_rms\" must be a number");
      r.reprojection_rms = it->get<double>();
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace trimark
