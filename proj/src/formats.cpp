#include "trimark/formats.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "trimark/error.hpp"
#include "trimark/imgproc.hpp"

namespace trimark {

namespace {

struct PnmHeader {
  char kind = 0;  // '2', '3', '5', '6'
  int width = 0;
  int height = 0;
  int maxval = 0;
};

class PnmCursor {
 public:
  explicit PnmCursor(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t pos() const { return pos_; }
  bool done() const { return pos_ >= bytes_.size(); }
  std::size_t remaining() const { return bytes_.size() - pos_; }
  std::span<const std::uint8_t> take(std::size_t n) {
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

  [[noreturn]] void fail(ErrorCode code, const std::string& what) const {
    throw Error(code, "byte " + std::to_string(pos_ + 1) + ": " + what);
  }

  // Whitespace and '#' comments; returns whether anything was skipped.
  bool skip_separators() {
    const std::size_t start = pos_;
    while (pos_ < bytes_.size()) {
      const auto c = bytes_[pos_];
      if (std::isspace(c)) {
        ++pos_;
      } else if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
      } else {
        break;
      }
    }
    return pos_ > start;
  }

  // Returns -1 when no digit is present.
  long read_uint() {
    if (done() || !std::isdigit(bytes_[pos_])) return -1;
    long v = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_] - '0');
      if (v > std::numeric_limits<int>::max()) fail(ErrorCode::MalformedHeader, "number too large");
      ++pos_;
    }
    return v;
  }

  void expect_separator() {
    if (done() || !(std::isspace(bytes_[pos_]) || bytes_[pos_] == '#')) fail(ErrorCode::MalformedHeader, "expected whitespace");
    skip_separators();
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

PnmHeader read_header(PnmCursor& cur, std::string_view allowed) {
  PnmHeader h;
  auto magic = cur.remaining() >= 2 ? cur.take(2) : std::span<const std::uint8_t>{};
  if (magic.size() != 2 || magic[0] != 'P' || allowed.find(static_cast<char>(magic[1])) == std::string_view::npos) {
    throw Error(ErrorCode::MalformedHeader, "byte 1: unsupported magic number");
  }
  h.kind = static_cast<char>(magic[1]);

  auto field = [&](const char* name) {
    cur.expect_separator();
    const long v = cur.read_uint();
    if (v < 0) cur.fail(ErrorCode::MalformedHeader, std::string("expected ") + name);
    return static_cast<int>(v);
  };
  h.width = field("width");
  h.height = field("height");
  if (h.width < 1 || h.height < 1) cur.fail(ErrorCode::MalformedHeader, "image dimensions must be positive");
  h.maxval = field("maxval");
  if (h.maxval < 1) cur.fail(ErrorCode::MalformedHeader, "maxval must be positive");
  if (h.maxval > 255) cur.fail(ErrorCode::UnsupportedMaxval, "maxval " + std::to_string(h.maxval) + " exceeds 255");
  return h;
}

std::uint8_t scale_sample(long v, int maxval) {
  if (maxval == 255) return static_cast<std::uint8_t>(v);
  return static_cast<std::uint8_t>((v * 255 + maxval / 2) / maxval);
}

std::vector<std::uint8_t> read_samples(PnmCursor& cur, const PnmHeader& h, int channels) {
  const std::size_t count = static_cast<std::size_t>(h.width) * h.height * channels;
  std::vector<std::uint8_t> out(count);
  const bool binary = h.kind == '5' || h.kind == '6';

  if (binary) {
    // Exactly one whitespace byte separates maxval from the raster.
    if (cur.done() || !std::isspace(cur.take(1)[0])) {
      cur.fail(ErrorCode::MalformedHeader, "expected a single whitespace byte after maxval");
    }
    if (cur.remaining() < count) {
      cur.fail(ErrorCode::TruncatedData, "expected " + std::to_string(count) + " raster bytes, found " +
                                             std::to_string(cur.remaining()));
    }
    const std::size_t raster_start = cur.pos();
    auto raster = cur.take(count);
    for (std::size_t i = 0; i < count; ++i) {
      if (raster[i] > h.maxval) {
        throw Error(ErrorCode::MalformedData, "byte " + std::to_string(raster_start + i + 1) + ": sample exceeds maxval");
      }
      out[i] = scale_sample(raster[i], h.maxval);
    }
    if (!cur.done()) cur.fail(ErrorCode::TrailingData, "unexpected bytes after the raster");
    return out;
  }

  for (std::size_t i = 0; i < count; ++i) {
    cur.skip_separators();
    if (cur.done()) cur.fail(ErrorCode::TruncatedData, "expected " + std::to_string(count) + " samples");
    const long v = cur.read_uint();
    if (v < 0) cur.fail(ErrorCode::MalformedData, "expected a decimal sample");
    if (v > h.maxval) cur.fail(ErrorCode::MalformedData, "sample exceeds maxval");
    out[i] = scale_sample(v, h.maxval);
  }
  cur.skip_separators();
  if (!cur.done()) cur.fail(ErrorCode::TrailingData, "unexpected content after the samples");
  return out;
}

std::vector<std::uint8_t> write_binary(char kind, int w, int h, const std::vector<std::uint8_t>& pixels) {
  const std::string header = std::string("P") + kind + "\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), pixels.begin(), pixels.end());
  return out;
}

char magic_of(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P') throw Error(ErrorCode::MalformedHeader, "byte 1: not a PGM/PPM file");
  return static_cast<char>(bytes[1]);
}

}  // namespace

GrayImage read_pgm(std::span<const std::uint8_t> bytes) {
  PnmCursor cur(bytes);
  const PnmHeader h = read_header(cur, "25");
  GrayImage img;
  img.width = h.width;
  img.height = h.height;
  img.pixels = read_samples(cur, h, 1);
  return img;
}

std::vector<std::uint8_t> write_pgm(const GrayImage& img) { return write_binary('5', img.width, img.height, img.pixels); }

RgbImage read_ppm(std::span<const std::uint8_t> bytes) {
  PnmCursor cur(bytes);
  const PnmHeader h = read_header(cur, "36");
  RgbImage img;
  img.width = h.width;
  img.height = h.height;
  img.pixels = read_samples(cur, h, 3);
  return img;
}

std::vector<std::uint8_t> write_ppm(const RgbImage& img) { return write_binary('6', img.width, img.height, img.pixels); }

GrayImage read_gray_any(std::span<const std::uint8_t> bytes) {
  const char m = magic_of(bytes);
  if (m == '3' || m == '6') return to_grayscale(read_ppm(bytes));
  return read_pgm(bytes);
}

RgbImage read_rgb_any(std::span<const std::uint8_t> bytes) {
  const char m = magic_of(bytes);
  if (m == '3' || m == '6') return read_ppm(bytes);
  return to_rgb(read_pgm(bytes));
}

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::Io, "failed reading " + path);
  return data;
}

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot create " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::Io, "failed writing " + path);
}

std::string read_text_file(const std::string& path) {
  const auto bytes = read_file(path);
  return std::string(bytes.begin(), bytes.end());
}

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  // A final newline does not start another line.
  if (!lines.empty() && lines.back().empty() && !text.empty() && text.back() == '\n') lines.pop_back();
  return lines;
}

[[noreturn]] void fail_line(ErrorCode code, std::size_t line, const std::string& what) {
  throw Error(code, "line " + std::to_string(line) + ": " + what);
}

bool parse_int(std::string_view s, int& out) {
  if (s.empty() || s.size() > 9) return false;
  int v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  out = v;
  return true;
}

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

}  // namespace

std::vector<MarkerTemplate> parse_template_library(std::string_view text, int tau) {
  const auto lines = split_lines(text);
  if (lines.empty() || lines[0] != "ARTPL 1") fail_line(ErrorCode::BadMagic, 1, "expected header \"ARTPL 1\"");

  std::vector<MarkerTemplate> library;
  std::vector<std::size_t> header_line;
  std::size_t i = 1;
  while (i < lines.size()) {
    const std::size_t lineno = i + 1;
    if (tokens(lines[i]).empty()) {
      ++i;
      continue;
    }
    const auto tok = tokens(lines[i]);
    MarkerTemplate t;
    int g = 0;
    if (tok.size() != 3 || tok[0] != "marker" || !parse_int(tok[1], t.id) || !parse_int(tok[2], g)) {
      fail_line(ErrorCode::Parse, lineno, "expected \"marker <id> <grid>\"");
    }
    if (g < 4) fail_line(ErrorCode::Parse, lineno, "grid size must be at least 4");
    t.cells = BitGrid(g);
    for (int r = 0; r < g; ++r) {
      const std::size_t row_line = i + 1 + r;
      if (row_line >= lines.size()) fail_line(ErrorCode::Parse, row_line + 1, "missing grid row");
      const std::string_view row = lines[row_line];
      if (static_cast<int>(row.size()) != g) {
        fail_line(ErrorCode::Parse, row_line + 1, "expected " + std::to_string(g) + " cells");
      }
      for (int c = 0; c < g; ++c) {
        if (row[c] != '0' && row[c] != '1') fail_line(ErrorCode::Parse, row_line + 1, "cells must be '0' or '1'");
        t.cells.at(r, c) = row[c] == '1';
      }
    }
    library.push_back(std::move(t));
    header_line.push_back(lineno);
    i += 1 + g;
  }

  if (auto issue = check_library(library, tau)) {
    fail_line(issue->code, header_line[issue->index_a], issue->message);
  }
  return library;
}

std::string format_template_library(const std::vector<MarkerTemplate>& library) {
  std::ostringstream out;
  out << "ARTPL 1\n";
  for (const auto& t : library) {
    out << "marker " << t.id << ' ' << t.cells.size << '\n';
    for (int r = 0; r < t.cells.size; ++r) {
      for (int c = 0; c < t.cells.size; ++c) out << (t.cells.at(r, c) ? '1' : '0');
      out << '\n';
    }
  }
  return out.str();
}

CameraIntrinsics parse_camera_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::Parse, "camera file: " + std::string(e.what()));
  }
  if (!j.is_object()) throw Error(ErrorCode::Parse, "camera file must hold a JSON object");

  CameraIntrinsics cam;
  auto number = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_number()) {
      throw Error(ErrorCode::Parse, std::string("camera file: \"") + key + "\" must be a number");
    }
    return j[key].get<double>();
  };
  auto integer = [&](const char* key) {
    const double v = number(key);
    if (v != static_cast<double>(static_cast<int>(v))) {
      throw Error(ErrorCode::Parse, std::string("camera file: \"") + key + "\" must be an integer");
    }
    return static_cast<int>(v);
  };
  for (const auto& item : j.items()) {
    static const char* known[] = {"fx", "fy", "cx", "cy", "width", "height"};
    bool ok = false;
    for (const char* k : known) ok = ok || item.key() == k;
    if (!ok) throw Error(ErrorCode::Parse, "camera file: unknown key \"" + item.key() + "\"");
  }
  cam.fx = number("fx");
  cam.fy = number("fy");
  cam.cx = number("cx");
  cam.cy = number("cy");
  cam.width = integer("width");
  cam.height = integer("height");
  validate(cam);
  return cam;
}

std::string camera_to_json(const CameraIntrinsics& cam) {
  nlohmann::json j = {{"fx", cam.fx}, {"fy", cam.fy}, {"cx", cam.cx},
                      {"cy", cam.cy}, {"width", cam.width}, {"height", cam.height}};
  return j.dump(2) + "\n";
}

}  // namespace trimark
