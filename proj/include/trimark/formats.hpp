#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trimark/camera.hpp"
#include "trimark/image.hpp"
#include "trimark/registration.hpp"

namespace trimark {

// Netpbm. Readers accept binary and ASCII variants with '#' header comments
// and maxval <= 255 (samples are rescaled to 0..255); writers emit the
// binary form with maxval 255. Errors carry 1-based byte offsets.

GrayImage read_pgm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> write_pgm(const GrayImage& img);

RgbImage read_ppm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> write_ppm(const RgbImage& img);

/// PGM or PPM by magic; colour input is converted to gray.
GrayImage read_gray_any(std::span<const std::uint8_t> bytes);
/// PGM or PPM by magic; gray input is promoted.
RgbImage read_rgb_any(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, std::span<const std::uint8_t> bytes);
std::string read_text_file(const std::string& path);

// Template library:
//   ARTPL 1
//   marker <id> <G>
//   <G rows of G characters from {0,1}>
//   ...
// Blank lines may separate blocks. The whole library is validated on load
// (see check_library); errors carry 1-based line numbers.

std::vector<MarkerTemplate> parse_template_library(std::string_view text, int tau = 0);
std::string format_template_library(const std::vector<MarkerTemplate>& library);

/// {"fx","fy","cx","cy","width","height"}, validated.
CameraIntrinsics parse_camera_json(std::string_view text);
std::string camera_to_json(const CameraIntrinsics& cam);

}  // namespace trimark
