#pragma once

#include <string_view>
#include <vector>

#include "trimark/registration.hpp"

namespace trimark {

/// The bundled 16-marker 8x8 library (data/markers_8x8.artpl), ids 0..15.
std::string_view builtin_library_text();
const std::vector<MarkerTemplate>& builtin_library();

}  // namespace trimark
