#pragma once

#include <map>
#include <set>
#include <string>

#include "axtile/substitution.hpp"
#include "axtile/tileset.hpp"

namespace axtile {

struct RenderOptions {
  int unit = 10;  // pixels per cell
  std::set<std::string> layers{"shape", "tile-marks", "super-marks"};
  std::map<std::string, std::string> palette;  // overrides tile colors
};

// SVG 1.1 with the y axis pointing up. One path per placement in sorted
// placement order, then one group of polylines per mark layer. Super marks
// are drawn at the patch's scale. Throws Error(invalid_argument) for
// unit < 1 or an unknown layer name.
std::string render_svg(const Tileset& ts, const Patch& patch, const RenderOptions& opts = {});

}  // namespace axtile
