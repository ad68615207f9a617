#include <gtest/gtest.h>

#include <regex>

#include "axtile/error.hpp"
#include "axtile/render.hpp"
#include "support.hpp"

using namespace axtile;

namespace {

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t at = hay.find(needle); at != std::string::npos; at = hay.find(needle, at + 1)) ++n;
  return n;
}

}  // namespace

TEST(Render, SingleTile) {
  const Tileset ts = test::chair();
  const std::string svg = render_svg(ts, expand_tile(ts, "L", 0));
  EXPECT_EQ(svg.rfind("<svg", 0) == 0 || svg.rfind("<?xml", 0) == 0, true);
  EXPECT_EQ(count(svg, "<path"), 1u);
  EXPECT_NE(svg.find("data-tile=\"L\""), std::string::npos);
  EXPECT_NE(svg.find("width=\"20\""), std::string::npos);
  EXPECT_NE(svg.find("height=\"20\""), std::string::npos);
}

TEST(Render, ChairDepthThree) {
  const Tileset ts = test::chair();
  const Patch p = expand_tile(ts, "L", 3);
  const std::string svg = render_svg(ts, p, {.unit = 5});
  EXPECT_EQ(count(svg, "<path"), 64u);
  EXPECT_NE(svg.find("width=\"80\""), std::string::npos);
  EXPECT_NE(svg.find("height=\"80\""), std::string::npos);
}

TEST(Render, DeterministicAndOrderFree) {
  const Tileset ts = test::pipeline_seed();
  Patch p = expand_tile(ts, "V", 3);
  const std::string a = render_svg(ts, p);
  std::reverse(p.placements.begin(), p.placements.end());
  EXPECT_EQ(render_svg(ts, p), a);
  EXPECT_EQ(render_svg(ts, p), render_svg(ts, p));
}

TEST(Render, LayersAndPalette) {
  const Tileset ts = test::paired_squares();
  const Patch p = expand_tile(ts, "A", 1);
  const std::string all = render_svg(ts, p);
  EXPECT_NE(all.find("id=\"tile-marks\""), std::string::npos);
  EXPECT_NE(all.find("id=\"super-marks\""), std::string::npos);
  const std::string shapes = render_svg(ts, p, {.layers = {"shape"}});
  EXPECT_EQ(shapes.find("<polyline"), std::string::npos);
  const std::string colored = render_svg(ts, p, {.palette = {{"A", "#123456"}}});
  EXPECT_EQ(count(colored, "fill=\"#123456\""), 2u);
}

TEST(Render, Errors) {
  const Tileset ts = test::chair();
  const Patch p = expand_tile(ts, "L", 1);
  EXPECT_THROW(render_svg(ts, p, {.unit = 0}), Error);
  EXPECT_THROW(render_svg(ts, p, {.layers = {"nope"}}), Error);
}
