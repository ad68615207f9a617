#include "axtile/render.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>

#include "axtile/analysis.hpp"
#include "axtile/error.hpp"

namespace axtile {

namespace {

constexpr const char* kDefaultColors[] = {"#e8c547", "#5b8fd9", "#e0605a", "#7bbf6a", "#b17ad6", "#f29a4a"};

// num / den, printed exactly when it terminates within four decimals.
std::string number(Coord num, Coord den) {
  if (den < 0) num = -num, den = -den;
  const Coord g = std::gcd(num < 0 ? -num : num, den);
  num /= g;
  den /= g;
  if (den == 1) return std::to_string(num);
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, static_cast<double>(num) / static_cast<double>(den),
                                 std::chars_format::fixed, 4);
  std::string s(buf, end);
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return s;
}

struct Frame {
  Box box;
  int unit;
  // Lattice point given as (x, y) / den.
  std::string point(Coord x, Coord y, Coord den) const {
    return number((x - box.min.x * den) * unit, den) + "," + number(((box.max.y + 1) * den - y) * unit, den);
  }
};

}  // namespace

std::string render_svg(const Tileset& ts, const Patch& patch, const RenderOptions& opts) {
  if (opts.unit < 1) throw Error(Errc::invalid_argument, "unit must be at least 1");
  for (const std::string& l : opts.layers)
    if (l != "shape" && l != "tile-marks" && l != "super-marks")
      throw Error(Errc::invalid_argument, "unknown layer \"" + l + "\"");

  std::vector<PlacedTile> order = patch.placements;
  std::sort(order.begin(), order.end(), [](const PlacedTile& a, const PlacedTile& b) {
    if (a.placement != b.placement) return a.placement < b.placement;
    return a.tile < b.tile;
  });

  Box box{{0, 0}, {0, 0}};
  bool any = false;
  for (const PlacedTile& pt : order) {
    const Box b = place(ts.tiles[pt.tile].shape, pt.placement).bounds();
    if (!any) {
      box = b;
      any = true;
    } else {
      box.min = {std::min(box.min.x, b.min.x), std::min(box.min.y, b.min.y)};
      box.max = {std::max(box.max.x, b.max.x), std::max(box.max.y, b.max.y)};
    }
  }
  const Frame f{box, opts.unit};
  const Coord w = any ? box.width() * opts.unit : 0;
  const Coord h = any ? box.height() * opts.unit : 0;

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << w << "\" height=\"" << h
      << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n";

  if (opts.layers.contains("shape")) {
    out << "<g id=\"shape\" stroke=\"#000000\" stroke-width=\"" << number(opts.unit, 10) << "\">\n";
    for (const PlacedTile& pt : order) {
      const TilePrototype& t = ts.tiles[pt.tile];
      std::string color;
      if (auto it = opts.palette.find(t.id); it != opts.palette.end())
        color = it->second;
      else if (t.color)
        color = *t.color;
      else
        color = kDefaultColors[pt.tile % std::size(kDefaultColors)];
      const auto corners = outer_boundary_corners(place(t.shape, pt.placement));
      out << "<path d=\"";
      for (std::size_t i = 0; i + 1 < corners.size(); ++i)
        out << (i == 0 ? "M" : " L") << f.point(corners[i].x, corners[i].y, 1);
      out << " Z\" fill=\"" << color << "\" data-tile=\"" << t.id << "\"/>\n";
    }
    out << "</g>\n";
  }

  auto marks_group = [&](const char* name, Layer layer, const char* stroke, Coord den) {
    const auto marks = merge_segments(patch_marks(ts, patch, layer));
    out << "<g id=\"" << name << "\" fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\""
        << number(opts.unit, 5) << "\" stroke-linecap=\"round\">\n";
    for (const MarkSegment& m : marks)
      out << "<polyline points=\"" << f.point(m.a.x, m.a.y, den) << ' ' << f.point(m.b.x, m.b.y, den) << "\"/>\n";
    out << "</g>\n";
  };
  if (opts.layers.contains("tile-marks")) marks_group("tile-marks", Layer::tile, "#202020", 2);
  if (opts.layers.contains("super-marks")) marks_group("super-marks", Layer::super, "#c02020", 2 * ts.scale);

  out << "</svg>\n";
  return out.str();
}

}  // namespace axtile
