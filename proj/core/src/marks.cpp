#include "axtile/marks.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "axtile/error.hpp"

namespace axtile {

std::string_view to_string(Layer layer) { return layer == Layer::tile ? "tile" : "super"; }

MarkSegment::MarkSegment(Point p, Point q, Layer l) : a(p), b(q), layer(l) {
  if (p == q) throw Error(Errc::invalid_mark, "mark segment has zero length");
  if (p.x != q.x && p.y != q.y) throw Error(Errc::invalid_mark, "mark segment is not axis-parallel");
  if (b < a) std::swap(a, b);
}

bool MarkSegment::contains(Point p) const {
  if (horizontal()) return p.y == a.y && p.x >= a.x && p.x <= b.x;
  return p.x == a.x && p.y >= a.y && p.y <= b.y;
}

MarkSegment place(const MarkSegment& m, const Placement& pl) {
  return MarkSegment(pl.apply_to_point(m.a), pl.apply_to_point(m.b), m.layer);
}

MarkSegment scale(const MarkSegment& m, Coord k) { return MarkSegment(k * m.a, k * m.b, m.layer); }

std::vector<MarkSegment> merge_segments(std::span<const MarkSegment> marks) {
  // (layer, horizontal, line) -> intervals along the line.
  std::map<std::tuple<Layer, bool, Coord>, std::vector<std::pair<Coord, Coord>>> lines;
  for (const MarkSegment& m : marks) {
    if (m.horizontal())
      lines[{m.layer, true, m.a.y}].emplace_back(m.a.x, m.b.x);
    else
      lines[{m.layer, false, m.a.x}].emplace_back(m.a.y, m.b.y);
  }
  std::vector<MarkSegment> out;
  for (auto& [key, spans] : lines) {
    const auto& [layer, horiz, c] = key;
    std::sort(spans.begin(), spans.end());
    auto emit = [&, layer = layer, horiz = horiz, c = c](Coord lo, Coord hi) {
      if (horiz)
        out.emplace_back(Point{lo, c}, Point{hi, c}, layer);
      else
        out.emplace_back(Point{c, lo}, Point{c, hi}, layer);
    };
    Coord lo = spans.front().first;
    Coord hi = spans.front().second;
    for (std::size_t i = 1; i < spans.size(); ++i) {
      if (spans[i].first <= hi) {
        hi = std::max(hi, spans[i].second);
      } else {
        emit(lo, hi);
        lo = spans[i].first;
        hi = spans[i].second;
      }
    }
    emit(lo, hi);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<MarkSegment> with_layer(std::span<const MarkSegment> marks, Layer layer) {
  std::vector<MarkSegment> out;
  for (const MarkSegment& m : marks)
    if (m.layer == layer) out.push_back(m);
  return out;
}

bool in_closed_region(const Polyomino& shape, Point p) {
  // Candidate cells whose closed square contains p.
  auto floor_half = [](Coord v) { return v >= 0 ? v / 2 : -((-v + 1) / 2); };
  const Coord cx = floor_half(p.x);
  const Coord cy = floor_half(p.y);
  for (Coord dx : {Coord{0}, Coord{-1}})
    for (Coord dy : {Coord{0}, Coord{-1}}) {
      const Cell c{cx + dx, cy + dy};
      if (2 * c.x <= p.x && p.x <= 2 * c.x + 2 && 2 * c.y <= p.y && p.y <= 2 * c.y + 2 && shape.contains(c))
        return true;
    }
  return false;
}

}  // namespace axtile
