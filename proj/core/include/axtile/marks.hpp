#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "axtile/geometry.hpp"

namespace axtile {

enum class Layer : std::uint8_t { tile, super };

std::string_view to_string(Layer layer);

// An axis-parallel segment in the doubled frame. Endpoints are stored with
// a < b in row-major order.
struct MarkSegment {
  Point a;
  Point b;
  Layer layer = Layer::tile;

  MarkSegment() = default;
  // Throws Error(invalid_mark) unless axis-parallel with nonzero length.
  MarkSegment(Point p, Point q, Layer l);

  bool horizontal() const { return a.y == b.y; }
  Coord doubled_length() const { return (b.x - a.x) + (b.y - a.y); }
  // Coordinate of the supporting line: y for horizontal, x for vertical.
  Coord line() const { return horizontal() ? a.y : a.x; }
  bool contains(Point p) const;

  friend bool operator==(const MarkSegment&, const MarkSegment&) = default;
  friend auto operator<=>(const MarkSegment& l, const MarkSegment& r) {
    if (auto c = l.layer <=> r.layer; c != 0) return c;
    if (auto c = l.a <=> r.a; c != 0) return c;
    return l.b <=> r.b;
  }
};

MarkSegment place(const MarkSegment& m, const Placement& pl);
// Doubled coordinates scale by k under inflation.
MarkSegment scale(const MarkSegment& m, Coord k);

// Merges collinear segments of the same layer that overlap or share an
// endpoint into maximal segments. Output is sorted.
std::vector<MarkSegment> merge_segments(std::span<const MarkSegment> marks);

std::vector<MarkSegment> with_layer(std::span<const MarkSegment> marks, Layer layer);

// True when p lies in the closed region covered by the cells of `shape`.
bool in_closed_region(const Polyomino& shape, Point p);

}  // namespace axtile
