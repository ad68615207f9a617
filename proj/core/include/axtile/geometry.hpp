#pragma once

// Integer lattice geometry: cells, the square symmetry group, placements,
// polyominoes, inflation and boundary turn words.
//
// Conventions: y grows upward. A cell (x, y) is the unit square
// [x, x+1] x [y, y+1]. Transforms act on cell indices, i.e. they rotate and
// reflect about the centre of cell (0, 0). Mark geometry lives in a doubled
// frame where cell (x, y) has corners (2x, 2y) .. (2x+2, 2y+2); see
// apply_to_point().

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace axtile {

using Coord = std::int64_t;

struct Vec2 {
  Coord x = 0;
  Coord y = 0;

  friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
  // Row-major order: by y, then by x.
  friend constexpr std::strong_ordering operator<=>(const Vec2& a, const Vec2& b) {
    if (auto c = a.y <=> b.y; c != 0) return c;
    return a.x <=> b.x;
  }
  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(Coord k, Vec2 a) { return {k * a.x, k * a.y}; }
};

// A unit square of the lattice, identified by its lower-left corner.
using Cell = Vec2;
// A lattice point in the doubled frame.
using Point = Vec2;

struct Vec2Hash {
  std::size_t operator()(const Vec2& v) const noexcept {
    auto h = static_cast<std::uint64_t>(v.x) * 0x9E3779B97F4A7C15ull;
    h ^= static_cast<std::uint64_t>(v.y) + 0x632BE59BD9B4E019ull + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h ^ (h >> 31));
  }
};

// The symmetry group of the square. Rk rotates counterclockwise by k*90
// degrees, R90(x, y) = (-y, x); M(x, y) = (-x, y); MRk = M after Rk.
class D4 {
 public:
  enum class Symbol : std::uint8_t { R0, R90, R180, R270, MR0, MR90, MR180, MR270 };

  constexpr D4() = default;
  constexpr D4(Symbol s) : index_(static_cast<std::uint8_t>(s)) {}  // NOLINT(google-explicit-constructor)

  static constexpr D4 rotation(int quarter_turns, bool mirror = false) {
    D4 t;
    t.index_ = static_cast<std::uint8_t>(((quarter_turns % 4) + 4) % 4 + (mirror ? 4 : 0));
    return t;
  }
  static constexpr std::array<D4, 8> all() {
    return {D4::rotation(0), D4::rotation(1), D4::rotation(2), D4::rotation(3),
            D4::rotation(0, true), D4::rotation(1, true), D4::rotation(2, true), D4::rotation(3, true)};
  }

  constexpr int quarter_turns() const { return index_ % 4; }
  constexpr bool mirrored() const { return index_ >= 4; }
  constexpr std::uint8_t index() const { return index_; }
  constexpr Symbol symbol() const { return static_cast<Symbol>(index_); }

  constexpr Vec2 apply(Vec2 v) const {
    for (int i = 0; i < quarter_turns(); ++i) v = {-v.y, v.x};
    if (mirrored()) v.x = -v.x;
    return v;
  }

  D4 inverse() const;
  std::string_view name() const;
  static std::optional<D4> parse(std::string_view name);

  friend constexpr bool operator==(D4, D4) = default;
  friend constexpr auto operator<=>(D4 a, D4 b) { return a.index_ <=> b.index_; }

 private:
  std::uint8_t index_ = 0;
};

constexpr Vec2 apply_transform(D4 t, Vec2 c) { return t.apply(c); }

// apply(compose(a, b), c) == apply(a, apply(b, c)).
D4 compose(D4 a, D4 b);

// Transform first, then translate.
struct Placement {
  D4 transform;
  Vec2 offset;

  Cell apply(Cell c) const { return transform.apply(c) + offset; }
  // The same motion acting on the doubled frame (rotation about the centre of cell (0, 0)).
  Point apply_to_point(Point p) const;
  Placement inverse() const;

  friend bool operator==(const Placement&, const Placement&) = default;
  friend auto operator<=>(const Placement& a, const Placement& b) {
    if (auto c = a.offset <=> b.offset; c != 0) return c;
    return a.transform <=> b.transform;
  }
};

// apply(compose(a, b), c) == apply(a, apply(b, c)).
Placement compose(const Placement& a, const Placement& b);

// The placement that maps inflate(S, k) onto inflate(p.apply(S), k) for any cell set S.
Placement inflate(const Placement& p, Coord k);

struct Box {
  Vec2 min;  // inclusive
  Vec2 max;  // inclusive
  Coord width() const { return max.x - min.x + 1; }
  Coord height() const { return max.y - min.y + 1; }
  bool contains(Vec2 v) const { return v.x >= min.x && v.x <= max.x && v.y >= min.y && v.y <= max.y; }
  friend bool operator==(const Box&, const Box&) = default;
};

// A finite, non-empty, edge-connected set of cells. Cells are stored in
// row-major order, so equality of cell lists is set equality.
class Polyomino {
 public:
  // Throws Error(invalid_polyomino) for empty or duplicated input and
  // Error(disconnected_shape) when not edge-connected.
  explicit Polyomino(std::vector<Cell> cells);

  std::span<const Cell> cells() const { return cells_; }
  std::size_t area() const { return cells_.size(); }
  bool contains(Cell c) const;
  Box bounds() const;

  friend bool operator==(const Polyomino&, const Polyomino&) = default;
  friend auto operator<=>(const Polyomino& a, const Polyomino& b) {
    return std::lexicographical_compare_three_way(a.cells_.begin(), a.cells_.end(), b.cells_.begin(),
                                                  b.cells_.end());
  }

 private:
  struct Trusted {};
  Polyomino(std::vector<Cell> sorted_cells, Trusted) : cells_(std::move(sorted_cells)) {}

  friend Polyomino place(const Polyomino&, const Placement&);
  friend Polyomino inflate(const Polyomino&, Coord);
  friend struct CanonicalForm canonical(const Polyomino&);

  std::vector<Cell> cells_;
};

bool is_edge_connected(std::span<const Cell> cells);

Polyomino place(const Polyomino& p, const Placement& pl);

// Every cell becomes a k x k block. Throws Error(invalid_argument) for k < 1.
Polyomino inflate(const Polyomino& p, Coord k);

struct CanonicalForm {
  Polyomino shape;
  Placement placement;  // place(original, placement) == shape
};

// Least translate-normalised image over the eight transforms.
CanonicalForm canonical(const Polyomino& p);

// Transforms t with place(p, (t, o)) == p for some o. Always contains R0.
std::vector<Placement> symmetries(const Polyomino& p);

struct TurnWord {
  std::string symbols;  // over {L, R, S}
  bool closed = false;

  long long turning() const;  // count(L) - count(R)
  friend bool operator==(const TurnWord&, const TurnWord&) = default;
};

// Turn word of a rectilinear path of unit steps. The path is closed when its
// last vertex equals its first; a closed path yields one symbol per step
// (the turn at the end of that step), an open one a symbol per interior vertex.
// Throws Error(malformed_path) on a zero, diagonal or non-unit step.
TurnWord turn_word(std::span<const Vec2> path);

// Same as turn_word() but steps may have any positive axis-parallel length.
TurnWord polyline_turn_word(std::span<const Vec2> path);

// Counterclockwise outer boundary in the unit (corner) frame, starting at the
// least row-major corner and heading east; the first vertex is repeated at
// the end. Pinch vertices are resolved by hugging the exterior.
std::vector<Vec2> outer_boundary(const Polyomino& p);

// Outer boundary with collinear vertices removed; closed, first vertex repeated.
std::vector<Vec2> outer_boundary_corners(const Polyomino& p);

}  // namespace axtile
