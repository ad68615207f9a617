#include "axtile/geometry.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "axtile/error.hpp"

namespace axtile {

namespace {

constexpr std::array<std::string_view, 8> kD4Names = {"R0",  "R90",  "R180",  "R270",
                                                       "MR0", "MR90", "MR180", "MR270"};

constexpr std::array<Vec2, 4> kHeadings = {Vec2{1, 0}, Vec2{0, 1}, Vec2{-1, 0}, Vec2{0, -1}};

int heading_of(Vec2 step) {
  for (int i = 0; i < 4; ++i)
    if (kHeadings[i] == step) return i;
  return -1;
}

Coord sign(Coord v) { return (v > 0) - (v < 0); }

char turn_symbol(int from, int to) {
  switch ((to - from + 4) % 4) {
    case 0: return 'S';
    case 1: return 'L';
    case 3: return 'R';
    default: throw Error(Errc::malformed_path, "path reverses direction");
  }
}

}  // namespace

D4 D4::inverse() const {
  // Reflections are involutions; rotations invert to the opposite rotation.
  if (mirrored()) return *this;
  return D4::rotation(-quarter_turns());
}

std::string_view D4::name() const { return kD4Names[index_]; }

std::optional<D4> D4::parse(std::string_view name) {
  for (std::size_t i = 0; i < kD4Names.size(); ++i)
    if (kD4Names[i] == name) return D4::rotation(static_cast<int>(i % 4), i >= 4);
  return std::nullopt;
}

D4 compose(D4 a, D4 b) {
  // Elements are M^m R^r. R^r M = M R^-r.
  if (!b.mirrored()) return D4::rotation(a.quarter_turns() + b.quarter_turns(), a.mirrored());
  return D4::rotation(b.quarter_turns() - a.quarter_turns(), !a.mirrored());
}

Point Placement::apply_to_point(Point p) const {
  const Vec2 centre{1, 1};
  return transform.apply(p - centre) + centre + 2 * offset;
}

Placement Placement::inverse() const {
  const D4 inv = transform.inverse();
  return {inv, Vec2{0, 0} - inv.apply(offset)};
}

Placement compose(const Placement& a, const Placement& b) {
  return {compose(a.transform, b.transform), a.transform.apply(b.offset) + a.offset};
}

Placement inflate(const Placement& p, Coord k) {
  // (1,1) - t(1,1) has components in {0, +-2}, so the halving is exact.
  const Vec2 ones{1, 1};
  const Vec2 d = ones - p.transform.apply(ones);
  return {p.transform, k * p.offset + Vec2{(k - 1) * (d.x / 2), (k - 1) * (d.y / 2)}};
}

bool is_edge_connected(std::span<const Cell> cells) {
  if (cells.empty()) return false;
  std::unordered_set<Cell, Vec2Hash> remaining(cells.begin(), cells.end());
  std::vector<Cell> stack{cells.front()};
  remaining.erase(cells.front());
  while (!stack.empty()) {
    const Cell c = stack.back();
    stack.pop_back();
    for (const Vec2 h : kHeadings) {
      auto it = remaining.find(c + h);
      if (it == remaining.end()) continue;
      stack.push_back(*it);
      remaining.erase(it);
    }
  }
  return remaining.empty();
}

Polyomino::Polyomino(std::vector<Cell> cells) : cells_(std::move(cells)) {
  if (cells_.empty()) throw Error(Errc::invalid_polyomino, "polyomino has no cells");
  std::sort(cells_.begin(), cells_.end());
  if (std::adjacent_find(cells_.begin(), cells_.end()) != cells_.end())
    throw Error(Errc::invalid_polyomino, "polyomino has duplicate cells");
  if (!is_edge_connected(cells_)) throw Error(Errc::disconnected_shape, "polyomino is not edge-connected");
}

bool Polyomino::contains(Cell c) const { return std::binary_search(cells_.begin(), cells_.end(), c); }

Box Polyomino::bounds() const {
  Box b{cells_.front(), cells_.front()};
  for (const Cell& c : cells_) {
    b.min.x = std::min(b.min.x, c.x);
    b.max.x = std::max(b.max.x, c.x);
  }
  b.min.y = cells_.front().y;
  b.max.y = cells_.back().y;
  return b;
}

Polyomino place(const Polyomino& p, const Placement& pl) {
  std::vector<Cell> out;
  out.reserve(p.area());
  for (const Cell& c : p.cells()) out.push_back(pl.apply(c));
  std::sort(out.begin(), out.end());
  return Polyomino(std::move(out), Polyomino::Trusted{});
}

Polyomino inflate(const Polyomino& p, Coord k) {
  if (k < 1) throw Error(Errc::invalid_argument, "inflation factor must be positive");
  std::vector<Cell> out;
  out.reserve(p.area() * static_cast<std::size_t>(k * k));
  for (const Cell& c : p.cells())
    for (Coord j = 0; j < k; ++j)
      for (Coord i = 0; i < k; ++i) out.push_back({k * c.x + i, k * c.y + j});
  std::sort(out.begin(), out.end());
  return Polyomino(std::move(out), Polyomino::Trusted{});
}

CanonicalForm canonical(const Polyomino& p) {
  std::optional<CanonicalForm> best;
  std::vector<Cell> image;
  for (const D4 t : D4::all()) {
    image.clear();
    Vec2 lo{p.cells().front().x, p.cells().front().y};
    bool first = true;
    for (const Cell& c : p.cells()) {
      const Cell m = t.apply(c);
      image.push_back(m);
      if (first || m.x < lo.x) lo.x = m.x;
      if (first || m.y < lo.y) lo.y = m.y;
      first = false;
    }
    for (Cell& c : image) c = c - lo;
    std::sort(image.begin(), image.end());
    if (!best || std::lexicographical_compare(image.begin(), image.end(), best->shape.cells_.begin(),
                                              best->shape.cells_.end())) {
      best = CanonicalForm{Polyomino(image, Polyomino::Trusted{}), Placement{t, Vec2{0, 0} - lo}};
    }
  }
  return std::move(*best);
}

std::vector<Placement> symmetries(const Polyomino& p) {
  std::vector<Placement> out;
  const Box b = p.bounds();
  for (const D4 t : D4::all()) {
    const Polyomino img = place(p, {t, {0, 0}});
    const Box ib = img.bounds();
    const Placement pl{t, b.min - ib.min};
    if (place(p, pl) == p) out.push_back(pl);
  }
  return out;
}

long long TurnWord::turning() const {
  long long n = 0;
  for (char c : symbols) n += (c == 'L') - (c == 'R');
  return n;
}

TurnWord polyline_turn_word(std::span<const Vec2> path) {
  TurnWord w;
  if (path.size() < 2) return w;
  std::vector<int> headings;
  headings.reserve(path.size() - 1);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const Vec2 d = path[i + 1] - path[i];
    if ((d.x != 0) == (d.y != 0)) throw Error(Errc::malformed_path, "step is zero or not axis-parallel");
    headings.push_back(heading_of({sign(d.x), sign(d.y)}));
  }
  w.closed = path.front() == path.back();
  const std::size_t n = headings.size();
  if (w.closed) {
    for (std::size_t i = 0; i < n; ++i) w.symbols.push_back(turn_symbol(headings[i], headings[(i + 1) % n]));
  } else {
    for (std::size_t i = 0; i + 1 < n; ++i) w.symbols.push_back(turn_symbol(headings[i], headings[i + 1]));
  }
  return w;
}

TurnWord turn_word(std::span<const Vec2> path) {
  for (std::size_t i = 0; i + 1 < path.size(); ++i)
    if (heading_of(path[i + 1] - path[i]) < 0) throw Error(Errc::malformed_path, "path step is not a unit step");
  return polyline_turn_word(path);
}

std::vector<Vec2> outer_boundary(const Polyomino& p) {
  // Directed boundary edges with the interior on the left, keyed by tail.
  std::unordered_map<Vec2, std::array<bool, 4>, Vec2Hash> out_edges;
  auto add = [&](Vec2 from, int heading) { out_edges[from][heading] = true; };
  for (const Cell& c : p.cells()) {
    if (!p.contains(c + Vec2{0, -1})) add(c, 0);
    if (!p.contains(c + Vec2{1, 0})) add(c + Vec2{1, 0}, 1);
    if (!p.contains(c + Vec2{0, 1})) add(c + Vec2{1, 1}, 2);
    if (!p.contains(c + Vec2{-1, 0})) add(c + Vec2{0, 1}, 3);
  }
  const Vec2 start = p.cells().front();
  std::vector<Vec2> path{start};
  Vec2 at = start;
  int heading = 0;
  do {
    at = at + kHeadings[heading];
    path.push_back(at);
    if (at == start) break;
    const auto& avail = out_edges.at(at);
    // Right, straight, left: hug the exterior at pinch vertices.
    for (int turn : {3, 0, 1}) {
      const int h = (heading + turn) % 4;
      if (avail[h]) {
        heading = h;
        break;
      }
    }
  } while (true);
  return path;
}

std::vector<Vec2> outer_boundary_corners(const Polyomino& p) {
  const std::vector<Vec2> path = outer_boundary(p);
  const std::size_t n = path.size() - 1;
  std::vector<Vec2> corners;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 prev = path[(i + n - 1) % n];
    const Vec2 next = path[i + 1];
    const Vec2 a = path[i] - prev;
    const Vec2 b = next - path[i];
    if (a != b) corners.push_back(path[i]);
  }
  corners.push_back(corners.front());
  return corners;
}

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::malformed_path: return "malformed-path";
    case Errc::invalid_polyomino: return "invalid-polyomino";
    case Errc::syntax: return "syntax";
    case Errc::duplicate_id: return "duplicate-id";
    case Errc::unresolved_id: return "unresolved-id";
    case Errc::scale_out_of_range: return "scale-out-of-range";
    case Errc::disconnected_shape: return "disconnected-shape";
    case Errc::invalid_mark: return "invalid-mark";
    case Errc::no_rule: return "no-rule";
    case Errc::overlap: return "overlap";
    case Errc::unmatched_occurrence: return "unmatched-occurrence";
    case Errc::invalid_decomposition: return "invalid-decomposition";
    case Errc::window_out_of_range: return "window-out-of-range";
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::io: return "io";
  }
  return "unknown";
}

}  // namespace axtile
