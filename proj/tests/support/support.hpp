#pragma once

// Shared fixtures for the tests: a seeded random polyomino corpus, small
// hand-built tilesets, and brute-force oracles that avoid the library code
// they check.

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "axtile/algebra.hpp"
#include "axtile/geometry.hpp"
#include "axtile/substitution.hpp"
#include "axtile/tileset.hpp"

namespace axtile::test {

inline std::string asset(const std::string& name) { return std::string(AXTILE_ASSET_DIR) + "/" + name; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline Tileset chair() { return load_tileset(asset("chair.tiles")); }

// Grows a polyomino of n cells by repeatedly adding a random free neighbour.
inline Polyomino random_polyomino(std::mt19937& rng, std::size_t n) {
  std::set<Cell> cells{{0, 0}};
  std::vector<Cell> list{{0, 0}};
  constexpr Vec2 steps[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  while (cells.size() < n) {
    const Cell from = list[std::uniform_int_distribution<std::size_t>(0, list.size() - 1)(rng)];
    const Cell to = from + steps[std::uniform_int_distribution<int>(0, 3)(rng)];
    if (cells.insert(to).second) list.push_back(to);
  }
  const Vec2 shift{std::uniform_int_distribution<Coord>(-20, 20)(rng), std::uniform_int_distribution<Coord>(-20, 20)(rng)};
  std::vector<Cell> out;
  for (const Cell& c : list) out.push_back(c + shift);
  std::shuffle(out.begin(), out.end(), rng);
  return Polyomino(out);
}

inline std::vector<Polyomino> corpus(std::size_t count = 100, unsigned seed = 20240611) {
  std::mt19937 rng(seed);
  std::vector<Polyomino> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_polyomino(rng, 1 + rng() % 14));
  return out;
}

inline Placement random_placement(std::mt19937& rng) {
  const auto d = D4::all()[rng() % 8];
  return {d, {std::uniform_int_distribution<Coord>(-50, 50)(rng), std::uniform_int_distribution<Coord>(-50, 50)(rng)}};
}

// Matrix form of a transform, written out independently of D4::apply.
struct Mat {
  int a, b, c, d;  // (x, y) -> (a x + b y, c x + d y)
  Vec2 operator()(Vec2 v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
};

inline Mat matrix_of(D4 t) {
  static const Mat rot[4] = {{1, 0, 0, 1}, {0, -1, 1, 0}, {-1, 0, 0, -1}, {0, 1, -1, 0}};
  Mat m = rot[t.quarter_turns()];
  if (t.mirrored()) m = {-m.a, -m.b, m.c, m.d};
  return m;
}

inline std::set<Cell> cell_set(const Polyomino& p) { return {p.cells().begin(), p.cells().end()}; }

// Pieces of a patch as cell sets, forgetting which tile made them.
inline std::vector<std::set<Cell>> pieces(const Tileset& ts, const Patch& p) {
  std::vector<std::set<Cell>> out;
  for (const PlacedTile& pt : p.placements) out.push_back(cell_set(place(ts.tiles[pt.tile].shape, pt.placement)));
  std::sort(out.begin(), out.end());
  return out;
}

inline std::set<Cell> covered(const std::vector<std::set<Cell>>& ps) {
  std::set<Cell> out;
  for (const auto& p : ps) out.insert(p.begin(), p.end());
  return out;
}

// True when every fine piece lies inside one coarse piece and both cover
// the same cells.
inline bool refines(const std::vector<std::set<Cell>>& fine, const std::vector<std::set<Cell>>& coarse) {
  if (covered(fine) != covered(coarse)) return false;
  std::map<Cell, std::size_t> owner;
  for (std::size_t i = 0; i < coarse.size(); ++i)
    for (const Cell& c : coarse[i]) owner[c] = i;
  for (const auto& f : fine) {
    const std::size_t o = owner.at(*f.begin());
    for (const Cell& c : f)
      if (owner.at(c) != o) return false;
  }
  return true;
}

inline Tileset with_derived_super_marks(Tileset ts) {
  for (TilePrototype& t : ts.tiles) {
    if (!ts.rule_for(t.id)) continue;
    std::erase_if(t.marks, [](const MarkSegment& m) { return m.layer == Layer::super; });
  }
  const Tileset base = ts;
  for (TilePrototype& t : ts.tiles) {
    if (!base.rule_for(t.id)) continue;
    for (const MarkSegment& m : derived_super_marks(base, t.id)) t.marks.push_back(m);
  }
  return ts;
}

inline Child child(const std::string& id, D4 t, Coord x, Coord y) { return {id, Placement{t, {x, y}}}; }
inline Child child(const std::string& id, Coord x, Coord y) { return child(id, D4(), x, y); }

inline Polyomino square() { return Polyomino({{0, 0}}); }
inline Polyomino hdomino() { return Polyomino({{0, 0}, {1, 0}}); }
inline Polyomino vdomino() { return Polyomino({{0, 0}, {0, 1}}); }

// Two unit squares A and B; every rule lays out A B / A B, so B always sits
// at (1, 0) from an A. Both carry a horizontal midline mark.
inline Tileset paired_squares() {
  Tileset ts;
  ts.name = "paired";
  ts.scale = 2;
  const MarkSegment mid({0, 1}, {2, 1}, Layer::tile);
  ts.tiles = {{"A", square(), {mid}, "#ffffff"}, {"B", square(), {mid}, "#3050c0"}};
  const std::vector<Child> layout{child("A", 0, 0), child("B", 1, 0), child("A", 0, 1), child("B", 1, 1)};
  ts.rules = {{"A", layout}, {"B", layout}};
  return with_derived_super_marks(ts);
}

// A horizontal and a vertical domino with rotated copies of the same rule.
inline Tileset rotated_dominoes() {
  Tileset ts;
  ts.name = "dominoes";
  ts.scale = 2;
  ts.tiles = {{"H", hdomino(), {}, {}}, {"V", vdomino(), {}, {}}};
  ts.rules = {{"H", {child("H", 0, 0), child("H", 0, 1), child("V", 2, 0), child("V", 3, 0)}},
              {"V", {child("V", 1, 0), child("V", 0, 0), child("H", 0, 2), child("H", 0, 3)}}};
  return ts;
}

// S is a unit square, T a domino that two squares assemble, U a 2x2
// square whose rule uses both.
inline Tileset decomposable() {
  Tileset ts;
  ts.name = "decomposable";
  ts.scale = 2;
  ts.tiles = {{"S", square(), {}, {}}, {"T", hdomino(), {}, {}}, {"U", Polyomino({{0, 0}, {1, 0}, {0, 1}, {1, 1}}), {}, {}}};
  ts.rules = {{"S", {child("S", 0, 0), child("S", 1, 0), child("S", 0, 1), child("S", 1, 1)}},
              {"T", {child("T", 0, 0), child("T", 2, 0), child("T", 0, 1), child("T", 2, 1)}},
              {"U",
               {child("T", 0, 0), child("T", 2, 0), child("T", 0, 1), child("T", 2, 1), child("U", 0, 2),
                child("S", 2, 2), child("S", 3, 2), child("S", 2, 3), child("S", 3, 3)}}};
  return ts;
}

// Five tiles for a fuse, dedup, eliminate run: W and B always paired, two
// dominoes H and V, and a square Q that two H assemble.
inline Tileset pipeline_seed() {
  Tileset ts;
  ts.name = "pipeline";
  ts.scale = 2;
  ts.tiles = {{"W", square(), {}, "#ffffff"},
              {"B", square(), {}, "#3050c0"},
              {"H", hdomino(), {}, {}},
              {"V", vdomino(), {}, {}},
              {"Q", Polyomino({{0, 0}, {1, 0}, {0, 1}, {1, 1}}), {}, {}}};
  const std::vector<Child> pair{child("W", 0, 0), child("B", 1, 0), child("W", 0, 1), child("B", 1, 1)};
  ts.rules = {{"W", pair},
              {"B", pair},
              {"H", {child("Q", 0, 0), child("Q", 2, 0)}},
              {"V", {child("W", 0, 0), child("B", 1, 0), child("V", 0, 1), child("V", 1, 1), child("W", 0, 3),
                     child("B", 1, 3)}},
              {"Q", {child("Q", 0, 0), child("Q", 2, 0), child("Q", 0, 2), child("Q", 2, 2)}}};
  return ts;
}

}  // namespace axtile::test
