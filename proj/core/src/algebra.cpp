#include "axtile/algebra.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "axtile/error.hpp"
#include "axtile/substitution.hpp"

namespace axtile {

namespace {

// Cells and merged tile marks of a placed tile.
struct Geometry {
  std::vector<Cell> cells;
  std::vector<MarkSegment> marks;
  friend bool operator==(const Geometry&, const Geometry&) = default;
  friend auto operator<=>(const Geometry& a, const Geometry& b) {
    if (auto c = std::lexicographical_compare_three_way(a.cells.begin(), a.cells.end(), b.cells.begin(),
                                                        b.cells.end());
        c != 0)
      return c;
    return std::lexicographical_compare_three_way(a.marks.begin(), a.marks.end(), b.marks.begin(), b.marks.end());
  }
};

std::vector<MarkSegment> placed_tile_marks(const TilePrototype& t, const Placement& pl) {
  std::vector<MarkSegment> out;
  for (const MarkSegment& m : t.marks)
    if (m.layer == Layer::tile) out.push_back(place(m, pl));
  return merge_segments(out);
}

Geometry placed_geometry(const TilePrototype& t, const Placement& pl) {
  const Polyomino s = place(t.shape, pl);
  return {std::vector<Cell>(s.cells().begin(), s.cells().end()), placed_tile_marks(t, pl)};
}

struct PlacementHash {
  std::size_t operator()(const Placement& p) const noexcept {
    return Vec2Hash{}(p.offset) * 31u + p.transform.index();
  }
};

struct PairMatch {
  std::size_t a_count = 0;
  std::size_t b_count = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  std::vector<std::uint32_t> unmatched_a;
  std::vector<std::uint32_t> unmatched_b;
};

struct PairContext {
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  Placement relative;
  std::vector<Placement> sym_a;
  std::vector<Placement> sym_b;
};

PairContext pair_context(const Tileset& ts, const PairRelation& rel) {
  const auto ia = ts.index_of(rel.tile_a);
  const auto ib = ts.index_of(rel.tile_b);
  if (!ia) throw Error(Errc::unresolved_id, "unknown tile id \"" + rel.tile_a + "\"");
  if (!ib) throw Error(Errc::unresolved_id, "unknown tile id \"" + rel.tile_b + "\"");
  const Polyomino pa = ts.tiles[*ia].shape;
  const Polyomino pb = place(ts.tiles[*ib].shape, rel.relative);
  std::vector<Cell> joint(pa.cells().begin(), pa.cells().end());
  for (const Cell& c : pb.cells()) {
    if (pa.contains(c)) throw Error(Errc::invalid_argument, "pair relation places the two tiles overlapping");
    joint.push_back(c);
  }
  if (!is_edge_connected(joint))
    throw Error(Errc::disconnected_shape, "pair relation does not produce an edge-connected union");
  return {static_cast<std::uint32_t>(*ia), static_cast<std::uint32_t>(*ib), rel.relative,
          tile_symmetries(ts.tiles[*ia]), tile_symmetries(ts.tiles[*ib])};
}

PairMatch match_pairs(const std::vector<PlacedTile>& placements, const PairContext& ctx) {
  PairMatch m;
  std::unordered_map<Placement, std::vector<std::uint32_t>, PlacementHash> b_at;
  for (std::uint32_t i = 0; i < placements.size(); ++i) {
    if (placements[i].tile == ctx.a) ++m.a_count;
    if (placements[i].tile == ctx.b) {
      ++m.b_count;
      b_at[placements[i].placement].push_back(i);
    }
  }
  std::vector<bool> used(placements.size(), false);
  for (std::uint32_t i = 0; i < placements.size(); ++i) {
    if (placements[i].tile != ctx.a || used[i]) continue;
    std::optional<std::uint32_t> best;
    for (const Placement& s : ctx.sym_a)
      for (const Placement& s2 : ctx.sym_b) {
        const Placement want = compose(compose(compose(placements[i].placement, s), ctx.relative), s2);
        auto it = b_at.find(want);
        if (it == b_at.end()) continue;
        for (std::uint32_t j : it->second) {
          if (j == i || used[j]) continue;
          if (!best || placements[j].placement < placements[*best].placement) best = j;
        }
      }
    if (best) {
      used[i] = used[*best] = true;
      m.pairs.emplace_back(i, *best);
    }
  }
  for (std::uint32_t i = 0; i < placements.size(); ++i) {
    if (used[i]) continue;
    // A self-pair reports each leftover once, on the a side.
    if (placements[i].tile == ctx.a)
      m.unmatched_a.push_back(i);
    else if (placements[i].tile == ctx.b)
      m.unmatched_b.push_back(i);
  }
  return m;
}

std::vector<PlacedTile> indexed(const Tileset& ts, const std::vector<Child>& children) {
  std::vector<PlacedTile> out;
  for (const Child& c : children) out.push_back({static_cast<std::uint32_t>(*ts.index_of(c.tile)), c.placement});
  return out;
}

// Pairs the children and replaces each pair by one child of `fused`.
std::vector<Child> fuse_children(const Tileset& ts, const std::vector<Child>& children, const PairContext& ctx,
                                 const std::string& fused, const std::string& where) {
  const PairMatch m = match_pairs(indexed(ts, children), ctx);
  if (!m.unmatched_a.empty() || !m.unmatched_b.empty())
    throw Error(Errc::unmatched_occurrence,
                where + ": " + std::to_string(m.unmatched_a.size() + m.unmatched_b.size()) +
                    " child occurrence(s) cannot be paired; fusion would break the rule");
  std::vector<int> role(children.size(), 0);  // 1 = first of a pair, 2 = second
  for (const auto& [i, j] : m.pairs) {
    role[i] = 1;
    role[j] = 2;
  }
  std::vector<Child> out;
  for (std::size_t i = 0; i < children.size(); ++i) {
    if (role[i] == 1)
      out.push_back({fused, children[i].placement});
    else if (role[i] == 0)
      out.push_back(children[i]);
  }
  return out;
}

bool referenced(const Tileset& ts, std::string_view id) {
  for (const SubstitutionRule& r : ts.rules)
    for (const Child& c : r.children)
      if (c.tile == id) return true;
  return false;
}

void require_valid(const Tileset& ts, const char* op) {
  const TilesetReport report = validate_tileset(ts);
  if (!report.passed()) {
    std::string parents;
    for (const std::string& p : report.failed_parents()) parents += (parents.empty() ? "" : ", ") + p;
    throw Error(Errc::invalid_argument, std::string(op) + " produced an invalid tileset (rules: " + parents + ")");
  }
}

// ------------------------------------------------------------------ dedup

struct ChildSig {
  int cls = 0;
  Geometry geom;
  friend bool operator==(const ChildSig&, const ChildSig&) = default;
  friend auto operator<=>(const ChildSig& a, const ChildSig& b) {
    if (auto c = a.cls <=> b.cls; c != 0) return c;
    return a.geom <=> b.geom;
  }
};

using RuleSig = std::vector<ChildSig>;

RuleSig rule_signature(const Tileset& ts, const SubstitutionRule* rule, const Placement& frame,
                       const std::vector<int>& cls) {
  RuleSig sig;
  if (!rule) return sig;
  const Placement up = inflate(frame, ts.scale);
  for (const Child& c : rule->children) {
    const std::size_t idx = *ts.index_of(c.tile);
    sig.push_back({cls[idx], placed_geometry(ts.tiles[idx], compose(up, c.placement))});
  }
  std::sort(sig.begin(), sig.end());
  return sig;
}

struct CanonicalTile {
  Geometry geom;
  Placement to_canonical;
};

CanonicalTile canonical_tile(const TilePrototype& t) {
  std::optional<CanonicalTile> best;
  for (const D4 d : D4::all()) {
    const Box b = place(t.shape, {d, {0, 0}}).bounds();
    const Placement pl{d, Vec2{0, 0} - b.min};
    Geometry g = placed_geometry(t, pl);
    if (!best || g < best->geom) best = CanonicalTile{std::move(g), pl};
  }
  return *best;
}

}  // namespace

std::vector<Placement> tile_symmetries(const TilePrototype& tile) {
  const Geometry self = placed_geometry(tile, Placement{});
  const Box b = tile.shape.bounds();
  std::vector<Placement> out;
  for (const D4 d : D4::all()) {
    const Box ib = place(tile.shape, {d, {0, 0}}).bounds();
    const Placement pl{d, b.min - ib.min};
    if (placed_geometry(tile, pl) == self) out.push_back(pl);
  }
  return out;
}

bool PairingEvidence::holds() const {
  return std::all_of(seeds.begin(), seeds.end(), [](const SeedPairing& s) { return s.holds(); });
}

std::size_t PairingEvidence::unmatched() const {
  std::size_t n = 0;
  for (const SeedPairing& s : seeds) n += s.unmatched_a.size() + s.unmatched_b.size();
  return n;
}

PairingEvidence find_pairings(const Tileset& ts, const PairRelation& rel, unsigned depth) {
  if (depth < 1) throw Error(Errc::invalid_argument, "pairing depth must be at least 1");
  const PairContext ctx = pair_context(ts, rel);
  PairingEvidence ev;
  ev.depth = depth;
  for (const TilePrototype& t : ts.tiles) {
    if (!ts.rule_for(t.id)) continue;
    const Patch p = expand_tile(ts, t.id, depth);
    PairMatch m = match_pairs(p.placements, ctx);
    ev.seeds.push_back({t.id, m.a_count, m.b_count, m.pairs.size(), std::move(m.unmatched_a),
                        std::move(m.unmatched_b)});
  }
  return ev;
}

Tileset fuse(const Tileset& ts, const PairRelation& rel, const std::string& new_id) {
  if (new_id.empty()) throw Error(Errc::invalid_argument, "fused tile id must be non-empty");
  if (ts.find_tile(new_id)) throw Error(Errc::duplicate_id, "tile id \"" + new_id + "\" already exists");
  const PairContext ctx = pair_context(ts, rel);
  for (unsigned depth : {1u, 2u}) {
    const PairingEvidence ev = find_pairings(ts, rel, depth);
    if (!ev.holds())
      throw Error(Errc::unmatched_occurrence, std::to_string(ev.unmatched()) + " occurrence(s) of \"" + rel.tile_a +
                                                 "\"/\"" + rel.tile_b + "\" are unpaired at depth " +
                                                 std::to_string(depth));
  }
  const TilePrototype& ta = ts.tile(rel.tile_a);
  const TilePrototype& tb = ts.tile(rel.tile_b);

  std::vector<Cell> cells(ta.shape.cells().begin(), ta.shape.cells().end());
  const Polyomino placed_b = place(tb.shape, rel.relative);
  for (const Cell& c : placed_b.cells()) cells.push_back(c);
  std::vector<MarkSegment> marks = ta.marks_of(Layer::tile);
  for (const MarkSegment& m : tb.marks_of(Layer::tile)) marks.push_back(place(m, rel.relative));
  TilePrototype fused{new_id, Polyomino(std::move(cells)), merge_segments(marks), ta.color};

  const SubstitutionRule* ra = ts.rule_for(rel.tile_a);
  const SubstitutionRule* rb = ts.rule_for(rel.tile_b);
  if (static_cast<bool>(ra) != static_cast<bool>(rb))
    throw Error(Errc::no_rule, "exactly one of \"" + rel.tile_a + "\" and \"" + rel.tile_b +
                                   "\" has a rule; the fused tile's rule cannot be rebuilt");

  Tileset out;
  out.name = ts.name;
  out.scale = ts.scale;
  out.metadata = ts.metadata;
  for (const SubstitutionRule& r : ts.rules) {
    if (r.parent == rel.tile_a || r.parent == rel.tile_b) continue;
    out.rules.push_back({r.parent, fuse_children(ts, r.children, ctx, new_id, "rule \"" + r.parent + "\"")});
  }
  std::optional<SubstitutionRule> fused_rule;
  if (ra) {
    std::vector<Child> combined = ra->children;
    const Placement up = inflate(rel.relative, ts.scale);
    for (const Child& c : rb->children) combined.push_back({c.tile, compose(up, c.placement)});
    fused_rule = SubstitutionRule{new_id, fuse_children(ts, combined, ctx, new_id, "rebuilt rule \"" + new_id + "\"")};
  }

  // Only the pair's own rules may still mention a or b; those go with them.
  const bool keep_a = referenced(out, rel.tile_a);
  const bool keep_b = referenced(out, rel.tile_b);
  for (const TilePrototype& t : ts.tiles) {
    if (t.id == rel.tile_a) {
      out.tiles.push_back(fused);
      if (keep_a) out.tiles.push_back(t);
    } else if (t.id != rel.tile_b || keep_b) {
      out.tiles.push_back(t);
    }
  }
  if (fused_rule) out.rules.push_back(std::move(*fused_rule));
  check_structure(out);
  if (ra) {
    TilePrototype& f = *std::find_if(out.tiles.begin(), out.tiles.end(), [&](auto& t) { return t.id == new_id; });
    for (const MarkSegment& m : derived_super_marks(out, new_id)) f.marks.push_back(m);
  }
  require_valid(out, "fuse");
  return out;
}

DedupResult dedup(const Tileset& ts) {
  const std::size_t n = ts.tiles.size();
  std::vector<CanonicalTile> canon;
  std::vector<std::vector<Placement>> sym;
  std::vector<const SubstitutionRule*> rule(n);
  for (std::size_t i = 0; i < n; ++i) {
    canon.push_back(canonical_tile(ts.tiles[i]));
    sym.push_back(tile_symmetries(ts.tiles[i]));
    rule[i] = ts.rule_for(ts.tiles[i].id);
  }

  auto assign = [&](const auto& keys) {
    std::vector<int> cls(n);
    auto sorted = keys;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (std::size_t i = 0; i < n; ++i)
      cls[i] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), keys[i]) - sorted.begin());
    return cls;
  };

  std::vector<std::pair<bool, Geometry>> initial;
  for (std::size_t i = 0; i < n; ++i) initial.emplace_back(rule[i] != nullptr, canon[i].geom);
  std::vector<int> cls = assign(initial);

  auto signature = [&](std::size_t i) {
    std::optional<RuleSig> best;
    for (const Placement& s : sym[i]) {
      RuleSig sig = rule_signature(ts, rule[i], compose(canon[i].to_canonical, s), cls);
      if (!best || sig < *best) best = std::move(sig);
    }
    return *best;
  };

  // Refine until the partition is stable.
  for (;;) {
    std::vector<std::pair<int, RuleSig>> keys;
    for (std::size_t i = 0; i < n; ++i) keys.emplace_back(cls[i], signature(i));
    std::vector<int> next = assign(keys);
    const auto count = [](const std::vector<int>& c) { return std::set<int>(c.begin(), c.end()).size(); };
    const bool stable = count(next) == count(cls);
    cls = std::move(next);
    if (stable) break;
  }

  DedupResult result;
  std::vector<std::optional<std::size_t>> rep(n);
  std::vector<Placement> to_rep(n);  // child (i, q) == child (rep, q * to_rep[i])
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j)
      if (!rep[j] && cls[j] == cls[i]) {
        rep[i] = j;
        break;
      }
    if (!rep[i]) continue;
    const std::size_t r = *rep[i];
    const RuleSig target = rule_signature(ts, rule[i], Placement{}, cls);
    bool found = false;
    for (const Placement& s : sym[r]) {
      const Placement h = compose(compose(canon[i].to_canonical.inverse(), canon[r].to_canonical), s);
      if (!rule[r] || rule_signature(ts, rule[r], h, cls) == target) {
        to_rep[i] = h;
        found = true;
        break;
      }
    }
    if (!found) throw std::logic_error("dedup: congruent tiles without a matching rule alignment");
    result.mapping.emplace(ts.tiles[i].id, ts.tiles[r].id);
  }

  Tileset& out = result.tileset;
  out.name = ts.name;
  out.scale = ts.scale;
  out.metadata = ts.metadata;
  for (std::size_t i = 0; i < n; ++i)
    if (!rep[i]) out.tiles.push_back(ts.tiles[i]);
  for (const SubstitutionRule& r : ts.rules) {
    const std::size_t p = *ts.index_of(r.parent);
    if (rep[p]) continue;
    SubstitutionRule nr{r.parent, {}};
    for (const Child& c : r.children) {
      const std::size_t ci = *ts.index_of(c.tile);
      if (rep[ci])
        nr.children.push_back({ts.tiles[*rep[ci]].id, compose(c.placement, to_rep[ci])});
      else
        nr.children.push_back(c);
    }
    out.rules.push_back(std::move(nr));
  }
  check_structure(out);
  require_valid(out, "dedup");
  return result;
}

DecompositionCheck check_decomposition(const Tileset& ts, const Decomposition& d) {
  const TilePrototype& target = ts.tile(d.target);
  DecompositionCheck check;
  std::unordered_map<Cell, int, Vec2Hash> count;
  std::vector<MarkSegment> marks;
  for (const Child& part : d.parts) {
    if (part.tile == d.target) check.uses_target = true;
    const TilePrototype& t = ts.tile(part.tile);
    const Polyomino placed = place(t.shape, part.placement);
    for (const Cell& c : placed.cells()) ++count[c];
    for (const MarkSegment& m : placed_tile_marks(t, part.placement)) marks.push_back(m);
  }
  for (const auto& [cell, n] : count) {
    if (n > 1) check.cover.overlap_cells.push_back(cell);
    if (!target.shape.contains(cell)) check.cover.stray_cells.push_back(cell);
  }
  for (const Cell& c : target.shape.cells())
    if (!count.contains(c)) check.cover.hole_cells.push_back(c);
  std::sort(check.cover.overlap_cells.begin(), check.cover.overlap_cells.end());
  std::sort(check.cover.stray_cells.begin(), check.cover.stray_cells.end());

  const auto produced = merge_segments(marks);
  const auto wanted = placed_tile_marks(target, Placement{});
  std::set_difference(wanted.begin(), wanted.end(), produced.begin(), produced.end(),
                      std::back_inserter(check.missing_marks));
  std::set_difference(produced.begin(), produced.end(), wanted.begin(), wanted.end(),
                      std::back_inserter(check.extra_marks));
  return check;
}

Tileset eliminate(const Tileset& ts, const Decomposition& d) {
  const DecompositionCheck check = check_decomposition(ts, d);
  if (!check.valid()) {
    std::string what = "invalid decomposition of \"" + d.target + "\":";
    auto list = [&](const char* label, const std::vector<Cell>& cells) {
      if (cells.empty()) return;
      what += std::string(" ") + label + " cells";
      for (const Cell& c : cells) what += " (" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
      what += ";";
    };
    list("hole", check.cover.hole_cells);
    list("overlap", check.cover.overlap_cells);
    list("stray", check.cover.stray_cells);
    if (!check.missing_marks.empty() || !check.extra_marks.empty())
      what += " mark mismatch (" + std::to_string(check.missing_marks.size()) + " missing, " +
              std::to_string(check.extra_marks.size()) + " extra);";
    if (check.uses_target) what += " uses the target itself;";
    throw Error(Errc::invalid_decomposition, what);
  }
  Tileset out;
  out.name = ts.name;
  out.scale = ts.scale;
  out.metadata = ts.metadata;
  for (const TilePrototype& t : ts.tiles)
    if (t.id != d.target) out.tiles.push_back(t);
  for (const SubstitutionRule& r : ts.rules) {
    if (r.parent == d.target) continue;
    SubstitutionRule nr{r.parent, {}};
    for (const Child& c : r.children) {
      if (c.tile != d.target) {
        nr.children.push_back(c);
        continue;
      }
      for (const Child& part : d.parts) nr.children.push_back({part.tile, compose(c.placement, part.placement)});
    }
    out.rules.push_back(std::move(nr));
  }
  check_structure(out);
  require_valid(out, "eliminate");
  return out;
}

std::vector<Decomposition> discover_decompositions(const Tileset& ts, std::string_view target_id,
                                                   unsigned max_parts) {
  if (max_parts > 4) throw Error(Errc::invalid_argument, "max_parts is limited to 4");
  const TilePrototype& target = ts.tile(target_id);

  // Distinct oriented images of every other tile, normalised so that the
  // least cell sits at the origin.
  struct Image {
    std::string tile;
    Placement base;
    std::vector<Cell> cells;
  };
  std::vector<Image> images;
  for (const TilePrototype& t : ts.tiles) {
    if (t.id == target.id) continue;
    std::set<Geometry> seen;
    for (const D4 d : D4::all()) {
      const Polyomino img = place(t.shape, {d, {0, 0}});
      const Placement base{d, Vec2{0, 0} - img.cells().front()};
      Geometry g = placed_geometry(t, base);
      if (!seen.insert(g).second) continue;
      images.push_back({t.id, base, std::move(g.cells)});
    }
  }

  std::set<Cell> remaining(target.shape.cells().begin(), target.shape.cells().end());
  std::vector<Child> chosen;
  std::vector<Decomposition> found;
  std::function<void()> search = [&] {
    if (remaining.empty()) {
      Decomposition d{target.id, chosen};
      if (check_decomposition(ts, d).valid()) found.push_back(std::move(d));
      return;
    }
    if (chosen.size() >= max_parts) return;
    const Cell anchor = *remaining.begin();
    for (const Image& img : images) {
      bool fits = true;
      for (const Cell& c : img.cells)
        if (!remaining.contains(c + anchor)) {
          fits = false;
          break;
        }
      if (!fits) continue;
      for (const Cell& c : img.cells) remaining.erase(c + anchor);
      chosen.push_back({img.tile, Placement{img.base.transform, img.base.offset + anchor}});
      search();
      chosen.pop_back();
      for (const Cell& c : img.cells) remaining.insert(c + anchor);
    }
  };
  search();

  auto key = [](const Decomposition& d) {
    std::vector<std::tuple<Vec2, std::string, std::uint8_t>> k;
    for (const Child& c : d.parts) k.emplace_back(c.placement.offset, c.tile, c.placement.transform.index());
    std::sort(k.begin(), k.end());
    return k;
  };
  std::sort(found.begin(), found.end(), [&](const Decomposition& a, const Decomposition& b) { return key(a) < key(b); });
  return found;
}

}  // namespace axtile
