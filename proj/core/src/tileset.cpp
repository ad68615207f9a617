#include "axtile/tileset.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "axtile/error.hpp"

namespace axtile {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what, 0, 0);
}

const json& member(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(where, std::string("missing \"") + key + "\"");
  return *it;
}

std::string as_string(const json& v, const std::string& where) {
  if (!v.is_string()) schema_error(where, "expected a string");
  return v.get<std::string>();
}

std::int64_t as_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) schema_error(where, "expected an integer");
  return v.get<std::int64_t>();
}

Vec2 as_pair(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2) schema_error(where, "expected [int, int]");
  return {as_int(v[0], where), as_int(v[1], where)};
}

const json& as_array(const json& v, const std::string& where) {
  if (!v.is_array()) schema_error(where, "expected an array");
  return v;
}

TilePrototype parse_tile(const json& t, const std::string& where) {
  if (!t.is_object()) schema_error(where, "expected an object");
  std::string id = as_string(member(t, "id", where), where + ".id");
  if (id.empty()) schema_error(where + ".id", "tile id must be non-empty");
  std::vector<Cell> cells;
  for (const json& c : as_array(member(t, "cells", where), where + ".cells"))
    cells.push_back(as_pair(c, where + ".cells"));
  std::optional<Polyomino> shape;
  try {
    shape.emplace(std::move(cells));
  } catch (const Error& e) {
    throw Error(e.code(), "tile \"" + id + "\": " + e.what());
  }
  std::vector<MarkSegment> marks;
  if (auto it = t.find("marks"); it != t.end()) {
    for (const json& m : as_array(*it, where + ".marks")) {
      const std::string mw = where + ".marks";
      if (!m.is_object()) schema_error(mw, "expected an object");
      const std::string layer = as_string(member(m, "layer", mw), mw + ".layer");
      if (layer != "tile" && layer != "super") schema_error(mw + ".layer", "expected \"tile\" or \"super\"");
      try {
        marks.emplace_back(as_pair(member(m, "a", mw), mw + ".a"), as_pair(member(m, "b", mw), mw + ".b"),
                           layer == "tile" ? Layer::tile : Layer::super);
      } catch (const ParseError&) {
        throw;
      } catch (const Error& e) {
        throw Error(e.code(), "tile \"" + id + "\": " + e.what());
      }
    }
  }
  std::optional<std::string> color;
  if (auto it = t.find("color"); it != t.end()) color = as_string(*it, where + ".color");
  return TilePrototype{std::move(id), std::move(*shape), std::move(marks), std::move(color)};
}

SubstitutionRule parse_rule(const json& r, const std::string& where) {
  if (!r.is_object()) schema_error(where, "expected an object");
  SubstitutionRule rule;
  rule.parent = as_string(member(r, "parent", where), where + ".parent");
  for (const json& c : as_array(member(r, "children", where), where + ".children")) {
    const std::string cw = where + ".children";
    if (!c.is_object()) schema_error(cw, "expected an object");
    const std::string sym = as_string(member(c, "t", cw), cw + ".t");
    const auto t = D4::parse(sym);
    if (!t) schema_error(cw + ".t", "unknown transform \"" + sym + "\"");
    rule.children.push_back(
        {as_string(member(c, "tile", cw), cw + ".tile"), Placement{*t, as_pair(member(c, "o", cw), cw + ".o")}});
  }
  return rule;
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

std::string quoted(const std::string& s) { return json(s).dump(); }

std::string pair_text(Vec2 v) { return "[" + std::to_string(v.x) + ", " + std::to_string(v.y) + "]"; }

std::string child_text(const Child& c) {
  return "{\"o\": " + pair_text(c.placement.offset) + ", \"t\": \"" + std::string(c.placement.transform.name()) +
         "\", \"tile\": " + quoted(c.tile) + "}";
}

std::string mark_text(const MarkSegment& m) {
  return "{\"a\": " + pair_text(m.a) + ", \"b\": " + pair_text(m.b) + ", \"layer\": \"" +
         std::string(to_string(m.layer)) + "\"}";
}

std::vector<MarkSegment> sorted_marks(std::vector<MarkSegment> m) {
  std::sort(m.begin(), m.end());
  return m;
}

}  // namespace

const TilePrototype* Tileset::find_tile(std::string_view id) const {
  for (const TilePrototype& t : tiles)
    if (t.id == id) return &t;
  return nullptr;
}

const TilePrototype& Tileset::tile(std::string_view id) const {
  if (const TilePrototype* t = find_tile(id)) return *t;
  throw Error(Errc::unresolved_id, "unknown tile id \"" + std::string(id) + "\"");
}

std::optional<std::size_t> Tileset::index_of(std::string_view id) const {
  for (std::size_t i = 0; i < tiles.size(); ++i)
    if (tiles[i].id == id) return i;
  return std::nullopt;
}

const SubstitutionRule* Tileset::rule_for(std::string_view id) const {
  for (const SubstitutionRule& r : rules)
    if (r.parent == id) return &r;
  return nullptr;
}

void check_structure(const Tileset& ts) {
  if (ts.scale < 2)
    throw Error(Errc::scale_out_of_range, "scale must be an integer >= 2, got " + std::to_string(ts.scale));
  std::unordered_set<std::string> ids;
  for (const TilePrototype& t : ts.tiles) {
    if (t.id.empty()) throw Error(Errc::invalid_argument, "tile id must be non-empty");
    if (!ids.insert(t.id).second) throw Error(Errc::duplicate_id, "duplicate tile id \"" + t.id + "\"");
    std::optional<Polyomino> inflated;
    for (const MarkSegment& m : t.marks) {
      const Polyomino* region = &t.shape;
      if (m.layer == Layer::super) {
        if (!inflated) inflated = inflate(t.shape, ts.scale);
        region = &*inflated;
      }
      if (!in_closed_region(*region, m.a) || !in_closed_region(*region, m.b))
        throw Error(Errc::invalid_mark, "tile \"" + t.id + "\": " + std::string(to_string(m.layer)) +
                                            " mark endpoint outside the tile region");
    }
  }
  std::unordered_set<std::string> parents;
  for (const SubstitutionRule& r : ts.rules) {
    if (!ids.contains(r.parent)) throw Error(Errc::unresolved_id, "rule parent \"" + r.parent + "\" is not a tile");
    if (!parents.insert(r.parent).second)
      throw Error(Errc::duplicate_id, "more than one rule for parent \"" + r.parent + "\"");
    for (const Child& c : r.children)
      if (!ids.contains(c.tile))
        throw Error(Errc::unresolved_id, "rule \"" + r.parent + "\" references unknown tile \"" + c.tile + "\"");
  }
}

bool structurally_equal(const Tileset& a, const Tileset& b) {
  if (a.name != b.name || a.scale != b.scale || a.metadata != b.metadata) return false;
  if (a.tiles.size() != b.tiles.size() || a.rules.size() != b.rules.size()) return false;
  for (const TilePrototype& t : a.tiles) {
    const TilePrototype* u = b.find_tile(t.id);
    if (!u || u->shape != t.shape || u->color != t.color || sorted_marks(t.marks) != sorted_marks(u->marks))
      return false;
  }
  for (const SubstitutionRule& r : a.rules) {
    const SubstitutionRule* s = b.rule_for(r.parent);
    if (!s || *s != r) return false;
  }
  return true;
}

Tileset parse_tileset(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte);
    throw ParseError("syntax error at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                         e.what(),
                     line, col);
  }
  if (!doc.is_object()) schema_error("document", "expected an object");
  Tileset ts;
  ts.name = as_string(member(doc, "name", "document"), "name");
  ts.scale = as_int(member(doc, "scale", "document"), "scale");
  if (auto it = doc.find("metadata"); it != doc.end()) {
    if (!it->is_object()) schema_error("metadata", "expected an object");
    for (const auto& [key, value] : it->items()) {
      if (value.is_string())
        ts.metadata.emplace(key, value.get<std::string>());
      else if (value.is_number_integer())
        ts.metadata.emplace(key, value.get<std::int64_t>());
      else
        schema_error("metadata." + key, "expected a string or an integer");
    }
  }
  const json& tiles = as_array(member(doc, "tiles", "document"), "tiles");
  for (std::size_t i = 0; i < tiles.size(); ++i)
    ts.tiles.push_back(parse_tile(tiles[i], "tiles[" + std::to_string(i) + "]"));
  if (auto it = doc.find("rules"); it != doc.end()) {
    const json& rules = as_array(*it, "rules");
    for (std::size_t i = 0; i < rules.size(); ++i)
      ts.rules.push_back(parse_rule(rules[i], "rules[" + std::to_string(i) + "]"));
  }
  check_structure(ts);
  return ts;
}

std::string serialize_tileset(const Tileset& ts) {
  std::vector<const TilePrototype*> tiles;
  for (const TilePrototype& t : ts.tiles) tiles.push_back(&t);
  std::sort(tiles.begin(), tiles.end(), [](auto* a, auto* b) { return a->id < b->id; });
  std::vector<const SubstitutionRule*> rules;
  for (const SubstitutionRule& r : ts.rules) rules.push_back(&r);
  std::sort(rules.begin(), rules.end(), [](auto* a, auto* b) { return a->parent < b->parent; });

  std::ostringstream out;
  out << "{\n  \"metadata\": {";
  bool first = true;
  for (const auto& [key, value] : ts.metadata) {
    out << (first ? "" : ", ") << quoted(key) << ": ";
    if (const auto* s = std::get_if<std::string>(&value))
      out << quoted(*s);
    else
      out << std::get<std::int64_t>(value);
    first = false;
  }
  out << "},\n  \"name\": " << quoted(ts.name) << ",\n  \"rules\": [";
  for (std::size_t i = 0; i < rules.size(); ++i) {
    out << (i ? ",\n" : "\n") << "    {\n      \"children\": [";
    const auto& children = rules[i]->children;
    for (std::size_t j = 0; j < children.size(); ++j)
      out << (j ? ",\n" : "\n") << "        " << child_text(children[j]);
    out << (children.empty() ? "]" : "\n      ]") << ",\n      \"parent\": " << quoted(rules[i]->parent)
        << "\n    }";
  }
  out << (rules.empty() ? "]" : "\n  ]") << ",\n  \"scale\": " << ts.scale << ",\n  \"tiles\": [";
  for (std::size_t i = 0; i < tiles.size(); ++i) {
    const TilePrototype& t = *tiles[i];
    out << (i ? ",\n" : "\n") << "    {\n      \"cells\": [";
    for (std::size_t j = 0; j < t.shape.cells().size(); ++j) out << (j ? ", " : "") << pair_text(t.shape.cells()[j]);
    out << "],\n";
    if (t.color) out << "      \"color\": " << quoted(*t.color) << ",\n";
    out << "      \"id\": " << quoted(t.id) << ",\n      \"marks\": [";
    const auto marks = sorted_marks(t.marks);
    for (std::size_t j = 0; j < marks.size(); ++j) out << (j ? ",\n" : "\n") << "        " << mark_text(marks[j]);
    out << (marks.empty() ? "]" : "\n      ]") << "\n    }";
  }
  out << (tiles.empty() ? "]" : "\n  ]") << "\n}\n";
  return out.str();
}

Tileset load_tileset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open tileset file \"" + path + "\"");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_tileset(buf.str());
}

void save_tileset(const Tileset& ts, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io, "cannot write tileset file \"" + path + "\"");
  out << serialize_tileset(ts);
}

CoverReport validate_rule(const Tileset& ts, const SubstitutionRule& rule) {
  const Polyomino target = inflate(ts.tile(rule.parent).shape, ts.scale);
  std::unordered_map<Cell, int, Vec2Hash> count;
  for (const Child& c : rule.children) {
    const Polyomino placed = place(ts.tile(c.tile).shape, c.placement);
    for (const Cell& cell : placed.cells()) ++count[cell];
  }
  CoverReport report;
  for (const auto& [cell, n] : count) {
    if (n > 1) report.overlap_cells.push_back(cell);
    if (!target.contains(cell)) report.stray_cells.push_back(cell);
  }
  for (const Cell& cell : target.cells())
    if (!count.contains(cell)) report.hole_cells.push_back(cell);
  std::sort(report.overlap_cells.begin(), report.overlap_cells.end());
  std::sort(report.stray_cells.begin(), report.stray_cells.end());
  return report;
}

bool TilesetReport::passed() const {
  return std::all_of(rules.begin(), rules.end(), [](const RuleReport& r) { return r.valid(); });
}

std::vector<std::string> TilesetReport::failed_parents() const {
  std::vector<std::string> out;
  for (const RuleReport& r : rules)
    if (!r.valid()) out.push_back(r.parent);
  return out;
}

TilesetReport validate_tileset(const Tileset& ts) {
  TilesetReport report;
  for (const SubstitutionRule& rule : ts.rules) {
    RuleReport r;
    r.parent = rule.parent;
    r.cover = validate_rule(ts, rule);
    for (const Child& c : rule.children) r.child_area += ts.tile(c.tile).shape.area();
    r.expected_area = static_cast<std::size_t>(ts.scale * ts.scale) * ts.tile(rule.parent).shape.area();
    report.rules.push_back(std::move(r));
  }
  return report;
}

std::vector<MarkSegment> derived_super_marks(const Tileset& ts, std::string_view tile_id) {
  const SubstitutionRule* rule = ts.rule_for(tile_id);
  if (!rule) throw Error(Errc::no_rule, "tile \"" + std::string(tile_id) + "\" has no substitution rule");
  std::vector<MarkSegment> placed;
  for (const Child& c : rule->children)
    for (const MarkSegment& m : ts.tile(c.tile).marks)
      if (m.layer == Layer::tile) {
        MarkSegment s = place(m, c.placement);
        s.layer = Layer::super;
        placed.push_back(s);
      }
  return merge_segments(placed);
}

namespace {

// Unit edges shared by two placed children, as doubled-frame segments.
std::vector<MarkSegment> shared_edges(const Polyomino& a, const Polyomino& b) {
  std::vector<MarkSegment> edges;
  for (const Cell& c : a.cells()) {
    if (b.contains(c + Vec2{1, 0})) edges.emplace_back(Point{2 * c.x + 2, 2 * c.y}, Point{2 * c.x + 2, 2 * c.y + 2}, Layer::tile);
    if (b.contains(c + Vec2{-1, 0})) edges.emplace_back(Point{2 * c.x, 2 * c.y}, Point{2 * c.x, 2 * c.y + 2}, Layer::tile);
    if (b.contains(c + Vec2{0, 1})) edges.emplace_back(Point{2 * c.x, 2 * c.y + 2}, Point{2 * c.x + 2, 2 * c.y + 2}, Layer::tile);
    if (b.contains(c + Vec2{0, -1})) edges.emplace_back(Point{2 * c.x, 2 * c.y}, Point{2 * c.x + 2, 2 * c.y}, Layer::tile);
  }
  return edges;
}

bool on_any(const std::vector<MarkSegment>& edges, Point p) {
  return std::any_of(edges.begin(), edges.end(), [&](const MarkSegment& e) { return e.contains(p); });
}

// Endpoints on the shared boundary of marks that cross into it (marks lying
// along the boundary are not transversal and are skipped).
std::set<Point> boundary_endpoints(const std::vector<MarkSegment>& marks, const std::vector<MarkSegment>& edges) {
  std::set<Point> out;
  for (const MarkSegment& m : marks) {
    const Point mid{(m.a.x + m.b.x) / 2, (m.a.y + m.b.y) / 2};
    const bool along = on_any(edges, m.a) && on_any(edges, m.b) && on_any(edges, mid);
    if (along) continue;
    for (Point p : {m.a, m.b})
      if (on_any(edges, p)) out.insert(p);
  }
  return out;
}

}  // namespace

bool TileCoherence::continuous() const {
  return std::all_of(edges.begin(), edges.end(), [](const EdgeContinuity& e) { return e.continuous(); });
}

bool CoherenceReport::marks_match() const {
  return std::all_of(tiles.begin(), tiles.end(), [](const TileCoherence& t) { return t.marks_match(); });
}

bool CoherenceReport::continuous() const {
  return std::all_of(tiles.begin(), tiles.end(), [](const TileCoherence& t) { return t.continuous(); });
}

CoherenceReport mark_coherence_report(const Tileset& ts) {
  CoherenceReport report;
  for (const TilePrototype& tile : ts.tiles) {
    const SubstitutionRule* rule = ts.rule_for(tile.id);
    if (!rule) continue;
    TileCoherence tc;
    tc.id = tile.id;
    const auto derived = derived_super_marks(ts, tile.id);
    const auto stored = merge_segments(tile.marks_of(Layer::super));
    std::set_intersection(stored.begin(), stored.end(), derived.begin(), derived.end(), std::back_inserter(tc.matched));
    std::set_difference(derived.begin(), derived.end(), stored.begin(), stored.end(), std::back_inserter(tc.missing));
    std::set_difference(stored.begin(), stored.end(), derived.begin(), derived.end(), std::back_inserter(tc.extra));

    std::vector<Polyomino> shapes;
    std::vector<std::vector<MarkSegment>> marks;
    for (const Child& c : rule->children) {
      const TilePrototype& ct = ts.tile(c.tile);
      shapes.push_back(place(ct.shape, c.placement));
      std::vector<MarkSegment> m;
      for (const MarkSegment& s : ct.marks)
        if (s.layer == Layer::tile) m.push_back(place(s, c.placement));
      marks.push_back(merge_segments(m));
    }
    for (std::size_t i = 0; i < shapes.size(); ++i)
      for (std::size_t j = i + 1; j < shapes.size(); ++j) {
        const auto edges = shared_edges(shapes[i], shapes[j]);
        if (edges.empty()) continue;
        EdgeContinuity ec{i, j, {}};
        const auto ei = boundary_endpoints(marks[i], edges);
        const auto ej = boundary_endpoints(marks[j], edges);
        std::set_symmetric_difference(ei.begin(), ei.end(), ej.begin(), ej.end(), std::back_inserter(ec.dangling));
        tc.edges.push_back(std::move(ec));
      }
    report.tiles.push_back(std::move(tc));
  }
  return report;
}

}  // namespace axtile
