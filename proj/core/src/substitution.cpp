#include "axtile/substitution.hpp"

#include <algorithm>
#include <istream>
#include <iterator>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

namespace axtile {

using nlohmann::json;

RuleTable::RuleTable(const Tileset& ts) : rules_(ts.tiles.size()), scale_(ts.scale) {
  for (const SubstitutionRule& r : ts.rules) {
    std::vector<PlacedTile> children;
    children.reserve(r.children.size());
    for (const Child& c : r.children) children.push_back({static_cast<std::uint32_t>(*ts.index_of(c.tile)), c.placement});
    rules_[*ts.index_of(r.parent)] = std::move(children);
  }
}

namespace {

std::uint32_t require_index(const Tileset& ts, std::string_view id) {
  if (auto i = ts.index_of(id)) return static_cast<std::uint32_t>(*i);
  throw Error(Errc::unresolved_id, "unknown tile id \"" + std::string(id) + "\"");
}

[[noreturn]] void unruled(const Tileset& ts, std::uint32_t tile) {
  throw Error(Errc::no_rule, "tile \"" + ts.tiles[tile].id + "\" has no substitution rule and cannot be expanded");
}

// Fails before any work when some tile that would need expanding is unruled.
void check_expandable(const Tileset& ts, const RuleTable& rt, std::uint32_t seed, unsigned depth) {
  std::set<std::uint32_t> level{seed};
  for (unsigned d = 0; d < depth && !level.empty(); ++d) {
    std::set<std::uint32_t> next;
    for (std::uint32_t t : level) {
      const auto* children = rt.children(t);
      if (!children) unruled(ts, t);
      for (const PlacedTile& c : *children) next.insert(c.tile);
    }
    level = std::move(next);
  }
}

void dfs(const RuleTable& rt, const PlacedTile& pt, unsigned remaining, const PlacementVisitor& visit) {
  if (remaining == 0) {
    visit(pt);
    return;
  }
  const Placement up = inflate(pt.placement, rt.scale());
  for (const PlacedTile& c : *rt.children(pt.tile)) dfs(rt, {c.tile, compose(up, c.placement)}, remaining - 1, visit);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

RawPlacement placement_from_json(const json& j, std::size_t line) {
  auto fail = [line](const std::string& what) -> ParseError {
    return ParseError("patch placement: " + what, line, 1);
  };
  if (!j.is_object()) throw fail("expected an object");
  auto tile = j.find("tile");
  auto t = j.find("t");
  auto o = j.find("o");
  if (tile == j.end() || !tile->is_string()) throw fail("missing string \"tile\"");
  if (t == j.end() || !t->is_string()) throw fail("missing string \"t\"");
  if (o == j.end() || !o->is_array() || o->size() != 2 || !(*o)[0].is_number_integer() ||
      !(*o)[1].is_number_integer())
    throw fail("\"o\" must be [int, int]");
  const auto d4 = D4::parse(t->get<std::string>());
  if (!d4) throw fail("unknown transform \"" + t->get<std::string>() + "\"");
  return {tile->get<std::string>(), Placement{*d4, Vec2{(*o)[0].get<Coord>(), (*o)[1].get<Coord>()}}};
}

json parse_json(std::string_view text, std::size_t line_offset) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = line_offset;
    std::size_t col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError("patch syntax error at line " + std::to_string(line) + ", column " + std::to_string(col), line,
                     col);
  }
}

std::uint32_t level_from_json(const json& doc) {
  auto level = doc.find("level");
  if (level == doc.end() || !level->is_number_unsigned())
    throw ParseError("patch: \"level\" must be a non-negative integer", 1, 1);
  return level->get<std::uint32_t>();
}

std::string tileset_from_json(const json& doc) {
  auto name = doc.find("tileset");
  if (name == doc.end() || !name->is_string()) throw ParseError("patch: missing string \"tileset\"", 1, 1);
  return name->get<std::string>();
}

}  // namespace

Patch seed_patch(const Tileset& ts, std::string_view tile_id) {
  return Patch{ts.name, 0, {PlacedTile{require_index(ts, tile_id), Placement{}}}, std::nullopt};
}

Patch expand_patch(const Tileset& ts, const Patch& p, const ExpandOptions& opts) {
  const RuleTable rt(ts);
  for (const PlacedTile& pt : p.placements)
    if (!rt.children(pt.tile)) unruled(ts, pt.tile);
  Patch out{p.tileset, p.level + 1, {}, std::nullopt};
  const bool track = opts.provenance;
  if (track) out.provenance.emplace();
  for (std::size_t i = 0; i < p.placements.size(); ++i) {
    const PlacedTile& pt = p.placements[i];
    const Placement up = inflate(pt.placement, ts.scale);
    const auto& children = *rt.children(pt.tile);
    for (std::uint32_t c = 0; c < children.size(); ++c) {
      out.placements.push_back({children[c].tile, compose(up, children[c].placement)});
      if (track) {
        std::vector<std::uint32_t> path;
        if (p.provenance) path = (*p.provenance)[i];
        path.push_back(c);
        out.provenance->push_back(std::move(path));
      }
    }
  }
  return out;
}

Patch expand_tile(const Tileset& ts, std::string_view tile_id, unsigned depth, const ExpandOptions& opts) {
  Patch p = seed_patch(ts, tile_id);
  const RuleTable rt(ts);
  check_expandable(ts, rt, p.placements.front().tile, depth);
  if (opts.provenance) p.provenance.emplace(1);
  for (unsigned d = 0; d < depth; ++d) p = expand_patch(ts, p, opts);
  return p;
}

std::uint64_t visit_expansion(const Tileset& ts, std::string_view tile_id, unsigned depth,
                              const PlacementVisitor& visit, const VisitOptions& opts) {
  const RuleTable rt(ts);
  const PlacedTile seed{require_index(ts, tile_id), Placement{}};
  check_expandable(ts, rt, seed.tile, depth);
  std::uint64_t count = 0;
  if (opts.threads <= 1) {
    dfs(rt, seed, depth, [&](const PlacedTile& pt) {
      ++count;
      visit(pt);
    });
    return count;
  }

  // Expand breadth-first until there is enough independent work to share.
  std::vector<PlacedTile> frontier{seed};
  unsigned level = 0;
  while (level < depth && frontier.size() < 8u * opts.threads) {
    std::vector<PlacedTile> next;
    for (const PlacedTile& pt : frontier) {
      const Placement up = inflate(pt.placement, rt.scale());
      for (const PlacedTile& c : *rt.children(pt.tile)) next.push_back({c.tile, compose(up, c.placement)});
    }
    frontier = std::move(next);
    ++level;
  }
  std::vector<std::uint64_t> counts(opts.threads, 0);
  {
    std::vector<std::jthread> workers;
    for (unsigned w = 0; w < opts.threads; ++w) {
      workers.emplace_back([&, w] {
        for (std::size_t i = w; i < frontier.size(); i += opts.threads)
          dfs(rt, frontier[i], depth - level, [&](const PlacedTile& pt) {
            ++counts[w];
            visit(pt);
          });
      });
    }
  }
  for (std::uint64_t c : counts) count += c;
  return count;
}

std::vector<std::uint64_t> expansion_counts(const Tileset& ts, std::string_view tile_id, unsigned depth) {
  const RuleTable rt(ts);
  const std::uint32_t seed = require_index(ts, tile_id);
  check_expandable(ts, rt, seed, depth);
  std::vector<std::uint64_t> counts(ts.tiles.size(), 0);
  counts[seed] = 1;
  for (unsigned d = 0; d < depth; ++d) {
    std::vector<std::uint64_t> next(ts.tiles.size(), 0);
    for (std::uint32_t t = 0; t < counts.size(); ++t) {
      if (counts[t] == 0) continue;
      for (const PlacedTile& c : *rt.children(t)) next[c.tile] += counts[t];
    }
    counts = std::move(next);
  }
  return counts;
}

std::vector<std::pair<Cell, OccupancyEntry>> Occupancy::sorted() const {
  std::vector<std::pair<Cell, OccupancyEntry>> out(cells_.begin(), cells_.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

Occupancy patch_occupancy(const Tileset& ts, const Patch& p) {
  Occupancy occ;
  std::optional<Cell> first_overlap;
  bool any = false;
  for (std::uint32_t i = 0; i < p.placements.size(); ++i) {
    const PlacedTile& pt = p.placements[i];
    for (const Cell& local : ts.tiles.at(pt.tile).shape.cells()) {
      const Cell c = pt.placement.apply(local);
      auto [it, inserted] = occ.cells_.try_emplace(c, OccupancyEntry{pt.tile, pt.placement.transform, i});
      if (!inserted && (!first_overlap || c < *first_overlap)) first_overlap = c;
      if (!any) {
        occ.bounds_ = {c, c};
        any = true;
      }
      occ.bounds_.min.x = std::min(occ.bounds_.min.x, c.x);
      occ.bounds_.min.y = std::min(occ.bounds_.min.y, c.y);
      occ.bounds_.max.x = std::max(occ.bounds_.max.x, c.x);
      occ.bounds_.max.y = std::max(occ.bounds_.max.y, c.y);
    }
  }
  if (first_overlap)
    throw OverlapError(*first_overlap, "cell (" + std::to_string(first_overlap->x) + ", " +
                                           std::to_string(first_overlap->y) + ") is covered more than once");
  return occ;
}

PatchWriter::PatchWriter(std::ostream& out, const Tileset& ts, std::uint32_t level) : out_(out), ts_(ts) {
  out_ << "{\"tileset\":" << json(ts.name).dump() << ",\"level\":" << level << ",\"placements\":[\n";
}

void PatchWriter::write(const PlacedTile& pt) {
  if (!first_) out_ << ",\n";
  first_ = false;
  out_ << "{\"tile\":" << json(ts_.tiles.at(pt.tile).id).dump() << ",\"t\":\"" << pt.placement.transform.name()
       << "\",\"o\":[" << pt.placement.offset.x << ',' << pt.placement.offset.y << "]}";
}

void PatchWriter::finish() {
  if (finished_) return;
  finished_ = true;
  out_ << (first_ ? "" : "\n") << "]}\n";
}

std::string serialize_patch(const Tileset& ts, const Patch& p) {
  std::ostringstream out;
  Tileset named = ts;
  named.name = p.tileset;
  PatchWriter w(out, named, p.level);
  for (const PlacedTile& pt : p.placements) w.write(pt);
  w.finish();
  return out.str();
}

Patch parse_patch(const Tileset& ts, std::string_view text) {
  std::istringstream in{std::string(text)};
  PatchReader reader(in);
  const TileResolver resolve(ts);
  Patch p{reader.tileset(), reader.level(), {}, std::nullopt};
  RawPlacement raw;
  while (reader.next(raw)) p.placements.push_back(resolve(raw));
  return p;
}

PatchReader::PatchReader(std::istream& in) : in_(in) {
  std::string first;
  std::getline(in_, first);
  const std::string_view head = trim(first);
  if (head.starts_with("{\"tileset\":") && head.ends_with("[")) {
    const json doc = parse_json(std::string(head) + "]}", 1);
    tileset_ = tileset_from_json(doc);
    level_ = level_from_json(doc);
    streaming_ = true;
    return;
  }
  std::string text = first + "\n" + std::string(std::istreambuf_iterator<char>(in_), {});
  const json doc = parse_json(text, 1);
  if (!doc.is_object()) throw ParseError("patch: expected an object", 1, 1);
  tileset_ = tileset_from_json(doc);
  level_ = level_from_json(doc);
  auto placements = doc.find("placements");
  if (placements == doc.end() || !placements->is_array()) throw ParseError("patch: missing array \"placements\"", 1, 1);
  for (const json& j : *placements) buffered_.push_back(placement_from_json(j, 1));
}

bool PatchReader::next(RawPlacement& out) {
  if (!streaming_) {
    if (cursor_ >= buffered_.size()) return false;
    out = std::move(buffered_[cursor_++]);
    return true;
  }
  std::string line;
  while (!done_ && std::getline(in_, line)) {
    ++line_no_;
    std::string_view s = trim(line);
    if (s.empty()) continue;
    if (s == "]}") {
      done_ = true;
      return false;
    }
    if (s.back() == ',') s.remove_suffix(1);
    out = placement_from_json(parse_json(s, line_no_), line_no_);
    return true;
  }
  if (!done_) throw ParseError("patch: unexpected end of input", line_no_, 1);
  return false;
}

TileResolver::TileResolver(const Tileset& ts) {
  for (std::uint32_t i = 0; i < ts.tiles.size(); ++i) index_.emplace(ts.tiles[i].id, i);
}

PlacedTile TileResolver::operator()(const RawPlacement& raw) const {
  auto it = index_.find(raw.tile);
  if (it == index_.end()) throw Error(Errc::unresolved_id, "patch references unknown tile \"" + raw.tile + "\"");
  return {it->second, raw.placement};
}

}  // namespace axtile
