#pragma once

// Tileset data model: prototiles with two mark layers, one substitution rule
// per ruled tile, the JSON file format, exact-cover validation of rules and
// the mark-coherence report.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "axtile/geometry.hpp"
#include "axtile/marks.hpp"

namespace axtile {

using MetaValue = std::variant<std::string, std::int64_t>;

// "tile" marks lie in the tile's own cells; "super" marks describe the
// supertile and lie in inflate(shape, k).
struct TilePrototype {
  std::string id;
  Polyomino shape;
  std::vector<MarkSegment> marks;
  std::optional<std::string> color;

  std::vector<MarkSegment> marks_of(Layer layer) const { return with_layer(marks, layer); }
};

struct Child {
  std::string tile;
  Placement placement;
  friend bool operator==(const Child&, const Child&) = default;
};

struct SubstitutionRule {
  std::string parent;
  std::vector<Child> children;
  friend bool operator==(const SubstitutionRule&, const SubstitutionRule&) = default;
};

struct Tileset {
  std::string name;
  Coord scale = 2;
  std::map<std::string, MetaValue> metadata;
  std::vector<TilePrototype> tiles;
  std::vector<SubstitutionRule> rules;

  const TilePrototype* find_tile(std::string_view id) const;
  const TilePrototype& tile(std::string_view id) const;  // throws Error(unresolved_id)
  std::optional<std::size_t> index_of(std::string_view id) const;
  const SubstitutionRule* rule_for(std::string_view id) const;
};

// Structural checks shared by the parser and every tileset rewrite: scale,
// unique ids, resolved references, one rule per parent, marks in range.
void check_structure(const Tileset& ts);

// Order-insensitive over tiles, rules and marks; child order matters.
bool structurally_equal(const Tileset& a, const Tileset& b);

Tileset parse_tileset(std::string_view text);
std::string serialize_tileset(const Tileset& ts);

Tileset load_tileset(const std::string& path);
void save_tileset(const Tileset& ts, const std::string& path);

// Cells are listed in row-major order.
struct CoverReport {
  std::vector<Cell> overlap_cells;
  std::vector<Cell> hole_cells;
  std::vector<Cell> stray_cells;

  bool valid() const { return overlap_cells.empty() && hole_cells.empty() && stray_cells.empty(); }
  friend bool operator==(const CoverReport&, const CoverReport&) = default;
};

CoverReport validate_rule(const Tileset& ts, const SubstitutionRule& rule);

struct RuleReport {
  std::string parent;
  CoverReport cover;
  std::size_t child_area = 0;
  std::size_t expected_area = 0;  // k^2 * parent area

  bool area_identity() const { return child_area == expected_area; }
  bool valid() const { return cover.valid() && area_identity(); }
};

struct TilesetReport {
  std::vector<RuleReport> rules;
  bool passed() const;
  std::vector<std::string> failed_parents() const;
};

TilesetReport validate_tileset(const Tileset& ts);

// Children's tile-layer marks in the inflated parent frame, merged into
// maximal segments and relabelled as the super layer.
// Throws Error(no_rule) when the tile has no rule.
std::vector<MarkSegment> derived_super_marks(const Tileset& ts, std::string_view tile_id);

struct EdgeContinuity {
  std::size_t child_a = 0;
  std::size_t child_b = 0;
  std::vector<Point> dangling;  // mark endpoints on the shared boundary seen from one side only

  bool continuous() const { return dangling.empty(); }
};

struct TileCoherence {
  std::string id;
  std::vector<MarkSegment> matched;
  std::vector<MarkSegment> missing;  // derived but not stored
  std::vector<MarkSegment> extra;    // stored but not derived
  std::vector<EdgeContinuity> edges;

  bool marks_match() const { return missing.empty() && extra.empty(); }
  bool continuous() const;
};

struct CoherenceReport {
  std::vector<TileCoherence> tiles;
  bool marks_match() const;
  bool continuous() const;
};

CoherenceReport mark_coherence_report(const Tileset& ts);

}  // namespace axtile
