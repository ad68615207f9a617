#pragma once

// Iterated substitution. A patch at level d lives on the k^d-inflated
// lattice of its seed: expansion never rescales, so every coordinate stays
// an integer.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "axtile/error.hpp"
#include "axtile/geometry.hpp"
#include "axtile/tileset.hpp"

namespace axtile {

struct PlacedTile {
  std::uint32_t tile = 0;  // index into Tileset::tiles
  Placement placement;
  friend bool operator==(const PlacedTile&, const PlacedTile&) = default;
};

struct Patch {
  std::string tileset;
  std::uint32_t level = 0;
  std::vector<PlacedTile> placements;
  // Child-index path from the seed, one per placement; only kept on request.
  std::optional<std::vector<std::vector<std::uint32_t>>> provenance;
};

struct ExpandOptions {
  bool provenance = false;
};

// Rules indexed by tile index, for the hot expansion loops.
class RuleTable {
 public:
  explicit RuleTable(const Tileset& ts);

  const std::vector<PlacedTile>* children(std::uint32_t tile) const {
    return rules_[tile] ? &*rules_[tile] : nullptr;
  }
  Coord scale() const { return scale_; }

 private:
  std::vector<std::optional<std::vector<PlacedTile>>> rules_;
  Coord scale_;
};

// The single-placement seed patch of a tile at level 0.
Patch seed_patch(const Tileset& ts, std::string_view tile_id);

// Replaces every placement by its rule's children composed with the
// inflated placement. Throws Error(no_rule) naming the first unruled tile.
Patch expand_patch(const Tileset& ts, const Patch& p, const ExpandOptions& opts = {});

// depth-fold expand_patch of the seed; placements in depth-first child order.
Patch expand_tile(const Tileset& ts, std::string_view tile_id, unsigned depth, const ExpandOptions& opts = {});

using PlacementVisitor = std::function<void(const PlacedTile&)>;

struct VisitOptions {
  // With threads > 1 the visitor is called concurrently from several threads
  // and visit order is unspecified; it must be thread-safe. With one thread
  // the order equals expand_tile's.
  unsigned threads = 1;
};

// Streams the placements of expand_tile() without materialising them.
// Returns the number of placements visited.
std::uint64_t visit_expansion(const Tileset& ts, std::string_view tile_id, unsigned depth,
                              const PlacementVisitor& visit, const VisitOptions& opts = {});

// Number of placements of each tile in expand_tile(ts, tile_id, depth),
// computed by counting rather than expanding.
std::vector<std::uint64_t> expansion_counts(const Tileset& ts, std::string_view tile_id, unsigned depth);

struct OccupancyEntry {
  std::uint32_t tile = 0;
  D4 transform;
  std::uint32_t index = 0;  // placement index within the patch
  friend bool operator==(const OccupancyEntry&, const OccupancyEntry&) = default;
};

class Occupancy {
 public:
  const OccupancyEntry* find(Cell c) const {
    auto it = cells_.find(c);
    return it == cells_.end() ? nullptr : &it->second;
  }
  std::size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }
  Box bounds() const { return bounds_; }
  // Entries in row-major cell order.
  std::vector<std::pair<Cell, OccupancyEntry>> sorted() const;

 private:
  friend Occupancy patch_occupancy(const Tileset&, const Patch&);
  std::unordered_map<Cell, OccupancyEntry, Vec2Hash> cells_;
  Box bounds_{};
};

class OverlapError : public Error {
 public:
  OverlapError(Cell cell, const std::string& what) : Error(Errc::overlap, what), cell_(cell) {}
  Cell cell() const noexcept { return cell_; }

 private:
  Cell cell_;
};

// Throws OverlapError carrying the least doubly covered cell in row-major order.
Occupancy patch_occupancy(const Tileset& ts, const Patch& p);

// Patch files: {"tileset": name, "level": n, "placements": [{"tile", "t", "o"}, ...]}
// written with one placement per line, so that a reader can stream them.
std::string serialize_patch(const Tileset& ts, const Patch& p);
Patch parse_patch(const Tileset& ts, std::string_view text);

class PatchWriter {
 public:
  PatchWriter(std::ostream& out, const Tileset& ts, std::uint32_t level);
  void write(const PlacedTile& pt);
  void finish();

 private:
  std::ostream& out_;
  const Tileset& ts_;
  bool first_ = true;
  bool finished_ = false;
};

struct RawPlacement {
  std::string tile;
  Placement placement;
};

// Reads patch documents incrementally when they use the line-framed layout
// written by PatchWriter; any other valid JSON patch is parsed whole.
class PatchReader {
 public:
  explicit PatchReader(std::istream& in);

  const std::string& tileset() const { return tileset_; }
  std::uint32_t level() const { return level_; }
  bool next(RawPlacement& out);

 private:
  std::istream& in_;
  std::string tileset_;
  std::uint32_t level_ = 0;
  bool streaming_ = false;
  bool done_ = false;
  std::vector<RawPlacement> buffered_;
  std::size_t cursor_ = 0;
  std::size_t line_no_ = 1;
};

// Resolves raw placements against a tileset. Throws Error(unresolved_id).
class TileResolver {
 public:
  explicit TileResolver(const Tileset& ts);
  PlacedTile operator()(const RawPlacement& raw) const;

 private:
  std::unordered_map<std::string, std::uint32_t> index_;
};

}  // namespace axtile
