#pragma once

// Tileset rewrites that shrink a self-ruling tileset: evidence that two
// tiles always occur together, fusing such a pair into one tile, merging
// congruent tiles, and eliminating a tile that other tiles can assemble.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "axtile/geometry.hpp"
#include "axtile/tileset.hpp"

namespace axtile {

// Tile b placed at `relative` in tile a's frame.
struct PairRelation {
  std::string tile_a;
  std::string tile_b;
  Placement relative;
};

struct SeedPairing {
  std::string seed;
  std::size_t a_occurrences = 0;
  std::size_t b_occurrences = 0;
  std::size_t matched = 0;
  std::vector<std::uint32_t> unmatched_a;  // placement indices in the seed's expansion
  std::vector<std::uint32_t> unmatched_b;

  bool holds() const { return unmatched_a.empty() && unmatched_b.empty(); }
};

struct PairingEvidence {
  unsigned depth = 0;
  std::vector<SeedPairing> seeds;  // one per ruled tile, tileset order

  bool holds() const;
  std::size_t unmatched() const;
};

// Expands every ruled tile to `depth` and greedily pairs each occurrence of
// a with an unpaired b at the related placement (up to the symmetries of
// both tiles; ties go to the least b offset). Evidence at a finite depth,
// never a proof. Throws Error(unresolved_id) for unknown ids.
PairingEvidence find_pairings(const Tileset& ts, const PairRelation& rel, unsigned depth);

// Replaces every (a, b) pair of rule children by one child of a new tile
// whose shape and marks are the union of the pair, rebuilds the new tile's
// rule from the two original rules and drops a and b once unreferenced.
// Throws Error(unmatched_occurrence) when some a or b child cannot be
// paired at depth 1 or 2, Error(disconnected_shape) when the union is not a
// polyomino.
Tileset fuse(const Tileset& ts, const PairRelation& rel, const std::string& new_id);

struct DedupResult {
  Tileset tileset;
  std::map<std::string, std::string> mapping;  // removed id -> kept id
};

// Merges tiles congruent in shape, tile marks and (recursively) rule.
DedupResult dedup(const Tileset& ts);

// Parts in the target's frame.
struct Decomposition {
  std::string target;
  std::vector<Child> parts;
  friend bool operator==(const Decomposition&, const Decomposition&) = default;
};

struct DecompositionCheck {
  CoverReport cover;  // against the target shape itself
  std::vector<MarkSegment> missing_marks;
  std::vector<MarkSegment> extra_marks;
  bool uses_target = false;

  bool valid() const { return cover.valid() && missing_marks.empty() && extra_marks.empty() && !uses_target; }
};

DecompositionCheck check_decomposition(const Tileset& ts, const Decomposition& d);

// Substitutes the parts for every child occurrence of the target, then
// removes the target and its rule. Throws Error(invalid_decomposition).
Tileset eliminate(const Tileset& ts, const Decomposition& d);

// Every exact cover of the target by at most max_parts placed copies of the
// other tiles that also reproduces the target's tile marks. Covers that
// differ only by a symmetry of a part are reported once. Sorted.
// Throws Error(invalid_argument) when max_parts > 4.
std::vector<Decomposition> discover_decompositions(const Tileset& ts, std::string_view target_id, unsigned max_parts);

// Placements s with s(shape) == shape and s(tile marks) == tile marks.
std::vector<Placement> tile_symmetries(const TilePrototype& tile);

}  // namespace axtile
