#pragma once

// Checkable observations on tilesets and patches. Every verdict here is
// integer-exact except the Perron estimate and the distances reported next
// to it.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "axtile/geometry.hpp"
#include "axtile/marks.hpp"
#include "axtile/substitution.hpp"
#include "axtile/tileset.hpp"

namespace axtile {

// ---------------------------------------------------------------- cover

// Single-pass overlap/hole detector. Memory is proportional to the covered
// area, not to the number of placements, so it can sit behind
// visit_expansion() for very large patches.
class CoverAccumulator {
 public:
  CoverAccumulator();
  ~CoverAccumulator();
  CoverAccumulator(CoverAccumulator&&) noexcept;
  CoverAccumulator& operator=(CoverAccumulator&&) noexcept;

  void add(Cell c);
  void add(const Polyomino& shape, const Placement& pl);

  std::uint64_t covered_cells() const { return covered_; }
  std::optional<Box> bounds() const;

  // Overlaps are multiply covered cells. Holes are uncovered cells of the
  // bounding box whose 4-connected uncovered component does not reach the
  // box border; the ragged outline of a patch is not a defect.
  CoverReport finish() const;

 private:
  struct Chunk;
  std::unordered_map<Vec2, std::unique_ptr<Chunk>, Vec2Hash> chunks_;
  std::uint64_t covered_ = 0;
  Box box_{};
  bool any_ = false;
};

CoverReport cover_check(const Tileset& ts, const Patch& patch);

// --------------------------------------------------------------- curves

struct ClosedCurve {
  TurnWord word;               // corners only, counterclockwise, from the least corner
  std::vector<Point> corners;  // doubled frame, first corner repeated at the end
};

struct CurveReport {
  std::vector<ClosedCurve> closed;
  std::size_t open_threads = 0;      // components that are simple open paths
  std::size_t junction_vertices = 0;  // vertices of degree > 2
  std::size_t junction_components = 0;
};

// Closed curves formed by the segments (layers are ignored). Segments are
// merged, split where they touch or cross, and every connected component in
// which each vertex has degree 2 becomes one closed curve.
CurveReport trace_closed_curves(std::span<const MarkSegment> marks);

// Marks of every placement. Tile-layer marks land in the patch frame; super
// marks land in the frame of the next level (the patch inflated by k).
std::vector<MarkSegment> patch_marks(const Tileset& ts, const Patch& patch, Layer layer = Layer::tile);

// ------------------------------------------------------------ snowflakes

inline constexpr unsigned kMaxSnowflakeOrder = 12;

// Boundary turn word of the order-n Fibonacci snowflake, counterclockwise.
// Order 0 is the unit square. Throws Error(invalid_argument) above order 12.
TurnWord fibonacci_snowflake_word(unsigned order);

// Perimeter (word length) of the order-n snowflake: 4 * F(3n + 1).
std::uint64_t snowflake_length(unsigned order);

// Smallest order whose word equals w up to rotation, reversal and L/R swap.
std::optional<unsigned> match_snowflake(const TurnWord& w);

// True when some cyclic rotation of `needle` equals `hay` (same length).
bool is_cyclic_rotation(std::string_view hay, std::string_view needle);

// ------------------------------------------------------------- stitches

// A length in cell units, held exactly as a doubled-frame length.
struct CellLength {
  Coord doubled = 0;
  std::string str() const;  // "2", "2.5"
  friend bool operator==(const CellLength&, const CellLength&) = default;
  friend auto operator<=>(const CellLength&, const CellLength&) = default;
};

using StitchHistogram = std::map<CellLength, std::size_t>;

// Histogram of maximal merged segment lengths in cell units.
StitchHistogram stitch_histogram(std::span<const MarkSegment> marks);

// ----------------------------------------------------------------- bars

struct LineCoverage {
  bool horizontal = true;
  Coord line = 0;     // doubled frame
  Coord covered = 0;  // doubled length of merged segments on the line
  Coord extent = 0;   // doubled extent of the analysed region along the line
  bool qualifies = false;
};

struct BarFamily {
  bool horizontal = true;
  std::vector<Coord> lines;  // doubled frame, strictly increasing
  std::vector<CellLength> spacing_sequence;
  StitchHistogram stitch_lengths;
};

struct BarReport {
  std::vector<BarFamily> families;    // horizontal first, then vertical
  std::vector<LineCoverage> coverage;  // every line carrying a segment
};

struct BarOptions {
  // A line is a bar when covered / extent >= numerator / denominator.
  std::int64_t numerator = 4;
  std::int64_t denominator = 5;
  // Region whose extent bars are measured against; defaults to the marks' bounds.
  std::optional<std::pair<Point, Point>> region;
};

BarReport extract_bars(std::span<const MarkSegment> marks, const BarOptions& opts = {});

// ------------------------------------------------------- fibonacci words

// Prefix of the Fibonacci word (a -> ab, b -> a) of at least n letters.
std::string fibonacci_word_prefix(std::size_t n);

// True iff the sequence, under one of the two bijections of its (at most
// two) distinct values onto {a, b}, is a factor of the Fibonacci word.
// Throws Error(invalid_argument) for sequences longer than 10000.
bool fibonacci_factor_check(std::span<const std::int64_t> seq);

// ----------------------------------------------------------- periodicity

// Vectors t != 0 with |t|_inf <= max_radius such that the (tile, transform)
// signature agrees at c and c + t for every c with both in the window.
// Ordered by |t|_inf, then row-major. Throws Error(window_out_of_range)
// unless every window cell is covered.
std::vector<Vec2> periodicity_scan(const Tileset& ts, const Patch& patch, const Box& window, Coord max_radius);
std::vector<Vec2> periodicity_scan(const Occupancy& occ, const Box& window, Coord max_radius);

// The central third of the bounding box when it is fully covered, otherwise
// the largest fully covered square nearest the centre.
Box central_window(const Occupancy& occ);

// ----------------------------------------------------------------- stats

struct SubstitutionMatrix {
  std::vector<std::string> ids;                // tileset order
  std::vector<std::vector<std::int64_t>> m;    // m[i][j]: copies of tile i in the rule of tile j
};

SubstitutionMatrix substitution_matrix(const Tileset& ts);

// a^T M - k^2 a^T for the area vector a; all zeros for exact-cover rules.
std::vector<std::int64_t> area_identity_residual(const Tileset& ts, const SubstitutionMatrix& m);

struct SubstitutionStats {
  SubstitutionMatrix matrix;
  double perron_value = 0;
  std::vector<double> perron_vector;  // normalised to sum 1
  std::vector<double> empirical_frequencies;
  std::vector<std::uint64_t> empirical_counts;
  double l1_distance = 0;
  std::vector<std::int64_t> area_residual;
};

// Requires every tile to be ruled and depth <= 8. Empirical counts come from
// streaming expansions of every tile to `depth`, summed.
SubstitutionStats substitution_stats(const Tileset& ts, unsigned depth);

}  // namespace axtile
