#include "axtile/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>

#include "axtile/error.hpp"

namespace axtile {

// ---------------------------------------------------------------- cover

namespace {
constexpr int kChunkBits = 6;
constexpr Coord kChunkSide = Coord{1} << kChunkBits;
constexpr Coord kChunkMask = kChunkSide - 1;
}  // namespace

struct CoverAccumulator::Chunk {
  std::array<std::uint8_t, kChunkSide * kChunkSide> count{};  // saturates at 2
};

CoverAccumulator::CoverAccumulator() = default;
CoverAccumulator::~CoverAccumulator() = default;
CoverAccumulator::CoverAccumulator(CoverAccumulator&&) noexcept = default;
CoverAccumulator& CoverAccumulator::operator=(CoverAccumulator&&) noexcept = default;

void CoverAccumulator::add(Cell c) {
  const Vec2 key{c.x >> kChunkBits, c.y >> kChunkBits};
  auto& chunk = chunks_[key];
  if (!chunk) chunk = std::make_unique<Chunk>();
  std::uint8_t& n = chunk->count[static_cast<std::size_t>(((c.y & kChunkMask) << kChunkBits) | (c.x & kChunkMask))];
  if (n == 0) ++covered_;
  if (n < 2) ++n;
  if (!any_) {
    box_ = {c, c};
    any_ = true;
    return;
  }
  box_.min.x = std::min(box_.min.x, c.x);
  box_.min.y = std::min(box_.min.y, c.y);
  box_.max.x = std::max(box_.max.x, c.x);
  box_.max.y = std::max(box_.max.y, c.y);
}

void CoverAccumulator::add(const Polyomino& shape, const Placement& pl) {
  for (const Cell& c : shape.cells()) add(pl.apply(c));
}

std::optional<Box> CoverAccumulator::bounds() const {
  if (!any_) return std::nullopt;
  return box_;
}

CoverReport CoverAccumulator::finish() const {
  CoverReport report;
  if (!any_) return report;
  const Coord w = box_.width();
  const Coord h = box_.height();
  // 0 uncovered, 1 covered, 2 uncovered and reachable from the border.
  std::vector<std::uint8_t> grid(static_cast<std::size_t>(w * h), 0);
  auto at = [&](Coord x, Coord y) -> std::uint8_t& {
    return grid[static_cast<std::size_t>((y - box_.min.y) * w + (x - box_.min.x))];
  };
  for (const auto& [key, chunk] : chunks_) {
    for (Coord j = 0; j < kChunkSide; ++j)
      for (Coord i = 0; i < kChunkSide; ++i) {
        const std::uint8_t n = chunk->count[static_cast<std::size_t>((j << kChunkBits) | i)];
        if (n == 0) continue;
        const Cell c{(key.x << kChunkBits) + i, (key.y << kChunkBits) + j};
        at(c.x, c.y) = 1;
        if (n > 1) report.overlap_cells.push_back(c);
      }
  }
  std::sort(report.overlap_cells.begin(), report.overlap_cells.end());

  std::vector<Cell> stack;
  auto seed = [&](Coord x, Coord y) {
    if (at(x, y) == 0) {
      at(x, y) = 2;
      stack.push_back({x, y});
    }
  };
  for (Coord x = box_.min.x; x <= box_.max.x; ++x) {
    seed(x, box_.min.y);
    seed(x, box_.max.y);
  }
  for (Coord y = box_.min.y; y <= box_.max.y; ++y) {
    seed(box_.min.x, y);
    seed(box_.max.x, y);
  }
  while (!stack.empty()) {
    const Cell c = stack.back();
    stack.pop_back();
    for (const Vec2 d : {Vec2{1, 0}, Vec2{-1, 0}, Vec2{0, 1}, Vec2{0, -1}}) {
      const Cell n = c + d;
      if (box_.contains(n)) seed(n.x, n.y);
    }
  }
  for (Coord y = box_.min.y; y <= box_.max.y; ++y)
    for (Coord x = box_.min.x; x <= box_.max.x; ++x)
      if (at(x, y) == 0) report.hole_cells.push_back({x, y});
  return report;
}

CoverReport cover_check(const Tileset& ts, const Patch& patch) {
  CoverAccumulator acc;
  for (const PlacedTile& pt : patch.placements) acc.add(ts.tiles.at(pt.tile).shape, pt.placement);
  return acc.finish();
}

// ------------------------------------------------------------- stitches

std::string CellLength::str() const {
  const Coord whole = doubled / 2;
  if (doubled % 2 == 0) return std::to_string(whole);
  return std::to_string(whole) + ".5";
}

StitchHistogram stitch_histogram(std::span<const MarkSegment> marks) {
  std::vector<MarkSegment> flat(marks.begin(), marks.end());
  for (MarkSegment& m : flat) m.layer = Layer::tile;
  StitchHistogram h;
  for (const MarkSegment& m : merge_segments(flat)) ++h[CellLength{m.doubled_length()}];
  return h;
}

// ----------------------------------------------------------------- bars

BarReport extract_bars(std::span<const MarkSegment> marks, const BarOptions& opts) {
  if (opts.numerator < 0 || opts.denominator <= 0)
    throw Error(Errc::invalid_argument, "bar coverage fraction must be a non-negative ratio");
  BarReport report;
  if (marks.empty()) return report;
  std::vector<MarkSegment> flat(marks.begin(), marks.end());
  for (MarkSegment& m : flat) m.layer = Layer::tile;
  const std::vector<MarkSegment> segs = merge_segments(flat);

  Point lo = segs.front().a;
  Point hi = segs.front().b;
  if (opts.region) {
    lo = opts.region->first;
    hi = opts.region->second;
  } else {
    for (const MarkSegment& s : segs) {
      lo.x = std::min({lo.x, s.a.x, s.b.x});
      lo.y = std::min({lo.y, s.a.y, s.b.y});
      hi.x = std::max({hi.x, s.a.x, s.b.x});
      hi.y = std::max({hi.y, s.a.y, s.b.y});
    }
  }

  for (const bool horizontal : {true, false}) {
    const Coord extent = horizontal ? hi.x - lo.x : hi.y - lo.y;
    BarFamily family;
    family.horizontal = horizontal;
    // merge_segments output is grouped by line, so equal lines are adjacent
    // once filtered by direction and sorted by line.
    const Coord line_lo = horizontal ? lo.y : lo.x, line_hi = horizontal ? hi.y : hi.x;
    const Coord run_lo = horizontal ? lo.x : lo.y, run_hi = horizontal ? hi.x : hi.y;
    std::vector<const MarkSegment*> on_dir;
    for (const MarkSegment& s : segs)
      if (s.horizontal() == horizontal && s.line() >= line_lo && s.line() <= line_hi) on_dir.push_back(&s);
    // Length of a segment inside the region.
    auto clipped = [&](const MarkSegment* s) {
      const Coord a = horizontal ? s->a.x : s->a.y, b = horizontal ? s->b.x : s->b.y;
      return std::max<Coord>(0, std::min(b, run_hi) - std::max(a, run_lo));
    };
    std::stable_sort(on_dir.begin(), on_dir.end(), [](auto* a, auto* b) { return a->line() < b->line(); });
    for (std::size_t i = 0; i < on_dir.size();) {
      std::size_t j = i;
      LineCoverage lc;
      lc.horizontal = horizontal;
      lc.line = on_dir[i]->line();
      lc.extent = extent;
      for (; j < on_dir.size() && on_dir[j]->line() == lc.line; ++j) lc.covered += clipped(on_dir[j]);
      lc.qualifies = extent > 0 && lc.covered * opts.denominator >= extent * opts.numerator;
      if (lc.qualifies) {
        family.lines.push_back(lc.line);
        for (std::size_t k = i; k < j; ++k) ++family.stitch_lengths[CellLength{on_dir[k]->doubled_length()}];
      }
      report.coverage.push_back(lc);
      i = j;
    }
    for (std::size_t i = 1; i < family.lines.size(); ++i)
      family.spacing_sequence.push_back(CellLength{family.lines[i] - family.lines[i - 1]});
    if (!family.lines.empty()) report.families.push_back(std::move(family));
  }
  return report;
}

// ----------------------------------------------------------- periodicity

namespace {

std::vector<std::uint32_t> signature_grid(const Occupancy& occ, const Box& window) {
  std::vector<std::uint32_t> sig(static_cast<std::size_t>(window.width() * window.height()));
  for (Coord y = window.min.y; y <= window.max.y; ++y)
    for (Coord x = window.min.x; x <= window.max.x; ++x) {
      const OccupancyEntry* e = occ.find({x, y});
      if (!e)
        throw Error(Errc::window_out_of_range, "window cell (" + std::to_string(x) + ", " + std::to_string(y) +
                                                   ") is not covered by the patch");
      sig[static_cast<std::size_t>((y - window.min.y) * window.width() + (x - window.min.x))] =
          e->tile * 8u + e->transform.index();
    }
  return sig;
}

}  // namespace

std::vector<Vec2> periodicity_scan(const Occupancy& occ, const Box& window, Coord max_radius) {
  if (window.width() <= 0 || window.height() <= 0) throw Error(Errc::window_out_of_range, "window is empty");
  if (max_radius < 0) throw Error(Errc::invalid_argument, "radius must be non-negative");
  const std::vector<std::uint32_t> sig = signature_grid(occ, window);
  const Coord w = window.width();
  const Coord h = window.height();
  std::vector<Vec2> periods;
  for (Coord ty = -max_radius; ty <= max_radius; ++ty)
    for (Coord tx = -max_radius; tx <= max_radius; ++tx) {
      if (tx == 0 && ty == 0) continue;
      bool period = true;
      for (Coord y = std::max<Coord>(0, -ty); period && y < std::min(h, h - ty); ++y)
        for (Coord x = std::max<Coord>(0, -tx); x < std::min(w, w - tx); ++x)
          if (sig[static_cast<std::size_t>(y * w + x)] != sig[static_cast<std::size_t>((y + ty) * w + x + tx)]) {
            period = false;
            break;
          }
      if (period) periods.push_back({tx, ty});
    }
  std::stable_sort(periods.begin(), periods.end(), [](Vec2 a, Vec2 b) {
    const Coord na = std::max(std::abs(a.x), std::abs(a.y));
    const Coord nb = std::max(std::abs(b.x), std::abs(b.y));
    if (na != nb) return na < nb;
    return a < b;
  });
  return periods;
}

std::vector<Vec2> periodicity_scan(const Tileset& ts, const Patch& patch, const Box& window, Coord max_radius) {
  return periodicity_scan(patch_occupancy(ts, patch), window, max_radius);
}

Box central_window(const Occupancy& occ) {
  if (occ.empty()) throw Error(Errc::window_out_of_range, "patch is empty");
  const Box b = occ.bounds();
  const Coord tw = b.width() / 3;
  const Coord th = b.height() / 3;
  if (tw > 0 && th > 0) {
    const Box third{{b.min.x + tw, b.min.y + th}, {b.min.x + 2 * tw - 1, b.min.y + 2 * th - 1}};
    bool full = true;
    for (Coord y = third.min.y; full && y <= third.max.y; ++y)
      for (Coord x = third.min.x; x <= third.max.x; ++x)
        if (!occ.find({x, y})) {
          full = false;
          break;
        }
    if (full) return third;
  }
  // Largest covered square ending at each cell (dynamic programming).
  const Coord w = b.width();
  const Coord h = b.height();
  std::vector<Coord> side(static_cast<std::size_t>(w * h), 0);
  Coord best = 0;
  Box best_box{};
  Coord best_dist = 0;
  for (Coord y = 0; y < h; ++y)
    for (Coord x = 0; x < w; ++x) {
      if (!occ.find({b.min.x + x, b.min.y + y})) continue;
      Coord s = 1;
      if (x > 0 && y > 0) {
        const auto idx = [&](Coord xx, Coord yy) { return static_cast<std::size_t>(yy * w + xx); };
        s = 1 + std::min({side[idx(x - 1, y)], side[idx(x, y - 1)], side[idx(x - 1, y - 1)]});
      }
      side[static_cast<std::size_t>(y * w + x)] = s;
      // Doubled-frame distance from the square's centre to the box centre.
      const Coord cx = 2 * x - s + 1;
      const Coord cy = 2 * y - s + 1;
      const Coord dist = std::abs(cx - (w - 1)) + std::abs(cy - (h - 1));
      if (s > best || (s == best && dist < best_dist)) {
        best = s;
        best_dist = dist;
        best_box = {{b.min.x + x - s + 1, b.min.y + y - s + 1}, {b.min.x + x, b.min.y + y}};
      }
    }
  return best_box;
}

// ----------------------------------------------------------------- stats

SubstitutionMatrix substitution_matrix(const Tileset& ts) {
  SubstitutionMatrix sm;
  const std::size_t n = ts.tiles.size();
  sm.m.assign(n, std::vector<std::int64_t>(n, 0));
  for (const TilePrototype& t : ts.tiles) sm.ids.push_back(t.id);
  for (const SubstitutionRule& r : ts.rules) {
    const std::size_t j = *ts.index_of(r.parent);
    for (const Child& c : r.children) ++sm.m[*ts.index_of(c.tile)][j];
  }
  return sm;
}

std::vector<std::int64_t> area_identity_residual(const Tileset& ts, const SubstitutionMatrix& sm) {
  const std::size_t n = ts.tiles.size();
  std::vector<std::int64_t> residual(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    if (!ts.rule_for(ts.tiles[j].id)) continue;
    std::int64_t sum = 0;
    for (std::size_t i = 0; i < n; ++i) sum += static_cast<std::int64_t>(ts.tiles[i].shape.area()) * sm.m[i][j];
    residual[j] = sum - ts.scale * ts.scale * static_cast<std::int64_t>(ts.tiles[j].shape.area());
  }
  return residual;
}

SubstitutionStats substitution_stats(const Tileset& ts, unsigned depth) {
  if (depth > 8) throw Error(Errc::invalid_argument, "stats depth must be at most 8");
  for (const TilePrototype& t : ts.tiles)
    if (!ts.rule_for(t.id)) throw Error(Errc::no_rule, "tile \"" + t.id + "\" has no substitution rule");
  SubstitutionStats st;
  st.matrix = substitution_matrix(ts);
  st.area_residual = area_identity_residual(ts, st.matrix);
  const std::size_t n = ts.tiles.size();
  if (n == 0) return st;

  std::vector<double> v(n, 1.0 / static_cast<double>(n));
  for (int iter = 0; iter < 200; ++iter) {
    std::vector<double> next(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) next[i] += static_cast<double>(st.matrix.m[i][j]) * v[j];
    double sum = 0;
    for (double x : next) sum += x;
    if (sum == 0) break;
    st.perron_value = sum;  // v sums to 1
    for (double& x : next) x /= sum;
    v = std::move(next);
  }
  st.perron_vector = v;

  st.empirical_counts.assign(n, 0);
  for (const TilePrototype& t : ts.tiles)
    visit_expansion(ts, t.id, depth, [&](const PlacedTile& pt) { ++st.empirical_counts[pt.tile]; });
  std::uint64_t total = 0;
  for (std::uint64_t c : st.empirical_counts) total += c;
  st.empirical_frequencies.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    st.empirical_frequencies[i] = total ? static_cast<double>(st.empirical_counts[i]) / static_cast<double>(total) : 0;
    st.l1_distance += std::abs(st.empirical_frequencies[i] - st.perron_vector[i]);
  }
  return st;
}

}  // namespace axtile
