// Unconditional acceptance suite: runs on the shipped assets and built-in
// toys. Prints one PASS or FAIL line per criterion.

#include <sys/resource.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "axtile/algebra.hpp"
#include "axtile/analysis.hpp"
#include "axtile/cli.hpp"
#include "harness.hpp"
#include "support.hpp"

using namespace axtile;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fail_if(bool bad, const std::string& why) { return bad ? why : ""; }

std::string cells_str(const std::vector<Cell>& cells) {
  std::string s;
  for (const Cell& c : cells) s += "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
  return s;
}

std::string criterion_cover() {
  const auto start = Clock::now();
  const Tileset ts = test::chair();
  if (!validate_rule(ts, ts.rules[0]).valid()) return "chair rule does not cover";
  const std::vector<Cell> fourth{{1, 1}, {2, 1}, {1, 2}};
  SubstitutionRule missing = ts.rules[0];
  missing.children.erase(missing.children.begin() + 3);
  const CoverReport holes = validate_rule(ts, missing);
  if (holes.hole_cells != fourth || !holes.overlap_cells.empty())
    return "removal gave holes " + cells_str(holes.hole_cells) + " overlaps " + cells_str(holes.overlap_cells);
  SubstitutionRule dup = ts.rules[0];
  dup.children.push_back(dup.children[3]);
  const CoverReport over = validate_rule(ts, dup);
  if (over.overlap_cells != fourth || !over.hole_cells.empty())
    return "duplicate gave overlaps " + cells_str(over.overlap_cells) + " holes " + cells_str(over.hole_cells);
  return fail_if(seconds_since(start) >= 1.0, "took over 1 s");
}

std::string criterion_engine() {
  const auto start = Clock::now();
  const Tileset ts = test::chair();
  const Polyomino l = ts.tiles[0].shape;
  Coord f = 1;
  Patch p = expand_tile(ts, "L", 0);
  for (unsigned d = 1; d <= 6; ++d) {
    p = expand_patch(ts, p);
    f *= 2;
    const std::set<Cell> target = test::cell_set(inflate(l, f));
    std::set<Cell> got;
    std::uint64_t area = 0;
    for (const PlacedTile& pt : p.placements) {
      const Polyomino s = place(l, pt.placement);
      area += s.area();
      got.insert(s.cells().begin(), s.cells().end());
    }
    if (area != l.area() * static_cast<std::uint64_t>(f * f) || got != target)
      return "depth " + std::to_string(d) + " is not an exact cover of the inflated L";
  }
  if (p.placements.size() != 4096) return "depth 6 has " + std::to_string(p.placements.size()) + " placements";
  return fail_if(seconds_since(start) >= 1.0, "took over 1 s");
}

std::string criterion_scale() {
  // S is a unit square, D a horizontal domino; both supertiles are exactly
  // covered, and the placement count grows by about 4 per level.
  Tileset ts;
  ts.name = "strip";
  ts.scale = 2;
  ts.tiles = {{"S", test::square(), {}, {}}, {"D", test::hdomino(), {}, {}}};
  ts.rules = {{"S", {test::child("D", 0, 0), test::child("D", 0, 1)}},
              {"D", {test::child("D", 0, 0), test::child("D", 2, 0), test::child("S", 0, 1), test::child("S", 1, 1),
                     test::child("D", 2, 1)}}};
  if (!validate_tileset(ts).passed()) return "synthetic tileset is invalid";
  const unsigned depth = 10;
  const auto start = Clock::now();
  CoverAccumulator acc;
  const std::uint64_t n =
      visit_expansion(ts, "D", depth, [&](const PlacedTile& pt) { acc.add(ts.tiles[pt.tile].shape, pt.placement); });
  const CoverReport r = acc.finish();
  const double secs = seconds_since(start);
  rusage ru{};
  getrusage(RUSAGE_SELF, &ru);
  const double peak_mb = static_cast<double>(ru.ru_maxrss) / 1024.0;
  std::printf("     scale: %llu placements, %.2f s, peak RSS %.0f MB\n", static_cast<unsigned long long>(n), secs, peak_mb);
  if (n < 1000000) return "only " + std::to_string(n) + " placements";
  const Coord side = Coord{1} << depth;
  const auto b = acc.bounds();
  if (!r.valid() || acc.covered_cells() != static_cast<std::uint64_t>(2 * side * side) || !b ||
      *b != Box{{0, 0}, {2 * side - 1, side - 1}})
    return "expansion is not an exact cover of the inflated domino";
  if (secs > 10.0) return "took over 10 s";
  return fail_if(peak_mb > 1024.0, "peak memory over 1 GB");
}

std::string criterion_geometry() {
  const auto all = D4::all();
  for (D4 a : all) {
    if (compose(a, D4()) != a || compose(D4(), a) != a) return "identity law";
    if (compose(a, a.inverse()) != D4()) return "inverse law";
    for (D4 b : all) {
      const D4 ab = compose(a, b);
      if (std::find(all.begin(), all.end(), ab) == all.end()) return "closure";
      const auto ma = test::matrix_of(a), mb = test::matrix_of(b), mab = test::matrix_of(ab);
      for (Vec2 v : {Vec2{1, 0}, Vec2{0, 1}})
        if (mab(v) != ma(mb(v))) return "composition disagrees with the matrix product";
      for (D4 c : all)
        if (compose(compose(a, b), c) != compose(a, compose(b, c))) return "associativity";
    }
  }
  std::mt19937 rng(41);
  for (const Polyomino& p : test::corpus()) {
    const CanonicalForm c = canonical(p);
    for (D4 t : all) {
      const Placement pl{t, {static_cast<Coord>(rng() % 50) - 25, static_cast<Coord>(rng() % 50) - 25}};
      if (canonical(place(p, pl)).shape != c.shape) return "canonical form changed under a transform";
    }
    if (polyline_turn_word(outer_boundary_corners(p)).turning() != 4) return "boundary turning is not 4";
  }
  return "";
}

std::string swapped(std::string s) {
  for (char& c : s) c = c == 'L' ? 'R' : c == 'R' ? 'L' : c;
  return s;
}

std::string criterion_words() {
  std::mt19937 rng(43);
  for (unsigned n = 0; n <= 8; ++n) {
    const std::string s = fibonacci_snowflake_word(n).symbols;
    for (int trial = 0; trial < 10; ++trial) {
      std::string p = s;
      std::rotate(p.begin(), p.begin() + rng() % p.size(), p.end());
      if (rng() % 2) std::reverse(p.begin(), p.end());
      if (rng() % 2) p = swapped(p);
      if (match_snowflake({p, true}) != n) return "order " + std::to_string(n) + " not recovered";
    }
  }
  const std::vector<std::int64_t> a{3, 2, 3, 3, 2}, b{2, 2, 2}, c{};
  if (!fibonacci_factor_check(a)) return "[3,2,3,3,2] rejected";
  if (fibonacci_factor_check(b)) return "[2,2,2] accepted";
  return fail_if(!fibonacci_factor_check(c), "[] rejected");
}

std::string criterion_matrix() {
  std::size_t shipped = 0;
  for (const auto& entry : fs::directory_iterator(AXTILE_ASSET_DIR)) {
    if (entry.path().extension() != ".tiles") continue;
    ++shipped;
    const Tileset ts = load_tileset(entry.path().string());
    for (auto v : area_identity_residual(ts, substitution_matrix(ts)))
      if (v != 0) return entry.path().filename().string() + " breaks the area identity";
  }
  if (shipped == 0) return "no shipped tilesets";
  const SubstitutionStats s = substitution_stats(test::chair(), 4);
  return fail_if(s.matrix.m != std::vector<std::vector<std::int64_t>>{{4}}, "chair matrix is not [[4]]");
}

std::vector<std::set<Cell>> expansion(const Tileset& ts, const std::string& id, unsigned d) {
  return test::pieces(ts, expand_tile(ts, id, d));
}

std::string criterion_algebra() {
  const Tileset seed = test::pipeline_seed();
  const Tileset fused = fuse(seed, {"W", "B", Placement{D4(), {1, 0}}}, "F");
  const DedupResult dd = dedup(fused);
  const Tileset dec = test::decomposable();
  const Tileset elim = eliminate(dec, {"T", {test::child("S", 0, 0), test::child("S", 1, 0)}});
  const Tileset paired = test::paired_squares();
  const Tileset fused_pair = fuse(paired, {"A", "B", Placement{D4(), {1, 0}}}, "F");
  for (unsigned d = 0; d <= 3; ++d) {
    for (const char* id : {"H", "V", "Q"})
      if (!test::refines(expansion(seed, id, d), expansion(fused, id, d)))
        return std::string("fuse changed ") + id + " at depth " + std::to_string(d);
    for (const char* id : {"F", "H", "V", "Q"})
      if (dd.tileset.index_of(id) && expansion(fused, id, d) != expansion(dd.tileset, id, d))
        return std::string("dedup changed ") + id + " at depth " + std::to_string(d);
    for (const char* id : {"S", "U"})
      if (!test::refines(expansion(elim, id, d), expansion(dec, id, d)))
        return std::string("eliminate changed ") + id + " at depth " + std::to_string(d);
    // The fused domino covers what the A and B pair covered.
    auto pair = expansion(paired, "A", d);
    Coord f = 1;
    for (unsigned i = 0; i < d; ++i) f *= 2;
    for (const PlacedTile& pt : expand_tile(paired, "B", d).placements)
      pair.push_back(test::cell_set(place(paired.tiles[pt.tile].shape, compose(inflate(Placement{D4(), {1, 0}}, f), pt.placement))));
    std::sort(pair.begin(), pair.end());
    if (!test::refines(pair, expansion(fused_pair, "F", d))) return "fused pair differs at depth " + std::to_string(d);
  }
  return "";
}

struct Invocation {
  std::vector<std::string> args;
  std::string input;
  int expected;
};

struct Outcome {
  int code;
  std::string out, err;
  bool operator==(const Outcome&) const = default;
};

Outcome invoke(const Invocation& inv) {
  std::vector<const char*> argv{"axtile"};
  for (const auto& a : inv.args) argv.push_back(a.c_str());
  std::istringstream in(inv.input);
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), in, out, err);
  return {code, out.str(), err.str()};
}

std::string criterion_determinism() {
  const fs::path dir = fs::temp_directory_path() / "axtile_acceptance";
  fs::create_directories(dir);
  const std::string chair = test::asset("chair.tiles");
  Tileset broken = test::chair();
  broken.rules[0].children.pop_back();
  const std::string broken_path = (dir / "broken.tiles").string();
  std::ofstream(broken_path) << serialize_tileset(broken);
  const std::string seed_path = (dir / "pipeline.tiles").string();
  std::ofstream(seed_path) << serialize_tileset(test::pipeline_seed());
  const std::string dec_path = (dir / "dec.tiles").string();
  std::ofstream(dec_path) << serialize_tileset(test::decomposable());
  const std::string patch = invoke({{"expand", chair, "--tile", "L", "--depth", "5"}, "", 0}).out;

  const std::vector<Invocation> matrix{
      {{"validate", chair}, "", 0},
      {{"validate", broken_path}, "", 1},
      {{"expand", chair, "--tile", "L", "--depth", "5"}, "", 0},
      {{"expand", chair, "--tile", "L", "--depth", "5", "--stream"}, "", 0},
      {{"render", "--tileset", chair}, patch, 0},
      {{"analyze", "--tileset", chair}, patch, 0},
      {{"analyze", "--tileset", chair, "--curves", "--stitches", "--bars", "--period", "4", "--stats", "4"}, patch, 0},
      {{"transform", seed_path, "fuse", "--a", "W", "--b", "B", "--offset", "1", "0", "--id", "F"}, "", 0},
      {{"transform", seed_path, "fuse", "--a", "H", "--b", "V", "--offset", "2", "0", "--id", "F"}, "", 1},
      {{"transform", seed_path, "dedup"}, "", 0},
      {{"transform", dec_path, "eliminate", "--target", "U", "--discover", "4"}, "", 0},
      {{"expand", chair, "--tile", "L"}, "", 2},
      {{"expand", chair, "--tile", "Nope", "--depth", "2"}, "", 2},
      {{"nope"}, "", 2},
  };
  std::string why;
  for (const Invocation& inv : matrix) {
    const Outcome a = invoke(inv), b = invoke(inv);
    std::string line;
    for (const auto& s : inv.args) line += " " + s;
    if (!(a == b)) why = "output differs between runs:" + line;
    else if (a.code != inv.expected)
      why = "exit " + std::to_string(a.code) + " instead of " + std::to_string(inv.expected) + ":" + line;
    if (!why.empty()) break;
  }
  fs::remove_all(dir);
  return why;
}

}  // namespace

int main() {
  acceptance::Runner r;
  r.check(1, "exact-cover validator on the chair and its broken variants", criterion_cover);
  r.check(2, "chair depth 6 is an exact cover with 4096 placements", criterion_engine);
  r.check(3, "million-placement streaming expansion within 10 s and 1 GB", criterion_scale);
  r.check(4, "D4 group laws, canonical-form invariance and boundary closure", criterion_geometry);
  r.check(5, "snowflake round trips and Fibonacci factor verdicts", criterion_words);
  r.check(6, "area identity on shipped tilesets and chair matrix", criterion_matrix);
  r.check(7, "fuse, dedup and eliminate preserve toy occupancy", criterion_algebra);
  r.check(8, "CLI matrix is byte-reproducible with the exit-code contract", criterion_determinism);
  return r.exit_code();
}
