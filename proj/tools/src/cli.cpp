#include "axtile/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "axtile/algebra.hpp"
#include "axtile/analysis.hpp"
#include "axtile/error.hpp"
#include "axtile/render.hpp"
#include "axtile/substitution.hpp"
#include "axtile/tileset.hpp"

#ifndef AXTILE_ASSET_DIR
#define AXTILE_ASSET_DIR ""
#endif

namespace axtile::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

// Failures of the input itself are usage errors; everything else is a
// failed check.
int exit_code(Errc c) {
  switch (c) {
    case Errc::no_rule:
    case Errc::overlap:
    case Errc::unmatched_occurrence:
    case Errc::invalid_decomposition:
      return kFailed;
    default:
      return kUsage;
  }
}

std::string cell_str(Cell c) { return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")"; }

std::string cells_str(const std::vector<Cell>& cells) {
  std::string s;
  for (const Cell& c : cells) s += (s.empty() ? "" : " ") + cell_str(c);
  return s;
}

void emit(const std::string& data, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << data;
    out.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::io, "cannot write \"" + path + "\"");
  f << data;
  if (!f) throw Error(Errc::io, "error writing \"" + path + "\"");
}

Tileset resolve_tileset(const std::string& name, const std::string& patch_path, const std::string& override_path) {
  if (!override_path.empty()) return load_tileset(override_path);
  std::vector<fs::path> candidates{fs::path(name)};
  if (!patch_path.empty() && patch_path != "-") candidates.push_back(fs::path(patch_path).parent_path() / (name + ".tiles"));
  candidates.push_back(fs::path(name + ".tiles"));
  if (*AXTILE_ASSET_DIR) candidates.push_back(fs::path(AXTILE_ASSET_DIR) / (name + ".tiles"));
  std::error_code ec;
  for (const fs::path& p : candidates)
    if (!p.empty() && fs::is_regular_file(p, ec)) return load_tileset(p.string());
  throw Error(Errc::io, "cannot locate tileset \"" + name + "\"; pass --tileset");
}

struct PatchInput {
  std::ifstream file;
  std::istream* stream = nullptr;
};

void open_patch(PatchInput& pi, const std::string& path, std::istream& in) {
  if (path.empty() || path == "-") {
    pi.stream = &in;
    return;
  }
  pi.file.open(path, std::ios::binary);
  if (!pi.file) throw Error(Errc::io, "cannot read \"" + path + "\"");
  pi.stream = &pi.file;
}

Patch read_all(PatchReader& reader, const Tileset& ts) {
  const TileResolver resolve(ts);
  Patch p;
  p.tileset = reader.tileset();
  p.level = reader.level();
  RawPlacement raw;
  while (reader.next(raw)) p.placements.push_back(resolve(raw));
  return p;
}

json cells_json(const std::vector<Cell>& cells) {
  json a = json::array();
  for (const Cell& c : cells) a.push_back({c.x, c.y});
  return a;
}

json length_json(const CellLength& l) {
  if (l.doubled % 2 == 0) return l.doubled / 2;
  return static_cast<double>(l.doubled) / 2.0;
}

json histogram_json(const StitchHistogram& h) {
  json o = json::object();
  for (const auto& [len, n] : h) o[len.str()] = n;
  return o;
}

json cover_json(const CoverReport& r, std::uint64_t placements, std::uint64_t covered) {
  return {{"placements", placements}, {"covered_cells", covered}, {"overlaps", cells_json(r.overlap_cells)},
          {"holes", cells_json(r.hole_cells)}, {"valid", r.valid()}};
}

json curves_json(const CurveReport& r, Layer layer) {
  json closed = json::array();
  std::size_t unmatched = 0;
  for (const ClosedCurve& c : r.closed) {
    const auto order = match_snowflake(c.word);
    if (!order) ++unmatched;
    closed.push_back({{"word", c.word.symbols},
                      {"length", c.word.symbols.size()},
                      {"turning", c.word.turning()},
                      {"start", {c.corners.front().x, c.corners.front().y}},
                      {"snowflake_order", order ? json(*order) : json(nullptr)}});
  }
  return {{"layer", std::string(to_string(layer))},
          {"closed_count", r.closed.size()},
          {"unmatched", unmatched},
          {"open_threads", r.open_threads},
          {"junction_vertices", r.junction_vertices},
          {"junction_components", r.junction_components},
          {"closed", std::move(closed)}};
}

json bars_json(const BarReport& r, Layer layer, const BarOptions& opts) {
  json families = json::array();
  for (const BarFamily& f : r.families) {
    json spacings = json::array();
    std::vector<std::int64_t> seq;
    for (const CellLength& s : f.spacing_sequence) {
      spacings.push_back(length_json(s));
      seq.push_back(s.doubled);
    }
    json factor = seq.size() <= 10000 ? json(fibonacci_factor_check(seq)) : json(nullptr);
    families.push_back({{"direction", f.horizontal ? "horizontal" : "vertical"},
                        {"lines", f.lines},
                        {"spacings", std::move(spacings)},
                        {"fibonacci_factor", std::move(factor)},
                        {"stitch_lengths", histogram_json(f.stitch_lengths)}});
  }
  json coverage = json::array();
  for (const LineCoverage& c : r.coverage)
    coverage.push_back({{"direction", c.horizontal ? "horizontal" : "vertical"},
                        {"line", c.line},
                        {"covered", c.covered},
                        {"extent", c.extent},
                        {"bar", c.qualifies}});
  return {{"layer", std::string(to_string(layer))},
          {"threshold", std::to_string(opts.numerator) + "/" + std::to_string(opts.denominator)},
          {"families", std::move(families)},
          {"coverage", std::move(coverage)}};
}

json stats_json(const SubstitutionStats& s, unsigned depth) {
  bool area_ok = true;
  for (auto v : s.area_residual) area_ok = area_ok && v == 0;
  return {{"depth", depth},
          {"ids", s.matrix.ids},
          {"matrix", s.matrix.m},
          {"area_residual", s.area_residual},
          {"area_identity", area_ok},
          {"perron_value", s.perron_value},
          {"perron_vector", s.perron_vector},
          {"empirical_counts", s.empirical_counts},
          {"empirical_frequencies", s.empirical_frequencies},
          {"l1_distance", s.l1_distance}};
}

Layer parse_layer(const std::string& s) { return s == "super" ? Layer::super : Layer::tile; }

std::pair<std::int64_t, std::int64_t> parse_ratio(const std::string& s) {
  std::int64_t num = 0, den = 1;
  char slash = 0;
  std::istringstream in(s);
  if (s.find('/') != std::string::npos) {
    if (!(in >> num >> slash >> den) || slash != '/' || den <= 0 || num < 0 || !in.eof())
      throw Error(Errc::invalid_argument, "bad threshold \"" + s + "\"");
    return {num, den};
  }
  // Decimal fraction such as 0.8, kept exact.
  const auto dot = s.find('.');
  const std::string digits = dot == std::string::npos ? s : s.substr(0, dot) + s.substr(dot + 1);
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos || digits.size() > 12)
    throw Error(Errc::invalid_argument, "bad threshold \"" + s + "\"");
  num = std::stoll(digits);
  for (std::size_t i = dot == std::string::npos ? s.size() : dot + 1; i < s.size(); ++i) den *= 10;
  return {num, den};
}

Placement parse_part_placement(const std::string& t, Coord x, Coord y) {
  const auto d = D4::parse(t);
  if (!d) throw Error(Errc::invalid_argument, "unknown transform \"" + t + "\"");
  return {*d, {x, y}};
}

// ID:T:X:Y
Child parse_part(const std::string& s) {
  std::vector<std::string> f;
  std::string cur;
  for (char c : s) {
    if (c == ':') {
      f.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  f.push_back(cur);
  if (f.size() != 4) throw Error(Errc::invalid_argument, "part \"" + s + "\" is not ID:T:X:Y");
  try {
    return {f[0], parse_part_placement(f[1], std::stoll(f[2]), std::stoll(f[3]))};
  } catch (const std::logic_error&) {
    throw Error(Errc::invalid_argument, "part \"" + s + "\" has a bad coordinate");
  }
}

// ------------------------------------------------------------- commands

int cmd_validate(const std::string& path, std::ostream& out) {
  const Tileset ts = load_tileset(path);
  const TilesetReport report = validate_tileset(ts);
  const CoherenceReport coherence = mark_coherence_report(ts);
  std::ostringstream s;
  for (const RuleReport& r : report.rules) {
    s << "rule " << r.parent << ": ";
    if (r.valid()) {
      s << "ok\n";
      continue;
    }
    s << "FAIL";
    if (!r.cover.hole_cells.empty()) s << "; holes " << cells_str(r.cover.hole_cells);
    if (!r.cover.overlap_cells.empty()) s << "; overlaps " << cells_str(r.cover.overlap_cells);
    if (!r.cover.stray_cells.empty()) s << "; outside " << cells_str(r.cover.stray_cells);
    if (!r.area_identity()) s << "; child area " << r.child_area << " != " << r.expected_area;
    s << '\n';
  }
  bool marks_ok = true;
  for (const TileCoherence& t : coherence.tiles) {
    s << "marks " << t.id << ": ";
    if (t.marks_match() && t.continuous()) {
      s << "ok\n";
      continue;
    }
    marks_ok = false;
    s << "FAIL";
    if (!t.missing.empty()) s << "; " << t.missing.size() << " derived super segment(s) not stored";
    if (!t.extra.empty()) s << "; " << t.extra.size() << " stored super segment(s) not derived";
    for (const EdgeContinuity& e : t.edges)
      if (!e.continuous()) s << "; children " << e.child_a << "/" << e.child_b << " break at " << cells_str(e.dangling);
    s << '\n';
  }
  const bool ok = report.passed() && marks_ok;
  s << (ok ? "valid\n" : "invalid\n");
  out << s.str();
  return ok ? kOk : kFailed;
}

int cmd_expand(const std::string& path, const std::string& tile, unsigned depth, const std::string& output,
               bool stream, std::ostream& out) {
  const Tileset ts = load_tileset(path);
  if (!ts.find_tile(tile)) throw Error(Errc::unresolved_id, "unknown tile id \"" + tile + "\"");
  if (!stream) {
    emit(serialize_patch(ts, expand_tile(ts, tile, depth)), output, out);
    return kOk;
  }
  // Fail before writing anything when some tile on the way is unruled.
  expansion_counts(ts, tile, depth);
  std::ofstream file;
  std::ostream* dst = &out;
  if (!output.empty() && output != "-") {
    file.open(output, std::ios::binary);
    if (!file) throw Error(Errc::io, "cannot write \"" + output + "\"");
    dst = &file;
  }
  PatchWriter writer(*dst, ts, depth);
  visit_expansion(ts, tile, depth, [&](const PlacedTile& pt) { writer.write(pt); });
  writer.finish();
  dst->flush();
  return kOk;
}

struct RenderArgs {
  std::string patch;
  std::string output;
  std::string tileset;
  int unit = 10;
  std::vector<std::string> layers;
  std::vector<std::string> palette;
};

int cmd_render(const RenderArgs& a, std::istream& in, std::ostream& out) {
  PatchInput pi;
  open_patch(pi, a.patch, in);
  PatchReader reader(*pi.stream);
  const Tileset ts = resolve_tileset(reader.tileset(), a.patch, a.tileset);
  const Patch patch = read_all(reader, ts);
  RenderOptions opts;
  opts.unit = a.unit;
  if (!a.layers.empty()) opts.layers = {a.layers.begin(), a.layers.end()};
  for (const std::string& p : a.palette) {
    const auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0) throw Error(Errc::invalid_argument, "palette entry \"" + p + "\" is not ID=COLOR");
    opts.palette[p.substr(0, eq)] = p.substr(eq + 1);
  }
  emit(render_svg(ts, patch, opts), a.output, out);
  return kOk;
}

struct AnalyzeArgs {
  std::string patch;
  std::string tileset;
  std::string output;
  bool cover = false;
  bool curves = false;
  bool stitches = false;
  bool bars = false;
  std::string marks = "tile";
  std::string bar_threshold = "4/5";
  std::optional<Coord> period;
  std::optional<unsigned> stats;
};

int cmd_analyze(AnalyzeArgs a, std::istream& in, std::ostream& out) {
  if (!a.cover && !a.curves && !a.stitches && !a.bars && !a.period && !a.stats) a.cover = true;
  PatchInput pi;
  open_patch(pi, a.patch, in);
  PatchReader reader(*pi.stream);
  const Tileset ts = resolve_tileset(reader.tileset(), a.patch, a.tileset);
  const Layer layer = parse_layer(a.marks);
  BarOptions bar_opts;
  std::tie(bar_opts.numerator, bar_opts.denominator) = parse_ratio(a.bar_threshold);

  json report = json::object();
  bool ok = true;
  const bool need_patch = a.curves || a.stitches || a.bars || a.period;
  Patch patch;
  if (!need_patch) {
    // Cover alone streams: memory follows the covered area only.
    const TileResolver resolve(ts);
    CoverAccumulator acc;
    std::uint64_t n = 0;
    RawPlacement raw;
    while (reader.next(raw)) {
      const PlacedTile pt = resolve(raw);
      acc.add(ts.tiles[pt.tile].shape, pt.placement);
      ++n;
    }
    if (a.cover) {
      const CoverReport r = acc.finish();
      ok = ok && r.valid();
      report["cover"] = cover_json(r, n, acc.covered_cells());
    }
  } else {
    patch = read_all(reader, ts);
    if (a.cover) {
      const CoverReport r = cover_check(ts, patch);
      ok = ok && r.valid();
      CoverAccumulator acc;
      for (const PlacedTile& pt : patch.placements) acc.add(ts.tiles[pt.tile].shape, pt.placement);
      report["cover"] = cover_json(r, patch.placements.size(), acc.covered_cells());
    }
  }
  std::vector<MarkSegment> marks;
  if (a.curves || a.stitches || a.bars) marks = merge_segments(patch_marks(ts, patch, layer));
  if (a.curves) report["curves"] = curves_json(trace_closed_curves(marks), layer);
  if (a.stitches) report["stitches"] = {{"layer", std::string(to_string(layer))}, {"histogram", histogram_json(stitch_histogram(marks))}};
  if (a.bars) report["bars"] = bars_json(extract_bars(marks, bar_opts), layer, bar_opts);
  if (a.period) {
    if (*a.period < 1) throw Error(Errc::invalid_argument, "period radius must be at least 1");
    Occupancy occ;
    try {
      occ = patch_occupancy(ts, patch);
    } catch (const OverlapError& e) {
      throw Error(Errc::overlap, std::string("periodicity scan needs a cover: ") + e.what());
    }
    const Box w = central_window(occ);
    json periods = json::array();
    for (const Vec2& t : periodicity_scan(occ, w, *a.period)) periods.push_back({t.x, t.y});
    report["periods"] = {{"radius", *a.period},
                         {"window", {{"min", {w.min.x, w.min.y}}, {"max", {w.max.x, w.max.y}}}},
                         {"periods", std::move(periods)}};
  }
  if (a.stats) {
    const SubstitutionStats s = substitution_stats(ts, *a.stats);
    for (auto v : s.area_residual) ok = ok && v == 0;
    report["stats"] = stats_json(s, *a.stats);
  }
  emit(report.dump(2) + "\n", a.output, out);
  return ok ? kOk : kFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Polyomino substitution tilings: validate, expand, render, analyze, transform", "axtile"};
  app.require_subcommand(1);

  std::string ts_path, output;

  auto* validate = app.add_subcommand("validate", "Check every rule for exact cover and the mark layers for coherence");
  validate->add_option("tileset", ts_path, "Tileset file")->required();

  std::string tile;
  unsigned depth = 0;
  bool stream = false;
  auto* expand = app.add_subcommand("expand", "Expand one tile and write the patch");
  expand->add_option("tileset", ts_path, "Tileset file")->required();
  expand->add_option("--tile", tile, "Seed tile id")->required();
  expand->add_option("--depth", depth, "Number of substitution steps")->required()->check(CLI::Range(0u, 24u));
  expand->add_option("-o,--output", output, "Output file (default stdout)");
  expand->add_flag("--stream", stream, "Write placements as they are generated");

  RenderArgs ra;
  auto* render = app.add_subcommand("render", "Render a patch as SVG");
  render->add_option("patch", ra.patch, "Patch file (default stdin)");
  render->add_option("-o,--output", ra.output, "Output file (default stdout)");
  render->add_option("--unit", ra.unit, "Pixels per cell")->check(CLI::PositiveNumber);
  render->add_option("--layers", ra.layers, "Layers to draw: shape, tile-marks, super-marks")
      ->delimiter(',')
      ->check(CLI::IsMember({"shape", "tile-marks", "super-marks"}));
  render->add_option("--palette", ra.palette, "Tile colors as ID=COLOR")->delimiter(',');
  render->add_option("--tileset", ra.tileset, "Tileset file, overriding the patch's tileset name");

  AnalyzeArgs aa;
  auto* analyze = app.add_subcommand("analyze", "Analyze a patch and print a JSON report");
  analyze->add_option("patch", aa.patch, "Patch file (default stdin)");
  analyze->add_option("-o,--output", aa.output, "Output file (default stdout)");
  analyze->add_flag("--cover", aa.cover, "Overlap and hole check (the default analysis)");
  analyze->add_flag("--curves", aa.curves, "Closed mark curves and their snowflake orders");
  analyze->add_flag("--stitches", aa.stitches, "Histogram of merged mark lengths");
  analyze->add_flag("--bars", aa.bars, "Bar lines, spacings and Fibonacci factor checks");
  analyze->add_option("--period", aa.period, "Periodicity scan radius on the central window");
  analyze->add_option("--stats", aa.stats, "Substitution statistics at this depth")->check(CLI::Range(0u, 8u));
  analyze->add_option("--marks", aa.marks, "Mark layer for curves, stitches and bars")
      ->check(CLI::IsMember({"tile", "super"}));
  analyze->add_option("--bar-threshold", aa.bar_threshold, "Bar coverage fraction, e.g. 4/5 or 0.8");
  analyze->add_option("--tileset", aa.tileset, "Tileset file, overriding the patch's tileset name");

  auto* transform = app.add_subcommand("transform", "Rewrite a tileset");
  transform->add_option("tileset", ts_path, "Tileset file")->required();
  transform->add_option("-o,--output", output, "Output file (default stdout)");
  transform->require_subcommand(1);
  std::string fa, fb, ft = "R0", fid;
  std::vector<Coord> foff{0, 0};
  auto* fuse_cmd = transform->add_subcommand("fuse", "Fuse a tile pair that always occurs together");
  fuse_cmd->add_option("--a", fa, "First tile id")->required();
  fuse_cmd->add_option("--b", fb, "Second tile id")->required();
  fuse_cmd->add_option("--transform", ft, "Transform of b in a's frame");
  fuse_cmd->add_option("--offset", foff, "Offset of b in a's frame")->expected(2)->required();
  fuse_cmd->add_option("--id", fid, "Id of the fused tile")->required();
  auto* dedup_cmd = transform->add_subcommand("dedup", "Merge congruent tiles");
  std::string target;
  std::vector<std::string> parts;
  unsigned discover = 0;
  auto* elim_cmd = transform->add_subcommand("eliminate", "Replace a tile by a decomposition into other tiles");
  elim_cmd->add_option("--target", target, "Tile to eliminate")->required();
  auto* part_opt = elim_cmd->add_option("--part", parts, "Part as ID:T:X:Y in the target's frame");
  auto* disc_opt = elim_cmd->add_option("--discover", discover, "Search covers with up to N parts and use the first")
                       ->check(CLI::Range(1u, 4u));
  part_opt->excludes(disc_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*validate) return cmd_validate(ts_path, out);
    if (*expand) return cmd_expand(ts_path, tile, depth, output, stream, out);
    if (*render) return cmd_render(ra, in, out);
    if (*analyze) return cmd_analyze(aa, in, out);
    const Tileset ts = load_tileset(ts_path);
    Tileset result;
    if (*fuse_cmd) {
      result = fuse(ts, {fa, fb, parse_part_placement(ft, foff[0], foff[1])}, fid);
    } else if (*dedup_cmd) {
      DedupResult d = dedup(ts);
      for (const auto& [from, to] : d.mapping) err << "merged " << from << " into " << to << '\n';
      result = std::move(d.tileset);
    } else if (*elim_cmd) {
      Decomposition dec{target, {}};
      if (discover > 0) {
        auto found = discover_decompositions(ts, target, discover);
        if (found.empty()) {
          err << "axtile: no decomposition of \"" << target << "\" into at most " << discover << " parts\n";
          return kFailed;
        }
        dec = std::move(found.front());
      } else {
        if (parts.empty()) throw Error(Errc::invalid_argument, "eliminate needs --part or --discover");
        for (const std::string& p : parts) dec.parts.push_back(parse_part(p));
      }
      result = eliminate(ts, dec);
    }
    emit(serialize_tileset(result), output, out);
    return kOk;
  } catch (const ParseError& e) {
    err << "axtile: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "axtile: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    err << "axtile: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace axtile::cli
