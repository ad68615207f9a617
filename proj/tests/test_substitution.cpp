#include <gtest/gtest.h>

#include <mutex>

#include "axtile/analysis.hpp"
#include "axtile/error.hpp"
#include "axtile/substitution.hpp"
#include "support.hpp"

using namespace axtile;

namespace {

// Replays expansion with block arithmetic instead of the library's
// compose() and inflate().
std::vector<std::pair<std::string, Placement>> replay(const Tileset& ts, const std::string& tile, unsigned depth) {
  std::vector<std::pair<std::string, Placement>> cur{{tile, Placement{}}};
  const Coord k = ts.scale;
  for (unsigned d = 0; d < depth; ++d) {
    std::vector<std::pair<std::string, Placement>> next;
    for (const auto& [id, p] : cur) {
      const auto m = test::matrix_of(p.transform);
      for (const Child& c : ts.rule_for(id)->children) {
        // The child's origin cell x sits in block floor(x / k) of the
        // inflated parent; the block moves with p, the cell turns inside it.
        const Cell x = c.placement.offset;
        const Cell block{x.x >= 0 ? x.x / k : -((-x.x + k - 1) / k), x.y >= 0 ? x.y / k : -((-x.y + k - 1) / k)};
        const Cell rem = x - k * block;
        const Cell tb = m(block);
        // Within a k x k block, T acts about the block centre.
        const Cell r = m(Vec2{2 * rem.x - (k - 1), 2 * rem.y - (k - 1)});
        const Cell rem_img{(r.x + k - 1) / 2, (r.y + k - 1) / 2};
        const Cell origin = k * tb + rem_img + k * p.offset;
        const D4 t = compose(p.transform, c.placement.transform);
        next.push_back({c.tile, Placement{t, origin}});
      }
    }
    cur = std::move(next);
  }
  return cur;
}

std::set<Cell> patch_cells(const Tileset& ts, const Patch& p) {
  std::set<Cell> out;
  for (const PlacedTile& pt : p.placements) {
    const Polyomino s = place(ts.tiles[pt.tile].shape, pt.placement);
    out.insert(s.cells().begin(), s.cells().end());
  }
  return out;
}

}  // namespace

TEST(Expand, ChairExamples) {
  const Tileset ts = test::chair();
  const Polyomino l = ts.tiles[0].shape;
  const Patch p0 = expand_tile(ts, "L", 0);
  ASSERT_EQ(p0.placements.size(), 1u);
  EXPECT_EQ(p0.placements[0].placement, Placement{});
  const Patch p1 = expand_patch(ts, p0);
  EXPECT_EQ(p1.level, 1u);
  EXPECT_EQ(p1.placements.size(), 4u);
  EXPECT_EQ(patch_cells(ts, p1), test::cell_set(inflate(l, 2)));
  const Patch p2 = expand_patch(ts, p1);
  EXPECT_EQ(p2.placements.size(), 16u);
  EXPECT_EQ(patch_cells(ts, p2), test::cell_set(inflate(l, 4)));
  EXPECT_TRUE(cover_check(ts, p2).valid());
  const Patch p6 = expand_tile(ts, "L", 6);
  EXPECT_EQ(p6.placements.size(), 4096u);
  EXPECT_EQ(patch_cells(ts, p6), test::cell_set(inflate(l, 64)));
}

TEST(Expand, EmptyPatchAndUnruledTile) {
  const Tileset ts = test::chair();
  Patch empty{"chair", 3, {}, {}};
  const Patch e = expand_patch(ts, empty);
  EXPECT_EQ(e.level, 4u);
  EXPECT_TRUE(e.placements.empty());

  Tileset keyed = ts;
  keyed.tiles.push_back({"K", test::square(), {}, {}});
  keyed.rules[0].children.back() = test::child("K", 1, 1);
  keyed.rules[0].children.push_back(test::child("K", 2, 1));
  keyed.rules[0].children.push_back(test::child("K", 1, 2));
  EXPECT_TRUE(validate_tileset(keyed).passed());
  EXPECT_EQ(expand_tile(keyed, "K", 0).placements.size(), 1u);
  for (unsigned d : {1u, 2u}) {
    try {
      expand_tile(keyed, d == 1 ? "K" : "L", d);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::no_rule);
      EXPECT_NE(std::string(e.what()).find("\"K\""), std::string::npos);
    }
  }
}

TEST(Expand, CommutesWithExpandPatchAndIsDeterministic) {
  for (const Tileset& ts : {test::chair(), test::pipeline_seed(), test::rotated_dominoes()})
    for (const TilePrototype& t : ts.tiles) {
      Patch p = expand_tile(ts, t.id, 0);
      for (unsigned d = 1; d <= 4; ++d) {
        p = expand_patch(ts, p);
        const Patch q = expand_tile(ts, t.id, d);
        EXPECT_EQ(p.placements, q.placements);
        EXPECT_EQ(serialize_patch(ts, q), serialize_patch(ts, expand_tile(ts, t.id, d)));
      }
    }
}

TEST(Expand, MatchesIndependentReplay) {
  for (const Tileset& ts : {test::chair(), test::pipeline_seed(), test::rotated_dominoes()})
    for (const TilePrototype& t : ts.tiles)
      for (unsigned d = 0; d <= 3; ++d) {
        const Patch p = expand_tile(ts, t.id, d);
        const auto want = replay(ts, t.id, d);
        ASSERT_EQ(p.placements.size(), want.size());
        for (std::size_t i = 0; i < want.size(); ++i) {
          EXPECT_EQ(ts.tiles[p.placements[i].tile].id, want[i].first);
          EXPECT_EQ(p.placements[i].placement, want[i].second) << ts.name << " " << t.id << " d=" << d << " i=" << i;
        }
      }
}

TEST(Expand, AreaConservationEveryDepth) {
  for (const Tileset& ts : {test::chair(), test::pipeline_seed(), test::decomposable()})
    for (const TilePrototype& t : ts.tiles) {
      std::uint64_t area = t.shape.area();
      for (unsigned d = 1; d <= 5; ++d) {
        area *= static_cast<std::uint64_t>(ts.scale * ts.scale);
        const Patch p = expand_tile(ts, t.id, d);
        EXPECT_EQ(patch_cells(ts, p).size(), area);
        EXPECT_TRUE(cover_check(ts, p).valid());
      }
    }
}

TEST(Expand, ProvenanceReplaysAncestors) {
  const Tileset ts = test::chair();
  const Patch p = expand_tile(ts, "L", 2, {.provenance = true});
  ASSERT_TRUE(p.provenance);
  ASSERT_EQ(p.provenance->size(), p.placements.size());
  const auto& kids = ts.rules[0].children;
  for (std::size_t i = 0; i < p.placements.size(); ++i) {
    const auto& path = (*p.provenance)[i];
    ASSERT_EQ(path.size(), 2u);
    const Placement first = kids[path[0]].placement;
    EXPECT_EQ(p.placements[i].placement, compose(inflate(first, 2), kids[path[1]].placement));
  }
}

TEST(Visit, MatchesMaterialisedExpansion) {
  const Tileset ts = test::pipeline_seed();
  for (const TilePrototype& t : ts.tiles) {
    const Patch p = expand_tile(ts, t.id, 4);
    std::vector<PlacedTile> seen;
    const auto n = visit_expansion(ts, t.id, 4, [&](const PlacedTile& pt) { seen.push_back(pt); });
    EXPECT_EQ(n, p.placements.size());
    EXPECT_EQ(seen, p.placements);

    std::mutex mu;
    std::vector<PlacedTile> par;
    visit_expansion(ts, t.id, 4, [&](const PlacedTile& pt) {
      std::lock_guard lock(mu);
      par.push_back(pt);
    }, {.threads = 4});
    auto key = [](const PlacedTile& a, const PlacedTile& b) {
      return std::tie(a.placement, a.tile) < std::tie(b.placement, b.tile);
    };
    auto want = p.placements;
    std::sort(want.begin(), want.end(), key);
    std::sort(par.begin(), par.end(), key);
    EXPECT_EQ(par, want);

    const auto counts = expansion_counts(ts, t.id, 4);
    std::vector<std::uint64_t> direct(ts.tiles.size());
    for (const PlacedTile& pt : p.placements) ++direct[pt.tile];
    EXPECT_EQ(counts, direct);
  }
}

TEST(Occupancy, Examples) {
  const Tileset ts = test::chair();
  const Occupancy occ = patch_occupancy(ts, expand_tile(ts, "L", 1));
  EXPECT_EQ(occ.size(), 12u);
  const OccupancyEntry* e = occ.find({3, 1});
  ASSERT_NE(e, nullptr);
  EXPECT_EQ(e->index, 1u);
  EXPECT_EQ(e->transform, D4(D4::Symbol::R90));
  EXPECT_EQ(occ.find({3, 3}), nullptr);
  EXPECT_TRUE(patch_occupancy(ts, Patch{"chair", 0, {}, {}}).empty());

  Tileset sq;
  sq.name = "sq";
  sq.tiles = {{"S", test::square(), {}, {}}};
  const Patch twice{"sq", 0, {{0, {D4(), {4, 7}}}, {0, {D4(), {4, 7}}}}, {}};
  try {
    patch_occupancy(sq, twice);
    FAIL();
  } catch (const OverlapError& e) {
    EXPECT_EQ(e.cell(), (Cell{4, 7}));
    EXPECT_EQ(e.code(), Errc::overlap);
  }
  Patch two_overlaps = twice;
  two_overlaps.placements.push_back({0, {D4(), {9, 2}}});
  two_overlaps.placements.push_back({0, {D4(), {9, 2}}});
  try {
    patch_occupancy(sq, two_overlaps);
    FAIL();
  } catch (const OverlapError& e) {
    EXPECT_EQ(e.cell(), (Cell{9, 2}));
  }
}

TEST(PatchFile, RoundTripAndStreaming) {
  const Tileset ts = test::pipeline_seed();
  const Patch p = expand_tile(ts, "V", 3);
  const std::string text = serialize_patch(ts, p);
  const Patch back = parse_patch(ts, text);
  EXPECT_EQ(back.placements, p.placements);
  EXPECT_EQ(back.level, 3u);
  EXPECT_EQ(back.tileset, "pipeline");

  std::ostringstream streamed;
  PatchWriter w(streamed, ts, 3);
  visit_expansion(ts, "V", 3, [&](const PlacedTile& pt) { w.write(pt); });
  w.finish();
  EXPECT_EQ(streamed.str(), text);

  std::istringstream in(text);
  PatchReader reader(in);
  EXPECT_EQ(reader.tileset(), "pipeline");
  EXPECT_EQ(reader.level(), 3u);
  const TileResolver resolve(ts);
  std::vector<PlacedTile> read;
  RawPlacement raw;
  while (reader.next(raw)) read.push_back(resolve(raw));
  EXPECT_EQ(read, p.placements);

  const Patch empty{"pipeline", 2, {}, {}};
  EXPECT_EQ(parse_patch(ts, serialize_patch(ts, empty)).placements.size(), 0u);
}

TEST(PatchFile, AcceptsOtherLayouts) {
  const Tileset ts = test::chair();
  const std::string compact =
      R"({"placements":[{"o":[3,0],"t":"R90","tile":"L"},{"tile":"L","t":"R0","o":[0,0]}],"level":1,"tileset":"chair"})";
  std::istringstream in(compact);
  PatchReader reader(in);
  EXPECT_EQ(reader.level(), 1u);
  RawPlacement raw;
  ASSERT_TRUE(reader.next(raw));
  EXPECT_EQ(raw.placement, (Placement{D4::Symbol::R90, {3, 0}}));
  ASSERT_TRUE(reader.next(raw));
  EXPECT_FALSE(reader.next(raw));
  EXPECT_THROW(parse_patch(ts, R"({"tileset":"chair","level":0,"placements":[{"tile":"Q","t":"R0","o":[0,0]}]})"),
               Error);
  EXPECT_THROW(parse_patch(ts, "{\"tileset\": "), ParseError);
}
