#include <algorithm>
#include <unordered_set>

#include "axtile/analysis.hpp"

namespace axtile {

namespace {

using Adjacency = std::unordered_map<Point, std::vector<Point>, Vec2Hash>;

void connect(Adjacency& adj, Point a, Point b) {
  adj[a].push_back(b);
  adj[b].push_back(a);
}

// Splits every merged segment at endpoints of other segments lying on it
// and at crossings, and records the resulting edges.
Adjacency build_graph(const std::vector<MarkSegment>& segs) {
  std::vector<const MarkSegment*> horizontal;
  std::vector<const MarkSegment*> vertical;
  for (const MarkSegment& s : segs) (s.horizontal() ? horizontal : vertical).push_back(&s);
  std::sort(vertical.begin(), vertical.end(), [](auto* a, auto* b) { return a->a.x < b->a.x; });
  std::sort(horizontal.begin(), horizontal.end(), [](auto* a, auto* b) { return a->a.y < b->a.y; });

  Adjacency adj;
  std::vector<Coord> cuts;
  for (const MarkSegment& s : segs) {
    cuts.clear();
    cuts.push_back(s.horizontal() ? s.a.x : s.a.y);
    cuts.push_back(s.horizontal() ? s.b.x : s.b.y);
    const auto& across = s.horizontal() ? vertical : horizontal;
    const Coord lo = s.horizontal() ? s.a.x : s.a.y;
    const Coord hi = s.horizontal() ? s.b.x : s.b.y;
    const Coord line = s.line();
    auto first = std::lower_bound(across.begin(), across.end(), lo,
                                  [](const MarkSegment* m, Coord v) { return m->line() < v; });
    for (auto it = first; it != across.end() && (*it)->line() <= hi; ++it) {
      const MarkSegment& t = **it;
      const Coord tlo = t.horizontal() ? t.a.x : t.a.y;
      const Coord thi = t.horizontal() ? t.b.x : t.b.y;
      if (tlo <= line && line <= thi) cuts.push_back(t.line());
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      if (s.horizontal())
        connect(adj, Point{cuts[i], line}, Point{cuts[i + 1], line});
      else
        connect(adj, Point{line, cuts[i]}, Point{line, cuts[i + 1]});
    }
  }
  return adj;
}

ClosedCurve make_curve(std::vector<Point> loop) {
  // Drop straight-through vertices.
  std::vector<Point> corners;
  const std::size_t n = loop.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point prev = loop[(i + n - 1) % n];
    const Point next = loop[(i + 1) % n];
    const bool straight = (prev.x == loop[i].x && loop[i].x == next.x) || (prev.y == loop[i].y && loop[i].y == next.y);
    if (!straight) corners.push_back(loop[i]);
  }
  // Orient counterclockwise (positive shoelace area).
  std::int64_t area = 0;
  for (std::size_t i = 0; i < corners.size(); ++i) {
    const Point a = corners[i];
    const Point b = corners[(i + 1) % corners.size()];
    area += static_cast<std::int64_t>(a.x) * b.y - static_cast<std::int64_t>(b.x) * a.y;
  }
  if (area < 0) std::reverse(corners.begin(), corners.end());
  std::rotate(corners.begin(), std::min_element(corners.begin(), corners.end()), corners.end());
  corners.push_back(corners.front());
  ClosedCurve c;
  c.word = polyline_turn_word(corners);
  c.corners = std::move(corners);
  return c;
}

}  // namespace

CurveReport trace_closed_curves(std::span<const MarkSegment> marks) {
  std::vector<MarkSegment> flat(marks.begin(), marks.end());
  for (MarkSegment& m : flat) m.layer = Layer::tile;
  const std::vector<MarkSegment> segs = merge_segments(flat);
  const Adjacency adj = build_graph(segs);

  std::vector<Point> vertices;
  vertices.reserve(adj.size());
  for (const auto& [p, _] : adj) vertices.push_back(p);
  std::sort(vertices.begin(), vertices.end());

  CurveReport report;
  std::unordered_set<Point, Vec2Hash> seen;
  for (const Point start : vertices) {
    if (seen.contains(start)) continue;
    std::vector<Point> component{start};
    seen.insert(start);
    bool all_two = true;
    bool any_junction = false;
    for (std::size_t i = 0; i < component.size(); ++i) {
      const auto& nbrs = adj.at(component[i]);
      if (nbrs.size() != 2) all_two = false;
      if (nbrs.size() > 2) {
        any_junction = true;
        ++report.junction_vertices;
      }
      for (const Point q : nbrs)
        if (seen.insert(q).second) component.push_back(q);
    }
    if (any_junction) {
      ++report.junction_components;
      continue;
    }
    if (!all_two) {
      ++report.open_threads;
      continue;
    }
    std::vector<Point> loop{start};
    Point prev = start;
    Point at = adj.at(start)[0];
    while (at != start) {
      loop.push_back(at);
      const auto& nbrs = adj.at(at);
      const Point next = nbrs[0] == prev ? nbrs[1] : nbrs[0];
      prev = at;
      at = next;
    }
    report.closed.push_back(make_curve(std::move(loop)));
  }
  std::sort(report.closed.begin(), report.closed.end(),
            [](const ClosedCurve& a, const ClosedCurve& b) { return a.corners < b.corners; });
  return report;
}

std::vector<MarkSegment> patch_marks(const Tileset& ts, const Patch& patch, Layer layer) {
  std::vector<std::vector<MarkSegment>> per_tile(ts.tiles.size());
  for (std::size_t i = 0; i < ts.tiles.size(); ++i) per_tile[i] = ts.tiles[i].marks_of(layer);
  std::vector<MarkSegment> out;
  for (const PlacedTile& pt : patch.placements) {
    const Placement pl = layer == Layer::tile ? pt.placement : inflate(pt.placement, ts.scale);
    for (const MarkSegment& m : per_tile[pt.tile]) out.push_back(place(m, pl));
  }
  return out;
}

}  // namespace axtile
