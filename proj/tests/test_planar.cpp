#include <gtest/gtest.h>

#include <random>

#include "pasrect/planar.hpp"

using namespace pasrect;

namespace {

AdjList path_graph(std::size_t n) {
  AdjList adj(n);
  for (Index i = 0; i + 1 < n; ++i) {
    adj[i].push_back(i + 1);
    adj[i + 1].push_back(i);
  }
  return adj;
}

AdjList grid_graph(std::size_t w, std::size_t h) {
  AdjList adj(w * h);
  auto id = [&](std::size_t x, std::size_t y) { return y * w + x; };
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x < w; ++x) {
      if (x + 1 < w) {
        adj[id(x, y)].push_back(id(x + 1, y));
        adj[id(x + 1, y)].push_back(id(x, y));
      }
      if (y + 1 < h) {
        adj[id(x, y)].push_back(id(x, y + 1));
        adj[id(x, y + 1)].push_back(id(x, y));
      }
    }
  return adj;
}

EmbeddedGraph point_graph(const std::vector<Point>& pts, const std::vector<std::pair<Index, Index>>& edges) {
  EmbeddedGraph g;
  g.num_vertices = pts.size();
  for (const auto& p : pts) g.drawings.push_back({{Box{p.x, p.y, p.x, p.y}}, {}});
  for (auto [u, v] : edges) g.edges.push_back({u, v, Segment{pts[u], pts[v]}});
  return g;
}

std::size_t largest_component(const AdjList& adj, const IndexSet& removed) {
  IndexSet rest;
  for (Index v = 0; v < adj.size(); ++v)
    if (!std::binary_search(removed.begin(), removed.end(), v)) rest.push_back(v);
  std::size_t m = 0;
  for (const auto& c : induced_components(adj, rest)) m = std::max(m, c.size());
  return m;
}

}  // namespace

TEST(SegmentsIntersect, CrossingAndParallel) {
  EXPECT_TRUE(segments_intersect({{0, 0}, {2, 2}}, {{0, 2}, {2, 0}}));
  EXPECT_FALSE(segments_intersect({{0, 0}, {2, 0}}, {{0, 1}, {2, 1}}));
  EXPECT_TRUE(segments_intersect({{0, 0}, {2, 0}}, {{1, 0}, {3, 0}}));
  EXPECT_TRUE(segments_intersect({{0, 0}, {2, 0}}, {{2, 0}, {2, 5}}));
}

TEST(CheckDrawingPlanar, Triangle) {
  EXPECT_TRUE(check_drawing_planar(point_graph({{0, 0}, {4, 0}, {2, 3}}, {{0, 1}, {1, 2}, {0, 2}})));
}

TEST(CheckDrawingPlanar, CrossingDiagonals) {
  EXPECT_FALSE(check_drawing_planar(point_graph({{0, 0}, {4, 4}, {0, 4}, {4, 0}}, {{0, 1}, {2, 3}})));
}

TEST(CheckDrawingPlanar, EdgeThroughForeignVertex) {
  // vertex 2 sits on the segment 0-1
  EXPECT_FALSE(check_drawing_planar(point_graph({{0, 0}, {4, 0}, {2, 0}}, {{0, 1}})));
}

TEST(CheckDrawingPlanar, OverlappingVertexRegions) {
  EmbeddedGraph g;
  g.num_vertices = 2;
  g.drawings = {{{Box{0, 0, 2, 2}}, {}}, {{Box{1, 1, 3, 3}}, {}}};
  EXPECT_FALSE(check_drawing_planar(g));
}

TEST(BalancedSeparator, PathOfNine) {
  const auto adj = path_graph(9);
  const auto res = balanced_separator(adj);
  ASSERT_EQ(res.separator, IndexSet{4});
  IndexSet rest;
  for (Index v = 0; v < 9; ++v)
    if (v != 4) rest.push_back(v);
  const auto comps = induced_components(adj, rest);
  ASSERT_EQ(comps.size(), 2u);
  EXPECT_EQ(comps[0].size(), 4u);
  EXPECT_EQ(comps[1].size(), 4u);
}

TEST(BalancedSeparator, TinyGraphs) {
  EXPECT_TRUE(balanced_separator(path_graph(0)).separator.empty());
  EXPECT_TRUE(balanced_separator(path_graph(1)).separator.empty());
  EXPECT_TRUE(balanced_separator(path_graph(2)).separator.empty());
}

TEST(BalancedSeparator, ThreeByThreeGrid) {
  const auto adj = grid_graph(3, 3);
  const auto res = balanced_separator(adj);
  EXPECT_LE(res.separator.size(), 3u);
  EXPECT_LE(largest_component(adj, res.separator), 6u);
}

TEST(ApplySeparator, SmallGraphUntouched) {
  const auto adj = path_graph(10);
  const auto rep = apply_separator(adj, Ratio{1, 2});
  EXPECT_GE(rep.cap, 10u);
  EXPECT_TRUE(rep.division.removed.empty());
  ASSERT_EQ(rep.division.components.size(), 1u);
  EXPECT_EQ(rep.division.components[0].size(), 10u);
}

TEST(ApplySeparator, PathOfHundred) {
  const auto adj = path_graph(100);
  const auto rep = apply_separator(adj, Ratio{1, 2});
  EXPECT_TRUE(is_valid_division(adj, rep.division));
  EXPECT_LE(rep.max_component, component_cap(Ratio{1, 2}));
  EXPECT_LE(rep.division.removed.size(), 50u);
}

TEST(ApplySeparator, CapOverrideForcesSeparation) {
  const auto adj = grid_graph(10, 10);
  SeparatorOptions opts;
  opts.cap_override = 7;
  const auto rep = apply_separator(adj, Ratio{1, 2}, opts);
  EXPECT_TRUE(is_valid_division(adj, rep.division));
  EXPECT_LE(rep.max_component, 7u);
  EXPECT_FALSE(rep.division.removed.empty());
}

TEST(ApplySeparator, EmptyGraph) {
  const auto rep = apply_separator(AdjList{}, Ratio{1, 2});
  EXPECT_TRUE(rep.division.removed.empty());
  EXPECT_TRUE(rep.division.components.empty());
}

TEST(ComponentCap, Formula) {
  EXPECT_EQ(component_cap(Ratio{1, 2}), static_cast<std::size_t>(4 * kSeparatorConstant));
  SeparatorOptions o;
  o.constant = 3;
  EXPECT_EQ(component_cap(Ratio{2, 3}, o), 7u);  // ceil(3 * 9 / 4)
  EXPECT_THROW(component_cap(Ratio{0, 1}), std::invalid_argument);
}

TEST(IsValidDivision, DetectsCrossEdge) {
  const auto adj = path_graph(3);
  EXPECT_FALSE(is_valid_division(adj, Division{{}, {{0}, {1, 2}}}));
  EXPECT_TRUE(is_valid_division(adj, Division{{1}, {{0}, {2}}}));
  EXPECT_FALSE(is_valid_division(adj, Division{{1}, {{0}}}));
}

// Removed fraction on triangulated grids with random deletions; the shipped constant keeps
// every sample within eps' |V|.
TEST(ApplySeparator, RemovedFractionCorpus) {
  std::mt19937_64 rng(42);
  for (int s = 0; s < 200; ++s) {
    const std::size_t w = 5 + rng() % 18, h = 5 + rng() % 18;
    const std::size_t n = std::clamp<std::size_t>(w * h, 50, 500);
    AdjList adj(w * h);
    auto id = [&](std::size_t x, std::size_t y) { return y * w + x; };
    auto add = [&](Index a, Index b) {
      if (rng() % 10 == 0) return;
      adj[a].push_back(b);
      adj[b].push_back(a);
    };
    for (std::size_t y = 0; y < h; ++y)
      for (std::size_t x = 0; x < w; ++x) {
        if (x + 1 < w) add(id(x, y), id(x + 1, y));
        if (y + 1 < h) add(id(x, y), id(x, y + 1));
        if (x + 1 < w && y + 1 < h) add(id(x, y), id(x + 1, y + 1));
      }
    adj.resize(n);
    for (auto& l : adj) l.erase(std::remove_if(l.begin(), l.end(), [&](Index v) { return v >= n; }), l.end());
    for (Ratio e : {Ratio{1, 2}, Ratio{1, 4}, Ratio{1, 8}}) {
      const auto rep = apply_separator(adj, e);
      ASSERT_TRUE(is_valid_division(adj, rep.division));
      EXPECT_LE(rep.max_component, rep.cap);
      EXPECT_LE(Wide(rep.division.removed.size()) * e.den, Wide(e.num) * n) << "sample " << s;
    }
  }
}
