#include <gtest/gtest.h>

#include <set>

#include "corpus.hpp"
#include "pasrect/misr.hpp"
#include "pasrect/oracles.hpp"

using namespace pasrect;
using namespace pasrect::misr;

namespace {

// interior lines at 1.5, 3.5, 5.5 on both axes
Grid test_grid() { return Grid{{0, 3, 7, 11, 24}, {0, 3, 7, 11, 24}}; }

MisrInstance three_columns() { return {{{0, 0, 1, 1}, {2, 0, 3, 1}, {4, 0, 5, 1}}}; }

bool certificate_ok(const MisrInstance& inst, std::int64_t k, const GridOutcome& go) {
  if (go.is_grid()) {
    const auto& g = *go.grid;
    return static_cast<std::int64_t>(g.interior_vertical().size()) <= k - 1 &&
           static_cast<std::int64_t>(g.interior_horizontal().size()) <= k - 1 && grid_crosses_all(g, inst);
  }
  return static_cast<std::int64_t>(go.independent.size()) == k && validate_misr_solution(inst, go.independent);
}

}  // namespace

TEST(BuildGrid, KOneGivesSingleRectangle) {
  MisrInstance inst{{{0, 0, 5, 5}, {1, 1, 2, 2}}};
  const auto go = build_grid(inst, 1);
  ASSERT_FALSE(go.is_grid());
  EXPECT_EQ(go.independent.size(), 1u);
}

TEST(BuildGrid, SweepFindsThreeDisjoint) {
  const auto go = build_grid(three_columns(), 3);
  ASSERT_FALSE(go.is_grid());
  EXPECT_EQ(go.independent, (IndexSet{0, 1, 2}));
}

TEST(BuildGrid, GridLinesAtHalfIntegers) {
  const auto inst = three_columns();
  const auto go = build_grid(inst, 4);
  ASSERT_TRUE(go.is_grid());
  const auto v = go.grid->interior_vertical();
  EXPECT_EQ(std::vector<Coord>(v.begin(), v.end()), (std::vector<Coord>{1, 5, 9}));
  EXPECT_TRUE(grid_crosses_all(*go.grid, inst));
}

TEST(BuildGrid, RandomCertificates) {
  gen::Rng rng(7);
  for (int s = 0; s < 50; ++s) {
    gen::MisrParams prm;
    prm.n = 1 + rng() % 30;
    const auto inst = gen::random_misr(prm, rng());
    for (std::int64_t k = 1; k <= 6; ++k) EXPECT_TRUE(certificate_ok(inst, k, build_grid(inst, k)));
  }
}

TEST(GridCells, Counts) {
  EXPECT_EQ(grid_cells(Grid{{0, 3, 8}, {0, 5, 8}}).size(), 4u);
  const auto one = grid_cells(Grid{{0, 8}, {0, 6}});
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].box, (Box{0, 0, 8, 6}));
  EXPECT_EQ(grid_cells(test_grid()).size(), 16u);
}

TEST(FootprintBlock, Spans) {
  const auto g = test_grid();
  EXPECT_EQ(footprint_block(g, {1, 1, 2, 2}), (Block{0, 0, 1, 1}));
  EXPECT_EQ(footprint_block(g, {5, 0, 6, 12}), (Block{2, 0, 3, 3}));
}

TEST(BuildG1, NoSharedCellNoEdge) {
  MisrInstance inst{{{1, 1, 2, 2}, {5, 5, 6, 6}}};
  const auto g1 = build_G1(IndexSet{0, 1}, test_grid(), inst);
  EXPECT_TRUE(g1.graph.edges.empty());
  EXPECT_TRUE(check_drawing_planar(g1.graph));
}

TEST(BuildG1, SharedVerticalLineGivesVerticalEdge) {
  MisrInstance inst{{{1, 1, 2, 2}, {1, 3, 2, 4}}};
  const auto g1 = build_G1(IndexSet{0, 1}, test_grid(), inst);
  ASSERT_EQ(g1.graph.edges.size(), 1u);
  const auto& s = *g1.graph.edges[0].drawing;
  EXPECT_EQ(s.a.x, 3);
  EXPECT_EQ(s.b.x, 3);
  EXPECT_EQ(s.a.y, 3);
  EXPECT_EQ(s.b.y, 7);
  EXPECT_TRUE(check_drawing_planar(g1.graph));
}

TEST(BuildG1, SharedHorizontalLineGivesHorizontalEdge) {
  MisrInstance inst{{{1, 1, 2, 2}, {3, 1, 4, 2}}};
  const auto g1 = build_G1(IndexSet{0, 1}, test_grid(), inst);
  ASSERT_EQ(g1.graph.edges.size(), 1u);
  EXPECT_EQ(g1.graph.edges[0].drawing->a.y, g1.graph.edges[0].drawing->b.y);
}

TEST(BuildG1, BottomLeftTopRightPairHasNoEdge) {
  MisrInstance inst{{{1, 1, 2, 2}, {3, 3, 4, 4}}};
  const auto g1 = build_G1(IndexSet{0, 1}, test_grid(), inst);
  EXPECT_TRUE(g1.graph.edges.empty());
}

TEST(BuildG1, TopLeftBottomRightPairHasDiagonalEdge) {
  MisrInstance inst{{{1, 3, 2, 4}, {3, 1, 4, 2}}};
  const auto g1 = build_G1(IndexSet{0, 1}, test_grid(), inst);
  ASSERT_EQ(g1.graph.edges.size(), 1u);
  EXPECT_TRUE(check_drawing_planar(g1.graph));
}

TEST(BuildG1, RejectsInfeasibleSolution) {
  MisrInstance inst{{{1, 1, 3, 3}, {2, 2, 4, 4}}};
  EXPECT_THROW(build_G1(IndexSet{0, 1}, test_grid(), inst), std::invalid_argument);
}

TEST(BuildG2, SingleComponentNoEdges) {
  MisrInstance inst{{{1, 1, 2, 2}}};
  const auto g1 = build_G1(IndexSet{0}, test_grid(), inst);
  const auto div = apply_separator(g1.graph.adjacency(), Ratio{1, 2});
  const auto g2 = build_G2(div.division, g1, test_grid(), inst);
  EXPECT_EQ(g2.graph.num_vertices, 1u);
  EXPECT_TRUE(g2.graph.edges.empty());
}

TEST(BuildG2, CornerPairAcrossComponentsGivesEdge) {
  MisrInstance inst{{{1, 1, 2, 2}, {3, 3, 4, 4}}};
  const auto g1 = build_G1(IndexSet{0, 1}, test_grid(), inst);
  const auto div = apply_separator(g1.graph.adjacency(), Ratio{1, 2});
  ASSERT_EQ(div.division.components.size(), 2u);
  const auto g2 = build_G2(div.division, g1, test_grid(), inst);
  EXPECT_EQ(g2.graph.edges.size(), 1u);
  EXPECT_TRUE(check_drawing_planar(g2.graph));
}

TEST(BuildG2, SeparatedComponentsEdgeless) {
  MisrInstance inst{{{1, 1, 2, 2}, {5, 5, 6, 6}}};
  const auto g1 = build_G1(IndexSet{0, 1}, test_grid(), inst);
  const auto div = apply_separator(g1.graph.adjacency(), Ratio{1, 2});
  const auto g2 = build_G2(div.division, g1, test_grid(), inst);
  EXPECT_EQ(g2.graph.num_vertices, 2u);
  EXPECT_TRUE(g2.graph.edges.empty());
}

TEST(StructuredSolution, SingleRectangle) {
  MisrInstance inst{{{1, 1, 2, 2}}};
  const auto st = structured_solution(IndexSet{0}, test_grid(), inst, Ratio{1, 2});
  ASSERT_EQ(st.grouping.groups.size(), 1u);
  EXPECT_EQ(st.grouping.groups[0], IndexSet{0});
  EXPECT_TRUE(st.grouping.dropped.empty());
}

TEST(StructuredSolution, EdgelessSmallSolutionDropsNothing) {
  MisrInstance inst{{{1, 1, 2, 2}, {5, 5, 6, 6}, {1, 5, 2, 6}}};
  const auto st = structured_solution(IndexSet{0, 1, 2}, test_grid(), inst, Ratio{1, 2});
  EXPECT_TRUE(st.grouping.dropped.empty());
  EXPECT_EQ(st.kept(), 3u);
  EXPECT_TRUE(groups_cell_disjoint(st.grouping, test_grid(), inst));
}

TEST(StructuredSolution, CorpusProperties) {
  const auto cases = corpus::misr_cases(40, 11, 2, 8);
  std::size_t good = 0;
  for (const auto& c : cases) {
    const auto k = static_cast<std::int64_t>(c.opt.size());
    auto go = build_grid(c.inst, k + 1);
    ASSERT_TRUE(go.is_grid());
    const auto st = structured_solution(c.opt, *go.grid, c.inst, Ratio{1, 2});
    EXPECT_TRUE(groups_cell_disjoint(st.grouping, *go.grid, c.inst));
    EXPECT_TRUE(check_drawing_planar(st.g1.graph));
    EXPECT_TRUE(check_drawing_planar(st.g2.graph));
    for (const auto& g : st.grouping.groups) EXPECT_LE(g.size(), st.realized_c1 * std::max<std::size_t>(st.realized_c2, 1));
    std::set<Index> all(st.grouping.dropped.begin(), st.grouping.dropped.end());
    for (const auto& g : st.grouping.groups) all.insert(g.begin(), g.end());
    EXPECT_EQ(IndexSet(all.begin(), all.end()), c.opt);
    if (2 * st.kept() >= c.opt.size()) ++good;
  }
  EXPECT_GE(good * 100, cases.size() * 95);
}

TEST(StructuredSolution, ForcedSeparationStaysCellDisjoint) {
  const auto cases = corpus::misr_cases(20, 12, 5, 8);
  SeparatorOptions sep;
  sep.cap_override = 2;
  for (const auto& c : cases) {
    auto go = build_grid(c.inst, static_cast<std::int64_t>(c.opt.size()) + 1);
    ASSERT_TRUE(go.is_grid());
    const auto st = structured_solution(c.opt, *go.grid, c.inst, Ratio{1, 2}, sep);
    EXPECT_LE(st.realized_c1, 2u);
    EXPECT_LE(st.realized_c2, st.c2_cap);
    EXPECT_TRUE(groups_cell_disjoint(st.grouping, *go.grid, c.inst));
    EXPECT_EQ(st.kept() + st.grouping.dropped.size(), c.opt.size());
  }
}

TEST(EnumerateCellSets, TwoByTwoSingleBlocks) {
  const Grid g{{0, 3, 8}, {0, 3, 8}};
  const auto sets = enumerate_cell_sets(g, 1);
  EXPECT_EQ(sets.size(), 9u);
  for (std::size_t cell = 0; cell < 4; ++cell) {
    bool found = false;
    for (const auto& s : sets) found = found || (s.cells.count() == 1 && s.contains(cell));
    EXPECT_TRUE(found) << cell;
  }
}

TEST(EnumerateCellSets, TwoByTwoPairsMatchBruteForce) {
  const Grid g{{0, 3, 8}, {0, 3, 8}};
  const auto blocks = all_blocks(g);
  std::set<CellMask> expect;
  for (std::size_t i = 0; i < blocks.size(); ++i)
    for (std::size_t j = i; j < blocks.size(); ++j) expect.insert(block_mask(g, blocks[i]) | block_mask(g, blocks[j]));
  const auto sets = enumerate_cell_sets(g, 2);
  std::set<CellMask> got;
  for (const auto& s : sets) {
    got.insert(s.cells);
    CellMask u(g.num_cells());
    for (const auto& b : s.blocks) u |= block_mask(g, b);
    EXPECT_EQ(u, s.cells);
  }
  EXPECT_EQ(got.size(), sets.size());
  EXPECT_EQ(got, expect);
}

TEST(EnumerateFootprintCellSets, SubfamilyOfBlockUnions) {
  const auto cases = corpus::misr_cases(5, 13, 3, 4, 5, 10);
  for (const auto& c : cases) {
    auto go = build_grid(c.inst, 5);
    ASSERT_TRUE(go.is_grid());
    const auto fam = enumerate_footprint_cell_sets(c.inst, *go.grid, 2);
    const auto all = enumerate_cell_sets(*go.grid, 2);
    std::set<CellMask> full;
    for (const auto& s : all) full.insert(s.cells);
    for (const auto& s : fam) EXPECT_TRUE(full.count(s.cells));
  }
}

TEST(SolveCellsetSubproblem, EmptyCellSet) {
  const Grid g = test_grid();
  MisrInstance inst{{{1, 1, 2, 2}}};
  EXPECT_TRUE(solve_cellset_subproblem(inst, g, CellSet{CellMask(g.num_cells()), {}}, 3).empty());
}

TEST(SolveCellsetSubproblem, DisjointInside) {
  const Grid g = test_grid();
  MisrInstance inst{{{0, 0, 1, 1}, {1, 1, 2, 2}, {0, 2, 1, 3}, {10, 10, 11, 11}}};
  const CellSet cs{block_mask(g, {0, 0, 1, 1}), {{0, 0, 1, 1}}};
  EXPECT_EQ(solve_cellset_subproblem(inst, g, cs, 3), (IndexSet{0, 1, 2}));
}

TEST(SolveCellsetSubproblem, MutualOverlapGivesOne) {
  const Grid g = test_grid();
  MisrInstance inst{{{0, 0, 2, 2}, {1, 1, 3, 3}, {0, 1, 3, 2}}};
  const CellSet cs{block_mask(g, {0, 0, 1, 1}), {{0, 0, 1, 1}}};
  EXPECT_EQ(solve_cellset_subproblem(inst, g, cs, 3).size(), 1u);
}

TEST(PasMisr, SingleRectangleKOne) {
  MisrInstance inst{{{3, 3, 9, 9}}};
  for (Ratio e : {Ratio{1, 2}, Ratio{1, 10}, Ratio{1, 1}}) {
    const auto r = pas_misr(inst, 1, e, Knobs{1, 1});
    ASSERT_EQ(r.verdict, Verdict::solution);
    EXPECT_EQ(r.solution, IndexSet{0});
  }
}

TEST(PasMisr, SingleRectangleKTwoAsserts) {
  MisrInstance inst{{{3, 3, 9, 9}}};
  const auto r = pas_misr(inst, 2, Ratio{1, 2});
  EXPECT_EQ(r.verdict, Verdict::opt_below_k);
}

TEST(PasMisr, OracleKnobsOnOptFour) {
  const auto cases = corpus::misr_cases(15, 14, 4, 4);
  for (const auto& c : cases) {
    const auto knobs = corpus::oracle_knobs(c, 4, Ratio{1, 2});
    const auto r = pas_misr(c.inst, 4, Ratio{1, 2}, knobs);
    ASSERT_EQ(r.verdict, Verdict::solution) << c.seed;
    EXPECT_GE(r.solution.size(), 2u);
    EXPECT_TRUE(validate_misr_solution(c.inst, r.solution));
  }
}

TEST(PasMisr, AssertsWhenKExceedsOpt) {
  const auto cases = corpus::misr_cases(15, 15, 2, 5);
  for (const auto& c : cases) {
    const auto k = static_cast<std::int64_t>(c.opt.size()) + 1;
    const auto r = pas_misr(c.inst, k, Ratio::make(1, k + 1), corpus::oracle_knobs(c, k, Ratio::make(1, k + 1)));
    EXPECT_EQ(r.verdict, Verdict::opt_below_k) << c.seed;
  }
}

TEST(PasMisr, RejectsBadArguments) {
  MisrInstance inst{{{0, 0, 1, 1}}};
  EXPECT_THROW(pas_misr(inst, 0, Ratio{1, 2}), std::invalid_argument);
  EXPECT_THROW(pas_misr(inst, 1, Ratio{3, 2}), std::invalid_argument);
}

TEST(KernelMisr, GridShortcut) {
  const auto inst = three_columns();
  const auto rep = kernel_misr(inst, 3, Ratio{1, 2}, Knobs{1, 1});
  EXPECT_TRUE(rep.grid_shortcut);
  EXPECT_EQ(rep.kernel, build_grid(inst, 3).independent);
}

TEST(KernelMisr, TinyInstancePreservesOptimum) {
  const auto cases = corpus::misr_cases(10, 16, 2, 3, 4, 7);
  for (const auto& c : cases) {
    const auto k = static_cast<std::int64_t>(c.opt.size()) + 1;
    const auto rep = kernel_misr(c.inst, k, Ratio{1, 2}, Knobs{c.inst.size(), 2});
    MisrInstance sub;
    for (auto i : rep.kernel) sub.rects.push_back(c.inst[i]);
    EXPECT_EQ(oracle::mis_rectangles_exact(sub).size(), c.opt.size());
  }
}

TEST(KernelMisr, OracleKnobsKeepHalf) {
  const auto cases = corpus::misr_cases(15, 17, 2, 6);
  for (const auto& c : cases) {
    const auto k = static_cast<std::int64_t>(c.opt.size());
    const auto knobs = corpus::oracle_knobs(c, k, Ratio{1, 2});
    const auto rep = kernel_misr(c.inst, k, Ratio{1, 2}, knobs);
    MisrInstance sub;
    for (auto i : rep.kernel) sub.rects.push_back(c.inst[i]);
    EXPECT_GE(2 * oracle::mis_rectangles_exact(sub).size(), c.opt.size());
    EXPECT_LE(Wide(rep.kernel.size()), rep.size_bound);
  }
}

TEST(TheoryKnobs, ProductOfStageCaps) {
  SeparatorOptions sep;
  sep.constant = 1;
  // c1 = c'(1/2) = 4, c2 = c'(1/8) = 64
  const auto a = theory_knobs(Ratio{1, 1}, sep);
  EXPECT_EQ(a.c, 256u);
  EXPECT_EQ(a.b, 256u);
  const auto b = theory_knobs(Ratio{1, 2}, sep);
  EXPECT_GT(b.c, a.c);
}

TEST(TheoryKnobs, SaturateWithShippedConstant) {
  const auto a = theory_knobs(Ratio{1, 2});
  EXPECT_EQ(a.c, std::numeric_limits<std::uint32_t>::max());
}
