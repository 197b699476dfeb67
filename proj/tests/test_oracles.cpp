#include <gtest/gtest.h>

#include "pasrect/generators.hpp"
#include "pasrect/oracles.hpp"

using namespace pasrect;
using namespace pasrect::oracle;

namespace {

std::size_t best_subset_scan(std::span<const Item> items, Coord W, Coord H, std::size_t k, bool rot) {
  std::size_t best = 0;
  const std::size_t n = items.size();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    const auto c = static_cast<std::size_t>(std::popcount(mask));
    if (c > k || c <= best) continue;
    std::vector<Item> sub;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1u) sub.push_back(items[i]);
    if (packing_feasible_exact(sub, W, H, rot)) best = c;
  }
  return best;
}

}  // namespace

TEST(MisRectanglesExact, DisjointTakesAll) {
  MisrInstance inst;
  for (Coord i = 0; i < 9; ++i) inst.rects.push_back({2 * i, 0, 2 * i + 1, 5});
  EXPECT_EQ(mis_rectangles_exact(inst).size(), 9u);
}

TEST(MisRectanglesExact, CommonPointGivesOne) {
  MisrInstance inst;
  for (Coord i = 1; i <= 7; ++i) inst.rects.push_back({10 - i, 10 - 2 * i, 10 + 3 * i, 11 + i});
  EXPECT_EQ(mis_rectangles_exact(inst).size(), 1u);
}

TEST(MisRectanglesExact, MatchesSubsetScan) {
  gen::Rng rng(1);
  for (int s = 0; s < 200; ++s) {
    gen::MisrParams prm;
    prm.n = 1 + rng() % 12;
    prm.canvas = 30;
    const auto inst = gen::random_misr(prm, rng());
    const auto sol = mis_rectangles_exact(inst);
    EXPECT_TRUE(validate_misr_solution(inst, sol));
    EXPECT_EQ(sol.size(), mis_rectangles_scan(inst)) << s;
  }
}

TEST(MisRectanglesExact, BudgetGuard) {
  MisrInstance inst;
  for (Coord i = 0; i < 70; ++i) inst.rects.push_back({i, 0, i + 1, 1});
  EXPECT_THROW(mis_rectangles_exact(inst), BudgetExceeded);
}

TEST(PackingFeasibleExact, TwoFullItemsInfeasible) {
  std::vector<Item> items{{5, 5}, {5, 5}};
  EXPECT_FALSE(packing_feasible_exact(items, 5, 5, true).has_value());
}

TEST(PackingFeasibleExact, UnitSquaresInARow) {
  for (Coord k = 1; k <= 7; ++k) {
    std::vector<Item> items(static_cast<std::size_t>(k), Item{1, 1});
    auto p = packing_feasible_exact(items, k, k, false);
    ASSERT_TRUE(p.has_value());
    EXPECT_TRUE(validate_packing(Packing{k, *p}, items).ok());
  }
}

TEST(PackingFeasibleExact, ThreeByTwoInFiveBox) {
  std::vector<Item> items(4, Item{3, 2});
  const auto a = packing_feasible_exact(items, 5, 5, true);
  const auto b = packing_feasible_scan(items, 5, 5, true);
  EXPECT_EQ(a.has_value(), b.has_value());
  EXPECT_TRUE(a.has_value());  // pinwheel
  EXPECT_FALSE(packing_feasible_exact(items, 5, 5, false).has_value());
}

TEST(PackingFeasibleExact, MatchesScanOnSmallCases) {
  gen::Rng rng(3);
  for (int c = 0; c < 1500; ++c) {
    const Coord W = gen::uniform(rng, 1, 8), H = gen::uniform(rng, 1, 8);
    const std::size_t m = 1 + rng() % 4;
    std::vector<Item> items;
    for (std::size_t i = 0; i < m; ++i) items.push_back({gen::uniform(rng, 1, 6), gen::uniform(rng, 1, 6)});
    const bool rot = rng() % 2;
    const auto a = packing_feasible_exact(items, W, H, rot);
    ASSERT_EQ(a.has_value(), packing_feasible_scan(items, W, H, rot).has_value()) << c;
    if (a) {
      Packing p{std::max(W, H), *a};
      for (const auto& pl : p.placements) {
        EXPECT_LE(pl.x + eff_width(items[pl.item], pl.rotated), W);
        EXPECT_LE(pl.y + eff_height(items[pl.item], pl.rotated), H);
        if (!rot) {
          EXPECT_FALSE(pl.rotated);
        }
      }
      EXPECT_TRUE(validate_packing(p, items).ok());
    }
  }
}

TEST(KnapsackExact, NothingFits) {
  std::vector<Item> items{{11, 2}, {12, 12}};
  const auto r = knapsack_exact(items, 10, 10, 2, false);
  EXPECT_TRUE(r.chosen.empty());
}

TEST(KnapsackExact, UnitSquares) {
  std::vector<Item> items(6, Item{1, 1});
  EXPECT_EQ(knapsack_exact(items, 6, 6, 6, true).chosen.size(), 6u);
}

TEST(KnapsackExact, MatchesSubsetScan) {
  gen::Rng rng(4);
  for (int c = 0; c < 25; ++c) {
    const auto inst = gen::random_knapsack(8, 12, rng(), 150, 700);
    const auto r = knapsack_exact(inst.items, 12, 12, 3, true);
    EXPECT_EQ(r.chosen.size(), best_subset_scan(inst.items, 12, 12, 3, true));
    std::vector<Item> sub;
    Packing p{12, r.placements};
    EXPECT_TRUE(validate_packing(p, inst.items).ok());
    EXPECT_EQ(p.size(), r.chosen.size());
  }
}

TEST(MssExact, Examples) {
  EXPECT_EQ(mss_exact(std::vector<std::int64_t>{2}, 2, 1), (std::vector<std::int64_t>{2}));
  EXPECT_EQ(mss_exact(std::vector<std::int64_t>{3, 5}, 6, 2), (std::vector<std::int64_t>{3, 3}));
  EXPECT_FALSE(mss_exact(std::vector<std::int64_t>{3, 5}, 7, 2).has_value());
}

TEST(MssExact, MatchesEnumeration) {
  gen::Rng rng(5);
  for (int c = 0; c < 400; ++c) {
    std::vector<std::int64_t> xs;
    const std::size_t m = 1 + rng() % 5;
    for (std::size_t i = 0; i < m; ++i) xs.push_back(gen::uniform(rng, 1, 30));
    const std::int64_t t = gen::uniform(rng, 1, 60), k = gen::uniform(rng, 1, 4);
    const auto r = mss_exact(xs, t, k);
    ASSERT_EQ(r.has_value(), mss_enumerate(xs, t, k));
    if (r) {
      EXPECT_EQ(static_cast<std::int64_t>(r->size()), k);
      EXPECT_EQ(std::accumulate(r->begin(), r->end(), std::int64_t(0)), t);
      for (auto v : *r) EXPECT_NE(std::find(xs.begin(), xs.end(), v), xs.end());
    }
  }
}
