#pragma once

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "pasrect/geometry.hpp"
#include "pasrect/rational.hpp"

namespace pasrect::oracle {

struct OracleBudget {
  std::size_t max_items = 64;
  std::size_t max_solution_size = 8;
  std::chrono::milliseconds time_limit{60000};
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

class Deadline {
 public:
  explicit Deadline(std::chrono::milliseconds limit) : end_(std::chrono::steady_clock::now() + limit) {}

  void tick() {
    if ((++count_ & 0x3ff) == 0 && std::chrono::steady_clock::now() > end_) throw BudgetExceeded("time limit exceeded");
  }

 private:
  std::chrono::steady_clock::time_point end_;
  std::uint64_t count_ = 0;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// MISR

/// Exact maximum independent set of rectangles: branch on a max-degree vertex, bound with a
/// greedy clique cover of the conflict graph.
inline IndexSet mis_rectangles_exact(const MisrInstance& inst, const OracleBudget& budget = {}) {
  const std::size_t n = inst.size();
  if (n > budget.max_items) throw BudgetExceeded("instance has " + std::to_string(n) + " rectangles");
  require_valid(inst);
  using Bits = boost::dynamic_bitset<>;
  std::vector<Bits> nb(n, Bits(n));
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (!rects_disjoint(inst[i], inst[j])) {
        nb[i].set(j);
        nb[j].set(i);
      }
  detail::Deadline deadline(budget.time_limit);
  IndexSet best, cur;

  auto clique_cover = [&](const Bits& p) {
    std::vector<Bits> cliques;
    for (auto v = p.find_first(); v != Bits::npos; v = p.find_next(v)) {
      bool placed = false;
      for (auto& c : cliques)
        if (c.is_subset_of(nb[v])) {
          c.set(v);
          placed = true;
          break;
        }
      if (!placed) {
        cliques.emplace_back(n);
        cliques.back().set(v);
      }
    }
    return cliques.size();
  };

  auto rec = [&](auto&& self, Bits p) -> void {
    deadline.tick();
    if (p.none()) {
      if (cur.size() > best.size()) best = cur;
      return;
    }
    if (cur.size() + clique_cover(p) <= best.size()) return;
    Index v = Bits::npos;
    std::size_t deg = 0;
    for (auto u = p.find_first(); u != Bits::npos; u = p.find_next(u)) {
      const std::size_t d = (nb[u] & p).count();
      if (v == Bits::npos || d > deg) {
        v = u;
        deg = d;
      }
    }
    if (deg == 0) {
      const auto before = cur.size();
      for (auto u = p.find_first(); u != Bits::npos; u = p.find_next(u)) cur.push_back(u);
      if (cur.size() > best.size()) best = cur;
      cur.resize(before);
      return;
    }
    cur.push_back(v);
    Bits with = p - nb[v];
    with.reset(v);
    self(self, with);
    cur.pop_back();
    Bits without = p;
    without.reset(v);
    self(self, without);
  };
  Bits all(n);
  all.set();
  rec(rec, all);
  std::sort(best.begin(), best.end());
  return best;
}

/// Size of a maximum independent set by scanning all 2^n subsets.
inline std::size_t mis_rectangles_scan(const MisrInstance& inst) {
  const std::size_t n = inst.size();
  if (n > 20) throw BudgetExceeded("subset scan limited to 20 rectangles");
  std::vector<std::uint32_t> conflict(n, 0);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (i != j && !rects_disjoint(inst[i], inst[j])) conflict[i] |= 1u << j;
  std::size_t best = 0;
  for (std::uint32_t s = 0; s < (1u << n); ++s) {
    bool ok = true;
    for (Index i = 0; i < n && ok; ++i)
      if ((s >> i & 1u) && (conflict[i] & s)) ok = false;
    if (ok) best = std::max<std::size_t>(best, static_cast<std::size_t>(std::popcount(s)));
  }
  return best;
}

// ---------------------------------------------------------------------------
// Packing feasibility

namespace detail {

/// Subset sums of `vals` except the one at `skip`, capped at `limit`; sparse for large limits.
inline std::vector<Coord> sums_without(std::span<const Coord> vals, std::size_t skip, Coord limit) {
  std::vector<Coord> sums{0};
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (i == skip) continue;
    const std::size_t m = sums.size();
    for (std::size_t j = 0; j < m; ++j)
      if (sums[j] + vals[i] <= limit) sums.push_back(sums[j] + vals[i]);
    std::sort(sums.begin(), sums.end());
    sums.erase(std::unique(sums.begin(), sums.end()), sums.end());
  }
  return sums;
}

struct Box2 {
  Coord x1, y1, x2, y2;
};

inline bool overlap(const Box2& a, const Box2& b) {
  return a.x1 < b.x2 && b.x1 < a.x2 && a.y1 < b.y2 && b.y1 < a.y2;
}

}  // namespace detail

/// Complete feasibility search over normal-pattern coordinates. Returned placements index into
/// `items`. Without rotations every placement keeps its given orientation.
inline std::optional<std::vector<Placement>> packing_feasible_exact(std::span<const Item> items, Coord W, Coord H,
                                                                    bool rotations, const OracleBudget& budget = {}) {
  const std::size_t m = items.size();
  if (m > budget.max_solution_size) throw BudgetExceeded("too many items for exact packing: " + std::to_string(m));
  if (m == 0) return std::vector<Placement>{};
  Wide area = 0;
  for (const auto& it : items) area += Wide(it.w) * it.h;
  if (area > Wide(W) * H) return std::nullopt;

  // deterministic order: larger area first
  std::vector<Index> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return Wide(items[a].w) * items[a].h > Wide(items[b].w) * items[b].h;
  });

  detail::Deadline deadline(budget.time_limit);
  std::vector<char> rot(m, 0);
  std::vector<detail::Box2> placed;
  std::vector<Placement> result;

  auto try_assignment = [&]() -> bool {
    std::vector<Coord> ew(m), eh(m);
    for (Index i = 0; i < m; ++i) {
      ew[i] = eff_width(items[i], rot[i]);
      eh[i] = eff_height(items[i], rot[i]);
      if (ew[i] > W || eh[i] > H) return false;
    }
    std::vector<std::vector<Coord>> xs(m), ys(m);
    for (Index i = 0; i < m; ++i) {
      xs[i] = detail::sums_without(ew, i, W - ew[i]);
      ys[i] = detail::sums_without(eh, i, H - eh[i]);
    }
    placed.clear();
    result.clear();
    auto rec = [&](auto&& self, std::size_t depth) -> bool {
      if (depth == m) return true;
      const Index i = order[depth];
      for (Coord y : ys[i]) {
        if (depth == 0 && 2 * y + eh[i] > H) break;
        for (Coord x : xs[i]) {
          if (depth == 0 && 2 * x + ew[i] > W) break;
          deadline.tick();
          const detail::Box2 b{x, y, x + ew[i], y + eh[i]};
          bool ok = true;
          for (const auto& q : placed)
            if (detail::overlap(b, q)) {
              ok = false;
              break;
            }
          if (!ok) continue;
          placed.push_back(b);
          result.push_back({i, x, y, rot[i] != 0});
          if (self(self, depth + 1)) return true;
          placed.pop_back();
          result.pop_back();
        }
      }
      return false;
    };
    return rec(rec, 0);
  };

  // rotation assignments in binary counting order; squares never rotate
  std::vector<Index> rotatable;
  if (rotations)
    for (Index i = 0; i < m; ++i)
      if (items[i].w != items[i].h) rotatable.push_back(i);
  const std::uint64_t combos = std::uint64_t{1} << rotatable.size();
  for (std::uint64_t mask = 0; mask < combos; ++mask) {
    for (std::size_t j = 0; j < rotatable.size(); ++j) rot[rotatable[j]] = static_cast<char>(mask >> j & 1u);
    if (try_assignment()) {
      std::sort(result.begin(), result.end(), [](const Placement& a, const Placement& b) { return a.item < b.item; });
      return result;
    }
  }
  return std::nullopt;
}

/// Independent referee: fills the lowest-then-leftmost undecided unit cell either with the
/// bottom-left corner of an unused item or marks it empty. Enumerates every integral packing.
inline std::optional<std::vector<Placement>> packing_feasible_scan(std::span<const Item> items, Coord W, Coord H,
                                                                   bool rotations) {
  if (W > 16 || H > 16 || items.size() > 8) throw BudgetExceeded("coordinate scan limited to 16x16 and 8 items");
  const std::size_t m = items.size();
  const auto cells = static_cast<std::size_t>(W * H);
  std::vector<char> filled(cells, 0);
  std::vector<char> used(m, 0);
  std::vector<Placement> result;
  Coord remaining_area = 0;
  for (const auto& it : items) remaining_area += it.w * it.h;

  auto fits = [&](Coord x, Coord y, Coord w, Coord h) {
    if (x + w > W || y + h > H) return false;
    for (Coord yy = y; yy < y + h; ++yy)
      for (Coord xx = x; xx < x + w; ++xx)
        if (filled[static_cast<std::size_t>(yy * W + xx)]) return false;
    return true;
  };
  auto paint = [&](Coord x, Coord y, Coord w, Coord h, char v) {
    for (Coord yy = y; yy < y + h; ++yy)
      for (Coord xx = x; xx < x + w; ++xx) filled[static_cast<std::size_t>(yy * W + xx)] = v;
  };

  auto rec = [&](auto&& self, std::size_t pos, Coord free_cells) -> bool {
    if (result.size() == m) return true;
    while (pos < cells && filled[pos]) {
      ++pos;
    }
    if (pos >= cells || remaining_area > free_cells) return false;
    const Coord x = static_cast<Coord>(pos) % W, y = static_cast<Coord>(pos) / W;
    for (Index i = 0; i < m; ++i) {
      if (used[i]) continue;
      for (int r = 0; r < (rotations && items[i].w != items[i].h ? 2 : 1); ++r) {
        const Coord w = eff_width(items[i], r), h = eff_height(items[i], r);
        if (!fits(x, y, w, h)) continue;
        used[i] = 1;
        paint(x, y, w, h, 1);
        remaining_area -= w * h;
        result.push_back({i, x, y, r == 1});
        if (self(self, pos + 1, free_cells - w * h)) return true;
        result.pop_back();
        remaining_area += w * h;
        paint(x, y, w, h, 0);
        used[i] = 0;
      }
    }
    // leave the cell empty
    filled[pos] = 2;
    const bool ok = self(self, pos + 1, free_cells - 1);
    filled[pos] = 0;
    return ok;
  };
  Coord free_cells = W * H;
  if (rec(rec, 0, free_cells)) {
    std::sort(result.begin(), result.end(), [](const Placement& a, const Placement& b) { return a.item < b.item; });
    return result;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Cardinality knapsack

struct KnapsackSolution {
  IndexSet chosen;
  std::vector<Placement> placements;  // item fields index into the full item list
};

/// Maximum number of items (at most k) packable into W x H. Subsets are tried by decreasing
/// size and in lexicographic order within a size, so the first hit is returned.
inline KnapsackSolution knapsack_exact(std::span<const Item> items, Coord W, Coord H, std::size_t k, bool rotations,
                                       const OracleBudget& budget = {}) {
  if (items.size() > budget.max_items) throw BudgetExceeded("too many items: " + std::to_string(items.size()));
  if (std::min(k, items.size()) > budget.max_solution_size) throw BudgetExceeded("solution size above budget");
  IndexSet pool;
  for (Index i = 0; i < items.size(); ++i) {
    const auto& it = items[i];
    const bool fit = (it.w <= W && it.h <= H) || (rotations && it.h <= W && it.w <= H);
    if (fit) pool.push_back(i);
  }
  const Wide cap = Wide(W) * H;
  for (std::size_t s = std::min(k, pool.size()); s >= 1; --s) {
    // area pruning: the s smallest areas must fit
    std::vector<Wide> areas;
    for (Index i : pool) areas.push_back(Wide(items[i].w) * items[i].h);
    std::sort(areas.begin(), areas.end());
    Wide smallest = 0;
    for (std::size_t j = 0; j < s; ++j) smallest += areas[j];
    if (smallest > cap) continue;

    std::vector<std::size_t> idx(s);
    std::iota(idx.begin(), idx.end(), 0);
    for (;;) {
      Wide area = 0;
      std::vector<Item> sub;
      for (auto j : idx) {
        sub.push_back(items[pool[j]]);
        area += Wide(items[pool[j]].w) * items[pool[j]].h;
      }
      if (area <= cap) {
        if (auto pk = packing_feasible_exact(sub, W, H, rotations, budget)) {
          KnapsackSolution sol;
          for (auto j : idx) sol.chosen.push_back(pool[j]);
          for (auto p : *pk) {
            p.item = pool[idx[p.item]];
            sol.placements.push_back(p);
          }
          return sol;
        }
      }
      // next combination
      std::size_t pos = s;
      while (pos > 0 && idx[pos - 1] == pool.size() - s + pos - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t j = pos; j < s; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Multi-Subset Sum

/// k values from xs (repetition allowed) summing to t, sorted ascending, or nullopt.
inline std::optional<std::vector<std::int64_t>> mss_exact(std::span<const std::int64_t> xs, std::int64_t t,
                                                          std::int64_t k) {
  if (k < 0 || t < 0) return std::nullopt;
  if (Wide(t + 1) * (k + 1) > Wide(200'000'000)) throw BudgetExceeded("t * k exceeds the DP memory budget");
  const auto T = static_cast<std::size_t>(t), K = static_cast<std::size_t>(k);
  // parent[j][s] = index into xs of the last pick, -1 = unreachable
  std::vector<std::vector<int>> parent(K + 1, std::vector<int>(T + 1, -1));
  std::vector<std::vector<char>> reach(K + 1, std::vector<char>(T + 1, 0));
  reach[0][0] = 1;
  for (std::size_t j = 1; j <= K; ++j)
    for (std::size_t s = 0; s <= T; ++s)
      for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] <= 0 || static_cast<std::size_t>(xs[i]) > s) continue;
        if (reach[j - 1][s - static_cast<std::size_t>(xs[i])]) {
          reach[j][s] = 1;
          parent[j][s] = static_cast<int>(i);
          break;
        }
      }
  if (!reach[K][T]) return std::nullopt;
  std::vector<std::int64_t> out;
  std::size_t s = T;
  for (std::size_t j = K; j > 0; --j) {
    const auto v = xs[static_cast<std::size_t>(parent[j][s])];
    out.push_back(v);
    s -= static_cast<std::size_t>(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Plain enumeration of non-decreasing index tuples; referee for mss_exact.
inline bool mss_enumerate(std::span<const std::int64_t> xs, std::int64_t t, std::int64_t k) {
  auto rec = [&](auto&& self, std::size_t start, std::int64_t left, std::int64_t sum) -> bool {
    if (left == 0) return sum == t;
    for (std::size_t i = start; i < xs.size(); ++i)
      if (self(self, i, left - 1, sum + xs[i])) return true;
    return false;
  };
  return rec(rec, 0, k, 0);
}

}  // namespace pasrect::oracle
