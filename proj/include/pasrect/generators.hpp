#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "pasrect/geometry.hpp"
#include "pasrect/oracles.hpp"

namespace pasrect::gen {

using Rng = std::mt19937_64;

/// Uniform integer in [lo, hi]; modulo reduction keeps streams identical across standard libraries.
inline Coord uniform(Rng& rng, Coord lo, Coord hi) {
  if (hi < lo) throw std::invalid_argument("empty range");
  return lo + static_cast<Coord>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

// ---------------------------------------------------------------------------
// MISR

struct MisrParams {
  std::size_t n = 10;
  Coord canvas = 100;
  int max_side_percent = 60;  // rectangle sides up to this share of the canvas
  std::size_t planted = 0;    // pairwise disjoint rectangles placed in separate columns
};

inline MisrInstance random_misr(const MisrParams& prm, std::uint64_t seed) {
  if (prm.canvas < 2 || prm.max_side_percent < 1 || prm.max_side_percent > 100)
    throw std::invalid_argument("invalid misr generator parameters");
  if (prm.planted > prm.n) throw std::invalid_argument("planted exceeds n");
  if (prm.planted > 0 && prm.canvas / static_cast<Coord>(prm.planted) < 1)
    throw std::invalid_argument("canvas too small for the planted rectangles");
  Rng rng(seed);
  MisrInstance inst;
  if (prm.planted > 0) {
    const Coord col = prm.canvas / static_cast<Coord>(prm.planted);
    for (std::size_t j = 0; j < prm.planted; ++j) {
      const Coord x0 = static_cast<Coord>(j) * col;
      const Coord x1 = uniform(rng, x0, x0 + col - 1);
      const Coord x2 = uniform(rng, x1 + 1, x0 + col);
      const Coord y1 = uniform(rng, 0, prm.canvas - 1);
      const Coord y2 = uniform(rng, y1 + 1, prm.canvas);
      inst.rects.push_back({x1, y1, x2, y2});
    }
  }
  const Coord max_side = std::max<Coord>(1, prm.canvas * prm.max_side_percent / 100);
  while (inst.size() < prm.n) {
    const Coord w = uniform(rng, 1, max_side), h = uniform(rng, 1, max_side);
    const Coord x = uniform(rng, 0, prm.canvas - w), y = uniform(rng, 0, prm.canvas - h);
    inst.rects.push_back({x, y, x + w, y + h});
  }
  // interleave planted and random rectangles deterministically
  std::shuffle(inst.rects.begin(), inst.rects.end(), rng);
  return inst;
}

/// Rejection sampling over derived seeds until the exact optimum lies in [opt_lo, opt_hi].
inline std::optional<MisrInstance> misr_with_opt(MisrParams prm, std::uint64_t seed, std::size_t opt_lo,
                                                 std::size_t opt_hi, std::size_t attempts = 1000) {
  Rng outer(seed);
  for (std::size_t a = 0; a < attempts; ++a) {
    auto inst = random_misr(prm, outer());
    const auto opt = oracle::mis_rectangles_exact(inst).size();
    if (opt >= opt_lo && opt <= opt_hi) return inst;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Knapsack

struct PackedInstance {
  KnapsackInstance instance;
  Packing packing;  // feasible reference packing of all items
};

/// Random guillotine partition of the N x N square into k pieces; each piece becomes an item
/// slightly shorter than its piece (shrink_permille of its height) at a random vertical offset.
inline PackedInstance random_feasible_packing(std::size_t k, Coord N, std::uint64_t seed, int shrink_permille = 20) {
  if (k < 1 || N < 2 || shrink_permille < 0 || shrink_permille >= 1000)
    throw std::invalid_argument("invalid packing generator parameters");
  Rng rng(seed);
  std::vector<Rect> pieces{{0, 0, N, N}};
  while (pieces.size() < k) {
    Wide best = 0;
    for (const auto& p : pieces) best = std::max(best, Wide(p.x2 - p.x1) * (p.y2 - p.y1));
    std::vector<std::size_t> big;
    for (std::size_t i = 0; i < pieces.size(); ++i)
      if (2 * Wide(pieces[i].x2 - pieces[i].x1) * (pieces[i].y2 - pieces[i].y1) >= best) big.push_back(i);
    const std::size_t pick = big[static_cast<std::size_t>(uniform(rng, 0, static_cast<Coord>(big.size()) - 1))];
    const Rect p = pieces[pick];
    const Coord w = p.x2 - p.x1, h = p.y2 - p.y1;
    if (w < 2 && h < 2) throw std::invalid_argument("N too small for k pieces");
    const bool vertical = h < 2 || (w >= 2 && uniform(rng, 0, w + h - 1) < w);
    const Coord side = vertical ? w : h;
    const Coord margin = std::max<Coord>(1, side / 5);
    const Coord cut = side >= 2 * margin ? uniform(rng, margin, side - margin) : side / 2;
    pieces.erase(pieces.begin() + static_cast<std::ptrdiff_t>(pick));
    if (vertical) {
      pieces.push_back({p.x1, p.y1, p.x1 + cut, p.y2});
      pieces.push_back({p.x1 + cut, p.y1, p.x2, p.y2});
    } else {
      pieces.push_back({p.x1, p.y1, p.x2, p.y1 + cut});
      pieces.push_back({p.x1, p.y1 + cut, p.x2, p.y2});
    }
  }
  PackedInstance out;
  out.instance.N = N;
  out.packing.N = N;
  for (const auto& p : pieces) {
    const Coord w = p.x2 - p.x1, h = p.y2 - p.y1;
    const Coord dh = std::min<Coord>(h - 1, uniform(rng, 0, h * shrink_permille / 1000));
    const Coord off = uniform(rng, 0, dh);
    out.packing.placements.push_back({out.instance.items.size(), p.x1, p.y1 + off, false});
    out.instance.items.push_back({w, h - dh});
  }
  return out;
}

/// k/2 full-width items of height delta stacked at the bottom and k/2 equal
/// columns filling the rest of the square above them.
inline PackedInstance stacked_columns(std::size_t k, Coord N, Coord delta = 1) {
  if (k < 2 || k % 2 != 0) throw std::invalid_argument("stacked_columns needs an even k >= 2");
  const auto half = static_cast<Coord>(k / 2);
  if (delta < 1 || half * delta >= N || N / half < 1) throw std::invalid_argument("N too small for stacked_columns");
  PackedInstance out;
  out.instance.N = N;
  out.instance.rotations = false;
  out.packing.N = N;
  for (Coord j = 0; j < half; ++j) {
    out.packing.placements.push_back({out.instance.items.size(), 0, j * delta, false});
    out.instance.items.push_back({N, delta});
  }
  const Coord col = N / half, tall = N - half * delta;
  for (Coord j = 0; j < half; ++j) {
    out.packing.placements.push_back({out.instance.items.size(), j * col, half * delta, false});
    out.instance.items.push_back({col, tall});
  }
  return out;
}

/// Independent random items with sides in [lo_permille, hi_permille] of N.
inline KnapsackInstance random_knapsack(std::size_t n, Coord N, std::uint64_t seed, int lo_permille = 100,
                                        int hi_permille = 700) {
  if (N < 1 || lo_permille < 0 || hi_permille > 1000 || lo_permille > hi_permille)
    throw std::invalid_argument("invalid knapsack generator parameters");
  Rng rng(seed);
  KnapsackInstance inst;
  inst.N = N;
  const Coord lo = std::max<Coord>(1, N * lo_permille / 1000), hi = std::max<Coord>(lo, N * hi_permille / 1000);
  for (std::size_t i = 0; i < n; ++i) inst.items.push_back({uniform(rng, lo, hi), uniform(rng, lo, hi)});
  return inst;
}

// ---------------------------------------------------------------------------
// Multi-Subset Sum

struct MssInstance {
  std::vector<std::int64_t> xs;
  std::int64_t t = 0;
  std::int64_t k = 0;
};

/// m distinct values below t. Yes-instances plant k values summing to t; no-instances are
/// resampled until the DP finds no solution.
inline MssInstance random_mss(std::size_t m, std::int64_t t, std::int64_t k, std::uint64_t seed, bool yes,
                              std::size_t attempts = 10000) {
  if (k < 1 || t < k || static_cast<std::int64_t>(m) >= t) throw std::invalid_argument("invalid mss parameters");
  Rng rng(seed);
  for (std::size_t a = 0; a < attempts; ++a) {
    std::set<std::int64_t> vals;
    if (yes) {
      // k positive parts of t, each below t
      std::vector<std::int64_t> cuts{0, t};
      for (std::int64_t j = 1; j < k; ++j) cuts.push_back(uniform(rng, 1, t - 1));
      std::sort(cuts.begin(), cuts.end());
      bool ok = true;
      for (std::size_t j = 1; j < cuts.size(); ++j) {
        const auto part = cuts[j] - cuts[j - 1];
        if (part < 1 || part >= t) ok = false;
        vals.insert(part);
      }
      if (!ok || vals.size() > m) continue;
    }
    std::size_t guard = 0;
    while (vals.size() < m && guard++ < 100 * m) vals.insert(uniform(rng, 1, t - 1));
    if (vals.size() < m) continue;
    MssInstance inst{{vals.begin(), vals.end()}, t, k};
    std::shuffle(inst.xs.begin(), inst.xs.end(), rng);
    const bool has = oracle::mss_exact(inst.xs, t, k).has_value();
    if (has == yes) return inst;
  }
  throw std::runtime_error("could not sample a matching multi-subset sum instance");
}

}  // namespace pasrect::gen
