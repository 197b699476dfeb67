#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pasrect/geometry.hpp"

namespace pasrect::hardness {

enum class Role { tile, thin, flat, bar };

inline const char* to_string(Role r) {
  switch (r) {
    case Role::tile: return "tile";
    case Role::thin: return "thin";
    case Role::flat: return "flat";
    case Role::bar: return "bar";
  }
  return "unknown";
}

struct ItemRole {
  Role role = Role::tile;
  std::size_t number = 0;  // tiles: index into xs
  std::size_t copy = 0;    // tiles: copy id; thin/flat: running id
};

struct ReductionOutput {
  Coord N = 0;
  std::vector<Item> items;
  std::vector<ItemRole> roles;
  std::int64_t k_prime = 0;
  Coord S = 0, L = 0, t = 0;
  std::int64_t k = 0;
  std::int64_t p = 0;
  std::vector<std::int64_t> xs;

  Index tile_index(std::size_t number, std::size_t copy) const {
    return number * static_cast<std::size_t>(k * k) + copy;
  }
  Index thin_index(std::size_t j) const { return xs.size() * static_cast<std::size_t>(k * k) + j; }
  Index flat_index(std::size_t j) const { return thin_index(static_cast<std::size_t>(p)) + j; }
  Index bar_index() const { return flat_index(static_cast<std::size_t>(p)); }
};

class ReductionError : public std::invalid_argument {
 public:
  ReductionError(std::vector<std::string> problems)
      : std::invalid_argument(join(problems)), problems_(std::move(problems)) {}
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& p : v) s += (s.empty() ? "" : "; ") + p;
    return s;
  }
  std::vector<std::string> problems_;
};

inline std::vector<std::string> reduction_precondition_problems(std::span<const std::int64_t> xs, std::int64_t t,
                                                                std::int64_t k) {
  std::vector<std::string> out;
  if (k < 4) out.push_back("k must be at least 4");
  if (static_cast<std::int64_t>(xs.size()) < k) out.push_back("need k <= m");
  if (t < 1) out.push_back("t must be positive");
  std::set<std::int64_t> seen;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] < 1) out.push_back("x" + std::to_string(i) + " must be positive");
    if (xs[i] >= t) out.push_back("x" + std::to_string(i) + " must be below t");
    if (!seen.insert(xs[i]).second) out.push_back("x" + std::to_string(i) + " repeats a value");
  }
  return out;
}

/// Multi-Subset Sum -> 2DKR. Item order: tiles by (number, copy), thin, flat, bar.
inline ReductionOutput reduce_mss_to_2dkr(std::span<const std::int64_t> xs, std::int64_t t, std::int64_t k) {
  if (auto problems = reduction_precondition_problems(xs, t, k); !problems.empty()) throw ReductionError(problems);
  ReductionOutput r;
  r.k = k;
  r.t = t;
  r.xs.assign(xs.begin(), xs.end());
  r.S = k * k * t;
  r.L = k * k * r.S;
  r.N = k * r.L + (2 * k - 1) * r.S + (2 * k - 1) * t;
  r.p = k * (k - 1);
  r.k_prime = k * k + 2 * r.p + 1;
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t c = 0; c < static_cast<std::size_t>(k * k); ++c) {
      r.items.push_back({r.L + r.S + 2 * t - xs[i], r.L + r.S + xs[i]});
      r.roles.push_back({Role::tile, i, c});
    }
  for (std::int64_t j = 0; j < r.p; ++j) {
    r.items.push_back({r.S, r.L});
    r.roles.push_back({Role::thin, 0, static_cast<std::size_t>(j)});
  }
  for (std::int64_t j = 0; j < r.p; ++j) {
    r.items.push_back({r.L, r.S});
    r.roles.push_back({Role::flat, 0, static_cast<std::size_t>(j)});
  }
  r.items.push_back({r.N, (2 * k - 2) * t});
  r.roles.push_back({Role::bar, 0, 0});
  return r;
}

/// Re-derives every constant and item shape; empty when consistent.
inline std::vector<std::string> check_reduction_invariants(const ReductionOutput& r) {
  std::vector<std::string> bad;
  const auto k = r.k, t = r.t;
  if (r.S != k * k * t) bad.push_back("S != k^2 t");
  if (r.L != k * k * r.S) bad.push_back("L != k^2 S");
  if (r.N != k * r.L + (2 * k - 1) * r.S + (2 * k - 1) * t) bad.push_back("N formula");
  if (r.p != k * (k - 1)) bad.push_back("p != k(k-1)");
  if (r.k_prime != k * k + 2 * r.p + 1) bad.push_back("k' != k^2 + 2p + 1");
  const std::size_t expect = r.xs.size() * static_cast<std::size_t>(k * k) + 2 * static_cast<std::size_t>(r.p) + 1;
  if (r.items.size() != expect || r.roles.size() != expect) {
    bad.push_back("item count");
    return bad;
  }
  for (std::size_t i = 0; i < r.items.size(); ++i) {
    const auto& it = r.items[i];
    const auto& role = r.roles[i];
    switch (role.role) {
      case Role::tile: {
        const auto x = r.xs[role.number];
        if (it.h != r.L + r.S + x || it.w != r.L + r.S + 2 * t - x) bad.push_back("tile shape at " + std::to_string(i));
        if (!(it.h > r.L + r.S && it.h < r.L + r.S + t)) bad.push_back("tile height range at " + std::to_string(i));
        if (!(it.w > r.L + r.S + t && it.w < r.L + r.S + 2 * t)) bad.push_back("tile width range at " + std::to_string(i));
        break;
      }
      case Role::thin:
        if (it.h != r.L || it.w != r.S) bad.push_back("thin shape at " + std::to_string(i));
        break;
      case Role::flat:
        if (it.h != r.S || it.w != r.L) bad.push_back("flat shape at " + std::to_string(i));
        break;
      case Role::bar:
        if (it.h != (2 * k - 2) * t || it.w != r.N) bad.push_back("bar shape");
        break;
    }
  }
  return bad;
}

// ---------------------------------------------------------------------------
// Yes-packing

/// Grid label of a placement, 1-based (a = column, b = row).
struct Label {
  Role role = Role::tile;
  std::int64_t a = 0, b = 0;
};

struct YesPacking {
  Packing packing;
  std::vector<Label> labels;  // parallel to packing.placements
};

/// Closed-form packing of k^2 tiles, all thin and flat items and the bar, without rotations.
inline YesPacking build_yes_packing(const ReductionOutput& r, std::span<const std::int64_t> ys) {
  const auto k = r.k;
  if (static_cast<std::int64_t>(ys.size()) != k) throw std::invalid_argument("need exactly k selected values");
  std::int64_t sum = 0;
  std::vector<std::size_t> number(ys.size());
  for (std::size_t i = 0; i < ys.size(); ++i) {
    sum += ys[i];
    auto it = std::find(r.xs.begin(), r.xs.end(), ys[i]);
    if (it == r.xs.end()) throw std::invalid_argument("selected value not in the input set");
    number[i] = static_cast<std::size_t>(it - r.xs.begin());
  }
  if (sum != r.t) throw std::invalid_argument("selected values do not sum to t");

  const auto K = static_cast<std::size_t>(k);
  // tile (a,b) uses y_{1 + ((a-b) mod k)}; 0-based here
  auto tile_number = [&](std::size_t a, std::size_t b) { return number[((a + K - b) % K)]; };
  std::vector<std::size_t> next_copy(r.xs.size(), 0);
  std::vector<std::vector<Index>> tile(K, std::vector<Index>(K));
  for (std::size_t a = 0; a < K; ++a)
    for (std::size_t b = 0; b < K; ++b) {
      const auto n = tile_number(a, b);
      tile[a][b] = r.tile_index(n, next_copy[n]++);
    }
  auto width = [&](std::size_t a, std::size_t b) { return r.items[tile[a][b]].w; };
  auto height = [&](std::size_t a, std::size_t b) { return r.items[tile[a][b]].h; };
  auto left = [&](std::size_t a, std::size_t b) {
    Coord s = static_cast<Coord>(a) * r.S;
    for (std::size_t i = 0; i < a; ++i) s += width(i, b);
    return s;
  };
  auto bottom = [&](std::size_t a, std::size_t b) {
    Coord s = static_cast<Coord>(b) * r.S;
    for (std::size_t i = 0; i < b; ++i) s += height(a, i);
    return s;
  };

  YesPacking yp;
  yp.packing.N = r.N;
  for (std::size_t a = 0; a < K; ++a)
    for (std::size_t b = 0; b < K; ++b) {
      yp.packing.placements.push_back({tile[a][b], left(a, b), bottom(a, b), false});
      yp.labels.push_back({Role::tile, static_cast<std::int64_t>(a + 1), static_cast<std::int64_t>(b + 1)});
    }
  std::size_t j = 0;
  for (std::size_t a = 0; a + 1 < K; ++a)
    for (std::size_t b = 0; b < K; ++b) {
      const Coord x = left(a, b) + width(a, b);
      const Coord y = static_cast<Coord>(b) * r.L + static_cast<Coord>(2 * b + 1) * r.S;
      yp.packing.placements.push_back({r.thin_index(j++), x, y, false});
      yp.labels.push_back({Role::thin, static_cast<std::int64_t>(a + 1), static_cast<std::int64_t>(b + 1)});
    }
  j = 0;
  for (std::size_t a = 0; a < K; ++a)
    for (std::size_t b = 0; b + 1 < K; ++b) {
      const Coord x = static_cast<Coord>(a) * r.L + static_cast<Coord>(2 * a + 1) * r.S;
      const Coord y = bottom(a, b) + height(a, b);
      yp.packing.placements.push_back({r.flat_index(j++), x, y, false});
      yp.labels.push_back({Role::flat, static_cast<std::int64_t>(a + 1), static_cast<std::int64_t>(b + 1)});
    }
  yp.packing.placements.push_back({r.bar_index(), 0, r.N - (2 * k - 2) * r.t, false});
  yp.labels.push_back({Role::bar, 0, 0});
  return yp;
}

// ---------------------------------------------------------------------------
// Validators

struct IntervalViolation {
  std::int64_t a = 0, b = 0;
  std::string side;  // left | right | bottom | top
  Coord value = 0, lo = 0, hi = 0;
};

struct IntervalReport {
  std::vector<IntervalViolation> violations;
  std::size_t checked = 0;
  bool ok() const { return violations.empty(); }
};

/// Strict interval bounds for every tile; the lower bounds of the first column and first row
/// are checked as value >= 0 since those tiles sit on the knapsack boundary.
inline IntervalReport verify_interval_bounds(const YesPacking& yp, const ReductionOutput& r) {
  IntervalReport rep;
  const Coord L = r.L, S = r.S;
  for (std::size_t i = 0; i < yp.labels.size(); ++i) {
    const auto& lab = yp.labels[i];
    if (lab.role != Role::tile) continue;
    const Rect f = footprint(yp.packing.placements[i], r.items[yp.packing.placements[i].item]);
    const auto a = lab.a, b = lab.b;
    auto check = [&](const char* side, Coord v, Coord lo, Coord hi, bool boundary) {
      ++rep.checked;
      const bool low_ok = boundary ? v >= 0 : v > lo;
      if (!low_ok || !(v < hi)) rep.violations.push_back({a, b, side, v, lo, hi});
    };
    check("left", f.x1, (a - 1) * L + (2 * a - 2) * S, (a - 1) * L + (2 * a - 1) * S, a == 1);
    check("right", f.x2, a * L + (2 * a - 1) * S, a * L + 2 * a * S, false);
    check("bottom", f.y1, (b - 1) * L + (2 * b - 2) * S, (b - 1) * L + (2 * b - 1) * S, b == 1);
    check("top", f.y2, b * L + (2 * b - 1) * S, b * L + 2 * b * S, false);
  }
  return rep;
}

/// Pairwise separation by the role-specific inequality of the five-case argument (tile-flat,
/// tile-thin, flat-flat, flat-thin, thin-thin), plus tile-tile and the bar on top.
inline std::vector<std::string> case_analysis_violations(const YesPacking& yp, const ReductionOutput& r) {
  std::vector<std::string> bad;
  const std::size_t m = yp.labels.size();
  std::vector<Rect> f(m);
  for (std::size_t i = 0; i < m; ++i) f[i] = footprint(yp.packing.placements[i], r.items[yp.packing.placements[i].item]);
  auto left_of = [&](std::size_t i, std::size_t j) { return f[i].x2 <= f[j].x1; };
  auto below = [&](std::size_t i, std::size_t j) { return f[i].y2 <= f[j].y1; };
  auto name = [&](std::size_t i) {
    const auto& l = yp.labels[i];
    return std::string(to_string(l.role)) + "(" + std::to_string(l.a) + "," + std::to_string(l.b) + ")";
  };
  auto rank = [](Role x) {
    switch (x) {
      case Role::tile: return 0;
      case Role::flat: return 1;
      case Role::thin: return 2;
      case Role::bar: return 3;
    }
    return 4;
  };
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      std::size_t u = i, v = j;
      if (rank(yp.labels[u].role) > rank(yp.labels[v].role)) std::swap(u, v);
      const auto& p = yp.labels[u];
      const auto& q = yp.labels[v];
      bool ok = false;
      if (q.role == Role::bar) {
        ok = below(u, v);
      } else if (p.role == Role::tile && q.role == Role::tile) {
        if (p.a != q.a) ok = p.a < q.a ? left_of(u, v) : left_of(v, u);
        else ok = p.b < q.b ? below(u, v) : below(v, u);
      } else if (p.role == Role::tile && q.role == Role::flat) {  // case (1)
        if (p.a < q.a) ok = left_of(u, v);
        else if (p.a > q.a) ok = left_of(v, u);
        else ok = p.b <= q.b ? below(u, v) : below(v, u);
      } else if (p.role == Role::tile && q.role == Role::thin) {  // case (2)
        if (p.b < q.b) ok = below(u, v);
        else if (p.b > q.b) ok = below(v, u);
        else ok = p.a <= q.a ? left_of(u, v) : left_of(v, u);
      } else if (p.role == Role::flat && q.role == Role::flat) {  // case (3)
        if (p.a != q.a) ok = p.a < q.a ? left_of(u, v) : left_of(v, u);
        else ok = p.b < q.b ? below(u, v) : below(v, u);
      } else if (p.role == Role::flat && q.role == Role::thin) {  // case (4)
        ok = p.a <= q.a ? left_of(u, v) : left_of(v, u);
      } else {  // case (5), thin-thin
        if (p.b != q.b) ok = p.b < q.b ? below(u, v) : below(v, u);
        else ok = p.a < q.a ? left_of(u, v) : left_of(v, u);
      }
      if (!ok) bad.push_back(name(u) + " vs " + name(v));
    }
  return bad;
}

}  // namespace pasrect::hardness
