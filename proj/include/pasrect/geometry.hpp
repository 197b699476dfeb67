#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pasrect {

using Coord = std::int64_t;
using Index = std::size_t;
using IndexSet = std::vector<Index>;  // kept sorted ascending

/// Open axis-parallel rectangle (x1,x2) x (y1,y2).
struct Rect {
  Coord x1 = 0, y1 = 0, x2 = 0, y2 = 0;

  bool valid() const { return x1 < x2 && y1 < y2; }
  friend bool operator==(const Rect&, const Rect&) = default;
};

struct MisrInstance {
  std::vector<Rect> rects;

  std::size_t size() const { return rects.size(); }
  bool empty() const { return rects.empty(); }
  const Rect& operator[](Index i) const { return rects[i]; }
};

class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline bool open_intervals_overlap(Coord a1, Coord a2, Coord b1, Coord b2) { return a1 < b2 && b1 < a2; }

/// Touching boundaries do not count as overlap.
inline bool rects_disjoint(const Rect& a, const Rect& b) {
  return !(open_intervals_overlap(a.x1, a.x2, b.x1, b.x2) && open_intervals_overlap(a.y1, a.y2, b.y1, b.y2));
}

inline void require_valid(const MisrInstance& inst) {
  for (Index i = 0; i < inst.size(); ++i)
    if (!inst[i].valid()) throw GeometryError("degenerate rectangle at index " + std::to_string(i));
}

/// Rank-compresses each axis onto {0,...,2n-1}. Equal coordinates stay equal and strict
/// order is preserved, so every pairwise disjointness relation survives.
inline MisrInstance normalize_instance(const MisrInstance& inst) {
  require_valid(inst);
  auto ranks = [&](auto lo, auto hi) {
    std::vector<Coord> vals;
    vals.reserve(2 * inst.size());
    for (const auto& r : inst.rects) {
      vals.push_back(r.*lo);
      vals.push_back(r.*hi);
    }
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    return vals;
  };
  const auto xs = ranks(&Rect::x1, &Rect::x2);
  const auto ys = ranks(&Rect::y1, &Rect::y2);
  auto rank_of = [](const std::vector<Coord>& v, Coord c) {
    return static_cast<Coord>(std::lower_bound(v.begin(), v.end(), c) - v.begin());
  };
  MisrInstance out;
  out.rects.reserve(inst.size());
  for (const auto& r : inst.rects)
    out.rects.push_back({rank_of(xs, r.x1), rank_of(ys, r.y1), rank_of(xs, r.x2), rank_of(ys, r.y2)});
  return out;
}

inline bool validate_misr_solution(const MisrInstance& inst, std::span<const Index> selected) {
  for (Index i : selected)
    if (i >= inst.size()) throw std::out_of_range("solution index " + std::to_string(i) + " out of range");
  std::set<Index> seen;
  for (Index i : selected)
    if (!seen.insert(i).second) return false;
  for (std::size_t a = 0; a < selected.size(); ++a)
    for (std::size_t b = a + 1; b < selected.size(); ++b)
      if (!rects_disjoint(inst[selected[a]], inst[selected[b]])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Knapsack side

struct Item {
  Coord w = 1, h = 1;
  friend bool operator==(const Item&, const Item&) = default;
};

struct Placement {
  Index item = 0;
  Coord x = 0, y = 0;
  bool rotated = false;
  friend bool operator==(const Placement&, const Placement&) = default;
};

inline Coord eff_width(const Item& it, bool rotated) { return rotated ? it.h : it.w; }
inline Coord eff_height(const Item& it, bool rotated) { return rotated ? it.w : it.h; }

/// Closed-form footprint of a placement as an open rectangle.
inline Rect footprint(const Placement& p, const Item& it) {
  return {p.x, p.y, p.x + eff_width(it, p.rotated), p.y + eff_height(it, p.rotated)};
}

struct Packing {
  Coord N = 0;
  std::vector<Placement> placements;

  std::size_t size() const { return placements.size(); }
};

struct KnapsackInstance {
  Coord N = 0;
  std::vector<Item> items;
  bool rotations = true;
};

enum class ViolationKind { bad_index, duplicate_item, bad_dimensions, out_of_bounds, overlap };

inline const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::bad_index: return "bad_index";
    case ViolationKind::duplicate_item: return "duplicate_item";
    case ViolationKind::bad_dimensions: return "bad_dimensions";
    case ViolationKind::out_of_bounds: return "out_of_bounds";
    case ViolationKind::overlap: return "overlap";
  }
  return "unknown";
}

/// `first`/`second` are placement positions (not item ids); `second` is only meaningful for overlaps.
struct Violation {
  ViolationKind kind;
  Index first = 0;
  Index second = 0;

  std::string describe() const {
    std::string s = to_string(kind);
    s += " placement " + std::to_string(first);
    if (kind == ViolationKind::overlap) s += " vs placement " + std::to_string(second);
    return s;
  }
};

struct ValidationResult {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

inline ValidationResult validate_packing(const Packing& p, std::span<const Item> items) {
  ValidationResult res;
  std::map<Index, Index> first_use;
  std::vector<bool> usable(p.size(), false);
  for (Index k = 0; k < p.size(); ++k) {
    const auto& pl = p.placements[k];
    if (pl.item >= items.size()) {
      res.violations.push_back({ViolationKind::bad_index, k, k});
      continue;
    }
    if (auto [it, fresh] = first_use.emplace(pl.item, k); !fresh)
      res.violations.push_back({ViolationKind::duplicate_item, k, it->second});
    const Item& it = items[pl.item];
    if (it.w < 1 || it.h < 1 || it.w > p.N || it.h > p.N) {
      res.violations.push_back({ViolationKind::bad_dimensions, k, k});
      continue;
    }
    const Rect r = footprint(pl, it);
    if (r.x1 < 0 || r.y1 < 0 || r.x2 > p.N || r.y2 > p.N) res.violations.push_back({ViolationKind::out_of_bounds, k, k});
    usable[k] = true;
  }
  for (Index a = 0; a < p.size(); ++a) {
    if (!usable[a]) continue;
    const Rect ra = footprint(p.placements[a], items[p.placements[a].item]);
    for (Index b = a + 1; b < p.size(); ++b) {
      if (!usable[b]) continue;
      if (!rects_disjoint(ra, footprint(p.placements[b], items[p.placements[b].item])))
        res.violations.push_back({ViolationKind::overlap, a, b});
    }
  }
  return res;
}

/// Item ids used by a packing, sorted.
inline IndexSet packed_items(const Packing& p) {
  IndexSet s;
  for (const auto& pl : p.placements) s.push_back(pl.item);
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace pasrect
