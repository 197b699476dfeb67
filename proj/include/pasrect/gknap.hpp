#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pasrect/geometry.hpp"
#include "pasrect/oracles.hpp"
#include "pasrect/planar.hpp"
#include "pasrect/rational.hpp"

namespace pasrect::gknap {

inline void require_items(std::span<const Item> items, Coord N) {
  if (N < 1) throw std::invalid_argument("knapsack side must be positive");
  for (Index i = 0; i < items.size(); ++i)
    if (items[i].w < 1 || items[i].h < 1 || items[i].w > N || items[i].h > N)
      throw std::invalid_argument("item " + std::to_string(i) + " does not fit the knapsack side");
}

inline Coord short_side(const Item& it) { return std::min(it.w, it.h); }

/// ceil(N / k^e); items with h >= this value satisfy h >= (1/k)^e N.
inline Wide ceil_threshold(Coord N, std::int64_t k, std::int64_t e) {
  const Wide p = saturating_pow(k, e);
  return ceil_div(N, p);
}

/// floor(N / k^e), the integral length used for gaps, deletion rectangles and strips.
inline Coord floor_threshold(Coord N, std::int64_t k, std::int64_t e) {
  return static_cast<Coord>(floor_div(N, saturating_pow(k, e)));
}

inline std::int64_t max_band(const Ratio& eps) { return ceil_over(8, eps); }

// ---------------------------------------------------------------------------
// Classification

struct Classification {
  std::int64_t B = 1;
  IndexSet large;      // h >= N / k^B
  IndexSet thin;       // h <  N / k^(B+2)
  IndexSet discarded;  // the band I(B)
};

/// Classification for a fixed B using the short side of every item.
inline Classification classify_for(std::span<const Item> items, Coord N, std::int64_t k, std::int64_t B) {
  if (k < 1 || B < 1) throw std::invalid_argument("k and B must be positive");
  Classification c;
  c.B = B;
  const Wide big = ceil_threshold(N, k, B), small = ceil_threshold(N, k, B + 2);
  for (Index i = 0; i < items.size(); ++i) {
    const Wide h = short_side(items[i]);
    if (h >= big)
      c.large.push_back(i);
    else if (h < small)
      c.thin.push_back(i);
    else
      c.discarded.push_back(i);
  }
  return c;
}

/// One classification per B in {1..ceil(8/eps)}.
inline std::vector<Classification> classify_all(std::span<const Item> items, Coord N, std::int64_t k,
                                                 const Ratio& eps) {
  if (!eps.in_unit_interval()) throw std::invalid_argument("epsilon must lie in (0,1]");
  std::vector<Classification> out;
  for (std::int64_t B = 1; B <= max_band(eps); ++B) out.push_back(classify_for(items, N, k, B));
  return out;
}

/// B minimizing |I(B) cap reference|, ties to the smallest B.
inline Classification classify_items(std::span<const Item> items, Coord N, std::int64_t k, const Ratio& eps,
                                     std::span<const Index> reference) {
  std::optional<Classification> best;
  std::size_t best_hits = 0;
  const std::set<Index> ref(reference.begin(), reference.end());
  for (auto& c : classify_all(items, N, k, eps)) {
    std::size_t hits = 0;
    for (Index i : c.discarded) hits += ref.count(i);
    if (!best || hits < best_hits) {
      best_hits = hits;
      best = std::move(c);
    }
  }
  return *best;
}

// ---------------------------------------------------------------------------
// Visibility graph

struct Arc {
  Index from = 0, to = 0;  // vertex ids; `to` lies above `from`
  Coord witness_x2 = 0;    // doubled x of the vertical witness segment
  Coord gap = 0;
};

struct VisibilityGraph {
  std::vector<Index> vertices;  // placement positions in the source packing
  std::vector<Rect> boxes;      // footprints, same order
  std::vector<Arc> arcs;
  Coord max_gap = 0;

  std::size_t size() const { return vertices.size(); }

  AdjList adjacency() const {
    AdjList adj(size());
    for (const auto& a : arcs) {
      adj[a.from].push_back(a.to);
      adj[a.to].push_back(a.from);
    }
    for (auto& l : adj) {
      std::sort(l.begin(), l.end());
      l.erase(std::unique(l.begin(), l.end()), l.end());
    }
    return adj;
  }

  /// Items as boxes, arcs as their vertical witness segments (doubled coordinates).
  EmbeddedGraph embedding() const {
    EmbeddedGraph g;
    g.num_vertices = size();
    for (const auto& b : boxes) g.drawings.push_back({{Box{2 * b.x1, 2 * b.y1, 2 * b.x2, 2 * b.y2}}, {}});
    for (const auto& a : arcs)
      g.edges.push_back({a.from, a.to, Segment{{a.witness_x2, 2 * boxes[a.from].y2}, {a.witness_x2, 2 * boxes[a.to].y1}}});
    return g;
  }
};

namespace detail {

/// Doubled x of the first blocker-free elementary interval for a vertical segment between
/// y = lo and y = hi over the x-range (x1, x2).
inline std::optional<Coord> find_witness(std::span<const Rect> boxes, Index a, Index b, Coord x1, Coord x2, Coord lo,
                                         Coord hi) {
  std::vector<Coord> edges{x1, x2};
  for (const auto& r : boxes) {
    if (r.x1 > x1 && r.x1 < x2) edges.push_back(r.x1);
    if (r.x2 > x1 && r.x2 < x2) edges.push_back(r.x2);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
    const Coord xm = edges[e] + edges[e + 1];
    bool blocked = false;
    for (Index j = 0; j < boxes.size() && !blocked; ++j) {
      if (j == a || j == b) continue;
      const Rect& r = boxes[j];
      blocked = 2 * r.x1 < xm && xm < 2 * r.x2 && r.y1 < hi && r.y2 > lo;
    }
    if (!blocked) return xm;
  }
  return std::nullopt;
}

}  // namespace detail

/// Arcs i -> i' for items whose x-ranges overlap, with i' at or above i's top and an empty
/// vertical segment of length <= max_gap between them.
inline VisibilityGraph build_visibility_graph(const Packing& p, std::span<const Item> items, std::span<const Index> positions,
                                              Coord max_gap) {
  VisibilityGraph vg;
  vg.max_gap = max_gap;
  vg.vertices.assign(positions.begin(), positions.end());
  for (Index pos : positions) vg.boxes.push_back(footprint(p.placements.at(pos), items[p.placements[pos].item]));
  for (Index a = 0; a < vg.size(); ++a)
    for (Index b = 0; b < vg.size(); ++b) {
      if (a == b) continue;
      const Rect &lo = vg.boxes[a], &hi = vg.boxes[b];
      if (hi.y1 < lo.y2) continue;
      const Coord gap = hi.y1 - lo.y2;
      if (gap > max_gap) continue;
      const Coord x1 = std::max(lo.x1, hi.x1), x2 = std::min(lo.x2, hi.x2);
      if (x1 >= x2) continue;
      if (auto w = detail::find_witness(vg.boxes, a, b, x1, x2, lo.y2, hi.y1)) vg.arcs.push_back({a, b, *w, gap});
    }
  return vg;
}

inline VisibilityGraph build_visibility_graph(const Packing& p, std::span<const Item> items, Coord max_gap) {
  IndexSet all(p.size());
  std::iota(all.begin(), all.end(), 0);
  return build_visibility_graph(p, items, all, max_gap);
}

/// Independent re-check of an arc: length bound, x inside both items, no other item crossed.
inline bool arc_valid(const VisibilityGraph& vg, const Arc& a) {
  const Rect &lo = vg.boxes[a.from], &hi = vg.boxes[a.to];
  if (hi.y1 < lo.y2 || hi.y1 - lo.y2 != a.gap || a.gap > vg.max_gap) return false;
  const Coord x = a.witness_x2;
  if (!(2 * lo.x1 < x && x < 2 * lo.x2 && 2 * hi.x1 < x && x < 2 * hi.x2)) return false;
  const Segment s{{x, 2 * lo.y2}, {x, 2 * hi.y1}};
  for (Index j = 0; j < vg.size(); ++j) {
    if (j == a.from || j == a.to) continue;
    const Rect& r = vg.boxes[j];
    const bool meets_interior = 2 * r.x1 < x && x < 2 * r.x2 && 2 * r.y1 < s.b.y && 2 * r.y2 > s.a.y;
    if (meets_interior) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Push up

/// Moves items up until a fixpoint; items with higher tops go first in every sweep.
inline Packing push_up(const Packing& in, std::span<const Item> items) {
  Packing p = in;
  const std::size_t m = p.size();
  for (bool moved = true; moved;) {
    moved = false;
    std::vector<Index> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
      return footprint(p.placements[a], items[p.placements[a].item]).y2 >
             footprint(p.placements[b], items[p.placements[b].item]).y2;
    });
    for (Index a : order) {
      const Rect ra = footprint(p.placements[a], items[p.placements[a].item]);
      Coord limit = p.N;
      for (Index b = 0; b < m; ++b) {
        if (b == a) continue;
        const Rect rb = footprint(p.placements[b], items[p.placements[b].item]);
        if (open_intervals_overlap(ra.x1, ra.x2, rb.x1, rb.x2) && rb.y1 >= ra.y2) limit = std::min(limit, rb.y1);
      }
      const Coord ny = limit - (ra.y2 - ra.y1);
      if (ny > p.placements[a].y) {
        p.placements[a].y = ny;
        moved = true;
      }
    }
  }
  return p;
}

// ---------------------------------------------------------------------------
// Separating path

/// Vertex path from the lowest survivor meeting the bottom strip (0,N)x(0,N/k^B) to a survivor
/// closer than N/k^B to the top edge; nullopt iff no survivor meets the strip.
inline std::optional<std::vector<Index>> find_separating_path(const VisibilityGraph& vg, std::span<const Index> survivors,
                                                              std::int64_t k, std::int64_t B, Coord N) {
  const Wide reach = ceil_threshold(N, k, B);  // y < reach  <=>  y * k^B < N
  std::vector<char> alive(vg.size(), 0);
  for (Index v : survivors) alive.at(v) = 1;
  std::optional<Index> start;
  for (Index v = 0; v < vg.size(); ++v)
    if (alive[v] && Wide(vg.boxes[v].y1) < reach && (!start || vg.boxes[v].y1 < vg.boxes[*start].y1)) start = v;
  if (!start) return std::nullopt;

  std::vector<std::vector<Index>> out(vg.size());
  for (const auto& a : vg.arcs)
    if (alive[a.from] && alive[a.to]) out[a.from].push_back(a.to);
  std::vector<long> parent(vg.size(), -2);
  std::deque<Index> queue{*start};
  parent[*start] = -1;
  while (!queue.empty()) {
    const Index v = queue.front();
    queue.pop_front();
    if (Wide(N - vg.boxes[v].y2) < reach) {
      std::vector<Index> path;
      for (long u = static_cast<long>(v); u >= 0; u = parent[static_cast<Index>(u)]) path.push_back(static_cast<Index>(u));
      std::reverse(path.begin(), path.end());
      return path;
    }
    for (Index w : out[v])
      if (parent[w] == -2) {
        parent[w] = static_cast<long>(v);
        queue.push_back(w);
      }
  }
  throw std::logic_error("no separating path although an item meets the bottom strip");
}

// ---------------------------------------------------------------------------
// Strip freeing

enum class StripBranch { trivial, thin_stack, no_path, path };

inline const char* to_string(StripBranch b) {
  switch (b) {
    case StripBranch::trivial: return "trivial";
    case StripBranch::thin_stack: return "thin-stack";
    case StripBranch::no_path: return "no-path";
    case StripBranch::path: return "path";
  }
  return "unknown";
}

struct FreeStripOptions {
  SeparatorOptions separator;
  bool enforce_k_floor = true;
  std::optional<std::int64_t> k_floor;  // default ceil(1/eps^3)
};

struct FreeStripResult {
  Packing packing;
  StripBranch branch = StripBranch::trivial;
  std::int64_t B = 1;
  Coord strip = 0;  // freed height floor(N / k^(B+1))
  Coord unit = 0;   // floor(N / k^B): gap bound, deletion-rectangle width, shift
  std::size_t input_size = 0;
  std::size_t band_removed = 0;
  std::size_t separator_removed = 0;
  std::size_t path_length = 0;  // K
  std::size_t extra_deleted = 0;
  std::size_t separator_cap = 0;
  std::vector<Index> path_items;
  std::vector<Index> extra_items;
  std::vector<Rect> deletion_rects;

  std::size_t loss() const { return band_removed + separator_removed + path_length + extra_deleted; }
};

class StripNotFreed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::int64_t default_k_floor(const Ratio& eps) {
  return static_cast<std::int64_t>(ceil_div(Wide(eps.den) * eps.den * eps.den, Wide(eps.num) * eps.num * eps.num));
}

namespace detail {

/// Stack items (short side vertical) downward from y = top at x = 0.
inline void stack_below(Packing& p, std::span<const Item> items, std::span<const Index> ids, Coord top) {
  Coord cursor = top;
  for (Index id : ids) {
    const bool rot = items[id].h > items[id].w;
    const Coord h = eff_height(items[id], rot);
    cursor -= h;
    p.placements.push_back({id, 0, cursor, rot});
  }
}

inline bool meets_open(const Rect& a, const Rect& b) {
  return open_intervals_overlap(a.x1, a.x2, b.x1, b.x2) && open_intervals_overlap(a.y1, a.y2, b.y1, b.y2);
}

}  // namespace detail

/// Transforms a feasible packing into one avoiding (0,N)x(0, floor(N/k^(B+1))), deleting few
/// items. Every deletion is counted in the result.
inline FreeStripResult free_strip(const Packing& in, std::span<const Item> items, std::int64_t k, const Ratio& eps,
                                  const FreeStripOptions& opts = {}) {
  if (!eps.in_unit_interval()) throw std::invalid_argument("epsilon must lie in (0,1]");
  if (k < 2) throw std::invalid_argument("k must be at least 2");
  if (opts.enforce_k_floor && k < opts.k_floor.value_or(default_k_floor(eps)))
    throw std::domain_error("k below the floor for strip freeing; solve exactly instead");
  require_items(items, in.N);
  if (!validate_packing(in, items).ok()) throw std::invalid_argument("input packing is infeasible");

  const Coord N = in.N;
  FreeStripResult res;
  res.input_size = in.size();
  const IndexSet ids = packed_items(in);
  const auto cls = classify_items(items, N, k, eps, ids);
  res.B = cls.B;
  res.unit = floor_threshold(N, k, cls.B);
  res.strip = floor_threshold(N, k, cls.B + 1);
  if (res.strip == 0) {
    res.packing = in;
    return res;
  }
  const std::set<Index> large(cls.large.begin(), cls.large.end()), thin_set(cls.thin.begin(), cls.thin.end());
  IndexSet thin;
  for (Index id : ids)
    if (thin_set.count(id)) thin.push_back(id);

  auto finish = [&](Packing out) {
    const auto v = validate_packing(out, items);
    if (!v.ok()) throw StripNotFreed("result infeasible: " + v.violations.front().describe());
    for (const auto& pl : out.placements)
      if (pl.y < res.strip) throw StripNotFreed("item " + std::to_string(pl.item) + " meets the bottom strip");
    res.packing = std::move(out);
    return res;
  };

  if (thin.size() >= static_cast<std::size_t>(k)) {
    res.branch = StripBranch::thin_stack;
    Packing out{N, {}};
    detail::stack_below(out, items, std::span<const Index>(thin).first(static_cast<std::size_t>(k)), N);
    res.band_removed = in.size() - static_cast<std::size_t>(k);
    return finish(out);
  }

  // large items only, in placement order
  Packing work{N, {}};
  for (const auto& pl : in.placements) {
    if (large.count(pl.item))
      work.placements.push_back(pl);
    else if (!thin_set.count(pl.item))
      ++res.band_removed;
  }
  {
    const auto vg = build_visibility_graph(work, items, res.unit);
    const auto div = apply_separator(vg.adjacency(), eps, opts.separator);
    res.separator_cap = div.cap;
    res.separator_removed = div.division.removed.size();
    Packing kept{N, {}};
    std::vector<char> drop(work.size(), 0);
    for (Index v : div.division.removed) drop[v] = 1;
    for (Index i = 0; i < work.size(); ++i)
      if (!drop[i]) kept.placements.push_back(work.placements[i]);
    work = push_up(kept, items);
  }

  const Wide reach = ceil_threshold(N, k, cls.B);
  bool blocked = false;
  for (const auto& pl : work.placements) blocked = blocked || Wide(pl.y) < reach;
  if (!blocked) {
    res.branch = StripBranch::no_path;
    Coord low = N;
    for (const auto& pl : work.placements) low = std::min(low, pl.y);
    detail::stack_below(work, items, thin, low);
    return finish(work);
  }

  res.branch = StripBranch::path;
  const auto vg = build_visibility_graph(work, items, res.unit);
  IndexSet all(vg.size());
  std::iota(all.begin(), all.end(), 0);
  const auto path = find_separating_path(vg, all, k, cls.B, N);
  const Coord D = res.unit;
  std::vector<Rect> wall;  // pieces from bottom to top, closed
  {
    const Rect first = vg.boxes[path->front()];
    const Rect last = vg.boxes[path->back()];
    res.deletion_rects.push_back({first.x1, 0, first.x1 + D, first.y1});
    for (std::size_t l = 0; l + 1 < path->size(); ++l) {
      const Rect a = vg.boxes[(*path)[l]], b = vg.boxes[(*path)[l + 1]];
      Coord x_w2 = 0;
      for (const auto& arc : vg.arcs)
        if (arc.from == (*path)[l] && arc.to == (*path)[l + 1]) x_w2 = arc.witness_x2;
      const Coord X = std::clamp<Coord>(static_cast<Coord>(ceil_div(x_w2 - 2 * D, 2)), 0, N - D);
      res.deletion_rects.push_back({X, a.y2, X + D, b.y1});
    }
    res.deletion_rects.push_back({last.x1, last.y2, last.x1 + D, N});
    for (std::size_t l = 0; l < path->size(); ++l) {
      wall.push_back(res.deletion_rects[l]);
      wall.push_back(vg.boxes[(*path)[l]]);
    }
    wall.push_back(res.deletion_rects.back());
  }
  res.path_length = path->size();
  std::vector<char> gone(vg.size(), 0);
  for (Index v : *path) {
    gone[v] = 1;
    res.path_items.push_back(work.placements[vg.vertices[v]].item);
  }
  for (Index v = 0; v < vg.size(); ++v) {
    if (gone[v]) continue;
    for (const auto& r : res.deletion_rects)
      if (r.x1 < r.x2 && r.y1 < r.y2 && detail::meets_open(vg.boxes[v], r)) {
        gone[v] = 1;
        res.extra_items.push_back(work.placements[vg.vertices[v]].item);
        break;
      }
  }
  res.extra_deleted = res.extra_items.size();
  if (res.extra_deleted > 4 * (res.path_length + 1))
    throw StripNotFreed("deletion rectangles hit more than four items each");

  Packing out{N, {}};
  for (Index v = 0; v < vg.size(); ++v) {
    if (gone[v]) continue;
    const Rect& r = vg.boxes[v];
    const Coord ym2 = r.y1 + r.y2;
    std::optional<bool> left;
    for (const auto& piece : wall) {
      if (piece.y1 >= piece.y2 || 2 * piece.y1 > ym2 || ym2 > 2 * piece.y2) continue;
      if (r.x2 <= piece.x1) {
        left = true;
        break;
      }
      if (r.x1 >= piece.x2) {
        left = false;
        break;
      }
    }
    if (!left) throw StripNotFreed("item could not be placed on either side of the wall");
    Placement pl = work.placements[vg.vertices[v]];
    if (*left) pl.x += D;
    // rotate by 90 degrees: (x, y) -> (N - y, x)
    const Rect f = footprint(pl, items[pl.item]);
    out.placements.push_back({pl.item, N - f.y2, f.x1, !pl.rotated});
  }
  Coord low = N;
  for (const auto& pl : out.placements) low = std::min(low, pl.y);
  detail::stack_below(out, items, thin, low);
  return finish(out);
}

// ---------------------------------------------------------------------------
// Rounding and inflation

/// Coordinates scaled by M = k' * k~ so the rounding unit N/M becomes the integer N.
struct RoundedPlacement {
  Index item = 0;
  Wide x = 0, y = 0;  // scaled
  Wide w = 0, h = 0;  // scaled effective dimensions after rounding
  bool rotated = false;
};

struct RoundedPacking {
  Coord N = 0;
  Wide scale = 1;  // M
  std::vector<RoundedPlacement> placements;
};

/// ceil(v * M / N): index j of the rounded value j * N/M.
inline Wide rounding_class(Coord v, Wide M, Coord N) { return ceil_div(Wide(v) * M, N); }

/// Push-down inflation: every item's vertical effective side grows to the next multiple of N/M,
/// moving everything below it down by the same amount. Top to bottom order.
inline RoundedPacking inflate_packing(const Packing& p, std::span<const Item> items, std::int64_t k_prime,
                                      std::int64_t k_tilde) {
  if (k_prime < 1 || k_tilde < 1) throw std::invalid_argument("k' and k~ must be positive");
  if (p.size() > static_cast<std::size_t>(k_prime)) throw std::invalid_argument("packing has more than k' items");
  if (!validate_packing(p, items).ok()) throw std::invalid_argument("input packing is infeasible");
  const Coord N = p.N;
  for (const auto& pl : p.placements)
    if (Wide(pl.y) * k_tilde < N) throw std::invalid_argument("packing meets the bottom strip of height N/k~");
  const Wide M = Wide(k_prime) * k_tilde;
  if (M > (Wide(1) << 60)) throw std::invalid_argument("k' * k~ too large for exact scaled coordinates");
  RoundedPacking rp;
  rp.N = N;
  rp.scale = M;
  for (const auto& pl : p.placements) {
    const Item& it = items[pl.item];
    rp.placements.push_back({pl.item, Wide(pl.x) * M, Wide(pl.y) * M, Wide(eff_width(it, pl.rotated)) * M,
                             Wide(eff_height(it, pl.rotated)) * M, pl.rotated});
  }
  std::vector<Index> order(rp.placements.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return rp.placements[a].y > rp.placements[b].y; });
  for (Index a : order) {
    auto& cur = rp.placements[a];
    const Item& it = items[cur.item];
    const Wide rounded = rounding_class(eff_height(it, cur.rotated), M, N) * N;
    const Wide delta = rounded - cur.h;  // < one unit
    if (delta == 0) continue;
    const Wide bottom = cur.y;
    for (auto& o : rp.placements)
      if (&o != &cur && o.y + o.h <= bottom) o.y -= delta;
    cur.y -= delta;
    cur.h = rounded;
  }
  return rp;
}

inline bool rounded_packing_feasible(const RoundedPacking& rp) {
  const Wide side = Wide(rp.N) * rp.scale;
  for (std::size_t a = 0; a < rp.placements.size(); ++a) {
    const auto& p = rp.placements[a];
    if (p.x < 0 || p.y < 0 || p.x + p.w > side || p.y + p.h > side) return false;
    for (std::size_t b = a + 1; b < rp.placements.size(); ++b) {
      const auto& q = rp.placements[b];
      if (p.x < q.x + q.w && q.x < p.x + p.w && p.y < q.y + q.h && q.y < p.y + p.h) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Kernel and restricted enumeration

struct KernelReport {
  IndexSet kernel;
  std::int64_t k_prime = 0;
  Wide k_tilde = 0;
  Wide scale = 0;  // k' * k~ (saturated)
  std::size_t height_classes = 0;
  std::size_t width_classes = 0;
};

/// Keeps the k' narrowest items of each rounded-height class and the k' lowest items of each
/// rounded-width class. Ties go to the smaller index.
inline KernelReport prune_to_kernel(std::span<const Item> items, Coord N, std::int64_t k_prime, Wide k_tilde) {
  if (k_prime < 1 || k_tilde < 1) throw std::invalid_argument("k' and k~ must be positive");
  require_items(items, N);
  KernelReport rep;
  rep.k_prime = k_prime;
  rep.k_tilde = k_tilde;
  const Wide M = k_tilde >= kWideSaturation / k_prime ? kWideSaturation : Wide(k_prime) * k_tilde;
  rep.scale = M;
  // once M >= N the classes are exactly the distinct values
  auto key = [&](Coord v) { return M >= N ? Wide(v) : rounding_class(v, M, N); };
  std::map<Wide, std::vector<Index>> by_h, by_w;
  for (Index i = 0; i < items.size(); ++i) {
    by_h[key(items[i].h)].push_back(i);
    by_w[key(items[i].w)].push_back(i);
  }
  rep.height_classes = by_h.size();
  rep.width_classes = by_w.size();
  std::set<Index> keep;
  auto take = [&](std::vector<Index>& cls, auto dim) {
    std::stable_sort(cls.begin(), cls.end(), [&](Index a, Index b) { return dim(items[a]) < dim(items[b]); });
    for (std::size_t j = 0; j < cls.size() && j < static_cast<std::size_t>(k_prime); ++j) keep.insert(cls[j]);
  };
  for (auto& [j, cls] : by_h) take(cls, [](const Item& it) { return it.w; });
  for (auto& [j, cls] : by_w) take(cls, [](const Item& it) { return it.h; });
  rep.kernel.assign(keep.begin(), keep.end());
  return rep;
}

struct RestrictedResult {
  std::optional<Packing> packing;
  KernelReport kernel;
  std::size_t subsets_tried = 0;
};

inline constexpr std::int64_t kRestrictedLimit = 6;

/// Enumerates k'-subsets of the pruned set in lexicographic order and returns the first that
/// packs into the full N x N knapsack with rotations.
inline RestrictedResult solve_restricted(std::span<const Item> items, Coord N, std::int64_t k_prime, Wide k_tilde,
                                         std::int64_t limit = kRestrictedLimit,
                                         const oracle::OracleBudget& budget = {}) {
  if (k_prime > limit) throw std::invalid_argument("k' exceeds the exhaustive search limit");
  RestrictedResult res;
  res.kernel = prune_to_kernel(items, N, k_prime, k_tilde);
  const auto& pool = res.kernel.kernel;
  const auto kp = static_cast<std::size_t>(k_prime);
  if (pool.size() < kp) return res;
  oracle::OracleBudget b = budget;
  b.max_solution_size = std::max<std::size_t>(b.max_solution_size, kp);
  const Wide cap = Wide(N) * N;
  std::vector<std::size_t> idx(kp);
  std::iota(idx.begin(), idx.end(), 0);
  for (;;) {
    Wide area = 0;
    std::vector<Item> sub;
    for (auto j : idx) {
      sub.push_back(items[pool[j]]);
      area += Wide(items[pool[j]].w) * items[pool[j]].h;
    }
    if (area <= cap) {
      ++res.subsets_tried;
      if (auto pk = oracle::packing_feasible_exact(sub, N, N, true, b)) {
        Packing out{N, {}};
        for (auto pl : *pk) {
          pl.item = pool[idx[pl.item]];
          out.placements.push_back(pl);
        }
        res.packing = std::move(out);
        return res;
      }
    }
    std::size_t pos = kp;
    while (pos > 0 && idx[pos - 1] == pool.size() - kp + pos - 1) --pos;
    if (pos == 0) break;
    ++idx[pos - 1];
    for (std::size_t j = pos; j < kp; ++j) idx[j] = idx[j - 1] + 1;
  }
  return res;
}

// ---------------------------------------------------------------------------
// PAS and kernel

/// k^(ceil(8/eps) + 1), saturating.
inline Wide default_k_tilde(std::int64_t k, const Ratio& eps) { return saturating_pow(k, max_band(eps) + 1); }

enum class Verdict { solution, opt_below_k };

struct PasResult {
  Verdict verdict = Verdict::opt_below_k;
  Packing packing;
  std::string branch;  // "cardinality", "area", "restricted"
  std::int64_t k_prime = 0;
  Wide k_tilde = 0;
  bool theory_knobs = false;
  std::size_t kernel_size = 0;
};

inline PasResult pas_2dkr(std::span<const Item> items, Coord N, std::int64_t k, const Ratio& eps,
                          std::optional<Wide> k_tilde = {}, std::int64_t limit = kRestrictedLimit) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (!eps.in_unit_interval()) throw std::invalid_argument("epsilon must lie in (0,1]");
  require_items(items, N);
  PasResult res;
  res.packing.N = N;
  res.theory_knobs = !k_tilde.has_value();
  res.k_tilde = k_tilde.value_or(default_k_tilde(k, eps));
  res.k_prime = ceil_one_minus(eps, k);
  if (static_cast<std::int64_t>(items.size()) < k) {
    res.branch = "cardinality";
    return res;
  }
  std::vector<Wide> areas;
  for (const auto& it : items) areas.push_back(Wide(it.w) * it.h);
  std::sort(areas.begin(), areas.end());
  if (std::accumulate(areas.begin(), areas.begin() + k, Wide(0)) > Wide(N) * N) {
    res.branch = "area";
    return res;
  }
  res.branch = "restricted";
  if (res.k_prime == 0) {
    res.verdict = Verdict::solution;
    return res;
  }
  auto r = solve_restricted(items, N, res.k_prime, res.k_tilde, limit);
  res.kernel_size = r.kernel.kernel.size();
  if (r.packing) {
    res.verdict = Verdict::solution;
    res.packing = std::move(*r.packing);
  }
  return res;
}

/// Pruned set of size at most 2 k'^2 k~. Inputs already within that bound are returned whole.
inline KernelReport kernel_2dkr(std::span<const Item> items, Coord N, std::int64_t k, const Ratio& eps,
                                std::optional<Wide> k_tilde = {}) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  const std::int64_t kp = std::max<std::int64_t>(ceil_one_minus(eps, k), 1);
  const Wide kt = k_tilde.value_or(default_k_tilde(k, eps));
  const Wide bound = kt >= kWideSaturation / (2 * kp * kp) ? kWideSaturation : 2 * Wide(kp) * kp * kt;
  if (Wide(items.size()) <= bound) {
    require_items(items, N);
    KernelReport rep;
    rep.k_prime = kp;
    rep.k_tilde = kt;
    rep.scale = kt >= kWideSaturation / kp ? kWideSaturation : Wide(kp) * kt;
    rep.kernel.resize(items.size());
    std::iota(rep.kernel.begin(), rep.kernel.end(), 0);
    return rep;
  }
  return prune_to_kernel(items, N, kp, kt);
}

}  // namespace pasrect::gknap
