#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pasrect/geometry.hpp"
#include "pasrect/rational.hpp"

namespace pasrect {

// Drawings use doubled integer coordinates so that half-integral grid lines stay exact.
struct Point {
  Coord x = 0, y = 0;
  friend bool operator==(const Point&, const Point&) = default;
};

/// Closed axis-parallel box; may be degenerate (a segment or a point).
struct Box {
  Coord x1 = 0, y1 = 0, x2 = 0, y2 = 0;

  bool contains(const Point& p) const { return x1 <= p.x && p.x <= x2 && y1 <= p.y && p.y <= y2; }
  friend bool operator==(const Box&, const Box&) = default;
};

struct Segment {
  Point a, b;
  bool degenerate() const { return a == b; }
};

/// A vertex is drawn as a connected region: one or more boxes joined by segments.
struct VertexDrawing {
  std::vector<Box> boxes;
  std::vector<Segment> segments;
};

struct Edge {
  Index u = 0, v = 0;
  std::optional<Segment> drawing;
};

struct EmbeddedGraph {
  std::size_t num_vertices = 0;
  std::vector<Edge> edges;
  std::vector<VertexDrawing> drawings;  // empty when the graph carries no embedding

  std::vector<std::vector<Index>> adjacency() const {
    std::vector<std::vector<Index>> adj(num_vertices);
    for (const auto& e : edges) {
      adj[e.u].push_back(e.v);
      adj[e.v].push_back(e.u);
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());
    return adj;
  }

  bool has_edge(Index u, Index v) const {
    for (const auto& e : edges)
      if ((e.u == u && e.v == v) || (e.u == v && e.v == u)) return true;
    return false;
  }
};

using AdjList = std::vector<std::vector<Index>>;

class NonPlanarError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Exact segment predicates

namespace detail {

inline Wide cross(const Point& o, const Point& a, const Point& b) {
  return Wide(a.x - o.x) * Wide(b.y - o.y) - Wide(a.y - o.y) * Wide(b.x - o.x);
}

inline int sign(Wide v) { return (v > 0) - (v < 0); }

inline bool on_segment(const Segment& s, const Point& p) {
  return cross(s.a, s.b, p) == 0 && std::min(s.a.x, s.b.x) <= p.x && p.x <= std::max(s.a.x, s.b.x) &&
         std::min(s.a.y, s.b.y) <= p.y && p.y <= std::max(s.a.y, s.b.y);
}

/// Rational point (x/den, y/den) with den > 0.
struct RatPoint {
  Wide x, y, den;
};

inline bool box_contains(const Box& b, const RatPoint& p) {
  return Wide(b.x1) * p.den <= p.x && p.x <= Wide(b.x2) * p.den && Wide(b.y1) * p.den <= p.y &&
         p.y <= Wide(b.y2) * p.den;
}

inline bool segment_contains(const Segment& s, const RatPoint& p) {
  // p on s <=> collinear and within the bounding box
  const Wide ax = Wide(s.a.x) * p.den, ay = Wide(s.a.y) * p.den;
  const Wide bx = Wide(s.b.x) * p.den, by = Wide(s.b.y) * p.den;
  // cross((b-a),(p-a)) scaled by den^2; magnitudes stay far below 2^127 for desk-scale coordinates
  const Wide c = (bx - ax) * (p.y - ay) - (by - ay) * (p.x - ax);
  if (c != 0) return false;
  return std::min(ax, bx) <= p.x && p.x <= std::max(ax, bx) && std::min(ay, by) <= p.y && p.y <= std::max(ay, by);
}

}  // namespace detail

inline bool segments_intersect(const Segment& s, const Segment& t) {
  using detail::cross;
  using detail::on_segment;
  using detail::sign;
  const int d1 = sign(cross(t.a, t.b, s.a));
  const int d2 = sign(cross(t.a, t.b, s.b));
  const int d3 = sign(cross(s.a, s.b, t.a));
  const int d4 = sign(cross(s.a, s.b, t.b));
  if (!s.degenerate() && !t.degenerate() && d1 * d2 < 0 && d3 * d4 < 0) return true;
  return on_segment(t, s.a) || on_segment(t, s.b) || on_segment(s, t.a) || on_segment(s, t.b);
}

/// Closed segment vs closed box.
inline bool segment_meets_box(const Segment& s, const Box& b) {
  if (std::max(s.a.x, s.b.x) < b.x1 || std::min(s.a.x, s.b.x) > b.x2) return false;
  if (std::max(s.a.y, s.b.y) < b.y1 || std::min(s.a.y, s.b.y) > b.y2) return false;
  if (s.degenerate()) return true;
  const Point corners[4] = {{b.x1, b.y1}, {b.x1, b.y2}, {b.x2, b.y1}, {b.x2, b.y2}};
  bool pos = false, neg = false;
  for (const auto& c : corners) {
    const int sg = detail::sign(detail::cross(s.a, s.b, c));
    if (sg > 0) pos = true;
    if (sg < 0) neg = true;
    if (sg == 0) return true;
  }
  return pos && neg;
}

namespace detail {

inline bool region_contains(const VertexDrawing& d, const RatPoint& p) {
  for (const auto& b : d.boxes)
    if (box_contains(b, p)) return true;
  for (const auto& s : d.segments)
    if (segment_contains(s, p)) return true;
  return false;
}

inline RatPoint exact(const Point& p) { return {Wide(p.x), Wide(p.y), 1}; }

inline bool region_meets_segment(const VertexDrawing& d, const Segment& s) {
  for (const auto& b : d.boxes)
    if (segment_meets_box(s, b)) return true;
  for (const auto& t : d.segments)
    if (segments_intersect(s, t)) return true;
  return false;
}

/// Points spanning the (convex) intersection of two intersecting segments.
inline std::vector<RatPoint> intersection_points(const Segment& s, const Segment& t) {
  std::vector<RatPoint> pts;
  if (s.degenerate()) return {exact(s.a)};
  if (t.degenerate()) return {exact(t.a)};
  const Point r{s.b.x - s.a.x, s.b.y - s.a.y};
  const Point q{t.b.x - t.a.x, t.b.y - t.a.y};
  const Wide denom = Wide(r.x) * q.y - Wide(r.y) * q.x;
  if (denom == 0) {
    // collinear overlap: hull of the endpoints lying on both segments
    for (const auto& p : {s.a, s.b})
      if (on_segment(t, p)) pts.push_back(exact(p));
    for (const auto& p : {t.a, t.b})
      if (on_segment(s, p)) pts.push_back(exact(p));
    return pts;
  }
  Wide num = Wide(t.a.x - s.a.x) * q.y - Wide(t.a.y - s.a.y) * q.x;
  Wide den = denom;
  if (den < 0) {
    den = -den;
    num = -num;
  }
  pts.push_back({Wide(s.a.x) * den + num * r.x, Wide(s.a.y) * den + num * r.y, den});
  return pts;
}

}  // namespace detail

/// True iff the drawing is a plane embedding: edge segments meet only inside the drawing of a
/// shared endpoint, no segment touches a non-incident vertex drawing, and every segment connects
/// its own endpoints' drawings.
inline bool check_drawing_planar(const EmbeddedGraph& g) {
  if (g.drawings.size() != g.num_vertices) throw std::invalid_argument("missing vertex drawing");
  for (const auto& e : g.edges)
    if (!e.drawing) throw std::invalid_argument("missing edge drawing");

  // vertex regions may touch but not overlap
  for (Index u = 0; u < g.num_vertices; ++u)
    for (Index v = u + 1; v < g.num_vertices; ++v)
      for (const auto& a : g.drawings[u].boxes)
        for (const auto& b : g.drawings[v].boxes)
          if (a.x1 < b.x2 && b.x1 < a.x2 && a.y1 < b.y2 && b.y1 < a.y2) return false;

  for (const auto& e : g.edges) {
    if (e.u == e.v) return false;
    const auto& s = *e.drawing;
    const auto& du = g.drawings[e.u];
    const auto& dv = g.drawings[e.v];
    const bool forward = detail::region_contains(du, detail::exact(s.a)) && detail::region_contains(dv, detail::exact(s.b));
    const bool backward = detail::region_contains(dv, detail::exact(s.a)) && detail::region_contains(du, detail::exact(s.b));
    if (!forward && !backward) return false;
    for (Index w = 0; w < g.num_vertices; ++w) {
      if (w == e.u || w == e.v) continue;
      if (detail::region_meets_segment(g.drawings[w], s)) return false;
    }
  }
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const auto& ei = g.edges[i];
    for (std::size_t j = i + 1; j < g.edges.size(); ++j) {
      const auto& ej = g.edges[j];
      if (!segments_intersect(*ei.drawing, *ej.drawing)) continue;
      const auto pts = detail::intersection_points(*ei.drawing, *ej.drawing);
      bool covered = false;
      for (Index w : {ei.u, ei.v}) {
        if (w != ej.u && w != ej.v) continue;
        const auto& dw = g.drawings[w];
        bool all_in = true;
        for (const auto& p : pts) all_in = all_in && detail::region_contains(dw, p);
        if (all_in) covered = true;
      }
      if (!covered) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Separators

/// Connected components of the subgraph induced by `vertices` (each component sorted,
/// components ordered by their smallest vertex).
inline std::vector<IndexSet> induced_components(const AdjList& adj, std::span<const Index> vertices) {
  std::vector<char> in(adj.size(), 0), seen(adj.size(), 0);
  for (Index v : vertices) in[v] = 1;
  IndexSet order(vertices.begin(), vertices.end());
  std::sort(order.begin(), order.end());
  std::vector<IndexSet> comps;
  for (Index s : order) {
    if (seen[s]) continue;
    IndexSet comp;
    std::deque<Index> q{s};
    seen[s] = 1;
    while (!q.empty()) {
      const Index v = q.front();
      q.pop_front();
      comp.push_back(v);
      for (Index w : adj[v])
        if (in[w] && !seen[w]) {
          seen[w] = 1;
          q.push_back(w);
        }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

inline std::vector<IndexSet> connected_components(const AdjList& adj) {
  IndexSet all(adj.size());
  for (Index i = 0; i < all.size(); ++i) all[i] = i;
  return induced_components(adj, all);
}

struct SeparatorResult {
  IndexSet separator;
  std::size_t graph_size = 0;
  /// |S| / sqrt(n); the realized separator constant.
  double beta = 0.0;
};

namespace detail {

inline std::size_t ceil_two_thirds(std::size_t m) { return (2 * m + 2) / 3; }

inline std::vector<IndexSet> bfs_levels(const AdjList& adj, const std::vector<char>& in, Index root) {
  std::vector<IndexSet> levels;
  std::vector<long> dist(adj.size(), -1);
  IndexSet frontier{root};
  dist[root] = 0;
  while (!frontier.empty()) {
    std::sort(frontier.begin(), frontier.end());
    levels.push_back(frontier);
    IndexSet next;
    for (Index v : frontier)
      for (Index w : adj[v])
        if (in[w] && dist[w] < 0) {
          dist[w] = dist[v] + 1;
          next.push_back(w);
        }
    frontier = std::move(next);
  }
  return levels;
}

inline IndexSet separate_until(const AdjList& adj, std::span<const Index> vertices, std::size_t bound);

/// Separator for a connected vertex set: pieces end up with at most ceil(2m/3) vertices.
inline IndexSet separate_connected(const AdjList& adj, const IndexSet& comp) {
  const std::size_t m = comp.size();
  if (m <= 2) return {};
  std::vector<char> in(adj.size(), 0);
  for (Index v : comp) in[v] = 1;

  // pseudo-peripheral root: farthest vertex from the smallest id
  auto first = bfs_levels(adj, in, comp.front());
  const Index root = first.back().front();
  const auto levels = bfs_levels(adj, in, root);
  const long r = static_cast<long>(levels.size()) - 1;

  std::vector<std::size_t> prefix(levels.size() + 1, 0);
  for (std::size_t i = 0; i < levels.size(); ++i) prefix[i + 1] = prefix[i] + levels[i].size();
  long mu = 0;
  while (2 * prefix[mu + 1] < m) ++mu;

  IndexSet best = levels[mu];

  // Two thin levels around the median plus a recursive split of an oversized middle.
  const double root_m = std::sqrt(static_cast<double>(m));
  auto level_size = [&](long l) -> std::size_t { return (l < 0 || l > r) ? 0 : levels[l].size(); };
  long l0 = mu;
  while (l0 >= 0 && static_cast<double>(level_size(l0)) > root_m) --l0;
  long l2 = mu + 1;
  while (l2 <= r && static_cast<double>(level_size(l2)) > root_m) ++l2;
  if (!(l0 < 0 && l2 > r)) {
    IndexSet cand;
    if (l0 >= 0) cand.insert(cand.end(), levels[l0].begin(), levels[l0].end());
    if (l2 <= r) cand.insert(cand.end(), levels[l2].begin(), levels[l2].end());
    IndexSet middle;
    for (long l = l0 + 1; l < l2; ++l) middle.insert(middle.end(), levels[l].begin(), levels[l].end());
    if (middle.size() > ceil_two_thirds(m)) {
      const auto inner = separate_until(adj, middle, ceil_two_thirds(m));
      cand.insert(cand.end(), inner.begin(), inner.end());
    }
    if (cand.size() < best.size()) best = std::move(cand);
  }
  std::sort(best.begin(), best.end());
  return best;
}

/// Removes vertices until every component of the induced subgraph has at most `bound` vertices.
inline IndexSet separate_until(const AdjList& adj, std::span<const Index> vertices, std::size_t bound) {
  IndexSet removed;
  std::vector<IndexSet> work = induced_components(adj, vertices);
  while (!work.empty()) {
    IndexSet comp = std::move(work.back());
    work.pop_back();
    if (comp.size() <= bound) continue;
    IndexSet sep = separate_connected(adj, comp);
    if (sep.empty()) {
      // size-2 components under a cap of 1: drop the larger id
      sep.push_back(comp.back());
    }
    removed.insert(removed.end(), sep.begin(), sep.end());
    IndexSet rest;
    std::set_difference(comp.begin(), comp.end(), sep.begin(), sep.end(), std::back_inserter(rest));
    for (auto& c : induced_components(adj, rest)) work.push_back(std::move(c));
  }
  std::sort(removed.begin(), removed.end());
  return removed;
}

inline void check_edge_bound(const AdjList& adj, std::span<const Index> vertices) {
  const std::size_t m = vertices.size();
  if (m < 3) return;
  std::vector<char> in(adj.size(), 0);
  for (Index v : vertices) in[v] = 1;
  std::size_t twice_edges = 0;
  for (Index v : vertices)
    for (Index w : adj[v]) twice_edges += in[w];
  if (twice_edges / 2 > 3 * m - 6) throw NonPlanarError("edge count exceeds 3n-6; graph is not planar");
}

}  // namespace detail

/// BFS-level separator: every component of G - S has at most ceil(2n/3) vertices.
inline SeparatorResult balanced_separator(const AdjList& adj, std::span<const Index> vertices) {
  detail::check_edge_bound(adj, vertices);
  SeparatorResult res;
  res.graph_size = vertices.size();
  if (vertices.size() > 2) res.separator = detail::separate_until(adj, vertices, detail::ceil_two_thirds(vertices.size()));
  if (res.graph_size > 0)
    res.beta = static_cast<double>(res.separator.size()) / std::sqrt(static_cast<double>(res.graph_size));
  return res;
}

inline SeparatorResult balanced_separator(const AdjList& adj) {
  IndexSet all(adj.size());
  for (Index i = 0; i < all.size(); ++i) all[i] = i;
  return balanced_separator(adj, all);
}

struct Division {
  IndexSet removed;
  std::vector<IndexSet> components;
};

/// Default numerator of the component cap c'(eps') = ceil(kSeparatorConstant / eps'^2).
inline constexpr std::int64_t kSeparatorConstant = 16;

struct SeparatorOptions {
  std::int64_t constant = kSeparatorConstant;
  std::optional<std::size_t> cap_override;
};

inline std::size_t component_cap(const Ratio& eps_prime, const SeparatorOptions& opts = {}) {
  if (opts.cap_override) return *opts.cap_override;
  if (!eps_prime.in_unit_interval()) throw std::invalid_argument("eps' must lie in (0,1]");
  const Wide c = ceil_div(Wide(opts.constant) * eps_prime.den * eps_prime.den, Wide(eps_prime.num) * eps_prime.num);
  return c > Wide(std::numeric_limits<std::int64_t>::max()) ? std::numeric_limits<std::size_t>::max()
                                                             : static_cast<std::size_t>(c);
}

struct DivisionReport {
  Division division;
  std::size_t cap = 0;
  double removed_fraction = 0.0;
  std::size_t max_component = 0;
};

/// r-division by recursive separation: every component ends up with at most c'(eps') vertices.
inline DivisionReport apply_separator(const AdjList& adj, const Ratio& eps_prime, const SeparatorOptions& opts = {}) {
  DivisionReport rep;
  rep.cap = component_cap(eps_prime, opts);
  IndexSet all(adj.size());
  for (Index i = 0; i < all.size(); ++i) all[i] = i;
  detail::check_edge_bound(adj, all);
  rep.division.removed = detail::separate_until(adj, all, std::max<std::size_t>(rep.cap, 1));
  IndexSet rest;
  std::set_difference(all.begin(), all.end(), rep.division.removed.begin(), rep.division.removed.end(),
                      std::back_inserter(rest));
  rep.division.components = induced_components(adj, rest);
  for (const auto& c : rep.division.components) rep.max_component = std::max(rep.max_component, c.size());
  if (!adj.empty())
    rep.removed_fraction = static_cast<double>(rep.division.removed.size()) / static_cast<double>(adj.size());
  return rep;
}

/// Partition + no cross-component edges.
inline bool is_valid_division(const AdjList& adj, const Division& d) {
  std::vector<long> owner(adj.size(), -2);
  for (Index v : d.removed) {
    if (v >= adj.size() || owner[v] != -2) return false;
    owner[v] = -1;
  }
  for (std::size_t c = 0; c < d.components.size(); ++c)
    for (Index v : d.components[c]) {
      if (v >= adj.size() || owner[v] != -2) return false;
      owner[v] = static_cast<long>(c);
    }
  for (Index v = 0; v < adj.size(); ++v) {
    if (owner[v] == -2) return false;
    if (owner[v] < 0) continue;
    for (Index w : adj[v])
      if (owner[w] >= 0 && owner[w] != owner[v]) return false;
  }
  return true;
}

}  // namespace pasrect
