#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "pasrect/geometry.hpp"
#include "pasrect/planar.hpp"
#include "pasrect/rational.hpp"

namespace pasrect::misr {

using CellMask = boost::dynamic_bitset<>;

/// Non-uniform grid. Line coordinates are doubled so x - 1/2 is stored as 2x - 1; the first and
/// last entries of each list are the bounding lines.
struct Grid {
  std::vector<Coord> vertical;
  std::vector<Coord> horizontal;

  std::size_t cols() const { return vertical.size() - 1; }
  std::size_t rows() const { return horizontal.size() - 1; }
  std::size_t num_cells() const { return cols() * rows(); }
  std::span<const Coord> interior_vertical() const { return {vertical.data() + 1, vertical.size() - 2}; }
  std::span<const Coord> interior_horizontal() const { return {horizontal.data() + 1, horizontal.size() - 2}; }
  std::size_t cell_index(std::size_t col, std::size_t row) const { return row * cols() + col; }
};

struct CellCoord {
  std::size_t col = 0, row = 0;
  friend bool operator==(const CellCoord&, const CellCoord&) = default;
  friend auto operator<=>(const CellCoord&, const CellCoord&) = default;
};

/// Axis-aligned block of cells, columns [col_lo, col_hi] x rows [row_lo, row_hi].
struct Block {
  std::size_t col_lo = 0, row_lo = 0, col_hi = 0, row_hi = 0;

  CellCoord top_left() const { return {col_lo, row_hi}; }
  CellCoord bottom_right() const { return {col_hi, row_lo}; }
  friend bool operator==(const Block&, const Block&) = default;
  friend auto operator<=>(const Block&, const Block&) = default;
};

struct CellSet {
  CellMask cells;
  std::vector<Block> blocks;  // provenance: the union of these blocks equals `cells`

  bool contains(std::size_t cell) const { return cell < cells.size() && cells.test(cell); }
};

// ---------------------------------------------------------------------------
// Grid construction

struct GridOutcome {
  std::optional<Grid> grid;
  IndexSet independent;  // exactly k pairwise disjoint rectangles when grid is empty

  bool is_grid() const { return grid.has_value(); }
};

namespace detail {

struct Sweep {
  std::vector<Coord> lines;
  IndexSet witnesses;
};

template <typename Lo, typename Hi>
Sweep sweep_axis(const MisrInstance& inst, Lo lo, Hi hi) {
  Sweep s;
  Coord ell = 0;  // doubled
  for (;;) {
    std::optional<Index> best;
    for (Index i = 0; i < inst.size(); ++i) {
      if (2 * lo(inst[i]) < ell) continue;
      if (!best || hi(inst[i]) < hi(inst[*best])) best = i;
    }
    if (!best) break;
    s.witnesses.push_back(*best);
    ell = 2 * hi(inst[*best]) - 1;
    s.lines.push_back(ell);
  }
  return s;
}

inline Coord bounding_line(const MisrInstance& inst) {
  Coord m = 2 * static_cast<Coord>(inst.size()) - 1;
  for (const auto& r : inst.rects) m = std::max({m, r.x2, r.y2});
  return 2 * std::max<Coord>(m, 1);
}

}  // namespace detail

/// Greedy line sweep on both axes: either <= k-1 lines per axis crossing every rectangle, or k
/// pairwise disjoint witnesses.
inline GridOutcome build_grid(const MisrInstance& inst, std::int64_t k) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  require_valid(inst);
  GridOutcome out;
  const auto vs = detail::sweep_axis(inst, [](const Rect& r) { return r.x1; }, [](const Rect& r) { return r.x2; });
  if (static_cast<std::int64_t>(vs.lines.size()) >= k) {
    out.independent.assign(vs.witnesses.begin(), vs.witnesses.begin() + k);
    std::sort(out.independent.begin(), out.independent.end());
    return out;
  }
  const auto hs = detail::sweep_axis(inst, [](const Rect& r) { return r.y1; }, [](const Rect& r) { return r.y2; });
  if (static_cast<std::int64_t>(hs.lines.size()) >= k) {
    out.independent.assign(hs.witnesses.begin(), hs.witnesses.begin() + k);
    std::sort(out.independent.begin(), out.independent.end());
    return out;
  }
  const Coord bound = detail::bounding_line(inst);
  Grid g;
  g.vertical.push_back(0);
  g.vertical.insert(g.vertical.end(), vs.lines.begin(), vs.lines.end());
  g.vertical.push_back(bound);
  g.horizontal.push_back(0);
  g.horizontal.insert(g.horizontal.end(), hs.lines.begin(), hs.lines.end());
  g.horizontal.push_back(bound);
  out.grid = std::move(g);
  return out;
}

inline bool crosses(Coord lo, Coord hi, Coord doubled_line) { return 2 * lo < doubled_line && doubled_line < 2 * hi; }

/// Every rectangle crossed by an interior line on both axes.
inline bool grid_crosses_all(const Grid& g, const MisrInstance& inst) {
  for (const auto& r : inst.rects) {
    bool v = false, h = false;
    for (Coord l : g.interior_vertical()) v = v || crosses(r.x1, r.x2, l);
    for (Coord l : g.interior_horizontal()) h = h || crosses(r.y1, r.y2, l);
    if (!v || !h) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Cells

struct CellInfo {
  CellCoord coord;
  Box box;  // doubled coordinates, closed
  Point bottom_left() const { return {box.x1, box.y1}; }
  Point bottom_right() const { return {box.x2, box.y1}; }
  Point top_left() const { return {box.x1, box.y2}; }
  Point top_right() const { return {box.x2, box.y2}; }
};

inline std::vector<CellInfo> grid_cells(const Grid& g) {
  std::vector<CellInfo> cells;
  cells.reserve(g.num_cells());
  for (std::size_t r = 0; r < g.rows(); ++r)
    for (std::size_t c = 0; c < g.cols(); ++c)
      cells.push_back({{c, r}, {g.vertical[c], g.horizontal[r], g.vertical[c + 1], g.horizontal[r + 1]}});
  return cells;
}

/// All cells containing a doubled point (cells are closed, so boundary points belong to several).
inline std::vector<CellCoord> cells_at(const Grid& g, const Point& p) {
  std::vector<CellCoord> out;
  for (std::size_t r = 0; r < g.rows(); ++r) {
    if (p.y < g.horizontal[r] || p.y > g.horizontal[r + 1]) continue;
    for (std::size_t c = 0; c < g.cols(); ++c)
      if (g.vertical[c] <= p.x && p.x <= g.vertical[c + 1]) out.push_back({c, r});
  }
  return out;
}

inline bool rect_contains(const Rect& r, const Point& doubled) {
  return 2 * r.x1 < doubled.x && doubled.x < 2 * r.x2 && 2 * r.y1 < doubled.y && doubled.y < 2 * r.y2;
}

/// G(R): the block of cells an open rectangle intersects.
inline Block footprint_block(const Grid& g, const Rect& r) {
  Block b{g.cols(), g.rows(), 0, 0};
  for (std::size_t c = 0; c < g.cols(); ++c)
    if (2 * r.x1 < g.vertical[c + 1] && 2 * r.x2 > g.vertical[c]) {
      b.col_lo = std::min(b.col_lo, c);
      b.col_hi = std::max(b.col_hi, c);
    }
  for (std::size_t w = 0; w < g.rows(); ++w)
    if (2 * r.y1 < g.horizontal[w + 1] && 2 * r.y2 > g.horizontal[w]) {
      b.row_lo = std::min(b.row_lo, w);
      b.row_hi = std::max(b.row_hi, w);
    }
  if (b.col_lo > b.col_hi || b.row_lo > b.row_hi) throw std::invalid_argument("rectangle lies outside the grid");
  return b;
}

inline CellMask block_mask(const Grid& g, const Block& b) {
  CellMask m(g.num_cells());
  for (std::size_t r = b.row_lo; r <= b.row_hi; ++r)
    for (std::size_t c = b.col_lo; c <= b.col_hi; ++c) m.set(g.cell_index(c, r));
  return m;
}

inline CellMask footprint_mask(const Grid& g, const Rect& r) { return block_mask(g, footprint_block(g, r)); }

// ---------------------------------------------------------------------------
// Graphs G1 and G2

/// An embedded graph whose vertices stand for solution rectangles.
struct SolutionGraph {
  EmbeddedGraph graph;
  IndexSet rects;  // vertex v <-> instance rectangle rects[v]
};

/// Convex hull of the grid corners inside a rectangle (doubled coordinates).
inline Box corner_hull(const Grid& g, const Rect& r) {
  std::optional<Coord> vx1, vx2, hy1, hy2;
  for (Coord l : g.interior_vertical())
    if (crosses(r.x1, r.x2, l)) {
      if (!vx1) vx1 = l;
      vx2 = l;
    }
  for (Coord l : g.interior_horizontal())
    if (crosses(r.y1, r.y2, l)) {
      if (!hy1) hy1 = l;
      hy2 = l;
    }
  if (!vx1 || !hy1) throw std::invalid_argument("rectangle contains no grid corner");
  return {*vx1, *hy1, *vx2, *hy2};
}

namespace detail {

inline std::optional<Coord> shared_line(std::span<const Coord> lines, Coord a1, Coord a2, Coord b1, Coord b2) {
  for (Coord l : lines)
    if (crosses(a1, a2, l) && crosses(b1, b2, l)) return l;
  return std::nullopt;
}

inline bool blocks_meet(const Block& a, const Block& b) {
  return a.col_lo <= b.col_hi && b.col_lo <= a.col_hi && a.row_lo <= b.row_hi && b.row_lo <= a.row_hi;
}

inline Block block_intersection(const Block& a, const Block& b) {
  return {std::max(a.col_lo, b.col_lo), std::max(a.row_lo, b.row_lo), std::min(a.col_hi, b.col_hi),
          std::min(a.row_hi, b.row_hi)};
}

/// Segment for a G1 edge, or nullopt when the pair is not adjacent in G1.
inline std::optional<Segment> g1_edge(const Grid& g, const Rect& a, const Rect& b, const Box& ha, const Box& hb) {
  const Block fa = footprint_block(g, a), fb = footprint_block(g, b);
  if (!blocks_meet(fa, fb)) return std::nullopt;
  if (auto h = shared_line(g.interior_horizontal(), a.y1, a.y2, b.y1, b.y2)) {
    const bool a_left = a.x2 <= b.x1;
    const Box& l = a_left ? ha : hb;
    const Box& r = a_left ? hb : ha;
    return Segment{{l.x2, *h}, {r.x1, *h}};
  }
  if (auto v = shared_line(g.interior_vertical(), a.x1, a.x2, b.x1, b.x2)) {
    const bool a_below = a.y2 <= b.y1;
    const Box& lo = a_below ? ha : hb;
    const Box& hi = a_below ? hb : ha;
    return Segment{{*v, lo.y2}, {*v, hi.y1}};
  }
  const Block shared = block_intersection(fa, fb);
  for (std::size_t r = shared.row_lo; r <= shared.row_hi; ++r)
    for (std::size_t c = shared.col_lo; c <= shared.col_hi; ++c) {
      const Point tl{g.vertical[c], g.horizontal[r + 1]};
      const Point br{g.vertical[c + 1], g.horizontal[r]};
      if (rect_contains(a, tl) && rect_contains(b, br)) return Segment{tl, br};
      if (rect_contains(b, tl) && rect_contains(a, br)) return Segment{br, tl};
    }
  return std::nullopt;
}

}  // namespace detail

/// G1: edges for a shared cell plus a shared grid line or a top-left/bottom-right corner pair.
/// Bottom-left/top-right pairs deliberately get no edge.
inline SolutionGraph build_G1(std::span<const Index> solution, const Grid& grid, const MisrInstance& inst) {
  if (!validate_misr_solution(inst, solution)) throw std::invalid_argument("solution is not feasible");
  SolutionGraph sg;
  sg.rects.assign(solution.begin(), solution.end());
  std::sort(sg.rects.begin(), sg.rects.end());
  auto& G = sg.graph;
  G.num_vertices = sg.rects.size();
  for (Index r : sg.rects) G.drawings.push_back({{corner_hull(grid, inst[r])}, {}});
  for (Index a = 0; a < sg.rects.size(); ++a)
    for (Index b = a + 1; b < sg.rects.size(); ++b)
      if (auto seg = detail::g1_edge(grid, inst[sg.rects[a]], inst[sg.rects[b]], G.drawings[a].boxes[0],
                                     G.drawings[b].boxes[0]))
        G.edges.push_back({a, b, seg});
  return sg;
}

/// Vertex of G2 <-> one component of the G1 division.
struct ComponentGraph {
  EmbeddedGraph graph;
  std::vector<IndexSet> members;  // G1 vertex ids per G2 vertex
};

/// G2 on the components of a division of G1: edges for bottom-left/top-right corner pairs of a
/// cell that fall into different components.
inline ComponentGraph build_G2(const Division& g1_division, const SolutionGraph& g1, const Grid& grid,
                               const MisrInstance& inst) {
  ComponentGraph cg;
  cg.members = g1_division.components;
  auto& G = cg.graph;
  G.num_vertices = cg.members.size();

  std::vector<long> comp_of(g1.graph.num_vertices, -1);
  for (std::size_t c = 0; c < cg.members.size(); ++c)
    for (Index v : cg.members[c]) comp_of[v] = static_cast<long>(c);

  for (std::size_t c = 0; c < cg.members.size(); ++c) {
    VertexDrawing d;
    for (Index v : cg.members[c]) d.boxes.push_back(g1.graph.drawings[v].boxes.at(0));
    for (const auto& e : g1.graph.edges)
      if (comp_of[e.u] == static_cast<long>(c) && comp_of[e.v] == static_cast<long>(c)) d.segments.push_back(*e.drawing);
    G.drawings.push_back(std::move(d));
  }

  // corner -> owning G1 vertex (at most one since the solution is disjoint)
  const std::size_t nv = grid.vertical.size(), nh = grid.horizontal.size();
  std::vector<long> owner(nv * nh, -1);
  for (Index v = 0; v < g1.rects.size(); ++v) {
    if (comp_of[v] < 0) continue;
    const Rect& r = inst[g1.rects[v]];
    for (std::size_t i = 0; i < nv; ++i)
      for (std::size_t j = 0; j < nh; ++j)
        if (rect_contains(r, {grid.vertical[i], grid.horizontal[j]})) owner[i * nh + j] = static_cast<long>(v);
  }
  std::set<std::pair<Index, Index>> seen;
  for (std::size_t r = 0; r < grid.rows(); ++r)
    for (std::size_t c = 0; c < grid.cols(); ++c) {
      const long bl = owner[c * nh + r];
      const long tr = owner[(c + 1) * nh + r + 1];
      if (bl < 0 || tr < 0) continue;
      const auto ca = static_cast<Index>(comp_of[bl]);
      const auto cb = static_cast<Index>(comp_of[tr]);
      if (ca == cb) continue;
      const auto key = std::minmax(ca, cb);
      if (!seen.insert(key).second) continue;
      G.edges.push_back({ca, cb, Segment{{grid.vertical[c], grid.horizontal[r]}, {grid.vertical[c + 1], grid.horizontal[r + 1]}}});
    }
  return cg;
}

// ---------------------------------------------------------------------------
// Structured solution

struct Grouping {
  std::vector<IndexSet> groups;  // instance indices
  IndexSet dropped;
};

struct StructuredSolution {
  Grouping grouping;
  SolutionGraph g1;
  ComponentGraph g2;
  DivisionReport g1_division;
  DivisionReport g2_division;
  std::size_t c1_cap = 0;  // component caps requested from the separator
  std::size_t c2_cap = 0;
  std::size_t realized_c1 = 0;  // largest component actually produced
  std::size_t realized_c2 = 0;

  std::size_t kept() const {
    std::size_t s = 0;
    for (const auto& g : grouping.groups) s += g.size();
    return s;
  }
};

inline AdjList adjacency_of(const EmbeddedGraph& g) { return g.adjacency(); }

/// Two-stage separation of a feasible solution into cell-disjoint groups.
inline StructuredSolution structured_solution(std::span<const Index> solution, const Grid& grid,
                                              const MisrInstance& inst, const Ratio& eps,
                                              const SeparatorOptions& sep = {}) {
  if (!eps.in_unit_interval()) throw std::invalid_argument("epsilon must lie in (0,1]");
  StructuredSolution st;
  st.g1 = build_G1(solution, grid, inst);
  const Ratio eps1 = Ratio::make(eps.num, eps.den * 2);
  st.g1_division = apply_separator(adjacency_of(st.g1.graph), eps1, sep);
  st.c1_cap = st.g1_division.cap;
  st.realized_c1 = st.g1_division.max_component;

  st.g2 = build_G2(st.g1_division.division, st.g1, grid, inst);
  const std::size_t c1 = std::max<std::size_t>(st.c1_cap, 1);
  const Wide den2 = Wide(eps.den) * 2 * Wide(c1);
  SeparatorOptions sep2 = sep;
  sep2.cap_override.reset();
  DivisionReport d2;
  if (den2 > Wide(std::numeric_limits<std::int64_t>::max() / 4)) {
    sep2.cap_override = std::numeric_limits<std::size_t>::max();
    d2 = apply_separator(adjacency_of(st.g2.graph), Ratio{1, 1}, sep2);
  } else {
    d2 = apply_separator(adjacency_of(st.g2.graph), Ratio::make(eps.num, static_cast<std::int64_t>(den2)), sep2);
  }
  st.g2_division = d2;
  st.c2_cap = d2.cap;
  st.realized_c2 = d2.max_component;

  for (const auto& comp : d2.division.components) {
    IndexSet group;
    for (Index w : comp)
      for (Index v : st.g2.members[w]) group.push_back(st.g1.rects[v]);
    std::sort(group.begin(), group.end());
    st.grouping.groups.push_back(std::move(group));
  }
  for (Index v : st.g1_division.division.removed) st.grouping.dropped.push_back(st.g1.rects[v]);
  for (Index w : d2.division.removed)
    for (Index v : st.g2.members[w]) st.grouping.dropped.push_back(st.g1.rects[v]);
  std::sort(st.grouping.dropped.begin(), st.grouping.dropped.end());
  std::sort(st.grouping.groups.begin(), st.grouping.groups.end());
  return st;
}

/// No grid cell is intersected by rectangles of two different groups.
inline bool groups_cell_disjoint(const Grouping& gr, const Grid& grid, const MisrInstance& inst) {
  CellMask used(grid.num_cells());
  for (const auto& group : gr.groups) {
    CellMask mine(grid.num_cells());
    for (Index r : group) mine |= footprint_mask(grid, inst[r]);
    if (mine.intersects(used)) return false;
    used |= mine;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Candidate cell sets

inline std::vector<Block> all_blocks(const Grid& g) {
  std::vector<Block> blocks;
  for (std::size_t r1 = 0; r1 < g.rows(); ++r1)
    for (std::size_t c1 = 0; c1 < g.cols(); ++c1)
      for (std::size_t r2 = r1; r2 < g.rows(); ++r2)
        for (std::size_t c2 = c1; c2 < g.cols(); ++c2) blocks.push_back({c1, r1, c2, r2});
  return blocks;
}

/// Every union of at most b blocks, deduplicated by cell content.
inline std::vector<CellSet> enumerate_cell_sets(const Grid& grid, std::size_t b) {
  if (b < 1) throw std::invalid_argument("block budget must be at least 1");
  const auto blocks = all_blocks(grid);
  std::vector<CellMask> masks;
  masks.reserve(blocks.size());
  for (const auto& bl : blocks) masks.push_back(block_mask(grid, bl));

  std::vector<CellSet> out;
  std::set<CellMask> seen;
  std::vector<std::size_t> pick;
  auto rec = [&](auto&& self, std::size_t start, const CellMask& acc) -> void {
    if (!pick.empty() && seen.insert(acc).second) {
      CellSet cs{acc, {}};
      for (auto i : pick) cs.blocks.push_back(blocks[i]);
      out.push_back(std::move(cs));
    }
    if (pick.size() == b) return;
    for (std::size_t i = start; i < blocks.size(); ++i) {
      pick.push_back(i);
      self(self, i + 1, pick.size() == 1 ? masks[i] : (acc | masks[i]));
      pick.pop_back();
    }
  };
  rec(rec, 0, CellMask(grid.num_cells()));
  return out;
}

/// Unions of the footprints of at most b pairwise disjoint input rectangles. Group footprints of
/// any structured solution are of this form, so this family replaces the full block family.
inline std::vector<CellSet> enumerate_footprint_cell_sets(const MisrInstance& inst, const Grid& grid, std::size_t b) {
  if (b < 1) throw std::invalid_argument("block budget must be at least 1");
  const std::size_t n = inst.size();
  std::vector<CellMask> masks;
  std::vector<Block> fps;
  for (const auto& r : inst.rects) {
    fps.push_back(footprint_block(grid, r));
    masks.push_back(block_mask(grid, fps.back()));
  }
  std::vector<std::vector<char>> conflict(n, std::vector<char>(n, 0));
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) conflict[i][j] = conflict[j][i] = !rects_disjoint(inst[i], inst[j]);

  std::vector<CellSet> out;
  std::set<CellMask> seen;
  IndexSet pick;
  auto rec = [&](auto&& self, Index start, const CellMask& acc) -> void {
    if (!pick.empty() && seen.insert(acc).second) {
      CellSet cs{acc, {}};
      std::set<Block> bl;
      for (auto i : pick) bl.insert(fps[i]);
      cs.blocks.assign(bl.begin(), bl.end());
      out.push_back(std::move(cs));
    }
    if (pick.size() == b) return;
    for (Index i = start; i < n; ++i) {
      bool ok = true;
      for (Index p : pick) ok = ok && !conflict[i][p];
      if (!ok) continue;
      pick.push_back(i);
      self(self, i + 1, pick.size() == 1 ? masks[i] : (acc | masks[i]));
      pick.pop_back();
    }
  };
  rec(rec, 0, CellMask(grid.num_cells()));
  return out;
}

/// Rectangles whose every intersected cell lies in the cell set.
inline IndexSet rects_inside(const MisrInstance& inst, const Grid& grid, const CellMask& cells) {
  IndexSet in;
  for (Index i = 0; i < inst.size(); ++i)
    if (footprint_mask(grid, inst[i]).is_subset_of(cells)) in.push_back(i);
  return in;
}

/// Maximum independent set of size <= cap among the given rectangles, by complete enumeration
/// with early exit at the cap.
inline IndexSet best_capped_subset(const MisrInstance& inst, std::span<const Index> pool, std::size_t cap) {
  IndexSet best, cur;
  const std::size_t n = pool.size();
  auto rec = [&](auto&& self, std::size_t pos) -> bool {
    if (cur.size() > best.size()) best = cur;
    if (best.size() >= cap) return true;
    if (cur.size() + (n - pos) <= best.size()) return false;
    for (std::size_t i = pos; i < n; ++i) {
      if (cur.size() + (n - i) <= best.size()) break;
      bool ok = true;
      for (Index c : cur) ok = ok && rects_disjoint(inst[c], inst[pool[i]]);
      if (!ok) continue;
      cur.push_back(pool[i]);
      if (self(self, i + 1)) return true;
      cur.pop_back();
    }
    return false;
  };
  if (cap > 0) rec(rec, 0);
  std::sort(best.begin(), best.end());
  return best;
}

inline IndexSet solve_cellset_subproblem(const MisrInstance& inst, const Grid& grid, const CellSet& cells,
                                         std::size_t cap) {
  const auto pool = rects_inside(inst, grid, cells.cells);
  return best_capped_subset(inst, pool, cap);
}

// ---------------------------------------------------------------------------
// PAS and kernel

struct Knobs {
  std::size_t c = 1;  // subproblem cap
  std::size_t b = 1;  // block budget per cell set
};

/// c = c1 * c2 with c1 = c'(eps/2), c2 = c'(eps / (2 c1)); b = c.
inline Knobs theory_knobs(const Ratio& eps, const SeparatorOptions& sep = {}) {
  const std::size_t c1 = component_cap(Ratio::make(eps.num, eps.den * 2), sep);
  const Wide den2 = Wide(eps.den) * 2 * Wide(c1);
  std::size_t c2 = std::numeric_limits<std::size_t>::max();
  if (den2 <= Wide(std::numeric_limits<std::int64_t>::max() / 4))
    c2 = component_cap(Ratio::make(eps.num, static_cast<std::int64_t>(den2)), sep);
  const Wide c = Wide(c1) * Wide(c2);
  const std::size_t cc = c > Wide(std::numeric_limits<std::uint32_t>::max()) ? std::numeric_limits<std::uint32_t>::max()
                                                                             : static_cast<std::size_t>(c);
  return {cc, cc};
}

enum class Verdict { solution, opt_below_k };

struct PasResult {
  Verdict verdict = Verdict::opt_below_k;
  IndexSet solution;
  std::string branch;  // "grid", "search", "cardinality"
  Knobs knobs;
  bool theory_knobs = false;
  std::size_t candidates = 0;
  std::size_t target = 0;
};

struct PasOptions {
  SeparatorOptions separator;
  /// Stop the set-packing search once the collection reaches this total (0 = k).
  std::size_t stop_at = 0;
};

namespace detail {

struct Candidate {
  CellMask cells;
  std::size_t first_cell = 0;
  IndexSet solution;
};

/// Set packing over cell-disjoint candidates, at most `max_picks` of them, maximizing total value.
class SetPacker {
 public:
  SetPacker(std::vector<Candidate> cands, std::size_t num_cells, std::size_t max_picks, std::size_t stop_at)
      : cands_(std::move(cands)), num_cells_(num_cells), max_picks_(max_picks), stop_at_(stop_at) {
    std::stable_sort(cands_.begin(), cands_.end(), [](const Candidate& a, const Candidate& b) {
      if (a.first_cell != b.first_cell) return a.first_cell < b.first_cell;
      return a.solution.size() > b.solution.size();
    });
    by_cell_.assign(num_cells_ + 1, cands_.size());
    for (std::size_t i = cands_.size(); i-- > 0;) by_cell_[cands_[i].first_cell] = i;
    for (std::size_t c = num_cells_; c-- > 0;) by_cell_[c] = std::min(by_cell_[c], by_cell_[c + 1]);
    // suffix top values: best[c] = descending values among candidates whose first cell >= c
    suffix_top_.assign(num_cells_ + 1, {});
    for (std::size_t c = num_cells_; c-- > 0;) {
      auto v = suffix_top_[c + 1];
      for (std::size_t i = by_cell_[c]; i < by_cell_[c + 1]; ++i) v.push_back(cands_[i].solution.size());
      std::sort(v.rbegin(), v.rend());
      if (v.size() > max_picks_) v.resize(max_picks_);
      suffix_top_[c] = std::move(v);
    }
  }

  std::vector<std::size_t> solve() {
    CellMask used(num_cells_);
    std::vector<std::size_t> cur;
    rec(0, used, cur, 0);
    return best_pick_;
  }

  std::size_t best_total() const { return best_; }

 private:
  std::size_t bound(std::size_t cell, std::size_t picks_left) const {
    const auto& v = suffix_top_[cell];
    std::size_t s = 0;
    for (std::size_t i = 0; i < std::min(picks_left, v.size()); ++i) s += v[i];
    return s;
  }

  bool rec(std::size_t cell, CellMask& used, std::vector<std::size_t>& cur, std::size_t total) {
    if (total > best_ || (total == best_ && best_pick_.empty() && !cur.empty())) {
      best_ = total;
      best_pick_ = cur;
      if (best_ >= stop_at_) return true;
    }
    if (cur.size() == max_picks_) return false;
    while (cell < num_cells_ && used.test(cell)) ++cell;
    if (cell >= num_cells_) return false;
    if (total + bound(cell, max_picks_ - cur.size()) <= best_) return false;
    for (std::size_t i = by_cell_[cell]; i < by_cell_[cell + 1]; ++i) {
      const auto& cd = cands_[i];
      if (cd.cells.intersects(used)) continue;
      used |= cd.cells;
      cur.push_back(i);
      const bool stop = rec(cell + 1, used, cur, total + cd.solution.size());
      cur.pop_back();
      used -= cd.cells;
      if (stop) return true;
    }
    return rec(cell + 1, used, cur, total);
  }

  std::vector<Candidate> cands_;
  std::size_t num_cells_;
  std::size_t max_picks_;
  std::size_t stop_at_;
  std::vector<std::size_t> by_cell_;
  std::vector<std::vector<std::size_t>> suffix_top_;
  std::size_t best_ = 0;
  std::vector<std::size_t> best_pick_;

 public:
  const Candidate& candidate(std::size_t i) const { return cands_[i]; }
};

inline std::vector<Candidate> solve_candidates(const MisrInstance& inst, const Grid& grid,
                                               const std::vector<CellSet>& family, std::size_t cap) {
  std::map<IndexSet, IndexSet> memo;
  std::vector<Candidate> out;
  out.reserve(family.size());
  for (const auto& cs : family) {
    auto pool = rects_inside(inst, grid, cs.cells);
    auto it = memo.find(pool);
    if (it == memo.end()) it = memo.emplace(pool, best_capped_subset(inst, pool, cap)).first;
    if (it->second.empty()) continue;
    out.push_back({cs.cells, cs.cells.find_first(), it->second});
  }
  return out;
}

}  // namespace detail

/// Either a solution of size >= ceil((1-eps)k) or the assertion OPT < k. The negative answer is
/// sound whenever the knobs dominate the group sizes of a structured optimum (theory knobs do).
inline PasResult pas_misr(const MisrInstance& input, std::int64_t k, const Ratio& eps, std::optional<Knobs> knobs = {},
                          const PasOptions& opts = {}) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (!eps.in_unit_interval()) throw std::invalid_argument("epsilon must lie in (0,1]");
  const MisrInstance inst = normalize_instance(input);
  PasResult res;
  res.theory_knobs = !knobs.has_value();
  res.knobs = knobs.value_or(theory_knobs(eps, opts.separator));
  res.target = static_cast<std::size_t>(ceil_one_minus(eps, k));
  if (static_cast<std::int64_t>(inst.size()) < k) {
    res.branch = "cardinality";
    return res;
  }
  auto go = build_grid(inst, k);
  if (!go.is_grid()) {
    res.branch = "grid";
    res.verdict = Verdict::solution;
    res.solution = go.independent;
    return res;
  }
  const Grid& grid = *go.grid;
  res.branch = "search";
  const auto family = enumerate_footprint_cell_sets(inst, grid, res.knobs.b);
  res.candidates = family.size();
  auto cands = detail::solve_candidates(inst, grid, family, res.knobs.c);
  const std::size_t stop_at = opts.stop_at ? opts.stop_at : static_cast<std::size_t>(k);
  detail::SetPacker packer(std::move(cands), grid.num_cells(), static_cast<std::size_t>(k), stop_at);
  const auto picks = packer.solve();
  IndexSet sol;
  for (auto i : picks) {
    const auto& s = packer.candidate(i).solution;
    sol.insert(sol.end(), s.begin(), s.end());
  }
  std::sort(sol.begin(), sol.end());
  if (!validate_misr_solution(inst, sol)) throw std::logic_error("set packing produced an infeasible union");
  if (sol.size() >= res.target && !sol.empty()) {
    res.verdict = Verdict::solution;
    res.solution = std::move(sol);
  }
  return res;
}

struct KernelReport {
  IndexSet kernel;
  Knobs knobs;
  bool grid_shortcut = false;
  std::size_t candidates = 0;
  Wide size_bound = 0;  // c * k^(4b), saturating
};

/// Union over all candidate cell sets of a capped optimum of the induced subproblem.
inline KernelReport kernel_misr(const MisrInstance& input, std::int64_t k, const Ratio& eps,
                                std::optional<Knobs> knobs = {}, const PasOptions& opts = {}) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  const MisrInstance inst = normalize_instance(input);
  KernelReport rep;
  rep.knobs = knobs.value_or(theory_knobs(eps, opts.separator));
  const Wide pw = saturating_pow(k, 4 * static_cast<std::int64_t>(std::min<std::size_t>(rep.knobs.b, 64)));
  rep.size_bound = pw >= kWideSaturation ? kWideSaturation : Wide(rep.knobs.c) * pw;
  auto go = build_grid(inst, k);
  if (!go.is_grid()) {
    rep.grid_shortcut = true;
    rep.kernel = go.independent;
    return rep;
  }
  const auto family = enumerate_footprint_cell_sets(inst, *go.grid, rep.knobs.b);
  rep.candidates = family.size();
  std::set<Index> all;
  for (const auto& c : detail::solve_candidates(inst, *go.grid, family, rep.knobs.c))
    all.insert(c.solution.begin(), c.solution.end());
  rep.kernel.assign(all.begin(), all.end());
  return rep;
}

/// Knobs dominating the groups of a structured version of a known solution: c = b = largest group.
inline Knobs knobs_from_structure(const StructuredSolution& st) {
  std::size_t m = 1;
  for (const auto& g : st.grouping.groups) m = std::max(m, g.size());
  return {m, m};
}

}  // namespace pasrect::misr
