#pragma once

#include <algorithm>
#include <cstdio>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pasrect/geometry.hpp"
#include "pasrect/misr.hpp"

namespace pasrect::svg {

namespace detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

// Maps world coordinates onto a canvas with y pointing up.
struct Frame {
  Coord x0 = 0, y0 = 0, x1 = 1, y1 = 1;
  double size = 600;

  double scale() const { return size / static_cast<double>(std::max<Coord>({x1 - x0, y1 - y0, 1})); }
  double sx(Coord x) const { return static_cast<double>(x - x0) * scale(); }
  double sy(Coord y) const { return static_cast<double>(y1 - y) * scale(); }
  double width() const { return static_cast<double>(x1 - x0) * scale(); }
  double height() const { return static_cast<double>(y1 - y0) * scale(); }
};

inline std::string header(const Frame& f) {
  std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(f.width()) + "\" height=\"" +
       num(f.height()) + "\" viewBox=\"0 0 " + num(f.width()) + " " + num(f.height()) + "\">\n";
  s += "<rect class=\"frame\" x=\"0.000\" y=\"0.000\" width=\"" + num(f.width()) + "\" height=\"" + num(f.height()) +
       "\" fill=\"none\" stroke=\"black\"/>\n";
  return s;
}

inline std::string shape(const Frame& f, const Rect& r, bool filled, const std::string& cls, Index id) {
  return "<rect class=\"shape " + cls + "\" data-id=\"" + std::to_string(id) + "\" x=\"" + num(f.sx(r.x1)) +
         "\" y=\"" + num(f.sy(r.y2)) + "\" width=\"" + num(static_cast<double>(r.x2 - r.x1) * f.scale()) +
         "\" height=\"" + num(static_cast<double>(r.y2 - r.y1) * f.scale()) + "\" " +
         (filled ? "fill=\"steelblue\" fill-opacity=\"0.6\" stroke=\"navy\"" : "fill=\"none\" stroke=\"gray\"") +
         "/>\n";
}

}  // namespace detail

/// Selected rectangles are filled, the rest outlined. Grid lines (doubled coordinates) are
/// drawn dashed when a grid is given.
inline std::string render_misr(const MisrInstance& inst, std::span<const Index> selected = {},
                               const misr::Grid* grid = nullptr) {
  detail::Frame f;
  if (!inst.empty()) {
    f.x0 = f.y0 = std::numeric_limits<Coord>::max();
    f.x1 = f.y1 = std::numeric_limits<Coord>::min();
    for (const auto& r : inst.rects) {
      f.x0 = std::min(f.x0, r.x1);
      f.y0 = std::min(f.y0, r.y1);
      f.x1 = std::max(f.x1, r.x2);
      f.y1 = std::max(f.y1, r.y2);
    }
  }
  std::vector<char> sel(inst.size(), 0);
  for (auto i : selected)
    if (i < sel.size()) sel[i] = 1;
  std::string s = detail::header(f);
  for (Index i = 0; i < inst.size(); ++i)
    s += detail::shape(f, inst[i], sel[i] != 0, sel[i] ? "selected" : "unselected", i);
  if (grid) {
    const double sc = f.scale();
    for (auto v : grid->interior_vertical()) {
      const double x = (static_cast<double>(v) / 2.0 - static_cast<double>(f.x0)) * sc;
      s += "<line class=\"grid\" x1=\"" + detail::num(x) + "\" y1=\"0.000\" x2=\"" + detail::num(x) + "\" y2=\"" +
           detail::num(f.height()) + "\" stroke=\"red\" stroke-dasharray=\"4 2\"/>\n";
    }
    for (auto h : grid->interior_horizontal()) {
      const double y = (static_cast<double>(f.y1) - static_cast<double>(h) / 2.0) * sc;
      s += "<line class=\"grid\" x1=\"0.000\" y1=\"" + detail::num(y) + "\" x2=\"" + detail::num(f.width()) +
           "\" y2=\"" + detail::num(y) + "\" stroke=\"red\" stroke-dasharray=\"4 2\"/>\n";
    }
  }
  return s + "</svg>\n";
}

/// Packed items filled inside the N x N frame.
inline std::string render_packing(Coord N, std::span<const Item> items, const Packing* packing = nullptr) {
  detail::Frame f;
  f.x1 = f.y1 = std::max<Coord>(N, 1);
  std::string s = detail::header(f);
  if (packing)
    for (const auto& p : packing->placements) {
      if (p.item >= items.size()) continue;
      s += detail::shape(f, footprint(p, items[p.item]), true, "packed", p.item);
    }
  return s + "</svg>\n";
}

/// Number of drawn objects (frame and grid lines excluded).
inline std::size_t count_shapes(const std::string& svg) {
  std::size_t n = 0;
  for (auto pos = svg.find("class=\"shape"); pos != std::string::npos; pos = svg.find("class=\"shape", pos + 1)) ++n;
  return n;
}

}  // namespace pasrect::svg
