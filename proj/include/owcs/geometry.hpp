#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "owcs/model.hpp"

namespace owcs {

inline double distance(const Point& p, const Point& q) {
  return std::hypot(p.x - q.x, p.y - q.y);
}

struct Segment {
  Point a;
  Point b;
  NodeId na = 0;
  NodeId nb = 0;
};

namespace geo_detail {

constexpr double kOrientEps = 1e-9;

// Sign of the cross product (q-p) x (r-p) with a relative tolerance, so that
// nearly-collinear triples (turbine rows laid out on a grid) test as collinear.
inline int orientation(const Point& p, const Point& q, const Point& r) {
  const double ux = q.x - p.x, uy = q.y - p.y;
  const double vx = r.x - p.x, vy = r.y - p.y;
  const double cross = ux * vy - uy * vx;
  const double tol = kOrientEps * std::hypot(ux, uy) * std::hypot(vx, vy);
  if (cross > tol) return 1;
  if (cross < -tol) return -1;
  return 0;
}

// For r collinear with p-q: does r lie on the closed segment p-q?
inline bool on_segment(const Point& p, const Point& q, const Point& r) {
  const double ux = q.x - p.x, uy = q.y - p.y;
  const double len2 = ux * ux + uy * uy;
  const double t = (r.x - p.x) * ux + (r.y - p.y) * uy;
  const double tol = kOrientEps * len2;
  return t >= -tol && t <= len2 + tol;
}

}  // namespace geo_detail

// True iff the closed segments intersect anywhere outside a shared endpoint
// node. Sharing a node id never counts (tree edges meet at nodes); a T
// junction or collinear overlap without a shared id does.
inline bool segments_cross(const Segment& s1, const Segment& s2) {
  if (s1.na == s2.na || s1.na == s2.nb || s1.nb == s2.na || s1.nb == s2.nb) return false;
  using geo_detail::on_segment;
  using geo_detail::orientation;
  const int o1 = orientation(s1.a, s1.b, s2.a);
  const int o2 = orientation(s1.a, s1.b, s2.b);
  const int o3 = orientation(s2.a, s2.b, s1.a);
  const int o4 = orientation(s2.a, s2.b, s1.b);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  if (o1 == 0 && on_segment(s1.a, s1.b, s2.a)) return true;
  if (o2 == 0 && on_segment(s1.a, s1.b, s2.b)) return true;
  if (o3 == 0 && on_segment(s2.a, s2.b, s1.a)) return true;
  if (o4 == 0 && on_segment(s2.a, s2.b, s1.b)) return true;
  return false;
}

// All crossing pairs (i, j), i < j, in lexicographic order.
inline std::vector<std::pair<int, int>> all_crossings(const std::vector<Segment>& edges) {
  std::vector<std::pair<int, int>> out;
  const int n = static_cast<int>(edges.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (segments_cross(edges[static_cast<std::size_t>(i)], edges[static_cast<std::size_t>(j)]))
        out.emplace_back(i, j);
    }
  }
  return out;
}

}  // namespace owcs
