#pragma once

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>

#include "owcs/design.hpp"
#include "owcs/model.hpp"

namespace owcs {

// Static plot of a design: substations as squares, turbines as numbered
// circles, cable stroke width by cable index.
inline std::string design_svg(const EdgeMatrix& tree, const Instance& inst) {
  double min_x = 1e300, min_y = 1e300, max_x = -1e300, max_y = -1e300;
  for (NodeId i = 1; i <= inst.n_nodes(); ++i) {
    const Point& p = inst.point_of(i);
    min_x = std::min(min_x, p.x);
    min_y = std::min(min_y, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  }
  const double span = std::max({max_x - min_x, max_y - min_y, 1.0});
  const double margin = 0.05 * span;
  const double scale = 900.0 / (span + 2 * margin);
  auto sx = [&](double x) { return (x - min_x + margin) * scale; };
  auto sy = [&](double y) { return 900.0 - (y - min_y + margin) * scale; };  // y up

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"900\" height=\"900\" "
        "viewBox=\"0 0 900 900\">\n";
  os << "<rect width=\"900\" height=\"900\" fill=\"white\"/>\n";
  for (const EdgeRow& r : tree) {
    const Point& a = inst.point_of(r.a);
    const Point& b = inst.point_of(r.b);
    const double w = 1.0 + std::max(r.cable, 0);
    os << "<line x1=\"" << sx(a.x) << "\" y1=\"" << sy(a.y) << "\" x2=\"" << sx(b.x)
       << "\" y2=\"" << sy(b.y) << "\" stroke=\"#1f4e79\" stroke-width=\"" << w << "\"/>\n";
  }
  const double r_node = std::clamp(scale * span * 0.012, 4.0, 10.0);
  for (NodeId i = 1; i <= inst.n_s(); ++i) {
    const Point& p = inst.point_of(i);
    os << "<rect x=\"" << sx(p.x) - r_node << "\" y=\"" << sy(p.y) - r_node << "\" width=\""
       << 2 * r_node << "\" height=\"" << 2 * r_node
       << "\" fill=\"#c0392b\" stroke=\"black\"/>\n";
  }
  for (NodeId i = inst.n_s() + 1; i <= inst.n_nodes(); ++i) {
    const Point& p = inst.point_of(i);
    os << "<circle cx=\"" << sx(p.x) << "\" cy=\"" << sy(p.y) << "\" r=\"" << r_node
       << "\" fill=\"#f3f7fb\" stroke=\"black\"/>\n";
    os << "<text x=\"" << sx(p.x) << "\" y=\"" << sy(p.y) + r_node * 0.4
       << "\" font-size=\"" << r_node * 1.1
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\">" << i << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

inline void write_svg(const EdgeMatrix& tree, const Instance& inst, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  f << design_svg(tree, inst);
}

}  // namespace owcs
