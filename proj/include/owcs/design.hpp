#pragma once

#include <vector>

#include "owcs/geometry.hpp"
#include "owcs/model.hpp"

namespace owcs {

// One cable run. After cable assignment `a` is the upstream (substation-side)
// endpoint, `downstream_count` the turbines fed through the edge and `cable`
// an index into the catalog; both are -1 before assignment.
struct EdgeRow {
  NodeId a = 0;
  NodeId b = 0;
  double length_km = 0.0;
  int downstream_count = -1;
  int cable = -1;
};

using EdgeMatrix = std::vector<EdgeRow>;

inline std::vector<Segment> segments_of(const EdgeMatrix& tree, const Instance& inst) {
  std::vector<Segment> segs;
  segs.reserve(tree.size());
  for (const EdgeRow& r : tree) {
    segs.push_back({inst.point_of(r.a), inst.point_of(r.b), r.a, r.b});
  }
  return segs;
}

// Total cost from assigned cables; infinite if any row lacks a cable.
inline double design_cost(const EdgeMatrix& tree, const CableCatalog& catalog) {
  double total = 0.0;
  for (const EdgeRow& r : tree) {
    total += catalog.step_cost(r.length_km, r.downstream_count);
  }
  return total;
}

inline double design_cost(const EdgeMatrix& tree, const Instance& inst) {
  return design_cost(tree, inst.catalog);
}

}  // namespace owcs
