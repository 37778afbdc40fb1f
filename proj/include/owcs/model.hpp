#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace owcs {

// 1-based node ids: 1..n_s are substations, n_s+1..n_s+n_t are turbines.
using NodeId = int;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct CableType {
  int capacity = 0;        // max turbines supported downstream
  double cost_per_km = 0;  // currency per km
};

// Sorted, domination-free cable list. Capacities and unit costs are both
// strictly increasing after normalization, so the cheapest cable for a given
// load is always the smallest one that fits.
class CableCatalog {
 public:
  CableCatalog() = default;

  static CableCatalog normalize(std::vector<CableType> raw) {
    std::erase_if(raw, [](const CableType& c) {
      return c.capacity < 1 || !(c.cost_per_km > 0.0) || !std::isfinite(c.cost_per_km);
    });
    std::stable_sort(raw.begin(), raw.end(), [](const CableType& a, const CableType& b) {
      if (a.capacity != b.capacity) return a.capacity < b.capacity;
      return a.cost_per_km < b.cost_per_km;
    });
    std::vector<CableType> kept;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      bool dominated = false;
      for (std::size_t j = 0; j < raw.size() && !dominated; ++j) {
        if (i == j) continue;
        const CableType& c = raw[i];
        const CableType& d = raw[j];
        const bool identical = d.capacity == c.capacity && d.cost_per_km == c.cost_per_km;
        if (identical) {
          dominated = j < i;  // keep the first of exact duplicates
        } else {
          dominated = d.capacity >= c.capacity && d.cost_per_km <= c.cost_per_km;
        }
      }
      if (!dominated) kept.push_back(raw[i]);
    }
    if (kept.empty()) throw std::invalid_argument("cable catalog: no usable cable types");
    CableCatalog out;
    out.cables_ = std::move(kept);
    return out;
  }

  const std::vector<CableType>& cables() const { return cables_; }
  bool empty() const { return cables_.empty(); }
  int size() const { return static_cast<int>(cables_.size()); }

  int max_capacity() const { return cables_.empty() ? 0 : cables_.back().capacity; }

  // Smallest cable supporting k downstream turbines; absent for k == 0 (no
  // cable installed) and for k beyond the largest capacity.
  std::optional<int> cheapest_cable_for(int k) const {
    if (k <= 0 || k > max_capacity()) return std::nullopt;
    for (int c = 0; c < size(); ++c) {
      if (cables_[static_cast<std::size_t>(c)].capacity >= k) return c;
    }
    return std::nullopt;
  }

  // Cost of carrying k turbines over length_km: zero for no load, infinite
  // beyond the largest cable, otherwise length times the cheapest unit cost.
  double step_cost(double length_km, int k) const {
    if (k == 0) return 0.0;
    auto c = cheapest_cable_for(k);
    if (!c) return std::numeric_limits<double>::infinity();
    return cables_[static_cast<std::size_t>(*c)].cost_per_km * length_km;
  }

 private:
  std::vector<CableType> cables_;
};

struct Instance {
  std::vector<Point> substations;
  std::vector<Point> turbines;
  CableCatalog catalog;
  int neighbor_truncation = 15;

  int n_s() const { return static_cast<int>(substations.size()); }
  int n_t() const { return static_cast<int>(turbines.size()); }
  int n_nodes() const { return n_s() + n_t(); }

  bool is_substation(NodeId id) const { return id >= 1 && id <= n_s(); }
  bool is_turbine(NodeId id) const { return id > n_s() && id <= n_nodes(); }

  const Point& point_of(NodeId id) const {
    if (is_substation(id)) return substations[static_cast<std::size_t>(id - 1)];
    if (is_turbine(id)) return turbines[static_cast<std::size_t>(id - 1 - n_s())];
    throw std::out_of_range("node id out of range");
  }

  void validate() const {
    if (n_s() < 1) throw std::invalid_argument("instance: at least one substation required");
    if (n_t() < 1) throw std::invalid_argument("instance: at least one turbine required");
    if (catalog.empty()) throw std::invalid_argument("instance: empty cable catalog");
    if (neighbor_truncation < 1)
      throw std::invalid_argument("instance: neighbor truncation must be positive");
    for (NodeId i = 1; i <= n_nodes(); ++i) {
      const Point& p = point_of(i);
      if (!std::isfinite(p.x) || !std::isfinite(p.y))
        throw std::invalid_argument("instance: non-finite coordinate");
      for (NodeId j = i + 1; j <= n_nodes(); ++j) {
        const Point& q = point_of(j);
        if (p.x == q.x && p.y == q.y)
          throw std::invalid_argument("instance: two nodes share a coordinate");
      }
    }
  }
};

}  // namespace owcs
