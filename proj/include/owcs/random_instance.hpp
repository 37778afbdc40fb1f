#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "owcs/geometry.hpp"
#include "owcs/model.hpp"

namespace owcs {

struct PlacementFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace rng_detail {

// splitmix64; distribution-free so generated instances are identical across
// standard libraries
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double uniform() { return std::ldexp(static_cast<double>(next() >> 11), -53); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // unbiased integer in [0, n)
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t threshold = (0 - n) % n;
    while (true) {
      std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }
};

}  // namespace rng_detail

// Uniform random layout in a rectangle with minimum-separation rejection
// sampling; byte-reproducible for a given seed.
inline Instance generate_random_instance(std::uint64_t seed, int n_t, int n_s,
                                         double width_m, double height_m,
                                         const CableCatalog& catalog, double min_separation_m) {
  if (n_t < 1) throw std::invalid_argument("at least one turbine required");
  if (n_s < 1) throw std::invalid_argument("at least one substation required");
  rng_detail::SplitMix64 rng(seed);
  std::vector<Point> placed;
  auto place_one = [&]() {
    for (int attempt = 0; attempt < 10000; ++attempt) {
      Point p{rng.uniform(0.0, width_m), rng.uniform(0.0, height_m)};
      bool ok = true;
      for (const Point& q : placed) {
        if (distance(p, q) < min_separation_m) {
          ok = false;
          break;
        }
      }
      if (ok) {
        placed.push_back(p);
        return;
      }
    }
    throw PlacementFailure("could not place node with requested separation");
  };
  for (int i = 0; i < n_s + n_t; ++i) place_one();

  Instance inst;
  inst.substations.assign(placed.begin(), placed.begin() + n_s);
  inst.turbines.assign(placed.begin() + n_s, placed.end());
  inst.catalog = catalog;
  inst.neighbor_truncation = 15;
  return inst;
}

}  // namespace owcs
