// Measures the chain, neighbour and Poincare-overlap constants on sample
// decompositions and prints them as a defaults JSON fragment.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include <json.hpp>

#include "gmt/config.hpp"
#include "gmt/random.hpp"
#include "gmt/sobolev_map.hpp"
#include "gmt/whitney.hpp"

namespace {

using namespace gmt;

Vec random_direction(Rng& rng, int n) {
  for (;;) {
    Vec v{};
    for (int i = 0; i < n; ++i) v[i] = uniform(rng, -1.0, 1.0);
    const double r = norm(v, n);
    if (r > 0.1 && r <= 1.0) return scale(1.0 / r, v);
  }
}

ChainConstants chain_constants(int n, int depth, int directions) {
  const auto d = WhitneyDecomposition::decompose(Domain::unit_ball(n), depth);
  Rng rng(20240611 + n);
  std::vector<ChainSample> samples;
  for (int i = 0; i < directions; ++i) {
    const auto chain = d.radial_chain(random_direction(rng, n));
    // The last two levels see the collar of the finite decomposition.
    for (const auto& s : chain_ratios(chain, depth - 2)) samples.push_back(s);
  }
  ChainConstants c;
  for (const auto& s : samples) {
    if (s.j <= 1) c.c3 = std::max(c.c3, static_cast<double>(s.count));
  }
  c.c1 = 1e300;
  for (const auto& s : samples) {
    if (static_cast<double>(s.count) <= c.c3) continue;
    c.c1 = std::min(c.c1, s.ratio);
    c.c2 = std::max(c.c2, s.ratio);
  }
  // Two significant digits, rounded outward.
  c.c1 = std::floor(c.c1 * 10.0) / 10.0;
  c.c2 = std::ceil(c.c2 * 10.0) / 10.0;
  return c;
}

// max over cubes of r_Q^n / integral of |Df|^n over Q and its neighbours.
double poincare_ratio(const SampledMap& f, const WhitneyDecomposition& d) {
  const CubeField field = cube_field(f, d);
  std::vector<double> e(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) e[i] = cube_energy(f, d.cubes()[i]);
  double worst = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    double s = e[i];
    for (const auto& q : d.neighbors(d.cubes()[i])) s += e[d.index_of(q)];
    if (s > 0.0) worst = std::max(worst, std::pow(field.radius[i], f.n()) / s);
  }
  return worst;
}

}  // namespace

int main() {
  Defaults out = builtin_defaults();
  out.chain2 = chain_constants(2, 16, 64);
  out.chain3 = chain_constants(3, 8, 64);
  out.neighbor_bound2 = WhitneyDecomposition::decompose(Domain::unit_ball(2), 12).max_neighbor_count();
  out.neighbor_bound3 = WhitneyDecomposition::decompose(Domain::unit_ball(3), 6).max_neighbor_count();

  const double h = 1.0 / 256;
  const auto d2 = WhitneyDecomposition::decompose(Domain::unit_ball(2), 9);
  std::vector<SampledMap> maps;
  maps.push_back(SampledMap::identity(2, h));
  maps.push_back(SampledMap::from_function(
      [](const Vec& x) { return Vec{x[0] * x[0] - x[1] * x[1], 2.0 * x[0] * x[1], 0.0}; }, 2, 2, h,
      "z^2"));
  maps.push_back(SampledMap::from_function(
      [](const Vec& x) { return Vec{x[0] + 0.5 * x[1] * x[1], x[1] - 0.3 * x[0] * x[0], 0.0}; }, 2,
      2, h, "shear"));
  maps.push_back(SampledMap::from_function(
      [](const Vec& x) { return Vec{x[0] * x[1], x[0] * x[0] + x[1], 0.0}; }, 2, 2, h, "mixed"));
  double cp = 0.0;
  for (const auto& f : maps) {
    const double r = poincare_ratio(f, d2);
    std::fprintf(stderr, "poincare %s: %.4f\n", f.label().c_str(), r);
    cp = std::max(cp, r);
  }
  out.poincare_c = std::ceil(cp * 100.0) / 100.0;
  std::printf("%s\n", to_json(out).dump(2).c_str());
}
