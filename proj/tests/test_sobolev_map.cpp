#include <doctest.h>

#include <cmath>
#include <memory>

#include "gmt/errors.hpp"
#include "gmt/sobolev_map.hpp"

using namespace gmt;

namespace {

const double kPi = std::acos(-1.0);

SampledMap constant_map(double spacing) {
  return SampledMap::from_function([](const Vec&) { return Vec{0.3, -0.2, 0.0}; }, 2, 2, spacing,
                                   "constant");
}

SampledMap square_map(double spacing) {
  return SampledMap::from_function(
      [](const Vec& x) { return Vec{x[0] * x[0] - x[1] * x[1], 2.0 * x[0] * x[1], 0.0}; }, 2, 2,
      spacing, "z^2");
}

double neighbourhood_energy(const SampledMap& f, const WhitneyDecomposition& d, const DyadicCube& q) {
  double e = cube_energy(f, q);
  for (const auto& p : d.neighbors(q)) e += cube_energy(f, p);
  return e;
}

}  // namespace

TEST_CASE("cube averages") {
  const double h = 1.0 / 64;
  DyadicCube q;
  q.level = 1;
  q.dim = 2;
  q.corner = {0, 0, 0};
  const Vec c = cube_average(constant_map(h), q);
  CHECK(c[0] == 0.3);
  CHECK(c[1] == -0.2);
  const Vec a = cube_average(SampledMap::identity(2, h), q);
  CHECK(std::abs(a[0] - 0.25) <= h);
  CHECK(std::abs(a[1] - 0.25) <= h);
  const auto sq = SampledMap::from_function(
      [](const Vec& x) { return Vec{x[0] * x[0] + x[1] * x[1], 0.0, 0.0}; }, 2, 1, h, "|x|^2");
  CHECK(cube_average(sq, q)[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-3 * 6.0));
}

TEST_CASE("cube radii") {
  const auto d = WhitneyDecomposition::decompose(Domain::unit_ball(2), 7);
  const auto cst = constant_map(1.0 / 256);
  const auto id = SampledMap::identity(2, 1.0 / 256);
  for (std::size_t j = 0; j < d.size(); j += 5) {
    const DyadicCube& q = d.cubes()[j];
    CHECK(cube_radius(cst, d, q) == 0.0);
    if (q.level >= d.max_level() - 1) continue;
    const double r = cube_radius(id, d, q);
    CHECK(r / q.diam() >= 1.0 / 8);
    CHECK(r / q.diam() <= 8.0);
  }
}

TEST_CASE("Poincare-type bound with the calibrated constant") {
  const double c = builtin_defaults().poincare_c;
  const auto d = WhitneyDecomposition::decompose(Domain::unit_ball(2), 7);
  for (const auto& f : {SampledMap::identity(2, 1.0 / 256), square_map(1.0 / 256)}) {
    for (std::size_t j = 0; j < d.size(); j += 3) {
      const DyadicCube& q = d.cubes()[j];
      if (q.level >= d.max_level() - 1) continue;
      const double r = cube_radius(f, d, q);
      CHECK(r * r <= c * neighbourhood_energy(f, d, q) * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("Dirichlet energy") {
  CHECK(dirichlet_energy(SampledMap::identity(2, 1.0 / 256), region_ball(2)).energy ==
        doctest::Approx(2.0 * kPi).epsilon(0.02));
  CHECK(dirichlet_energy(constant_map(1.0 / 128), region_ball(2)).energy == 0.0);
  // |x|^{-1/2} x: |Df|^2 = 1.25 / r, radial integral 2 pi * 1.25.
  CHECK(dirichlet_energy(SampledMap::radial(0.5, 2, 1.0 / 256), region_ball(2)).energy ==
        doctest::Approx(2.5 * kPi).epsilon(0.02));
}

TEST_CASE("S families") {
  const Vec o{};
  CHECK(build_S_family(o, 1.0, 2, 60).mass() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(build_S_family(o, 1.0, 3, 60).mass() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  const double m20 = build_S_family(o, 1.0, 3, 20).mass();
  CHECK(std::abs(m20 - 1.0 / 3.0) <= std::ldexp(1.0, -19));
  for (double r : {0.7, 1e-3, 3e-6}) {
    for (int n : {2, 3}) {
      const int len = s_family_length(n, 1e-6);
      CHECK(build_S_family(o, r, n, len).mass() <= std::pow(r, n) * (1.0 + 1e-15));
    }
  }
  CHECK_THROWS_AS(build_S_family(o, 0.0, 2, 4), PreconditionError);
}

TEST_CASE("R families") {
  const Modulus m = Modulus::power(1.0, 0.5);
  const Vec o{};
  const double r = std::ldexp(1.0, -5);
  CHECK(dyadic_index(r) == 5);
  CHECK(dyadic_index(0.9 * r) == 6);
  const BallFamily f = build_R_family(o, r, m, 2, 1e-12);
  REQUIRE(f.size() > 0);
  CHECK(f.balls().front().provenance.index == 5);
  for (const auto& b : f.balls()) {
    CHECK(b.radius == doctest::Approx(std::ldexp(1.0, -b.provenance.index - 1)).epsilon(1e-14));
    CHECK(b.weight == doctest::Approx(2.0).epsilon(1e-14));
  }
  CHECK(f.mass() == doctest::Approx(0.5 * (4.0 / 3.0) * std::ldexp(1.0, -10)).epsilon(1e-9));
  CHECK(f.mass() <= 2.0 * 0.5 * r * r);
  CHECK_THROWS_AS(build_R_family(o, 3.0, m, 2), RangeError);
  CHECK(build_R_family(o, 3.0, m, 2, 1e-6, true).balls().front().provenance.index == m.base_index());
}

TEST_CASE("assembled family") {
  const Modulus m = Modulus::power(1.0, 1.0);
  const auto d = WhitneyDecomposition::decompose(Domain::unit_ball(2), 10);

  const auto cst = constant_map(1.0 / 128);
  CHECK(assemble_family(cube_field(cst, d), d, m).seeds().empty());

  const auto f = SampledMap::identity(2, 1.0 / 256);
  const AssembledFamily fam = assemble_family(cube_field(f, d), d, m);
  CHECK(std::isfinite(fam.mass()));
  CHECK(fam.mass() <= family_constant(m, 2) * 2.0 * kPi);
  CHECK(fam.materialize().recompute_mass() == doctest::Approx(fam.mass()).epsilon(1e-9));

  const auto f2 = SampledMap::identity(2, 1.0 / 128);
  const double coarse = assemble_family(cube_field(f2, d), d, m).mass();
  CHECK(std::abs(coarse - fam.mass()) / fam.mass() < 0.1);
}

TEST_CASE("sampled modulus check") {
  auto f = SampledMap::identity(2, 1.0 / 128);
  CHECK_THROWS_AS(check_modulus(f, 100, 1), PreconditionError);
  f.set_modulus(std::make_shared<Modulus>(Modulus::power(1.0, 1.0)));
  const ModulusCheck c = check_modulus(f, 2000, 1);
  CHECK(c.pass);
  CHECK(c.worst_ratio <= 1.0 + 1e-12);
}
