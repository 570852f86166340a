#include <doctest.h>

#include <cmath>

#include "gmt/counterexample.hpp"
#include "gmt/errors.hpp"
#include "gmt/random.hpp"

using namespace gmt;

namespace {

double sup_dist(const Vec& a, const Vec& b) { return std::max(std::abs(a[0] - b[0]), std::abs(a[1] - b[1])); }

// Brute force: deepest generation k whose closed P_{k,i} contains x outside
// the open Q_{k,i}; -1 when x lies in a generation-K square.
std::pair<int, std::uint64_t> brute_locate(const Vec& x, const CantorTower& t) {
  std::pair<int, std::uint64_t> best{-1, 0};
  for (int k = 1; k <= t.depth(); ++k) {
    for (std::uint64_t i = 0; i < t.count(k); ++i) {
      const double d = sup_dist(x, t.center(k, i));
      if (d <= t.outer(k) && d >= t.inner(k)) best = {k, i};
    }
  }
  return best;
}

}  // namespace

TEST_CASE("tower radii") {
  const CantorTower s = CantorTower::source(0.25, 6);
  CHECK(2.0 * s.outer(1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(2.0 * s.inner(1) == doctest::Approx(0.25).epsilon(1e-15));
  const Vec c = s.center(1, 0);
  CHECK(c[0] == doctest::Approx(0.25));
  CHECK(c[1] == doctest::Approx(0.25));
  const CantorTower t = CantorTower::target(1.0, 6);
  CHECK(2.0 * t.inner(2) == doctest::Approx(1.0 / (8.0 * std::log(4.0))).epsilon(1e-14));
  CHECK(t.count(3) == 64);
}

TEST_CASE("children tile their parent square") {
  for (const CantorTower& t : {CantorTower::source(0.25, 6), CantorTower::source(0.1, 5),
                               CantorTower::target(1.0, 6), CantorTower::target(0.3, 6)}) {
    for (int k = 0; k < t.depth(); ++k) {
      for (std::uint64_t i = 0; i < t.count(k); i += 3) {
        const Vec q = t.center(k, i);
        CHECK(2.0 * t.outer(k + 1) == doctest::Approx(t.inner(k)).epsilon(1e-14));
        for (std::uint64_t j = 0; j < 4; ++j) {
          const Vec c = t.center(k + 1, 4 * i + j);
          CHECK(std::abs(std::abs(c[0] - q[0]) - t.outer(k + 1)) <= 1e-15);
          CHECK(std::abs(std::abs(c[1] - q[1]) - t.outer(k + 1)) <= 1e-15);
        }
      }
    }
  }
}

TEST_CASE("locating frames") {
  const CantorTower s = CantorTower::source(0.25, 5);
  const FrameLocation mid = locate(Vec{0.5, 0.5, 0}, s);
  CHECK(mid.kind == FrameLocation::Kind::frame);
  CHECK(mid.k == 1);
  CHECK(mid.i == 0);
  CHECK(mid.boundary);
  const FrameLocation deep = locate(s.center(1, 1), s);
  CHECK(deep.k >= 2);
  CHECK(locate(Vec{1.5, 0.5, 0}, s).kind == FrameLocation::Kind::exterior);
  CHECK(locate(s.center(5, 77), s).kind == FrameLocation::Kind::cantor_limit);

  Rng rng(11);
  for (int n = 0; n < 300; ++n) {
    const Vec x{uniform01(rng), uniform01(rng), 0};
    const FrameLocation loc = locate(x, s);
    const auto [k, i] = brute_locate(x, s);
    if (k < 0) {
      CHECK(loc.kind == FrameLocation::Kind::cantor_limit);
    } else {
      CHECK(loc.k == k);
      CHECK(loc.i == i);
    }
  }
}

TEST_CASE("radial stretches") {
  const RadialStretch id = RadialStretch::between(0.1, 0.3, 0.1, 0.3);
  CHECK(id.a == doctest::Approx(1.0));
  CHECK(id.b == doctest::Approx(0.0).epsilon(1e-15));
  const RadialStretch st = RadialStretch::between(0.1, 0.3, 0.02, 0.25);
  CHECK(std::abs(st.a * 0.1 + st.b - 0.02) <= 1e-12);
  CHECK(std::abs(st.a * 0.3 + st.b - 0.25) <= 1e-12);
  const Vec out = st.apply(Vec{0.3, -0.1, 0});
  CHECK(std::max(std::abs(out[0]), std::abs(out[1])) == doctest::Approx(0.25).epsilon(1e-15));
  const Vec midp = st.apply(Vec{-0.05, 0.2, 0});
  CHECK(std::max(std::abs(midp[0]), std::abs(midp[1])) == doctest::Approx(0.135).epsilon(1e-14));
  CHECK_THROWS_AS(st.apply(Vec{0.01, 0.0, 0}), DomainError);
}

TEST_CASE("h is continuous across generations and maps frames to frames") {
  const CantorTower s = CantorTower::source(0.25, 8);
  const CantorTower t = CantorTower::target(1.0, 8);
  Rng rng(5);
  for (int n = 0; n < 2000; ++n) {
    const int k = 1 + static_cast<int>(uniform01(rng) * 7);
    const auto i = static_cast<std::uint64_t>(uniform01(rng) * s.count(k));
    const double r = s.inner(k);
    const double u = uniform(rng, -r, r);
    const int side = static_cast<int>(uniform01(rng) * 4);
    const Vec y = side == 0 ? Vec{r, u, 0} : side == 1 ? Vec{-r, u, 0} : side == 2 ? Vec{u, r, 0} : Vec{u, -r, 0};
    const Vec c = s.center(k, i);
    const Vec z = frame_stretch(s, t, k).apply(y, 1e-12);
    const Vec ct = t.center(k, i);
    const Vec from_frame{ct[0] + z[0], ct[1] + z[1], 0};
    CHECK(sup_dist(from_frame, evaluate_h(Vec{c[0] + y[0], c[1] + y[1], 0}, s, t)) <= 2e-12);
  }
  for (int n = 0; n < 500; ++n) {
    const Vec x{uniform01(rng), uniform01(rng), 0};
    const FrameLocation a = locate(x, s);
    if (a.kind != FrameLocation::Kind::frame || a.boundary) continue;
    const Vec hx = evaluate_h(x, s, t);
    const Vec ct = t.center(a.k, a.i);
    const double d = sup_dist(hx, ct);
    CHECK(d >= t.inner(a.k) * (1.0 - 1e-12));
    CHECK(d <= t.outer(a.k) * (1.0 + 1e-12));
  }
  const Vec outside{1.5, -0.5, 0};
  CHECK(evaluate_h(outside, s, t)[0] == 1.5);
}

TEST_CASE("Hoelder behaviour of h") {
  const CantorTower s = CantorTower::source(0.25, 12);
  const CantorTower t = CantorTower::target(1.0, 12);
  const HolderEstimate h = holder_ratio(s, t, 20000, 3);
  CHECK(h.beta == doctest::Approx(0.5));
  CHECK(std::isfinite(h.sup_ratio));
  CHECK(h.sup_ratio < 2.0);

  // Cross-frame pairs: a frame point and a point of a grandchild square.
  Rng rng(9);
  for (int n = 0; n < 500; ++n) {
    const int k = 1 + static_cast<int>(uniform01(rng) * 6);
    const auto i = static_cast<std::uint64_t>(uniform01(rng) * s.count(k));
    const Vec c = s.center(k, i);
    const double r = s.inner(k), R = s.outer(k);
    const double rad = uniform(rng, r, R), u = uniform(rng, -rad, rad);
    const Vec x{c[0] + rad, c[1] + u, 0};
    const std::uint64_t j = 4 * i + static_cast<std::uint64_t>(uniform01(rng) * 4);
    const Vec cj = s.center(k + 1, j);
    const double rj = s.inner(k + 1);
    const Vec y{cj[0] + uniform(rng, -rj, rj), cj[1] + uniform(rng, -rj, rj), 0};
    CHECK(sup_dist(evaluate_h(x, s, t), evaluate_h(y, s, t)) <= 2.0 * t.outer(k) * (1.0 + 1e-12));
    CHECK(sup_dist(x, y) >= (s.outer(k + 1) - s.inner(k + 1)) * (1.0 - 1e-12));
  }
}

TEST_CASE("generation energy") {
  const CantorTower s = CantorTower::source(0.25, 12);
  for (int k = 1; k <= 3; ++k) {
    const double frames = std::pow(4.0, k) * (std::pow(2.0 * s.outer(k), 2) - std::pow(2.0 * s.inner(k), 2));
    CHECK(generation_energy(k, s, s, 4096) == doctest::Approx(2.0 * frames).epsilon(0.02));
  }
  const CantorTower t1 = CantorTower::target(1.0, 12);
  for (int k = 1; k <= 5; ++k) {
    const double closed = std::ldexp(frame_energy(frame_stretch(s, t1, k)), 2 * k);
    CHECK(generation_energy(k, s, t1, 4096) == doctest::Approx(closed).epsilon(0.03));
  }
  CHECK_THROWS_AS(generation_energy(2, s, t1, 100), ResolutionError);

  double partial = 0.0, prev = 0.0, last = 0.0;
  for (int k = 1; k <= 12; ++k) {
    const double term = std::ldexp(frame_energy(frame_stretch(s, t1, k)), 2 * k);
    if (k >= 4) CHECK(term / prev < 1.0);
    partial += term;
    prev = last = term;
  }
  // Terms decay like C / k^2: the tail beyond K is about C / (K + 1/2).
  const double tail = last * 144.0 / 12.5;
  CHECK(tail < 0.05 * partial);

  const CantorTower t3 = CantorTower::target(0.3, 12);
  prev = 0.0;
  for (int k = 1; k <= 12; ++k) {
    const double term = std::ldexp(frame_energy(frame_stretch(s, t3, k)), 2 * k);
    if (k >= 2) CHECK(term / prev >= 1.0 - 1.0 / k);
    prev = term;
  }
}

TEST_CASE("positive-measure witness") {
  const CantorTower t = CantorTower::target(1.0, 12);
  const WitnessReport w = witness_positive_measure(t, 1.0, 12);
  REQUIRE(w.ratio.size() == 13);
  const double c = 1.0 / std::log(4.0);
  for (int k = 1; k <= 12; ++k) {
    const double side = c * std::ldexp(1.0, -k) / k;
    const double oracle = std::pow(4.0, -k) / (side * side * std::pow(std::log(1.0 / side), 2));
    CHECK(w.ratio[k] == doctest::Approx(oracle).epsilon(1e-12));
  }
  CHECK(w.limit == doctest::Approx(4.0));
  CHECK(w.inf_ratio > 0.0);
  CHECK(w.tree_bound.inf_ratio == doctest::Approx(w.inf_ratio).epsilon(1e-9));

  const CantorTower t75 = CantorTower::target(0.75, 12);
  const WitnessReport w75 = witness_positive_measure(t75, 0.75, 12);
  CHECK(w75.limit == doctest::Approx(std::pow(2.0, 1.5)));
  CHECK(w75.inf_ratio > 0.0);

  const WitnessReport strong = witness_positive_measure(t, 1.0, 12, 3.0);
  CHECK(strong.limit == 0.0);
  for (int k = 4; k <= 12; ++k) CHECK(strong.ratio[k] < strong.ratio[k - 1]);

  CHECK_THROWS_AS(witness_positive_measure(CantorTower::target(0.3, 6), 0.3, 6), DomainError);
}

TEST_CASE("tower argument checks") {
  CHECK_THROWS_AS(CantorTower::source(0.6, 4), DomainError);
  CHECK_THROWS_AS(CantorTower::source(0.25, 25), DomainError);
  CHECK_THROWS_AS(CantorTower::target(0.0, 4), DomainError);
  CHECK_THROWS_AS(CantorTower::source(0.25, 3).center(2, 16), LookupError);
}
