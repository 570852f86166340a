#include <doctest.h>

#include <cmath>

#include "gmt/counterexample.hpp"
#include "gmt/errors.hpp"
#include "gmt/hausdorff.hpp"

using namespace gmt;

namespace {

PointCloud segment(int count) {
  std::vector<Vec> pts;
  for (int i = 0; i < count; ++i) pts.push_back(Vec{(i + 0.5) / count, 0.0, 0.0});
  return PointCloud::make(pts, 2, "segment");
}

Cover interval_cover(int k) {
  Cover c;
  const double s = std::ldexp(1.0, -k);
  for (int j = 0; j < (1 << k); ++j) c.sets.push_back(CoverSet::box(Vec{j * s, 0, 0}, Vec{(j + 1) * s, 0, 0}, 2));
  return c;
}

PointCloud tower_centres(const CantorTower& t, int k) {
  std::vector<Vec> pts;
  for (std::uint64_t i = 0; i < t.count(k); ++i) pts.push_back(t.center(k, i));
  return PointCloud::make(pts, 2, t.label());
}

}  // namespace

TEST_CASE("segment covers") {
  const PointCloud e = segment(1000);
  for (int k = 1; k <= 8; ++k) {
    const Cover c = interval_cover(k);
    CHECK(content_upper(e, c, Gauge::power(1.0)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(content_upper(e, c, Gauge::power(2.0)) == doctest::Approx(std::ldexp(1.0, -k)).epsilon(1e-12));
  }
  Cover partial = interval_cover(3);
  partial.sets.pop_back();
  CHECK_THROWS_AS(content_upper(e, partial, Gauge::power(1.0)), CoverInvalidError);
  Cover small = interval_cover(3);
  small.delta = 0.01;
  CHECK_THROWS_AS(content_upper(e, small, Gauge::power(1.0)), PreconditionError);
}

TEST_CASE("adding sets never decreases the content") {
  const PointCloud e = segment(200);
  Cover c = interval_cover(4);
  const double base = content_upper(e, c, Gauge::power(1.0));
  c.sets.push_back(CoverSet::ball(Vec{0.5, 0.5, 0}, 0.1, 2));
  CHECK(content_upper(e, c, Gauge::power(1.0)) >= base);
  CHECK(content_upper(e, c, Gauge::power(2.0)) <= content_upper(e, c, Gauge::power(1.0)));
}

TEST_CASE("natural cover of the target Cantor set") {
  const int k = 6;
  const CantorTower t = CantorTower::target(1.0, k);
  const PointCloud e = tower_centres(t, k);
  const double side = 1.0 / std::log(4.0) * std::ldexp(1.0, -k) / k;
  CHECK(2.0 * t.inner(k) == doctest::Approx(side).epsilon(1e-14));
  Cover c;
  for (std::uint64_t i = 0; i < t.count(k); ++i) {
    const Vec ctr = t.center(k, i);
    const double r = t.inner(k);
    c.sets.push_back(CoverSet::box(Vec{ctr[0] - r, ctr[1] - r, 0}, Vec{ctr[0] + r, ctr[1] + r, 0}, 2, 2 * r));
  }
  const double oracle = std::pow(4.0, k) * side * side * std::pow(std::log(1.0 / side), 2);
  CHECK(content_upper(e, c, Gauge::log_power(2.0, 2.0)) == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("weighted covers") {
  const PointCloud e = segment(100);
  const Cover c = interval_cover(3);
  WeightedCover wc;
  for (const auto& s : c.sets) wc.add(1.0, s);
  const WeightedBound b = weighted_content_upper(e, wc, Gauge::power(1.0));
  CHECK(b.weighted == doctest::Approx(content_upper(e, c, Gauge::power(1.0))).epsilon(1e-15));
  CHECK(b.min_multiplicity >= 1.0);
  CHECK(b.hausdorff_bound == doctest::Approx(b.doubling_constant * b.weighted));

  const CoverSet ball = CoverSet::ball(Vec{0.5, 0, 0}, 0.6, 2);
  WeightedCover one, two;
  one.add(1.0, ball);
  two.add(0.5, ball);
  two.add(0.5, ball);
  CHECK(weighted_content_upper(e, two, Gauge::power(1.0)).weighted ==
        doctest::Approx(weighted_content_upper(e, one, Gauge::power(1.0)).weighted));
  WeightedCover thin;
  thin.add(0.5, ball);
  CHECK_THROWS_AS(weighted_content_upper(e, thin, Gauge::power(1.0)), CoverInvalidError);
  CHECK_THROWS_AS(thin.add(-1.0, ball), PreconditionError);

  WeightedCover redundant = wc;
  redundant.add(1.0, ball);
  const WeightedCover pruned = greedy_prune(e, redundant, Gauge::power(1.0));
  const WeightedBound pb = weighted_content_upper(e, pruned, Gauge::power(1.0));
  CHECK(pb.min_multiplicity >= 1.0);
  CHECK(pb.weighted <= weighted_content_upper(e, redundant, Gauge::power(1.0)).weighted);
}

TEST_CASE("box counting") {
  const PointCloud single = PointCloud::make({Vec{0.3, 0.7, 0}}, 2, "point");
  CHECK(box_count(single, 0.1, Gauge::power(2.0)) == doctest::Approx(0.02));

  std::vector<Vec> grid;
  for (int i = 0; i < 256; ++i)
    for (int j = 0; j < 256; ++j) grid.push_back(Vec{(i + 0.5) / 256, (j + 0.5) / 256, 0});
  const PointCloud square = PointCloud::make(grid, 2, "square");
  for (int k = 1; k <= 8; ++k) {
    CHECK(box_count(square, std::ldexp(1.0, -k), Gauge::power(2.0)) == doctest::Approx(2.0).epsilon(1e-12));
  }

  const CantorTower t = CantorTower::target(1.0, 8);
  const PointCloud cset = tower_centres(t, 8);
  double prev = 1e300;
  const double first = box_count(cset, 0.25, Gauge::power(2.0));
  for (int k = 2; k <= 10; ++k) {
    const double v = box_count(cset, std::ldexp(1.0, -k), Gauge::power(2.0));
    CHECK(v <= prev);
    prev = v;
  }
  CHECK(prev < 0.2 * first);
}

TEST_CASE("mass distribution lower bounds") {
  // Middle-thirds Cantor set: masses 2^-k on intervals of length 3^-k.
  const double s = std::log(2.0) / std::log(3.0);
  MassTree cantor;
  std::vector<int> level{cantor.add(-1, 1.0, 1.0)};
  for (int k = 1; k <= 12; ++k) {
    std::vector<int> next;
    for (int p : level) {
      for (int c = 0; c < 2; ++c) next.push_back(cantor.add(p, std::pow(3.0, -k), std::ldexp(1.0, -k)));
    }
    level = std::move(next);
  }
  const MassLowerBound cb = mass_distribution_lower(cantor, Gauge::power(s));
  CHECK(cb.inf_ratio == doctest::Approx(1.0).epsilon(1e-9));

  MassTree sq;
  int node = sq.add(-1, std::sqrt(2.0), 1.0);
  for (int k = 1; k <= 10; ++k) {
    int keep = -1;
    for (int c = 0; c < 4; ++c) {
      const int id = sq.add(node, std::ldexp(std::sqrt(2.0), -k), std::pow(4.0, -k));
      if (c == 0) keep = id;
    }
    node = keep;
  }
  const MassLowerBound sb = mass_distribution_lower(sq, Gauge::power(2.0));
  CHECK(sb.inf_ratio == doctest::Approx(0.5).epsilon(1e-12));
  for (double v : sb.depth_min) CHECK(v == doctest::Approx(0.5).epsilon(1e-12));

  MassTree bad;
  const int r = bad.add(-1, 1.0, 1.0);
  bad.add(r, 0.5, 0.3);
  CHECK_THROWS_AS(bad.validate(), TreeInvalidError);
}
