#include <doctest.h>

#include <cmath>

#include "gmt/errors.hpp"
#include "gmt/gauge.hpp"

using namespace gmt;

namespace {

// log 1/psi(e^-y) for psi_{2,s}, n = 2, C = 1, C_2 = 2 e^e, in long double.
long double phi_iterlog2(long double y, long double s) {
  const long double l1 = std::log(2.0L * std::exp(std::exp(1.0L))) + y;
  const long double l2 = std::log(l1);
  return std::sqrt(l1) * std::pow(l2, -s / 2.0L);
}

// alpha(t) = u/u' = t phi'(y*) with phi(y*) = log 1/t: bisection plus a
// central difference, independent of the closed-form derivative.
double alpha_oracle(double t, long double s) {
  const long double target = std::log(1.0L / t);
  long double lo = 1.0L, hi = 1e6L;
  for (int i = 0; i < 200; ++i) {
    const long double mid = 0.5L * (lo + hi);
    (phi_iterlog2(mid, s) < target ? lo : hi) = mid;
  }
  const long double y = 0.5L * (lo + hi);
  const long double h = 1e-4L * y;
  const long double d = (phi_iterlog2(y + h, s) - phi_iterlog2(y - h, s)) / (2.0L * h);
  return static_cast<double>(t * d);
}

}  // namespace

TEST_CASE("power and iterated-log moduli are allowable") {
  CHECK(check_allowable(Modulus::power(1.0, 0.5, 2, 0.5, 2.0), 128).all_pass());
  CHECK(check_allowable(Modulus::power(1.0, 1.0, 2, 0.5, 2.0), 128).all_pass());
  CHECK(check_allowable(Modulus::iterated_log(2, 1.0), 128).all_pass());
}

TEST_CASE("divergence integrals match closed forms") {
  const Modulus half = Modulus::power(1.0, 0.5);
  CHECK(divergence_integral_psi(half, std::exp(-10.0), std::exp(-1.0), 2) ==
        doctest::Approx(2.25).epsilon(1e-6));
  const Modulus id = Modulus::power(1.0, 1.0);
  for (int k : {2, 5, 30}) {
    CHECK(divergence_integral_psi(id, std::exp(-double(k)), std::exp(-1.0), 2) ==
          doctest::Approx(k - 1.0).epsilon(1e-6));
  }
  CHECK(divergence_integral_u(half, std::exp(-9.0), std::exp(-1.0), 2) ==
        doctest::Approx(4.0).epsilon(1e-6));
  for (double g : {0.25, 0.5, 1.0}) {
    const Modulus m = Modulus::power(1.0, g);
    CHECK(divergence_integral_u(m, std::exp(-20.0), std::exp(-2.0), 3) ==
          doctest::Approx(g * g * 18.0).epsilon(1e-6));
  }
}

TEST_CASE("convergent iterated-log tail stays bounded") {
  const Modulus m = Modulus::iterated_log(2, 2.0);
  double prev = divergence_integral_psi_log(m, 8.0, 10.0, 2);
  double prev_step = 1e300;
  for (double hi : {20.0, 40.0, 80.0, 160.0}) {
    const double v = divergence_integral_psi_log(m, 8.0, hi, 2);
    CHECK(v > prev);
    CHECK(v - prev < prev_step);
    prev_step = v - prev;
    prev = v;
  }
}

TEST_CASE("the two divergence integrals grow at matched rates") {
  const Modulus m = Modulus::iterated_log(2, 1.0);
  const double c = builtin_defaults().matched_rate_c;
  for (int j = 4; j <= 12; ++j) {
    const double hi = std::ldexp(1.0, j);
    const double a = divergence_integral_psi_log(m, 8.0, hi, 2);
    const double b = divergence_integral_u_log(m, 8.0, hi, 2);
    CHECK(a / b <= c);
    CHECK(a / b >= 1.0 / c);
  }
}

TEST_CASE("classification of built-in moduli") {
  CHECK(classify_divergence(Modulus::iterated_log(2, 1.0), 2).classification == Divergence::divergent);
  CHECK(classify_divergence(Modulus::iterated_log(2, 2.0), 2).classification == Divergence::convergent);
  CHECK(classify_divergence(Modulus::power(1.0, 0.5), 2).classification == Divergence::divergent);
}

TEST_CASE("alpha and lambda") {
  for (double g : {0.25, 0.5, 1.0}) {
    const Modulus m = Modulus::power(1.0, g);
    for (double t : {0.4, 1e-3, 1e-9, 1e-200}) CHECK(alpha(m, t) / t == doctest::Approx(g).epsilon(1e-12));
    for (int k = 1; k <= 60; k += 7) CHECK(lambda_k(m, k) == doctest::Approx(1.0 / g).epsilon(1e-12));
  }
  CHECK(alpha(Modulus::power(1.0, 1.0), 0.25) == doctest::Approx(0.25).epsilon(1e-14));

  const Modulus it = Modulus::iterated_log(2, 1.0);
  const double t = std::ldexp(1.0, -20);
  CHECK(alpha(it, t) == doctest::Approx(alpha_oracle(t, 1.0L)).epsilon(1e-6));
  CHECK(lambda_k(it, 21) >= lambda_k(it, 20));
  CHECK(lambda_k(it, 20) == doctest::Approx(t / alpha_oracle(t, 1.0L)).epsilon(1e-6));
  CHECK_NOTHROW(require_lambda_increasing(it, 200));
}

TEST_CASE("dyadic scales cover their range only") {
  const Modulus m = Modulus::power(1.0, 0.5);
  const DyadicScales s = dyadic_scales(m, 30);
  CHECK(s.base == m.base_index());
  CHECK(s.k_max() == 30);
  CHECK(s.alpha_at(10) == doctest::Approx(std::ldexp(0.5, -10)));
  CHECK(s.lambda_at(10) == doctest::Approx(2.0));
  CHECK_THROWS_AS(s.alpha_at(31), RangeError);
  CHECK_THROWS_AS(s.lambda_at(s.base - 1), RangeError);
}

TEST_CASE("iterated logarithm") {
  const double e = std::exp(1.0);
  CHECK(iterated_log(1, e) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(iterated_log(2, std::exp(e)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(iterated_log(3, std::exp(std::exp(e))) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("gauges") {
  const Gauge p = Gauge::power(2.0);
  CHECK(p(0.5) == doctest::Approx(0.25));
  CHECK(p.doubling_constant() == doctest::Approx(4.0));
  const Gauge g = Gauge::parse("logpower:2,1");
  CHECK(g(0.01) == doctest::Approx(1e-4 * std::log(100.0)));
  CHECK(g.validate().ok);
  CHECK_THROWS_AS(Gauge::parse("nope:1"), SchemaError);
  CHECK_THROWS_AS(Modulus::parse("power:1"), SchemaError);
}
