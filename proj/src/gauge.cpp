#include "gmt/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "gmt/errors.hpp"
#include "spec_parse.hpp"

namespace gmt {

namespace {

constexpr double kLn2 = std::numbers::ln2;
// log(1e300): the floor below which plain-function moduli are not evaluated.
constexpr double kLogFloor = 690.7755278982137;

// Gauss-Kronrod on [a, b] with a relative error target; throws with the
// partial value when the estimate stays above `rtol`.
template <class F>
double integrate(F f, double a, double b, double rtol) {
  if (b <= a) return 0.0;
  double err = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, a, b, 25, 1e-11, &err);
  if (!std::isfinite(value) || err > rtol * std::abs(value) + 1e-300) {
    throw NumericError("quadrature did not converge", value);
  }
  return value;
}

// int_a^b g(s) ds for 0 < a < b, integrated in v = log s.
template <class G>
double integrate_log(G g, double a, double b, double rtol) {
  return integrate([&](double v) {
    const double s = std::exp(v);
    return g(s) * s;
  }, std::log(a), std::log(b), rtol);
}

}  // namespace

// -- Gauge -----------------------------------------------------------------

Gauge::Gauge(std::function<double(double)> eval, double doubling_constant, std::string label)
    : eval_(std::move(eval)), doubling_constant_(doubling_constant), label_(std::move(label)) {
  if (!(doubling_constant_ > 0.0)) throw SchemaError("gauge doubling constant must be positive");
}

Gauge Gauge::power(double a) {
  if (!(a > 0.0)) throw SchemaError("gauge exponent must be positive");
  return Gauge([a](double t) { return t <= 0.0 ? 0.0 : std::pow(t, a); }, std::exp2(a),
               "power:" + std::to_string(a));
}

Gauge Gauge::log_power(double a, double q) {
  if (!(a > 0.0) || q < 0.0) throw SchemaError("logpower gauge needs a > 0, q >= 0");
  const double t_star = std::exp(-q / a);
  const double h_star = std::pow(t_star, a) * std::pow(q / a, q);
  auto eval = [a, q, t_star, h_star](double t) {
    if (t <= 0.0) return 0.0;
    if (t >= t_star) return h_star;
    return std::pow(t, a) * std::pow(std::log(1.0 / t), q);
  };
  return Gauge(eval, std::exp2(a), "logpower:" + std::to_string(a) + "," + std::to_string(q));
}

Gauge Gauge::parse(std::string_view spec) {
  const auto p = detail::parse_spec(spec);
  if (p.name == "power") {
    detail::require_arity(p, 1, 1, spec);
    return power(p.args[0]);
  }
  if (p.name == "logpower") {
    detail::require_arity(p, 2, 2, spec);
    return log_power(p.args[0], p.args[1]);
  }
  throw SchemaError("unknown gauge '" + p.name + "'");
}

Gauge::Check Gauge::validate(int samples, double t_min) const {
  Check c;
  const double l0 = std::log(t_min);
  double prev = -1.0;
  for (int i = 0; i < samples; ++i) {
    const double t = std::exp(l0 + (0.0 - l0) * i / (samples - 1));
    const double h = eval_(t);
    if (!(h > 0.0)) {
      c.ok = false;
      c.failure = "h(t) not positive at t=" + std::to_string(t);
      return c;
    }
    if (h < prev * (1.0 - 1e-12)) {
      c.ok = false;
      c.failure = "h decreasing at t=" + std::to_string(t);
      return c;
    }
    prev = h;
    if (t <= 0.5) {
      const double ratio = eval_(2.0 * t) / h;
      c.worst_doubling_ratio = std::max(c.worst_doubling_ratio, ratio);
    }
  }
  if (c.worst_doubling_ratio > doubling_constant_ * (1.0 + 1e-12)) {
    c.ok = false;
    c.failure = "doubling constant exceeded";
  }
  if (eval_(t_min) > 1e-3 * eval_(1.0)) {
    c.ok = false;
    c.failure = "h does not decay at 0";
  }
  return c;
}

// -- Modulus ---------------------------------------------------------------

Modulus::Modulus(LogModulus form, double t0, double beta, int n, std::string label)
    : form_(std::move(form)), t0_(t0), beta_(beta), n_(n), label_(std::move(label)) {
  if (!(t0_ > 0.0 && t0_ < 1.0)) throw SchemaError("modulus t0 must lie in (0, 1)");
  if (!(beta_ > 0.0)) throw SchemaError("modulus beta must be positive");
  if (n_ < 1) throw SchemaError("modulus dimension must be positive");
  x_max_ = form_.x_max;
}

Modulus Modulus::power(double c, double gamma, int n, double t0, double beta) {
  if (!(c > 0.0) || !(gamma > 0.0) || gamma > 1.0) {
    throw SchemaError("power modulus needs C > 0 and 0 < gamma <= 1");
  }
  const double log_c = std::log(c);
  LogModulus f;
  f.phi = [=](double y) { return gamma * y - log_c; };
  f.dphi = [=](double) { return gamma; };
  f.phi_inv = [=](double x) { return (x + log_c) / gamma; };
  return Modulus(std::move(f), t0, beta, n,
                 "power:" + std::to_string(c) + "," + std::to_string(gamma));
}

Modulus Modulus::iterated_log(int l, double s, double c, double cl, int n, double t0,
                              double beta) {
  if (l < 2 || !(s > 0.0) || !(c > 0.0)) throw SchemaError("iterlog needs l >= 2, s > 0, C > 0");
  if (n < 2) throw SchemaError("iterlog needs n >= 2");
  if (cl <= 0.0) {
    double e = 1.0;
    for (int k = 0; k < l; ++k) e = std::exp(e);
    cl = 2.0 * e;
  }
  if (!(gmt::iterated_log(l, cl / 2.0) >= 1.0 - 1e-12)) {
    throw SchemaError("iterlog needs log^(l)(C_l/2) >= 1");
  }
  const double log_cl = std::log(cl);
  const double nn = n;

  // Iterated logs L_1..L_l of C_l * exp(y).
  auto logs = [=](double y, std::array<double, 8>& L) {
    L[1] = log_cl + y;
    for (int k = 2; k <= l; ++k) {
      if (!(L[k - 1] > 0.0)) throw RangeError("iterlog modulus evaluated outside its domain");
      L[k] = std::log(L[k - 1]);
    }
    if (!(L[l] > 0.0)) throw RangeError("iterlog modulus evaluated outside its domain");
  };
  if (l > 7) throw SchemaError("iterlog supports l <= 7");

  LogModulus f;
  f.phi = [=](double y) {
    std::array<double, 8> L{};
    logs(y, L);
    double lg = std::log(c) + (nn - 1.0) / nn * std::log(L[1]) - s / nn * std::log(L[l]);
    for (int k = 2; k <= l - 1; ++k) lg -= std::log(L[k]) / nn;
    return std::exp(lg);
  };
  f.dphi = [=, phi = f.phi](double y) {
    std::array<double, 8> L{};
    logs(y, L);
    double prod = L[1];
    double rel = (nn - 1.0) / nn / L[1];
    for (int k = 2; k <= l; ++k) {
      prod *= L[k];
      rel -= (k == l ? s : 1.0) / nn / prod;
    }
    return phi(y) * rel;
  };
  // phi blows up where L_l -> 0+; the increasing branch starts where
  // phi' changes sign.
  // L_l > 0 needs L_1 > exp^(l-2)(1).
  double y_dom = 1.0;
  for (int k = 0; k < l - 2; ++k) y_dom = std::exp(y_dom);
  y_dom -= log_cl;
  double lo = y_dom + 1e-9;
  double hi = lo + 1.0;
  while (f.dphi(hi) <= 0.0) hi = lo + 2.0 * (hi - lo);
  if (f.dphi(lo) > 0.0) {
    f.y_min = lo;
  } else {
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (f.dphi(mid) > 0.0 ? hi : lo) = mid;
    }
    f.y_min = hi;
  }
  std::string label = "iterlog:" + std::to_string(l) + "," + std::to_string(s) + "," +
                      std::to_string(c) + "," + std::to_string(cl);
  return Modulus(std::move(f), t0, beta, n, std::move(label));
}

Modulus Modulus::from_functions(std::function<double(double)> psi,
                                std::function<double(double)> psi_inv,
                                std::optional<std::function<double(double)>> psi_inv_deriv,
                                double t0, double beta, int n, std::string label) {
  std::function<double(double)> du;
  if (psi_inv_deriv) {
    du = *psi_inv_deriv;
  } else {
    du = [psi_inv](double t) {
      const double h = t * 1e-6;
      return (psi_inv(t + h) - psi_inv(t - h)) / (2.0 * h);
    };
  }
  LogModulus f;
  f.phi = [psi](double y) {
    if (y > kLogFloor) throw RangeError("modulus evaluated below the 1e-300 floor");
    return -std::log(psi(std::exp(-y)));
  };
  f.phi_inv = [psi_inv](double x) {
    if (x > kLogFloor) throw RangeError("modulus evaluated below the 1e-300 floor");
    return -std::log(psi_inv(std::exp(-x)));
  };
  f.dphi = [psi, psi_inv, du](double y) {
    const double t = psi(std::exp(-y));
    return psi_inv(t) / (t * du(t));
  };
  f.y_max = kLogFloor;
  f.x_max = kLogFloor;
  return Modulus(std::move(f), t0, beta, n, std::move(label));
}

Modulus Modulus::parse(std::string_view spec, int n) {
  const auto p = detail::parse_spec(spec);
  if (p.name == "power") {
    detail::require_arity(p, 2, 2, spec);
    return power(p.args[0], p.args[1], n);
  }
  if (p.name == "iterlog") {
    detail::require_arity(p, 2, 4, spec);
    const double l = p.args[0];
    if (l != std::floor(l)) throw SchemaError("iterlog level must be an integer");
    const double c = p.args.size() > 2 ? p.args[2] : 1.0;
    const double cl = p.args.size() > 3 ? p.args[3] : 0.0;
    return iterated_log(static_cast<int>(l), p.args[1], c, cl, n);
  }
  throw SchemaError("unknown modulus '" + p.name + "'");
}

double Modulus::phi_inverse(double x) const {
  if (form_.phi_inv) return form_.phi_inv(x);
  double lo = form_.y_min;
  if (form_.phi(lo) > x) throw RangeError("modulus not invertible at this value");
  double hi = std::max(lo + 1.0, x);
  while (form_.phi(hi) < x) {
    lo = hi;
    hi *= 2.0;
    if (hi > form_.y_max) throw RangeError("modulus inverse out of range");
  }
  std::uintmax_t iters = 200;
  const double guess = 0.5 * (lo + hi);
  const double y = boost::math::tools::newton_raphson_iterate(
      [&](double yy) { return std::make_pair(form_.phi(yy) - x, form_.dphi(yy)); }, guess, lo, hi,
      std::numeric_limits<double>::digits - 4, iters);
  return y;
}

double Modulus::psi(double t) const {
  if (!(t > 0.0)) throw RangeError("psi needs t > 0");
  return std::exp(-form_.phi(std::log(1.0 / t)));
}

double Modulus::psi_inv(double t) const {
  if (!(t > 0.0)) throw RangeError("psi^-1 needs t > 0");
  return std::exp(-phi_inverse(std::log(1.0 / t)));
}

double Modulus::psi_inv_deriv(double t) const {
  const double y = phi_inverse(std::log(1.0 / t));
  return std::exp(-y) / (t * form_.dphi(y));
}

int Modulus::base_index() const {
  int k = 0;
  while (std::ldexp(1.0, -k) > t0_) ++k;
  return k;
}

// -- allowability ----------------------------------------------------------

AllowabilityReport check_allowable(const Modulus& m, int grid_points, const Defaults& cfg) {
  if (grid_points < 16) throw PreconditionError("check_allowable needs at least 16 grid points");
  if (!(m.t0() < 1.0)) throw PreconditionError("t0 must be below 1");
  const double eps = cfg.grid_epsilon;
  if (!(eps >= 1e-300) || !(eps < m.t0())) throw RangeError("allowability grid underflows");

  AllowabilityReport rep;
  rep.cond_logom1.condition = "logom1";
  rep.cond_logom2.condition = "logom2";
  rep.cond_monotpsi.condition = "monotpsi";

  const double le = std::log(eps);
  const double lt = std::log(m.t0());
  rep.grid.resize(grid_points);
  for (int i = 1; i <= grid_points; ++i) {
    rep.grid[i - 1] = std::exp(le + (lt - le) * i / grid_points);
  }
  rep.grid.back() = m.t0();

  const double cpm = cfg.pseudomonotone_c;
  const std::size_t N = rep.grid.size();
  std::vector<double> g(N), h(N), yv(N), yh(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double t = rep.grid[i];
    const double x = std::log(1.0 / t);
    double y = 0.0;
    try {
      y = m.phi_inverse(x);
    } catch (const RangeError& e) {
      throw ModulusInvalidError(std::string("psi not invertible on range: ") + e.what());
    }
    if (std::abs(m.phi(y) - x) > cfg.roundtrip_rtol * std::max(1.0, std::abs(x))) {
      throw ModulusInvalidError("psi(u(t)) != t at t=" + std::to_string(t));
    }
    const double d = m.dphi(y);
    if (!(d > 0.0)) throw ModulusInvalidError("u'(t) <= 0 at t=" + std::to_string(t));
    g[i] = 1.0 / d;  // (u'/u) t
    yv[i] = y;
    yh[i] = m.phi_inverse(0.5 * x);
    const double ypsi = x;  // psi evaluated at t itself
    const double ph = m.phi(ypsi);
    h[i] = ypsi * m.dphi(ypsi) / ph;  // (log psi)' t log t / log psi
    if (!(ph > 0.0)) h[i] = std::numeric_limits<double>::quiet_NaN();
  }

  // Log-derivative ratio: decreasing in t, pseudo-monotone: g(t2) <= C g(t1) for t1 <= t2.
  {
    auto& c = rep.cond_logom1;
    double run_min = g[0];
    c.worst_value = 1.0;
    c.worst_t = rep.grid[0];
    for (std::size_t i = 1; i < N; ++i) {
      const double r = g[i] / run_min;
      if (r > c.worst_value) {
        c.worst_value = r;
        c.worst_t = rep.grid[i];
      }
      run_min = std::min(run_min, g[i]);
    }
    c.pass = c.worst_value <= cpm;
  }
  // Square-root doubling: y(x) <= beta y(x/2).
  {
    auto& c = rep.cond_logom2;
    c.worst_value = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double r = yh[i] > 0.0 ? yv[i] / yh[i] : std::numeric_limits<double>::infinity();
      if (r > c.worst_value) {
        c.worst_value = r;
        c.worst_t = rep.grid[i];
      }
    }
    c.pass = c.worst_value <= m.beta() * (1.0 + 1e-12);
  }
  // log psi / log t: monotone in either direction, pseudo-monotone.
  {
    auto& c = rep.cond_monotpsi;
    bool finite = std::all_of(h.begin(), h.end(), [](double v) { return std::isfinite(v) && v > 0.0; });
    if (!finite) {
      c.pass = false;
      c.direction = "undefined";
      c.worst_value = std::numeric_limits<double>::infinity();
    } else {
      const double rel = (h.back() - h.front()) / std::abs(h.front());
      const bool increasing = rel >= 0.0;
      c.direction = std::abs(rel) < 1e-12 ? "constant" : (increasing ? "increasing" : "decreasing");
      double run = h[0];
      c.worst_value = 1.0;
      c.worst_t = rep.grid[0];
      for (std::size_t i = 1; i < N; ++i) {
        const double r = increasing ? run / h[i] : h[i] / run;
        if (r > c.worst_value) {
          c.worst_value = r;
          c.worst_t = rep.grid[i];
        }
        run = increasing ? std::max(run, h[i]) : std::min(run, h[i]);
      }
      c.pass = c.worst_value <= cpm;
    }
  }
  return rep;
}

nlohmann::json to_json(const AllowabilityReport& r) {
  nlohmann::json conds = nlohmann::json::array();
  for (const auto* c : {&r.cond_logom1, &r.cond_logom2, &r.cond_monotpsi}) {
    nlohmann::json j{{"condition", c->condition},
                     {"pass", c->pass},
                     {"worst_t", c->worst_t},
                     {"worst_value", c->worst_value}};
    if (!c->direction.empty()) j["direction"] = c->direction;
    conds.push_back(std::move(j));
  }
  return nlohmann::json{{"conditions", conds},
                        {"all_pass", r.all_pass()},
                        {"grid_points", r.grid.size()},
                        {"grid_min", r.grid.empty() ? 0.0 : r.grid.front()},
                        {"grid_max", r.grid.empty() ? 0.0 : r.grid.back()}};
}

// -- divergence integrals --------------------------------------------------

namespace {

void check_log_limits(const Modulus& m, double s_lo, double s_hi) {
  if (!(s_lo > 0.0 && s_lo < s_hi)) throw PreconditionError("need 0 < eps < upper < 1");
  if (s_lo < std::log(1.0 / m.t0()) * (1.0 - 1e-12)) {
    throw PreconditionError("upper limit above t0");
  }
  if (s_hi > m.x_max()) throw RangeError("lower limit below the evaluation floor");
}

}  // namespace

double divergence_integral_psi_log(const Modulus& m, double s_lo, double s_hi, int n) {
  check_log_limits(m, s_lo, s_hi);
  return integrate_log([&](double s) { return std::pow(std::abs(m.phi(s) / s), n); }, s_lo, s_hi,
                       1e-7);
}

double divergence_integral_psi(const Modulus& m, double eps, double upper, int n) {
  if (!(eps > 0.0 && eps < upper && upper <= m.t0())) {
    throw PreconditionError("need 0 < eps < upper <= t0");
  }
  return divergence_integral_psi_log(m, std::log(1.0 / upper), std::log(1.0 / eps), n);
}

double divergence_integral_u_log(const Modulus& m, double s_lo, double s_hi, int n) {
  check_log_limits(m, s_lo, s_hi);
  // With y = phi^{-1}(s): (u/u')^{n-1} dt/t^n = phi'(y)^{n-1} ds = phi'(y)^n dy.
  const double y_lo = m.phi_inverse(s_lo);
  const double y_hi = m.phi_inverse(s_hi);
  auto f = [&](double y) { return std::pow(m.dphi(y), n); };
  double total = 0.0;
  double a = y_lo;
  if (a <= 1.0) {
    const double b = std::min(1.0, y_hi);
    total += integrate(f, a, b, 1e-7);
    a = b;
  }
  if (a < y_hi) total += integrate_log(f, a, y_hi, 1e-7);
  return total;
}

double divergence_integral_u(const Modulus& m, double eps, double upper, int n) {
  if (!(eps > 0.0 && eps < upper && upper <= m.t0())) {
    throw PreconditionError("need 0 < eps < upper <= t0");
  }
  return divergence_integral_u_log(m, std::log(1.0 / upper), std::log(1.0 / eps), n);
}

std::string to_string(Divergence d) {
  switch (d) {
    case Divergence::divergent:
      return "divergent";
    case Divergence::convergent:
      return "convergent";
    default:
      return "undecided";
  }
}

DivergenceReport classify_divergence(const Modulus& m, int n, const Defaults& cfg) {
  DivergenceReport rep;
  const double s0 = std::log(1.0 / m.t0());
  const int J = cfg.divergence_doublings;

  // Truncations at eps_j = exp(-2^j), accumulated piecewise.
  double acc = 0.0;
  double prev_s = s0;
  for (int j = 1; j <= J; ++j) {
    const double s = std::ldexp(1.0, j);
    if (s > prev_s && s <= m.x_max()) {
      acc += divergence_integral_psi_log(m, prev_s, s, n);
      prev_s = s;
    }
    rep.truncations.push_back(acc);
  }
  if (J >= 4) {
    const auto& T = rep.truncations;
    bool growing = T[J - 1] > cfg.divergence_threshold;
    for (int i = 0; i < 3 && growing; ++i) {
      growing = T[J - 2 - i] > 0.0 && T[J - 1 - i] >= (1.0 + cfg.divergence_growth) * T[J - 2 - i];
    }
    if (growing) {
      rep.classification = Divergence::divergent;
      rep.rule = "threshold";
      return rep;
    }
  }

  // Log-scale tail test. With P_0(x) = -d log I / d log x and
  // P_k = L_k(x) (P_{k-1} - 1), L_k the k-fold logarithm, the first stage
  // whose deviation from 1 is stable between a near and a far abscissa
  // decides: P_k > 1 converges, P_k < 1 diverges.
  rep.rule = "log-scale";
  auto log_integrand = [&](double v) {
    const double s = std::exp(v);
    return n * (std::log(std::abs(m.phi(s))) - v);
  };
  auto stages = [&](double x, int kmax) {
    const double v = std::log(x);
    const double hv = 1e-3;
    const double d = (-log_integrand(v + 2 * hv) + 8 * log_integrand(v + hv) -
                      8 * log_integrand(v - hv) + log_integrand(v - 2 * hv)) /
                     (12 * hv);
    std::vector<double> P{-d};
    double L = x;
    for (int k = 1; k <= kmax; ++k) {
      L = std::log(L);
      P.push_back(L * (P.back() - 1.0));
    }
    return P;
  };
  double log2_far = cfg.tail_log2_x;
  if (std::ldexp(1.0, static_cast<int>(log2_far)) > 0.5 * m.x_max()) {
    log2_far = std::floor(std::log2(0.5 * m.x_max()));
  }
  const double log2_near = log2_far > 200 ? 0.1 * log2_far : 0.5 * log2_far;
  const double x_far = std::exp2(log2_far);
  const double x_near = std::exp2(log2_near);
  int kmax = 0;
  {
    double L = x_near;
    while (kmax < 6) {
      L = std::log(L);
      if (!(L > 0.0)) break;
      ++kmax;
    }
  }
  try {
    rep.stage_values_near = stages(x_near, kmax);
    rep.stage_values_far = stages(x_far, kmax);
  } catch (const Error&) {
    rep.classification = Divergence::undecided;
    return rep;
  }
  for (int k = 0; k <= kmax; ++k) {
    const double dn = rep.stage_values_near[k] - 1.0;
    const double df = rep.stage_values_far[k] - 1.0;
    if (std::abs(dn) < cfg.tail_borderline && std::abs(df) < cfg.tail_borderline) continue;
    if (std::abs(df - dn) <= cfg.tail_stability * std::abs(df)) {
      rep.decisive_stage = k;
      rep.classification = df > 0.0 ? Divergence::convergent : Divergence::divergent;
      return rep;
    }
  }
  rep.classification = Divergence::undecided;
  return rep;
}

nlohmann::json to_json(const DivergenceReport& r) {
  return nlohmann::json{{"classification", to_string(r.classification)},
                        {"rule", r.rule},
                        {"truncations", r.truncations},
                        {"decisive_stage", r.decisive_stage},
                        {"stage_values_near", r.stage_values_near},
                        {"stage_values_far", r.stage_values_far}};
}

// -- derived scales --------------------------------------------------------

double alpha(const Modulus& m, double t) {
  if (!(t > 0.0 && t <= m.t0())) throw RangeError("alpha needs 0 < t <= t0");
  const double d = m.dphi(m.phi_inverse(std::log(1.0 / t)));
  if (!(d > 0.0) || !std::isfinite(d)) throw DomainError("u'(t) vanishes: alpha is singular");
  return t * d;
}

double alpha_dyadic(const Modulus& m, int k) {
  const double d = m.dphi(m.phi_inverse(k * kLn2));
  if (!(d > 0.0) || !std::isfinite(d)) throw DomainError("u'(t) vanishes: alpha is singular");
  return std::ldexp(d, -k);
}

double lambda_k(const Modulus& m, int k) {
  if (std::ldexp(1.0, -k) > m.t0()) throw RangeError("lambda_k needs 2^-k <= t0");
  const double d = m.dphi(m.phi_inverse(k * kLn2));
  if (!(d > 0.0) || !std::isfinite(d)) throw DomainError("u'(t) vanishes: lambda is singular");
  return 1.0 / d;
}

void require_lambda_increasing(const Modulus& m, int k_max) {
  double prev = lambda_k(m, m.base_index());
  for (int k = m.base_index() + 1; k <= k_max; ++k) {
    const double cur = lambda_k(m, k);
    if (cur < prev * (1.0 - 1e-12)) {
      throw ModulusInvalidError("lambda decreases at k=" + std::to_string(k) + " for modulus " +
                                m.label());
    }
    prev = cur;
  }
}

double DyadicScales::alpha_at(int k) const {
  if (k < base || k > k_max()) throw RangeError("dyadic index outside the tabulated range");
  return alpha[static_cast<std::size_t>(k - base)];
}

double DyadicScales::lambda_at(int k) const {
  if (k < base || k > k_max()) throw RangeError("dyadic index outside the tabulated range");
  return lambda[static_cast<std::size_t>(k - base)];
}

DyadicScales dyadic_scales(const Modulus& m, int k_max) {
  DyadicScales s;
  s.base = m.base_index();
  for (int k = s.base; k <= k_max; ++k) {
    s.alpha.push_back(alpha_dyadic(m, k));
    s.lambda.push_back(lambda_k(m, k));
  }
  return s;
}

double iterated_log(int k, double t) {
  if (k < 0) throw RangeError("iterated_log needs k >= 0");
  double v = t;
  for (int i = 0; i < k; ++i) {
    if (!(v > 0.0)) throw RangeError("iterated logarithm undefined");
    v = std::log(v);
  }
  if (k > 0 && !(v > 0.0) && !(std::abs(v) < 1e-15)) throw RangeError("iterated logarithm not positive");
  return v;
}

}  // namespace gmt
