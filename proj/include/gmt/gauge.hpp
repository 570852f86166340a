#pragma once

// Dimension gauges, moduli of continuity, allowability checks and the two
// divergence integrals that drive the covering argument.
//
// Every modulus is stored in logarithmic coordinates. With y = log(1/t) the
// function
//
//     phi(y) = log(1 / psi(exp(-y)))
//
// is increasing, and the quantities used downstream all have log-domain forms:
//
//     u(t) = psi^{-1}(t)           = exp(-phi^{-1}(log 1/t))
//     alpha(t) = u(t) / u'(t)      = t * phi'(phi^{-1}(log 1/t))
//     lambda(k) = 2^-k / alpha(2^-k) = 1 / phi'(phi^{-1}(k log 2))
//
// so nothing ever has to represent t = exp(-2^14) as a double.

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gmt/config.hpp"

namespace gmt {

/// A dimension gauge h: non-decreasing, positive on (0, 1], h(0+) = 0.
class Gauge {
 public:
  Gauge(std::function<double(double)> eval, double doubling_constant, std::string label);

  double operator()(double t) const { return eval_(t); }
  double doubling_constant() const noexcept { return doubling_constant_; }
  const std::string& label() const noexcept { return label_; }

  /// h(t) = t^a.
  static Gauge power(double a);
  /// h(t) = t^a log(1/t)^q, held at its maximum beyond t* = exp(-q/a).
  static Gauge log_power(double a, double q);
  /// "power:a" or "logpower:a,q".
  static Gauge parse(std::string_view spec);

  struct Check {
    bool ok = true;
    double worst_doubling_ratio = 0.0;
    std::string failure;
  };
  /// Checks monotonicity, positivity, decay and doubling on a geometric grid.
  Check validate(int samples = 256, double t_min = 1e-12) const;

 private:
  std::function<double(double)> eval_;
  double doubling_constant_;
  std::string label_;
};

/// Logarithmic form of a modulus. `phi` must be increasing on [y_min, y_max].
struct LogModulus {
  std::function<double(double)> phi;
  std::function<double(double)> dphi;
  std::function<double(double)> phi_inv;  // may be empty: solved numerically
  double y_min = -1e300;
  double y_max = 1e300;
  double x_max = 1e305;  // largest log(1/t) that can be evaluated
};

class Modulus {
 public:
  Modulus(LogModulus form, double t0, double beta, int n, std::string label);

  /// psi(t) = C t^gamma.
  static Modulus power(double c, double gamma, int n = 2, double t0 = 0.5, double beta = 2.0);
  /// The iterated-log family psi_{l,s}. Pass cl <= 0 for the minimal C_l
  /// with log^{(l)}(C_l / 2) = 1.
  static Modulus iterated_log(int l, double s, double c = 1.0, double cl = 0.0, int n = 2,
                              double t0 = 1e-3, double beta = 10.0);
  /// A modulus given by psi and its inverse. Without psi_inv_deriv, u' is
  /// taken by central differences with step t * 1e-6. Valid down to t = 1e-300.
  static Modulus from_functions(std::function<double(double)> psi,
                                std::function<double(double)> psi_inv,
                                std::optional<std::function<double(double)>> psi_inv_deriv,
                                double t0, double beta, int n, std::string label);
  /// "power:C,gamma" or "iterlog:l,s[,C[,Cl]]".
  static Modulus parse(std::string_view spec, int n = 2);

  double psi(double t) const;
  /// u(t) = psi^{-1}(t).
  double psi_inv(double t) const;
  /// u'(t).
  double psi_inv_deriv(double t) const;

  double t0() const noexcept { return t0_; }
  double beta() const noexcept { return beta_; }
  int n() const noexcept { return n_; }
  const std::string& label() const noexcept { return label_; }

  double phi(double y) const { return form_.phi(y); }
  double dphi(double y) const { return form_.dphi(y); }
  /// Solves phi(y) = x.
  double phi_inverse(double x) const;
  /// Largest log(1/t) for which the modulus can be evaluated.
  double x_max() const noexcept { return x_max_; }
  const LogModulus& log_form() const noexcept { return form_; }

  /// Smallest k with 2^-k <= t0.
  int base_index() const;

 private:
  LogModulus form_;
  double t0_;
  double beta_;
  int n_;
  std::string label_;
  double x_max_;
};

// -- allowability ----------------------------------------------------------

struct ConditionResult {
  std::string condition;
  bool pass = true;
  double worst_t = 0.0;
  double worst_value = 0.0;
  std::string direction;  // monotone direction, cond_monotpsi only
};

struct AllowabilityReport {
  ConditionResult cond_logom1;    // (psi^-1)'(t) t / psi^-1(t) decreasing
  ConditionResult cond_logom2;    // log 1/u(t) <= beta log 1/u(sqrt t)
  ConditionResult cond_monotpsi;  // (log psi)' t log t / log psi monotone
  std::vector<double> grid;
  bool all_pass() const { return cond_logom1.pass && cond_logom2.pass && cond_monotpsi.pass; }
};

AllowabilityReport check_allowable(const Modulus& m, int grid_points,
                                   const Defaults& cfg = builtin_defaults());

nlohmann::json to_json(const AllowabilityReport& r);

// -- divergence integrals --------------------------------------------------

/// int_eps^upper |log psi(t) / log t|^n dt/t.
double divergence_integral_psi(const Modulus& m, double eps, double upper, int n);
/// The same integral with limits given as s = log(1/t), s_lo < s_hi.
double divergence_integral_psi_log(const Modulus& m, double s_lo, double s_hi, int n);

/// int_eps^upper (u(t)/u'(t))^{n-1} dt / t^n.
double divergence_integral_u(const Modulus& m, double eps, double upper, int n);
double divergence_integral_u_log(const Modulus& m, double s_lo, double s_hi, int n);

enum class Divergence { divergent, convergent, undecided };
std::string to_string(Divergence d);

struct DivergenceReport {
  Divergence classification = Divergence::undecided;
  std::string rule;                 // "threshold" or "log-scale"
  std::vector<double> truncations;  // T_j at eps_j = exp(-2^j), j = 1..J
  int decisive_stage = -1;          // log-scale stage that decided, if any
  std::vector<double> stage_values_near;
  std::vector<double> stage_values_far;
};

/// Classifies the integral of |log psi / log t|^n dt/t at 0.
DivergenceReport classify_divergence(const Modulus& m, int n,
                                     const Defaults& cfg = builtin_defaults());
nlohmann::json to_json(const DivergenceReport& r);

// -- derived scales --------------------------------------------------------

/// alpha(t) = u(t) / u'(t).
double alpha(const Modulus& m, double t);
/// lambda(k) = 2^-k / alpha(2^-k).
double lambda_k(const Modulus& m, int k);
/// alpha(2^-k) without forming 2^-k in a way that could underflow.
double alpha_dyadic(const Modulus& m, int k);
/// Throws ModulusInvalidError unless lambda is non-decreasing on [base, k_max].
void require_lambda_increasing(const Modulus& m, int k_max);

/// alpha(2^-k) and lambda(k) tabulated for k = base..k_max.
struct DyadicScales {
  int base = 0;
  std::vector<double> alpha;
  std::vector<double> lambda;
  int k_max() const { return base + static_cast<int>(lambda.size()) - 1; }
  double alpha_at(int k) const;
  double lambda_at(int k) const;
};
DyadicScales dyadic_scales(const Modulus& m, int k_max);

/// log applied k times.
double iterated_log(int k, double t);

}  // namespace gmt
