#include "gmt/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gmt/errors.hpp"
#include "gmt/gauge.hpp"
#include "gmt/parallel.hpp"
#include "gmt/random.hpp"

namespace gmt {

namespace {

constexpr int kMaxDepth = 24;

double sup2(const Vec& y) { return std::max(std::abs(y[0]), std::abs(y[1])); }

}  // namespace

CantorTower CantorTower::source(double sigma, int depth) {
  if (!(sigma > 0.0 && sigma < 0.5)) throw DomainError("source tower needs 0 < sigma < 1/2");
  if (depth < 1 || depth > kMaxDepth) throw DomainError("tower depth must lie in [1, 24]");
  CantorTower t;
  t.kind_ = Kind::source;
  t.param_ = sigma;
  t.depth_ = depth;
  t.r_ = {0.5};
  t.R_ = {0.5};
  for (int k = 1; k <= depth; ++k) {
    t.r_.push_back(0.5 * std::pow(sigma, k));
    t.R_.push_back(0.25 * std::pow(sigma, k - 1));
  }
  return t;
}

CantorTower CantorTower::target(double p, int depth) {
  if (!(p > 0.0)) throw DomainError("target tower needs p > 0");
  if (depth < 1 || depth > kMaxDepth) throw DomainError("tower depth must lie in [1, 24]");
  CantorTower t;
  t.kind_ = Kind::target;
  t.param_ = p;
  t.depth_ = depth;
  t.r_ = {0.5};
  t.R_ = {0.5};
  const double c = std::pow(std::log(4.0), -p);
  for (int k = 1; k <= depth; ++k) {
    t.r_.push_back(0.5 * c * std::ldexp(1.0, -k) * std::pow(static_cast<double>(k), -p));
    t.R_.push_back(k == 1 ? 0.25 : 0.5 * t.r_[static_cast<std::size_t>(k - 1)]);
  }
  return t;
}

Vec CantorTower::center(int k, std::uint64_t i) const {
  if (k < 0 || k > depth_) throw LookupError("generation outside the tower");
  if (i >= count(k)) throw LookupError("frame index outside generation " + std::to_string(k));
  Vec c{0.5, 0.5, 0.0};
  for (int g = 1; g <= k; ++g) {
    const unsigned digit = static_cast<unsigned>((i >> (2 * (k - g))) & 3u);
    const double s = R_[static_cast<std::size_t>(g)];
    c[0] += (digit & 2u) ? s : -s;
    c[1] += (digit & 1u) ? s : -s;
  }
  return c;
}

std::string CantorTower::label() const {
  return (kind_ == Kind::source ? "source:sigma=" : "target:p=") + std::to_string(param_) +
         ",depth=" + std::to_string(depth_);
}

FrameLocation locate(const Vec& x, const CantorTower& t) {
  FrameLocation loc;
  if (x[0] < 0.0 || x[0] > 1.0 || x[1] < 0.0 || x[1] > 1.0) return loc;
  Vec c{0.5, 0.5, 0.0};
  std::uint64_t i = 0;
  for (int k = 1; k <= t.depth(); ++k) {
    // Quadrant of the parent square; ties go to the lower digit.
    const unsigned bx = x[0] > c[0] ? 1u : 0u;
    const unsigned by = x[1] > c[1] ? 1u : 0u;
    if (x[0] == c[0] || x[1] == c[1]) loc.boundary = true;
    const double s = t.outer(k);
    c[0] += bx ? s : -s;
    c[1] += by ? s : -s;
    i = (i << 2) | (2u * bx + by);
    const double d = sup2(sub(x, c));
    if (d == s) loc.boundary = true;
    if (d > t.inner(k) || (d == t.inner(k) && k == t.depth())) {
      if (d == t.inner(k)) loc.boundary = true;
      loc.kind = FrameLocation::Kind::frame;
      loc.k = k;
      loc.i = i;
      return loc;
    }
    if (d == t.inner(k)) loc.boundary = true;
  }
  loc.kind = FrameLocation::Kind::cantor_limit;
  loc.k = t.depth();
  loc.i = i;
  return loc;
}

RadialStretch RadialStretch::between(double r, double R, double rt, double Rt) {
  if (!(0.0 < r && r < R) || !(0.0 < rt && rt < Rt)) {
    throw DomainError("radial stretch needs 0 < r < R on both sides");
  }
  RadialStretch s;
  s.r = r;
  s.R = R;
  s.rt = rt;
  s.Rt = Rt;
  s.a = (Rt - rt) / (R - r);
  s.b = (R * rt - Rt * r) / (R - r);
  return s;
}

Vec RadialStretch::apply(const Vec& y, double slack) const {
  const double d = sup2(y);
  if (d < r - slack || d > R + slack) throw DomainError("point outside the stretch annulus");
  const double f = a + b / d;
  return {f * y[0], f * y[1], 0.0};
}

RadialStretch frame_stretch(const CantorTower& source, const CantorTower& target, int k) {
  if (source.depth() != target.depth()) throw PreconditionError("towers of different depth");
  return RadialStretch::between(source.inner(k), source.outer(k), target.inner(k), target.outer(k));
}

Vec evaluate_h(const Vec& x, const CantorTower& source, const CantorTower& target) {
  if (source.depth() != target.depth()) throw PreconditionError("towers of different depth");
  const FrameLocation loc = locate(x, source);
  switch (loc.kind) {
    case FrameLocation::Kind::exterior:
      return x;
    case FrameLocation::Kind::cantor_limit:
      return target.center(loc.k, loc.i);
    case FrameLocation::Kind::frame:
      break;
  }
  const RadialStretch s = frame_stretch(source, target, loc.k);
  const Vec y = sub(x, source.center(loc.k, loc.i));
  const Vec z = s.apply(y, 1e-12 * s.R);
  const Vec ct = target.center(loc.k, loc.i);
  return {ct[0] + z[0], ct[1] + z[1], 0.0};
}

double frame_energy(const RadialStretch& s) {
  return 8.0 * s.a * s.a * (s.R * s.R - s.r * s.r) + 16.0 * s.a * s.b * (s.R - s.r) +
         32.0 / 3.0 * s.b * s.b * std::log(s.R / s.r);
}

namespace {

double frame_fd_energy(int k, std::uint64_t i, const CantorTower& source,
                       const CantorTower& target, int cells) {
  const Vec c = source.center(k, i);
  const double R = source.outer(k), r = source.inner(k);
  const double cell = 2.0 * R / cells;
  const double step = 1e-3 * cell;
  double e = 0.0;
  for (int a = 0; a < cells; ++a) {
    for (int b = 0; b < cells; ++b) {
      const Vec p{c[0] - R + (a + 0.5) * cell, c[1] - R + (b + 0.5) * cell, 0.0};
      const double d = sup2(sub(p, c));
      if (d < r || d > R) continue;
      double g = 0.0;
      for (int j = 0; j < 2; ++j) {
        Vec lo = p, hi = p;
        lo[j] -= step;
        hi[j] += step;
        const Vec fl = evaluate_h(lo, source, target), fh = evaluate_h(hi, source, target);
        for (int m = 0; m < 2; ++m) {
          const double dv = (fh[m] - fl[m]) / (2.0 * step);
          g += dv * dv;
        }
      }
      e += g * cell * cell;
    }
  }
  return e;
}

}  // namespace

double generation_energy(int k, const CantorTower& source, const CantorTower& target,
                         std::size_t samples_per_frame) {
  if (k < 1 || k > source.depth()) throw RangeError("generation outside the tower");
  const int cells = static_cast<int>(std::floor(std::sqrt(static_cast<double>(samples_per_frame))));
  if (cells < 16) throw ResolutionError("generation energy needs at least 16^2 samples per frame");
  if (k > 4) return static_cast<double>(source.count(k)) * frame_fd_energy(k, 0, source, target, cells);
  const std::uint64_t n = source.count(k);
  std::vector<double> e(n, 0.0);
  parallel_for(n, [&](std::size_t i) { e[i] = frame_fd_energy(k, i, source, target, cells); });
  double s = 0.0;
  for (double v : e) s += v;
  return s;
}

HolderEstimate holder_ratio(const CantorTower& source, const CantorTower& target,
                            std::size_t pairs, std::uint64_t seed) {
  if (source.kind() != CantorTower::Kind::source) throw PreconditionError("first tower must be the source");
  HolderEstimate h;
  const double sigma = source.parameter();
  h.beta = std::log(2.0) / std::log(1.0 / sigma);
  const double log_min = source.depth() * std::log(sigma);
  Rng rng(seed);
  for (std::size_t n = 0; n < pairs; ++n) {
    Vec x{}, y{};
    for (;;) {
      x = {uniform01(rng), uniform01(rng), 0.0};
      const double t = std::exp(uniform(rng, log_min, 0.0));
      const double th = uniform(rng, 0.0, 2.0 * std::numbers::pi);
      y = {x[0] + t * std::cos(th), x[1] + t * std::sin(th), 0.0};
      if (y[0] >= 0.0 && y[0] <= 1.0 && y[1] >= 0.0 && y[1] <= 1.0) break;
    }
    const double num = distance(evaluate_h(x, source, target), evaluate_h(y, source, target), 2);
    const double ratio = num / std::pow(distance(x, y, 2), h.beta);
    if (ratio > h.sup_ratio) {
      h.sup_ratio = ratio;
      h.worst_x = x;
      h.worst_y = y;
    }
  }
  h.pairs = pairs;
  return h;
}

WitnessReport witness_positive_measure(const CantorTower& target, double p, int depth,
                                       double gauge_exponent, int min_k) {
  if (!(p > 0.5)) throw DomainError("the positive-measure witness needs p > 1/2");
  if (target.kind() != CantorTower::Kind::target) throw PreconditionError("witness needs a target tower");
  if (depth > target.depth()) throw RangeError("witness depth beyond the tower");
  WitnessReport w;
  w.p = p;
  w.gauge_exponent = gauge_exponent < 0.0 ? 2.0 * p : gauge_exponent;
  w.min_k = min_k;
  w.convention = "g(t) = t^2 (log 1/t)^q with q = " + std::to_string(w.gauge_exponent) +
                 "; the 2p exponent of the tower construction corresponds to exponent p' = 2p "
                 "in the t^2 (log 1/t)^p' form of the example statement";
  const Gauge g = Gauge::log_power(2.0, w.gauge_exponent);
  // Every generation consists of translates, so one expanded branch with all
  // siblings as leaves carries the same per-depth ratios as the full tree.
  MassTree tree;
  int node = tree.add(-1, 2.0 * target.inner(0), 1.0);
  for (int k = 1; k <= depth; ++k) {
    const double mass = std::ldexp(1.0, -2 * k);
    int first = -1;
    for (int j = 0; j < 4; ++j) {
      const int id = tree.add(node, 2.0 * target.inner(k), mass);
      if (j == 0) first = id;
    }
    node = first;
  }
  w.tree_bound = mass_distribution_lower(tree, g, min_k);
  w.inf_ratio = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= depth; ++k) {
    const double ratio = std::ldexp(1.0, -2 * k) / g(2.0 * target.inner(k));
    w.ratio.push_back(ratio);
    if (k >= min_k) w.inf_ratio = std::min(w.inf_ratio, ratio);
  }
  const double q = w.gauge_exponent;
  if (std::abs(q - 2.0 * p) < 1e-12) w.limit = std::pow(2.0, 2.0 * p);
  else w.limit = q > 2.0 * p ? 0.0 : std::numeric_limits<double>::infinity();
  return w;
}

nlohmann::json to_json(const CantorTower& t) {
  nlohmann::json gens = nlohmann::json::array();
  for (int k = 1; k <= t.depth(); ++k) {
    gens.push_back({{"k", k}, {"inner_half_side", t.inner(k)}, {"outer_half_side", t.outer(k)}});
  }
  return nlohmann::json{{"kind", t.kind() == CantorTower::Kind::source ? "source" : "target"},
                        {t.kind() == CantorTower::Kind::source ? "sigma" : "p", t.parameter()},
                        {"depth", t.depth()},
                        {"generations", gens}};
}

nlohmann::json to_json(const WitnessReport& w) {
  return nlohmann::json{{"p", w.p},
                        {"gauge_exponent", w.gauge_exponent},
                        {"convention", w.convention},
                        {"ratios", w.ratio},
                        {"inf_ratio", w.inf_ratio},
                        {"min_k", w.min_k},
                        {"limit", w.limit},
                        {"tree_inf_ratio", w.tree_bound.inf_ratio},
                        {"tree_depth_min", w.tree_bound.depth_min}};
}

}  // namespace gmt
