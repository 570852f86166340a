#include "gmt/cover_engine.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <limits>
#include <numbers>

#include "gmt/errors.hpp"
#include "gmt/parallel.hpp"

namespace gmt {

double default_c0_tilde(const Modulus& m, int n, const Defaults& cfg) {
  const double lb = lambda_k(m, m.base_index());
  return 2.0 * std::max(cfg.chain(n).c2 * m.beta(), 1.0 / lb);
}

std::vector<Vec> boundary_directions(int n, std::size_t count) {
  std::vector<Vec> out;
  out.reserve(count);
  if (n == 2) {
    for (std::size_t i = 0; i < count; ++i) {
      // Offset by half a step so no direction runs along a dyadic grid line.
      const double a = 2.0 * std::numbers::pi * (static_cast<double>(i) + 0.5) / count;
      out.push_back({std::cos(a), std::sin(a), 0.0});
    }
  } else if (n == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < count; ++i) {
      const double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / count;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double a = golden * static_cast<double>(i);
      out.push_back({r * std::cos(a), r * std::sin(a), z});
    }
  } else {
    throw PreconditionError("boundary directions need n = 2 or 3");
  }
  return out;
}

int annulus_level(double r) {
  if (!(r > 0.0)) return INT_MAX;
  int e = 0;
  std::frexp(r, &e);  // r in [2^(e-1), 2^e)
  return 1 - e;
}

// -- trace -----------------------------------------------------------------

std::vector<std::size_t> BoundaryTrace::stratum(int l) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < directions.size(); ++i) {
    if (directions[i].resolved && directions[i].l0 <= l) out.push_back(i);
  }
  return out;
}

int BoundaryTrace::common_l0() const {
  int l = INT_MIN;
  for (const auto& d : directions) {
    if (d.resolved) l = std::max(l, d.l0);
  }
  if (l == INT_MIN) throw ResolutionError("no boundary direction could be resolved");
  return l;
}

namespace {

// Chain positions strictly before the first position after the last exit
// from B(x, 2^-l+1).
std::size_t entry_position(const std::vector<int>& levels, int l) {
  std::size_t j = 0;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] < l) j = i + 1;
  }
  return j;
}

std::vector<int> center_levels(const DirectionTrace& d, int m) {
  std::vector<int> lv(d.centers.size());
  for (std::size_t i = 0; i < lv.size(); ++i) lv[i] = annulus_level(distance(d.centers[i], d.image, m));
  return lv;
}

}  // namespace

BoundaryTrace trace_boundary(const SampledMap& f, const WhitneyDecomposition& d,
                             const CubeField& field, const Modulus& m,
                             const std::vector<Vec>& omegas, const Defaults& cfg,
                             const std::function<bool(std::size_t)>& keep) {
  BoundaryTrace t;
  t.n = d.dim();
  t.m = f.m();
  t.singleton = std::none_of(field.radius.begin(), field.radius.end(),
                             [](double r) { return r > 0.0; });
  // Smallest l with 2^-l+1 < t0.
  const int l_t0 = static_cast<int>(std::floor(std::log2(2.0 / m.t0()))) + 1;
  const double c3 = cfg.chain(t.n).c3;
  t.directions.resize(omegas.size());
  parallel_for(omegas.size(), [&](std::size_t i) {
    DirectionTrace& dt = t.directions[i];
    dt.omega = omegas[i];
    try {
      dt.image = f.boundary_value(dt.omega);
    } catch (const ResolutionError& e) {
      dt.note = e.what();
      return;
    }
    const RadialChain chain = d.radial_chain(dt.omega);
    dt.full_length = chain.cubes.size();
    for (std::size_t p = 0; p < chain.cubes.size(); ++p) {
      const std::size_t idx = d.index_of(chain.cubes[p]);
      if (keep && !keep(idx)) continue;
      dt.chain.push_back(idx);
      dt.centers.push_back(field.average[idx]);
      dt.full_position.push_back(p);
    }
    if (dt.chain.empty()) {
      dt.note = "empty chain";
      return;
    }
    double dmax = 0.0;
    for (const auto& c : dt.centers) dmax = std::max(dmax, distance(c, dt.image, t.m));
    const double tol = 1e-12 * (1.0 + norm(dt.image, t.m));
    if (dmax <= tol) {
      dt.constant_tail = true;
      double best = 0.0;
      for (std::size_t idx : dt.chain) {
        if (field.radius[idx] > best) {
          best = field.radius[idx];
          dt.q_omega = idx;
        }
      }
      if (!(best > 0.0)) {
        dt.note = "no chain cube with positive radius";
        return;
      }
      dt.l0 = std::max(annulus_level(best), l_t0);
      dt.resolved = true;
      return;
    }
    // Smallest l with 2^-l+1 <= dmax, i.e. some centre lies outside B(x, 2^-l+1).
    int l0 = static_cast<int>(std::ceil(std::log2(2.0 / dmax)));
    if (std::ldexp(1.0, 1 - l0) > dmax) ++l0;
    l0 = std::max(l0, l_t0);
    const std::vector<int> lv = center_levels(dt, t.m);
    // Enough chain cubes (counted from the origin) ahead of the first annulus
    // for the chain-count bounds.
    auto cubes_before = [&](int l) {
      const std::size_t j = entry_position(lv, l);
      return j < lv.size() ? dt.full_position[j] : dt.full_length;
    };
    while (static_cast<double>(cubes_before(l0)) <= c3) {
      if (entry_position(lv, l0 + 1) >= lv.size()) {
        dt.note = "chain too short to clear the chain constant";
        return;
      }
      ++l0;
      ++dt.l0_bumps;
    }
    dt.l0 = l0;
    dt.resolved = true;
  });
  for (const auto& dt : t.directions) {
    if (!dt.resolved) ++t.unresolved;
  }
  return t;
}

// -- ledger ----------------------------------------------------------------

AnnulusLedger build_ledger(const BoundaryTrace& t, std::size_t direction, int l0, int l_max,
                           double c0_tilde, const DyadicScales& scales) {
  const DirectionTrace& dt = t.directions.at(direction);
  if (!dt.resolved) throw PreconditionError("ledger requested for an unresolved direction");
  if (l0 < dt.l0) throw PreconditionError("direction lies outside the stratum");
  if (l0 < scales.base || l_max > scales.k_max()) {
    throw RangeError("annulus levels outside the tabulated modulus range");
  }
  AnnulusLedger led;
  led.direction = direction;
  led.l0 = l0;
  const std::vector<int> lv = center_levels(dt, t.m);
  bool contiguous = true;
  for (int l = l0; l <= l_max; ++l) {
    AnnulusEntry e;
    e.l = l;
    if (dt.constant_tail) {
      e.branch = AnnulusEntry::Branch::constant;
    } else {
      const std::size_t j = entry_position(lv, l);
      if (j < lv.size() && j > 0) {
        if (lv[j] > l) {
          e.branch = AnnulusEntry::Branch::bridge;
          e.positions = {j};
        } else {
          std::size_t k = j;
          while (k + 1 < lv.size() && lv[k + 1] == l) ++k;
          if (k + 1 < lv.size()) {
            e.branch = AnnulusEntry::Branch::run;
            for (std::size_t p = j; p <= k; ++p) e.positions.push_back(p);
          }
        }
      }
    }
    if (e.branch == AnnulusEntry::Branch::constant) {
      e.theta = 1.0 <= c0_tilde * scales.lambda_at(l) ? 1 : 0;
    } else if (e.branch != AnnulusEntry::Branch::unresolved) {
      e.theta = static_cast<double>(e.positions.size()) <= c0_tilde * scales.lambda_at(l) ? 1 : 0;
    }
    if (e.branch == AnnulusEntry::Branch::unresolved) contiguous = false;
    if (contiguous) led.last_resolved = l;
    led.entries.push_back(std::move(e));
  }
  return led;
}

bool half_annuli_holds(const AnnulusLedger& ledger, int l) {
  if (l < ledger.l0 || l - ledger.l0 >= static_cast<int>(ledger.entries.size())) {
    throw RangeError("annulus level outside the ledger");
  }
  int s = 0;
  for (int k = ledger.l0; k <= l; ++k) s += ledger.at(k).theta;
  return 2 * s >= l;
}

HalfAnnuliResult half_annuli_check(const AnnulusLedger& ledger, int l_max, const Modulus& m,
                                   double c0_tilde, const Defaults& cfg) {
  HalfAnnuliResult r;
  const int top = std::min(l_max, ledger.l0 + static_cast<int>(ledger.entries.size()) - 1);
  for (int l = top; l >= 2 * ledger.l0; --l) {
    if (!half_annuli_holds(ledger, l)) {
      r.failing_l = l;
      break;
    }
    r.l1 = l;
  }
  r.holds = r.l1 >= 0 && r.failing_l < 0;
  if (r.failing_l >= 0) {
    // Chain cubes between the annuli, counted from above and from below.
    try {
      const double u = m.psi_inv(std::ldexp(1.0, -r.failing_l));
      const double u0 = m.psi_inv(std::ldexp(1.0, -ledger.l0));
      r.chain_side = cfg.chain(m.n()).c2 * std::log(2.0 / u);
      r.annuli_side = c0_tilde / m.beta() * std::log(1.0 / u) - c0_tilde * std::log(1.0 / u0);
    } catch (const Error&) {
      r.chain_side = r.annuli_side = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return r;
}

// -- selection -------------------------------------------------------------

Selection select_balls(const AnnulusLedger& ledger, const BoundaryTrace& t, int k,
                       const CubeField& field, const DyadicScales& scales, double c0_tilde,
                       int s_length) {
  const AnnulusEntry& e = ledger.at(k);
  if (e.theta != 1) throw PreconditionError("ball selection needs theta_k = 1");
  const DirectionTrace& dt = t.directions.at(ledger.direction);
  Selection sel;
  sel.min_radius = std::numeric_limits<double>::infinity();
  auto push = [&](const WeightedBall& b) {
    sel.balls.push_back(b);
    sel.total_weight += b.weight;
    sel.min_radius = std::min(sel.min_radius, b.radius);
  };
  if (e.branch == AnnulusEntry::Branch::bridge || e.branch == AnnulusEntry::Branch::constant) {
    const std::size_t q = e.branch == AnnulusEntry::Branch::constant
                              ? dt.q_omega
                              : dt.chain[e.positions.front()];
    if (!(field.radius[q] > std::ldexp(1.0, -k))) sel.bridge_radius_ok = false;
    WeightedBall b;
    b.center = field.average[q];
    b.radius = scales.alpha_at(k);
    b.weight = scales.lambda_at(k);
    b.provenance = {Provenance::Tag::R, q, k, -1, -1};
    push(b);
    return sel;
  }
  const double a = scales.alpha_at(k) / (2.0 * c0_tilde);
  for (std::size_t p : e.positions) {
    const std::size_t q = dt.chain[p];
    const double r = field.radius[q];
    if (!(2.0 * r >= a)) continue;
    const int nq = static_cast<int>(std::floor(std::log2(2.0 * r / a))) + 1;
    if (nq > s_length) ++sel.s_index_overflow;
    WeightedBall b;
    b.center = field.average[q];
    b.radius = std::ldexp(r, -nq);
    b.weight = std::ldexp(1.0, nq);
    b.provenance = {Provenance::Tag::S, q, nq, -1, -1};
    push(b);
  }
  if (sel.balls.empty()) {
    throw InternalInconsistencyError("annulus " + std::to_string(k) +
                                     ": no run cube reaches the selection radius");
  }
  return sel;
}

// -- rescaling -------------------------------------------------------------

int Rescaler::bracket(double r) const {
  const double s = 1.0 / (8.0 * c0_tilde);
  if (r >= scales->alpha_at(l0) * s) return l0;
  if (r < scales->alpha_at(l) * s) return -1;
  // alpha(2^-k) decreases in k: find the smallest k with alpha_k s <= r.
  int lo = l0 + 1, hi = l;
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    if (scales->alpha_at(mid) * s <= r) hi = mid;
    else lo = mid + 1;
  }
  return lo;
}

WeightedBall Rescaler::apply(const WeightedBall& b, bool& flagged) const {
  WeightedBall out = b;
  const int k = bracket(b.radius);
  flagged = k < 0;
  if (flagged) return out;
  const double ratio = scales->lambda_at(k) / scales->lambda_at(l);
  out.radius = b.radius * ratio;
  out.weight = b.weight * std::pow(1.0 / ratio, n);
  out.provenance.rescale_k = k;
  out.provenance.rescale_l = l;
  return out;
}

RescaledFamily rescale_family(const BallFamily& f, const DyadicScales& scales, int l, int l0,
                              double c0_tilde) {
  if (l < l0) throw PreconditionError("rescaling needs l >= l0");
  Rescaler rs{&scales, l, l0, c0_tilde, f.n()};
  RescaledFamily out{BallFamily(f.n()), 0};
  for (const auto& b : f.balls()) {
    bool flagged = false;
    out.family.add(rs.apply(b, flagged));
    if (flagged) ++out.flagged;
  }
  return out;
}

double g_sum(const DyadicScales& scales, int l1, int l, int n) {
  double g = 0.0;
  for (int k = l1; k <= l; ++k) g += std::pow(scales.lambda_at(k), 1 - n);
  return g;
}

GComparison compare_g_integral(const Modulus& m, int l1, int l, int n) {
  if (!(l >= l1)) throw PreconditionError("G_l needs l >= l1");
  GComparison c;
  c.l1 = l1;
  c.l = l;
  for (int k = l1; k <= l; ++k) c.g += std::pow(lambda_k(m, k), 1 - n);
  c.integral = divergence_integral_u_log(m, l1 * std::numbers::ln2, l * std::numbers::ln2, n);
  c.rel_error = std::abs(c.g - c.integral) / c.integral;
  const double scaled = c.integral / std::numbers::ln2;
  c.rel_error_ln2 = std::abs(c.g - scaled) / scaled;
  return c;
}

// -- cover -----------------------------------------------------------------

RescaledCover::RescaledCover(const AssembledFamily& fam, int l, int l0, double c0_tilde,
                             double g_l, int m)
    : fam_(&fam), rescaler_{&fam.scales(), l, l0, c0_tilde, fam.n()}, m_(m) {
  if (l < l0) throw PreconditionError("cover level below the stratum");
  const double lam = fam.scales().lambda_at(l);
  coef_scale_ = 4.0 / (std::pow(lam, fam.n()) * g_l);
  blow_ = 16.0 * c0_tilde * lam;
  scan();
}

RescaledCover::RescaledCover(const AssembledFamily& fam, const Rescaler& rescaler, double coef,
                             double blow, int m)
    : fam_(&fam), rescaler_(rescaler), coef_scale_(coef), blow_(blow), m_(m) {
  scan();
}

void RescaledCover::scan() {
  const AssembledFamily& fam = *fam_;
  reach_.assign(fam.seeds().size(), 0.0);
  min_diameter_ = std::numeric_limits<double>::infinity();
  const int n = fam.n();
  for (std::size_t j = 0; j < fam.seeds().size(); ++j) {
    fam.for_each_ball(j, [&](const WeightedBall& b) {
      bool flagged = false;
      const WeightedBall r = rescaler_.apply(b, flagged);
      const double mass = r.weight * std::pow(r.radius, n);
      if (flagged) {
        ++excluded_;
        excluded_mass_ += mass;
        return;
      }
      rescaled_mass_ += mass;
      reach_[j] = std::max(reach_[j], blow_ * r.radius);
      min_diameter_ = std::min(min_diameter_, 2.0 * blow_ * r.radius);
    });
    max_radius_ = std::max(max_radius_, reach_[j]);
  }
}

void RescaledCover::visit_seed(std::size_t j, const Visitor& v) const {
  fam_->for_each_ball(j, [&](const WeightedBall& b) {
    bool flagged = false;
    const WeightedBall r = rescaler_.apply(b, flagged);
    if (flagged) return;
    v(coef_scale_ * r.weight, CoverSet::ball(r.center, blow_ * r.radius, m_));
  });
}

void RescaledCover::visit_all(const Visitor& v) const {
  for (std::size_t j = 0; j < reach_.size(); ++j) visit_seed(j, v);
}

void RescaledCover::visit_candidates(const Vec& x, const Visitor& v) const {
  const auto& seeds = fam_->seeds();
  for (std::size_t j = 0; j < seeds.size(); ++j) {
    if (distance(x, seeds[j].center, m_) <= reach_[j] * (1.0 + 1e-12) + 1e-12) visit_seed(j, v);
  }
}

double RescaledCover::coverage(const Vec& x) const {
  const auto& seeds = fam_->seeds();
  const DyadicScales& sc = fam_->scales();
  double s = 0.0;
  // Rescaling never enlarges a ball (lambda(k) <= lambda(l)), so within the
  // decreasing S and R radius sequences the first ball that cannot reach x
  // ends the scan.
  auto take = [&](double radius, double weight, double dist) {
    if (blow_ * radius < dist * (1.0 - 1e-12) - 1e-12) return false;
    const int k = rescaler_.bracket(radius);
    if (k < 0) return false;
    const double ratio = sc.lambda_at(k) / sc.lambda_at(rescaler_.l);
    if (dist <= blow_ * radius * ratio * (1.0 + 1e-12) + 1e-12) {
      s += coef_scale_ * weight * std::pow(1.0 / ratio, fam_->n());
    }
    return true;
  };
  for (std::size_t j = 0; j < seeds.size(); ++j) {
    const double dist = distance(x, seeds[j].center, m_);
    if (dist > reach_[j] * (1.0 + 1e-12) + 1e-12) continue;
    for (int i = 1; i <= fam_->s_length(); ++i) {
      if (!take(std::ldexp(seeds[j].radius, -i), std::ldexp(1.0, i), dist)) break;
    }
    for (int k = fam_->r_first(j); k <= fam_->r_last(j); ++k) {
      if (!take(sc.alpha_at(k), sc.lambda_at(k), dist)) break;
    }
  }
  return s;
}

namespace {

nlohmann::json chain_json(const ChainConstants& c) {
  return nlohmann::json{{"c1", c.c1}, {"c2", c.c2}, {"c3", c.c3}};
}

}  // namespace

CoverReport final_cover(const BoundaryTrace& t, const AssembledFamily& fam, int l, int l0, int l1,
                        double c0_tilde, const Modulus& m, const Defaults& cfg) {
  if (!(l1 >= l0 && l >= l1)) throw PreconditionError("final cover needs l0 <= l1 <= l");
  const int n = fam.n();
  CoverReport r;
  r.l = l;
  r.l0 = l0;
  r.l1 = l1;
  r.g_l = g_sum(fam.scales(), l1, l, n);
  r.mass = fam.mass();
  r.content_bound = std::pow(2.0, 5 * n + 2) * std::pow(c0_tilde, n) * r.mass / r.g_l;
  const RescaledCover cover(fam, l, l0, c0_tilde, r.g_l, t.m);
  r.rescaled_mass = cover.rescaled_mass();
  r.excluded_mass = cover.excluded_mass();
  r.excluded_balls = cover.excluded();
  r.min_diameter = cover.min_diameter();

  const std::vector<std::size_t> dirs = t.stratum(l0);
  r.directions = dirs.size();
  std::vector<double> mult(dirs.size(), 0.0);
  parallel_for(dirs.size(), [&](std::size_t i) {
    mult[i] = cover.coverage(t.directions[dirs[i]].image);
  });
  r.min_multiplicity = dirs.empty() ? 0.0 : *std::min_element(mult.begin(), mult.end());
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    if (mult[i] < 1.0 - cfg.multiplicity_tol) r.failing.push_back(dirs[i]);
  }
  r.failing_directions = r.failing.size();

  // Multiplicities are checked above; the weighted sum is the one
  // weighted_content_upper would return.
  const Gauge h = Gauge::power(n);
  cover.visit_all([&](double c, const CoverSet& u) { r.weighted_content += c * h(u.diameter); });
  r.hausdorff_bound = h.doubling_constant() * r.weighted_content;
  r.constants = {{"c0_tilde", c0_tilde},
                 {"beta", m.beta()},
                 {"t0", m.t0()},
                 {"chain", chain_json(cfg.chain(n))},
                 {"neighbor_bound", cfg.neighbor_bound(n)},
                 {"poincare_c", cfg.poincare_c},
                 {"family_tail", cfg.family_tail},
                 {"A", std::pow(2.0, 5 * n + 2) * std::pow(c0_tilde, n) * r.mass}};
  return r;
}

// -- pipelines -------------------------------------------------------------

PipelineResult run_cover_pipeline(const SampledMap& f, const Modulus& m,
                                  const PipelineOptions& opt, const Defaults& cfg) {
  const int n = f.n();
  PipelineResult res;
  const auto d = WhitneyDecomposition::decompose(Domain::unit_ball(n), opt.depth);
  const CubeField field = cube_field(f, d);
  const AssembledFamily fam = assemble_family(field, d, m, cfg);
  const DyadicScales& scales = fam.scales();
  res.energy = dirichlet_energy(f, region_ball(n)).energy;
  res.c1 = family_constant(m, n, cfg);
  res.mass = fam.mass();
  res.c0_tilde = opt.c0_tilde > 0.0 ? opt.c0_tilde : default_c0_tilde(m, n, cfg);

  res.trace = trace_boundary(f, d, field, m, boundary_directions(n, opt.directions), cfg);
  if (res.trace.singleton) throw PreconditionError("f is constant: f(boundary) is a single point");
  res.l0 = std::max(res.trace.common_l0(), scales.base);
  if (res.trace.unresolved > 0) {
    res.notes.push_back(std::to_string(res.trace.unresolved) + " unresolved directions excluded");
  }
  int l_cap = 2 * res.l0 + 24;
  for (int l : opt.levels) l_cap = std::max(l_cap, l);
  l_cap = std::min(l_cap, scales.k_max());

  std::size_t bridge_deficit = 0, overflow = 0;
  for (std::size_t i : res.trace.stratum(res.l0)) {
    AnnulusLedger led = build_ledger(res.trace, i, res.l0, l_cap, res.c0_tilde, scales);
    const int top = std::max(led.last_resolved, 2 * res.l0);
    const HalfAnnuliResult h = half_annuli_check(led, top, m, res.c0_tilde, cfg);
    if (h.l1 < 0) {
      res.notes.push_back("direction " + std::to_string(i) +
                          ": half-annuli condition fails up to level " + std::to_string(top));
    } else {
      res.l1 = std::max(res.l1, h.l1);
    }
    for (int k = res.l0; k <= led.last_resolved; ++k) {
      if (led.at(k).theta != 1) continue;
      const Selection sel = select_balls(led, res.trace, k, field, scales, res.c0_tilde,
                                         fam.s_length());
      if (!sel.bridge_radius_ok) ++bridge_deficit;
      overflow += static_cast<std::size_t>(sel.s_index_overflow);
    }
    res.ledgers.push_back(std::move(led));
  }
  if (bridge_deficit > 0) {
    res.notes.push_back(std::to_string(bridge_deficit) + " bridging cubes with r_Q <= 2^-k");
  }
  if (overflow > 0) {
    res.notes.push_back(std::to_string(overflow) + " selected S indices beyond the kept family");
  }
  if (res.l1 < 0) throw ResolutionError("half-annuli condition not met at this depth");

  std::vector<int> levels = opt.levels;
  if (levels.empty()) {
    for (int l = res.l1; l <= res.l1 + 12; ++l) levels.push_back(l);
  }
  for (int l : levels) {
    if (l < res.l1) throw PreconditionError("cover level below l1");
    if (l > scales.k_max()) throw RangeError("cover level outside the tabulated modulus range");
    res.reports.push_back(final_cover(res.trace, fam, l, res.l0, res.l1, res.c0_tilde, m, cfg));
  }
  return res;
}

namespace {

double tail_energy(const SampledMap& f, double delta) {
  return dirichlet_energy(f, region_shell(f.n(), delta)).energy;
}

// Norm of the point of Q nearest the origin.
double min_norm(const DyadicCube& q) {
  double s = 0.0;
  for (int i = 0; i < q.dim; ++i) {
    const double v = std::clamp(0.0, q.lo(i), q.hi(i));
    s += v * v;
  }
  return std::sqrt(s);
}

}  // namespace

HolderReport holder_pipeline(const SampledMap& f, const WhitneyDecomposition& d,
                             const CubeField& field, double gamma, double eps,
                             std::size_t directions, const Defaults& cfg, double c0_tilde) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw RangeError("Hoelder exponent must lie in (0, 1]");
  if (!(eps > 0.0)) throw RangeError("eps must be positive");
  const int n = f.n();
  HolderReport r;
  r.eps = eps;
  const Modulus mod = Modulus::power(1.0, gamma, n);

  // Largest delta whose shell energy stays below eps.
  const double floor_delta = 4.0 * f.spacing();
  if (tail_energy(f, 1.0) <= eps) {
    r.delta = 1.0;
  } else {
    if (tail_energy(f, floor_delta) > eps) {
      throw ResolutionError("eps below the energy of the thinnest resolvable shell (" +
                            std::to_string(tail_energy(f, floor_delta)) + ")");
    }
    double lo = floor_delta, hi = 1.0;
    for (int it = 0; it < 40 && hi - lo > 1e-4 * f.spacing(); ++it) {
      const double mid = 0.5 * (lo + hi);
      (tail_energy(f, mid) <= eps ? lo : hi) = mid;
    }
    r.delta = lo;
  }
  r.tail_energy = tail_energy(f, r.delta);

  std::vector<char> in_shell(d.size(), 0), keep(d.size(), 0);
  for (std::size_t i = 0; i < d.size(); ++i) in_shell[i] = min_norm(d.cubes()[i]) > 1.0 - r.delta;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!in_shell[i]) continue;
    bool ok = true;
    for (const auto& q : d.neighbors(d.cubes()[i])) {
      if (!in_shell[d.index_of(q)]) {
        ok = false;
        break;
      }
    }
    keep[i] = ok;
  }
  r.kept_cubes = static_cast<std::size_t>(std::count(keep.begin(), keep.end(), 1));
  auto kept = [&](std::size_t i) { return keep[i] != 0; };

  const AssembledFamily fam = assemble_family(field, d, mod, cfg, kept);
  const DyadicScales& scales = fam.scales();
  r.mass = fam.mass();
  r.c1 = family_constant(mod, n, cfg);
  r.c0_tilde = c0_tilde > 0.0 ? c0_tilde : default_c0_tilde(mod, n, cfg);

  const BoundaryTrace t = trace_boundary(f, d, field, mod, boundary_directions(n, directions),
                                         cfg, kept);
  r.l0 = std::max(t.common_l0(), scales.base);
  const std::vector<std::size_t> dirs = t.stratum(r.l0);
  r.directions = dirs.size();
  std::vector<AnnulusLedger> ledgers;
  const int l_cap = std::min(scales.k_max(), 8 * r.l0 + 16);
  for (std::size_t i : dirs) ledgers.push_back(build_ledger(t, i, r.l0, l_cap, r.c0_tilde, scales));
  for (int l1 = 2 * r.l0; 2 * l1 <= l_cap && r.l1 < 0; ++l1) {
    bool all = true;
    for (const auto& led : ledgers) {
      if (!half_annuli_holds(led, l1) || !half_annuli_holds(led, 2 * l1)) {
        all = false;
        break;
      }
    }
    if (all) r.l1 = l1;
  }
  if (r.l1 < 0) {
    throw ResolutionError("half-annuli condition not met at this depth (l0 = " +
                          std::to_string(r.l0) + ")");
  }
  r.l = 2 * r.l1;

  // (8 w gamma / (l - l1), (16 c0~ / gamma) B) over the balls above the
  // bottom bracket; gauge t^n log 1/t.
  const Rescaler rs{&scales, r.l, r.l0, r.c0_tilde, n};
  const RescaledCover cover(fam, rs, 8.0 * gamma / (r.l - r.l1), 16.0 * r.c0_tilde / gamma, t.m);
  r.excluded_balls = cover.excluded();
  r.min_diameter = cover.min_diameter();
  r.max_radius = cover.max_radius();
  r.radius_below_half = r.max_radius < 0.5;
  std::vector<Vec> pts;
  for (std::size_t i : dirs) pts.push_back(t.directions[i].image);
  const Gauge g = Gauge::log_power(n, 1.0);
  const WeightedBound b = weighted_content_upper(PointCloud::make(pts, t.m, "f(boundary)"), cover,
                                                 g, cfg.multiplicity_tol);
  r.direct_bound = b.weighted;
  r.min_multiplicity = b.min_multiplicity;
  if (r.min_diameter < std::ldexp(1.0, -r.l)) {
    throw InternalInconsistencyError("cover ball below the 2^-l diameter floor");
  }
  r.bound = 0.0;
  cover.visit_all([&](double c, const CoverSet& u) {
    r.bound += c * std::pow(u.diameter, n) * r.l * std::numbers::ln2;
  });
  const double k = std::pow(2.0, 3 + 5 * n) * std::pow(r.c0_tilde, n) * std::pow(gamma, 1 - n) *
                   std::numbers::ln2 * r.l / (r.l - r.l1);
  r.proof_bound = k * r.mass;
  r.epsilon_bound = k * r.c1 * eps;
  r.constants = {{"c0_tilde", r.c0_tilde},
                 {"gamma", gamma},
                 {"chain", chain_json(cfg.chain(n))},
                 {"neighbor_bound", cfg.neighbor_bound(n)},
                 {"poincare_c", cfg.poincare_c},
                 {"C1", r.c1}};
  return r;
}

nlohmann::json to_json(const CoverReport& r) {
  return nlohmann::json{{"l", r.l},
                        {"l0", r.l0},
                        {"l1", r.l1},
                        {"G_l", r.g_l},
                        {"content_bound", r.content_bound},
                        {"weighted_content", r.weighted_content},
                        {"hausdorff_content_bound", r.hausdorff_bound},
                        {"min_multiplicity", r.min_multiplicity},
                        {"min_diameter", r.min_diameter},
                        {"family_mass", r.mass},
                        {"rescaled_mass", r.rescaled_mass},
                        {"excluded_mass", r.excluded_mass},
                        {"excluded_balls", r.excluded_balls},
                        {"directions", r.directions},
                        {"failing_directions", r.failing},
                        {"constants", r.constants}};
}

nlohmann::json to_json(const HolderReport& r) {
  return nlohmann::json{{"eps", r.eps},
                        {"delta", r.delta},
                        {"tail_energy", r.tail_energy},
                        {"kept_cubes", r.kept_cubes},
                        {"l0", r.l0},
                        {"l1", r.l1},
                        {"l", r.l},
                        {"family_mass", r.mass},
                        {"bound", r.bound},
                        {"direct_bound", r.direct_bound},
                        {"proof_bound", r.proof_bound},
                        {"excluded_balls", r.excluded_balls},
                        {"min_diameter", r.min_diameter},
                        {"epsilon_bound", r.epsilon_bound},
                        {"min_multiplicity", r.min_multiplicity},
                        {"max_radius", r.max_radius},
                        {"radius_below_half", r.radius_below_half},
                        {"directions", r.directions},
                        {"constants", r.constants}};
}

}  // namespace gmt
