#include "gmt/sobolev_map.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <sstream>

#include "gmt/errors.hpp"
#include "gmt/parallel.hpp"
#include "gmt/random.hpp"
#include "spec_parse.hpp"

namespace gmt {

namespace {

int lattice_size(double spacing) {
  if (!(spacing > 0.0)) throw SchemaError("grid spacing must be positive");
  const double N = 2.0 / spacing;
  const double r = std::round(N);
  if (std::abs(N - r) > 1e-9 * r || r < 2) throw SchemaError("grid spacing must divide 2");
  return static_cast<int>(r);
}

std::size_t flat(const std::array<int, 3>& idx, int n, int N) {
  std::size_t f = 0;
  for (int i = n - 1; i >= 0; --i) f = f * static_cast<std::size_t>(N) + static_cast<std::size_t>(idx[i]);
  return f;
}

double frob_pow(const std::array<Vec, 3>& grad, int n, int m) {
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < m; ++c) s += grad[i][c] * grad[i][c];
  return std::pow(s, 0.5 * n);
}

// Hilbert curve index -> cell, standard iterative form.
std::pair<int, int> hilbert_cell(int order, std::uint64_t d) {
  int x = 0, y = 0;
  std::uint64_t t = d;
  for (int s = 1; s < (1 << order); s <<= 1) {
    const int rx = 1 & static_cast<int>(t / 2);
    const int ry = 1 & static_cast<int>(t ^ static_cast<std::uint64_t>(rx));
    if (ry == 0) {
      if (rx == 1) {
        x = s - 1 - x;
        y = s - 1 - y;
      }
      std::swap(x, y);
    }
    x += s * rx;
    y += s * ry;
    t /= 4;
  }
  return {x, y};
}

}  // namespace

// -- SampledMap ------------------------------------------------------------

SampledMap SampledMap::from_function(Eval f, int n, int m, double spacing, std::string label) {
  if (n != 2 && n != 3) throw SchemaError("maps need n = 2 or 3");
  if (m < 1 || m > kMaxDim) throw SchemaError("image dimension must be 1..3");
  SampledMap s;
  s.n_ = n;
  s.m_ = m;
  s.N_ = lattice_size(spacing);
  s.h_ = 2.0 / s.N_;
  s.label_ = std::move(label);
  s.eval_ = std::move(f);
  return s;
}

SampledMap SampledMap::from_lattice(std::vector<double> values, int n, int m, double spacing,
                                    std::string label) {
  if (n != 2 && n != 3) throw SchemaError("maps need n = 2 or 3");
  if (m < 1 || m > kMaxDim) throw SchemaError("image dimension must be 1..3");
  SampledMap s;
  s.n_ = n;
  s.m_ = m;
  s.N_ = lattice_size(spacing);
  s.h_ = 2.0 / s.N_;
  std::size_t expect = static_cast<std::size_t>(m);
  for (int i = 0; i < n; ++i) expect *= static_cast<std::size_t>(s.N_);
  if (values.size() != expect) throw SchemaError("lattice value count does not match the grid");
  s.values_ = std::move(values);
  s.label_ = std::move(label);
  return s;
}

SampledMap SampledMap::from_csv(const std::string& path, int n, int m) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open map file " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (first) {
        first = false;
        continue;
      }
      throw SchemaError("non-numeric row in " + path);
    }
    first = false;
    if (static_cast<int>(row.size()) != n + m) {
      throw SchemaError("map rows need " + std::to_string(n + m) + " columns");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw SchemaError("empty map file " + path);
  double xmin = 1e300;
  for (const auto& r : rows) xmin = std::min(xmin, r[0]);
  const double h = 2.0 * (xmin + 1.0);
  const int N = lattice_size(h);
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(N);
  if (rows.size() != total) throw SchemaError("map file does not cover the full lattice");
  std::vector<double> values(total * static_cast<std::size_t>(m), 0.0);
  std::vector<char> seen(total, 0);
  for (const auto& r : rows) {
    std::array<int, 3> idx{};
    for (int i = 0; i < n; ++i) {
      const double j = (r[i] + 1.0) / h - 0.5;
      idx[i] = static_cast<int>(std::lround(j));
      if (std::abs(j - idx[i]) > 1e-6 || idx[i] < 0 || idx[i] >= N) {
        throw SchemaError("map sample off the cell-centred lattice");
      }
    }
    const std::size_t f = flat(idx, n, N);
    if (seen[f]) throw SchemaError("duplicate lattice node in map file");
    seen[f] = 1;
    for (int c = 0; c < m; ++c) values[f * m + c] = r[n + c];
  }
  return from_lattice(std::move(values), n, m, h, "csv:" + path);
}

SampledMap SampledMap::identity(int n, double spacing) {
  return from_function([](const Vec& x) { return x; }, n, n, spacing, "identity");
}

SampledMap SampledMap::radial(double a, int n, double spacing) {
  if (!(a > 0.0)) throw SchemaError("radial exponent must be positive");
  return from_function(
      [a, n](const Vec& x) {
        const double r = norm(x, n);
        return r == 0.0 ? Vec{} : scale(std::pow(r, a - 1.0), x);
      },
      n, n, spacing, "radial:" + std::to_string(a));
}

SampledMap SampledMap::peano_extension(double spacing, int curve_depth, int modes) {
  if (curve_depth < 1 || curve_depth > 12 || modes < 1) {
    throw SchemaError("peano extension needs 1 <= depth <= 12 and modes >= 1");
  }
  // Closed curve on the circle: the Hilbert curve forwards on [0, pi] and
  // backwards on [pi, 2 pi].
  const std::uint64_t cells = std::uint64_t{1} << (2 * curve_depth);
  const std::size_t samples = 2 * cells;
  const double side = std::ldexp(1.0, -curve_depth);
  std::vector<std::array<double, 2>> g(samples);
  for (std::uint64_t d = 0; d < cells; ++d) {
    const auto [cx, cy] = hilbert_cell(curve_depth, d);
    g[d] = {(cx + 0.5) * side, (cy + 0.5) * side};
    g[samples - 1 - d] = g[d];
  }
  // Fourier coefficients c_k with f = Re sum c_k z^k, z = r e^{i theta}.
  auto coeffs = std::make_shared<std::vector<std::array<std::complex<double>, 2>>>(modes + 1);
  parallel_for(static_cast<std::size_t>(modes) + 1, [&](std::size_t k) {
    std::complex<double> acc0{}, acc1{};
    const double step = 2.0 * std::numbers::pi * static_cast<double>(k) / samples;
    for (std::size_t j = 0; j < samples; ++j) {
      const double th = step * (static_cast<double>(j) + 0.5);
      const std::complex<double> e(std::cos(th), -std::sin(th));
      acc0 += g[j][0] * e;
      acc1 += g[j][1] * e;
    }
    const double norm_k = (k == 0 ? 1.0 : 2.0) / samples;
    (*coeffs)[k] = {acc0 * norm_k, acc1 * norm_k};
  });
  auto eval = [coeffs](const Vec& x) {
    std::complex<double> z(x[0], x[1]);
    const double r = std::abs(z);
    if (r > 1.0) z /= r;
    Vec out{};
    out[0] = (*coeffs)[0][0].real();
    out[1] = (*coeffs)[0][1].real();
    std::complex<double> zk(1.0, 0.0);
    for (std::size_t k = 1; k < coeffs->size(); ++k) {
      zk *= z;
      out[0] += ((*coeffs)[k][0] * zk).real();
      out[1] += ((*coeffs)[k][1] * zk).real();
    }
    return out;
  };
  return from_function(eval, 2, 2, spacing, "peano-extension");
}

SampledMap SampledMap::parse(std::string_view spec, int n, double spacing, int m) {
  if (spec.substr(0, 4) == "csv:") {
    return from_csv(std::string(spec.substr(4)), n, m > 0 ? m : n);
  }
  const auto p = detail::parse_spec(spec);
  if (p.name == "identity") {
    detail::require_arity(p, 0, 0, spec);
    return identity(n, spacing);
  }
  if (p.name == "radial") {
    detail::require_arity(p, 1, 1, spec);
    return radial(p.args[0], n, spacing);
  }
  if (p.name == "peano-extension") {
    detail::require_arity(p, 0, 2, spec);
    if (n != 2) throw SchemaError("peano-extension needs n = 2");
    const int depth = p.args.size() > 0 ? static_cast<int>(p.args[0]) : 8;
    const int modes = p.args.size() > 1 ? static_cast<int>(p.args[1]) : 512;
    return peano_extension(spacing, depth, modes);
  }
  throw SchemaError("unknown map '" + p.name + "'");
}

Vec SampledMap::node(const std::array<int, 3>& idx) const {
  Vec x{};
  for (int i = 0; i < n_; ++i) x[i] = -1.0 + (idx[i] + 0.5) * h_;
  return x;
}

Vec SampledMap::value_at(const std::array<int, 3>& idx) const {
  if (eval_) return eval_(node(idx));
  Vec v{};
  const std::size_t f = flat(idx, n_, N_) * static_cast<std::size_t>(m_);
  for (int c = 0; c < m_; ++c) v[c] = values_[f + c];
  return v;
}

Vec SampledMap::evaluate(const Vec& x) const {
  if (eval_) return eval_(x);
  std::array<int, 3> idx{};
  for (int i = 0; i < n_; ++i) {
    idx[i] = std::clamp(static_cast<int>(std::floor((x[i] + 1.0) / h_)), 0, N_ - 1);
  }
  return value_at(idx);
}

Vec SampledMap::boundary_value(const Vec& omega) const {
  if (eval_) return eval_(omega);
  std::array<int, 3> base{};
  for (int i = 0; i < n_; ++i) base[i] = static_cast<int>(std::floor((omega[i] + 1.0) / h_));
  double best = 1e300;
  std::array<int, 3> arg{};
  std::array<int, 3> idx{};
  const int span = 3;
  const int combos = n_ == 2 ? 49 : 343;
  for (int c = 0; c < combos; ++c) {
    int rem = c;
    bool ok = true;
    for (int i = 0; i < n_; ++i) {
      idx[i] = base[i] + (rem % 7) - span;
      rem /= 7;
      if (idx[i] < 0 || idx[i] >= N_) ok = false;
    }
    if (!ok) continue;
    const Vec x = node(idx);
    if (norm(x, n_) >= 1.0) continue;
    const double dd = distance(x, omega, n_);
    if (dd < best) {
      best = dd;
      arg = idx;
    }
  }
  if (best > 2.0 * h_) throw ResolutionError("no lattice node within 2h of the boundary point");
  return value_at(arg);
}

ModulusCheck check_modulus(const SampledMap& f, std::size_t pairs, std::uint64_t seed) {
  const Modulus* mod = f.modulus();
  if (!mod) throw PreconditionError("map carries no modulus");
  Rng rng(seed);
  const int n = f.n();
  const int N = f.nodes_per_axis();
  auto random_node = [&]() {
    while (true) {
      std::array<int, 3> idx{};
      for (int i = 0; i < n; ++i) idx[i] = static_cast<int>(uniform01(rng) * N);
      if (norm(f.node(idx), n) < 1.0) return idx;
    }
  };
  ModulusCheck out;
  const double y_min = mod->log_form().y_min;
  for (std::size_t p = 0; p < pairs; ++p) {
    const auto a = random_node();
    std::array<int, 3> b{};
    if (p % 2 == 0) {
      b = random_node();
    } else {
      // Multiscale partner: offset of log-uniform length.
      const double len = std::exp(uniform(rng, std::log(f.spacing()), 0.0)) / f.spacing();
      bool ok = true;
      for (int i = 0; i < n; ++i) {
        b[i] = a[i] + static_cast<int>(std::lround(uniform(rng, -len, len)));
        if (b[i] < 0 || b[i] >= N) ok = false;
      }
      if (!ok || norm(f.node(b), n) >= 1.0) {
        ++out.skipped;
        continue;
      }
    }
    const double t = distance(f.node(a), f.node(b), n);
    if (t == 0.0) continue;
    if (std::log(1.0 / t) < y_min) {
      ++out.skipped;
      continue;
    }
    const double ratio = distance(f.value_at(a), f.value_at(b), f.m()) / mod->psi(t);
    out.worst_ratio = std::max(out.worst_ratio, ratio);
    ++out.pairs;
  }
  out.pass = out.worst_ratio <= 1.0 + 1e-6;
  return out;
}

// -- cube statistics -------------------------------------------------------

namespace {

// Per-axis lattice node range inside [lo, hi).
std::pair<int, int> node_range(double lo, double hi, double h, int N) {
  const int first = std::max(0, static_cast<int>(std::ceil((lo + 1.0) / h - 0.5 - 1e-9)));
  const int last = std::min(N - 1, static_cast<int>(std::ceil((hi + 1.0) / h - 0.5 - 1e-9)) - 1);
  return {first, last};
}

// Visits quadrature points of Q: fn(x, cell_volume, lattice index or null).
template <class F>
void cube_quadrature(const SampledMap& f, const DyadicCube& q, F&& fn) {
  const int n = f.n();
  if (q.dim != n) throw PreconditionError("cube and map dimensions differ");
  if (f.procedural()) {
    const double edge = q.edge();
    const int M = std::max(4, static_cast<int>(std::ceil(edge / f.spacing() - 1e-9)));
    const double step = edge / M;
    const double vol = std::pow(step, n);
    std::array<int, 3> j{};
    while (true) {
      Vec x{};
      for (int i = 0; i < n; ++i) x[i] = q.lo(i) + (j[i] + 0.5) * step;
      fn(x, vol, step, static_cast<const std::array<int, 3>*>(nullptr));
      int i = 0;
      for (; i < n; ++i) {
        if (++j[i] < M) break;
        j[i] = 0;
      }
      if (i == n) break;
    }
    return;
  }
  std::array<std::pair<int, int>, 3> range{};
  std::size_t count = 1;
  for (int i = 0; i < n; ++i) {
    range[i] = node_range(q.lo(i), q.hi(i), f.spacing(), f.nodes_per_axis());
    const int c = range[i].second - range[i].first + 1;
    count *= static_cast<std::size_t>(std::max(c, 0));
  }
  if (count < (std::size_t{1} << n)) {
    throw ResolutionError("cube holds fewer than 2^n lattice nodes");
  }
  const double vol = std::pow(f.spacing(), n);
  std::array<int, 3> idx{};
  for (int i = 0; i < n; ++i) idx[i] = range[i].first;
  while (true) {
    fn(f.node(idx), vol, f.spacing(), &idx);
    int i = 0;
    for (; i < n; ++i) {
      if (++idx[i] <= range[i].second) break;
      idx[i] = range[i].first;
    }
    if (i == n) break;
  }
}

// Central-difference gradient; false when a lattice stencil leaves the grid.
bool gradient(const SampledMap& f, const Vec& x, double step, const std::array<int, 3>* idx,
              std::array<Vec, 3>& grad) {
  const int n = f.n();
  for (int i = 0; i < n; ++i) {
    Vec plus, minus;
    if (idx) {
      auto a = *idx, b = *idx;
      if (a[i] + 1 >= f.nodes_per_axis() || b[i] - 1 < 0) return false;
      ++a[i];
      --b[i];
      plus = f.value_at(a);
      minus = f.value_at(b);
    } else {
      Vec xp = x, xm = x;
      xp[i] += step;
      xm[i] -= step;
      plus = f.evaluate(xp);
      minus = f.evaluate(xm);
    }
    for (int c = 0; c < f.m(); ++c) grad[i][c] = (plus[c] - minus[c]) / (2.0 * step);
  }
  return true;
}

}  // namespace

Vec cube_average(const SampledMap& f, const DyadicCube& q) {
  // Offsets from the first sample keep constant maps exact.
  Vec ref{}, sum{};
  bool first = true;
  double vol = 0.0;
  cube_quadrature(f, q, [&](const Vec& x, double w, double, const std::array<int, 3>* idx) {
    const Vec v = idx ? f.value_at(*idx) : f.evaluate(x);
    if (first) {
      ref = v;
      first = false;
    }
    for (int c = 0; c < f.m(); ++c) sum[c] += w * (v[c] - ref[c]);
    vol += w;
  });
  for (int c = 0; c < f.m(); ++c) ref[c] += sum[c] / vol;
  return ref;
}

double cube_energy(const SampledMap& f, const DyadicCube& q) {
  double e = 0.0;
  cube_quadrature(f, q, [&](const Vec& x, double w, double step, const std::array<int, 3>* idx) {
    std::array<Vec, 3> grad{};
    if (gradient(f, x, idx ? step : 0.5 * step, idx, grad)) e += w * frob_pow(grad, f.n(), f.m());
  });
  return e;
}

double cube_radius(const SampledMap& f, const WhitneyDecomposition& d, const DyadicCube& q) {
  const Vec fq = cube_average(f, q);
  double r = 0.0;
  for (const auto& nb : d.neighbors(q)) r = std::max(r, distance(fq, cube_average(f, nb), f.m()));
  return r;
}

CubeField cube_field(const SampledMap& f, const WhitneyDecomposition& d) {
  CubeField out;
  const auto& cubes = d.cubes();
  out.average.resize(cubes.size());
  out.radius.resize(cubes.size());
  parallel_for(cubes.size(), [&](std::size_t i) { out.average[i] = cube_average(f, cubes[i]); });
  parallel_for(cubes.size(), [&](std::size_t i) {
    double r = 0.0;
    for (const auto& nb : d.neighbors(cubes[i])) {
      r = std::max(r, distance(out.average[i], out.average[d.index_of(nb)], f.m()));
    }
    out.radius[i] = r;
  });
  return out;
}

// -- energy ----------------------------------------------------------------

Region region_ball(int n) {
  return [n](const Vec& x) { return norm(x, n) < 1.0; };
}

Region region_shell(int n, double delta) {
  return [n, delta](const Vec& x) {
    const double r = norm(x, n);
    return r < 1.0 && r > 1.0 - delta;
  };
}

EnergyReport dirichlet_energy(const SampledMap& f, const Region& region) {
  const int n = f.n();
  const int N = f.nodes_per_axis();
  const std::size_t slabs = static_cast<std::size_t>(N);
  std::vector<double> part(slabs, 0.0);
  std::vector<std::size_t> cells(slabs, 0), excluded(slabs, 0);
  const double vol = std::pow(f.spacing(), n);
  parallel_for(slabs, [&](std::size_t s) {
    std::array<int, 3> idx{};
    idx[n - 1] = static_cast<int>(s);
    const int inner = n == 2 ? 1 : 2;
    while (true) {
      const Vec x = f.node(idx);
      if (region(x)) {
        std::array<Vec, 3> grad{};
        if (gradient(f, x, f.spacing(), f.procedural() ? nullptr : &idx, grad)) {
          part[s] += vol * frob_pow(grad, n, f.m());
          ++cells[s];
        } else {
          ++excluded[s];
        }
      }
      int i = 0;
      for (; i < inner; ++i) {
        if (++idx[i] < N) break;
        idx[i] = 0;
      }
      if (i == inner) break;
    }
  });
  EnergyReport r;
  for (std::size_t s = 0; s < slabs; ++s) {
    r.energy += part[s];
    r.cells += cells[s];
    r.excluded_cells += excluded[s];
  }
  return r;
}

// -- ball families ---------------------------------------------------------

void BallFamily::add(const WeightedBall& b) {
  if (!(b.radius >= 0.0) || !(b.weight > 0.0)) {
    throw PreconditionError("balls need radius >= 0 and weight > 0");
  }
  balls_.push_back(b);
  mass_ += b.weight * std::pow(b.radius, n_);
}

void BallFamily::append(const BallFamily& other) {
  for (const auto& b : other.balls()) add(b);
}

double BallFamily::recompute_mass() const {
  double m = 0.0;
  for (const auto& b : balls_) m += b.weight * std::pow(b.radius, n_);
  return m;
}

int s_family_length(int n, double tail) {
  // Dropped tail after I terms: 2^{-I(n-1)} / (2^{n-1} - 1).
  int I = 1;
  while (std::ldexp(1.0, -I * (n - 1)) / (std::ldexp(1.0, n - 1) - 1.0) >= tail) ++I;
  return I;
}

BallFamily build_S_family(const Vec& center, double r, int n, int i_max, std::size_t cube) {
  if (!(r > 0.0)) throw PreconditionError("S family needs r > 0");
  BallFamily fam(n);
  for (int i = 1; i <= i_max; ++i) {
    WeightedBall b;
    b.center = center;
    b.radius = std::ldexp(r, -i);
    b.weight = std::ldexp(1.0, i);
    b.provenance = {Provenance::Tag::S, cube, i};
    fam.add(b);
  }
  return fam;
}

int dyadic_index(double r) {
  if (!(r > 0.0)) throw PreconditionError("dyadic_index needs r > 0");
  int k = static_cast<int>(std::ceil(-std::log2(r)));
  while (std::ldexp(1.0, -k) > r) ++k;
  while (std::ldexp(1.0, -(k - 1)) <= r) --k;
  return k;
}

namespace {

// Last R index so that the dropped tail is below tail * r^n, given the
// term at k and lambda non-decreasing.
template <class LambdaAt>
int r_family_last(int k0, double r, int n, double tail, LambdaAt lambda_at) {
  int K = k0;
  while (true) {
    const double bound = std::ldexp(1.0, -(K + 1) * n) * std::pow(lambda_at(K), 1.0 - n) /
                         (1.0 - std::ldexp(1.0, -n));
    if (bound < tail * std::pow(r, n)) return K;
    ++K;
  }
}

}  // namespace

BallFamily build_R_family(const Vec& center, double r, const Modulus& m, int n, double tail,
                          bool clamp_to_base, std::size_t cube) {
  if (!(r > 0.0)) throw PreconditionError("R family needs r > 0");
  int k0 = dyadic_index(r);
  const int base = m.base_index();
  if (k0 < base) {
    if (!clamp_to_base) throw RangeError("2^-k0 lies above t0 of the modulus");
    k0 = base;
  }
  const int K = r_family_last(k0, r, n, tail, [&](int k) { return lambda_k(m, k); });
  BallFamily fam(n);
  for (int k = k0; k <= K; ++k) {
    WeightedBall b;
    b.center = center;
    b.radius = alpha_dyadic(m, k);
    b.weight = lambda_k(m, k);
    b.provenance = {Provenance::Tag::R, cube, k};
    fam.add(b);
  }
  return fam;
}

AssembledFamily::AssembledFamily(std::vector<Seed> seeds, int n,
                                 std::shared_ptr<const DyadicScales> scales, double tail)
    : seeds_(std::move(seeds)), n_(n), scales_(std::move(scales)) {
  s_len_ = s_family_length(n_, tail);
  double s_factor = 0.0;
  for (int i = 1; i <= s_len_; ++i) s_factor += std::ldexp(1.0, i * (1 - n_));
  r_first_.resize(seeds_.size());
  r_last_.resize(seeds_.size());
  for (std::size_t j = 0; j < seeds_.size(); ++j) {
    const double r = seeds_[j].radius;
    const int k0 = std::max(dyadic_index(r), scales_->base);
    const int K = r_family_last(k0, r, n_, tail, [&](int k) { return scales_->lambda_at(k); });
    r_first_[j] = k0;
    r_last_[j] = K;
    double m = s_factor * std::pow(r, n_);
    for (int k = k0; k <= K; ++k) m += scales_->lambda_at(k) * std::pow(scales_->alpha_at(k), n_);
    mass_ += m;
    ball_count_ += static_cast<std::size_t>(s_len_ + K - k0 + 1);
  }
}

double AssembledFamily::max_radius(std::size_t j) const {
  return std::max(0.5 * seeds_[j].radius, scales_->alpha_at(r_first_[j]));
}

BallFamily AssembledFamily::materialize() const {
  BallFamily fam(n_);
  for_each_ball([&](const WeightedBall& b) { fam.add(b); });
  return fam;
}

double AssembledFamily::seed_mass() const {
  double m = 0.0;
  for (const auto& s : seeds_) m += std::pow(s.radius, n_);
  return m;
}

AssembledFamily assemble_family(const CubeField& field, const WhitneyDecomposition& d,
                                const Modulus& m, const Defaults& cfg,
                                const std::function<bool(std::size_t)>& keep) {
  std::vector<AssembledFamily::Seed> seeds;
  double r_min = 1e300;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!(field.radius[i] > 0.0)) continue;
    if (keep && !keep(i)) continue;
    seeds.push_back({i, field.average[i], field.radius[i]});
    r_min = std::min(r_min, field.radius[i]);
  }
  const int n = d.dim();
  int k_top = m.base_index() + 8;
  if (!seeds.empty()) k_top = std::max(k_top, dyadic_index(r_min));
  // Room for the R tails and for rescaling up to level 64.
  k_top = std::max(k_top + 64, 64);
  auto scales = std::make_shared<const DyadicScales>(dyadic_scales(m, k_top));
  require_lambda_increasing(m, k_top);
  return AssembledFamily(std::move(seeds), n, std::move(scales), cfg.family_tail);
}

double family_constant(const Modulus& m, int n, const Defaults& cfg) {
  const double lb = lambda_k(m, m.base_index());
  return cfg.poincare_c * (cfg.neighbor_bound(n) + 1) * (1.0 + 2.0 / std::pow(lb, n - 1));
}

nlohmann::json to_json(const WeightedBall& b, int m) {
  nlohmann::json prov{{"tag", b.provenance.tag == Provenance::Tag::S ? "S" : "R"},
                      {"cube", b.provenance.cube},
                      {"index", b.provenance.index}};
  if (b.provenance.rescale_k >= 0) {
    prov["rescaled_k"] = b.provenance.rescale_k;
    prov["rescaled_l"] = b.provenance.rescale_l;
  }
  return nlohmann::json{{"center", std::vector<double>(b.center.begin(), b.center.begin() + m)},
                        {"radius", b.radius},
                        {"weight", b.weight},
                        {"provenance", prov}};
}

}  // namespace gmt
