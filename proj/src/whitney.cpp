#include "gmt/whitney.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gmt/errors.hpp"

namespace gmt {

namespace {

constexpr double kOutside = -std::numeric_limits<double>::infinity();

void require_dim(int n) {
  if (n != 2 && n != 3) throw SchemaError("whitney decompositions support n = 2 or 3");
}

}  // namespace

// -- DyadicCube ------------------------------------------------------------

double DyadicCube::edge() const { return std::ldexp(1.0, -level); }
double DyadicCube::diam() const { return edge() * std::sqrt(static_cast<double>(dim)); }
double DyadicCube::lo(int i) const { return std::ldexp(static_cast<double>(corner[i]), -level); }
double DyadicCube::hi(int i) const {
  return std::ldexp(static_cast<double>(corner[i] + 1), -level);
}

Vec DyadicCube::center() const {
  Vec c{};
  for (int i = 0; i < dim; ++i) c[i] = std::ldexp(static_cast<double>(corner[i]) + 0.5, -level);
  return c;
}

bool DyadicCube::contains(const Vec& p, double slack) const {
  for (int i = 0; i < dim; ++i) {
    if (p[i] < lo(i) - slack || p[i] > hi(i) + slack) return false;
  }
  return true;
}

DyadicCube DyadicCube::parent() const {
  DyadicCube p = *this;
  p.level = level - 1;
  for (int i = 0; i < dim; ++i) p.corner[i] = corner[i] >> 1;  // floor division
  return p;
}

bool DyadicCube::inside(const DyadicCube& other) const {
  if (other.level > level || other.dim != dim) return false;
  const int shift = level - other.level;
  for (int i = 0; i < dim; ++i) {
    if ((corner[i] >> shift) != other.corner[i]) return false;
  }
  return true;
}

std::size_t DyadicCubeHash::operator()(const DyadicCube& q) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(q.level + 64);
  for (int i = 0; i < q.dim; ++i) {
    h ^= static_cast<std::uint64_t>(q.corner[i]) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

// -- Domain ----------------------------------------------------------------

Domain Domain::unit_ball(int n) {
  require_dim(n);
  Domain d;
  d.kind_ = Kind::unit_ball;
  d.n_ = n;
  for (int i = 0; i < n; ++i) {
    d.lo_[i] = -1.0;
    d.hi_[i] = 1.0;
  }
  return d;
}

Domain Domain::box(const Vec& lo, const Vec& hi, int n) {
  require_dim(n);
  for (int i = 0; i < n; ++i) {
    if (!(lo[i] < hi[i])) throw SchemaError("box needs lo < hi in every coordinate");
  }
  Domain d;
  d.kind_ = Kind::box;
  d.n_ = n;
  d.lo_ = lo;
  d.hi_ = hi;
  return d;
}

Domain Domain::from_sdf(std::function<double(const Vec&)> sdf, const Vec& lo, const Vec& hi,
                        int n) {
  Domain d = box(lo, hi, n);
  d.kind_ = Kind::sdf;
  d.sdf_ = std::move(sdf);
  return d;
}

double Domain::cube_distance(const DyadicCube& q) const {
  switch (kind_) {
    case Kind::unit_ball: {
      double far2 = 0.0;
      double near2 = 0.0;
      for (int i = 0; i < n_; ++i) {
        const double a = q.lo(i), b = q.hi(i);
        const double f = std::max(std::abs(a), std::abs(b));
        far2 += f * f;
        if (a > 0.0) near2 += a * a;
        else if (b < 0.0) near2 += b * b;
      }
      if (near2 >= 1.0) return kOutside;
      if (far2 < 1.0) return 1.0 - std::sqrt(far2);
      return 0.0;
    }
    case Kind::box: {
      double d = std::numeric_limits<double>::infinity();
      for (int i = 0; i < n_; ++i) {
        if (q.hi(i) <= lo_[i] || q.lo(i) >= hi_[i]) return kOutside;
        d = std::min({d, q.lo(i) - lo_[i], hi_[i] - q.hi(i)});
      }
      return std::max(d, 0.0);
    }
    case Kind::sdf: {
      const double half = 0.5 * q.diam();
      const double s = sdf_(q.center());
      if (s <= -half) return kOutside;
      return std::max(s - half, 0.0);
    }
  }
  return 0.0;
}

bool Domain::cube_outside(const DyadicCube& q) const { return cube_distance(q) == kOutside; }

double Domain::point_distance(const Vec& p) const {
  switch (kind_) {
    case Kind::unit_ball:
      return 1.0 - norm(p, n_);
    case Kind::box: {
      double d = std::numeric_limits<double>::infinity();
      for (int i = 0; i < n_; ++i) d = std::min({d, p[i] - lo_[i], hi_[i] - p[i]});
      return d;
    }
    case Kind::sdf:
      return sdf_(p);
  }
  return 0.0;
}

// -- decomposition ---------------------------------------------------------

WhitneyDecomposition WhitneyDecomposition::decompose(const Domain& domain, int max_level,
                                                     std::size_t budget) {
  if (max_level > 30) throw PreconditionError("max_level must be <= 30");
  const int n = domain.dim();
  double extent = 0.0;
  for (int i = 0; i < n; ++i) extent = std::max(extent, domain.bbox_hi()[i] - domain.bbox_lo()[i]);
  const int root = -static_cast<int>(std::ceil(std::log2(extent)));
  if (max_level < root) throw PreconditionError("max_level below the root level of the domain");

  WhitneyDecomposition d;
  d.domain_ = domain;
  d.max_level_ = max_level;
  d.min_level_ = max_level;

  std::vector<DyadicCube> stack;
  {
    std::array<std::int64_t, 3> first{}, last{};
    for (int i = 0; i < n; ++i) {
      first[i] = static_cast<std::int64_t>(std::floor(std::ldexp(domain.bbox_lo()[i], root)));
      last[i] = static_cast<std::int64_t>(std::ceil(std::ldexp(domain.bbox_hi()[i], root))) - 1;
    }
    DyadicCube q;
    q.level = root;
    q.dim = n;
    q.corner = first;
    while (true) {
      stack.push_back(q);
      int i = 0;
      for (; i < n; ++i) {
        if (++q.corner[i] <= last[i]) break;
        q.corner[i] = first[i];
      }
      if (i == n) break;
    }
  }

  while (!stack.empty()) {
    const DyadicCube q = stack.back();
    stack.pop_back();
    const double dist = domain.cube_distance(q);
    if (dist == kOutside) continue;
    if (dist >= q.diam()) {
      if (d.cubes_.size() >= budget) {
        throw TruncationError("whitney cube budget exceeded", d.cubes_.size());
      }
      d.index_.emplace(q, d.cubes_.size());
      d.cubes_.push_back(q);
      d.min_level_ = std::min(d.min_level_, q.level);
      continue;
    }
    if (q.level >= max_level) continue;  // unresolved collar
    for (int mask = 0; mask < (1 << n); ++mask) {
      DyadicCube c = q;
      c.level = q.level + 1;
      for (int i = 0; i < n; ++i) c.corner[i] = 2 * q.corner[i] + ((mask >> i) & 1);
      stack.push_back(c);
    }
  }
  // Deterministic order: by level, then corner.
  std::sort(d.cubes_.begin(), d.cubes_.end());
  for (std::size_t i = 0; i < d.cubes_.size(); ++i) d.index_[d.cubes_[i]] = i;
  return d;
}

std::size_t WhitneyDecomposition::index_of(const DyadicCube& q) const {
  const auto it = index_.find(q);
  if (it == index_.end()) throw LookupError("cube is not part of the decomposition");
  return it->second;
}

std::vector<DyadicCube> WhitneyDecomposition::neighbors(const DyadicCube& q) const {
  index_of(q);
  const int n = dim();
  std::vector<DyadicCube> out;
  for (int j = std::max(min_level_, q.level - 2); j <= std::min(max_level_, q.level + 2); ++j) {
    std::array<std::int64_t, 3> first{}, last{};
    for (int i = 0; i < n; ++i) {
      const double a = std::ldexp(static_cast<double>(q.corner[i]), j - q.level);
      const double b = std::ldexp(static_cast<double>(q.corner[i] + 1), j - q.level);
      first[i] = static_cast<std::int64_t>(std::ceil(a)) - 1;
      last[i] = static_cast<std::int64_t>(std::floor(b));
    }
    DyadicCube c;
    c.level = j;
    c.dim = n;
    c.corner = first;
    while (true) {
      if (!(c == q) && index_.count(c)) out.push_back(c);
      int i = 0;
      for (; i < n; ++i) {
        if (++c.corner[i] <= last[i]) break;
        c.corner[i] = first[i];
      }
      if (i == n) break;
    }
  }
  return out;
}

std::vector<std::size_t> WhitneyDecomposition::cubes_containing(const Vec& p, double slack) const {
  const int n = dim();
  std::vector<std::size_t> out;
  for (int k = min_level_; k <= max_level_; ++k) {
    std::array<std::int64_t, 3> first{}, last{};
    for (int i = 0; i < n; ++i) {
      const double x = std::ldexp(p[i], k);
      first[i] = static_cast<std::int64_t>(std::ceil(x - slack)) - 1;
      last[i] = static_cast<std::int64_t>(std::floor(x + slack));
    }
    DyadicCube c;
    c.level = k;
    c.dim = n;
    c.corner = first;
    while (true) {
      const auto it = index_.find(c);
      if (it != index_.end() && c.contains(p, slack * c.edge())) out.push_back(it->second);
      int i = 0;
      for (; i < n; ++i) {
        if (++c.corner[i] <= last[i]) break;
        c.corner[i] = first[i];
      }
      if (i == n) break;
    }
  }
  return out;
}

std::vector<std::size_t> WhitneyDecomposition::level_counts() const {
  std::vector<std::size_t> counts(static_cast<std::size_t>(max_level_ - min_level_ + 1), 0);
  for (const auto& q : cubes_) ++counts[static_cast<std::size_t>(q.level - min_level_)];
  return counts;
}

RadialChain WhitneyDecomposition::radial_chain(const Vec& omega) const {
  const int n = dim();
  if (std::abs(norm(omega, n) - 1.0) > 1e-12) throw PreconditionError("omega must be a unit vector");
  constexpr double kSlack = 1e-10;

  // Ray parameters [enter, exit] of a closed cube.
  auto params = [&](const DyadicCube& q, double& enter, double& exit) {
    enter = 0.0;
    exit = std::numeric_limits<double>::infinity();
    const double tol = kSlack * q.edge();
    for (int i = 0; i < n; ++i) {
      if (std::abs(omega[i]) < 1e-300) {
        if (q.lo(i) > tol || q.hi(i) < -tol) exit = -1.0;
        continue;
      }
      const double t1 = q.lo(i) / omega[i];
      const double t2 = q.hi(i) / omega[i];
      enter = std::max(enter, std::min(t1, t2));
      exit = std::min(exit, std::max(t1, t2));
    }
  };

  struct Entry {
    double enter, exit;
    std::size_t idx;
  };
  std::vector<Entry> found;
  std::unordered_map<std::size_t, bool> seen;
  double s = 0.0;
  while (true) {
    const Vec p = scale(s, omega);
    double next = std::numeric_limits<double>::infinity();
    for (std::size_t idx : cubes_containing(p, kSlack)) {
      double enter = 0.0, exit = 0.0;
      params(cubes_[idx], enter, exit);
      if (!seen.count(idx)) {
        seen.emplace(idx, true);
        found.push_back({std::min(enter, s), exit, idx});
      }
      if (exit > s + kSlack * cubes_[idx].edge()) next = std::min(next, exit);
    }
    if (!std::isfinite(next)) break;
    s = next;
  }
  std::sort(found.begin(), found.end(), [&](const Entry& a, const Entry& b) {
    if (a.enter != b.enter) return a.enter < b.enter;
    const auto& qa = cubes_[a.idx];
    const auto& qb = cubes_[b.idx];
    if (qa.level != qb.level) return qa.level < qb.level;
    return qa.corner < qb.corner;
  });
  RadialChain chain;
  chain.omega = omega;
  for (const auto& e : found) {
    chain.cubes.push_back(cubes_[e.idx]);
    chain.s_enter.push_back(e.enter);
    chain.s_exit.push_back(e.exit);
  }
  return chain;
}

std::size_t RadialChain::count_to(double r) const {
  return static_cast<std::size_t>(std::upper_bound(s_enter.begin(), s_enter.end(), r) -
                                  s_enter.begin());
}

std::pair<double, double> WhitneyDecomposition::ratio_range() const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& q : cubes_) {
    const double r = q.diam() / domain_.cube_distance(q);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return {lo, hi};
}

bool WhitneyDecomposition::interiors_disjoint() const {
  for (const auto& q : cubes_) {
    DyadicCube a = q;
    while (a.level > min_level_) {
      a = a.parent();
      if (index_.count(a)) return false;
    }
  }
  return true;
}

int WhitneyDecomposition::max_neighbor_count() const {
  std::size_t m = 0;
  for (const auto& q : cubes_) m = std::max(m, neighbors(q).size());
  return static_cast<int>(m);
}

nlohmann::json to_json(const WhitneyDecomposition& d) {
  nlohmann::json cubes = nlohmann::json::array();
  for (const auto& q : d.cubes()) {
    std::vector<std::int64_t> corner(q.corner.begin(), q.corner.begin() + q.dim);
    cubes.push_back({{"level", q.level},
                     {"corner", corner},
                     {"diam", q.diam()},
                     {"dist_to_boundary", d.dist_to_boundary(q)}});
  }
  const char* kind = d.domain().kind() == Domain::Kind::unit_ball ? "unit_ball"
                     : d.domain().kind() == Domain::Kind::box    ? "box"
                                                                  : "sdf";
  return nlohmann::json{{"dim", d.dim()},
                        {"domain", kind},
                        {"max_level", d.max_level()},
                        {"cube_count", d.size()},
                        {"cubes", std::move(cubes)}};
}

std::vector<ChainSample> chain_ratios(const RadialChain& chain, int depth) {
  std::vector<ChainSample> out;
  for (int j = 1; j <= depth; ++j) {
    ChainSample s;
    s.j = j;
    s.count = chain.count_to(1.0 - std::ldexp(1.0, -j));
    s.ratio = static_cast<double>(s.count) / (j * std::numbers::ln2);
    out.push_back(s);
  }
  return out;
}

}  // namespace gmt
