#include "gmt/hausdorff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_set>

#include "gmt/errors.hpp"
#include "gmt/parallel.hpp"

namespace gmt {

CoverSet CoverSet::ball(const Vec& center, double radius, int m) {
  if (!(radius >= 0.0)) throw PreconditionError("ball radius must be non-negative");
  CoverSet s;
  s.kind = Kind::ball;
  s.center = center;
  s.radius = radius;
  s.diameter = 2.0 * radius;
  s.m = m;
  return s;
}

CoverSet CoverSet::box(const Vec& lo, const Vec& hi, int m) {
  double d2 = 0.0;
  for (int i = 0; i < m; ++i) d2 += (hi[i] - lo[i]) * (hi[i] - lo[i]);
  return box(lo, hi, m, std::sqrt(d2));
}

CoverSet CoverSet::box(const Vec& lo, const Vec& hi, int m, double diameter) {
  CoverSet s;
  s.kind = Kind::box;
  s.m = m;
  for (int i = 0; i < m; ++i) {
    if (!(hi[i] >= lo[i])) throw PreconditionError("box needs lo <= hi");
    s.center[i] = 0.5 * (lo[i] + hi[i]);
    s.half[i] = 0.5 * (hi[i] - lo[i]);
  }
  s.diameter = diameter;
  return s;
}

bool CoverSet::contains(const Vec& x, double slack) const {
  if (kind == Kind::ball) return distance(x, center, m) <= radius * (1.0 + slack) + slack;
  for (int i = 0; i < m; ++i) {
    if (std::abs(x[i] - center[i]) > half[i] * (1.0 + slack) + slack) return false;
  }
  return true;
}

PointCloud PointCloud::make(std::vector<Vec> points, int m, std::string description) {
  std::sort(points.begin(), points.end());
  std::vector<Vec> out;
  for (const auto& p : points) {
    bool dup = false;
    for (auto it = out.rbegin(); it != out.rend() && p[0] - (*it)[0] <= 1e-12; ++it) {
      if (sup_norm(sub(p, *it), m) <= 1e-12) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(p);
  }
  PointCloud c;
  c.points = std::move(out);
  c.m = m;
  c.description = std::move(description);
  return c;
}

double content_upper(const PointCloud& e, const Cover& c, const Gauge& h) {
  for (const auto& s : c.sets) {
    if (s.diameter > c.delta) throw PreconditionError("cover set larger than delta");
  }
  std::vector<char> covered(e.points.size(), 0);
  parallel_for(e.points.size(), [&](std::size_t i) {
    for (const auto& s : c.sets) {
      if (s.contains(e.points[i])) {
        covered[i] = 1;
        return;
      }
    }
  });
  for (std::size_t i = 0; i < covered.size(); ++i) {
    if (!covered[i]) {
      const auto& p = e.points[i];
      throw CoverInvalidError("point " + std::to_string(i) + " (" + std::to_string(p[0]) + ", " +
                              std::to_string(p[1]) + ") is not covered");
    }
  }
  double s = 0.0;
  for (const auto& u : c.sets) s += h(u.diameter);
  return s;
}

void WeightedCover::add(double c, const CoverSet& u) {
  if (!(c >= 0.0)) throw PreconditionError("cover coefficients must be non-negative");
  pairs.push_back({c, u});
}

void WeightedCover::visit_all(const Visitor& v) const {
  for (const auto& p : pairs) v(p.c, p.set);
}

double WeightedCoverSource::coverage(const Vec& x) const {
  double s = 0.0;
  visit_candidates(x, [&](double c, const CoverSet& u) {
    if (u.contains(x)) s += c;
  });
  return s;
}

double multiplicity(const WeightedCoverSource& wc, const Vec& x) { return wc.coverage(x); }

WeightedBound weighted_content_upper(const PointCloud& e, const WeightedCoverSource& wc,
                                     const Gauge& h, double tolerance) {
  std::vector<double> mult(e.points.size(), 0.0);
  parallel_for(e.points.size(), [&](std::size_t i) { mult[i] = multiplicity(wc, e.points[i]); });
  WeightedBound b;
  b.min_multiplicity = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < mult.size(); ++i) {
    if (mult[i] < b.min_multiplicity) {
      b.min_multiplicity = mult[i];
      b.worst_point = i;
    }
  }
  if (!mult.empty() && b.min_multiplicity < 1.0 - tolerance) {
    throw CoverInvalidError("multiplicity " + std::to_string(b.min_multiplicity) + " < 1 at point " +
                            std::to_string(b.worst_point));
  }
  wc.visit_all([&](double c, const CoverSet& u) { b.weighted += c * h(u.diameter); });
  b.doubling_constant = h.doubling_constant();
  b.hausdorff_bound = b.doubling_constant * b.weighted;
  return b;
}

WeightedCover greedy_prune(const PointCloud& e, const WeightedCover& wc, const Gauge& h) {
  std::vector<double> mult(e.points.size(), 0.0);
  for (std::size_t i = 0; i < e.points.size(); ++i) mult[i] = multiplicity(wc, e.points[i]);
  std::vector<std::size_t> order(wc.pairs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return wc.pairs[a].c * h(wc.pairs[a].set.diameter) > wc.pairs[b].c * h(wc.pairs[b].set.diameter);
  });
  std::vector<char> keep(wc.pairs.size(), 1);
  for (std::size_t idx : order) {
    const auto& p = wc.pairs[idx];
    bool needed = false;
    for (std::size_t i = 0; i < e.points.size() && !needed; ++i) {
      if (p.set.contains(e.points[i]) && mult[i] - p.c < 1.0 - 1e-12) needed = true;
    }
    if (needed) continue;
    keep[idx] = 0;
    for (std::size_t i = 0; i < e.points.size(); ++i) {
      if (p.set.contains(e.points[i])) mult[i] -= p.c;
    }
  }
  WeightedCover out;
  for (std::size_t i = 0; i < wc.pairs.size(); ++i) {
    if (keep[i]) out.pairs.push_back(wc.pairs[i]);
  }
  return out;
}

namespace {

struct KeyHash {
  std::size_t operator()(const std::array<std::int64_t, 3>& k) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto v : k) h = (h ^ static_cast<std::uint64_t>(v)) * 1099511628211ULL;
    return static_cast<std::size_t>(h);
  }
};

}  // namespace

double box_count(const PointCloud& e, double delta, const Gauge& h) {
  if (!(delta > 1e-300)) throw PreconditionError("box_count needs delta above the grid floor");
  std::unordered_set<std::array<std::int64_t, 3>, KeyHash> boxes;
  for (const auto& p : e.points) {
    std::array<std::int64_t, 3> key{};
    for (int i = 0; i < e.m; ++i) key[i] = static_cast<std::int64_t>(std::floor(p[i] / delta));
    boxes.insert(key);
  }
  return static_cast<double>(boxes.size()) * h(delta * std::sqrt(static_cast<double>(e.m)));
}

int MassTree::add(int parent, double diameter, double mass) {
  Node nd;
  nd.parent = parent;
  nd.depth = parent < 0 ? 0 : nodes.at(static_cast<std::size_t>(parent)).depth + 1;
  nd.diameter = diameter;
  nd.mass = mass;
  nodes.push_back(nd);
  return static_cast<int>(nodes.size()) - 1;
}

void MassTree::validate(double rtol) const {
  std::vector<double> child_sum(nodes.size(), 0.0);
  std::vector<char> has_child(nodes.size(), 0);
  double roots = 0.0;
  for (const auto& nd : nodes) {
    if (nd.mass < 0.0) throw TreeInvalidError("negative mass");
    if (nd.parent < 0) {
      roots += nd.mass;
    } else {
      child_sum[static_cast<std::size_t>(nd.parent)] += nd.mass;
      has_child[static_cast<std::size_t>(nd.parent)] = 1;
    }
  }
  if (std::abs(roots - 1.0) > rtol) throw TreeInvalidError("root masses do not sum to 1");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (has_child[i] && std::abs(child_sum[i] - nodes[i].mass) > rtol * nodes[i].mass) {
      throw TreeInvalidError("children of node " + std::to_string(i) + " do not carry its mass");
    }
  }
}

MassLowerBound mass_distribution_lower(const MassTree& tree, const Gauge& h, int min_depth) {
  tree.validate();
  MassLowerBound out;
  out.inf_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const auto& nd = tree.nodes[i];
    const double ratio = nd.mass / h(nd.diameter);
    if (static_cast<std::size_t>(nd.depth) >= out.depth_min.size()) {
      out.depth_min.resize(static_cast<std::size_t>(nd.depth) + 1,
                           std::numeric_limits<double>::infinity());
    }
    out.depth_min[static_cast<std::size_t>(nd.depth)] =
        std::min(out.depth_min[static_cast<std::size_t>(nd.depth)], ratio);
    if (nd.depth >= min_depth && ratio < out.inf_ratio) {
      out.inf_ratio = ratio;
      out.arg_node = static_cast<int>(i);
    }
  }
  return out;
}

nlohmann::json to_json(const WeightedBound& b) {
  return nlohmann::json{{"weighted_content", b.weighted},
                        {"doubling_constant", b.doubling_constant},
                        {"hausdorff_content_bound", b.hausdorff_bound},
                        {"min_multiplicity", b.min_multiplicity}};
}

}  // namespace gmt
