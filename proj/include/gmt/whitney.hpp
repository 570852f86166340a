#pragma once

// Dyadic Whitney decompositions of bounded open sets in R^2 and R^3.
//
// A cube of level k with integer corner c is prod_i [c_i 2^-k, (c_i+1) 2^-k].
// Cubes are emitted top-down: a cube is kept when diam(Q) <= dist(Q, dOmega),
// which yields 1/4 <= diam/dist <= 1 for every emitted cube.

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "gmt/config.hpp"
#include "gmt/geometry.hpp"

namespace gmt {

struct DyadicCube {
  int level = 0;
  std::array<std::int64_t, 3> corner{};
  int dim = 2;

  double edge() const;
  double diam() const;
  double lo(int i) const;
  double hi(int i) const;
  Vec center() const;
  /// Closed-cube containment with an absolute slack.
  bool contains(const Vec& p, double slack = 0.0) const;
  DyadicCube parent() const;
  /// True if this cube is contained in `other` (same cube included).
  bool inside(const DyadicCube& other) const;

  friend bool operator==(const DyadicCube& a, const DyadicCube& b) {
    return a.level == b.level && a.corner == b.corner && a.dim == b.dim;
  }
  friend bool operator<(const DyadicCube& a, const DyadicCube& b) {
    if (a.level != b.level) return a.level < b.level;
    return a.corner < b.corner;
  }
};

struct DyadicCubeHash {
  std::size_t operator()(const DyadicCube& q) const noexcept;
};

/// Shape of the decomposed set. Distances are exact for the ball and for
/// boxes; for a signed distance function the cube distance is the lower
/// bound sdf(center) - diam/2.
class Domain {
 public:
  enum class Kind { unit_ball, box, sdf };

  static Domain unit_ball(int n);
  static Domain box(const Vec& lo, const Vec& hi, int n);
  /// `sdf` is 1-Lipschitz, positive inside; [lo, hi] bounds the set.
  static Domain from_sdf(std::function<double(const Vec&)> sdf, const Vec& lo, const Vec& hi,
                         int n);

  Kind kind() const noexcept { return kind_; }
  int dim() const noexcept { return n_; }
  const Vec& bbox_lo() const noexcept { return lo_; }
  const Vec& bbox_hi() const noexcept { return hi_; }

  /// dist(Q, dOmega) if Q lies in Omega, otherwise a value <= 0 when Q may
  /// meet Omega, and a large negative value when Q is outside.
  double cube_distance(const DyadicCube& q) const;
  /// True if Q certainly misses Omega.
  bool cube_outside(const DyadicCube& q) const;
  /// Distance of a point to the boundary (positive inside).
  double point_distance(const Vec& p) const;

 private:
  Kind kind_ = Kind::unit_ball;
  int n_ = 2;
  Vec lo_{}, hi_{};
  std::function<double(const Vec&)> sdf_;
};

class WhitneyDecomposition;

struct RadialChain {
  Vec omega{};
  std::vector<DyadicCube> cubes;
  std::vector<double> s_enter;  // first contact with the ray, non-decreasing
  std::vector<double> s_exit;
  /// Number of chain cubes meeting the segment [0, r omega].
  std::size_t count_to(double r) const;
};

class WhitneyDecomposition {
 public:
  /// Throws TruncationError when more than `budget` cubes would be emitted.
  static WhitneyDecomposition decompose(const Domain& domain, int max_level,
                                        std::size_t budget = 20'000'000);

  const Domain& domain() const noexcept { return domain_; }
  int dim() const noexcept { return domain_.dim(); }
  int max_level() const noexcept { return max_level_; }
  int min_level() const noexcept { return min_level_; }
  const std::vector<DyadicCube>& cubes() const noexcept { return cubes_; }
  std::size_t size() const noexcept { return cubes_.size(); }

  bool contains(const DyadicCube& q) const { return index_.count(q) != 0; }
  /// Index into cubes(), or throws LookupError.
  std::size_t index_of(const DyadicCube& q) const;
  double dist_to_boundary(const DyadicCube& q) const { return domain_.cube_distance(q); }

  /// Cubes sharing at least one point with Q (Q excluded).
  std::vector<DyadicCube> neighbors(const DyadicCube& q) const;
  /// Indices of cubes whose closed hull contains p (within `slack` * edge).
  std::vector<std::size_t> cubes_containing(const Vec& p, double slack = 1e-12) const;
  /// Number of emitted cubes per level, indexed from min_level().
  std::vector<std::size_t> level_counts() const;

  /// Cubes meeting the radius [0, omega]; all touched cubes are included,
  /// ordered by first contact, then level, then corner.
  RadialChain radial_chain(const Vec& omega) const;

  /// Worst values of diam/dist over all cubes (min, max).
  std::pair<double, double> ratio_range() const;
  /// True if no emitted cube lies inside another emitted cube.
  bool interiors_disjoint() const;
  /// Max neighbor count over all cubes.
  int max_neighbor_count() const;

 private:
  Domain domain_;
  int max_level_ = 0;
  int min_level_ = 0;
  std::vector<DyadicCube> cubes_;
  std::unordered_map<DyadicCube, std::size_t, DyadicCubeHash> index_;
};

nlohmann::json to_json(const WhitneyDecomposition& d);

/// Chain-count ratios #q(0, x) / log(1/(1-|x|)) at 1-|x| = 2^-j, j = 1..depth.
struct ChainSample {
  int j = 0;
  std::size_t count = 0;
  double ratio = 0.0;
};
std::vector<ChainSample> chain_ratios(const RadialChain& chain, int depth);

}  // namespace gmt
