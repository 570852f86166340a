#pragma once

// Upper bounds for (weighted) Hausdorff contents from explicit covers,
// box counting, and mass-distribution lower bounds on nested set trees.

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gmt/gauge.hpp"
#include "gmt/geometry.hpp"

namespace gmt {

/// A ball or an axis box in R^m with its diameter. Box diameters default to
/// the l2 diagonal.
struct CoverSet {
  enum class Kind { ball, box };
  Kind kind = Kind::ball;
  Vec center{};
  double radius = 0.0;  // ball
  Vec half{};           // box half-sides
  double diameter = 0.0;
  int m = 2;

  static CoverSet ball(const Vec& center, double radius, int m);
  static CoverSet box(const Vec& lo, const Vec& hi, int m);
  static CoverSet box(const Vec& lo, const Vec& hi, int m, double diameter);
  bool contains(const Vec& x, double slack = 1e-12) const;
};

struct Cover {
  std::vector<CoverSet> sets;
  double delta = 1e300;
};

/// Finite sample of a set E in R^m, deduplicated within 1e-12.
struct PointCloud {
  std::vector<Vec> points;
  int m = 2;
  std::string description;

  static PointCloud make(std::vector<Vec> points, int m, std::string description);
};

/// sum h(diam U_i); throws CoverInvalidError naming the first uncovered point.
double content_upper(const PointCloud& e, const Cover& c, const Gauge& h);

/// A weighted cover (c_i, U_i) presented as a stream. Implementations may
/// restrict `visit_candidates` to pairs that can contain x.
class WeightedCoverSource {
 public:
  using Visitor = std::function<void(double c, const CoverSet& u)>;
  virtual ~WeightedCoverSource() = default;
  virtual void visit_all(const Visitor& v) const = 0;
  virtual void visit_candidates(const Vec& x, const Visitor& v) const { (void)x; visit_all(v); }
  /// Sum of c_i over the sets containing x.
  virtual double coverage(const Vec& x) const;
};

class WeightedCover : public WeightedCoverSource {
 public:
  struct Pair {
    double c = 0.0;
    CoverSet set;
  };
  std::vector<Pair> pairs;

  void add(double c, const CoverSet& u);
  void visit_all(const Visitor& v) const override;
};

/// sum of c_i over the sets containing x.
double multiplicity(const WeightedCoverSource& wc, const Vec& x);

struct WeightedBound {
  double weighted = 0.0;         // sum c_i h(diam U_i)
  double doubling_constant = 0.0;
  double hausdorff_bound = 0.0;  // doubling_constant * weighted
  double min_multiplicity = 0.0;
  std::size_t worst_point = 0;
};

/// Verifies multiplicity >= 1 at every point of E (CoverInvalidError
/// otherwise) and evaluates the weighted sum.
WeightedBound weighted_content_upper(const PointCloud& e, const WeightedCoverSource& wc,
                                     const Gauge& h, double tolerance = 1e-12);

/// Heuristic: drops pairs, largest h(diam) first, while every point of E
/// keeps multiplicity >= 1.
WeightedCover greedy_prune(const PointCloud& e, const WeightedCover& wc, const Gauge& h);

/// sum over occupied delta-mesh boxes of h(delta sqrt m).
double box_count(const PointCloud& e, double delta, const Gauge& h);

/// Nested sets with masses. Children of a node must carry its mass.
struct MassTree {
  struct Node {
    int parent = -1;
    int depth = 0;
    double diameter = 0.0;
    double mass = 0.0;
  };
  std::vector<Node> nodes;

  int add(int parent, double diameter, double mass);
  /// Throws TreeInvalidError unless depth-0 masses sum to 1 and every
  /// node's children sum to its mass (relative tolerance).
  void validate(double rtol = 1e-9) const;
};

struct MassLowerBound {
  double inf_ratio = 0.0;        // inf of mass / h(diam) over nodes of depth >= min_depth
  int arg_node = -1;
  std::vector<double> depth_min; // per-depth minimum ratio
};
MassLowerBound mass_distribution_lower(const MassTree& tree, const Gauge& h, int min_depth = 0);

nlohmann::json to_json(const WeightedBound& b);

}  // namespace gmt
