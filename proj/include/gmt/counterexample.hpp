#pragma once

// The Cantor-tower homeomorphism h of the square: frames P \ Q of a source
// tower (side ratio sigma) are mapped onto the frames of a target tower with
// logarithmically corrected radii by sup-norm radial stretchings.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "gmt/geometry.hpp"
#include "gmt/hausdorff.hpp"

namespace gmt {

/// Generation k has 4^k squares Q_{k,i} (half-side r_k) centred in the
/// quadrants P_{k,i} (half-side R_k) of their parent Q_{k-1}. Q_0 = [0,1]^2.
/// Frame indices are 0-based; base-4 digit g (most significant first) picks
/// the quadrant at generation g as 2 bx + by.
class CantorTower {
 public:
  enum class Kind { source, target };

  /// 2 r_k = sigma^k, 2 R_k = sigma^(k-1) / 2.
  static CantorTower source(double sigma, int depth);
  /// 2 r_k = (ln 4)^-p 2^-k k^-p, 2 R_k = r_{k-1}, 2 R_1 = 1/2.
  static CantorTower target(double p, int depth);

  Kind kind() const noexcept { return kind_; }
  double parameter() const noexcept { return param_; }
  int depth() const noexcept { return depth_; }
  double inner(int k) const { return r_.at(static_cast<std::size_t>(k)); }
  double outer(int k) const { return R_.at(static_cast<std::size_t>(k)); }
  std::uint64_t count(int k) const { return std::uint64_t{1} << (2 * k); }
  Vec center(int k, std::uint64_t i) const;
  std::string label() const;

 private:
  Kind kind_ = Kind::source;
  double param_ = 0.0;
  int depth_ = 0;
  std::vector<double> r_, R_;  // index 0 is Q_0
};

struct FrameLocation {
  enum class Kind { frame, cantor_limit, exterior };
  Kind kind = Kind::exterior;
  int k = 0;
  std::uint64_t i = 0;
  bool boundary = false;  // on a frame boundary; lexicographically first frame chosen
};

/// Deepest frame containing x; cantor_limit when x lies in some Q_{K,i}.
FrameLocation locate(const Vec& x, const CantorTower& t);

/// rho(y) = (a |y| + b) y / |y| in the sup norm, mapping {r <= |y| <= R}
/// onto {r' <= |y| <= R'}.
struct RadialStretch {
  double a = 1.0;
  double b = 0.0;
  double r = 0.0, R = 0.0;    // source annulus
  double rt = 0.0, Rt = 0.0;  // target annulus

  static RadialStretch between(double r, double R, double rt, double Rt);
  /// DomainError unless r <= |y| <= R up to `slack` (absolute).
  Vec apply(const Vec& y, double slack = 0.0) const;
};

RadialStretch frame_stretch(const CantorTower& source, const CantorTower& target, int k);

/// Identity outside [0,1]^2; Cantor-limit points go to the target centre of
/// their depth-K square.
Vec evaluate_h(const Vec& x, const CantorTower& source, const CantorTower& target);

/// Closed form of int |D rho|^2 over one frame:
/// 8a^2(R^2-r^2) + 16ab(R-r) + (32/3) b^2 ln(R/r).
double frame_energy(const RadialStretch& s);

/// Finite-difference Dirichlet energy of h over the 4^k generation-k frames.
/// Frames are integrated one by one for k <= 4; beyond that one frame is
/// integrated and multiplied by 4^k (all frames of a generation are
/// translates). ResolutionError below 16^2 samples per frame.
double generation_energy(int k, const CantorTower& source, const CantorTower& target,
                         std::size_t samples_per_frame);

struct HolderEstimate {
  double beta = 0.0;
  double sup_ratio = 0.0;  // sup |h(x)-h(y)| / |x-y|^beta
  std::size_t pairs = 0;
  Vec worst_x{}, worst_y{};
};
/// Pairs x uniform in the square, y at a log-uniform distance in
/// [sigma^K, 1] from x (kept inside the square).
HolderEstimate holder_ratio(const CantorTower& source, const CantorTower& target,
                            std::size_t pairs, std::uint64_t seed);

struct WitnessReport {
  double p = 0.0;
  double gauge_exponent = 0.0;       // q in g(t) = t^2 (log 1/t)^q
  std::vector<double> ratio;         // 4^-k / g(2 r'_k), k = 0..K
  double inf_ratio = 0.0;            // over k >= min_k
  int min_k = 3;
  double limit = 0.0;                // 2^{2p} when q = 2p, 0 when q > 2p
  MassLowerBound tree_bound;         // mass distribution over the tower squares
  std::string convention;
};
/// Uniform masses 4^-k on the target squares. q defaults to 2p.
WitnessReport witness_positive_measure(const CantorTower& target, double p, int depth,
                                       double gauge_exponent = -1.0, int min_k = 3);

nlohmann::json to_json(const CantorTower& t);
nlohmann::json to_json(const WitnessReport& w);

}  // namespace gmt
