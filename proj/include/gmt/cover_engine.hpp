#pragma once

// The covering argument for f(dB^n) run on a sampled map: boundary traces
// along radial chains, annulus ledgers P_l / theta_l, per-annulus ball
// selection, rescaling of the ball family to level l, and the final weighted
// cover with its content bound.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "gmt/config.hpp"
#include "gmt/gauge.hpp"
#include "gmt/hausdorff.hpp"
#include "gmt/sobolev_map.hpp"
#include "gmt/whitney.hpp"

namespace gmt {

/// c0~ = 2 max(c2 beta, 1 / lambda_base).
double default_c0_tilde(const Modulus& m, int n, const Defaults& cfg = builtin_defaults());

// -- boundary trace --------------------------------------------------------

struct DirectionTrace {
  Vec omega{};
  Vec image{};                     // x = f(omega)
  std::vector<std::size_t> chain;  // cube indices along [0, omega]
  std::vector<Vec> centers;        // f_Q along the chain
  std::vector<std::size_t> full_position;  // position in the unrestricted chain
  std::size_t full_length = 0;
  int l0 = -1;
  bool resolved = false;
  bool constant_tail = false;      // every chain centre equals x
  std::size_t q_omega = 0;         // designated cube of the constant-tail case
  int l0_bumps = 0;                // increments made to clear the chain constant c3
  std::string note;
};

struct BoundaryTrace {
  int n = 2;
  int m = 2;
  std::vector<DirectionTrace> directions;
  std::size_t unresolved = 0;
  bool singleton = false;          // no cube has r_Q > 0

  /// Directions with l0 <= l (the stratum E_l).
  std::vector<std::size_t> stratum(int l) const;
  /// Smallest l whose stratum holds every resolved direction.
  int common_l0() const;
};

/// `keep` restricts the chains to a subset of cubes (used for W^delta).
BoundaryTrace trace_boundary(const SampledMap& f, const WhitneyDecomposition& d,
                             const CubeField& field, const Modulus& m,
                             const std::vector<Vec>& omegas,
                             const Defaults& cfg = builtin_defaults(),
                             const std::function<bool(std::size_t)>& keep = {});

/// `count` directions: equally spaced angles for n = 2, a Fibonacci sphere
/// for n = 3.
std::vector<Vec> boundary_directions(int n, std::size_t count);

// -- annulus ledger --------------------------------------------------------

struct AnnulusEntry {
  enum class Branch { run, bridge, constant, unresolved };
  int l = 0;
  Branch branch = Branch::unresolved;
  std::vector<std::size_t> positions;  // chain positions forming P_l
  int theta = 0;
};

struct AnnulusLedger {
  std::size_t direction = 0;
  int l0 = 0;  // first annulus (the stratum level)
  std::vector<AnnulusEntry> entries;  // l = l0 .. l_max
  int last_resolved = -1;

  const AnnulusEntry& at(int l) const { return entries.at(static_cast<std::size_t>(l - l0)); }
};

/// Annulus level of a centre at distance r from x: 2^-l <= r < 2^-l+1.
int annulus_level(double r);

AnnulusLedger build_ledger(const BoundaryTrace& t, std::size_t direction, int l0, int l_max,
                           double c0_tilde, const DyadicScales& scales);

struct HalfAnnuliResult {
  bool holds = false;
  int l1 = -1;  // smallest l >= 2 l0 from which the half-annuli count holds up to l_max, -1 if none
  // When it fails at l: both sides of the chain-count contradiction bound.
  int failing_l = -1;
  double chain_side = 0.0;
  double annuli_side = 0.0;
};
/// Sum_{k=l0}^{l} theta_k >= l / 2.
bool half_annuli_holds(const AnnulusLedger& ledger, int l);
HalfAnnuliResult half_annuli_check(const AnnulusLedger& ledger, int l, const Modulus& m,
                                   double c0_tilde, const Defaults& cfg = builtin_defaults());

// -- ball selection --------------------------------------------------------

struct Selection {
  std::vector<WeightedBall> balls;
  double total_weight = 0.0;
  double min_radius = 0.0;
  bool bridge_radius_ok = true;  // r_Q > 2^-k for the bridging cube
  int s_index_overflow = 0;      // S indices beyond the truncated family
};

Selection select_balls(const AnnulusLedger& ledger, const BoundaryTrace& t, int k,
                       const CubeField& field, const DyadicScales& scales, double c0_tilde,
                       int s_length);

// -- rescaling -------------------------------------------------------------

struct Rescaler {
  const DyadicScales* scales = nullptr;
  int l = 0;
  int l0 = 0;
  double c0_tilde = 0.0;
  int n = 2;

  /// Bracket index k in [l0, l] of radius r, or -1 below the bottom bracket.
  int bracket(double r) const;
  /// Rescaled copy; untouched (and `flagged`) below the bottom bracket.
  WeightedBall apply(const WeightedBall& b, bool& flagged) const;
};

struct RescaledFamily {
  BallFamily family;
  std::size_t flagged = 0;
};
RescaledFamily rescale_family(const BallFamily& f, const DyadicScales& scales, int l, int l0,
                              double c0_tilde);

// -- final cover -----------------------------------------------------------

/// (4 w / (lambda(l)^n G_l), 16 c0~ lambda(l) B) over the rescaled family,
/// generated lazily from the assembled family. Sub-bracket balls are left out.
class RescaledCover : public WeightedCoverSource {
 public:
  RescaledCover(const AssembledFamily& fam, int l, int l0, double c0_tilde, double g_l, int m);
  /// Pairs (coef * w', blow * B') for the rescaled balls B' with weight w'.
  RescaledCover(const AssembledFamily& fam, const Rescaler& rescaler, double coef, double blow,
                int m);

  void visit_all(const Visitor& v) const override;
  void visit_candidates(const Vec& x, const Visitor& v) const override;
  double coverage(const Vec& x) const override;

  double rescaled_mass() const noexcept { return rescaled_mass_; }
  double excluded_mass() const noexcept { return excluded_mass_; }
  std::size_t excluded() const noexcept { return excluded_; }
  double min_diameter() const noexcept { return min_diameter_; }
  double max_radius() const noexcept { return max_radius_; }

 private:
  void scan();
  void visit_seed(std::size_t j, const Visitor& v) const;

  const AssembledFamily* fam_;
  Rescaler rescaler_;
  double coef_scale_ = 0.0;
  double blow_ = 0.0;
  int m_ = 2;
  std::vector<double> reach_;  // largest blown-up radius per seed
  double rescaled_mass_ = 0.0;
  double excluded_mass_ = 0.0;
  std::size_t excluded_ = 0;
  double min_diameter_ = 0.0;
  double max_radius_ = 0.0;
};

struct CoverReport {
  int l = 0;
  int l0 = 0;
  int l1 = 0;
  double g_l = 0.0;
  double content_bound = 0.0;    // A / G_l
  double weighted_content = 0.0; // sum c h(diam) with h = t^n
  double hausdorff_bound = 0.0;  // doubling constant * weighted_content
  double min_multiplicity = 0.0;
  double min_diameter = 0.0;
  double mass = 0.0;
  double rescaled_mass = 0.0;
  double excluded_mass = 0.0;
  std::size_t excluded_balls = 0;
  std::size_t directions = 0;
  std::size_t failing_directions = 0;
  std::vector<std::size_t> failing;  // directions with multiplicity < 1
  nlohmann::json constants;
};

double g_sum(const DyadicScales& scales, int l1, int l, int n);

/// G_l against int_{2^-l}^{2^-l1} (u/u')^{n-1} dt/t^n.
struct GComparison {
  int l1 = 0;
  int l = 0;
  double g = 0.0;
  double integral = 0.0;
  double rel_error = 0.0;      // |G_l - integral| / integral
  double rel_error_ln2 = 0.0;  // against integral / ln 2
};
GComparison compare_g_integral(const Modulus& m, int l1, int l, int n);

CoverReport final_cover(const BoundaryTrace& t, const AssembledFamily& fam, int l, int l0, int l1,
                        double c0_tilde, const Modulus& m,
                        const Defaults& cfg = builtin_defaults());

// -- whole pipelines -------------------------------------------------------

struct PipelineOptions {
  int depth = 14;
  std::size_t directions = 64;
  double c0_tilde = 0.0;  // 0: default_c0_tilde
  std::vector<int> levels;  // l values; empty: l1 .. l1 + 12
};

struct PipelineResult {
  BoundaryTrace trace;
  std::vector<AnnulusLedger> ledgers;
  int l0 = 0;
  int l1 = -1;
  double c0_tilde = 0.0;
  double energy = 0.0;
  double c1 = 0.0;
  double mass = 0.0;
  std::vector<CoverReport> reports;
  std::vector<std::string> notes;
};

PipelineResult run_cover_pipeline(const SampledMap& f, const Modulus& m,
                                  const PipelineOptions& opt,
                                  const Defaults& cfg = builtin_defaults());

struct HolderReport {
  double eps = 0.0;
  double delta = 0.0;
  double tail_energy = 0.0;
  std::size_t kept_cubes = 0;
  int l0 = 0;
  int l1 = -1;
  int l = 0;
  double mass = 0.0;
  double c0_tilde = 0.0;
  double c1 = 0.0;
  // g(diam) <= diam^n log 2^l once diam >= 2^-l: the scale form of the
  // weighted sum, an upper bound for lambda^g_inf that needs no radius cap.
  double bound = 0.0;
  double direct_bound = 0.0;   // sum c g(diam) with g = t^n log 1/t (capped)
  double proof_bound = 0.0;    // 2^{3+5n} c0~^n gamma^{1-n} ln2 l/(l-l1) mass
  double epsilon_bound = 0.0;  // same with mass replaced by C1 eps
  std::size_t excluded_balls = 0;  // below the bottom bracket alpha(2^-l)/8c0~
  double min_diameter = 0.0;
  double min_multiplicity = 0.0;
  double max_radius = 0.0;
  bool radius_below_half = false;
  std::size_t directions = 0;
  nlohmann::json constants;
};

HolderReport holder_pipeline(const SampledMap& f, const WhitneyDecomposition& d,
                             const CubeField& field, double gamma, double eps,
                             std::size_t directions, const Defaults& cfg = builtin_defaults(),
                             double c0_tilde = 0.0);

nlohmann::json to_json(const CoverReport& r);
nlohmann::json to_json(const HolderReport& r);

}  // namespace gmt
