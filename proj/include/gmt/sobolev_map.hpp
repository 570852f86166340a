#pragma once

// Sampled maps f: B^n -> R^m, cube averages and radii over a Whitney
// decomposition, discrete Dirichlet energy, and the S/R ball families built
// from the image balls B(f_Q, r_Q).

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gmt/config.hpp"
#include "gmt/gauge.hpp"
#include "gmt/geometry.hpp"
#include "gmt/whitney.hpp"

namespace gmt {

/// A map sampled on the cell-centred lattice x_i = -1 + (i + 1/2) h of
/// [-1, 1]^n. Procedural maps are evaluated exactly wherever needed; the
/// lattice only fixes the resolution of energies and averages.
class SampledMap {
 public:
  using Eval = std::function<Vec(const Vec&)>;

  static SampledMap from_function(Eval f, int n, int m, double spacing, std::string label);
  /// `values` holds N^n * m numbers, x_0 fastest, components innermost.
  static SampledMap from_lattice(std::vector<double> values, int n, int m, double spacing,
                                 std::string label);
  /// Rows "x1,..,xn,f1,..,fm" on a full cell-centred lattice; a header row is
  /// allowed.
  static SampledMap from_csv(const std::string& path, int n, int m);

  static SampledMap identity(int n, double spacing);
  /// f(x) = x |x|^(a-1).
  static SampledMap radial(double a, int n, double spacing);
  /// Harmonic extension into the disk of a Hilbert curve parametrising the
  /// unit square along the circle.
  static SampledMap peano_extension(double spacing, int curve_depth = 8, int modes = 512);
  /// "identity", "radial:a", "peano-extension" or "csv:<path>".
  static SampledMap parse(std::string_view spec, int n, double spacing, int m = 0);

  int n() const noexcept { return n_; }
  int m() const noexcept { return m_; }
  double spacing() const noexcept { return h_; }
  int nodes_per_axis() const noexcept { return N_; }
  bool procedural() const noexcept { return static_cast<bool>(eval_); }
  const std::string& label() const noexcept { return label_; }

  Vec node(const std::array<int, 3>& idx) const;
  Vec value_at(const std::array<int, 3>& idx) const;
  /// Exact for procedural maps; nearest lattice node otherwise.
  Vec evaluate(const Vec& x) const;
  /// Value at a boundary point: exact for procedural maps, otherwise the
  /// nearest lattice node inside the ball (ResolutionError if farther than 2h).
  Vec boundary_value(const Vec& omega) const;

  void set_modulus(std::shared_ptr<const Modulus> m) { modulus_ = std::move(m); }
  const Modulus* modulus() const noexcept { return modulus_.get(); }

 private:
  int n_ = 2, m_ = 2, N_ = 0;
  double h_ = 0.0;
  std::string label_;
  Eval eval_;
  std::vector<double> values_;
  std::shared_ptr<const Modulus> modulus_;
};

struct ModulusCheck {
  bool pass = true;
  double worst_ratio = 0.0;  // max |f(z)-f(w)| / psi(|z-w|)
  std::size_t pairs = 0;
  std::size_t skipped = 0;   // pairs outside the modulus range
};
/// Samples random lattice pairs in the ball and compares against psi.
ModulusCheck check_modulus(const SampledMap& f, std::size_t pairs, std::uint64_t seed);

// -- cube statistics -------------------------------------------------------

/// Midpoint-rule mean over Q. Lattice maps use the nodes inside Q and refuse
/// cubes holding fewer than 2^n of them; procedural maps use at least 4
/// points per axis.
Vec cube_average(const SampledMap& f, const DyadicCube& q);
/// Integral of |Df|^n over Q with the same quadrature as cube_average.
double cube_energy(const SampledMap& f, const DyadicCube& q);
/// max |f_Q - f_Q~| over the neighbours of Q.
double cube_radius(const SampledMap& f, const WhitneyDecomposition& d, const DyadicCube& q);

/// Averages and radii for every cube of d, in cube order.
struct CubeField {
  std::vector<Vec> average;
  std::vector<double> radius;
};
CubeField cube_field(const SampledMap& f, const WhitneyDecomposition& d);

// -- energy ----------------------------------------------------------------

using Region = std::function<bool(const Vec&)>;
Region region_ball(int n);
/// B^n minus the closed ball B(0, 1 - delta).
Region region_shell(int n, double delta);

struct EnergyReport {
  double energy = 0.0;
  std::size_t cells = 0;
  std::size_t excluded_cells = 0;  // lattice cells without a central stencil
};
/// Sum over lattice cells with centre in the region of |Df|_F^n h^n.
EnergyReport dirichlet_energy(const SampledMap& f, const Region& region);

// -- ball families ---------------------------------------------------------

struct Provenance {
  enum class Tag { S, R };
  Tag tag = Tag::S;
  std::size_t cube = 0;  // source cube index
  int index = 0;         // i for S_i, k for R_k
  int rescale_k = -1;    // bracket used by rescaling, -1 if untouched
  int rescale_l = -1;

  friend bool operator==(const Provenance& a, const Provenance& b) {
    return a.tag == b.tag && a.cube == b.cube && a.index == b.index;
  }
};

struct WeightedBall {
  Vec center{};
  double radius = 0.0;
  double weight = 0.0;
  Provenance provenance;
};

class BallFamily {
 public:
  explicit BallFamily(int n = 2) : n_(n) {}
  void add(const WeightedBall& b);
  void append(const BallFamily& other);
  const std::vector<WeightedBall>& balls() const noexcept { return balls_; }
  std::vector<WeightedBall>& balls() noexcept { return balls_; }
  std::size_t size() const noexcept { return balls_.size(); }
  int n() const noexcept { return n_; }
  /// Cached sum of w r^n.
  double mass() const noexcept { return mass_; }
  double recompute_mass() const;

 private:
  int n_;
  std::vector<WeightedBall> balls_;
  double mass_ = 0.0;
};

/// Number of S balls kept so that the dropped tail is below `tail` r^n.
int s_family_length(int n, double tail);
/// S_i(B) = B(x, r / 2^i) with weight 2^i, i = 1..i_max.
BallFamily build_S_family(const Vec& center, double r, int n, int i_max,
                          std::size_t cube = 0);
/// R_k(B) = B(x, alpha(2^-k)) with weight lambda(k) for k >= k0(r), the
/// smallest k with 2^-k <= r, until the tail is below `tail` r^n.
/// Throws RangeError if 2^-k0 > t0 unless `clamp_to_base`, which starts at
/// the base index instead.
BallFamily build_R_family(const Vec& center, double r, const Modulus& m, int n,
                          double tail = 1e-6, bool clamp_to_base = false, std::size_t cube = 0);
/// Smallest k with 2^-k <= r.
int dyadic_index(double r);

/// The union of S and R families over all seed balls, kept as seeds and
/// generated on demand.
class AssembledFamily {
 public:
  struct Seed {
    std::size_t cube = 0;
    Vec center{};
    double radius = 0.0;
  };

  AssembledFamily(std::vector<Seed> seeds, int n, std::shared_ptr<const DyadicScales> scales,
                  double tail);

  const std::vector<Seed>& seeds() const noexcept { return seeds_; }
  int n() const noexcept { return n_; }
  const DyadicScales& scales() const noexcept { return *scales_; }
  int s_length() const noexcept { return s_len_; }
  /// R indices used for seed j.
  int r_first(std::size_t j) const { return r_first_[j]; }
  int r_last(std::size_t j) const { return r_last_[j]; }
  double mass() const noexcept { return mass_; }
  std::size_t ball_count() const noexcept { return ball_count_; }
  /// Largest radius among the balls of seed j.
  double max_radius(std::size_t j) const;

  template <class F>
  void for_each_ball(std::size_t j, F&& fn) const {
    const Seed& s = seeds_[j];
    WeightedBall b;
    b.center = s.center;
    b.provenance.cube = s.cube;
    b.provenance.tag = Provenance::Tag::S;
    for (int i = 1; i <= s_len_; ++i) {
      b.radius = std::ldexp(s.radius, -i);
      b.weight = std::ldexp(1.0, i);
      b.provenance.index = i;
      fn(b);
    }
    b.provenance.tag = Provenance::Tag::R;
    for (int k = r_first_[j]; k <= r_last_[j]; ++k) {
      b.radius = scales_->alpha_at(k);
      b.weight = scales_->lambda_at(k);
      b.provenance.index = k;
      fn(b);
    }
  }
  template <class F>
  void for_each_ball(F&& fn) const {
    for (std::size_t j = 0; j < seeds_.size(); ++j) for_each_ball(j, fn);
  }
  BallFamily materialize() const;
  /// Sum of r_Q^n over the seeds.
  double seed_mass() const;

 private:
  std::vector<Seed> seeds_;
  int n_;
  std::shared_ptr<const DyadicScales> scales_;
  int s_len_ = 0;
  std::vector<int> r_first_, r_last_;
  double mass_ = 0.0;
  std::size_t ball_count_ = 0;
};

/// Seeds (f_Q, r_Q) for every cube with r_Q > 0 (optionally restricted to
/// cubes accepted by `keep`), with S and R families attached.
AssembledFamily assemble_family(const CubeField& field, const WhitneyDecomposition& d,
                                const Modulus& m, const Defaults& cfg = builtin_defaults(),
                                const std::function<bool(std::size_t)>& keep = {});

/// C_1 = C_P (N_nb + 1) (1 + 2 / lambda_base^(n-1)): Poincare constant times
/// neighbour-union overlap times the S/R mass factor.
double family_constant(const Modulus& m, int n, const Defaults& cfg = builtin_defaults());

nlohmann::json to_json(const WeightedBall& b, int m);

}  // namespace gmt
