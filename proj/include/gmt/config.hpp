#pragma once

#include <string>

#include <json.hpp>

namespace gmt {

/// Radial chain constants: c1 <= #q(0,x) / log(1/(1-|x|)) <= c2 once #q > c3.
struct ChainConstants {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
};

/// Numerical constants of the toolkit. Values without a closed form are calibrated once
/// (see tools/calibrate_constants.cpp) and frozen here; every report embeds
/// the values it used.
struct Defaults {
  std::string version = "1";

  // modulus checks
  double pseudomonotone_c = 1.05;
  double grid_epsilon = 1e-8;
  double roundtrip_rtol = 1e-9;

  // divergence classification
  int divergence_doublings = 14;
  double divergence_threshold = 50.0;
  double divergence_growth = 0.05;
  double tail_log2_x = 1000.0;
  double tail_borderline = 1e-3;
  double tail_stability = 0.05;
  double matched_rate_c = 8.0;

  // whitney (calibrated)
  ChainConstants chain2{};
  ChainConstants chain3{};
  int neighbor_bound2 = 0;
  int neighbor_bound3 = 0;

  // sobolev map (calibrated Poincare-overlap constant: sum r_Q^n <= C_P * energy)
  double poincare_c = 0.0;
  double family_tail = 1e-6;

  // hausdorff
  double multiplicity_tol = 1e-12;

  const ChainConstants& chain(int n) const { return n == 3 ? chain3 : chain2; }
  int neighbor_bound(int n) const { return n == 3 ? neighbor_bound3 : neighbor_bound2; }
};

/// The compiled-in defaults (identical to share/gmt_defaults.json).
const Defaults& builtin_defaults();

nlohmann::json to_json(const Defaults& d);
Defaults defaults_from_json(const nlohmann::json& j);
Defaults load_defaults(const std::string& path);

}  // namespace gmt
