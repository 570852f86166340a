#include "gmt/config.hpp"

#include <fstream>

#include "gmt/errors.hpp"

namespace gmt {

const Defaults& builtin_defaults() {
  static const Defaults d = [] {
    Defaults x;
    x.chain2 = {3.0, 7.3, 7.0};
    x.chain3 = {5.5, 11.6, 12.0};
    x.neighbor_bound2 = 10;
    x.neighbor_bound3 = 44;
    x.poincare_c = 0.56;
    return x;
  }();
  return d;
}

namespace {

nlohmann::json chain_json(const ChainConstants& c) {
  return nlohmann::json{{"c1", c.c1}, {"c2", c.c2}, {"c3", c.c3}};
}

ChainConstants chain_from(const nlohmann::json& j) {
  return ChainConstants{j.at("c1").get<double>(), j.at("c2").get<double>(),
                        j.at("c3").get<double>()};
}

}  // namespace

nlohmann::json to_json(const Defaults& d) {
  return nlohmann::json{
      {"version", d.version},
      {"pseudomonotone_c", d.pseudomonotone_c},
      {"grid_epsilon", d.grid_epsilon},
      {"roundtrip_rtol", d.roundtrip_rtol},
      {"divergence_doublings", d.divergence_doublings},
      {"divergence_threshold", d.divergence_threshold},
      {"divergence_growth", d.divergence_growth},
      {"tail_log2_x", d.tail_log2_x},
      {"tail_borderline", d.tail_borderline},
      {"tail_stability", d.tail_stability},
      {"matched_rate_c", d.matched_rate_c},
      {"chain2", chain_json(d.chain2)},
      {"chain3", chain_json(d.chain3)},
      {"neighbor_bound2", d.neighbor_bound2},
      {"neighbor_bound3", d.neighbor_bound3},
      {"poincare_c", d.poincare_c},
      {"family_tail", d.family_tail},
      {"multiplicity_tol", d.multiplicity_tol},
  };
}

Defaults defaults_from_json(const nlohmann::json& j) {
  try {
    Defaults d;
    d.version = j.at("version").get<std::string>();
    d.pseudomonotone_c = j.at("pseudomonotone_c").get<double>();
    d.grid_epsilon = j.at("grid_epsilon").get<double>();
    d.roundtrip_rtol = j.at("roundtrip_rtol").get<double>();
    d.divergence_doublings = j.at("divergence_doublings").get<int>();
    d.divergence_threshold = j.at("divergence_threshold").get<double>();
    d.divergence_growth = j.at("divergence_growth").get<double>();
    d.tail_log2_x = j.at("tail_log2_x").get<double>();
    d.tail_borderline = j.at("tail_borderline").get<double>();
    d.tail_stability = j.at("tail_stability").get<double>();
    d.matched_rate_c = j.at("matched_rate_c").get<double>();
    d.chain2 = chain_from(j.at("chain2"));
    d.chain3 = chain_from(j.at("chain3"));
    d.neighbor_bound2 = j.at("neighbor_bound2").get<int>();
    d.neighbor_bound3 = j.at("neighbor_bound3").get<int>();
    d.poincare_c = j.at("poincare_c").get<double>();
    d.family_tail = j.at("family_tail").get<double>();
    d.multiplicity_tol = j.at("multiplicity_tol").get<double>();
    if (d.divergence_doublings < 4) throw SchemaError("divergence_doublings must be >= 4");
    if (!(d.pseudomonotone_c >= 1.0)) throw SchemaError("pseudomonotone_c must be >= 1");
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("defaults: ") + e.what());
  }
}

Defaults load_defaults(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open defaults file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("defaults: ") + e.what());
  }
  return defaults_from_json(j);
}

}  // namespace gmt
