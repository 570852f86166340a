#pragma once

// Parsing of "name:a,b,c" spec strings shared by the gauge, modulus and map
// factories.

#include <string>
#include <string_view>
#include <vector>

#include "gmt/errors.hpp"

namespace gmt::detail {

struct ParsedSpec {
  std::string name;
  std::vector<double> args;
};

inline ParsedSpec parse_spec(std::string_view spec) {
  ParsedSpec out;
  const auto colon = spec.find(':');
  out.name = std::string(spec.substr(0, colon));
  if (out.name.empty()) throw SchemaError("empty spec string");
  if (colon == std::string_view::npos) return out;
  std::string_view rest = spec.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string token(rest.substr(0, comma));
    try {
      std::size_t used = 0;
      out.args.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw SchemaError("malformed number '" + token + "' in spec '" + std::string(spec) + "'");
    }
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return out;
}

inline void require_arity(const ParsedSpec& p, std::size_t lo, std::size_t hi,
                          std::string_view spec) {
  if (p.args.size() < lo || p.args.size() > hi) {
    throw SchemaError("wrong number of arguments in spec '" + std::string(spec) + "'");
  }
}

}  // namespace gmt::detail
