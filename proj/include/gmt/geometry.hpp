#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace gmt {

/// Maximum supported dimension of domain and image spaces.
inline constexpr int kMaxDim = 3;

/// A point of R^d, d <= kMaxDim. Unused trailing coordinates stay zero.
using Vec = std::array<double, kMaxDim>;

inline double dot(const Vec& a, const Vec& b, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Vec& a, int dim) { return std::sqrt(dot(a, a, dim)); }

inline double distance(const Vec& a, const Vec& b, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

inline double sup_norm(const Vec& a, int dim) {
  double m = 0.0;
  for (int i = 0; i < dim; ++i) m = std::max(m, std::abs(a[i]));
  return m;
}

inline Vec axpy(double a, const Vec& x, const Vec& y) {
  Vec r{};
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a * x[i] + y[i];
  return r;
}

inline Vec sub(const Vec& a, const Vec& b) {
  Vec r{};
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vec scale(double a, const Vec& x) {
  Vec r{};
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a * x[i];
  return r;
}

}  // namespace gmt
