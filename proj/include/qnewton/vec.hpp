#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

// Small dense-vector helpers. Everything in the library works on plain
// std::vector<double>; dimensions are small (tens, not millions).

namespace qn {

using Vector = std::vector<double>;

inline double dot(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Vector& v) { return std::sqrt(dot(v, v)); }

inline double norm_inf(const Vector& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline Vector scaled(const Vector& v, double s) {
  Vector out(v);
  for (double& x : out) x *= s;
  return out;
}

inline Vector sub(const Vector& a, const Vector& b) {
  Vector out(a);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
  return out;
}

// a + s*b
inline Vector add_scaled(const Vector& a, double s, const Vector& b) {
  Vector out(a);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += s * b[i];
  return out;
}

inline double distance(const Vector& a, const Vector& b) { return norm(sub(a, b)); }

inline bool all_finite(const Vector& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace qn
