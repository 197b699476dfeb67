#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace pasrect {

using Wide = __int128;

/// Exact non-negative fraction num/den used for epsilon and derived thresholds.
struct Ratio {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Ratio make(std::int64_t n, std::int64_t d) {
    if (d <= 0 || n < 0) throw std::invalid_argument("ratio must be non-negative with positive denominator");
    const auto g = std::gcd(n, d);
    return {n / (g == 0 ? 1 : g), d / (g == 0 ? 1 : g)};
  }

  // Best rational approximation with denominator <= max_den (continued fractions).
  static Ratio from_double(double v, std::int64_t max_den = 1000000) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("ratio must be finite and non-negative");
    std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double x = v;
    for (int iter = 0; iter < 64; ++iter) {
      const double a_d = std::floor(x);
      if (a_d > 1e15) break;
      const auto a = static_cast<std::int64_t>(a_d);
      const std::int64_t q2 = q0 + a * q1;
      if (q2 > max_den) break;
      const std::int64_t p2 = p0 + a * p1;
      p0 = p1; q0 = q1; p1 = p2; q1 = q2;
      const double frac = x - a_d;
      if (frac < 1e-12) break;
      x = 1.0 / frac;
    }
    if (q1 == 0) throw std::invalid_argument("ratio approximation failed");
    return make(p1, q1);
  }

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool in_unit_interval() const { return num > 0 && num <= den; }

  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }

  friend bool operator==(const Ratio& a, const Ratio& b) { return Wide(a.num) * b.den == Wide(b.num) * a.den; }
  friend bool operator<(const Ratio& a, const Ratio& b) { return Wide(a.num) * b.den < Wide(b.num) * a.den; }
};

inline Wide ceil_div(Wide a, Wide b) {
  // b > 0
  if (a >= 0) return (a + b - 1) / b;
  return -((-a) / b);
}

inline Wide floor_div(Wide a, Wide b) {
  if (a >= 0) return a / b;
  return -((-a + b - 1) / b);
}

/// ceil((1 - eps) * k)
inline std::int64_t ceil_one_minus(const Ratio& eps, std::int64_t k) {
  return static_cast<std::int64_t>(ceil_div(Wide(k) * (eps.den - eps.num), eps.den));
}

/// ceil(eps * k)
inline std::int64_t ceil_times(const Ratio& eps, std::int64_t k) {
  return static_cast<std::int64_t>(ceil_div(Wide(k) * eps.num, eps.den));
}

/// ceil(m / eps)
inline std::int64_t ceil_over(std::int64_t m, const Ratio& eps) {
  return static_cast<std::int64_t>(ceil_div(Wide(m) * eps.den, eps.num));
}

inline constexpr Wide kWideSaturation = Wide(1) << 100;

/// base^exp, saturating at kWideSaturation.
inline Wide saturating_pow(std::int64_t base, std::int64_t exp) {
  Wide r = 1;
  for (std::int64_t i = 0; i < exp; ++i) {
    r *= base;
    if (r > kWideSaturation) return kWideSaturation;
  }
  return r;
}

inline std::int64_t narrow(Wide v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("value does not fit in 64 bits");
  return static_cast<std::int64_t>(v);
}

inline std::string wide_to_string(Wide v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  std::string s;
  while (v != 0) {
    int d = static_cast<int>(v % 10);
    if (d < 0) d = -d;
    s.insert(s.begin(), static_cast<char>('0' + d));
    v /= 10;
  }
  if (neg) s.insert(s.begin(), '-');
  return s;
}

}  // namespace pasrect
