#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace supremal {

using Vec2 = std::array<double, 2>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm(const Vec2& a) { return std::hypot(a[0], a[1]); }

inline Vec2 operator+(const Vec2& a, const Vec2& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec2 operator-(const Vec2& a, const Vec2& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec2 operator*(double s, const Vec2& a) { return {s * a[0], s * a[1]}; }

/// Axis-aligned box; in 1-D only the first axis is meaningful.
struct Box {
  Vec2 lo{0.0, 0.0};
  Vec2 hi{0.0, 0.0};

  bool contains(const Vec2& p, int dim, double eps = 1e-12) const {
    for (int a = 0; a < dim; ++a) {
      if (p[a] < lo[a] - eps || p[a] > hi[a] + eps) return false;
    }
    return true;
  }
};

/// Saturating addition: +inf absorbs, never produces NaN from inf + finite.
inline double sat_add(double a, double b) {
  if (std::isinf(a) || std::isinf(b)) return kInf;
  return a + b;
}

class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace supremal
