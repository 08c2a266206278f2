#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace visionpipe {

using Vec3 = std::array<double, 3>;
using Matrix3 = std::array<std::array<double, 3>, 3>;

inline constexpr Matrix3 identity3() {
  return {{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}};
}

inline constexpr Matrix3 diagonal3(double a, double b, double c) {
  return {{{a, 0.0, 0.0}, {0.0, b, 0.0}, {0.0, 0.0, c}}};
}

inline Vec3 multiply(const Matrix3& m, const Vec3& p) {
  Vec3 out{};
  for (std::size_t i = 0; i < 3; ++i) {
    out[i] = m[i][0] * p[0] + m[i][1] * p[1] + m[i][2] * p[2];
  }
  return out;
}

inline Matrix3 multiply(const Matrix3& a, const Matrix3& b) {
  Matrix3 out{};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
    }
  }
  return out;
}

inline double determinant(const Matrix3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

// Singular when |det| falls below this relative to the matrix scale.
inline constexpr double kSingularTolerance = 1e-12;

inline bool is_singular(const Matrix3& m) {
  double scale = 0.0;
  for (const auto& row : m) {
    for (double v : row) scale = std::max(scale, std::abs(v));
  }
  if (scale == 0.0) return true;
  return std::abs(determinant(m)) <= kSingularTolerance * scale * scale * scale;
}

/// Inverse via the adjugate. Throws std::domain_error for singular input.
inline Matrix3 inverse(const Matrix3& m) {
  if (is_singular(m)) throw std::domain_error("color matrix is singular");
  const double det = determinant(m);
  Matrix3 adj{};
  adj[0][0] = m[1][1] * m[2][2] - m[1][2] * m[2][1];
  adj[0][1] = m[0][2] * m[2][1] - m[0][1] * m[2][2];
  adj[0][2] = m[0][1] * m[1][2] - m[0][2] * m[1][1];
  adj[1][0] = m[1][2] * m[2][0] - m[1][0] * m[2][2];
  adj[1][1] = m[0][0] * m[2][2] - m[0][2] * m[2][0];
  adj[1][2] = m[0][2] * m[1][0] - m[0][0] * m[1][2];
  adj[2][0] = m[1][0] * m[2][1] - m[1][1] * m[2][0];
  adj[2][1] = m[0][1] * m[2][0] - m[0][0] * m[2][1];
  adj[2][2] = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  for (auto& row : adj) {
    for (double& v : row) v /= det;
  }
  return adj;
}

}  // namespace visionpipe
