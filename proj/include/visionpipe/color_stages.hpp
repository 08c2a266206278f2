#pragma once

#include <cmath>
#include <stdexcept>

#include "visionpipe/image.hpp"
#include "visionpipe/matrix.hpp"
#include "visionpipe/profile.hpp"
#include "visionpipe/quantizer.hpp"

namespace visionpipe {

// Per-pixel forward stages and their inverses. Every stage clamps to [0, 1].

/// p -> clamp(M p).
inline RgbImage color_transform(const RgbImage& img, const Matrix3& m) {
  RgbImage out = img;
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    const auto px = img.data().subspan(3 * i, 3);
    const Vec3 q = multiply(m, Vec3{px[0], px[1], px[2]});
    for (std::size_t k = 0; k < 3; ++k) out.data()[3 * i + k] = clamp01(q[k]);
  }
  return out;
}

inline RgbImage inverse_color_transform(const RgbImage& img, const Matrix3& m) {
  return color_transform(img, inverse(m));
}

inline void check_gamut_strength(double s) {
  if (!(s >= 0.0 && s <= kMaxGamutStrength)) throw std::invalid_argument("gamut strength must lie in [0, 0.5]");
}

/// Soft compression v(1 - s v) / (1 - s): fixes 0 and 1, strictly increasing.
inline double gamut_value(double v, double s) { return v * (1.0 - s * v) / (1.0 - s); }

/// Smaller root of s w^2 - w + (1 - s) v = 0, in rationalized form so small s
/// does not cancel.
inline double inverse_gamut_value(double v, double s) {
  if (s == 0.0) return v;
  const double disc = std::max(0.0, 1.0 - 4.0 * s * (1.0 - s) * v);
  return 2.0 * (1.0 - s) * v / (1.0 + std::sqrt(disc));
}

inline RgbImage gamut_map(const RgbImage& img, double s) {
  check_gamut_strength(s);
  return map_samples(img, [s](double v) { return clamp01(gamut_value(v, s)); });
}

inline RgbImage inverse_gamut(const RgbImage& img, double s) {
  check_gamut_strength(s);
  return map_samples(img, [s](double v) { return clamp01(inverse_gamut_value(v, s)); });
}

inline void check_gamma(double scale, double exponent) {
  if (!(scale > 0.0)) throw std::invalid_argument("gamma scale must be > 0");
  if (!(exponent > 0.0 && exponent <= 1.0)) throw std::invalid_argument("gamma exponent must lie in (0, 1]");
}

/// v -> clamp(A v^gamma), per RGB channel.
inline RgbImage gamma_compress(const RgbImage& img, double scale, double exponent) {
  check_gamma(scale, exponent);
  return map_samples(img, [=](double v) { return clamp01(scale * std::pow(v, exponent)); });
}

/// v -> clamp((v / A)^(1 / gamma)).
inline RgbImage gamma_expand(const RgbImage& img, double scale, double exponent) {
  check_gamma(scale, exponent);
  return map_samples(img, [=](double v) { return clamp01(std::pow(v / scale, 1.0 / exponent)); });
}

inline RgbImage quantize_image(const RgbImage& img, const QuantizerSpec& q) {
  return map_samples(img, [&q](double v) { return quantize_value(v, q).level; });
}

inline RawImage quantize_image(const RawImage& raw, const QuantizerSpec& q) {
  RawImage out = raw;
  for (double& v : out.data()) v = quantize_value(v, q).level;
  if (q.scheme == QuantScheme::linear) {
    out.mark_quantized(q.bits);
  } else {
    out.mark_quantized(q.bits, q.levels);
  }
  return out;
}

}  // namespace visionpipe
