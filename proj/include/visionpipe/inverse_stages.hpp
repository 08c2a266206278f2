#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "visionpipe/counter_rng.hpp"
#include "visionpipe/image.hpp"
#include "visionpipe/parallel.hpp"
#include "visionpipe/quantizer.hpp"

namespace visionpipe {

/// Keeps, at each site, only the channel the color filter passes there.
inline RawImage remosaic(const RgbImage& img, BayerPattern pattern) {
  if (img.width() % 2 != 0 || img.height() % 2 != 0) throw std::invalid_argument("remosaic: odd dimensions");
  RawImage out(img.width(), img.height(), pattern);
  for (std::size_t r = 0; r < img.height(); ++r) {
    for (std::size_t c = 0; c < img.width(); ++c) {
      out.at(r, c) = img.at(r, c, static_cast<std::size_t>(pattern.at(r, c)));
    }
  }
  out.mark_continuous();
  return out;
}

/// Signal-dependent Gaussian noise: v -> clamp(v + e), e ~ N(0, a v + b).
/// Sample i draws from the counter stream keyed by (seed, i).
inline void add_noise(std::span<double> samples, double a, double b, std::uint64_t seed, unsigned workers = 1) {
  if (!(a >= 0.0) || !(b >= 0.0)) throw std::invalid_argument("noise coefficients must be >= 0");
  if (a == 0.0 && b == 0.0) return;
  constexpr std::size_t kChunk = 4096;
  const std::size_t chunks = (samples.size() + kChunk - 1) / kChunk;
  parallel_for(chunks, workers, [&](std::size_t chunk) {
    const std::size_t end = std::min(samples.size(), (chunk + 1) * kChunk);
    for (std::size_t i = chunk * kChunk; i < end; ++i) {
      const double v = samples[i];
      const double sd = std::sqrt(a * v + b);
      samples[i] = clamp01(v + sd * counter_normal(seed, i));
    }
  });
}

inline RawImage inject_noise(const RawImage& raw, double a, double b, std::uint64_t seed, unsigned workers = 1) {
  RawImage out = raw;
  add_noise(out.data(), a, b, seed, workers);
  if (!(a == 0.0 && b == 0.0)) out.mark_continuous(raw.bit_depth());
  return out;
}

inline RgbImage inject_noise(const RgbImage& img, double a, double b, std::uint64_t seed, unsigned workers = 1) {
  RgbImage out = img;
  add_noise(out.data(), a, b, seed, workers);
  return out;
}

/// Snaps to 2^bits uniform levels over [0, 1].
inline RawImage requantize(const RawImage& raw, int target_bits) {
  const auto q = make_quantizer(QuantScheme::linear, target_bits);
  RawImage out = raw;
  for (double& v : out.data()) v = quantize_value(v, q).level;
  out.mark_quantized(target_bits);
  return out;
}

inline RgbImage requantize(const RgbImage& img, int target_bits) {
  const auto q = make_quantizer(QuantScheme::linear, target_bits);
  return map_samples(img, [&q](double v) { return quantize_value(v, q).level; });
}

}  // namespace visionpipe
