#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "visionpipe/counter_rng.hpp"
#include "visionpipe/image.hpp"

namespace visionpipe::synth {

// Deterministic synthetic scenes. All intensities stay inside [lo, hi] so
// that the reverse pipeline never clamps them.

struct Range {
  double lo = 0.05;
  double hi = 0.85;
};

class Draws {
 public:
  explicit Draws(std::uint64_t seed) : seed_(seed) {}
  double uniform(double a = 0.0, double b = 1.0) { return a + (b - a) * counter_uniform(seed_, counter_++); }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

inline RgbImage gradient(std::size_t width, std::size_t height, std::uint64_t seed, Range range = {}) {
  Draws d(seed);
  RgbImage img(width, height);
  for (std::size_t k = 0; k < 3; ++k) {
    const double angle = d.uniform(0.0, 6.283185307179586);
    const double ca = std::cos(angle);
    const double sa = std::sin(angle);
    const double a = d.uniform(0.0, 0.4);
    const double b = d.uniform(0.6, 1.0);
    for (std::size_t r = 0; r < height; ++r) {
      for (std::size_t c = 0; c < width; ++c) {
        const double x = static_cast<double>(c) / static_cast<double>(width - 1) - 0.5;
        const double y = static_cast<double>(r) / static_cast<double>(height - 1) - 0.5;
        const double t = 0.5 + (ca * x + sa * y) / std::sqrt(2.0);  // in [0, 1]
        img.at(r, c, k) = range.lo + (range.hi - range.lo) * (a + (b - a) * t);
      }
    }
  }
  return img;
}

inline RgbImage gaussian_blobs(std::size_t width, std::size_t height, std::uint64_t seed, int blobs = 4,
                               Range range = {}) {
  Draws d(seed);
  RgbImage img(width, height);
  const double span = range.hi - range.lo;
  double bg[3];
  for (double& b : bg) b = d.uniform(0.0, 0.3);
  for (std::size_t i = 0; i < img.data().size(); ++i) img.data()[i] = bg[i % 3];
  const double size = static_cast<double>(std::min(width, height));
  for (int n = 0; n < blobs; ++n) {
    const double cx = d.uniform(0.0, static_cast<double>(width));
    const double cy = d.uniform(0.0, static_cast<double>(height));
    const double sigma = d.uniform(size / 8.0, size / 4.0);
    double amp[3];
    for (double& a : amp) a = d.uniform(0.0, 0.7 / blobs);
    for (std::size_t r = 0; r < height; ++r) {
      for (std::size_t c = 0; c < width; ++c) {
        const double dx = static_cast<double>(c) - cx;
        const double dy = static_cast<double>(r) - cy;
        const double g = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
        for (std::size_t k = 0; k < 3; ++k) img.at(r, c, k) += amp[k] * g;
      }
    }
  }
  // Background + blobs lies in [0, 1); map into the range.
  for (double& v : img.data()) v = range.lo + span * v;
  return img;
}

namespace detail {

inline std::vector<double> gaussian_kernel(double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    k[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
    sum += k[i + radius];
  }
  for (double& v : k) v /= sum;
  return k;
}

}  // namespace detail

/// Separable Gaussian blur with replicated borders.
inline RgbImage blur(const RgbImage& img, double sigma) {
  const auto k = detail::gaussian_kernel(sigma);
  const long radius = static_cast<long>(k.size() / 2);
  const auto W = static_cast<long>(img.width());
  const auto H = static_cast<long>(img.height());
  RgbImage tmp(img.width(), img.height());
  RgbImage out(img.width(), img.height());
  for (long r = 0; r < H; ++r) {
    for (long c = 0; c < W; ++c) {
      for (std::size_t ch = 0; ch < 3; ++ch) {
        double s = 0.0;
        for (long i = -radius; i <= radius; ++i) s += k[i + radius] * img.at(r, std::clamp(c + i, 0L, W - 1), ch);
        tmp.at(r, c, ch) = s;
      }
    }
  }
  for (long r = 0; r < H; ++r) {
    for (long c = 0; c < W; ++c) {
      for (std::size_t ch = 0; ch < 3; ++ch) {
        double s = 0.0;
        for (long i = -radius; i <= radius; ++i) s += k[i + radius] * tmp.at(std::clamp(r + i, 0L, H - 1), c, ch);
        out.at(r, c, ch) = clamp01(s);
      }
    }
  }
  return out;
}

/// A 6 x 4 grid of random color patches with softened borders.
inline RgbImage patch_chart(std::size_t width, std::size_t height, std::uint64_t seed, double edge_sigma = 3.0,
                            Range range = {}) {
  Draws d(seed);
  constexpr std::size_t kCols = 6;
  constexpr std::size_t kRows = 4;
  double colors[kRows][kCols][3];
  for (auto& row : colors) {
    for (auto& patch : row) {
      for (double& v : patch) v = d.uniform(range.lo, range.hi);
    }
  }
  RgbImage img(width, height);
  for (std::size_t r = 0; r < height; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      const std::size_t pr = std::min(kRows - 1, r * kRows / height);
      const std::size_t pc = std::min(kCols - 1, c * kCols / width);
      for (std::size_t k = 0; k < 3; ++k) img.at(r, c, k) = colors[pr][pc][k];
    }
  }
  return edge_sigma > 0.0 ? blur(img, edge_sigma) : img;
}

/// The i-th image of the smooth test set, cycling gradient, blobs, chart.
inline RgbImage smooth_scene(std::size_t index, std::size_t width, std::size_t height, std::uint64_t seed = 1) {
  const std::uint64_t s = mix_key(seed, index);
  switch (index % 3) {
    case 0: return gradient(width, height, s);
    case 1: return gaussian_blobs(width, height, s);
    default: return patch_chart(width, height, s);
  }
}

/// Rounds every sample to the 8-bit grid, as a stored 8-bit source would be.
inline RgbImage to_8bit(const RgbImage& img) {
  return map_samples(img, [](double v) { return std::round(v * 255.0) / 255.0; });
}

/// Mosaic with i.i.d. log-normal intensities exp(mu + sigma z), clamped to [0, 1].
inline RawImage lognormal_raw(std::size_t width, std::size_t height, double mu, double sigma, std::uint64_t seed,
                              BayerPattern pattern = {}) {
  RawImage raw(width, height, pattern);
  for (std::size_t i = 0; i < raw.pixel_count(); ++i) {
    raw.data()[i] = clamp01(std::exp(mu + sigma * counter_normal(seed, i)));
  }
  raw.mark_continuous();
  return raw;
}

}  // namespace visionpipe::synth
