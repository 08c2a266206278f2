#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "visionpipe/image.hpp"
#include "visionpipe/parallel.hpp"

namespace visionpipe {

struct DenoiseParams {
  double strength = 0.05;  // filtering parameter h
  int patch = 3;           // odd patch side
  int window = 7;          // odd search-window side

  friend bool operator==(const DenoiseParams&, const DenoiseParams&) = default;
};

inline void validate(const DenoiseParams& p, std::size_t width, std::size_t height) {
  if (!(p.strength >= 0.0)) throw std::invalid_argument("denoise: strength must be >= 0");
  if (p.patch < 1 || p.patch % 2 == 0) throw std::invalid_argument("denoise: patch size must be odd");
  if (p.window < 1 || p.window % 2 == 0) throw std::invalid_argument("denoise: window size must be odd");
  if (p.patch > p.window) throw std::invalid_argument("denoise: patch larger than window");
  if (static_cast<std::size_t>(p.window) > std::min(width, height)) {
    throw std::invalid_argument("denoise: window larger than the image");
  }
}

/// Standard deviation of the Gaussian that weights patch offsets.
inline double nlm_patch_sigma(int patch) { return 0.5 * (patch / 2 + 1); }

/// Non-local means over an interleaved multi-channel raster.
///
/// Patch distance is the Gaussian-weighted mean squared difference over all
/// channels, with patch taps clamped to the image. The search window is
/// clipped to the image. Pixel weight is exp(-d^2 / h^2).
inline std::vector<double> nlm_filter(std::span<const double> src, std::size_t width, std::size_t height,
                                      std::size_t channels, const DenoiseParams& p, unsigned workers = 1) {
  validate(p, width, height);
  std::vector<double> out(src.begin(), src.end());
  if (p.strength == 0.0) return out;

  const long pr = p.patch / 2;
  const long wr = p.window / 2;
  const double sig = nlm_patch_sigma(p.patch);
  std::vector<double> kernel;
  double kernel_sum = 0.0;
  for (long dy = -pr; dy <= pr; ++dy) {
    for (long dx = -pr; dx <= pr; ++dx) {
      kernel.push_back(std::exp(-static_cast<double>(dy * dy + dx * dx) / (2.0 * sig * sig)));
      kernel_sum += kernel.back();
    }
  }
  const double norm = 1.0 / (kernel_sum * static_cast<double>(channels));
  const double inv_h2 = 1.0 / (p.strength * p.strength);
  const auto H = static_cast<long>(height);
  const auto W = static_cast<long>(width);
  auto sample = [&](long r, long c, std::size_t k) {
    r = std::clamp(r, 0L, H - 1);
    c = std::clamp(c, 0L, W - 1);
    return src[(static_cast<std::size_t>(r) * width + static_cast<std::size_t>(c)) * channels + k];
  };

  parallel_for(height, workers, [&](std::size_t row) {
    const long r = static_cast<long>(row);
    std::vector<double> acc(channels);
    for (long c = 0; c < W; ++c) {
      double wsum = 0.0;
      std::fill(acc.begin(), acc.end(), 0.0);
      for (long r2 = std::max(0L, r - wr); r2 <= std::min(H - 1, r + wr); ++r2) {
        for (long c2 = std::max(0L, c - wr); c2 <= std::min(W - 1, c + wr); ++c2) {
          double d2 = 0.0;
          std::size_t t = 0;
          for (long dy = -pr; dy <= pr; ++dy) {
            for (long dx = -pr; dx <= pr; ++dx, ++t) {
              for (std::size_t k = 0; k < channels; ++k) {
                const double diff = sample(r + dy, c + dx, k) - sample(r2 + dy, c2 + dx, k);
                d2 += kernel[t] * diff * diff;
              }
            }
          }
          const double wgt = std::exp(-d2 * norm * inv_h2);
          wsum += wgt;
          for (std::size_t k = 0; k < channels; ++k) acc[k] += wgt * (sample(r2, c2, k) - sample(r, c, k));
        }
      }
      // Accumulating differences from the center keeps flat regions exact.
      for (std::size_t k = 0; k < channels; ++k) {
        const std::size_t idx = (row * width + static_cast<std::size_t>(c)) * channels + k;
        out[idx] = clamp01(src[idx] + acc[k] / wsum);
      }
    }
  });
  return out;
}

inline RgbImage denoise(const RgbImage& img, const DenoiseParams& p, unsigned workers = 1) {
  return RgbImage(img.width(), img.height(), nlm_filter(img.data(), img.width(), img.height(), 3, p, workers));
}

inline RgbImage denoise(const RgbImage& img, double strength, int patch, int window) {
  return denoise(img, DenoiseParams{strength, patch, window});
}

/// Mosaic denoising: each of the four Bayer sub-planes is filtered on its own
/// so colors never mix. Window limits apply to the half-size planes.
inline RawImage denoise(const RawImage& raw, const DenoiseParams& p, unsigned workers = 1) {
  const std::size_t pw = raw.width() / 2;
  const std::size_t ph = raw.height() / 2;
  RawImage out = raw;
  std::vector<double> plane(pw * ph);
  for (std::size_t dy = 0; dy < 2; ++dy) {
    for (std::size_t dx = 0; dx < 2; ++dx) {
      for (std::size_t r = 0; r < ph; ++r) {
        for (std::size_t c = 0; c < pw; ++c) plane[r * pw + c] = raw.at(2 * r + dy, 2 * c + dx);
      }
      const auto filtered = nlm_filter(plane, pw, ph, 1, p, workers);
      for (std::size_t r = 0; r < ph; ++r) {
        for (std::size_t c = 0; c < pw; ++c) out.at(2 * r + dy, 2 * c + dx) = filtered[r * pw + c];
      }
    }
  }
  if (p.strength > 0.0 && !out.continuous()) out.mark_continuous(out.bit_depth());
  return out;
}

}  // namespace visionpipe
