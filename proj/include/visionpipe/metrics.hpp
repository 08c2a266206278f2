#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "visionpipe/image.hpp"

namespace visionpipe {

/// PSNR value reported for identical images.
inline constexpr double kPsnrIdentical = std::numeric_limits<double>::infinity();

struct QualityReport {
  double psnr = kPsnrIdentical;  // dB, peak intensity 1
  double avg_pixel_error = 0.0;  // mean |a - b| over channel samples
  double mse = 0.0;

  bool identical() const { return mse == 0.0; }
};

inline double psnr_from_mse(double mse) {
  return mse == 0.0 ? kPsnrIdentical : 10.0 * std::log10(1.0 / mse);
}

inline QualityReport compare(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("compare: sample count mismatch");
  if (a.empty()) throw std::invalid_argument("compare: empty images");
  double sq = 0.0;
  double abs = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sq += d * d;
    abs += std::abs(d);
  }
  QualityReport q;
  q.mse = sq / static_cast<double>(a.size());
  q.avg_pixel_error = abs / static_cast<double>(a.size());
  q.psnr = psnr_from_mse(q.mse);
  return q;
}

inline QualityReport psnr(const RgbImage& a, const RgbImage& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw std::invalid_argument("psnr: image dimensions differ");
  }
  return compare(a.data(), b.data());
}

inline QualityReport psnr(const RawImage& a, const RawImage& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw std::invalid_argument("psnr: image dimensions differ");
  }
  return compare(a.data(), b.data());
}

}  // namespace visionpipe
