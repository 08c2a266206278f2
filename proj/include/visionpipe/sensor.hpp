#pragma once

#include <stdexcept>

#include "visionpipe/image.hpp"

namespace visionpipe {

// Sensor-side readout reductions that operate on the Bayer mosaic.

/// Averages same-color sites inside each (2f x 2f) macro-tile, producing a
/// (H/f) x (W/f) mosaic with the original pattern.
inline RawImage pixel_bin(const RawImage& raw, int factor) {
  if (factor < 1 || (factor & (factor - 1)) != 0) throw std::invalid_argument("pixel_bin: factor must be a power of two");
  const auto f = static_cast<std::size_t>(factor);
  if ((raw.height() / 2) % f != 0 || (raw.width() / 2) % f != 0) {
    throw std::invalid_argument("pixel_bin: factor must divide H/2 and W/2");
  }
  if (f == 1) return raw;
  RawImage out(raw.width() / f, raw.height() / f, raw.pattern());
  const double inv = 1.0 / static_cast<double>(f * f);
  for (std::size_t ty = 0; ty < out.height() / 2; ++ty) {
    for (std::size_t tx = 0; tx < out.width() / 2; ++tx) {
      for (std::size_t dy = 0; dy < 2; ++dy) {
        for (std::size_t dx = 0; dx < 2; ++dx) {
          double sum = 0.0;
          for (std::size_t a = 0; a < f; ++a) {
            for (std::size_t b = 0; b < f; ++b) sum += raw.at(2 * f * ty + 2 * a + dy, 2 * f * tx + 2 * b + dx);
          }
          out.at(2 * ty + dy, 2 * tx + dx) = clamp01(sum * inv);
        }
      }
    }
  }
  out.mark_continuous(raw.bit_depth());
  return out;
}

struct RoiRect {
  std::size_t row0 = 0;
  std::size_t col0 = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;

  friend bool operator==(const RoiRect&, const RoiRect&) = default;
};

/// Crops to a Bayer-aligned rectangle; even offsets keep the pattern phase.
inline RawImage roi_readout(const RawImage& raw, const RoiRect& rect) {
  if (rect.row0 % 2 || rect.col0 % 2 || rect.rows % 2 || rect.cols % 2) {
    throw std::invalid_argument("roi_readout: rectangle must be aligned to whole Bayer tiles");
  }
  if (rect.rows == 0 || rect.cols == 0) throw std::invalid_argument("roi_readout: empty rectangle");
  if (rect.row0 + rect.rows > raw.height() || rect.col0 + rect.cols > raw.width()) {
    throw std::invalid_argument("roi_readout: rectangle out of bounds");
  }
  RawImage out(rect.cols, rect.rows, raw.pattern());
  for (std::size_t r = 0; r < rect.rows; ++r) {
    for (std::size_t c = 0; c < rect.cols; ++c) out.at(r, c) = raw.at(rect.row0 + r, rect.col0 + c);
  }
  if (raw.continuous()) {
    out.mark_continuous(raw.bit_depth());
  } else {
    out.mark_quantized(raw.bit_depth(), raw.levels());
  }
  return out;
}

}  // namespace visionpipe
