#pragma once

#include <stdexcept>
#include <string>

#include "visionpipe/image.hpp"

namespace visionpipe {

enum class DemosaicMethod { bilinear, nearest_neighbor, subsample };

inline std::string method_name(DemosaicMethod m) {
  switch (m) {
    case DemosaicMethod::bilinear: return "bilinear";
    case DemosaicMethod::nearest_neighbor: return "nearest";
    case DemosaicMethod::subsample: return "subsample";
  }
  return "bilinear";
}

inline DemosaicMethod parse_demosaic_method(const std::string& s) {
  if (s == "bilinear") return DemosaicMethod::bilinear;
  if (s == "nearest" || s == "nearest_neighbor") return DemosaicMethod::nearest_neighbor;
  if (s == "subsample") return DemosaicMethod::subsample;
  throw std::invalid_argument("unknown demosaic method '" + s + "'");
}

namespace detail {

// Missing channels are the mean of the same-color sites in the 3x3
// neighborhood that fall inside the image. Off-image sites are skipped
// rather than padded, so the Bayer phase is never broken at the border.
inline RgbImage demosaic_bilinear(const RawImage& raw) {
  const auto h = static_cast<long>(raw.height());
  const auto w = static_cast<long>(raw.width());
  RgbImage out(raw.width(), raw.height());
  for (long r = 0; r < h; ++r) {
    for (long c = 0; c < w; ++c) {
      double sum[3] = {0, 0, 0};
      int count[3] = {0, 0, 0};
      for (long dr = -1; dr <= 1; ++dr) {
        for (long dc = -1; dc <= 1; ++dc) {
          const long rr = r + dr;
          const long cc = c + dc;
          if (rr < 0 || rr >= h || cc < 0 || cc >= w) continue;
          const auto ch = static_cast<std::size_t>(raw.channel_at(rr, cc));
          sum[ch] += raw.at(rr, cc);
          ++count[ch];
        }
      }
      const auto own = static_cast<std::size_t>(raw.channel_at(r, c));
      for (std::size_t k = 0; k < 3; ++k) {
        out.at(r, c, k) = k == own ? raw.at(r, c) : sum[k] / count[k];
      }
    }
  }
  return out;
}

// Missing channels copy the closest same-color site; equal distances resolve
// to the smaller row, then the smaller column. The closest site of each color
// is always within the 3x3 neighborhood.
inline RgbImage demosaic_nearest(const RawImage& raw) {
  const auto h = static_cast<long>(raw.height());
  const auto w = static_cast<long>(raw.width());
  RgbImage out(raw.width(), raw.height());
  for (long r = 0; r < h; ++r) {
    for (long c = 0; c < w; ++c) {
      long best_d2[3] = {99, 99, 99};
      double best[3] = {0, 0, 0};
      // Row-major scan keeps the first of equally distant candidates.
      for (long dr = -1; dr <= 1; ++dr) {
        for (long dc = -1; dc <= 1; ++dc) {
          const long rr = r + dr;
          const long cc = c + dc;
          if (rr < 0 || rr >= h || cc < 0 || cc >= w) continue;
          const auto ch = static_cast<std::size_t>(raw.channel_at(rr, cc));
          const long d2 = dr * dr + dc * dc;
          if (d2 < best_d2[ch]) {
            best_d2[ch] = d2;
            best[ch] = raw.at(rr, cc);
          }
        }
      }
      for (std::size_t k = 0; k < 3; ++k) out.at(r, c, k) = best[k];
    }
  }
  return out;
}

// Each 2x2 tile becomes one pixel (R, G, B). The green sharing a row with
// blue is dropped.
inline RgbImage demosaic_subsample(const RawImage& raw) {
  const auto p = raw.pattern();
  const auto rs = p.site_of(Channel::red);
  const auto gs = p.site_of(Channel::green);
  const auto bs = p.site_of(Channel::blue);
  RgbImage out(raw.width() / 2, raw.height() / 2);
  for (std::size_t r = 0; r < out.height(); ++r) {
    for (std::size_t c = 0; c < out.width(); ++c) {
      out.at(r, c, 0) = raw.at(2 * r + rs[0], 2 * c + rs[1]);
      out.at(r, c, 1) = raw.at(2 * r + gs[0], 2 * c + gs[1]);
      out.at(r, c, 2) = raw.at(2 * r + bs[0], 2 * c + bs[1]);
    }
  }
  return out;
}

}  // namespace detail

inline RgbImage demosaic(const RawImage& raw, DemosaicMethod method) {
  if (raw.width() % 2 != 0 || raw.height() % 2 != 0) throw std::invalid_argument("demosaic: odd dimensions");
  if (raw.pixel_count() == 0) throw std::invalid_argument("demosaic: empty image");
  switch (method) {
    case DemosaicMethod::bilinear: return detail::demosaic_bilinear(raw);
    case DemosaicMethod::nearest_neighbor: return detail::demosaic_nearest(raw);
    case DemosaicMethod::subsample: return detail::demosaic_subsample(raw);
  }
  throw std::invalid_argument("demosaic: unknown method");
}

}  // namespace visionpipe
