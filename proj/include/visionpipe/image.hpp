#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace visionpipe {

inline double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

enum class Channel { red = 0, green = 1, blue = 2 };

// Color-filter layout, named by the row-major reading order of the 2x2 tile
// at the image origin.
class BayerPattern {
 public:
  enum class Layout { rggb, bggr, grbg, gbrg };

  constexpr BayerPattern() = default;
  constexpr explicit BayerPattern(Layout layout) : layout_(layout) {}

  constexpr Layout layout() const { return layout_; }

  constexpr Channel at(std::size_t row, std::size_t col) const {
    const auto tile = tile_channels();
    return tile[(row & 1) * 2 + (col & 1)];
  }

  // Tile position (row, col within 0..1) of the given color. For green this is
  // the site sharing a row with red.
  constexpr std::array<std::size_t, 2> site_of(Channel c) const {
    const auto tile = tile_channels();
    if (c == Channel::green) {
      const std::size_t red_row = (tile[0] == Channel::red || tile[1] == Channel::red) ? 0 : 1;
      for (std::size_t col = 0; col < 2; ++col) {
        if (tile[red_row * 2 + col] == Channel::green) return {red_row, col};
      }
    }
    for (std::size_t i = 0; i < 4; ++i) {
      if (tile[i] == c) return {i / 2, i % 2};
    }
    return {0, 0};
  }

  std::string name() const {
    switch (layout_) {
      case Layout::rggb: return "RGGB";
      case Layout::bggr: return "BGGR";
      case Layout::grbg: return "GRBG";
      case Layout::gbrg: return "GBRG";
    }
    return "RGGB";
  }

  static BayerPattern parse(std::string_view s) {
    if (s == "RGGB") return BayerPattern(Layout::rggb);
    if (s == "BGGR") return BayerPattern(Layout::bggr);
    if (s == "GRBG") return BayerPattern(Layout::grbg);
    if (s == "GBRG") return BayerPattern(Layout::gbrg);
    throw std::invalid_argument("unknown Bayer pattern '" + std::string(s) + "'");
  }

  friend constexpr bool operator==(BayerPattern, BayerPattern) = default;

 private:
  constexpr std::array<Channel, 4> tile_channels() const {
    using C = Channel;
    switch (layout_) {
      case Layout::rggb: return {C::red, C::green, C::green, C::blue};
      case Layout::bggr: return {C::blue, C::green, C::green, C::red};
      case Layout::grbg: return {C::green, C::red, C::blue, C::green};
      case Layout::gbrg: return {C::green, C::blue, C::red, C::green};
    }
    return {C::red, C::green, C::green, C::blue};
  }

  Layout layout_ = Layout::rggb;
};

/// H x W x 3 raster of normalized intensities, row-major, channels interleaved.
class RgbImage {
 public:
  RgbImage() = default;
  RgbImage(std::size_t width, std::size_t height, double fill = 0.0)
      : width_(width), height_(height), data_(width * height * 3, fill) {}
  RgbImage(std::size_t width, std::size_t height, std::vector<double> data)
      : width_(width), height_(height), data_(std::move(data)) {
    if (data_.size() != width_ * height_ * 3) {
      throw std::invalid_argument("RgbImage: data length does not match dimensions");
    }
    if (std::any_of(data_.begin(), data_.end(), [](double v) { return !(v >= 0.0 && v <= 1.0); })) {
      throw std::invalid_argument("RgbImage: samples must lie in [0, 1]");
    }
  }

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t pixel_count() const { return width_ * height_; }
  bool empty() const { return data_.empty(); }

  double& at(std::size_t row, std::size_t col, std::size_t c) {
    return data_[(row * width_ + col) * 3 + c];
  }
  double at(std::size_t row, std::size_t col, std::size_t c) const {
    return data_[(row * width_ + col) * 3 + c];
  }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  friend bool operator==(const RgbImage&, const RgbImage&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<double> data_;
};

/// Single-channel Bayer mosaic.
///
/// A RAW image is either continuous (not yet digitized) or quantized at
/// `bit_depth` bits. Quantized images whose levels are not the uniform grid
/// k / (2^bits - 1) carry their level table in `levels`, which makes the
/// integer-code file container lossless for every quantizer scheme.
class RawImage {
 public:
  RawImage() = default;
  RawImage(std::size_t width, std::size_t height, BayerPattern pattern = {}, double fill = 0.0)
      : width_(width), height_(height), data_(width * height, fill), pattern_(pattern) {
    check_dimensions();
  }
  RawImage(std::size_t width, std::size_t height, std::vector<double> data, BayerPattern pattern = {})
      : width_(width), height_(height), data_(std::move(data)), pattern_(pattern) {
    check_dimensions();
    if (data_.size() != width_ * height_) {
      throw std::invalid_argument("RawImage: data length does not match dimensions");
    }
    if (std::any_of(data_.begin(), data_.end(), [](double v) { return !(v >= 0.0 && v <= 1.0); })) {
      throw std::invalid_argument("RawImage: samples must lie in [0, 1]");
    }
  }

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t pixel_count() const { return width_ * height_; }
  BayerPattern pattern() const { return pattern_; }
  void set_pattern(BayerPattern p) { pattern_ = p; }

  int bit_depth() const { return bit_depth_; }
  bool continuous() const { return continuous_; }
  const std::vector<double>& levels() const { return levels_; }

  void mark_continuous(int bit_depth = 16) {
    bit_depth_ = bit_depth;
    continuous_ = true;
    levels_.clear();
  }
  // Uniform levels when `levels` is empty.
  void mark_quantized(int bit_depth, std::vector<double> levels = {}) {
    if (bit_depth < 1 || bit_depth > 16) throw std::invalid_argument("RawImage: bit depth outside 1..16");
    if (!levels.empty() && levels.size() != (std::size_t{1} << bit_depth)) {
      throw std::invalid_argument("RawImage: level table size does not match bit depth");
    }
    bit_depth_ = bit_depth;
    continuous_ = false;
    levels_ = std::move(levels);
  }

  Channel channel_at(std::size_t row, std::size_t col) const { return pattern_.at(row, col); }

  double& at(std::size_t row, std::size_t col) { return data_[row * width_ + col]; }
  double at(std::size_t row, std::size_t col) const { return data_[row * width_ + col]; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  friend bool operator==(const RawImage&, const RawImage&) = default;

 private:
  void check_dimensions() const {
    if (width_ % 2 != 0 || height_ % 2 != 0) {
      throw std::invalid_argument("RawImage: dimensions must be even (whole Bayer tiles)");
    }
  }

  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<double> data_;
  BayerPattern pattern_;
  int bit_depth_ = 16;
  bool continuous_ = true;
  std::vector<double> levels_;
};

// Mosaic data fed straight to per-pixel stages: every channel gets the site value.
inline RgbImage replicate_channels(const RawImage& raw) {
  RgbImage out(raw.width(), raw.height());
  for (std::size_t r = 0; r < raw.height(); ++r) {
    for (std::size_t c = 0; c < raw.width(); ++c) {
      for (std::size_t k = 0; k < 3; ++k) out.at(r, c, k) = raw.at(r, c);
    }
  }
  return out;
}

template <typename F>
RgbImage map_samples(const RgbImage& img, F&& f) {
  RgbImage out = img;
  for (double& v : out.data()) v = f(v);
  return out;
}

}  // namespace visionpipe
