#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "visionpipe/image.hpp"

namespace visionpipe {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

struct NetpbmHeader {
  std::string magic;
  std::size_t width = 0;
  std::size_t height = 0;
  unsigned maxval = 0;
};

inline void skip_space_and_comments(std::istream& in) {
  for (;;) {
    int c = in.peek();
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      in.get();
    } else {
      return;
    }
  }
}

inline NetpbmHeader read_netpbm_header(std::istream& in, const std::string& path) {
  NetpbmHeader h;
  char magic[2] = {0, 0};
  if (!in.read(magic, 2)) throw IoError("'" + path + "': empty or unreadable file");
  h.magic.assign(magic, 2);
  skip_space_and_comments(in);
  in >> h.width;
  skip_space_and_comments(in);
  in >> h.height;
  skip_space_and_comments(in);
  in >> h.maxval;
  if (!in) throw IoError("'" + path + "': malformed header");
  // Exactly one whitespace byte separates the header from the raster.
  in.get();
  if (h.width == 0 || h.height == 0) throw IoError("'" + path + "': zero-sized image");
  if (h.maxval == 0 || h.maxval > 65535) throw IoError("'" + path + "': unsupported maxval");
  return h;
}

inline std::vector<unsigned> read_samples(std::istream& in, std::size_t count, unsigned maxval,
                                          const std::string& path) {
  const std::size_t bytes_per = maxval > 255 ? 2 : 1;
  std::vector<unsigned char> buf(count * bytes_per);
  if (!in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()))) {
    throw IoError("'" + path + "': truncated raster");
  }
  std::vector<unsigned> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = bytes_per == 2 ? (unsigned{buf[2 * i]} << 8) | buf[2 * i + 1] : buf[i];
    if (out[i] > maxval) throw IoError("'" + path + "': sample exceeds maxval");
  }
  return out;
}

inline void write_samples(std::ostream& out, const std::vector<unsigned>& samples, unsigned maxval) {
  std::vector<unsigned char> buf;
  buf.reserve(samples.size() * 2);
  for (unsigned s : samples) {
    if (maxval > 255) buf.push_back(static_cast<unsigned char>(s >> 8));
    buf.push_back(static_cast<unsigned char>(s & 0xff));
  }
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

inline bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace detail

/// An RGB raster together with the sample depth it was stored at.
struct LoadedRgb {
  RgbImage image;
  unsigned maxval = 255;
};

/// Reads a binary PPM (P6), 8- or 16-bit. Sample s maps to s / maxval.
inline LoadedRgb load_rgb_with_depth(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  const auto h = detail::read_netpbm_header(in, path);
  if (h.magic != "P6") throw IoError("'" + path + "': unsupported format (expected binary PPM)");
  const auto samples = detail::read_samples(in, h.width * h.height * 3, h.maxval, path);
  std::vector<double> data(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) data[i] = static_cast<double>(samples[i]) / h.maxval;
  return {RgbImage(h.width, h.height, std::move(data)), h.maxval};
}

inline RgbImage load_rgb(const std::string& path) { return load_rgb_with_depth(path).image; }

inline void save_rgb(const RgbImage& img, const std::string& path, unsigned maxval = 255) {
  if (img.empty()) throw IoError("save_rgb: empty image");
  if (maxval != 255 && maxval != 65535) throw IoError("save_rgb: only 8- and 16-bit output is supported");
  std::vector<unsigned> samples(img.data().size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    samples[i] = static_cast<unsigned>(std::lround(clamp01(img.data()[i]) * maxval));
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "P6\n" << img.width() << " " << img.height() << "\n" << maxval << "\n";
  detail::write_samples(out, samples, maxval);
  if (!out) throw IoError("write failed for '" + path + "'");
}

inline std::string raw_sidecar_path(const std::string& pgm_path) { return pgm_path + ".json"; }

// Integer code of each sample: its index in the level table when the image
// carries one, otherwise round(v * (2^bits - 1)).
inline std::vector<unsigned> raw_codes(const RawImage& raw) {
  std::vector<unsigned> codes(raw.pixel_count());
  const auto& levels = raw.levels();
  const double scale = static_cast<double>((1u << raw.bit_depth()) - 1);
  for (std::size_t i = 0; i < codes.size(); ++i) {
    const double v = raw.data()[i];
    if (levels.empty()) {
      codes[i] = static_cast<unsigned>(std::lround(clamp01(v) * scale));
    } else {
      auto it = std::lower_bound(levels.begin(), levels.end(), v);
      std::size_t k = static_cast<std::size_t>(it - levels.begin());
      if (k == levels.size() || (k > 0 && v - levels[k - 1] < *it - v)) --k;
      codes[i] = static_cast<unsigned>(k);
    }
  }
  return codes;
}

/// Writes integer codes to a 16-bit big-endian PGM plus a JSON sidecar with
/// pattern, bit depth, continuity and (for non-uniform quantizers) levels.
inline void save_raw(const RawImage& raw, const std::string& path) {
  if (raw.bit_depth() < 1 || raw.bit_depth() > 16) throw IoError("save_raw: bit depth outside 1..16");
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << "P5\n" << raw.width() << " " << raw.height() << "\n65535\n";
    detail::write_samples(out, raw_codes(raw), 65535);
    if (!out) throw IoError("write failed for '" + path + "'");
  }
  nlohmann::json side;
  side["pattern"] = raw.pattern().name();
  side["bit_depth"] = raw.bit_depth();
  side["continuous"] = raw.continuous();
  if (!raw.levels().empty()) side["levels"] = raw.levels();
  std::ofstream sc(raw_sidecar_path(path));
  if (!sc) throw IoError("cannot write '" + raw_sidecar_path(path) + "'");
  sc << side.dump() << "\n";
}

inline RawImage load_raw(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  const auto h = detail::read_netpbm_header(in, path);
  if (h.magic != "P5" || h.maxval != 65535) {
    throw IoError("'" + path + "': RAW container must be a 16-bit binary PGM");
  }
  if (h.width % 2 != 0 || h.height % 2 != 0) throw IoError("'" + path + "': odd RAW dimensions");
  const auto codes = detail::read_samples(in, h.width * h.height, h.maxval, path);

  std::ifstream sc(raw_sidecar_path(path));
  if (!sc) throw IoError("missing RAW sidecar '" + raw_sidecar_path(path) + "'");
  nlohmann::json side;
  BayerPattern pattern;
  int bits = 0;
  bool continuous = false;
  std::vector<double> levels;
  try {
    side = nlohmann::json::parse(sc);
    pattern = BayerPattern::parse(side.at("pattern").get<std::string>());
    bits = side.at("bit_depth").get<int>();
    continuous = side.at("continuous").get<bool>();
    if (side.contains("levels")) levels = side.at("levels").get<std::vector<double>>();
  } catch (const std::exception& e) {
    throw IoError("'" + raw_sidecar_path(path) + "': malformed sidecar: " + e.what());
  }
  if (bits < 1 || bits > 16) throw IoError("'" + path + "': sidecar bit depth outside 1..16");
  if (!levels.empty() && levels.size() != (std::size_t{1} << bits)) {
    throw IoError("'" + path + "': sidecar level table does not match bit depth");
  }
  const unsigned max_code = (1u << bits) - 1;
  std::vector<double> data(codes.size());
  for (std::size_t i = 0; i < codes.size(); ++i) {
    if (codes[i] > max_code) throw IoError("'" + path + "': code exceeds sidecar bit depth");
    data[i] = levels.empty() ? static_cast<double>(codes[i]) / max_code : levels[codes[i]];
  }
  RawImage raw(h.width, h.height, std::move(data), pattern);
  if (continuous) {
    raw.mark_continuous(bits);
  } else {
    raw.mark_quantized(bits, std::move(levels));
  }
  return raw;
}

}  // namespace visionpipe
