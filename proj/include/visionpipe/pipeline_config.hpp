#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "visionpipe/demosaic.hpp"
#include "visionpipe/denoise.hpp"
#include "visionpipe/quantizer.hpp"
#include "visionpipe/sensor.hpp"

namespace visionpipe {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class StageKind { denoise, demosaic, color, gamut, gamma, quantize, bin, roi };

inline std::string stage_name(StageKind k) {
  switch (k) {
    case StageKind::denoise: return "denoise";
    case StageKind::demosaic: return "demosaic";
    case StageKind::color: return "color";
    case StageKind::gamut: return "gamut";
    case StageKind::gamma: return "gamma";
    case StageKind::quantize: return "quantize";
    case StageKind::bin: return "bin";
    case StageKind::roi: return "roi";
  }
  return "?";
}

/// One stage plus its options. Text form is `name[:opt[:opt...]]`:
///
///   denoise[:strength[:patch[:window]]]     defaults 0.05:3:7
///   demosaic[:bilinear|nearest|subsample]   default bilinear
///   color | gamut | gamma
///   quantize:linear|log:<bits>[:floor]
///   quantize:levels:<path>                  level file (any scheme)
///   bin:<factor>
///   roi:<row0>:<col0>:<rows>:<cols>
struct StageDescriptor {
  StageKind kind = StageKind::color;
  DenoiseParams denoise;
  DemosaicMethod method = DemosaicMethod::bilinear;
  QuantizerSpec quantizer;
  std::string quantizer_source;  // option text after "quantize:"
  int bin_factor = 1;
  RoiRect roi;

  friend bool operator==(const StageDescriptor&, const StageDescriptor&) = default;
};

namespace detail {

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    parts.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return parts;
    start = pos + 1;
  }
}

template <typename T>
T parse_number(const std::string& text, const std::string& what) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw ConfigError("invalid " + what + " '" + text + "'");
  return value;
}

}  // namespace detail

inline QuantizerSpec load_levels_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open level file '" + path + "'");
  try {
    return read_levels(in);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("level file '" + path + "': " + e.what());
  }
}

inline StageDescriptor parse_stage(std::string_view text) {
  const auto parts = detail::split(text, ':');
  const std::string& name = parts[0];
  const std::size_t nopts = parts.size() - 1;
  auto expect_opts = [&](std::size_t lo, std::size_t hi) {
    if (nopts < lo || nopts > hi) throw ConfigError("wrong number of options for stage '" + std::string(text) + "'");
  };
  StageDescriptor d;
  if (name == "denoise") {
    d.kind = StageKind::denoise;
    expect_opts(0, 3);
    if (nopts >= 1) d.denoise.strength = detail::parse_number<double>(parts[1], "denoise strength");
    if (nopts >= 2) d.denoise.patch = detail::parse_number<int>(parts[2], "denoise patch");
    if (nopts >= 3) d.denoise.window = detail::parse_number<int>(parts[3], "denoise window");
    if (!(d.denoise.strength >= 0.0) || d.denoise.patch < 1 || d.denoise.patch % 2 == 0 || d.denoise.window < 1 ||
        d.denoise.window % 2 == 0 || d.denoise.patch > d.denoise.window) {
      throw ConfigError("invalid denoise options in '" + std::string(text) + "'");
    }
  } else if (name == "demosaic") {
    d.kind = StageKind::demosaic;
    expect_opts(0, 1);
    if (nopts == 1) {
      try {
        d.method = parse_demosaic_method(parts[1]);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
  } else if (name == "color" || name == "gamut" || name == "gamma") {
    d.kind = name == "color" ? StageKind::color : name == "gamut" ? StageKind::gamut : StageKind::gamma;
    expect_opts(0, 0);
  } else if (name == "quantize") {
    d.kind = StageKind::quantize;
    expect_opts(2, 3);
    d.quantizer_source = std::string(text.substr(name.size() + 1));
    if (parts[1] == "levels") {
      d.quantizer = load_levels_file(d.quantizer_source.substr(7));
    } else {
      QuantScheme scheme;
      try {
        scheme = parse_scheme(parts[1]);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
      if (scheme != QuantScheme::linear && scheme != QuantScheme::logarithmic) {
        throw ConfigError("quantize:" + parts[1] + " needs a level file (use quantize:levels:<path>)");
      }
      const int bits = detail::parse_number<int>(parts[2], "bit count");
      const double floor = nopts == 3 ? detail::parse_number<double>(parts[3], "log floor") : kDefaultLogFloor;
      try {
        d.quantizer = make_quantizer(scheme, bits, floor);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid quantizer '") + std::string(text) + "': " + e.what());
      }
    }
  } else if (name == "bin") {
    d.kind = StageKind::bin;
    expect_opts(1, 1);
    d.bin_factor = detail::parse_number<int>(parts[1], "bin factor");
    if (d.bin_factor < 1 || (d.bin_factor & (d.bin_factor - 1)) != 0) {
      throw ConfigError("bin factor must be a power of two");
    }
  } else if (name == "roi") {
    d.kind = StageKind::roi;
    expect_opts(4, 4);
    d.roi.row0 = detail::parse_number<std::size_t>(parts[1], "roi row");
    d.roi.col0 = detail::parse_number<std::size_t>(parts[2], "roi column");
    d.roi.rows = detail::parse_number<std::size_t>(parts[3], "roi rows");
    d.roi.cols = detail::parse_number<std::size_t>(parts[4], "roi columns");
    if (d.roi.row0 % 2 || d.roi.col0 % 2 || d.roi.rows % 2 || d.roi.cols % 2 || d.roi.rows == 0 || d.roi.cols == 0) {
      throw ConfigError("roi must be a non-empty rectangle aligned to whole Bayer tiles");
    }
  } else {
    throw ConfigError("unknown stage '" + name + "'");
  }
  return d;
}

inline std::string to_string(const StageDescriptor& d) {
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  switch (d.kind) {
    case StageKind::denoise:
      return "denoise:" + num(d.denoise.strength) + ":" + std::to_string(d.denoise.patch) + ":" +
             std::to_string(d.denoise.window);
    case StageKind::demosaic: return "demosaic:" + method_name(d.method);
    case StageKind::quantize: return "quantize:" + d.quantizer_source;
    case StageKind::bin: return "bin:" + std::to_string(d.bin_factor);
    case StageKind::roi:
      return "roi:" + std::to_string(d.roi.row0) + ":" + std::to_string(d.roi.col0) + ":" +
             std::to_string(d.roi.rows) + ":" + std::to_string(d.roi.cols);
    default: return stage_name(d.kind);
  }
}

namespace detail {

inline void check_canonical_order(const std::vector<StageDescriptor>& stages, std::initializer_list<StageKind> order,
                                  const std::string& section) {
  std::size_t last = 0;
  bool first = true;
  for (const auto& s : stages) {
    const auto it = std::find(order.begin(), order.end(), s.kind);
    if (it == order.end()) throw ConfigError("stage '" + stage_name(s.kind) + "' is not allowed in " + section);
    const auto pos = static_cast<std::size_t>(it - order.begin());
    if (!first && pos <= last) {
      throw ConfigError("stage '" + stage_name(s.kind) + "' is out of order or duplicated in " + section);
    }
    last = pos;
    first = false;
  }
}

}  // namespace detail

inline constexpr std::initializer_list<StageKind> kForwardOrder = {
    StageKind::denoise, StageKind::demosaic, StageKind::color,
    StageKind::gamut,   StageKind::gamma,    StageKind::quantize};

inline constexpr std::initializer_list<StageKind> kSensorOrder = {StageKind::roi, StageKind::bin, StageKind::quantize};

/// Forward ISP stages, a subsequence of
/// [denoise, demosaic, color, gamut, gamma, quantize].
struct PipelineConfig {
  std::vector<StageDescriptor> stages;

  bool has(StageKind k) const {
    return std::any_of(stages.begin(), stages.end(), [k](const auto& s) { return s.kind == k; });
  }
  const StageDescriptor* find(StageKind k) const {
    for (const auto& s : stages) {
      if (s.kind == k) return &s;
    }
    return nullptr;
  }

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

inline void validate_forward(const PipelineConfig& c) {
  detail::check_canonical_order(c.stages, kForwardOrder, "the forward pipeline");
}

/// In-sensor readout operations on the mosaic, a subsequence of
/// [roi, bin, quantize]; the quantize step models the column ADC.
struct SensorConfig {
  std::vector<StageDescriptor> stages;

  bool empty() const { return stages.empty(); }
  friend bool operator==(const SensorConfig&, const SensorConfig&) = default;
};

inline void validate_sensor(const SensorConfig& c) {
  detail::check_canonical_order(c.stages, kSensorOrder, "the sensor section");
}

inline PipelineConfig make_forward_config(const std::vector<std::string>& texts) {
  PipelineConfig c;
  for (const auto& t : texts) c.stages.push_back(parse_stage(t));
  validate_forward(c);
  return c;
}

inline SensorConfig make_sensor_config(const std::vector<std::string>& texts) {
  SensorConfig c;
  for (const auto& t : texts) c.stages.push_back(parse_stage(t));
  validate_sensor(c);
  return c;
}

enum class InverseStage { inv_gamma, inv_gamut, inv_color, remosaic, noise, requantize };

inline constexpr InverseStage kInverseOrder[] = {InverseStage::inv_gamma, InverseStage::inv_gamut,
                                                 InverseStage::inv_color, InverseStage::remosaic,
                                                 InverseStage::noise,     InverseStage::requantize};

inline std::string inverse_stage_name(InverseStage s) {
  switch (s) {
    case InverseStage::inv_gamma: return "inv_gamma";
    case InverseStage::inv_gamut: return "inv_gamut";
    case InverseStage::inv_color: return "inv_color";
    case InverseStage::remosaic: return "remosaic";
    case InverseStage::noise: return "noise";
    case InverseStage::requantize: return "requantize";
  }
  return "?";
}

inline InverseStage parse_inverse_stage(const std::string& s) {
  for (auto st : kInverseOrder) {
    if (inverse_stage_name(st) == s) return st;
  }
  throw ConfigError("unknown inverse stage '" + s + "'");
}

/// Reverse pipeline: a subsequence of
/// [inv_gamma, inv_gamut, inv_color, remosaic, noise, requantize].
struct InverseConfig {
  std::vector<InverseStage> stages;
  std::uint64_t seed = 0;
  int target_bits = 12;

  bool has(InverseStage s) const { return std::find(stages.begin(), stages.end(), s) != stages.end(); }
  bool empty() const { return stages.empty(); }

  static InverseConfig full(bool with_noise = true, int target_bits = 12, std::uint64_t seed = 0) {
    InverseConfig c;
    for (auto s : kInverseOrder) {
      if (s != InverseStage::noise || with_noise) c.stages.push_back(s);
    }
    c.target_bits = target_bits;
    c.seed = seed;
    return c;
  }

  friend bool operator==(const InverseConfig&, const InverseConfig&) = default;
};

inline void validate_inverse(const InverseConfig& c, std::optional<int> native_bit_depth = std::nullopt) {
  std::size_t last = 0;
  bool first = true;
  for (auto s : c.stages) {
    const auto pos = static_cast<std::size_t>(std::find(std::begin(kInverseOrder), std::end(kInverseOrder), s) -
                                              std::begin(kInverseOrder));
    if (!first && pos <= last) throw ConfigError("inverse stage '" + inverse_stage_name(s) + "' is out of order or duplicated");
    last = pos;
    first = false;
  }
  if (c.target_bits < 1 || c.target_bits > 16) throw ConfigError("target_bits must lie in 1..16");
  if (native_bit_depth && c.has(InverseStage::requantize) && c.target_bits > *native_bit_depth) {
    throw ConfigError("target_bits exceeds the profile's native bit depth");
  }
}

}  // namespace visionpipe
