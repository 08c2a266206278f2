#pragma once

#include <stdexcept>
#include <variant>

#include "visionpipe/color_stages.hpp"
#include "visionpipe/demosaic.hpp"
#include "visionpipe/denoise.hpp"
#include "visionpipe/inverse_stages.hpp"
#include "visionpipe/pipeline_config.hpp"
#include "visionpipe/profile.hpp"
#include "visionpipe/sensor.hpp"

namespace visionpipe {

/// Image flowing between pipeline sections: RGB until remosaiced, RAW after.
using AnyImage = std::variant<RgbImage, RawImage>;

class PipelineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

// Per-pixel RGB stages that follow demosaicing.
inline RgbImage run_rgb_stages(RgbImage img, const CameraProfile& profile, const PipelineConfig& config) {
  for (const auto& s : config.stages) {
    switch (s.kind) {
      case StageKind::color: img = color_transform(img, profile.color_matrix); break;
      case StageKind::gamut: img = gamut_map(img, profile.gamut_strength); break;
      case StageKind::gamma: img = gamma_compress(img, profile.gamma_scale, profile.gamma_exponent); break;
      case StageKind::quantize: img = quantize_image(img, s.quantizer); break;
      default: break;
    }
  }
  return img;
}

}  // namespace detail

/// Forward ISP from a mosaic. Enabled stages run in canonical order; without a
/// demosaic stage the mosaic is replicated into all three channels.
inline RgbImage run_forward(const RawImage& raw, const CameraProfile& profile, const PipelineConfig& config,
                            unsigned workers = 1) {
  validate_forward(config);
  RawImage mosaic = raw;
  if (const auto* s = config.find(StageKind::denoise)) mosaic = denoise(mosaic, s->denoise, workers);
  const auto* dm = config.find(StageKind::demosaic);
  RgbImage img = dm ? demosaic(mosaic, dm->method) : replicate_channels(mosaic);
  return detail::run_rgb_stages(std::move(img), profile, config);
}

/// Forward ISP on data that is already RGB (no demosaic stage allowed).
inline RgbImage run_forward(const RgbImage& rgb, const CameraProfile& profile, const PipelineConfig& config,
                            unsigned workers = 1) {
  validate_forward(config);
  if (config.has(StageKind::demosaic)) throw PipelineError("demosaic stage needs a RAW mosaic input");
  RgbImage img = rgb;
  if (const auto* s = config.find(StageKind::denoise)) img = denoise(img, s->denoise, workers);
  return detail::run_rgb_stages(std::move(img), profile, config);
}

inline RgbImage run_forward(const AnyImage& img, const CameraProfile& profile, const PipelineConfig& config,
                            unsigned workers = 1) {
  return std::visit([&](const auto& x) { return run_forward(x, profile, config, workers); }, img);
}

/// Reverse pipeline in the fixed order
/// [inv_gamma, inv_gamut, inv_color, remosaic, noise, requantize].
/// Output stays RGB when remosaic is disabled.
inline AnyImage apply_inverse(const RgbImage& input, const CameraProfile& profile, const InverseConfig& config,
                              unsigned workers = 1) {
  validate_inverse(config, profile.native_bit_depth);
  AnyImage cur = input;
  for (auto s : config.stages) {
    switch (s) {
      case InverseStage::inv_gamma:
        cur = gamma_expand(std::get<RgbImage>(cur), profile.gamma_scale, profile.gamma_exponent);
        break;
      case InverseStage::inv_gamut: cur = inverse_gamut(std::get<RgbImage>(cur), profile.gamut_strength); break;
      case InverseStage::inv_color:
        cur = inverse_color_transform(std::get<RgbImage>(cur), profile.color_matrix);
        break;
      case InverseStage::remosaic: cur = remosaic(std::get<RgbImage>(cur), profile.pattern); break;
      case InverseStage::noise:
        cur = std::visit(
            [&](const auto& x) -> AnyImage {
              return inject_noise(x, profile.noise_a, profile.noise_b, config.seed, workers);
            },
            cur);
        break;
      case InverseStage::requantize:
        cur = std::visit([&](const auto& x) -> AnyImage { return requantize(x, config.target_bits); }, cur);
        break;
    }
  }
  return cur;
}

/// Reverse pipeline producing a RAW image; requires the remosaic stage.
inline RawImage run_inverse(const RgbImage& input, const CameraProfile& profile, const InverseConfig& config,
                            unsigned workers = 1) {
  if (!config.has(InverseStage::remosaic)) throw PipelineError("a RAW output needs the remosaic stage");
  return std::get<RawImage>(apply_inverse(input, profile, config, workers));
}

/// In-sensor readout: ROI crop, pixel binning, then column-ADC quantization.
inline RawImage run_sensor(const RawImage& raw, const SensorConfig& config) {
  validate_sensor(config);
  RawImage cur = raw;
  for (const auto& s : config.stages) {
    switch (s.kind) {
      case StageKind::roi: cur = roi_readout(cur, s.roi); break;
      case StageKind::bin: cur = pixel_bin(cur, s.bin_factor); break;
      case StageKind::quantize: cur = quantize_image(cur, s.quantizer); break;
      default: break;
    }
  }
  return cur;
}

}  // namespace visionpipe
