// Pushes a few synthetic scenes through the reverse pipeline and back, then
// compares a 12-bit linear ADC against a 5-bit logarithmic one.
#include <cstdio>
#include <vector>

#include "visionpipe/visionpipe.hpp"

namespace vp = visionpipe;

int main() {
  const auto profile = vp::default_profile();
  const auto forward = vp::make_forward_config({"demosaic:bilinear", "color", "gamut", "gamma"});

  std::printf("%-8s %10s %12s\n", "scene", "psnr_db", "avg_err_%");
  for (std::size_t i = 0; i < 4; ++i) {
    const auto scene = vp::synth::to_8bit(vp::synth::smooth_scene(i, 128, 96));
    const auto raw = vp::run_inverse(scene, profile, vp::InverseConfig::full(false, 12));
    const auto back = vp::run_forward(raw, profile, forward);
    const auto q = vp::psnr(scene, back);
    std::printf("%-8zu %10.2f %12.4f\n", i, q.psnr, 100.0 * q.avg_pixel_error);
  }

  std::vector<vp::RawImage> dataset;
  for (std::uint64_t s = 0; s < 8; ++s) dataset.push_back(vp::synth::lognormal_raw(64, 64, -2.0, 0.5, s + 1));
  const auto report = vp::energy_report(dataset, vp::AdcConfig::parse("linear:12"), vp::AdcConfig::parse("log:5"));
  std::printf("\n%s", vp::format_energy_table(report).c_str());
  return 0;
}
