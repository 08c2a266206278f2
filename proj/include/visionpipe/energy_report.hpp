#pragma once

#include <span>

#include "visionpipe/energy.hpp"
#include "visionpipe/quant_levels.hpp"

namespace visionpipe {

/// Quantizer for an ADC configuration. Data-driven schemes are designed
/// from the pooled samples.
inline QuantizerSpec design_quantizer(const AdcConfig& config, std::span<const double> samples,
                                      double floor = kDefaultLogFloor) {
  switch (config.scheme) {
    case QuantScheme::linear:
    case QuantScheme::logarithmic: return make_quantizer(config.scheme, config.bits, floor);
    case QuantScheme::cdf: return cdf_levels(fit_lognormal(samples), config.bits, floor);
    case QuantScheme::lloyd_max: return lloyd_max(samples, config.bits).spec;
    case QuantScheme::custom: break;
  }
  throw std::invalid_argument("custom quantizers cannot be designed from data");
}

/// Expected SAR readout energy of two ADC configurations on one dataset.
inline EnergyReport energy_report(std::span<const RawImage> dataset, const AdcConfig& a, const AdcConfig& b) {
  if (dataset.empty()) throw std::invalid_argument("energy_report: empty dataset");
  const bool needs_samples = a.scheme == QuantScheme::cdf || a.scheme == QuantScheme::lloyd_max ||
                             b.scheme == QuantScheme::cdf || b.scheme == QuantScheme::lloyd_max;
  const std::vector<double> samples = needs_samples ? pooled_samples(dataset) : std::vector<double>{};

  EnergyReport r;
  r.config_a = a;
  r.config_b = b;
  const auto dist_a = measure_distribution(dataset, design_quantizer(a, samples));
  const auto dist_b = measure_distribution(dataset, design_quantizer(b, samples));
  r.energy_a = expected_adc_energy(dist_a, sar_code_energy(a.bits));
  r.energy_b = expected_adc_energy(dist_b, sar_code_energy(b.bits));
  r.ratio = r.energy_b / r.energy_a;
  r.savings_percent = (1.0 - r.ratio) * 100.0;
  r.sensor_savings_percent = r.savings_percent * kAdcShareOfSensorEnergy;
  r.samples = dist_a.total;
  return r;
}

}  // namespace visionpipe
