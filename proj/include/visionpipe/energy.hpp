#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "visionpipe/image.hpp"
#include "visionpipe/quantizer.hpp"

namespace visionpipe {

/// Relative cost of one readout per output code, in unit-capacitor charge
/// events.
struct EnergyModel {
  int bits = 1;
  double unit_cap_energy = 1.0;
  std::vector<double> per_code_energy;
};

/// First-order SAR ADC model with a binary-weighted bank.
///
/// Trial i (MSB first) charges a capacitor of 2^(n-1-i) units. When the
/// comparator rejects the trial bit the capacitor is discharged again at the
/// same cost. A code's energy is the sum over its n trials.
inline EnergyModel sar_code_energy(int bits, double unit_cap_energy = 1.0) {
  if (bits < 1 || bits > 16) throw std::invalid_argument("sar_code_energy: bits must lie in 1..16");
  EnergyModel model;
  model.bits = bits;
  model.unit_cap_energy = unit_cap_energy;
  const std::size_t n = std::size_t{1} << bits;
  model.per_code_energy.resize(n);
  for (std::size_t m = 0; m < n; ++m) {
    double e = 0.0;
    for (int i = 0; i < bits; ++i) {
      const auto weight = static_cast<double>(std::uint64_t{1} << (bits - 1 - i));
      const bool kept = (m >> (bits - 1 - i)) & 1u;
      e += weight * (kept ? 1.0 : 2.0);
    }
    model.per_code_energy[m] = e * unit_cap_energy;
  }
  return model;
}

/// Probability mass over bins (quantizer codes or uniform intensity bins).
struct IntensityDistribution {
  std::vector<double> bin_edges;  // bins + 1 edges
  std::vector<double> probabilities;
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;
};

inline IntensityDistribution distribution_from_counts(std::vector<std::uint64_t> counts, std::vector<double> edges) {
  IntensityDistribution d;
  d.total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  if (d.total == 0) throw std::invalid_argument("distribution has no samples");
  d.probabilities.resize(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    d.probabilities[i] = static_cast<double>(counts[i]) / static_cast<double>(d.total);
  }
  d.counts = std::move(counts);
  d.bin_edges = std::move(edges);
  return d;
}

inline void accumulate_codes(std::span<const double> samples, const QuantizerSpec& q, std::vector<std::uint64_t>& counts) {
  for (double v : samples) ++counts[quantize_value(v, q).code];
}

/// p_m = fraction of all dataset samples that quantize to code m.
inline IntensityDistribution measure_distribution(std::span<const RawImage> dataset, const QuantizerSpec& q) {
  if (dataset.empty()) throw std::invalid_argument("measure_distribution: empty dataset");
  std::vector<std::uint64_t> counts(q.level_count(), 0);
  for (const auto& img : dataset) accumulate_codes(img.data(), q, counts);
  std::vector<double> edges;
  edges.push_back(0.0);
  edges.insert(edges.end(), q.boundaries.begin(), q.boundaries.end());
  edges.push_back(1.0);
  return distribution_from_counts(std::move(counts), std::move(edges));
}

/// E = sum_m p_m e_m.
inline double expected_adc_energy(const IntensityDistribution& dist, const EnergyModel& model) {
  if (dist.probabilities.size() != model.per_code_energy.size()) {
    throw std::invalid_argument("expected_adc_energy: distribution and energy model differ in code count");
  }
  double e = 0.0;
  for (std::size_t m = 0; m < model.per_code_energy.size(); ++m) e += dist.probabilities[m] * model.per_code_energy[m];
  return e;
}

/// Share of sensor energy spent in the ADCs, used to scale ADC savings to a
/// sensor-level estimate.
inline constexpr double kAdcShareOfSensorEnergy = 0.5;

/// Published savings of a 5-bit logarithmic ADC over a 12-bit linear one,
/// printed alongside model results for comparison.
inline constexpr double kReferenceSavingsPercent = 99.95;

struct AdcConfig {
  QuantScheme scheme = QuantScheme::linear;
  int bits = 12;

  std::string label() const { return scheme_name(scheme) + ":" + std::to_string(bits); }
  static AdcConfig parse(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("ADC config must look like scheme:bits");
    AdcConfig c;
    c.scheme = parse_scheme(text.substr(0, colon));
    c.bits = std::stoi(text.substr(colon + 1));
    check_bits(c.bits);
    return c;
  }
};

struct EnergyReport {
  AdcConfig config_a;
  AdcConfig config_b;
  double energy_a = 0.0;  // expected unit-capacitor events per readout
  double energy_b = 0.0;
  double ratio = 1.0;            // energy_b / energy_a
  double savings_percent = 0.0;  // (1 - ratio) * 100
  double sensor_savings_percent = 0.0;
  double reference_savings_percent = kReferenceSavingsPercent;
  std::uint64_t samples = 0;
};

inline nlohmann::json to_json(const EnergyReport& r) {
  return {{"config_a", r.config_a.label()},
          {"config_b", r.config_b.label()},
          {"energy_a", r.energy_a},
          {"energy_b", r.energy_b},
          {"ratio", r.ratio},
          {"savings_percent", r.savings_percent},
          {"sensor_savings_percent", r.sensor_savings_percent},
          {"reference_savings_percent", r.reference_savings_percent},
          {"adc_share", kAdcShareOfSensorEnergy},
          {"samples", r.samples},
          {"energy_unit", "unit capacitor charge events"}};
}

inline EnergyReport energy_report_from_json(const nlohmann::json& j) {
  EnergyReport r;
  r.config_a = AdcConfig::parse(j.at("config_a").get<std::string>());
  r.config_b = AdcConfig::parse(j.at("config_b").get<std::string>());
  r.energy_a = j.at("energy_a").get<double>();
  r.energy_b = j.at("energy_b").get<double>();
  r.ratio = j.at("ratio").get<double>();
  r.savings_percent = j.at("savings_percent").get<double>();
  r.sensor_savings_percent = j.at("sensor_savings_percent").get<double>();
  r.reference_savings_percent = j.at("reference_savings_percent").get<double>();
  r.samples = j.at("samples").get<std::uint64_t>();
  return r;
}

inline std::string format_energy_table(const EnergyReport& r) {
  char buf[512];
  std::string out;
  std::snprintf(buf, sizeof buf, "%-14s %12s %18s\n", "adc", "bits", "E[energy] (units)");
  out += buf;
  std::snprintf(buf, sizeof buf, "%-14s %12d %18.6f\n", scheme_name(r.config_a.scheme).c_str(), r.config_a.bits,
                r.energy_a);
  out += buf;
  std::snprintf(buf, sizeof buf, "%-14s %12d %18.6f\n", scheme_name(r.config_b.scheme).c_str(), r.config_b.bits,
                r.energy_b);
  out += buf;
  std::snprintf(buf, sizeof buf,
                "ratio B/A: %.8f\nADC savings: %.4f%%\nsensor-level savings (ADC share %.0f%%): %.4f%%\n"
                "reference figure: %.2f%%\nsamples: %llu\n",
                r.ratio, r.savings_percent, kAdcShareOfSensorEnergy * 100.0, r.sensor_savings_percent,
                r.reference_savings_percent, static_cast<unsigned long long>(r.samples));
  out += buf;
  return out;
}

}  // namespace visionpipe
