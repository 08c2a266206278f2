#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "visionpipe/visionpipe.hpp"

namespace vp = visionpipe;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFileFailure = 1;
constexpr int kExitConfigError = 2;

struct CommonFlags {
  std::string config;
  std::string in;
  std::string out;
  std::string report;
  std::string profile;
  std::uint64_t seed = 0;
  unsigned workers = 0;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "Pipeline config (JSON)");
  cmd->add_option("--in", f.in, "Input directory");
  cmd->add_option("--out", f.out, "Output directory");
  cmd->add_option("--seed", f.seed, "Noise seed");
  cmd->add_option("--workers", f.workers, "Parallel workers");
  cmd->add_option("--report", f.report, "Write a JSON report to this path");
  cmd->add_option("--profile", f.profile, "Camera profile (JSON)");
}

vp::JobConfig load_job(const CommonFlags& f, CLI::App* cmd) {
  vp::JobConfig job = f.config.empty() ? vp::JobConfig{} : vp::parse_config(f.config);
  if (!f.in.empty()) job.input_dir = f.in;
  if (!f.out.empty()) job.output_dir = f.out;
  if (!f.report.empty()) job.report_path = f.report;
  if (!f.profile.empty()) job.profile_path = f.profile;
  if (cmd->count("--seed") > 0) job.inverse.seed = f.seed;
  if (cmd->count("--workers") > 0) {
    if (f.workers == 0) throw vp::ConfigError("--workers must be >= 1");
    job.workers = f.workers;
  }
  if (job.input_dir.empty()) throw vp::ConfigError("no input directory (use --in or the 'input' key)");
  return job;
}

vp::PipelineConfig full_forward() { return vp::make_forward_config({"demosaic:bilinear", "color", "gamut", "gamma"}); }

int report_batch(const vp::BatchSummary& s) {
  for (const auto& f : s.files) {
    if (!f.ok) std::cerr << "failed: " << f.name << ": " << f.error << "\n";
  }
  std::printf("converted %zu, failed %zu\n", s.converted, s.failed);
  for (const auto& f : s.files) {
    if (f.quality) {
      std::printf("  %-32s psnr %s dB  avg error %.6f\n", f.name.c_str(),
                  std::isinf(f.quality->psnr) ? "inf" : std::to_string(f.quality->psnr).c_str(),
                  f.quality->avg_pixel_error);
    }
  }
  return s.success() ? kExitOk : kExitFileFailure;
}

vp::CameraProfile profile_from(const CommonFlags& f, const vp::JobConfig* job) {
  std::string path = f.profile;
  if (path.empty() && job) path = job->profile_path;
  if (path.empty()) return vp::default_profile();
  try {
    return vp::load_profile(path);
  } catch (const vp::ProfileError& e) {
    throw vp::ConfigError(e.what());
  }
}

// Reverse pipeline applied to RGB files when a dataset command needs RAW data.
vp::InverseConfig dataset_inverse(const CommonFlags& f, const vp::JobConfig* job, CLI::App* cmd) {
  vp::InverseConfig inv = job && !job->inverse.empty() ? job->inverse : vp::InverseConfig::full(false);
  if (cmd->count("--seed") > 0) inv.seed = f.seed;
  if (!inv.has(vp::InverseStage::remosaic)) throw vp::ConfigError("dataset conversion needs the remosaic stage");
  return inv;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reversible imaging-pipeline simulator: RGB <-> RAW conversion, vision-mode sensor, ADC energy"};
  app.require_subcommand(1);

  CommonFlags convert_f, invert_f, roundtrip_f, stats_f, energy_f, levels_f;
  auto* convert = app.add_subcommand("convert", "Run inverse, sensor and forward sections over a directory");
  add_common(convert, convert_f);
  auto* invert = app.add_subcommand("invert", "RGB -> RAW only (full reverse pipeline unless configured)");
  add_common(invert, invert_f);
  auto* roundtrip = app.add_subcommand("roundtrip", "RGB -> RAW -> RGB with per-file quality");
  add_common(roundtrip, roundtrip_f);

  auto* stats = app.add_subcommand("stats", "PSNR / pixel error between --in (references) and --out");
  add_common(stats, stats_f);

  std::string adc_a = "linear:12";
  std::string adc_b = "log:5";
  auto* energy = app.add_subcommand("energy", "Expected SAR ADC readout energy of two configurations");
  add_common(energy, energy_f);
  energy->add_option("--a", adc_a, "Baseline ADC as scheme:bits")->capture_default_str();
  energy->add_option("--b", adc_b, "Candidate ADC as scheme:bits")->capture_default_str();

  std::string scheme = "cdf";
  int bits = 5;
  double floor = vp::kDefaultLogFloor;
  auto* levels = app.add_subcommand("levels", "Design quantizer levels and write a level file to --out");
  add_common(levels, levels_f);
  levels->add_option("--scheme", scheme, "linear | log | cdf | lloyd")->capture_default_str();
  levels->add_option("--bits", bits, "Bit count")->capture_default_str();
  levels->add_option("--floor", floor, "Log-domain floor")->capture_default_str();

  std::string synth_out;
  std::string synth_kind = "smooth";
  std::size_t synth_count = 10;
  std::size_t synth_width = 64;
  std::size_t synth_height = 64;
  std::uint64_t synth_seed = 1;
  double mu = -2.0;
  double sigma = 0.5;
  auto* synth = app.add_subcommand("synth", "Write a synthetic dataset (smooth RGB scenes or log-normal RAW)");
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth->add_option("--kind", synth_kind, "smooth | lognormal")->capture_default_str();
  synth->add_option("--count", synth_count, "Number of images")->capture_default_str();
  synth->add_option("--width", synth_width, "Width (even)")->capture_default_str();
  synth->add_option("--height", synth_height, "Height (even)")->capture_default_str();
  synth->add_option("--seed", synth_seed, "Seed")->capture_default_str();
  synth->add_option("--mu", mu, "Log-normal mu")->capture_default_str();
  synth->add_option("--sigma", sigma, "Log-normal sigma")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfigError;
  }

  try {
    if (*convert) {
      auto job = load_job(convert_f, convert);
      return report_batch(vp::convert_batch(job, vp::BatchMode::convert));
    }
    if (*invert) {
      auto job = load_job(invert_f, invert);
      if (job.inverse.empty()) {
        const auto seed = job.inverse.seed;
        job.inverse = vp::InverseConfig::full(true, vp::resolve_profile(job).native_bit_depth, seed);
      }
      return report_batch(vp::convert_batch(job, vp::BatchMode::invert));
    }
    if (*roundtrip) {
      auto job = load_job(roundtrip_f, roundtrip);
      if (job.inverse.empty()) {
        const auto seed = job.inverse.seed;
        job.inverse = vp::InverseConfig::full(false, vp::resolve_profile(job).native_bit_depth, seed);
      }
      if (job.forward.stages.empty()) job.forward = full_forward();
      return report_batch(vp::convert_batch(job, vp::BatchMode::roundtrip));
    }
    if (*stats) {
      if (stats_f.in.empty() || stats_f.out.empty()) throw vp::ConfigError("stats needs --in and --out");
      const auto table = vp::stats_command(stats_f.in, stats_f.out);
      std::cout << vp::format_stats(table);
      if (!stats_f.report.empty()) std::ofstream(stats_f.report) << vp::to_json(table).dump(2) << "\n";
      return kExitOk;
    }
    if (*energy) {
      std::optional<vp::JobConfig> job;
      if (!energy_f.config.empty()) job = vp::parse_config(energy_f.config);
      const std::string dir = !energy_f.in.empty() ? energy_f.in : job ? job->input_dir : "";
      if (dir.empty()) throw vp::ConfigError("energy needs --in");
      vp::AdcConfig a, b;
      try {
        a = vp::AdcConfig::parse(adc_a);
        b = vp::AdcConfig::parse(adc_b);
      } catch (const std::exception& e) {
        throw vp::ConfigError(std::string("bad ADC config: ") + e.what());
      }
      const auto jp = job ? &*job : nullptr;
      const auto report = vp::energy_command(dir, a, b, profile_from(energy_f, jp), dataset_inverse(energy_f, jp, energy),
                                             energy_f.report);
      std::cout << vp::format_energy_table(report);
      return kExitOk;
    }
    if (*levels) {
      std::optional<vp::JobConfig> job;
      if (!levels_f.config.empty()) job = vp::parse_config(levels_f.config);
      const std::string dir = !levels_f.in.empty() ? levels_f.in : job ? job->input_dir : "";
      if (levels_f.out.empty()) throw vp::ConfigError("levels needs --out FILE");
      vp::QuantScheme s;
      try {
        s = vp::parse_scheme(scheme);
        vp::check_bits(bits);
      } catch (const std::invalid_argument& e) {
        throw vp::ConfigError(e.what());
      }
      if (dir.empty() && s != vp::QuantScheme::linear && s != vp::QuantScheme::logarithmic) {
        throw vp::ConfigError("data-driven schemes need --in");
      }
      const auto jp = job ? &*job : nullptr;
      const auto q = vp::levels_command(dir, s, bits, levels_f.out, profile_from(levels_f, jp),
                                        dataset_inverse(levels_f, jp, levels), floor);
      std::printf("wrote %zu %s levels to %s\n", q.level_count(), vp::scheme_name(q.scheme).c_str(),
                  levels_f.out.c_str());
      return kExitOk;
    }
    if (*synth) {
      if (synth_width % 2 || synth_height % 2 || synth_width == 0 || synth_height == 0) {
        throw vp::ConfigError("synthetic images need even, non-zero dimensions");
      }
      fs::create_directories(synth_out);
      for (std::size_t i = 0; i < synth_count; ++i) {
        char name[64];
        if (synth_kind == "smooth") {
          std::snprintf(name, sizeof name, "scene_%04zu.ppm", i);
          vp::save_rgb(vp::synth::smooth_scene(i, synth_width, synth_height, synth_seed), (fs::path(synth_out) / name).string());
        } else if (synth_kind == "lognormal") {
          std::snprintf(name, sizeof name, "lognormal_%04zu.pgm", i);
          auto raw = vp::synth::lognormal_raw(synth_width, synth_height, mu, sigma, vp::mix_key(synth_seed, i));
          vp::save_raw(vp::requantize(raw, 16), (fs::path(synth_out) / name).string());
        } else {
          throw vp::ConfigError("unknown synthetic kind '" + synth_kind + "'");
        }
      }
      std::printf("wrote %zu images to %s\n", synth_count, synth_out.c_str());
      return kExitOk;
    }
  } catch (const vp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFileFailure;
  }
  return kExitOk;
}
