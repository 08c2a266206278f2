#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "visionpipe/counter_rng.hpp"
#include "visionpipe/energy_report.hpp"
#include "visionpipe/image_io.hpp"
#include "visionpipe/metrics.hpp"
#include "visionpipe/parallel.hpp"
#include "visionpipe/pipeline.hpp"
#include "visionpipe/profile.hpp"
#include "visionpipe/quant_levels.hpp"

namespace visionpipe {

namespace fs = std::filesystem;

/// A dataset conversion job. The inverse section runs first, then the sensor
/// readout, then the forward ISP; any section may be empty.
struct JobConfig {
  std::string input_dir;
  std::string output_dir;
  std::string profile_path;  // empty: built-in default profile
  std::string report_path;
  PipelineConfig forward;
  SensorConfig sensor;
  InverseConfig inverse;  // inverse.seed is the job seed
  unsigned workers = 1;

  friend bool operator==(const JobConfig&, const JobConfig&) = default;
};

inline nlohmann::json to_json(const JobConfig& job) {
  nlohmann::json j;
  j["input"] = job.input_dir;
  j["output"] = job.output_dir;
  if (!job.profile_path.empty()) j["profile"] = job.profile_path;
  if (!job.report_path.empty()) j["report"] = job.report_path;
  j["workers"] = job.workers;
  j["forward"] = nlohmann::json::array();
  for (const auto& s : job.forward.stages) j["forward"].push_back(to_string(s));
  j["sensor"] = nlohmann::json::array();
  for (const auto& s : job.sensor.stages) j["sensor"].push_back(to_string(s));
  nlohmann::json inv;
  inv["stages"] = nlohmann::json::array();
  for (auto s : job.inverse.stages) inv["stages"].push_back(inverse_stage_name(s));
  inv["seed"] = job.inverse.seed;
  inv["target_bits"] = job.inverse.target_bits;
  j["inverse"] = inv;
  return j;
}

inline std::string serialize(const JobConfig& job) { return to_json(job).dump(2) + "\n"; }

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                                const std::string& where) {
  for (const auto& [key, _] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

inline std::vector<std::string> string_list(const nlohmann::json& j, const std::string& key) {
  if (!j.contains(key)) return {};
  const auto& arr = j.at(key);
  if (!arr.is_array()) throw ConfigError("'" + key + "' must be a list of stage strings");
  std::vector<std::string> out;
  for (const auto& e : arr) {
    if (!e.is_string()) throw ConfigError("'" + key + "' must be a list of stage strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

}  // namespace detail

/// Validates sections against each other and against the profile.
inline void validate_job(const JobConfig& job, const CameraProfile& profile) {
  validate_forward(job.forward);
  validate_sensor(job.sensor);
  validate_inverse(job.inverse, profile.native_bit_depth);
  if (!job.inverse.empty() && !job.inverse.has(InverseStage::remosaic)) {
    if (!job.sensor.empty()) throw ConfigError("sensor stages need a RAW image; add 'remosaic' to the inverse stages");
    if (job.forward.has(StageKind::demosaic)) {
      throw ConfigError("demosaic needs a RAW image; add 'remosaic' to the inverse stages");
    }
  }
  if (job.workers == 0) throw ConfigError("workers must be >= 1");
}

inline JobConfig job_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  detail::reject_unknown_keys(j, {"input", "output", "profile", "report", "workers", "forward", "sensor", "inverse"},
                              "config");
  JobConfig job;
  try {
    if (j.contains("input")) job.input_dir = j.at("input").get<std::string>();
    if (j.contains("output")) job.output_dir = j.at("output").get<std::string>();
    if (j.contains("profile")) job.profile_path = j.at("profile").get<std::string>();
    if (j.contains("report")) job.report_path = j.at("report").get<std::string>();
    if (j.contains("workers")) {
      const auto w = j.at("workers").get<long long>();
      if (w < 1 || w > 1024) throw ConfigError("workers must lie in 1..1024");
      job.workers = static_cast<unsigned>(w);
    }
    job.forward = make_forward_config(detail::string_list(j, "forward"));
    job.sensor = make_sensor_config(detail::string_list(j, "sensor"));
    if (j.contains("inverse")) {
      const auto& inv = j.at("inverse");
      if (!inv.is_object()) throw ConfigError("'inverse' must be an object");
      detail::reject_unknown_keys(inv, {"stages", "seed", "target_bits"}, "inverse section");
      for (const auto& name : detail::string_list(inv, "stages")) {
        job.inverse.stages.push_back(parse_inverse_stage(name));
      }
      if (inv.contains("seed")) job.inverse.seed = inv.at("seed").get<std::uint64_t>();
      if (inv.contains("target_bits")) job.inverse.target_bits = inv.at("target_bits").get<int>();
      validate_inverse(job.inverse);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  return job;
}

inline JobConfig parse_config_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return job_from_json(j);
}

inline JobConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

inline CameraProfile resolve_profile(const JobConfig& job) {
  if (job.profile_path.empty()) return default_profile();
  try {
    return load_profile(job.profile_path);
  } catch (const ProfileError& e) {
    throw ConfigError(e.what());
  }
}

// ---------------------------------------------------------------------------
// Dataset files

enum class FileKind { rgb, raw };

struct DatasetFile {
  fs::path path;
  FileKind kind = FileKind::rgb;
};

/// Supported images directly inside `dir`, sorted by file name: *.ppm (RGB)
/// and *.pgm (RAW, with a .pgm.json sidecar).
inline std::vector<DatasetFile> list_images(const std::string& dir) {
  if (!fs::is_directory(dir)) throw ConfigError("input directory '" + dir + "' does not exist");
  std::vector<DatasetFile> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension().string();
    if (ext == ".ppm") files.push_back({entry.path(), FileKind::rgb});
    if (ext == ".pgm") files.push_back({entry.path(), FileKind::raw});
  }
  std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) { return a.path.filename() < b.path.filename(); });
  return files;
}

struct LoadedImage {
  AnyImage image;
  unsigned rgb_maxval = 255;
};

inline LoadedImage load_any(const DatasetFile& f) {
  if (f.kind == FileKind::raw) return {load_raw(f.path.string()), 255};
  auto loaded = load_rgb_with_depth(f.path.string());
  return {std::move(loaded.image), loaded.maxval};
}

/// Writes RGB as PPM and RAW as PGM + sidecar; returns the path written.
inline fs::path save_any(const AnyImage& img, const fs::path& dir, const std::string& stem, unsigned rgb_maxval) {
  if (const auto* rgb = std::get_if<RgbImage>(&img)) {
    const auto out = dir / (stem + ".ppm");
    save_rgb(*rgb, out.string(), rgb_maxval);
    return out;
  }
  const auto out = dir / (stem + ".pgm");
  save_raw(std::get<RawImage>(img), out.string());
  return out;
}

/// Per-image seed, derived from the job seed and the file name so results do
/// not depend on processing order.
inline std::uint64_t image_seed(std::uint64_t job_seed, const std::string& name) {
  return mix_key(job_seed, hash_name(name));
}

// ---------------------------------------------------------------------------
// convert / invert / roundtrip

enum class BatchMode { convert, invert, roundtrip };

struct FileResult {
  std::string name;
  std::string output;
  bool ok = false;
  std::string error;
  std::optional<QualityReport> quality;  // roundtrip mode
};

struct BatchSummary {
  std::size_t converted = 0;
  std::size_t failed = 0;
  std::vector<FileResult> files;

  bool success() const { return failed == 0; }
};

inline nlohmann::json quality_json(const QualityReport& q) {
  nlohmann::json j;
  j["mse"] = q.mse;
  j["avg_pixel_error"] = q.avg_pixel_error;
  if (std::isinf(q.psnr)) {
    j["psnr"] = "inf";
  } else {
    j["psnr"] = q.psnr;
  }
  return j;
}

inline nlohmann::json to_json(const BatchSummary& s) {
  nlohmann::json j;
  j["converted"] = s.converted;
  j["failed"] = s.failed;
  j["files"] = nlohmann::json::array();
  for (const auto& f : s.files) {
    nlohmann::json e{{"name", f.name}, {"ok", f.ok}};
    if (!f.output.empty()) e["output"] = f.output;
    if (!f.error.empty()) e["error"] = f.error;
    if (f.quality) e["quality"] = quality_json(*f.quality);
    j["files"].push_back(e);
  }
  return j;
}

/// Runs one image through the job's sections. RAW inputs are already past
/// the reverse pipeline and enter at the sensor section.
inline AnyImage process_image(const AnyImage& input, const std::string& name, const JobConfig& job,
                              const CameraProfile& profile, BatchMode mode) {
  AnyImage cur = input;
  if (const auto* rgb = std::get_if<RgbImage>(&cur); rgb && !job.inverse.empty()) {
    InverseConfig inv = job.inverse;
    inv.seed = image_seed(job.inverse.seed, name);
    cur = apply_inverse(*rgb, profile, inv);
  }
  if (!job.sensor.empty()) {
    const auto* raw = std::get_if<RawImage>(&cur);
    if (!raw) throw PipelineError("sensor stages need a RAW image");
    cur = run_sensor(*raw, job.sensor);
  }
  if (mode != BatchMode::invert && !job.forward.stages.empty()) cur = run_forward(cur, profile, job.forward);
  return cur;
}

/// Converts every supported image of the input directory. Per-file failures
/// are collected; results are identical at any worker count.
inline BatchSummary convert_batch(const JobConfig& job, BatchMode mode = BatchMode::convert) {
  const CameraProfile profile = resolve_profile(job);
  validate_job(job, profile);
  if (job.output_dir.empty()) throw ConfigError("no output directory given");
  const auto files = list_images(job.input_dir);
  std::error_code ec;
  fs::create_directories(job.output_dir, ec);
  if (!fs::is_directory(job.output_dir)) throw ConfigError("cannot create output directory '" + job.output_dir + "'");

  BatchSummary summary;
  summary.files.resize(files.size());
  parallel_for(files.size(), job.workers, [&](std::size_t i) {
    FileResult& res = summary.files[i];
    res.name = files[i].path.filename().string();
    try {
      const auto loaded = load_any(files[i]);
      const AnyImage out = process_image(loaded.image, res.name, job, profile, mode);
      res.output = save_any(out, job.output_dir, files[i].path.stem().string(), loaded.rgb_maxval).filename().string();
      if (mode == BatchMode::roundtrip) {
        const auto* a = std::get_if<RgbImage>(&loaded.image);
        const auto* b = std::get_if<RgbImage>(&out);
        if (a && b && a->width() == b->width() && a->height() == b->height()) res.quality = psnr(*a, *b);
      }
      res.ok = true;
    } catch (const std::exception& e) {
      res.error = e.what();
    }
  });
  for (const auto& f : summary.files) (f.ok ? summary.converted : summary.failed)++;
  if (!job.report_path.empty()) {
    std::ofstream rep(job.report_path);
    rep << to_json(summary).dump(2) << "\n";
  }
  return summary;
}

// ---------------------------------------------------------------------------
// stats

struct StatsRow {
  std::string name;
  QualityReport quality;
};

struct StatsTable {
  std::vector<StatsRow> rows;
  QualityReport aggregate;  // mean mse and mean error; psnr from the mean mse
};

inline StatsTable stats_command(const std::string& refs_dir, const std::string& outs_dir) {
  const auto refs = list_images(refs_dir);
  if (!fs::is_directory(outs_dir)) throw ConfigError("output directory '" + outs_dir + "' does not exist");
  StatsTable table;
  double mse_sum = 0.0;
  double err_sum = 0.0;
  for (const auto& ref : refs) {
    const auto counterpart = fs::path(outs_dir) / ref.path.filename();
    if (!fs::exists(counterpart)) throw IoError("missing counterpart for '" + ref.path.filename().string() + "'");
    const auto a = load_any(ref).image;
    const auto b = load_any({counterpart, ref.kind}).image;
    QualityReport q = std::visit(
        [](const auto& x, const auto& y) -> QualityReport {
          if constexpr (std::is_same_v<std::decay_t<decltype(x)>, std::decay_t<decltype(y)>>) {
            return psnr(x, y);
          } else {
            throw IoError("image kinds differ");
          }
        },
        a, b);
    table.rows.push_back({ref.path.filename().string(), q});
    mse_sum += q.mse;
    err_sum += q.avg_pixel_error;
  }
  if (!table.rows.empty()) {
    const double n = static_cast<double>(table.rows.size());
    table.aggregate.mse = mse_sum / n;
    table.aggregate.avg_pixel_error = err_sum / n;
    table.aggregate.psnr = psnr_from_mse(table.aggregate.mse);
  }
  return table;
}

inline std::string format_stats(const StatsTable& t) {
  std::string out;
  char buf[256];
  auto psnr_text = [](double p) {
    if (std::isinf(p)) return std::string("inf");
    char b[32];
    std::snprintf(b, sizeof b, "%.4f", p);
    return std::string(b);
  };
  std::snprintf(buf, sizeof buf, "%-32s %12s %16s %14s\n", "file", "psnr_db", "avg_pixel_error", "mse");
  out += buf;
  for (const auto& r : t.rows) {
    std::snprintf(buf, sizeof buf, "%-32s %12s %16.8f %14.6e\n", r.name.c_str(), psnr_text(r.quality.psnr).c_str(),
                  r.quality.avg_pixel_error, r.quality.mse);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "%-32s %12s %16.8f %14.6e\n", "AGGREGATE", psnr_text(t.aggregate.psnr).c_str(),
                t.aggregate.avg_pixel_error, t.aggregate.mse);
  out += buf;
  return out;
}

inline nlohmann::json to_json(const StatsTable& t) {
  nlohmann::json j;
  j["files"] = nlohmann::json::array();
  for (const auto& r : t.rows) {
    auto e = quality_json(r.quality);
    e["name"] = r.name;
    j["files"].push_back(e);
  }
  j["aggregate"] = quality_json(t.aggregate);
  return j;
}

// ---------------------------------------------------------------------------
// energy / levels

/// RAW dataset from a directory: RAW files load as-is, RGB files go through
/// the given reverse pipeline (which must remosaic).
inline std::vector<RawImage> load_raw_dataset(const std::string& dir, const CameraProfile& profile,
                                              const InverseConfig& inverse) {
  std::vector<RawImage> out;
  for (const auto& f : list_images(dir)) {
    if (f.kind == FileKind::raw) {
      out.push_back(load_raw(f.path.string()));
    } else {
      InverseConfig inv = inverse;
      inv.seed = image_seed(inverse.seed, f.path.filename().string());
      out.push_back(run_inverse(load_rgb(f.path.string()), profile, inv));
    }
  }
  return out;
}

inline EnergyReport energy_command(const std::string& dataset_dir, const AdcConfig& a, const AdcConfig& b,
                                   const CameraProfile& profile, const InverseConfig& inverse,
                                   const std::string& report_path = {}) {
  const auto dataset = load_raw_dataset(dataset_dir, profile, inverse);
  if (dataset.empty()) throw std::invalid_argument("energy: dataset directory holds no images");
  const auto report = energy_report(dataset, a, b);
  if (!report_path.empty()) {
    std::ofstream out(report_path);
    if (!out) throw IoError("cannot write '" + report_path + "'");
    out << to_json(report).dump(2) << "\n";
  }
  return report;
}

inline QuantizerSpec levels_command(const std::string& dataset_dir, QuantScheme scheme, int bits,
                                    const std::string& out_path, const CameraProfile& profile,
                                    const InverseConfig& inverse, double floor = kDefaultLogFloor) {
  QuantizerSpec q;
  if (scheme == QuantScheme::linear || scheme == QuantScheme::logarithmic) {
    q = make_quantizer(scheme, bits, floor);
  } else {
    const auto dataset = load_raw_dataset(dataset_dir, profile, inverse);
    if (dataset.empty()) throw std::invalid_argument("levels: dataset directory holds no images");
    q = design_quantizer(AdcConfig{scheme, bits}, pooled_samples(dataset), floor);
  }
  std::ofstream out(out_path);
  if (!out) throw IoError("cannot write '" + out_path + "'");
  write_levels(q, out);
  return q;
}

}  // namespace visionpipe
