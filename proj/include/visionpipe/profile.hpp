#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "visionpipe/image.hpp"
#include "visionpipe/matrix.hpp"

namespace visionpipe {

class ProfileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Largest gamut strength for which v(1 - s v)/(1 - s) stays strictly
// increasing on [0, 1].
inline constexpr double kMaxGamutStrength = 0.5;

/// Per-camera parameters for the forward and reverse pipelines.
struct CameraProfile {
  Matrix3 color_matrix = identity3();
  double gamma_scale = 1.0;     // A in A * v^gamma
  double gamma_exponent = 1.0;  // gamma in (0, 1]
  double gamut_strength = 0.0;  // s
  double noise_a = 0.0;         // variance slope per unit intensity
  double noise_b = 0.0;         // variance floor
  int native_bit_depth = 12;
  BayerPattern pattern;

  friend bool operator==(const CameraProfile&, const CameraProfile&) = default;
};

inline void validate(const CameraProfile& p) {
  for (const auto& row : p.color_matrix) {
    for (double v : row) {
      if (!std::isfinite(v)) throw ProfileError("color_matrix has non-finite entries");
    }
  }
  if (is_singular(p.color_matrix)) throw ProfileError("color_matrix is singular");
  if (!(p.gamma_scale > 0.0 && p.gamma_scale <= 1.0)) throw ProfileError("gamma_scale must lie in (0, 1]");
  if (!(p.gamma_exponent > 0.0 && p.gamma_exponent <= 1.0)) {
    throw ProfileError("gamma_exponent must lie in (0, 1]");
  }
  if (!(p.gamut_strength >= 0.0 && p.gamut_strength <= kMaxGamutStrength)) {
    throw ProfileError("gamut_strength must lie in [0, 0.5]");
  }
  if (!(p.noise_a >= 0.0) || !(p.noise_b >= 0.0)) throw ProfileError("noise coefficients must be non-negative");
  if (p.native_bit_depth < 1 || p.native_bit_depth > 16) throw ProfileError("native_bit_depth must lie in 1..16");
}

/// Reference synthetic camera: white-balance-like diagonal gains, sRGB-ish gamma.
inline CameraProfile default_profile() {
  CameraProfile p;
  p.color_matrix = diagonal3(1.0, 0.85, 1.05);
  p.gamma_scale = 1.0;
  p.gamma_exponent = 1.0 / 2.2;
  p.gamut_strength = 0.1;
  p.noise_a = 0.010;
  p.noise_b = 0.0005;
  p.native_bit_depth = 12;
  p.pattern = BayerPattern(BayerPattern::Layout::rggb);
  return p;
}

inline nlohmann::json to_json(const CameraProfile& p) {
  nlohmann::json j;
  j["color_matrix"] = p.color_matrix;
  j["gamma_scale"] = p.gamma_scale;
  j["gamma_exponent"] = p.gamma_exponent;
  j["gamut_strength"] = p.gamut_strength;
  j["noise_a"] = p.noise_a;
  j["noise_b"] = p.noise_b;
  j["native_bit_depth"] = p.native_bit_depth;
  j["pattern"] = p.pattern.name();
  return j;
}

inline CameraProfile profile_from_json(const nlohmann::json& j) {
  static const char* const kFields[] = {"color_matrix", "gamma_scale", "gamma_exponent", "gamut_strength",
                                        "noise_a",      "noise_b",     "native_bit_depth", "pattern"};
  if (!j.is_object()) throw ProfileError("profile must be a JSON object");
  for (const char* f : kFields) {
    if (!j.contains(f)) throw ProfileError(std::string("profile is missing field '") + f + "'");
  }
  for (const auto& [key, _] : j.items()) {
    if (std::find(std::begin(kFields), std::end(kFields), key) == std::end(kFields)) {
      throw ProfileError("unknown profile field '" + key + "'");
    }
  }
  CameraProfile p;
  try {
    p.color_matrix = j.at("color_matrix").get<Matrix3>();
    p.gamma_scale = j.at("gamma_scale").get<double>();
    p.gamma_exponent = j.at("gamma_exponent").get<double>();
    p.gamut_strength = j.at("gamut_strength").get<double>();
    p.noise_a = j.at("noise_a").get<double>();
    p.noise_b = j.at("noise_b").get<double>();
    p.native_bit_depth = j.at("native_bit_depth").get<int>();
    p.pattern = BayerPattern::parse(j.at("pattern").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw ProfileError(std::string("malformed profile: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ProfileError(e.what());
  }
  validate(p);
  return p;
}

inline CameraProfile parse_profile(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ProfileError(std::string("profile is not valid JSON: ") + e.what());
  }
  return profile_from_json(j);
}

inline std::string serialize(const CameraProfile& p) { return to_json(p).dump(2) + "\n"; }

inline CameraProfile load_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ProfileError("cannot open profile '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_profile(ss.str());
}

}  // namespace visionpipe
