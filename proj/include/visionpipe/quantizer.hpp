#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "visionpipe/lognormal.hpp"

namespace visionpipe {

enum class QuantScheme { linear, logarithmic, cdf, lloyd_max, custom };

inline std::string scheme_name(QuantScheme s) {
  switch (s) {
    case QuantScheme::linear: return "linear";
    case QuantScheme::logarithmic: return "log";
    case QuantScheme::cdf: return "cdf";
    case QuantScheme::lloyd_max: return "lloyd_max";
    case QuantScheme::custom: return "custom";
  }
  return "custom";
}

inline QuantScheme parse_scheme(const std::string& s) {
  if (s == "linear" || s == "lin") return QuantScheme::linear;
  if (s == "log" || s == "logarithmic") return QuantScheme::logarithmic;
  if (s == "cdf") return QuantScheme::cdf;
  if (s == "lloyd" || s == "lloyd_max") return QuantScheme::lloyd_max;
  if (s == "custom") return QuantScheme::custom;
  throw std::invalid_argument("unknown quantizer scheme '" + s + "'");
}

/// One native 12-bit LSB.
inline constexpr double kDefaultLogFloor = 1.0 / 4096.0;

/// 2^bits reconstruction levels and the 2^bits - 1 decision thresholds
/// between them. A sample falls in code k when boundaries[k-1] < v <= boundaries[k].
struct QuantizerSpec {
  QuantScheme scheme = QuantScheme::linear;
  int bits = 1;
  double floor = 0.0;  // smallest level of log-domain schemes, 0 otherwise
  std::vector<double> levels;
  std::vector<double> boundaries;
  std::optional<LogNormalFit> fit;  // model behind a cdf quantizer

  std::size_t level_count() const { return levels.size(); }

  friend bool operator==(const QuantizerSpec&, const QuantizerSpec&) = default;
};

class QuantizerError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline void check_bits(int bits) {
  if (bits < 1 || bits > 16) throw QuantizerError("quantizer bit count must lie in 1..16");
}

inline void validate(const QuantizerSpec& q) {
  check_bits(q.bits);
  const std::size_t n = std::size_t{1} << q.bits;
  if (q.levels.size() != n) throw QuantizerError("quantizer must have 2^bits levels");
  if (q.boundaries.size() != n - 1) throw QuantizerError("quantizer must have 2^bits - 1 boundaries");
  for (std::size_t k = 0; k < n; ++k) {
    if (!(q.levels[k] >= 0.0 && q.levels[k] <= 1.0)) throw QuantizerError("quantizer levels must lie in [0, 1]");
    if (k > 0 && !(q.levels[k] > q.levels[k - 1])) throw QuantizerError("quantizer levels must be strictly increasing");
  }
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (!(q.boundaries[k] >= q.levels[k] && q.boundaries[k] < q.levels[k + 1])) {
      throw QuantizerError("quantizer boundaries must interleave levels");
    }
  }
}

namespace detail {

inline std::vector<double> arithmetic_midpoints(const std::vector<double>& levels) {
  std::vector<double> b(levels.size() - 1);
  for (std::size_t k = 0; k + 1 < levels.size(); ++k) b[k] = 0.5 * (levels[k] + levels[k + 1]);
  return b;
}

inline std::vector<double> geometric_midpoints(const std::vector<double>& levels) {
  std::vector<double> b(levels.size() - 1);
  for (std::size_t k = 0; k + 1 < levels.size(); ++k) b[k] = std::sqrt(levels[k] * levels[k + 1]);
  return b;
}

}  // namespace detail

/// Uniform (linear) or log-uniform (logarithmic) level placement.
inline QuantizerSpec make_quantizer(QuantScheme scheme, int bits, double floor = kDefaultLogFloor) {
  check_bits(bits);
  QuantizerSpec q;
  q.scheme = scheme;
  q.bits = bits;
  const std::size_t n = std::size_t{1} << bits;
  const double top = static_cast<double>(n - 1);
  q.levels.resize(n);
  switch (scheme) {
    case QuantScheme::linear:
      for (std::size_t k = 0; k < n; ++k) q.levels[k] = static_cast<double>(k) / top;
      q.boundaries = detail::arithmetic_midpoints(q.levels);
      break;
    case QuantScheme::logarithmic:
      if (!(floor > 0.0 && floor < 1.0)) throw QuantizerError("logarithmic floor must lie in (0, 1)");
      q.floor = floor;
      for (std::size_t k = 0; k < n; ++k) q.levels[k] = std::pow(floor, 1.0 - static_cast<double>(k) / top);
      q.levels.back() = 1.0;
      q.boundaries = detail::geometric_midpoints(q.levels);
      break;
    default:
      throw QuantizerError("make_quantizer builds only linear and logarithmic quantizers");
  }
  return q;
}

/// Wraps an explicit level table. Log schemes split cells at geometric
/// midpoints; every other scheme splits at arithmetic midpoints.
inline QuantizerSpec quantizer_from_levels(QuantScheme scheme, std::vector<double> levels, double floor = 0.0) {
  if (scheme == QuantScheme::cdf) throw QuantizerError("cdf quantizers are built from a distribution fit");
  if (levels.size() < 2 || (levels.size() & (levels.size() - 1)) != 0) {
    throw QuantizerError("level count must be a power of two >= 2");
  }
  QuantizerSpec q;
  q.scheme = scheme;
  q.bits = static_cast<int>(std::countr_zero(levels.size()));
  q.levels = std::move(levels);
  if (scheme == QuantScheme::logarithmic) {
    if (!(q.levels.front() > 0.0)) throw QuantizerError("logarithmic levels must be positive");
    q.floor = floor > 0.0 ? floor : q.levels.front();
    q.boundaries = detail::geometric_midpoints(q.levels);
  } else {
    q.floor = floor;
    q.boundaries = detail::arithmetic_midpoints(q.levels);
  }
  validate(q);
  return q;
}

/// Levels at mid-cell quantiles (k + 1/2) / 2^n of the fit truncated to
/// [floor, 1]; boundaries at the cell-edge quantiles k / 2^n. Every code is
/// equally likely under the fitted model.
inline QuantizerSpec make_cdf_quantizer(const LogNormalFit& fit, int bits, double floor = kDefaultLogFloor) {
  check_bits(bits);
  if (!(fit.sigma > 0.0) || !std::isfinite(fit.mu)) throw QuantizerError("cdf quantizer: degenerate fit");
  if (!(floor > 0.0 && floor < 1.0)) throw QuantizerError("cdf quantizer: floor must lie in (0, 1)");
  const TruncatedLogNormal dist{fit, floor, 1.0};
  if (!(dist.mass_within() > 0.0)) throw QuantizerError("cdf quantizer: fit has no mass inside [floor, 1]");
  QuantizerSpec q;
  q.scheme = QuantScheme::cdf;
  q.bits = bits;
  q.floor = floor;
  q.fit = fit;
  const std::size_t n = std::size_t{1} << bits;
  const double cells = static_cast<double>(n);
  q.levels.resize(n);
  q.boundaries.resize(n - 1);
  for (std::size_t k = 0; k < n; ++k) q.levels[k] = dist.quantile((static_cast<double>(k) + 0.5) / cells);
  for (std::size_t k = 1; k < n; ++k) q.boundaries[k - 1] = dist.quantile(static_cast<double>(k) / cells);
  try {
    validate(q);
  } catch (const QuantizerError&) {
    throw QuantizerError("cdf quantizer: fitted distribution too narrow for " + std::to_string(bits) +
                         " bits at double precision");
  }
  return q;
}

struct Quantized {
  std::size_t code = 0;
  double level = 0.0;
};

/// Ties on a boundary go to the lower code.
inline Quantized quantize_value(double v, const QuantizerSpec& q) {
  const auto it = std::lower_bound(q.boundaries.begin(), q.boundaries.end(), v);
  const auto code = static_cast<std::size_t>(it - q.boundaries.begin());
  return {code, q.levels[code]};
}

inline double quantizer_mse(const QuantizerSpec& q, std::span<const double> samples) {
  if (samples.empty()) throw QuantizerError("quantizer_mse: no samples");
  double sum = 0.0;
  for (double v : samples) {
    const double d = v - quantize_value(v, q).level;
    sum += d * d;
  }
  return sum / static_cast<double>(samples.size());
}

// Level file: "# scheme bits floor" header (cdf appends "mu sigma"), then
// one level per line.
inline void write_levels(const QuantizerSpec& q, std::ostream& out) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", q.floor);
  out << "# " << scheme_name(q.scheme) << " " << q.bits << " " << buf;
  if (q.scheme == QuantScheme::cdf && q.fit) {
    std::snprintf(buf, sizeof buf, " %.17g", q.fit->mu);
    out << buf;
    std::snprintf(buf, sizeof buf, " %.17g", q.fit->sigma);
    out << buf;
  }
  out << "\n";
  for (double level : q.levels) {
    std::snprintf(buf, sizeof buf, "%.17g\n", level);
    out << buf;
  }
}

inline std::string format_levels(const QuantizerSpec& q) {
  std::ostringstream ss;
  write_levels(q, ss);
  return ss.str();
}

inline QuantizerSpec read_levels(std::istream& in) {
  std::string header;
  if (!std::getline(in, header) || header.rfind("#", 0) != 0) {
    throw QuantizerError("level file must start with '# scheme bits floor'");
  }
  std::istringstream hs(header.substr(1));
  std::string scheme_str;
  int bits = 0;
  double floor = 0.0;
  if (!(hs >> scheme_str >> bits >> floor)) throw QuantizerError("malformed level file header");
  const QuantScheme scheme = parse_scheme(scheme_str);
  check_bits(bits);

  std::vector<double> levels;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    double v = 0.0;
    if (!(ls >> v)) throw QuantizerError("malformed level line '" + line + "'");
    levels.push_back(v);
  }
  if (levels.size() != (std::size_t{1} << bits)) throw QuantizerError("level count does not match header bits");

  if (scheme == QuantScheme::cdf) {
    LogNormalFit fit;
    if (!(hs >> fit.mu >> fit.sigma)) throw QuantizerError("cdf level file header needs 'mu sigma'");
    QuantizerSpec q = make_cdf_quantizer(fit, bits, floor);
    q.levels = std::move(levels);
    validate(q);
    return q;
  }
  if (scheme == QuantScheme::linear) {
    QuantizerSpec q = make_quantizer(QuantScheme::linear, bits);
    q.levels = std::move(levels);
    q.boundaries = detail::arithmetic_midpoints(q.levels);
    validate(q);
    return q;
  }
  return quantizer_from_levels(scheme, std::move(levels), floor);
}

inline QuantizerSpec parse_levels(const std::string& text) {
  std::istringstream ss(text);
  return read_levels(ss);
}

}  // namespace visionpipe
