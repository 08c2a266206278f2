#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>

#include "visionpipe/normal.hpp"

namespace visionpipe {

struct LogNormalFit {
  double mu = 0.0;     // mean of ln(v)
  double sigma = 1.0;  // population std of ln(v)
  std::size_t sample_count = 0;
  std::size_t excluded_count = 0;  // samples <= 0, left out of the fit

  double cdf(double v) const { return v <= 0.0 ? 0.0 : normal_cdf((std::log(v) - mu) / sigma); }
  double quantile(double p) const { return std::exp(mu + sigma * normal_quantile(p)); }

  friend bool operator==(const LogNormalFit&, const LogNormalFit&) = default;
};

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Method-of-moments fit in the log domain. Non-positive samples are excluded
/// and counted.
inline LogNormalFit fit_lognormal(std::span<const double> samples) {
  LogNormalFit fit;
  double sum = 0.0;
  for (double v : samples) {
    if (v > 0.0) {
      sum += std::log(v);
      ++fit.sample_count;
    } else {
      ++fit.excluded_count;
    }
  }
  if (fit.sample_count == 0) throw FitError("fit_lognormal: no positive samples");
  if (fit.sample_count < 2) throw FitError("fit_lognormal: need at least two positive samples");
  fit.mu = sum / static_cast<double>(fit.sample_count);
  double sq = 0.0;
  for (double v : samples) {
    if (v > 0.0) {
      const double d = std::log(v) - fit.mu;
      sq += d * d;
    }
  }
  fit.sigma = std::sqrt(sq / static_cast<double>(fit.sample_count));
  if (!(fit.sigma > 1e-12 * std::max(1.0, std::abs(fit.mu)))) {
    throw FitError("fit_lognormal: zero variance in the log domain");
  }
  return fit;
}

/// The fitted distribution restricted to [lo, hi]; quantiles stay strictly
/// inside that interval and strictly increasing in p.
struct TruncatedLogNormal {
  LogNormalFit fit;
  double lo = 0.0;
  double hi = 1.0;

  double mass_below() const { return fit.cdf(lo); }
  double mass_within() const { return fit.cdf(hi) - fit.cdf(lo); }

  double cdf(double v) const {
    if (v <= lo) return 0.0;
    if (v >= hi) return 1.0;
    return (fit.cdf(v) - mass_below()) / mass_within();
  }
  double quantile(double p) const {
    const double q = fit.quantile(mass_below() + p * mass_within());
    return std::clamp(q, lo, hi);
  }
};

}  // namespace visionpipe
