#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <span>
#include <stdexcept>
#include <vector>

#include "visionpipe/energy.hpp"
#include "visionpipe/image.hpp"
#include "visionpipe/lognormal.hpp"
#include "visionpipe/quantizer.hpp"

namespace visionpipe {

// Data-driven quantizer design: histograms, log-normal fitting, CDF-inverted
// level placement and the Lloyd-Max refinement.

inline std::vector<double> pooled_samples(std::span<const RawImage> dataset) {
  std::vector<double> out;
  std::size_t n = 0;
  for (const auto& img : dataset) n += img.pixel_count();
  out.reserve(n);
  for (const auto& img : dataset) out.insert(out.end(), img.data().begin(), img.data().end());
  return out;
}

/// Normalized counts over `bins` uniform bins on [0, 1]; 1.0 lands in the last bin.
inline IntensityDistribution build_histogram(std::span<const RawImage> dataset, std::size_t bins) {
  if (bins < 2) throw std::invalid_argument("build_histogram: need at least two bins");
  if (dataset.empty()) throw std::invalid_argument("build_histogram: empty dataset");
  std::vector<std::uint64_t> counts(bins, 0);
  for (const auto& img : dataset) {
    for (double v : img.data()) {
      const auto b = static_cast<std::size_t>(std::clamp(v, 0.0, 1.0) * static_cast<double>(bins));
      ++counts[std::min(b, bins - 1)];
    }
  }
  std::vector<double> edges(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) edges[i] = static_cast<double>(i) / static_cast<double>(bins);
  return distribution_from_counts(std::move(counts), std::move(edges));
}

inline QuantizerSpec cdf_levels(const LogNormalFit& fit, int bits, double floor = kDefaultLogFloor) {
  return make_cdf_quantizer(fit, bits, floor);
}

struct LloydMaxOptions {
  double tol = 1e-9;  // stop when no level moves by this much
  int max_iter = 500;
};

struct LloydMaxResult {
  QuantizerSpec spec;
  double mse = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> mse_history;  // MSE of the level set entering each iteration, then the final one
};

namespace detail {

// Nearest-level MSE over sorted samples, levels sorted.
inline double sorted_mse(std::span<const double> sorted, const std::vector<double>& levels) {
  double sum = 0.0;
  std::size_t k = 0;
  for (double v : sorted) {
    while (k + 1 < levels.size() && v > 0.5 * (levels[k] + levels[k + 1])) ++k;
    const double d = v - levels[k];
    sum += d * d;
  }
  return sum / static_cast<double>(sorted.size());
}

}  // namespace detail

namespace detail {

// Moves each empty cell's level to the unused distinct sample nearest its old
// level. Non-empty means and earlier picks count as used, so the level set
// stays distinct; the caller sorts it afterwards.
inline void snap_empty_cells(std::vector<double>& next, const std::vector<bool>& empty, const std::vector<double>& old,
                             const std::vector<double>& distinct) {
  std::vector<double> used;
  for (std::size_t k = 0; k < next.size(); ++k) {
    if (!empty[k]) used.push_back(next[k]);
  }
  std::sort(used.begin(), used.end());
  const auto is_used = [&](double v) { return std::binary_search(used.begin(), used.end(), v); };
  for (std::size_t k = 0; k < next.size(); ++k) {
    if (!empty[k]) continue;
    const auto mid = std::lower_bound(distinct.begin(), distinct.end(), old[k]);
    auto up = mid;
    auto down = mid;
    while (up != distinct.end() && is_used(*up)) ++up;
    bool has_down = false;
    while (down != distinct.begin()) {
      --down;
      if (!is_used(*down)) {
        has_down = true;
        break;
      }
    }
    if (up == distinct.end() && !has_down) throw std::runtime_error("lloyd_max: unresolvable empty cell");
    double pick;
    if (up == distinct.end()) {
      pick = *down;
    } else if (!has_down) {
      pick = *up;
    } else {
      pick = old[k] - *down <= *up - old[k] ? *down : *up;
    }
    next[k] = pick;
    used.insert(std::upper_bound(used.begin(), used.end(), pick), pick);
  }
}

}  // namespace detail

/// Lloyd-Max iteration started from the linear quantizer: boundaries at level
/// midpoints, levels at cell means. An empty cell snaps to the nearest sample
/// not already serving as a level, and the levels are re-sorted.
inline LloydMaxResult lloyd_max(std::span<const double> samples, int bits, const LloydMaxOptions& opt = {}) {
  check_bits(bits);
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n_levels = std::size_t{1} << bits;
  std::vector<double> distinct;
  std::unique_copy(sorted.begin(), sorted.end(), std::back_inserter(distinct));
  if (distinct.size() < n_levels) throw std::invalid_argument("lloyd_max: need at least 2^bits distinct samples");
  std::vector<double> prefix(sorted.size() + 1, 0.0);
  for (std::size_t i = 0; i < sorted.size(); ++i) prefix[i + 1] = prefix[i] + sorted[i];

  LloydMaxResult result;
  std::vector<double> levels = make_quantizer(QuantScheme::linear, bits).levels;
  std::vector<double> next(n_levels);
  std::vector<bool> empty(n_levels);
  for (int it = 0; it < opt.max_iter; ++it) {
    result.mse_history.push_back(detail::sorted_mse(sorted, levels));
    std::size_t lo = 0;
    bool any_empty = false;
    for (std::size_t k = 0; k < n_levels; ++k) {
      std::size_t hi = sorted.size();
      if (k + 1 < n_levels) {
        const double b = 0.5 * (levels[k] + levels[k + 1]);
        hi = static_cast<std::size_t>(std::upper_bound(sorted.begin() + static_cast<long>(lo), sorted.end(), b) -
                                      sorted.begin());
      }
      empty[k] = hi == lo;
      any_empty = any_empty || empty[k];
      if (!empty[k]) next[k] = (prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo);
      lo = hi;
    }
    if (any_empty) {
      detail::snap_empty_cells(next, empty, levels, distinct);
      std::sort(next.begin(), next.end());
    }
    for (std::size_t k = 1; k < n_levels; ++k) {
      if (!(next[k] > next[k - 1])) throw std::runtime_error("lloyd_max: levels collapsed");
    }
    double moved = 0.0;
    for (std::size_t k = 0; k < n_levels; ++k) moved = std::max(moved, std::abs(next[k] - levels[k]));
    levels.swap(next);
    result.iterations = it + 1;
    if (moved < opt.tol) {
      result.converged = true;
      break;
    }
  }
  result.mse = detail::sorted_mse(sorted, levels);
  result.mse_history.push_back(result.mse);
  result.spec = quantizer_from_levels(QuantScheme::lloyd_max, std::move(levels));
  return result;
}

}  // namespace visionpipe
