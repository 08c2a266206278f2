// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "visionpipe/visionpipe.hpp"

#ifndef VISIONPIPE_CLI_PATH
#error "VISIONPIPE_CLI_PATH must point at the CLI binary"
#endif

namespace vp = visionpipe;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, const std::string& title, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s -- %s\n", pass ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("visionpipe_acceptance_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

vp::RawImage random_raw(std::size_t w, std::size_t h, vp::BayerPattern pattern, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  vp::RawImage raw(w, h, pattern);
  for (double& v : raw.data()) v = u(rng);
  raw.mark_continuous();
  return raw;
}

const vp::BayerPattern::Layout kLayouts[] = {vp::BayerPattern::Layout::rggb, vp::BayerPattern::Layout::bggr,
                                             vp::BayerPattern::Layout::grbg, vp::BayerPattern::Layout::gbrg};

// ---------------------------------------------------------------------------

void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto profile = vp::default_profile();
  const auto inverse = vp::InverseConfig::full(false, 12);
  const auto forward = vp::make_forward_config({"demosaic:bilinear", "color", "gamut", "gamma"});
  double worst_psnr = std::numeric_limits<double>::infinity();
  double worst_err = 0.0;
  int bad = 0;
  for (std::size_t i = 0; i < 50; ++i) {
    const auto src = vp::synth::to_8bit(vp::synth::smooth_scene(i, 96, 64, 2024));
    const auto raw = vp::run_inverse(src, profile, inverse);
    const auto back = vp::run_forward(raw, profile, forward);
    const auto q = vp::psnr(src, back);
    worst_psnr = std::min(worst_psnr, q.psnr);
    worst_err = std::max(worst_err, q.avg_pixel_error);
    if (!(q.psnr >= 40.0 && q.avg_pixel_error <= 0.01)) ++bad;
  }
  const double secs = seconds_since(t0);
  report(1, "round-trip fidelity on 50 smooth scenes", bad == 0 && secs <= 60.0,
         "worst PSNR " + fmt("%.2f dB", worst_psnr) + ", worst avg error " + fmt("%.4f%%", 100.0 * worst_err) +
             ", failing images " + std::to_string(bad) + ", " + fmt("%.2f s", secs));
}

void criterion_2() {
  const auto p = vp::default_profile();
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(1e-6, 1.0 - 1e-6);
  constexpr std::size_t kSamples = 100000;

  // Color: keep only samples whose image under M stays inside (0, 1).
  std::vector<double> color_in;
  while (color_in.size() < 3 * kSamples) {
    const vp::Vec3 v{u(rng), u(rng), u(rng)};
    const auto m = vp::multiply(p.color_matrix, v);
    if (std::all_of(m.begin(), m.end(), [](double x) { return x > 0.0 && x < 1.0; })) {
      color_in.insert(color_in.end(), v.begin(), v.end());
    }
  }
  std::vector<double> interior(3 * kSamples);
  for (double& v : interior) v = u(rng);

  auto worst = [](const vp::RgbImage& a, const vp::RgbImage& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) d = std::max(d, std::abs(a.data()[i] - b.data()[i]));
    return d;
  };
  const vp::RgbImage ci(1000, kSamples / 1000, color_in);
  const vp::RgbImage gi(1000, kSamples / 1000, interior);
  const double e_color = worst(ci, vp::inverse_color_transform(vp::color_transform(ci, p.color_matrix), p.color_matrix));
  const double e_gamut = worst(gi, vp::inverse_gamut(vp::gamut_map(gi, p.gamut_strength), p.gamut_strength));
  const double e_gamma = worst(gi, vp::gamma_expand(vp::gamma_compress(gi, p.gamma_scale, p.gamma_exponent),
                                                    p.gamma_scale, p.gamma_exponent));
  const double e = std::max({e_color, e_gamut, e_gamma});
  report(2, "stage-inverse identities (color, gamut, gamma), 1e5 samples each", e <= 1e-9,
         "max component error color " + fmt("%.2e", e_color) + ", gamut " + fmt("%.2e", e_gamut) + ", gamma " +
             fmt("%.2e", e_gamma));
}

// Nearest level in the scheme's own metric; first minimum wins.
std::size_t oracle_code(double v, const std::vector<double>& levels, const std::function<double(double)>& metric) {
  const double mv = metric(v);
  std::size_t best = 0;
  double best_d = std::abs(mv - metric(levels[0]));
  for (std::size_t k = 1; k < levels.size(); ++k) {
    const double d = std::abs(mv - metric(levels[k]));
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

void criterion_3() {
  const boost::math::normal_distribution<double> std_normal;
  const vp::LogNormalFit fit{-2.0, 0.5, 0, 0};
  const double floor = vp::kDefaultLogFloor;
  auto log_cdf = [&](double v) { return v <= 0.0 ? 0.0 : boost::math::cdf(std_normal, (std::log(v) - fit.mu) / fit.sigma); };
  const double below = log_cdf(floor);
  const double within = log_cdf(1.0) - below;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_real_distribution<double> e(-14.0, 0.0);

  std::size_t mismatches = 0;
  std::size_t invariant_breaks = 0;
  std::size_t checked = 0;
  for (int bits = 1; bits <= 8; ++bits) {
    for (auto scheme : {vp::QuantScheme::linear, vp::QuantScheme::logarithmic, vp::QuantScheme::cdf}) {
      const auto q = scheme == vp::QuantScheme::cdf ? vp::cdf_levels(fit, bits, floor) : vp::make_quantizer(scheme, bits, floor);
      std::function<double(double)> metric;
      switch (scheme) {
        case vp::QuantScheme::linear: metric = [](double v) { return v; }; break;
        case vp::QuantScheme::logarithmic: metric = [&](double v) { return std::log(std::max(v, floor)); }; break;
        default:
          metric = [&](double v) { return std::clamp((log_cdf(std::clamp(v, floor, 1.0)) - below) / within, 0.0, 1.0); };
      }
      std::vector<double> values(10000);
      for (std::size_t i = 0; i < values.size(); ++i) values[i] = i % 2 ? u(rng) : std::exp2(e(rng));
      for (double v : values) {
        const auto got = vp::quantize_value(v, q);
        const auto want = oracle_code(v, q.levels, metric);
        if (got.code != want || got.level != q.levels[want]) ++mismatches;
        const auto again = vp::quantize_value(got.level, q);
        if (again.code != got.code || again.level != got.level) ++invariant_breaks;
        ++checked;
      }
      std::sort(values.begin(), values.end());
      for (std::size_t i = 1; i < values.size(); ++i) {
        if (vp::quantize_value(values[i], q).code < vp::quantize_value(values[i - 1], q).code) ++invariant_breaks;
      }
    }
  }
  report(3, "quantizer codes match the nearest-level oracle (linear, log, cdf; n = 1..8)",
         mismatches == 0 && invariant_breaks == 0,
         std::to_string(checked) + " values, " + std::to_string(mismatches) + " mismatches, " +
             std::to_string(invariant_breaks) + " idempotence/monotonicity violations");
}

std::vector<double> lognormal_draws(std::size_t n, double mu, double sigma, std::uint64_t seed) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(mu + sigma * vp::counter_normal(seed, i));
  return out;
}

void criterion_4() {
  const double mu = -2.0;
  const double sigma = 0.5;
  const auto fit = vp::fit_lognormal(lognormal_draws(1000000, mu, sigma, 41));
  const auto fresh = lognormal_draws(1000000, mu, sigma, 42);
  bool ok = true;
  std::string detail;
  for (int bits : {3, 4, 5}) {
    const auto q = vp::cdf_levels(fit, bits);
    std::vector<std::uint64_t> counts(q.level_count(), 0);
    vp::accumulate_codes(fresh, q, counts);
    const double expect = 1.0 / static_cast<double>(counts.size());
    double worst_rel = 0.0;
    double entropy = 0.0;
    for (auto c : counts) {
      const double p = static_cast<double>(c) / static_cast<double>(fresh.size());
      worst_rel = std::max(worst_rel, std::abs(p - expect) / expect);
      if (p > 0.0) entropy -= p * std::log2(p);
    }
    ok = ok && worst_rel <= 0.10 && entropy >= 0.98 * bits;
    detail += "n=" + std::to_string(bits) + ": max rel dev " + fmt("%.2f%%", 100.0 * worst_rel) + ", entropy " +
              fmt("%.4f", entropy) + " bits; ";
  }
  report(4, "cdf codes are uniformly used on fresh log-normal draws", ok, detail);
}

void criterion_5() {
  constexpr std::size_t kN = 100000;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> lo_mode(0.25, 0.06);
  std::normal_distribution<double> hi_mode(0.7, 0.08);
  std::vector<std::pair<std::string, std::vector<double>>> sets;
  {
    std::vector<double> s(kN);
    for (double& v : s) v = u(rng);
    sets.emplace_back("uniform", std::move(s));
  }
  {
    auto s = lognormal_draws(kN, -2.0, 0.5, 55);
    for (double& v : s) v = std::min(v, 1.0);
    sets.emplace_back("log-normal", std::move(s));
  }
  {
    std::vector<double> s(kN);
    for (double& v : s) v = std::clamp(u(rng) < 0.5 ? lo_mode(rng) : hi_mode(rng), 0.0, 1.0);
    sets.emplace_back("bimodal", std::move(s));
  }

  bool ok = true;
  std::string detail;
  for (const auto& [name, samples] : sets) {
    const auto fit = vp::fit_lognormal(samples);
    for (int bits : {2, 3, 4, 5}) {
      const auto lm = vp::lloyd_max(samples, bits);
      const double lin = vp::quantizer_mse(vp::make_quantizer(vp::QuantScheme::linear, bits), samples);
      const double cdf = vp::quantizer_mse(vp::cdf_levels(fit, bits), samples);
      bool monotone = true;
      for (std::size_t i = 1; i < lm.mse_history.size(); ++i) {
        monotone = monotone && lm.mse_history[i] <= lm.mse_history[i - 1];
      }
      const bool pass = lm.mse <= lin && lm.mse <= cdf + 1e-9 && monotone;
      if (!pass) {
        detail += name + " n=" + std::to_string(bits) + " fails (lloyd " + fmt("%.3e", lm.mse) + ", linear " +
                  fmt("%.3e", lin) + ", cdf " + fmt("%.3e", cdf) + (monotone ? "" : ", MSE rose") + "); ";
      }
      ok = ok && pass;
    }
  }
  std::vector<double> dense(kN);
  for (std::size_t i = 0; i < kN; ++i) dense[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(kN);
  const auto one_bit = vp::lloyd_max(dense, 1);
  const double dev = std::max(std::abs(one_bit.spec.levels[0] - 0.25), std::abs(one_bit.spec.levels[1] - 0.75));
  ok = ok && dev <= 1e-3;
  detail += "3 distributions x n=2..5 compared; uniform 1-bit levels {" + fmt("%.6f", one_bit.spec.levels[0]) + ", " +
            fmt("%.6f", one_bit.spec.levels[1]) + "}";
  report(5, "Lloyd-Max dominates linear and cdf designs", ok, detail);
}

void criterion_6() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<vp::RawImage> dataset;
  for (std::uint64_t i = 0; i < 32; ++i) dataset.push_back(vp::synth::lognormal_raw(64, 64, -2.0, 0.5, vp::mix_key(6, i)));
  const auto r = vp::energy_report(dataset, vp::AdcConfig::parse("linear:12"), vp::AdcConfig::parse("log:5"));
  const double secs = seconds_since(t0);
  std::printf("%s", vp::format_energy_table(r).c_str());
  report(6, "log 5-bit vs linear 12-bit ADC energy savings", r.savings_percent >= 99.0 && secs <= 10.0,
         "model savings " + fmt("%.4f%%", r.savings_percent) + ", sensor-level " +
             fmt("%.4f%%", r.sensor_savings_percent) + ", reference figure " +
             fmt("%.2f%%", vp::kReferenceSavingsPercent) + ", " + fmt("%.2f s", secs));
}

// Replays the SAR search for code m: trial i tentatively sets bit i by
// charging its capacitor; a comparator "no" discharges it again.
double sar_trace_energy(unsigned m, int bits) {
  double e = 0.0;
  unsigned acc = 0;
  for (int i = bits - 1; i >= 0; --i) {
    const unsigned trial = acc | (1u << i);
    const double cap = static_cast<double>(1u << i);
    e += cap;
    if (trial <= m) {
      acc = trial;
    } else {
      e += cap;
    }
  }
  return e;
}

void criterion_7() {
  std::size_t mismatches = 0;
  for (int n = 1; n <= 4; ++n) {
    const auto model = vp::sar_code_energy(n);
    for (unsigned m = 0; m < (1u << n); ++m) mismatches += model.per_code_energy[m] != sar_trace_energy(m, n);
  }
  const auto two = vp::sar_code_energy(2).per_code_energy;
  const bool hand = two == std::vector<double>{6, 5, 4, 3};
  std::size_t chain_breaks = 0;
  std::size_t pairs = 0;
  for (int n = 1; n <= 10; ++n) {
    const auto e = vp::sar_code_energy(n).per_code_energy;
    for (unsigned m = 0; m < (1u << n); ++m) {
      for (int b = 0; b < n; ++b) {
        if (m & (1u << b)) continue;
        ++pairs;
        chain_breaks += !(e[m | (1u << b)] < e[m]);
      }
    }
  }
  report(7, "SAR per-code energies and chain monotonicity", mismatches == 0 && hand && chain_breaks == 0,
         "n<=4 trace mismatches " + std::to_string(mismatches) + ", n=2 -> {6,5,4,3} " + (hand ? "yes" : "no") +
             ", " + std::to_string(pairs) + " chain steps checked, " + std::to_string(chain_breaks) + " violations");
}

// Whole-image scans, independent of the neighborhood shortcuts in the library.
vp::RgbImage oracle_bilinear(const vp::RawImage& raw) {
  vp::RgbImage out(raw.width(), raw.height());
  const auto h = static_cast<long>(raw.height());
  const auto w = static_cast<long>(raw.width());
  for (long r = 0; r < h; ++r) {
    for (long c = 0; c < w; ++c) {
      for (std::size_t k = 0; k < 3; ++k) {
        if (static_cast<std::size_t>(raw.channel_at(r, c)) == k) {
          out.at(r, c, k) = raw.at(r, c);
          continue;
        }
        double sum = 0.0;
        int n = 0;
        for (long rr = 0; rr < h; ++rr) {
          for (long cc = 0; cc < w; ++cc) {
            if (std::abs(rr - r) <= 1 && std::abs(cc - c) <= 1 && static_cast<std::size_t>(raw.channel_at(rr, cc)) == k) {
              sum += raw.at(rr, cc);
              ++n;
            }
          }
        }
        out.at(r, c, k) = sum / n;
      }
    }
  }
  return out;
}

vp::RgbImage oracle_nearest(const vp::RawImage& raw) {
  vp::RgbImage out(raw.width(), raw.height());
  const auto h = static_cast<long>(raw.height());
  const auto w = static_cast<long>(raw.width());
  for (long r = 0; r < h; ++r) {
    for (long c = 0; c < w; ++c) {
      for (std::size_t k = 0; k < 3; ++k) {
        long best = std::numeric_limits<long>::max();
        for (long rr = 0; rr < h; ++rr) {
          for (long cc = 0; cc < w; ++cc) {
            const long d2 = (rr - r) * (rr - r) + (cc - c) * (cc - c);
            if (static_cast<std::size_t>(raw.channel_at(rr, cc)) == k && d2 < best) {
              best = d2;
              out.at(r, c, k) = raw.at(rr, cc);
            }
          }
        }
      }
    }
  }
  return out;
}

// Tile (r, g1, g2, b) -> (r, g1, b), where g1 is the green on the red row.
vp::RgbImage oracle_subsample(const vp::RawImage& raw) {
  vp::RgbImage out(raw.width() / 2, raw.height() / 2);
  for (std::size_t r = 0; r < raw.height(); r += 2) {
    for (std::size_t c = 0; c < raw.width(); c += 2) {
      std::size_t red_row = 0;
      for (std::size_t dr = 0; dr < 2; ++dr) {
        for (std::size_t dc = 0; dc < 2; ++dc) {
          if (raw.channel_at(r + dr, c + dc) == vp::Channel::red) red_row = dr;
        }
      }
      for (std::size_t dr = 0; dr < 2; ++dr) {
        for (std::size_t dc = 0; dc < 2; ++dc) {
          const auto ch = raw.channel_at(r + dr, c + dc);
          if (ch == vp::Channel::red) out.at(r / 2, c / 2, 0) = raw.at(r + dr, c + dc);
          if (ch == vp::Channel::blue) out.at(r / 2, c / 2, 2) = raw.at(r + dr, c + dc);
          if (ch == vp::Channel::green && dr == red_row) out.at(r / 2, c / 2, 1) = raw.at(r + dr, c + dc);
        }
      }
    }
  }
  return out;
}

void criterion_8() {
  std::mt19937_64 rng(8);
  std::size_t cases = 0;
  std::size_t bad = 0;
  bool dims = true;
  for (auto layout : kLayouts) {
    const vp::BayerPattern p{layout};
    for (int trial = 0; trial < 25; ++trial) {
      const auto small = random_raw(4, 4, p, rng);
      const auto sub = vp::demosaic(small, vp::DemosaicMethod::subsample);
      dims = dims && sub.width() == 2 && sub.height() == 2;
      bad += !(sub == oracle_subsample(small));
      const auto raw = random_raw(6, 6, p, rng);
      bad += !(vp::demosaic(raw, vp::DemosaicMethod::bilinear) == oracle_bilinear(raw));
      bad += !(vp::demosaic(raw, vp::DemosaicMethod::nearest_neighbor) == oracle_nearest(raw));
      bad += !(vp::demosaic(raw, vp::DemosaicMethod::subsample) == oracle_subsample(raw));
      cases += 4;
    }
  }
  const auto wide = vp::demosaic(random_raw(10, 6, {}, rng), vp::DemosaicMethod::subsample);
  dims = dims && wide.width() == 5 && wide.height() == 3;
  report(8, "demosaic variants match brute-force oracles; subsample halves dimensions", bad == 0 && dims,
         std::to_string(cases) + " comparisons over 4 Bayer layouts, " + std::to_string(bad) + " mismatches");
}

void criterion_9() {
  std::mt19937_64 rng(9);
  double worst_mean = 0.0;
  std::size_t bad = 0;
  for (auto layout : kLayouts) {
    const vp::BayerPattern p{layout};
    for (int trial = 0; trial < 50; ++trial) {
      const auto raw = random_raw(8, 8, p, rng);
      const auto binned = vp::pixel_bin(raw, 2);
      // Oracle: average each phase's four same-color sites in every 4x4 macro-tile.
      vp::RawImage want(4, 4, p);
      for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
          double sum = 0.0;
          for (std::size_t rr = 0; rr < 8; ++rr) {
            for (std::size_t cc = 0; cc < 8; ++cc) {
              if (rr / 4 == r / 2 && cc / 4 == c / 2 && rr % 2 == r % 2 && cc % 2 == c % 2) sum += raw.at(rr, cc);
            }
          }
          want.at(r, c) = sum / 4.0;
        }
      }
      bad += !std::equal(want.data().begin(), want.data().end(), binned.data().begin());
      for (auto ch : {vp::Channel::red, vp::Channel::green, vp::Channel::blue}) {
        auto mean = [ch](const vp::RawImage& img) {
          double s = 0.0;
          int n = 0;
          for (std::size_t r = 0; r < img.height(); ++r) {
            for (std::size_t c = 0; c < img.width(); ++c) {
              if (img.channel_at(r, c) == ch) {
                s += img.at(r, c);
                ++n;
              }
            }
          }
          return s / n;
        };
        worst_mean = std::max(worst_mean, std::abs(mean(raw) - mean(binned)));
      }
    }
  }
  report(9, "pixel binning preserves channel means and matches the averaging oracle", bad == 0 && worst_mean <= 1e-12,
         "200 random 8x8 mosaics, " + std::to_string(bad) + " oracle mismatches, worst mean drift " +
             fmt("%.2e", worst_mean));
}

void criterion_10() {
  constexpr std::size_t kDraws = 1000000;
  const double a = 0.01;
  const double b = 0.001;
  std::vector<double> x(kDraws, 0.5);
  vp::add_noise(x, a, b, 1010, 1);
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= kDraws;
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  var /= (kDraws - 1);
  const double target = a * 0.5 + b;
  const double mean_tol = 3.0 * std::sqrt(target / kDraws);
  bool reproducible = true;
  for (unsigned workers : {2u, 3u, 8u}) {
    std::vector<double> y(kDraws, 0.5);
    vp::add_noise(y, a, b, 1010, workers);
    reproducible = reproducible && std::memcmp(x.data(), y.data(), kDraws * sizeof(double)) == 0;
  }
  const double rel = std::abs(var - target) / target;
  report(10, "signal-dependent noise statistics and reproducibility",
         rel <= 0.03 && std::abs(mean - 0.5) <= mean_tol && reproducible,
         "variance " + fmt("%.6f", var) + " (rel dev " + fmt("%.2f%%", 100.0 * rel) + "), mean " + fmt("%.6f", mean) +
             ", bitwise identical across 1/2/3/8 workers: " + (reproducible ? "yes" : "no"));
}

std::string file_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Relative path -> contents of every file below root.
std::vector<std::pair<std::string, std::string>> tree(const fs::path& root) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out.emplace_back(fs::relative(e.path(), root).string(), file_bytes(e.path()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(VISIONPIPE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void criterion_11() {
  const auto in = scratch("in");
  for (std::size_t i = 0; i < 16; ++i) {
    vp::save_rgb(vp::synth::to_8bit(vp::synth::smooth_scene(i, 48, 32, 11)), (in / ("img_" + std::to_string(i) + ".ppm")).string());
  }
  for (std::uint64_t i = 0; i < 4; ++i) {
    vp::save_raw(vp::requantize(vp::synth::lognormal_raw(48, 32, -2.0, 0.5, vp::mix_key(11, i)), 12),
                 (in / ("raw_" + std::to_string(i) + ".pgm")).string());
  }

  vp::JobConfig job;
  job.input_dir = in.string();
  job.inverse = vp::InverseConfig::full(true, 12, 77);
  job.forward = vp::make_forward_config({"denoise:0.05:3:5", "demosaic:bilinear", "color", "gamut", "gamma"});
  std::vector<std::vector<std::pair<std::string, std::string>>> trees;
  bool all_ok = true;
  for (unsigned workers : {1u, 8u}) {
    job.workers = workers;
    job.output_dir = scratch("out_w" + std::to_string(workers)).string();
    const auto s = vp::convert_batch(job, vp::BatchMode::convert);
    all_ok = all_ok && s.success() && s.converted == 20;
    trees.push_back(tree(job.output_dir));
  }
  const bool deterministic = all_ok && trees[0] == trees[1] && trees[0].size() == 20;

  vp::JobConfig identity;
  identity.input_dir = in.string();
  identity.output_dir = scratch("identity").string();
  identity.workers = 4;
  const auto s = vp::convert_batch(identity, vp::BatchMode::convert);
  const bool noop = s.success() && tree(in) == tree(identity.output_dir);

  const auto cfg_dir = scratch("configs");
  const std::vector<std::string> bad_configs = {
      R"({"input": ")" + in.string() + R"(", "output": "/tmp/x", "forward": ["gamutt"]})",
      R"({"input": ")" + in.string() + R"(", "output": "/tmp/x", "forward": ["gamma", "color"]})",
      R"({"input": ")" + in.string() + R"(", "output": "/tmp/x", "colour": true})",
      R"({"input": ")" + in.string() + R"(", "output": "/tmp/x", "forward": ["quantize:linear:0"]})",
      R"({"input": ")" + in.string() + R"(", "output": "/tmp/x", "inverse": {"stages": ["remosaic", "inv_gamma"]}})",
      R"({"input": ")" + in.string() + R"(", "output": "/tmp/x", "workers": 0})",
      "{ not json",
  };
  std::size_t exit2 = 0;
  for (std::size_t i = 0; i < bad_configs.size(); ++i) {
    const auto path = cfg_dir / ("bad_" + std::to_string(i) + ".json");
    std::ofstream(path) << bad_configs[i];
    exit2 += run_cli("convert --config " + path.string()) == 2;
  }
  exit2 += run_cli("convert --config " + (cfg_dir / "missing.json").string()) == 2;
  const std::size_t bad_total = bad_configs.size() + 1;

  report(11, "determinism across workers, identity no-op, invalid configs exit 2",
         deterministic && noop && exit2 == bad_total,
         std::string("20-image trees identical for workers 1 and 8: ") + (deterministic ? "yes" : "no") +
             ", identity no-op: " + (noop ? "yes" : "no") + ", exit code 2 for " + std::to_string(exit2) + "/" +
             std::to_string(bad_total) + " invalid configs");
  fs::remove_all(in.parent_path());
}

}  // namespace

int main() {
  const std::vector<void (*)()> criteria = {criterion_1, criterion_2, criterion_3, criterion_4,  criterion_5, criterion_6,
                                            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11};
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    try {
      criteria[i]();
    } catch (const std::exception& e) {
      report(static_cast<int>(i + 1), "raised an exception", false, e.what());
    }
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
