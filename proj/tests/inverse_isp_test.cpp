#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_util.hpp"

namespace vp = visionpipe;

TEST(GammaExpand, KnownValuesAndInverse) {
  std::mt19937_64 rng(1);
  const auto img = vp::test::random_rgb(8, 8, rng, 1e-6, 1.0);
  EXPECT_EQ(vp::gamma_expand(img, 1.0, 1.0), img);
  EXPECT_DOUBLE_EQ(vp::gamma_expand(vp::RgbImage(1, 1, 0.5), 1.0, 0.5).at(0, 0, 0), 0.25);
  for (double a : {1.0, 0.8}) {
    const auto scaled = vp::map_samples(img, [a](double v) { return v * a; });  // keeps A v^g inside [0, 1]
    const auto back = vp::gamma_expand(vp::gamma_compress(scaled, a, 0.4), a, 0.4);
    for (std::size_t i = 0; i < img.data().size(); ++i) EXPECT_NEAR(back.data()[i], scaled.data()[i], 1e-9);
  }
}

TEST(InverseGamut, ClosedFormAndInverse) {
  EXPECT_NEAR(vp::inverse_gamut_value(0.5 * 0.95 / 0.9, 0.1), 0.5, 1e-15);
  std::mt19937_64 rng(2);
  const auto img = vp::test::random_rgb(10, 10, rng);
  EXPECT_EQ(vp::inverse_gamut(img, 0.0), img);
  for (double s : {0.01, 0.1, 0.3, 0.5}) {
    const auto back = vp::inverse_gamut(vp::gamut_map(img, s), s);
    for (std::size_t i = 0; i < img.data().size(); ++i) EXPECT_NEAR(back.data()[i], img.data()[i], 1e-9);
  }
  // Quadratic-formula root, written out independently.
  for (double v : {0.0, 0.1, 0.5, 0.9, 1.0}) {
    const double s = 0.2;
    const double w = (1.0 - std::sqrt(1.0 - 4.0 * s * (1.0 - s) * v)) / (2.0 * s);
    EXPECT_NEAR(vp::inverse_gamut_value(v, s), w, 1e-12);
  }
}

TEST(InverseColor, IdentityInverseAndSingular) {
  std::mt19937_64 rng(3);
  const auto img = vp::test::random_rgb(6, 6, rng, 0.1, 0.6);
  EXPECT_EQ(vp::inverse_color_transform(img, vp::identity3()), img);
  const vp::Matrix3 m{{{0.9, 0.1, 0.05}, {0.1, 0.8, 0.1}, {0.02, 0.1, 0.9}}};
  const auto back = vp::inverse_color_transform(vp::color_transform(img, m), m);
  for (std::size_t i = 0; i < img.data().size(); ++i) EXPECT_NEAR(back.data()[i], img.data()[i], 1e-9);
  EXPECT_THROW(vp::inverse_color_transform(img, vp::Matrix3{}), std::domain_error);
}

TEST(Remosaic, ConstantTilesAndSiteSelection) {
  vp::RgbImage flat(4, 4);
  for (std::size_t i = 0; i < flat.data().size(); i += 3) {
    flat.data()[i] = 0.1;
    flat.data()[i + 1] = 0.2;
    flat.data()[i + 2] = 0.3;
  }
  const auto raw = vp::remosaic(flat, {});
  EXPECT_EQ(raw.at(0, 0), 0.1);
  EXPECT_EQ(raw.at(0, 1), 0.2);
  EXPECT_EQ(raw.at(1, 0), 0.2);
  EXPECT_EQ(raw.at(1, 1), 0.3);
  EXPECT_TRUE(raw.continuous());
  const auto flat_back = vp::demosaic(vp::remosaic(vp::RgbImage(6, 4, 0.4), {}), vp::DemosaicMethod::bilinear);
  for (double v : flat_back.data()) EXPECT_NEAR(v, 0.4, 1e-15);

  std::mt19937_64 rng(4);
  for (auto layout : vp::test::kLayouts) {
    const vp::BayerPattern p(layout);
    const auto img = vp::test::random_rgb(6, 4, rng);
    const auto mosaic = vp::remosaic(img, p);
    for (std::size_t r = 0; r < 4; ++r) {
      for (std::size_t c = 0; c < 6; ++c) {
        EXPECT_EQ(mosaic.at(r, c), img.at(r, c, static_cast<std::size_t>(p.at(r, c))));
      }
    }
  }
  EXPECT_THROW(vp::remosaic(vp::RgbImage(3, 4), {}), std::invalid_argument);
}

TEST(InjectNoise, ZeroCoefficientsAndDeterminism) {
  std::mt19937_64 rng(5);
  const auto raw = vp::requantize(vp::test::random_raw(16, 16, {}, rng), 12);
  EXPECT_EQ(vp::inject_noise(raw, 0.0, 0.0, 9), raw);
  const auto a = vp::inject_noise(raw, 0.01, 0.001, 9, 1);
  const auto b = vp::inject_noise(raw, 0.01, 0.001, 9, 4);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, vp::inject_noise(raw, 0.01, 0.001, 10));
  EXPECT_TRUE(a.continuous());
  EXPECT_THROW(vp::inject_noise(raw, -0.1, 0.0, 1), std::invalid_argument);
}

TEST(InjectNoise, MonteCarloMoments) {
  constexpr std::size_t n = 1000000;
  std::vector<double> x(n, 0.5);
  vp::add_noise(x, 0.01, 0.001, 77, 4);
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  var /= n - 1;
  EXPECT_NEAR(var, 0.006, 0.03 * 0.006);
  EXPECT_NEAR(mean, 0.5, 3.0 * std::sqrt(0.006 / n));
}

TEST(Requantize, NearestLevelAndIdempotence) {
  vp::RawImage raw(2, 2, std::vector<double>{0.3, 0.0, 1.0, 0.5});
  const auto q = vp::requantize(raw, 2);
  EXPECT_DOUBLE_EQ(q.at(0, 0), 1.0 / 3.0);
  EXPECT_EQ(q.bit_depth(), 2);
  EXPECT_EQ(vp::requantize(q, 2), q);

  std::mt19937_64 rng(6);
  const auto r16 = vp::requantize(vp::test::random_raw(8, 8, {}, rng), 16);
  EXPECT_EQ(vp::requantize(r16, 16), r16);

  const auto r = vp::test::random_raw(8, 8, {}, rng);
  for (int bits : {1, 4, 8, 12}) {
    const auto rq = vp::requantize(r, bits);
    const double half = 0.5 / ((1 << bits) - 1);
    for (std::size_t i = 0; i < r.data().size(); ++i) EXPECT_LE(std::abs(rq.data()[i] - r.data()[i]), half + 1e-15);
  }
}

TEST(RunInverse, StageOrderAndRemosaicOnly) {
  std::mt19937_64 rng(7);
  const auto img = vp::test::random_rgb(4, 4, rng);
  vp::InverseConfig only;
  only.stages = {vp::InverseStage::remosaic};
  EXPECT_EQ(vp::run_inverse(img, vp::default_profile(), only), vp::remosaic(img, {}));

  vp::InverseConfig none;
  EXPECT_THROW(vp::run_inverse(img, vp::default_profile(), none), vp::PipelineError);

  vp::InverseConfig rgb_noise;
  rgb_noise.stages = {vp::InverseStage::inv_gamma, vp::InverseStage::noise};
  const auto any = vp::apply_inverse(img, vp::default_profile(), rgb_noise);
  EXPECT_TRUE(std::holds_alternative<vp::RgbImage>(any));

  vp::InverseConfig bad;
  bad.stages = {vp::InverseStage::remosaic, vp::InverseStage::inv_color};
  EXPECT_THROW(vp::validate_inverse(bad), vp::ConfigError);
  bad.stages = {vp::InverseStage::requantize};
  bad.target_bits = 14;
  EXPECT_THROW(vp::validate_inverse(bad, 12), vp::ConfigError);
}

TEST(RunInverse, ManualChainAndDeterminism) {
  const auto p = vp::default_profile();
  const auto img = vp::synth::smooth_scene(0, 12, 8, 4);
  const auto config = vp::InverseConfig::full(true, 10, 99);
  auto manual = vp::gamma_expand(img, p.gamma_scale, p.gamma_exponent);
  manual = vp::inverse_gamut(manual, p.gamut_strength);
  manual = vp::inverse_color_transform(manual, p.color_matrix);
  auto raw = vp::remosaic(manual, p.pattern);
  raw = vp::requantize(vp::inject_noise(raw, p.noise_a, p.noise_b, 99), 10);
  const auto got = vp::run_inverse(img, p, config);
  EXPECT_EQ(got, raw);
  EXPECT_EQ(got, vp::run_inverse(img, p, config, 8));
}
