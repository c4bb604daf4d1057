#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"
#include "wmx/ensemble.hpp"
#include "wmx/error.hpp"

namespace wmx {
namespace {

using testing::bundled_corpus;
using testing::FixedResidualWatermarker;
using testing::LsbWatermarker;

TEST(PsnrClip, UniformDifferenceExample) {
  const Image original(16, 16, 3, 100.0), marked(16, 16, 3, 116.0);
  const double target_mse = 255.0 * 255.0 * 1e-3;
  EXPECT_NEAR(target_mse, 65.0250, 1e-9);
  const double scale = std::sqrt(target_mse / 256.0);
  EXPECT_NEAR(scale, 0.5040, 1e-4);
  const Image clipped = psnr_clip(marked, original, 30.0);
  EXPECT_NEAR(psnr(clipped, original), 30.0, 0.01);
  EXPECT_NEAR(clipped.at(0, 0, 0), 100.0 + 16.0 * scale, 1e-9);
}

TEST(PsnrClip, AlreadyAboveTargetIsUnchanged) {
  const Image original(8, 8, 3, 100.0);
  std::vector<double> s(original.sample_count(), 100.0);
  s[0] = 100.0 + std::sqrt(192.0 * 255.0 * 255.0 * std::pow(10.0, -4.5));
  const Image marked = Image::from_samples(8, 8, 3, s);
  EXPECT_NEAR(psnr(marked, original), 45.0, 1e-9);
  EXPECT_EQ(psnr_clip(marked, original, 40.0), marked);
}

TEST(PsnrClip, ZeroResidualIsUnchanged) {
  const Image a = bundled_corpus().images[0];
  for (double t : {-10.0, 0.0, 30.0, 90.0}) EXPECT_EQ(psnr_clip(a, a, t), a);
}

TEST(PsnrClip, NonFiniteTargetThrows) {
  const Image a(4, 4, 3, 1.0);
  EXPECT_THROW(psnr_clip(a, a, kInfinitePsnr), ConfigError);
  EXPECT_THROW(psnr_clip(a, a, std::nan("")), ConfigError);
}

TEST(PsnrClip, NeverBelowMinOfCurrentAndTarget) {
  Rng rng(19);
  for (int t = 0; t < 200; ++t) {
    const Image original = testing::random_image(rng, 10, 10, 3, 30, 220);
    const int amp = static_cast<int>(rng.between(1, 60));
    std::vector<double> s(original.samples().begin(), original.samples().end());
    for (auto& v : s) v += static_cast<double>(rng.between(-amp, amp));
    const Image marked = Image::from_samples(10, 10, 3, s);
    const double target = rng.uniform(10.0, 60.0);
    const double current = psnr(marked, original);
    const Image clipped = psnr_clip(marked, original, target);
    const double after = psnr(clipped, original);
    EXPECT_GE(after, std::min(current, target) - 1e-9);
    EXPECT_GE(after, current - 1e-9);
    // Shrinking the residual keeps every sample between original and marked, so nothing clamps.
    if (current < target) {
      EXPECT_NEAR(after, target, 0.05);
    }
  }
}

TEST(ClipTarget, Interpolation) {
  EXPECT_EQ(clip_target(30.0, 40.0, 0.0), 30.0);
  EXPECT_EQ(clip_target(40.0, 30.0, 1.0), 40.0);
  EXPECT_DOUBLE_EQ(clip_target(30.0, 40.0, 0.5), 35.0);
  EXPECT_DOUBLE_EQ(clip_target(30.0, 40.0, -0.2), 28.0);
  EXPECT_DOUBLE_EQ(clip_target(30.0, 40.0, 1.2), 42.0);
}

TEST(ClipTarget, MonotoneInStrength) {
  Rng rng(4);
  for (int t = 0; t < 500; ++t) {
    const double p1 = rng.uniform(20.0, 70.0), p2 = rng.uniform(20.0, 70.0);
    const double s = rng.uniform(-1.0, 2.0), ds = rng.uniform(0.0, 1.0);
    EXPECT_LE(clip_target(p1, p2, s), clip_target(p1, p2, s + ds) + 1e-12);
  }
}

TEST(ClipToStrength, TargetsMeasuredStandalone) {
  const Image cover = bundled_corpus().images[2];
  const auto w1 = make_watermarker(WatermarkerSpec::defaults(Method::spread_spectrum, 1));
  const auto w2 = make_watermarker(WatermarkerSpec::defaults(Method::dwt, 2));
  Rng rng(5);
  const Bits m1 = random_bits(rng, 32), m2 = random_bits(rng, 32);
  const ClipTarget t = measure_clip_target(cover, *w1, *w2, m1, m2, 0.0);
  EXPECT_DOUBLE_EQ(t.psnr1, psnr(w1->embed(cover, m1), cover));
  EXPECT_DOUBLE_EQ(t.psnr2, psnr(w2->embed(cover, m2), cover));
  EXPECT_DOUBLE_EQ(t.target, std::min(t.psnr1, t.psnr2));
  const Image marked = parallel_ensemble(cover, *w1, *w2, m1, m2);
  const Image clipped = clip_to_strength(marked, cover, 1.0, *w1, *w2, m1, m2);
  EXPECT_GE(psnr(clipped, cover), std::min(psnr(marked, cover), std::max(t.psnr1, t.psnr2)) - 1e-9);
}

TEST(Parallel, CommutesExactly) {
  const Image cover = bundled_corpus().images[4];
  Rng rng(6);
  const auto a = make_watermarker(WatermarkerSpec::defaults(Method::dct, 11));
  const auto b = make_watermarker(WatermarkerSpec::defaults(Method::spread_spectrum, 12));
  const Bits ma = random_bits(rng, 32), mb = random_bits(rng, 32);
  EXPECT_EQ(parallel_ensemble(cover, *a, *b, ma, mb), parallel_ensemble(cover, *b, *a, mb, ma));
}

TEST(Parallel, OpposedResidualsCancel) {
  const Image cover = testing::mid_gray(32, 32);
  const FixedResidualWatermarker up("up", 1, 6.0), down("down", 1, -6.0);
  EXPECT_EQ(parallel_ensemble(cover, up, down, {0}, {0}), cover);
  EXPECT_EQ(parallel_ensemble(cover, up, up, {0}, {0}), up.embed(cover, {0}));
}

TEST(Series, PassThroughSecondKeepsFirst) {
  const Image cover = bundled_corpus().images[6];
  const auto wm = make_watermarker(WatermarkerSpec::defaults(Method::dwtdct, 3));
  const testing::ConstantWatermarker none(Bits{});
  Rng rng(7);
  const Bits m = random_bits(rng, 32);
  EXPECT_EQ(series_ensemble(cover, *wm, none, m, {}), wm->embed(cover, m));
}

TEST(Series, SameQimMethodAndSecretIsSingleEmbed) {
  const Image cover = bundled_corpus().images[7];
  Rng rng(8);
  for (Method m : {Method::dct, Method::dwt, Method::dwtdct, Method::dwtdctsvd}) {
    const auto wm = make_watermarker(WatermarkerSpec::defaults(m, 21));
    const Bits s = random_bits(rng, 32);
    EXPECT_EQ(series_ensemble(cover, *wm, *wm, s, s), wm->embed(cover, s)) << to_string(m);
  }
}

TEST(Series, SecretLengthChecked) {
  const Image cover = testing::mid_gray(64, 64);
  const LsbWatermarker a("a", 4, 0, 3);
  EXPECT_THROW(series_ensemble(cover, a, a, Bits(3, 0), Bits(4, 0)), LengthError);
  EXPECT_THROW(parallel_ensemble(cover, a, a, Bits(4, 0), Bits(5, 0)), LengthError);
}

TEST(EnsembleSpecs, CapacityBookkeeping) {
  EnsembleSpec spec;
  spec.first = make_watermarker(WatermarkerSpec::defaults(Method::dct, 1));
  spec.second = make_watermarker(WatermarkerSpec::defaults(Method::dwt, 2));
  EXPECT_EQ(spec.raw_capacity(), 64U);
  EXPECT_EQ(spec.effective_capacity(), 64U);
  spec.code = ecc::reed_muller_1(6);
  EXPECT_EQ(spec.effective_capacity(), 7U);
  spec.validate();
  spec.code = ecc::hamming(3);
  EXPECT_THROW(spec.validate(), ConfigError);
  spec.code.reset();
  spec.strength = std::nan("");
  EXPECT_THROW(spec.validate(), ConfigError);
  EXPECT_EQ(parse_ensemble_mode("series"), EnsembleMode::series);
  EXPECT_THROW(parse_ensemble_mode("stacked"), ConfigError);
}

EnsembleSpec lsb_pair(bool flip_second) {
  EnsembleSpec spec;
  spec.first = std::make_shared<LsbWatermarker>("a", 4, 0, 2);
  const auto second = std::make_shared<LsbWatermarker>("b", 4, 1, 2);
  spec.second = flip_second ? WatermarkerPtr(std::make_shared<testing::FlipOneWatermarker>(second)) : second;
  spec.mode = EnsembleMode::series;
  spec.code = ecc::extended_hamming(3);
  return spec;
}

TEST(EnsembleCodes, OneWrongBitStillDecodes) {
  const Image cover = testing::mid_gray(16, 16);
  for (std::uint64_t m = 0; m < 16; ++m) {
    const Bits message{static_cast<std::uint8_t>(m & 1), static_cast<std::uint8_t>((m >> 1) & 1),
                       static_cast<std::uint8_t>((m >> 2) & 1), static_cast<std::uint8_t>((m >> 3) & 1)};
    const Image marked = ensemble_embed(lsb_pair(false), cover, message);
    const EnsembleReadout clean = ensemble_extract(lsb_pair(false), marked);
    ASSERT_FALSE(clean.failed());
    EXPECT_EQ(*clean.message, message);
    EXPECT_EQ(clean.corrections, 0U);
    const EnsembleReadout noisy = ensemble_extract(lsb_pair(true), marked);
    ASSERT_FALSE(noisy.failed());
    EXPECT_EQ(*noisy.message, message);
    EXPECT_EQ(noisy.corrections, 1U);
    EXPECT_TRUE(noisy.within_radius);
  }
}

TEST(EnsembleCodes, TwoWrongBitsAreNotReportedAsGuaranteed) {
  EnsembleSpec spec = lsb_pair(false);
  const Image cover = testing::mid_gray(16, 16);
  const Image marked = ensemble_embed(spec, cover, {1, 0, 1, 1});
  spec.first = std::make_shared<testing::FlipOneWatermarker>(spec.first);
  spec.second = std::make_shared<testing::FlipOneWatermarker>(spec.second);
  const EnsembleReadout r = ensemble_extract(spec, marked);
  EXPECT_FALSE(r.within_radius);
}

TEST(EnsembleCodes, MessageLengthChecked) {
  EXPECT_THROW(ensemble_embed(lsb_pair(false), testing::mid_gray(16, 16), Bits(8, 0)), LengthError);
}

TEST(EnsembleRoundTrip, CleanCoversRecoverMessage) {
  const auto& corpus = bundled_corpus();
  Rng rng(23);
  for (EnsembleMode mode : {EnsembleMode::series, EnsembleMode::parallel}) {
    EnsembleSpec spec;
    spec.first = make_watermarker(WatermarkerSpec::defaults(Method::spread_spectrum, 31));
    spec.second = make_watermarker(WatermarkerSpec::defaults(Method::dwt, 32));
    spec.mode = mode;
    spec.code = ecc::reed_muller_1(6);
    int ok = 0;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const Bits message = random_bits(rng, spec.effective_capacity());
      const auto r = ensemble_extract(spec, quantize8(ensemble_embed(spec, corpus.images[i], message)));
      ok += !r.failed() && *r.message == message;
    }
    EXPECT_GE(ok, 19) << to_string(mode);
  }
}

}  // namespace
}  // namespace wmx
