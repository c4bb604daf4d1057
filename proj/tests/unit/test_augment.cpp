#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"
#include "wmx/augment.hpp"
#include "wmx/error.hpp"
#include "wmx/transforms.hpp"

namespace wmx {
namespace {

using testing::bundled_corpus;

AugmentationStep always(StepKind kind, ParamRange a = {}, ParamRange b = {}, ParamRange kernel = {}) {
  AugmentationStep s;
  s.kind = kind;
  s.probability = 1.0;
  s.a = a;
  s.b = b;
  s.kernel = kernel;
  return s;
}

// One probability-1 step for every kind, with mid-sized parameters.
std::vector<AugmentationStep> every_kind() {
  AugmentationStep jiggle = always(StepKind::color_jiggle);
  jiggle.jiggle = {0.1, 0.1, 0.1, 0.05};
  return {always(StepKind::identity),
          always(StepKind::crop, {0.8, 1.0}),
          always(StepKind::scale, {0.5, 1.0}),
          always(StepKind::frequency_compress, {0.5, 1.0}),
          always(StepKind::horizontal_flip),
          always(StepKind::rotation, {-30, 30}),
          always(StepKind::resized_crop, {0.2, 1.0}, {0.75, 4.0 / 3.0}),
          always(StepKind::jpeg, {50, 50}),
          always(StepKind::brightness, {0.5, 1.5}),
          always(StepKind::contrast, {0.5, 1.5}),
          always(StepKind::saturation, {0.5, 1.5}),
          always(StepKind::hue, {-0.5, 0.5}),
          jiggle,
          always(StepKind::grayscale),
          always(StepKind::gaussian_blur, {0.1, 2.0}, {}, {7, 7}),
          always(StepKind::gaussian_noise, {0.08, 0.08}),
          always(StepKind::motion_blur, {-90, 90}, {-1, 1}, {3, 9}),
          always(StepKind::posterize, {3, 3}),
          always(StepKind::rgb_shift, {0.1, 0.1}),
          always(StepKind::sharpness, {2.5, 2.5}),
          always(StepKind::median_blur, {}, {}, {3, 3}),
          always(StepKind::box_blur, {}, {}, {7, 7})};
}

TEST(Steps, ProbabilityZeroIsIdentity) {
  const Image img = bundled_corpus().images[0];
  Rng rng(1);
  for (auto s : every_kind()) {
    s.probability = 0.0;
    EXPECT_EQ(apply_step(img, s, rng), img) << to_string(s.kind);
  }
}

TEST(Steps, DoubleFlipIsIdentity) {
  const Image img = bundled_corpus().images[1];
  Rng rng(2);
  const auto flip = always(StepKind::horizontal_flip);
  const Image once = apply_step(img, flip, rng);
  EXPECT_NE(once, img);
  EXPECT_EQ(once.at(0, 5, 1), img.at(img.width() - 1, 5, 1));
  EXPECT_EQ(apply_step(once, flip, rng), img);
}

TEST(Steps, PosterizeEightBitsIsIdentity) {
  const Image img = bundled_corpus().images[2];
  Rng rng(3);
  EXPECT_EQ(apply_step(img, always(StepKind::posterize, {8, 8}), rng), img);
}

TEST(Steps, PosterizeKeepsTopBits) {
  const Image img = Image::from_samples(1, 1, 3, {255.0, 130.0, 7.0});
  Rng rng(3);
  const Image out = apply_step(img, always(StepKind::posterize, {3, 3}), rng);
  EXPECT_EQ(out.at(0, 0, 0), 224.0);
  EXPECT_EQ(out.at(0, 0, 1), 128.0);
  EXPECT_EQ(out.at(0, 0, 2), 0.0);
}

TEST(Steps, GrayscaleEqualizesChannels) {
  Rng rng(4);
  const Image out = apply_step(bundled_corpus().images[3], always(StepKind::grayscale), rng);
  for (int y = 0; y < out.height(); y += 17) {
    for (int x = 0; x < out.width(); x += 13) {
      EXPECT_NEAR(out.at(x, y, 0), out.at(x, y, 1), 1e-9);
      EXPECT_NEAR(out.at(x, y, 1), out.at(x, y, 2), 1e-9);
    }
  }
}

TEST(Steps, UnitFactorsAreIdentity) {
  const Image img = bundled_corpus().images[4];
  Rng rng(5);
  for (StepKind k : {StepKind::brightness, StepKind::contrast, StepKind::saturation}) {
    const Image out = apply_step(img, always(k, {1.0, 1.0}), rng);
    for (std::size_t i = 0; i < img.sample_count(); ++i) {
      ASSERT_NEAR(out.samples()[i], img.samples()[i], 1e-9) << to_string(k);
    }
  }
  const Image hue = apply_step(img, always(StepKind::hue, {0.0, 0.0}), rng);
  for (std::size_t i = 0; i < img.sample_count(); ++i) ASSERT_NEAR(hue.samples()[i], img.samples()[i], 1e-6);
  const Image full = apply_step(img, always(StepKind::frequency_compress, {1.0, 1.0}), rng);
  for (std::size_t i = 0; i < img.sample_count(); ++i) ASSERT_NEAR(full.samples()[i], img.samples()[i], 1e-6);
}

TEST(Steps, CompressKeepsOnlyLowFrequencies) {
  Rng rng(6);
  const Image img = testing::random_image(rng, 16, 16, 1);
  const Image out = apply_step(img, always(StepKind::frequency_compress, {0.25, 0.25}), rng);
  Plane p(16, 16);
  for (int y = 0; y < 16; ++y) {
    for (int x = 0; x < 16; ++x) p.at(x, y) = out.at(x, y, 0) / 255.0;
  }
  // The clamp can reintroduce energy, so only unclamped outputs are checked exactly.
  bool clamped = false;
  for (double v : out.samples()) clamped |= v == 0.0 || v == 255.0;
  if (clamped) GTEST_SKIP();
  const Plane c = dct2d(p);
  const auto order = zigzag_order(16, 16);
  for (std::size_t i = 64; i < order.size(); ++i) {
    EXPECT_NEAR(c.at(order[i].second, order[i].first), 0.0, 1e-9);
  }
}

TEST(Steps, ShapeAndRangePreserved) {
  Rng rng(7);
  const Image img = testing::random_image(rng, 45, 31);
  for (const auto& s : every_kind()) {
    for (int t = 0; t < 5; ++t) {
      const Image out = apply_step(img, s, rng);
      ASSERT_TRUE(out.same_shape(img)) << to_string(s.kind);
      for (double v : out.samples()) {
        ASSERT_GE(v, 0.0) << to_string(s.kind);
        ASSERT_LE(v, 255.0) << to_string(s.kind);
      }
    }
  }
}

TEST(Steps, UnknownKindThrows) {
  Rng rng(8);
  AugmentationStep bogus = always(static_cast<StepKind>(999));
  EXPECT_THROW(apply_step(bundled_corpus().images[0], bogus, rng), UnsupportedError);
}

TEST(Steps, ValidationRejectsBadRanges) {
  auto s = always(StepKind::brightness, {1.2, 0.8});
  EXPECT_THROW(s.validate(), ConfigError);
  s = always(StepKind::brightness, {0.8, 1.2});
  s.probability = 1.5;
  EXPECT_THROW(s.validate(), ConfigError);
}

struct SuiteShape {
  const char* name;
  std::size_t always, pool, draws;
};

class Census : public ::testing::TestWithParam<SuiteShape> {};

TEST_P(Census, Counts) {
  const auto p = GetParam();
  const auto s = make_suite(p.name);
  EXPECT_EQ(s.name, p.name);
  EXPECT_EQ(s.always_steps.size(), p.always);
  EXPECT_EQ(s.choice_steps.size(), p.pool);
  EXPECT_EQ(s.choice_count, p.draws);
}

INSTANTIATE_TEST_SUITE_P(Suites, Census,
                         ::testing::Values(SuiteShape{"rivagan", 3, 0, 0}, SuiteShape{"ssl", 1, 5, 1},
                                           SuiteShape{"trustmark_low", 2, 15, 2},
                                           SuiteShape{"trustmark_medium", 2, 15, 2},
                                           SuiteShape{"trustmark_high", 2, 15, 2}));

const AugmentationStep& find(const std::vector<AugmentationStep>& steps, StepKind kind) {
  for (const auto& s : steps) {
    if (s.kind == kind) return s;
  }
  throw std::runtime_error("missing step " + std::string(to_string(kind)));
}

TEST(Census, RivaganParameters) {
  const auto s = make_suite("rivagan");
  EXPECT_EQ(s.always_steps[0].kind, StepKind::crop);
  EXPECT_EQ(s.always_steps[1].kind, StepKind::scale);
  EXPECT_EQ(s.always_steps[2].kind, StepKind::frequency_compress);
  for (const auto& st : s.always_steps) EXPECT_EQ(st.probability, 0.5);
  EXPECT_EQ(s.always_steps[0].a.lo, 0.8);
  EXPECT_EQ(s.always_steps[1].a.lo, 0.8);
  EXPECT_EQ(s.always_steps[2].a.lo, 0.5);
  EXPECT_EQ(s.always_steps[2].a.hi, 1.0);
}

TEST(Census, SslParameters) {
  const auto s = make_suite("ssl");
  EXPECT_EQ(s.always_steps[0].kind, StepKind::horizontal_flip);
  EXPECT_EQ(s.always_steps[0].probability, 0.5);
  find(s.choice_steps, StepKind::identity);
  EXPECT_EQ(find(s.choice_steps, StepKind::rotation).a.hi, 30.0);
  EXPECT_EQ(find(s.choice_steps, StepKind::resized_crop).a.lo, 0.2);
  EXPECT_DOUBLE_EQ(find(s.choice_steps, StepKind::resized_crop).b.hi, 4.0 / 3.0);
  EXPECT_EQ(find(s.choice_steps, StepKind::scale).a.lo, 0.2);
  EXPECT_EQ(find(s.choice_steps, StepKind::gaussian_blur).kernel.hi, 17.0);
}

struct TrustmarkLevel {
  const char* name;
  double quality, factor_lo, factor_hi;
  std::array<double, 4> jiggle;
  double blur_kernel, blur_sigma_hi, noise, hue, motion_kernel_hi, angle, direction, bits, shift, sharp, box;
};

class TrustmarkCensus : public ::testing::TestWithParam<TrustmarkLevel> {};

TEST_P(TrustmarkCensus, PoolParameters) {
  const auto t = GetParam();
  const auto s = make_suite(t.name);
  EXPECT_EQ(s.always_steps[0].kind, StepKind::horizontal_flip);
  EXPECT_EQ(s.always_steps[0].probability, 0.5);
  EXPECT_EQ(s.always_steps[1].kind, StepKind::resized_crop);
  EXPECT_EQ(s.always_steps[1].a.lo, 0.7);
  for (const auto& st : s.choice_steps) EXPECT_EQ(st.probability, 0.5) << to_string(st.kind);
  const auto& p = s.choice_steps;
  EXPECT_EQ(find(p, StepKind::jpeg).a.lo, t.quality);
  EXPECT_EQ(find(p, StepKind::brightness).a.lo, t.factor_lo);
  EXPECT_EQ(find(p, StepKind::contrast).a.hi, t.factor_hi);
  EXPECT_EQ(find(p, StepKind::saturation).a.lo, t.factor_lo);
  EXPECT_EQ(find(p, StepKind::color_jiggle).jiggle, t.jiggle);
  find(p, StepKind::grayscale);
  EXPECT_EQ(find(p, StepKind::gaussian_blur).kernel.lo, t.blur_kernel);
  EXPECT_EQ(find(p, StepKind::gaussian_blur).a.lo, 0.1);
  EXPECT_EQ(find(p, StepKind::gaussian_blur).a.hi, t.blur_sigma_hi);
  EXPECT_EQ(find(p, StepKind::gaussian_noise).a.lo, t.noise);
  EXPECT_EQ(find(p, StepKind::hue).a.hi, t.hue);
  EXPECT_EQ(find(p, StepKind::motion_blur).kernel.lo, 3.0);
  EXPECT_EQ(find(p, StepKind::motion_blur).kernel.hi, t.motion_kernel_hi);
  EXPECT_EQ(find(p, StepKind::motion_blur).a.hi, t.angle);
  EXPECT_EQ(find(p, StepKind::motion_blur).b.hi, t.direction);
  EXPECT_EQ(find(p, StepKind::posterize).a.lo, t.bits);
  EXPECT_EQ(find(p, StepKind::rgb_shift).a.lo, t.shift);
  EXPECT_EQ(find(p, StepKind::sharpness).a.lo, t.sharp);
  EXPECT_EQ(find(p, StepKind::median_blur).kernel.lo, 3.0);
  EXPECT_EQ(find(p, StepKind::box_blur).kernel.lo, t.box);
}

INSTANTIATE_TEST_SUITE_P(
    Levels, TrustmarkCensus,
    ::testing::Values(
        TrustmarkLevel{"trustmark_low", 70, 0.9, 1.1, {0.05, 0.05, 0.05, 0.01}, 3, 1.0, 0.02, 0.1, 5, 25, 0.25, 5,
                       0.02, 1.0, 3},
        TrustmarkLevel{"trustmark_medium", 50, 0.75, 1.25, {0.1, 0.1, 0.1, 0.02}, 5, 1.5, 0.04, 0.2, 7, 45, 0.5, 4,
                       0.05, 1.5, 5},
        TrustmarkLevel{"trustmark_high", 40, 0.5, 1.5, {0.1, 0.1, 0.1, 0.05}, 7, 2.0, 0.08, 0.5, 9, 90, 1.0, 3,
                       0.1, 2.5, 7}));

TEST(Suites, UnknownNameThrows) { EXPECT_THROW(make_suite("hidden"), ConfigError); }

TEST(Suites, DeterministicPerSeed) {
  const Image img = bundled_corpus().images[5];
  for (const auto& name : suite_names()) {
    const auto suite = make_suite(name);
    for (std::uint64_t seed : {1ULL, 2ULL, 99ULL}) {
      const Image a = apply_suite(img, suite, seed), b = apply_suite(img, suite, seed);
      EXPECT_EQ(a, b) << name;
      EXPECT_TRUE(a.same_shape(img)) << name;
    }
  }
}

TEST(Suites, SeedsDiffer) {
  const Image img = bundled_corpus().images[6];
  const auto suite = make_suite("trustmark_medium");
  int distinct = 0;
  const Image ref = apply_suite(img, suite, 0);
  for (std::uint64_t seed = 1; seed < 10; ++seed) distinct += apply_suite(img, suite, seed) != ref;
  EXPECT_GE(distinct, 8);
}

// The first three gate draws of a seed, computed from the raw engine.
bool all_gates_skip(std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  for (int i = 0; i < 3; ++i) {
    const double u = static_cast<double>(engine() >> 11) / 9007199254740992.0;
    if (u < 0.5) return false;
  }
  return true;
}

TEST(Suites, RivaganSkipsEverythingForSearchedSeed) {
  const Image img = bundled_corpus().images[7];
  const auto suite = make_suite("rivagan");
  int found = 0;
  for (std::uint64_t seed = 0; seed < 200 && found < 5; ++seed) {
    if (all_gates_skip(seed)) {
      EXPECT_EQ(apply_suite(img, suite, seed), img) << seed;
      ++found;
    } else {
      EXPECT_NE(apply_suite(img, suite, seed), img) << seed;
    }
  }
  EXPECT_EQ(found, 5);
}

TEST(Suites, SslAlwaysDrawsOnePoolStep) {
  // With the identity removed and the flip disabled, every seed must change the image.
  auto suite = make_suite("ssl");
  suite.always_steps[0].probability = 0.0;
  suite.choice_steps.erase(suite.choice_steps.begin());
  const Image img = bundled_corpus().images[8];
  for (std::uint64_t seed = 0; seed < 12; ++seed) EXPECT_NE(apply_suite(img, suite, seed), img);
}

}  // namespace
}  // namespace wmx
