#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "test_support.hpp"
#include "wmx/error.hpp"
#include "wmx/transforms.hpp"

namespace wmx {
namespace {

using testing::random_image;

TEST(Psnr, IdenticalImagesAreInfinite) {
  Image a(8, 8, 3, 77.0);
  EXPECT_EQ(psnr(a, a), kInfinitePsnr);
}

TEST(Psnr, BlackVersusWhiteIsZero) {
  EXPECT_NEAR(psnr(Image(4, 4, 3, 0.0), Image(4, 4, 3, 255.0)), 0.0, 1e-12);
}

TEST(Psnr, UniformOffsetMatchesClosedForm) {
  const Image a(16, 16, 3, 100.0), b(16, 16, 3, 116.0);
  const double expected = 20.0 * std::log10(255.0 / 16.0);
  EXPECT_NEAR(psnr(a, b), expected, 1e-9);
  EXPECT_NEAR(psnr(a, b), 24.0484, 1e-4);
}

TEST(Psnr, ShapeMismatchThrows) {
  EXPECT_THROW(psnr(Image(4, 4, 3), Image(4, 5, 3)), DimensionError);
}

TEST(Psnr, SymmetricAndMonotoneInNoise) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Image a = random_image(rng, 12, 9);
    const Image b = random_image(rng, 12, 9);
    EXPECT_DOUBLE_EQ(psnr(a, b), psnr(b, a));
    // Scaling a residual toward zero can only raise PSNR.
    const Residual r = residual(b, a);
    const double full = psnr(apply_residual(a, r, 1.0), a);
    const double half = psnr(apply_residual(a, r, 0.5), a);
    EXPECT_GE(half, full);
  }
}

TEST(Residual, ApplyWithScale) {
  const Image o(1, 1, 3, 100.0);
  const Image w = Image::from_samples(1, 1, 3, {110.0, 90.0, 100.0});
  const Residual r = residual(w, o);
  EXPECT_EQ(r.data, (std::vector<double>{10.0, -10.0, 0.0}));
  const Image half = apply_residual(o, r, 0.5);
  EXPECT_EQ(half.at(0, 0, 0), 105.0);
  EXPECT_EQ(half.at(0, 0, 1), 95.0);
  EXPECT_EQ(half.at(0, 0, 2), 100.0);
}

TEST(Residual, ApplyClampsToRange) {
  const Image o(1, 1, 1, 250.0);
  Residual r{1, 1, 1, {}, {20.0}};
  EXPECT_EQ(apply_residual(o, r, 1.0).at(0, 0, 0), 255.0);
  r.data[0] = -300.0;
  EXPECT_EQ(apply_residual(o, r, 1.0).at(0, 0, 0), 0.0);
}

TEST(Residual, RoundTripIsExactOnIntegerImages) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Image a = random_image(rng, 7, 5), b = random_image(rng, 7, 5);
    EXPECT_EQ(apply_residual(a, residual(b, a), 1.0), b);
    EXPECT_EQ(apply_residual(a, residual(b, a), 0.0), a);
  }
}

TEST(YCbCr, KnownColors) {
  const Image black(1, 1, 3, 0.0), white(1, 1, 3, 255.0);
  const Image yb = rgb_to_ycbcr(black), yw = rgb_to_ycbcr(white);
  EXPECT_NEAR(yb.at(0, 0, 0), 0.0, 1e-9);
  EXPECT_NEAR(yb.at(0, 0, 1), 128.0, 1e-9);
  EXPECT_NEAR(yb.at(0, 0, 2), 128.0, 1e-9);
  EXPECT_NEAR(yw.at(0, 0, 0), 255.0, 1e-9);
  EXPECT_NEAR(yw.at(0, 0, 1), 128.0, 1e-9);
  const Image red = Image::from_samples(1, 1, 3, {255.0, 0.0, 0.0});
  EXPECT_NEAR(rgb_to_ycbcr(red).at(0, 0, 0), 0.299 * 255.0, 1e-9);
}

TEST(YCbCr, RoundTripWithinOneLevel) {
  Rng rng(5);
  const Image a = random_image(rng, 32, 32);
  const Image back = ycbcr_to_rgb(rgb_to_ycbcr(a));
  for (std::size_t i = 0; i < a.sample_count(); ++i) {
    EXPECT_LE(std::abs(a.samples()[i] - back.samples()[i]), 1.0);
  }
}

TEST(YCbCr, RequiresThreeChannels) {
  EXPECT_THROW(rgb_to_ycbcr(Image(2, 2, 1)), DimensionError);
}

TEST(Luma, AddLumaShiftsLumaExactly) {
  Rng rng(9);
  const Image a = random_image(rng, 8, 8, 3, 40, 200);
  std::vector<double> delta(64);
  for (auto& d : delta) d = rng.uniform(-10.0, 10.0);
  const auto before = luma_plane(a);
  const auto after = luma_plane(add_luma(a, delta));
  for (std::size_t i = 0; i < delta.size(); ++i) EXPECT_NEAR(after[i] - before[i], delta[i], 1e-9);
}

TEST(ExportResidual, ZeroResidualFourierIsAllMin) {
  Residual r{8, 8, 3, {}, std::vector<double>(192, 0.0)};
  const Image out = export_residual(r, ExportMode::fourier);
  for (double v : out.samples()) EXPECT_EQ(v, 0.0);
}

TEST(ExportResidual, ImpulseHasFlatSpectrum) {
  Residual r{8, 8, 1, {}, std::vector<double>(64, 0.0)};
  r.data[0] = 5.0;
  const Image out = export_residual(r, ExportMode::fourier);
  for (double v : out.samples()) EXPECT_DOUBLE_EQ(v, out.samples()[0]);
}

TEST(ExportResidual, ZeroResidualRgbIsMidRange) {
  Residual r{4, 4, 3, {}, std::vector<double>(48, 0.0)};
  const Image out = export_residual(r, ExportMode::rgb, 10.0);
  for (double v : out.samples()) EXPECT_DOUBLE_EQ(v, 127.5);
}

TEST(ExportResidual, RgbAppliesGain) {
  Residual r{1, 1, 3, {}, {1.0, -2.0, 0.0}};
  const Image out = export_residual(r, ExportMode::rgb, 10.0);
  EXPECT_DOUBLE_EQ(out.at(0, 0, 0), 137.5);
  EXPECT_DOUBLE_EQ(out.at(0, 0, 1), 107.5);
}

TEST(ExportResidual, ParseRejectsUnknownMode) {
  EXPECT_EQ(parse_export_mode("fourier"), ExportMode::fourier);
  EXPECT_THROW(parse_export_mode("hsv"), ConfigError);
}

// Direct O(n^4) definition, independent of the library path.
Plane naive_dct(const Plane& p) {
  Plane out(p.width, p.height);
  for (int v = 0; v < p.height; ++v) {
    for (int u = 0; u < p.width; ++u) {
      const double cu = u == 0 ? std::sqrt(1.0 / p.width) : std::sqrt(2.0 / p.width);
      const double cv = v == 0 ? std::sqrt(1.0 / p.height) : std::sqrt(2.0 / p.height);
      double s = 0.0;
      for (int y = 0; y < p.height; ++y) {
        for (int x = 0; x < p.width; ++x) {
          s += p.at(x, y) * std::cos(std::numbers::pi * (2 * x + 1) * u / (2.0 * p.width)) *
               std::cos(std::numbers::pi * (2 * y + 1) * v / (2.0 * p.height));
        }
      }
      out.at(u, v) = cu * cv * s;
    }
  }
  return out;
}

class DctSizes : public ::testing::TestWithParam<std::pair<int, int>> {};

TEST_P(DctSizes, MatchesDirectFormulaAndInverts) {
  const auto [w, h] = GetParam();
  Rng rng(static_cast<std::uint64_t>(w * 100 + h));
  Plane p(w, h);
  for (auto& v : p.v) v = rng.uniform(-100.0, 100.0);
  const Plane fast = dct2d(p), ref = naive_dct(p);
  for (std::size_t i = 0; i < p.v.size(); ++i) EXPECT_NEAR(fast.v[i], ref.v[i], 1e-9);
  const Plane back = idct2d(fast);
  for (std::size_t i = 0; i < p.v.size(); ++i) EXPECT_NEAR(back.v[i], p.v[i], 1e-9);
}

INSTANTIATE_TEST_SUITE_P(EvenAndOdd, DctSizes,
                         ::testing::Values(std::pair{8, 8}, std::pair{4, 6}, std::pair{5, 5},
                                           std::pair{7, 3}, std::pair{1, 1}));

TEST(Dct, BasisMatchesInverseOfUnitCoefficient) {
  Plane coeffs(8, 8);
  coeffs.at(3, 2) = 1.0;
  const Plane spatial = idct2d(coeffs);
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) EXPECT_NEAR(spatial.at(x, y), dct_basis(8, 3, 2, x, y), 1e-12);
  }
}

TEST(Haar, RoundTripAndEnergy) {
  Rng rng(21);
  Plane p(10, 6);
  for (auto& v : p.v) v = rng.uniform(0.0, 255.0);
  const HaarBands b = haar_forward(p);
  double e_in = 0.0, e_out = 0.0;
  for (double v : p.v) e_in += v * v;
  for (const Plane* band : {&b.ll, &b.hl, &b.lh, &b.hh}) {
    for (double v : band->v) e_out += v * v;
  }
  EXPECT_NEAR(e_in, e_out, 1e-6 * e_in);
  const Plane back = haar_inverse(b);
  for (std::size_t i = 0; i < p.v.size(); ++i) EXPECT_NEAR(back.v[i], p.v[i], 1e-9);
  EXPECT_THROW(haar_forward(Plane(3, 4)), DimensionError);
}

TEST(Zigzag, JpegOrderPrefix) {
  const auto z = zigzag_order(8, 8);
  ASSERT_EQ(z.size(), 64U);
  const std::vector<std::pair<int, int>> prefix{{0, 0}, {0, 1}, {1, 0}, {2, 0}, {1, 1}, {0, 2}, {0, 3}};
  for (std::size_t i = 0; i < prefix.size(); ++i) EXPECT_EQ(z[i], prefix[i]);
  EXPECT_EQ(z.back(), (std::pair{7, 7}));
}

TEST(Bits, HexRoundTrip) {
  Rng rng(1);
  for (std::size_t n : {1U, 4U, 5U, 31U, 32U, 64U}) {
    const Bits b = random_bits(rng, n);
    EXPECT_EQ(from_hex(to_hex(b), n), b);
  }
  EXPECT_EQ(to_hex(from_string("10110")), "b0");
}

TEST(Bits, HexRejectsBadInput) {
  EXPECT_THROW(from_hex("1a", 5), ConfigError);
  EXPECT_THROW(from_hex("abc", 8), LengthError);
  EXPECT_THROW(from_hex("zz", 8), Error);
}

TEST(Png, RoundTripOfEightBitImage) {
  Rng rng(2);
  const Image a = random_image(rng, 13, 7);
  const auto dir = testing::temp_dir("png");
  const auto path = std::filesystem::path(dir) / "a.png";
  write_png(path, a);
  EXPECT_EQ(read_png(path), a);
  std::filesystem::remove_all(dir);
}

TEST(Png, QuantizeMatchesDiskRoundTrip) {
  Rng rng(4);
  std::vector<double> s(5 * 5 * 3);
  for (auto& v : s) v = rng.uniform(0.0, 255.0);
  const Image a = Image::from_samples(5, 5, 3, s);
  const auto dir = testing::temp_dir("png_q");
  const auto path = std::filesystem::path(dir) / "a.png";
  write_png(path, a);
  EXPECT_EQ(read_png(path), quantize8(a));
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace wmx
