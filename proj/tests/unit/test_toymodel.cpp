#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "wmx/error.hpp"
#include "wmx/toymodel.hpp"
#include "test_support.hpp"

namespace wmx::toy {
namespace {

using testing::BruteForce;
using testing::enumerate;

ToyConfig cube(ConflictRule rule, bool exclude_center = false) {
  ToyConfig cfg;
  cfg.rule = rule;
  cfg.exclude_center = exclude_center;
  return cfg;
}

TEST(Ball, FullCubeAtDefaultPsnr) {
  const ToyConfig cfg;
  EXPECT_NEAR(cfg.epsilon(), std::sqrt(3.0 * std::pow(10.0, -0.6)), 1e-12);
  EXPECT_NEAR(cfg.epsilon(), 0.868, 1e-3);
  const PointSet ball = quality_ball(cfg);
  ASSERT_EQ(ball.size(), 27U);
  EXPECT_EQ(ball.front(), (Point{0, 0, 0}));
  EXPECT_EQ(ball.back(), (Point{2, 2, 2}));
}

TEST(Ball, TinyEpsilonKeepsOnlyCenter) {
  ToyConfig cfg;
  cfg.min_psnr = 200.0;
  EXPECT_EQ(quality_ball(cfg), (PointSet{{1, 1, 1}}));
  // One level is 0.5; just below that distance nothing else fits.
  cfg.min_psnr = -10.0 * std::log10(0.499 * 0.499 / 3.0);
  EXPECT_LT(cfg.epsilon(), 0.5);
  EXPECT_EQ(quality_ball(cfg).size(), 1U);
  cfg.min_psnr = -10.0 * std::log10(0.501 * 0.501 / 3.0);
  EXPECT_EQ(quality_ball(cfg).size(), 7U);
}

TEST(Ball, SizeLimitEnforced) {
  ToyConfig cfg;
  cfg.channels = 3;
  cfg.width = 3;
  cfg.levels = 5;
  cfg.min_psnr = -20.0;
  EXPECT_THROW(watermark_sets(cfg), Error);
}

TEST(Tolerance, Examples) {
  EXPECT_TRUE(tolerance_related({0, 0, 0}, {0, 0, 1}));
  EXPECT_FALSE(tolerance_related({0, 0, 0}, {0, 1, 1}));
  EXPECT_FALSE(tolerance_related({0, 0, 0}, {0, 0, 2}));
  EXPECT_FALSE(tolerance_related({1, 2, 0}, {1, 2, 0}));
  EXPECT_THROW(tolerance_related({0, 0}, {0, 0, 0}), DimensionError);
}

TEST(Conflicts, BallOverlapIsSmallL1Distance) {
  const auto cfg = cube(ConflictRule::ball_overlap);
  EXPECT_TRUE(in_conflict({0, 0, 0}, {1, 1, 0}, cfg));
  EXPECT_FALSE(in_conflict({0, 0, 0}, {1, 1, 1}, cfg));
  EXPECT_FALSE(in_conflict({0, 0, 0}, {0, 0, 0}, cfg));
  int radius = 0;
  EXPECT_EQ(parse_rule("ball2", radius), ConflictRule::ball_overlap);
  EXPECT_EQ(radius, 2);
  EXPECT_EQ(parse_rule("adjacent", radius), ConflictRule::adjacent);
  EXPECT_THROW(parse_rule("hamming", radius), ConfigError);
}

TEST(Sets, AdjacentMaximumIsParityClass) {
  const auto cfg = cube(ConflictRule::adjacent);
  const auto w = watermark_sets(cfg);
  EXPECT_EQ(w.max_size, 14U);
  EXPECT_DOUBLE_EQ(w.capacity_bits, std::log2(14.0));
  EXPECT_TRUE(is_independent(w.maximum, cfg));
  EXPECT_EQ(enumerate(w.ball, cfg).maximum, 14U);
}

TEST(Sets, BallRuleMatchesBruteForce) {
  const auto cfg = cube(ConflictRule::ball_overlap);
  const auto w = watermark_sets(cfg);
  const BruteForce bf = enumerate(w.ball, cfg);
  EXPECT_EQ(w.max_size, bf.maximum);
  EXPECT_EQ(bf.maximum, 5U);
  EXPECT_EQ(bf.maximal.at(3), 28U);
  EXPECT_EQ(bf.maximal.at(4), 132U);
  EXPECT_EQ(bf.maximal.at(5), 22U);
  EXPECT_TRUE(is_independent(w.maximum, cfg));
}

TEST(Sets, BallRuleEmitsMaximalSetOfFour) {
  const auto cfg = cube(ConflictRule::ball_overlap);
  const auto w = watermark_sets(cfg);
  bool four = false;
  for (const auto& s : w.maximal_sets) {
    EXPECT_TRUE(is_independent(s, cfg));
    EXPECT_TRUE(is_maximal(s, w.ball, cfg));
    four |= s.size() == 4;
  }
  EXPECT_TRUE(four);
  for (std::size_t i = 1; i < w.maximal_sets.size(); ++i) {
    EXPECT_GE(w.maximal_sets[i - 1].size(), w.maximal_sets[i].size());
  }
}

TEST(Sets, IllustrationSetsAreIndependent) {
  const auto cfg = cube(ConflictRule::ball_overlap);
  const PointSet ball = quality_ball(cfg);
  for (const auto& s : {illustration_set_a(), illustration_set_b()}) {
    ASSERT_EQ(s.size(), 4U);
    for (std::size_t i = 0; i < s.size(); ++i) {
      for (std::size_t j = i + 1; j < s.size(); ++j) {
        int l1 = 0;
        for (std::size_t k = 0; k < 3; ++k) l1 += std::abs(s[i][k] - s[j][k]);
        EXPECT_GE(l1, 3);
      }
    }
    EXPECT_TRUE(is_independent(s, cfg));
    // The clean image stays compatible with every member, so the sets only
    // become maximal once it is left out.
    EXPECT_FALSE(is_maximal(s, ball, cfg));
    const auto without = cube(ConflictRule::ball_overlap, true);
    EXPECT_TRUE(is_maximal(s, watermark_sets(without).ball, without));
  }
}

TEST(Sets, ExcludedCenterBruteForce) {
  const auto cfg = cube(ConflictRule::ball_overlap, true);
  const PointSet ball = watermark_sets(cfg).ball;
  ASSERT_EQ(ball.size(), 26U);
  EXPECT_EQ(quality_ball(cfg).size(), 27U);
  const BruteForce bf = enumerate(ball, cfg);
  EXPECT_EQ(bf.maximum, 5U);
  EXPECT_EQ(watermark_sets(cfg).max_size, 5U);
  EXPECT_EQ(bf.maximal.at(3), 24U);
  EXPECT_EQ(bf.maximal.at(4), 134U);
  EXPECT_EQ(bf.maximal.at(5), 20U);
}

TEST(Sets, TwoLevelsStillHasCapacity) {
  for (auto rule : {ConflictRule::adjacent, ConflictRule::ball_overlap}) {
    ToyConfig cfg = cube(rule);
    cfg.levels = 2;
    const auto w = watermark_sets(cfg);
    EXPECT_GE(w.max_size, 1U);
    EXPECT_GE(w.capacity_bits, 0.0);
  }
}

// Branch and bound against subset enumeration on many small random balls.
TEST(Sets, BranchAndBoundMatchesEnumeration) {
  int checked = 0;
  for (int levels : {3, 4, 5, 6}) {
    for (int channels : {2, 3, 4}) {
      for (double psnr : {3.0, 6.0, 9.0, 12.0}) {
        for (auto rule : {ConflictRule::adjacent, ConflictRule::ball_overlap}) {
          ToyConfig cfg;
          cfg.channels = channels;
          cfg.levels = levels;
          cfg.min_psnr = psnr;
          cfg.rule = rule;
          const PointSet ball = quality_ball(cfg);
          if (ball.size() > 20) continue;
          const PointSet best = maximum_independent_set(ball, cfg);
          EXPECT_TRUE(is_independent(best, cfg));
          EXPECT_EQ(best.size(), enumerate(ball, cfg).maximum)
              << levels << " " << channels << " " << psnr << " " << to_string(rule);
          ++checked;
        }
      }
    }
  }
  EXPECT_GE(checked, 20);
}

TEST(Coexistence, CenterPerturbationIsIdentity) {
  const auto cfg = cube(ConflictRule::ball_overlap);
  const PointSet a = illustration_set_a();
  const auto r = toy_coexistence(a, {cfg.resolved_center()}, cfg);
  PointSet sorted = a;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(r.composed, sorted);
  EXPECT_EQ(r.pairs, 4U);
  EXPECT_EQ(r.overlap_with_a, 4U);
  EXPECT_EQ(r.conflicting_pairs, r.conflicts_in_a);
  EXPECT_EQ(r.ball_exits, 0U);
}

TEST(Coexistence, IllustrationSetsOnFiveLevels) {
  ToyConfig cfg = cube(ConflictRule::ball_overlap);
  cfg.levels = 5;
  cfg.min_psnr = 12.0;
  ASSERT_EQ(quality_ball(cfg).size(), 27U);
  const PointSet a = shifted(illustration_set_a(), 1), b = shifted(illustration_set_b(), 1);
  const auto r = toy_coexistence(a, b, cfg);
  EXPECT_EQ(r.pairs, 16U);
  EXPECT_EQ(r.conflicts_in_a, 0U);
  EXPECT_EQ(r.conflicts_in_b, 0U);
  // 16 sums collapse onto 13 points, only the center stays inside the ball.
  EXPECT_EQ(r.composed.size(), 13U);
  EXPECT_EQ(r.ball_exits, 12U);
  EXPECT_EQ(r.overlap_with_a, 0U);
  EXPECT_EQ(r.overlap_with_b, 0U);
  EXPECT_TRUE(std::binary_search(r.composed.begin(), r.composed.end(), cfg.resolved_center()));
  const auto json = toy_report_json(cfg);
  EXPECT_NE(json.find("\"illustration\""), std::string::npos);
  EXPECT_NE(json.find("\"maximal_sets\""), std::string::npos);
}

TEST(Config, Validation) {
  ToyConfig cfg;
  cfg.levels = 1;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = ToyConfig{};
  cfg.center = {0, 0, 3};
  EXPECT_THROW(cfg.validate(), ConfigError);
}

}  // namespace
}  // namespace wmx::toy
