#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace wmx::toy {

// Grid coordinates (levels), channel-major over a tiny image.
using Point = std::vector<int>;
using PointSet = std::vector<Point>;

enum class ConflictRule {
  // One coordinate differs by one level.
  adjacent,
  // The radius-r edit balls (L1 on the grid) intersect: L1 distance <= 2r.
  ball_overlap,
};

std::string_view to_string(ConflictRule rule);
// "adjacent", "ball1", "ball2", ...; sets radius for the ball rules.
ConflictRule parse_rule(std::string_view name, int& radius);

inline constexpr std::size_t kMaxBallPoints = 20000;

struct ToyConfig {
  int channels = 3;
  int height = 1;
  int width = 1;
  int levels = 3;
  // Empty means the middle level in every coordinate.
  Point center;
  double min_psnr = 6.0;
  double range = 1.0;
  ConflictRule rule = ConflictRule::adjacent;
  int radius = 1;
  // Leaves the clean image itself out of the candidate set.
  bool exclude_center = false;

  std::size_t dims() const;
  Point resolved_center() const;
  // sqrt(dims * R^2 * 10^(-min_psnr/10)).
  double epsilon() const;
  void validate() const;
};

// Euclidean distance in sample units, a level being range/(levels-1).
double distance(const Point& a, const Point& b, const ToyConfig& cfg);

// Grid points within epsilon of the center, lexicographic order.
PointSet quality_ball(const ToyConfig& cfg);

// Exactly one coordinate differs, by exactly one level. False for a == b:
// conflict graphs only relate distinct points.
bool tolerance_related(const Point& a, const Point& b);

bool in_conflict(const Point& a, const Point& b, const ToyConfig& cfg);

bool is_independent(const PointSet& set, const ToyConfig& cfg);
// Independent, and every candidate outside it conflicts with a member.
bool is_maximal(const PointSet& set, const PointSet& candidates, const ToyConfig& cfg);

// Exact maximum independent set of the conflict graph over `points`
// (branch and bound with a clique-cover bound).
PointSet maximum_independent_set(const PointSet& points, const ToyConfig& cfg);

struct WatermarkSets {
  ConflictRule rule = ConflictRule::adjacent;
  int radius = 1;
  double epsilon = 0.0;
  PointSet ball;
  PointSet maximum;
  std::size_t max_size = 0;
  double capacity_bits = 0.0;
  // Distinct greedy maximal sets, largest first.
  std::vector<PointSet> maximal_sets;
};

WatermarkSets watermark_sets(const ToyConfig& cfg);

struct ToyCoexistence {
  // Distinct composed points, lexicographic.
  PointSet composed;
  std::size_t pairs = 0;
  std::size_t overlap_with_a = 0;
  std::size_t overlap_with_b = 0;
  // Composed points farther than epsilon from the center.
  std::size_t ball_exits = 0;
  // Conflicting pairs among distinct composed points, and within A and B.
  std::size_t conflicting_pairs = 0;
  std::size_t conflicts_in_a = 0;
  std::size_t conflicts_in_b = 0;
};

// {a + (b - center) : a in A, b in B}, clamped to the grid.
ToyCoexistence toy_coexistence(const PointSet& a, const PointSet& b, const ToyConfig& cfg);

// The two size-4 sets of the geometric illustration on the 3-level cube.
PointSet illustration_set_a();
PointSet illustration_set_b();
PointSet shifted(const PointSet& set, int offset);

// JSON report: config, ball, maximum and maximal sets with capacities, and
// the illustration coexistence demo when the grid has 3 channels and
// 5 or more levels.
std::string toy_report_json(const ToyConfig& cfg);

}  // namespace wmx::toy
