#include "wmx/toymodel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>

#include <json.hpp>

#include "wmx/error.hpp"
#include "wmx/rng.hpp"

namespace wmx::toy {

namespace {

constexpr std::uint64_t kSearchNodeBudget = 50'000'000;
constexpr std::size_t kRandomGreedyOrders = 64;
// Slack on the ball boundary so grid points at exactly epsilon count as inside.
constexpr double kBoundaryTolerance = 1e-9;

class Bitset {
 public:
  explicit Bitset(std::size_t n = 0) : n_(n), words_((n + 63) / 64, 0) {}

  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  void reset(std::size_t i) { words_[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
  bool none() const {
    return std::all_of(words_.begin(), words_.end(), [](auto w) { return w == 0; });
  }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  std::size_t first() const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if (words_[i]) return i * 64 + static_cast<std::size_t>(std::countr_zero(words_[i]));
    }
    return n_;
  }
  std::size_t count_and(const Bitset& o) const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < words_.size(); ++i) c += static_cast<std::size_t>(std::popcount(words_[i] & o.words_[i]));
    return c;
  }
  Bitset& and_with(const Bitset& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  Bitset& and_not(const Bitset& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
  }
  template <class F>
  void for_each(F f) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      for (std::uint64_t w = words_[i]; w; w &= w - 1) f(i * 64 + static_cast<std::size_t>(std::countr_zero(w)));
    }
  }

 private:
  std::size_t n_;
  std::vector<std::uint64_t> words_;
};

class MisSearch {
 public:
  MisSearch(const PointSet& points, const ToyConfig& cfg) : n_(points.size()), adj_(n_, Bitset(n_)) {
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i + 1; j < n_; ++j) {
        if (in_conflict(points[i], points[j], cfg)) {
          adj_[i].set(j);
          adj_[j].set(i);
        }
      }
    }
  }

  std::vector<std::size_t> run() {
    Bitset all(n_);
    for (std::size_t i = 0; i < n_; ++i) all.set(i);
    std::vector<std::size_t> cur;
    expand(cur, all);
    return best_;
  }

 private:
  // Greedy clique cover of p; an independent set takes at most one vertex
  // per clique.
  std::size_t clique_cover(Bitset p) const {
    std::size_t cliques = 0;
    while (!p.none()) {
      const std::size_t v = p.first();
      p.reset(v);
      Bitset common = p;
      common.and_with(adj_[v]);
      while (!common.none()) {
        const std::size_t w = common.first();
        p.reset(w);
        common.reset(w);
        common.and_with(adj_[w]);
      }
      ++cliques;
    }
    return cliques;
  }

  void expand(std::vector<std::size_t>& cur, Bitset p) {
    if (++nodes_ > kSearchNodeBudget) throw Error("maximum independent set search exceeded its node budget");
    // Vertices with no conflicts left can always be taken.
    std::size_t pushed = 0;
    bool changed = true;
    while (changed) {
      changed = false;
      p.for_each([&](std::size_t v) {
        if (p.test(v) && p.count_and(adj_[v]) == 0) {
          cur.push_back(v);
          p.reset(v);
          ++pushed;
          changed = true;
        }
      });
    }
    if (p.none()) {
      if (cur.size() > best_.size()) best_ = cur;
    } else if (cur.size() + clique_cover(p) > best_.size()) {
      std::size_t pick = p.first(), degree = 0;
      p.for_each([&](std::size_t v) {
        const std::size_t d = p.count_and(adj_[v]);
        if (d > degree) {
          degree = d;
          pick = v;
        }
      });
      Bitset with = p;
      with.reset(pick);
      with.and_not(adj_[pick]);
      cur.push_back(pick);
      expand(cur, with);
      cur.pop_back();
      p.reset(pick);
      expand(cur, p);
    }
    cur.resize(cur.size() - pushed);
  }

  std::size_t n_;
  std::vector<Bitset> adj_;
  std::vector<std::size_t> best_;
  std::uint64_t nodes_ = 0;
};

PointSet greedy(const PointSet& points, const std::vector<std::size_t>& order, const ToyConfig& cfg) {
  PointSet chosen;
  for (auto i : order) {
    const bool free = std::none_of(chosen.begin(), chosen.end(),
                                   [&](const Point& q) { return in_conflict(points[i], q, cfg); });
    if (free) chosen.push_back(points[i]);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

std::size_t count_conflicts(const PointSet& set, const ToyConfig& cfg) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    for (std::size_t j = i + 1; j < set.size(); ++j) c += in_conflict(set[i], set[j], cfg) ? 1 : 0;
  }
  return c;
}

PointSet candidates_of(const ToyConfig& cfg) {
  PointSet ball = quality_ball(cfg);
  if (cfg.exclude_center) std::erase(ball, cfg.resolved_center());
  return ball;
}

}  // namespace

std::string_view to_string(ConflictRule rule) { return rule == ConflictRule::adjacent ? "adjacent" : "ball_overlap"; }

ConflictRule parse_rule(std::string_view name, int& radius) {
  if (name == "adjacent") return ConflictRule::adjacent;
  if (name.size() > 4 && name.substr(0, 4) == "ball") {
    const std::string digits(name.substr(4));
    if (std::all_of(digits.begin(), digits.end(), [](unsigned char c) { return std::isdigit(c); })) {
      radius = std::stoi(digits);
      if (radius >= 1) return ConflictRule::ball_overlap;
    }
  }
  throw ConfigError("unknown conflict rule '" + std::string(name) + "' (valid: adjacent, ball1, ball2, ...)");
}

std::size_t ToyConfig::dims() const {
  return static_cast<std::size_t>(channels) * static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
}

Point ToyConfig::resolved_center() const {
  if (!center.empty()) return center;
  return Point(dims(), (levels - 1) / 2);
}

double ToyConfig::epsilon() const {
  return std::sqrt(static_cast<double>(dims()) * range * range * std::pow(10.0, -min_psnr / 10.0));
}

void ToyConfig::validate() const {
  if (channels < 1 || height < 1 || width < 1) throw ConfigError("toy image dimensions must be positive");
  if (levels < 2) throw ConfigError("toy grid needs at least 2 levels");
  if (!(range > 0.0)) throw ConfigError("toy range must be positive");
  if (!std::isfinite(min_psnr)) throw ConfigError("toy min_psnr must be finite");
  if (rule == ConflictRule::ball_overlap && radius < 1) throw ConfigError("ball radius must be at least 1");
  if (!center.empty()) {
    if (center.size() != dims()) throw DimensionError("toy center has the wrong number of coordinates");
    for (int c : center) {
      if (c < 0 || c >= levels) throw ConfigError("toy center lies outside the grid");
    }
  }
}

double distance(const Point& a, const Point& b, const ToyConfig& cfg) {
  if (a.size() != b.size()) throw DimensionError("toy points differ in dimension");
  const double step = cfg.range / (cfg.levels - 1);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = (a[i] - b[i]) * step;
    sum += d * d;
  }
  return std::sqrt(sum);
}

PointSet quality_ball(const ToyConfig& cfg) {
  cfg.validate();
  const Point c = cfg.resolved_center();
  const double eps = cfg.epsilon();
  const double step = cfg.range / (cfg.levels - 1);
  // Per-coordinate reach bounds the walk.
  const int reach = static_cast<int>(std::floor(eps / step + kBoundaryTolerance));
  const std::size_t d = cfg.dims();
  Point lo(d), hi(d);
  double volume = 1.0;
  for (std::size_t i = 0; i < d; ++i) {
    lo[i] = std::max(0, c[i] - reach);
    hi[i] = std::min(cfg.levels - 1, c[i] + reach);
    volume *= hi[i] - lo[i] + 1;
  }
  if (volume > 1e8) throw ConfigError("toy quality ball is too large to enumerate");
  PointSet out;
  Point p = lo;
  while (true) {
    if (distance(p, c, cfg) <= eps + kBoundaryTolerance) {
      out.push_back(p);
      if (out.size() > kMaxBallPoints) {
        throw ConfigError("toy quality ball exceeds " + std::to_string(kMaxBallPoints) + " points");
      }
    }
    std::size_t i = d;
    while (i > 0 && p[i - 1] == hi[i - 1]) {
      p[i - 1] = lo[i - 1];
      --i;
    }
    if (i == 0) break;
    ++p[i - 1];
  }
  return out;
}

bool tolerance_related(const Point& a, const Point& b) {
  if (a.size() != b.size()) throw DimensionError("toy points differ in dimension");
  std::size_t differing = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const int diff = std::abs(a[i] - b[i]);
    if (diff > 1) return false;
    differing += static_cast<std::size_t>(diff);
  }
  return differing == 1;
}

bool in_conflict(const Point& a, const Point& b, const ToyConfig& cfg) {
  if (cfg.rule == ConflictRule::adjacent) return tolerance_related(a, b);
  if (a.size() != b.size()) throw DimensionError("toy points differ in dimension");
  if (a == b) return false;
  int l1 = 0;
  for (std::size_t i = 0; i < a.size(); ++i) l1 += std::abs(a[i] - b[i]);
  return l1 <= 2 * cfg.radius;
}

bool is_independent(const PointSet& set, const ToyConfig& cfg) {
  for (std::size_t i = 0; i < set.size(); ++i) {
    for (std::size_t j = i + 1; j < set.size(); ++j) {
      if (set[i] == set[j] || in_conflict(set[i], set[j], cfg)) return false;
    }
  }
  return true;
}

bool is_maximal(const PointSet& set, const PointSet& candidates, const ToyConfig& cfg) {
  if (!is_independent(set, cfg)) return false;
  for (const auto& p : candidates) {
    if (std::find(set.begin(), set.end(), p) != set.end()) continue;
    const bool blocked = std::any_of(set.begin(), set.end(), [&](const Point& q) { return in_conflict(p, q, cfg); });
    if (!blocked) return false;
  }
  return true;
}

PointSet maximum_independent_set(const PointSet& points, const ToyConfig& cfg) {
  if (points.empty()) return {};
  MisSearch search(points, cfg);
  PointSet out;
  for (auto i : search.run()) out.push_back(points[i]);
  std::sort(out.begin(), out.end());
  if (!is_independent(out, cfg)) throw std::logic_error("maximum independent set failed verification");
  return out;
}

WatermarkSets watermark_sets(const ToyConfig& cfg) {
  WatermarkSets r;
  r.rule = cfg.rule;
  r.radius = cfg.radius;
  r.epsilon = cfg.epsilon();
  r.ball = candidates_of(cfg);
  r.maximum = maximum_independent_set(r.ball, cfg);
  r.max_size = r.maximum.size();
  r.capacity_bits = r.max_size > 0 ? std::log2(static_cast<double>(r.max_size)) : 0.0;

  std::set<PointSet> found;
  const std::size_t n = r.ball.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t start = 0; start < n; ++start) {
    std::vector<std::size_t> rotated(order.begin() + static_cast<std::ptrdiff_t>(start), order.end());
    rotated.insert(rotated.end(), order.begin(), order.begin() + static_cast<std::ptrdiff_t>(start));
    found.insert(greedy(r.ball, rotated, cfg));
  }
  Rng rng(derive_seed({hash_name("toy-greedy"), n}));
  for (std::size_t k = 0; k < kRandomGreedyOrders; ++k) {
    std::vector<std::size_t> shuffled = order;
    for (std::size_t i = n; i > 1; --i) std::swap(shuffled[i - 1], shuffled[rng.below(i)]);
    found.insert(greedy(r.ball, shuffled, cfg));
  }
  r.maximal_sets.assign(found.begin(), found.end());
  std::stable_sort(r.maximal_sets.begin(), r.maximal_sets.end(),
                   [](const PointSet& a, const PointSet& b) { return a.size() > b.size(); });
  for (const auto& s : r.maximal_sets) {
    if (!is_maximal(s, r.ball, cfg)) throw std::logic_error("greedy set failed maximality verification");
  }
  return r;
}

ToyCoexistence toy_coexistence(const PointSet& a, const PointSet& b, const ToyConfig& cfg) {
  cfg.validate();
  const Point c = cfg.resolved_center();
  for (const PointSet* s : {&a, &b}) {
    for (const auto& p : *s) {
      if (p.size() != c.size()) throw DimensionError("toy set point has the wrong number of coordinates");
    }
  }
  ToyCoexistence r;
  std::set<Point> composed;
  for (const auto& pa : a) {
    for (const auto& pb : b) {
      Point p(c.size());
      for (std::size_t i = 0; i < c.size(); ++i) p[i] = std::clamp(pa[i] + pb[i] - c[i], 0, cfg.levels - 1);
      composed.insert(p);
      ++r.pairs;
    }
  }
  r.composed.assign(composed.begin(), composed.end());
  const double eps = cfg.epsilon();
  for (const auto& p : r.composed) {
    r.overlap_with_a += std::count(a.begin(), a.end(), p) > 0 ? 1 : 0;
    r.overlap_with_b += std::count(b.begin(), b.end(), p) > 0 ? 1 : 0;
    r.ball_exits += distance(p, c, cfg) > eps + kBoundaryTolerance ? 1 : 0;
  }
  r.conflicting_pairs = count_conflicts(r.composed, cfg);
  r.conflicts_in_a = count_conflicts(a, cfg);
  r.conflicts_in_b = count_conflicts(b, cfg);
  return r;
}

PointSet illustration_set_a() { return {{0, 0, 0}, {2, 2, 0}, {2, 0, 2}, {0, 2, 2}}; }
PointSet illustration_set_b() { return {{2, 2, 2}, {0, 0, 2}, {0, 2, 0}, {2, 0, 0}}; }

PointSet shifted(const PointSet& set, int offset) {
  PointSet out = set;
  for (auto& p : out) {
    for (auto& v : p) v += offset;
  }
  return out;
}

std::string toy_report_json(const ToyConfig& cfg) {
  using nlohmann::json;
  const WatermarkSets sets = watermark_sets(cfg);
  json maximal = json::array();
  for (const auto& s : sets.maximal_sets) {
    maximal.push_back({{"size", s.size()}, {"capacity_bits", std::log2(static_cast<double>(s.size()))}, {"points", s}});
  }
  json report = {
      {"config",
       {{"channels", cfg.channels},
        {"height", cfg.height},
        {"width", cfg.width},
        {"levels", cfg.levels},
        {"center", cfg.resolved_center()},
        {"min_psnr", cfg.min_psnr},
        {"range", cfg.range},
        {"rule", std::string(to_string(cfg.rule))},
        {"radius", cfg.radius},
        {"exclude_center", cfg.exclude_center},
        {"epsilon", sets.epsilon}}},
      {"ball_size", sets.ball.size()},
      {"maximum", {{"size", sets.max_size}, {"capacity_bits", sets.capacity_bits}, {"points", sets.maximum}}},
      {"maximal_sets", maximal},
  };

  const Point c = cfg.resolved_center();
  const bool uniform_center = std::all_of(c.begin(), c.end(), [&](int v) { return v == c[0]; });
  if (cfg.dims() == 3 && uniform_center && c[0] >= 1 && c[0] + 1 < cfg.levels) {
    const PointSet a = shifted(illustration_set_a(), c[0] - 1);
    const PointSet b = shifted(illustration_set_b(), c[0] - 1);
    const PointSet candidates = candidates_of(cfg);
    const ToyCoexistence co = toy_coexistence(a, b, cfg);
    report["illustration"] = {
        {"set_a", a},
        {"set_b", b},
        {"a_independent", is_independent(a, cfg)},
        {"b_independent", is_independent(b, cfg)},
        {"a_maximal", is_maximal(a, candidates, cfg)},
        {"b_maximal", is_maximal(b, candidates, cfg)},
        {"composed", co.composed},
        {"pairs", co.pairs},
        {"overlap_with_a", co.overlap_with_a},
        {"overlap_with_b", co.overlap_with_b},
        {"ball_exits", co.ball_exits},
        {"conflicting_pairs", co.conflicting_pairs},
    };
  }
  return report.dump(2) + "\n";
}

}  // namespace wmx::toy
