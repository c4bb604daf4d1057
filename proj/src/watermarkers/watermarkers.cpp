#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <tuple>

#include <Eigen/Dense>

#include "wmx/error.hpp"
#include "wmx/rng.hpp"
#include "wmx/transforms.hpp"
#include "wmx/watermarker.hpp"

namespace wmx {
namespace {

constexpr int kMaxEmbedPasses = 64;
constexpr int kMaxSpreadPasses = 4;
// Slot values closer than this to their lattice point are left untouched, so
// re-embedding the same secret is an exact no-op.
constexpr double kOnLattice = 1e-9;
constexpr std::uint64_t kSharedBasisSeed = 0x55c0ffee5eed0001ULL;

Plane luma(const Image& img) {
  Plane p;
  p.width = img.width();
  p.height = img.height();
  p.v = luma_plane(img);
  return p;
}

// First `take` entries of a keyed permutation of [0, count).
std::vector<std::size_t> keyed_prefix(std::size_t count, std::size_t take, Rng& rng) {
  std::vector<std::size_t> idx(count);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = 0; i < take; ++i) std::swap(idx[i], idx[i + rng.below(count - i)]);
  idx.resize(take);
  return idx;
}

std::vector<std::pair<int, int>> mid_band(int block) {
  std::vector<std::pair<int, int>> out;
  for (int u = 1; u < block; ++u) {
    for (int v = 1; v < block; ++v) {
      if (u + v >= block / 2 - 1 && u + v <= block / 2 + 1) out.emplace_back(u, v);
    }
  }
  return out;
}

// A QIM slot: block or coefficient origin plus the coefficient it carries.
struct Slot {
  int x = 0;
  int y = 0;
  int u = 0;
  int v = 0;
};

class QimLayout {
 public:
  QimLayout(const WatermarkerSpec& spec, int width, int height)
      : spec_(spec), block_(spec.block_size) {
    const std::size_t available = available_slots(spec, width, height);
    if (spec.capacity_bits > available) {
      throw CapacityError(std::string(to_string(spec.method)) + ": capacity " +
                          std::to_string(spec.capacity_bits) + " exceeds the " +
                          std::to_string(available) + " slots of a " + std::to_string(width) + "x" +
                          std::to_string(height) + " image");
    }
    Rng rng(derive_seed({spec.key, hash_name(to_string(spec.method)),
                         static_cast<std::uint64_t>(width), static_cast<std::uint64_t>(height),
                         static_cast<std::uint64_t>(block_)}));
    const auto order = keyed_prefix(available, spec.capacity_bits, rng);
    const auto band = mid_band(block_);
    slots_.reserve(order.size());
    switch (spec.method) {
      case Method::dct: {
        const int bx = width / block_;
        for (auto i : order) {
          const auto [u, v] = band[rng.below(band.size())];
          slots_.push_back({static_cast<int>(i % bx) * block_, static_cast<int>(i / bx) * block_, u, v});
        }
        break;
      }
      case Method::dwt: {
        const int hw = width / 2, hh = height / 2;
        const std::size_t per_band = static_cast<std::size_t>(hw) * hh;
        for (auto i : order) {
          const auto j = i % per_band;
          slots_.push_back({static_cast<int>(j % hw), static_cast<int>(j / hw),
                            static_cast<int>(i / per_band), 0});
        }
        break;
      }
      case Method::dwtdct: {
        const int bx = (width / 2) / block_;
        for (auto i : order) {
          const auto [u, v] = band[rng.below(band.size())];
          slots_.push_back({static_cast<int>(i % bx) * block_, static_cast<int>(i / bx) * block_, u, v});
        }
        break;
      }
      case Method::dwtdctsvd: {
        const int bx = (width / 2) / block_;
        for (auto i : order) {
          slots_.push_back({static_cast<int>(i % bx) * block_, static_cast<int>(i / bx) * block_, 0, 0});
        }
        break;
      }
      case Method::spread_spectrum:
        throw std::logic_error("QimLayout: spread spectrum has no QIM slots");
    }
    basis_.resize(static_cast<std::size_t>(block_) * block_ * block_ * block_);
    for (int u = 0; u < block_; ++u) {
      for (int v = 0; v < block_; ++v) {
        for (int y = 0; y < block_; ++y) {
          for (int x = 0; x < block_; ++x) basis(u, v, x, y) = dct_basis(block_, u, v, x, y);
        }
      }
    }
  }

  std::size_t size() const { return slots_.size(); }

  double read(const Plane& y, std::size_t i) const {
    const Slot& s = slots_[i];
    switch (spec_.method) {
      case Method::dct: {
        double acc = 0.0;
        for (int by = 0; by < block_; ++by) {
          for (int bx = 0; bx < block_; ++bx) acc += y.at(s.x + bx, s.y + by) * basis(s.u, s.v, bx, by);
        }
        return acc;
      }
      case Method::dwt: {
        const double a = y.at(2 * s.x, 2 * s.y), b = y.at(2 * s.x + 1, 2 * s.y);
        const double c = y.at(2 * s.x, 2 * s.y + 1), d = y.at(2 * s.x + 1, 2 * s.y + 1);
        return s.u == 0 ? 0.5 * (a - b + c - d) : 0.5 * (a + b - c - d);
      }
      case Method::dwtdct: {
        double acc = 0.0;
        for (int by = 0; by < block_; ++by) {
          for (int bx = 0; bx < block_; ++bx) acc += ll(y, s.x + bx, s.y + by) * basis(s.u, s.v, bx, by);
        }
        return acc;
      }
      case Method::dwtdctsvd: {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(coefficients(y, s));
        return svd.singularValues()(0);
      }
      case Method::spread_spectrum:
        break;
    }
    return 0.0;
  }

  // Adds to `delta` the luma change that moves slot i from `current` to `target`.
  void shift(const Plane& y, Plane& delta, std::size_t i, double current, double target) const {
    const Slot& s = slots_[i];
    const double step = target - current;
    switch (spec_.method) {
      case Method::dct:
        for (int by = 0; by < block_; ++by) {
          for (int bx = 0; bx < block_; ++bx) delta.at(s.x + bx, s.y + by) += step * basis(s.u, s.v, bx, by);
        }
        return;
      case Method::dwt: {
        const double h = 0.5 * step;
        const double sign_b = s.u == 0 ? -1.0 : 1.0;
        const double sign_c = s.u == 0 ? 1.0 : -1.0;
        delta.at(2 * s.x, 2 * s.y) += h;
        delta.at(2 * s.x + 1, 2 * s.y) += sign_b * h;
        delta.at(2 * s.x, 2 * s.y + 1) += sign_c * h;
        delta.at(2 * s.x + 1, 2 * s.y + 1) -= h;
        return;
      }
      case Method::dwtdct:
        for (int by = 0; by < block_; ++by) {
          for (int bx = 0; bx < block_; ++bx) {
            add_ll(delta, s.x + bx, s.y + by, step * basis(s.u, s.v, bx, by));
          }
        }
        return;
      case Method::dwtdctsvd: {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(coefficients(y, s), Eigen::ComputeFullU | Eigen::ComputeFullV);
        // Moving the leading singular value by `step` adds step * u1 v1^T in
        // the DCT domain; map that back through the inverse DCT and Haar.
        const Eigen::MatrixXd dm = step * svd.matrixU().col(0) * svd.matrixV().col(0).transpose();
        for (int by = 0; by < block_; ++by) {
          for (int bx = 0; bx < block_; ++bx) {
            double acc = 0.0;
            for (int v = 0; v < block_; ++v) {
              for (int u = 0; u < block_; ++u) acc += dm(v, u) * basis(u, v, bx, by);
            }
            add_ll(delta, s.x + bx, s.y + by, acc);
          }
        }
        return;
      }
      case Method::spread_spectrum:
        return;
    }
  }

 private:
  double& basis(int u, int v, int x, int y) {
    return basis_[((static_cast<std::size_t>(u) * block_ + v) * block_ + y) * block_ + x];
  }
  double basis(int u, int v, int x, int y) const {
    return basis_[((static_cast<std::size_t>(u) * block_ + v) * block_ + y) * block_ + x];
  }

  static double ll(const Plane& y, int x, int yy) {
    return 0.5 * (y.at(2 * x, 2 * yy) + y.at(2 * x + 1, 2 * yy) + y.at(2 * x, 2 * yy + 1) +
                  y.at(2 * x + 1, 2 * yy + 1));
  }
  // An LL change of c spreads c/2 over its 2x2 pixel cell.
  static void add_ll(Plane& delta, int x, int y, double c) {
    const double h = 0.5 * c;
    delta.at(2 * x, 2 * y) += h;
    delta.at(2 * x + 1, 2 * y) += h;
    delta.at(2 * x, 2 * y + 1) += h;
    delta.at(2 * x + 1, 2 * y + 1) += h;
  }

  // DCT of one LL block, indexed (v, u).
  Eigen::MatrixXd coefficients(const Plane& y, const Slot& s) const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(block_, block_);
    for (int by = 0; by < block_; ++by) {
      for (int bx = 0; bx < block_; ++bx) {
        const double px = ll(y, s.x + bx, s.y + by);
        for (int v = 0; v < block_; ++v) {
          for (int u = 0; u < block_; ++u) m(v, u) += px * basis(u, v, bx, by);
        }
      }
    }
    return m;
  }

  WatermarkerSpec spec_;
  int block_;
  std::vector<Slot> slots_;
  std::vector<double> basis_;
};

double lattice_target(Method method, double v, double step, int bit) {
  double t = qim_embed(v, step, bit);
  // Singular values cannot go negative.
  if (method == Method::dwtdctsvd && t < 0.0) t += 2.0 * step;
  return t;
}

Image embed_qim(const WatermarkerSpec& spec, const Image& cover, const Bits& secret) {
  const QimLayout layout(spec, cover.width(), cover.height());
  Image out = cover;
  // Clamping can pull a slot off its lattice point; later passes re-project
  // from the clamped state.
  for (int pass = 0; pass < kMaxEmbedPasses; ++pass) {
    const Plane y = luma(out);
    Plane delta(y.width, y.height);
    bool changed = false;
    for (std::size_t i = 0; i < layout.size(); ++i) {
      const double v = layout.read(y, i);
      const double t = lattice_target(spec.method, v, spec.quantization_step, secret[i]);
      if (std::abs(t - v) <= kOnLattice) continue;
      layout.shift(y, delta, i, v, t);
      changed = true;
    }
    if (!changed) break;
    out = add_luma(out, delta.v);
  }
  return out;
}

Bits extract_qim(const WatermarkerSpec& spec, const Image& img) {
  const QimLayout layout(spec, img.width(), img.height());
  const Plane y = luma(img);
  Bits bits(layout.size());
  for (std::size_t i = 0; i < layout.size(); ++i) {
    bits[i] = static_cast<std::uint8_t>(qim_decode(layout.read(y, i), spec.quantization_step));
  }
  return bits;
}

// y minus its 3x3 mean (replicated border). Suppresses the smooth cover
// content that would otherwise dominate the correlation.
Eigen::VectorXd high_pass(const double* y, int w, int h) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(w) * h);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      double acc = 0.0;
      for (int dy = -1; dy <= 1; ++dy) {
        const int yy = std::clamp(r + dy, 0, h - 1);
        for (int dx = -1; dx <= 1; ++dx) {
          acc += y[static_cast<std::size_t>(yy) * w + std::clamp(c + dx, 0, w - 1)];
        }
      }
      out(static_cast<Eigen::Index>(r) * w + c) = y[static_cast<std::size_t>(r) * w + c] - acc / 9.0;
    }
  }
  return out;
}

// Key-independent orthonormal basis B (N x m) shared by every spread-spectrum
// instance of a given image size and capacity. Keys pick a rotation inside
// it, so differently keyed marks compete for the same subspace.
struct SharedBasis {
  Eigen::MatrixXd basis;
  // LU of B^T H B, H the detector's high-pass.
  Eigen::PartialPivLU<Eigen::MatrixXd> response;
  double mean_gain = 1.0;
};

std::shared_ptr<const SharedBasis> shared_basis(int width, int height, std::size_t m) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, std::size_t>, std::shared_ptr<const SharedBasis>> cache;
  const std::lock_guard lock(mutex);
  const auto key = std::make_tuple(width, height, m);
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  const Eigen::Index n = static_cast<Eigen::Index>(width) * height;
  const auto mm = static_cast<Eigen::Index>(m);
  Rng rng(derive_seed({kSharedBasisSeed, static_cast<std::uint64_t>(width),
                       static_cast<std::uint64_t>(height), m}));
  Eigen::MatrixXd noise(n, mm);
  for (Eigen::Index j = 0; j < mm; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) noise(i, j) = rng.normal();
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(noise);
  auto shared = std::make_shared<SharedBasis>();
  shared->basis = qr.householderQ() * Eigen::MatrixXd::Identity(n, mm);
  Eigen::MatrixXd filtered(n, mm);
  for (Eigen::Index j = 0; j < mm; ++j) filtered.col(j) = high_pass(shared->basis.col(j).data(), width, height);
  const Eigen::MatrixXd response = shared->basis.transpose() * filtered;
  shared->response.compute(response);
  shared->mean_gain = response.trace() / static_cast<double>(m);
  cache.emplace(key, shared);
  return shared;
}

Eigen::MatrixXd key_rotation(std::uint64_t key, std::size_t m) {
  Rng rng(derive_seed({key, hash_name("spread_spectrum-rotation"), m}));
  const auto mm = static_cast<Eigen::Index>(m);
  Eigen::MatrixXd g(mm, mm);
  for (Eigen::Index j = 0; j < mm; ++j) {
    for (Eigen::Index i = 0; i < mm; ++i) g(i, j) = rng.normal();
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  return qr.householderQ() * Eigen::MatrixXd::Identity(mm, mm);
}

// Detector statistic B^T H y, before the key rotation.
Eigen::VectorXd projections(const SharedBasis& shared, const Image& img) {
  const auto y = luma_plane(img);
  return shared.basis.transpose() * high_pass(y.data(), img.width(), img.height());
}

void check_spread_capacity(const WatermarkerSpec& spec, int width, int height) {
  const std::size_t available = available_slots(spec, width, height);
  if (spec.capacity_bits > available) {
    throw CapacityError("spread_spectrum: capacity " + std::to_string(spec.capacity_bits) +
                        " exceeds the " + std::to_string(available) + " carriers of a " +
                        std::to_string(width) + "x" + std::to_string(height) + " image");
  }
}

// Informed embedding: the carrier weights are solved so the detector
// statistic lands exactly on A Q s, cancelling whatever the cover (or an
// earlier mark) already contributes in the shared subspace.
Image embed_spread(const WatermarkerSpec& spec, const Image& cover, const Bits& secret) {
  check_spread_capacity(spec, cover.width(), cover.height());
  const std::size_t m = spec.capacity_bits;
  const auto shared = shared_basis(cover.width(), cover.height(), m);
  Eigen::VectorXd signs(static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) signs(static_cast<Eigen::Index>(i)) = secret[i] ? 1.0 : -1.0;
  // Unit-weight orthonormal carriers; this amplitude puts the pattern's RMS
  // at embed_strength.
  const double amplitude = spec.embed_strength * shared->mean_gain *
                           std::sqrt(static_cast<double>(shared->basis.rows()) / static_cast<double>(m));
  const Eigen::VectorXd target = amplitude * (key_rotation(spec.key, m) * signs);

  Image out = cover;
  for (int pass = 0; pass < kMaxSpreadPasses; ++pass) {
    const Eigen::VectorXd miss = target - projections(*shared, out);
    if (miss.norm() <= 1e-6 * target.norm()) break;
    const Eigen::VectorXd pattern = shared->basis * shared->response.solve(miss);
    out = add_luma(out, std::span<const double>(pattern.data(), static_cast<std::size_t>(pattern.size())));
  }
  return out;
}

Bits extract_spread(const WatermarkerSpec& spec, const Image& img) {
  check_spread_capacity(spec, img.width(), img.height());
  const std::size_t m = spec.capacity_bits;
  const auto shared = shared_basis(img.width(), img.height(), m);
  const Eigen::VectorXd corr = key_rotation(spec.key, m).transpose() * projections(*shared, img);
  Bits bits(m);
  for (std::size_t i = 0; i < m; ++i) bits[i] = corr(static_cast<Eigen::Index>(i)) > 0.0 ? 1 : 0;
  return bits;
}

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::dct: return "dct";
    case Method::dwt: return "dwt";
    case Method::dwtdct: return "dwtdct";
    case Method::dwtdctsvd: return "dwtdctsvd";
    case Method::spread_spectrum: return "spread_spectrum";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (auto m : {Method::dct, Method::dwt, Method::dwtdct, Method::dwtdctsvd, Method::spread_spectrum}) {
    if (name == to_string(m)) return m;
  }
  throw ConfigError("unknown method '" + std::string(name) + "' (valid: " + std::string(kMethodNames) + ")");
}

WatermarkerSpec WatermarkerSpec::defaults(Method method, std::uint64_t key) {
  WatermarkerSpec s;
  s.method = method;
  s.key = key;
  switch (method) {
    case Method::dct:
    case Method::dwtdct:
      s.quantization_step = 12.0;
      s.block_size = 8;
      break;
    case Method::dwt:
      s.quantization_step = 24.0;
      s.block_size = 8;
      break;
    case Method::dwtdctsvd:
      s.quantization_step = 8.0;
      s.block_size = 4;
      break;
    case Method::spread_spectrum:
      s.block_size = 8;
      break;
  }
  return s;
}

void WatermarkerSpec::validate() const {
  if (capacity_bits < 1) throw ConfigError("capacity_bits must be >= 1");
  if (!(quantization_step > 0.0) || !std::isfinite(quantization_step)) {
    throw ConfigError("quantization_step must be > 0");
  }
  if (!(embed_strength > 0.0) || !std::isfinite(embed_strength)) {
    throw ConfigError("embed_strength must be > 0");
  }
  const int min_block = method == Method::dwtdctsvd ? 2 : 4;
  if ((method == Method::dct || method == Method::dwtdct || method == Method::dwtdctsvd) &&
      (block_size < min_block || block_size > 64)) {
    throw ConfigError("block_size must lie in [" + std::to_string(min_block) + ", 64]");
  }
}

std::size_t available_slots(const WatermarkerSpec& spec, int width, int height) {
  const auto w = static_cast<std::size_t>(std::max(width, 0));
  const auto h = static_cast<std::size_t>(std::max(height, 0));
  const auto b = static_cast<std::size_t>(spec.block_size);
  switch (spec.method) {
    case Method::dct: return (w / b) * (h / b);
    case Method::dwt: return 2 * (w / 2) * (h / 2);
    case Method::dwtdct:
    case Method::dwtdctsvd: return ((w / 2) / b) * ((h / 2) / b);
    case Method::spread_spectrum: return w * h / 64;
  }
  return 0;
}

double qim_embed(double v, double step, int bit) {
  const double offset = bit ? step : 0.0;
  const double t = std::round((v - offset) / (2.0 * step));
  return 2.0 * step * t + offset;
}

int qim_decode(double v, double step) {
  const double d0 = std::abs(v - qim_embed(v, step, 0));
  const double d1 = std::abs(v - qim_embed(v, step, 1));
  return d1 < d0 ? 1 : 0;
}

Image embed(const WatermarkerSpec& spec, const Image& cover, const Bits& secret) {
  spec.validate();
  if (secret.size() != spec.capacity_bits) {
    throw LengthError("secret has " + std::to_string(secret.size()) + " bits, capacity is " +
                      std::to_string(spec.capacity_bits));
  }
  if (spec.method == Method::spread_spectrum) return embed_spread(spec, cover, secret);
  return embed_qim(spec, cover, secret);
}

Bits extract(const WatermarkerSpec& spec, const Image& img) {
  spec.validate();
  if (spec.method == Method::spread_spectrum) return extract_spread(spec, img);
  return extract_qim(spec, img);
}

ClassicWatermarker::ClassicWatermarker(WatermarkerSpec spec) : spec_(spec) { spec_.validate(); }

Image ClassicWatermarker::embed(const Image& cover, const Bits& secret) const {
  return wmx::embed(spec_, cover, secret);
}

Bits ClassicWatermarker::extract(const Image& img) const { return wmx::extract(spec_, img); }

std::shared_ptr<const Watermarker> ClassicWatermarker::second_instance() const {
  if (spec_.method != Method::spread_spectrum) return nullptr;
  WatermarkerSpec other = spec_;
  other.key = mix64(spec_.key ^ 0xa5a5a5a5a5a5a5a5ULL);
  return std::make_shared<ClassicWatermarker>(other);
}

WatermarkerPtr make_watermarker(const WatermarkerSpec& spec) {
  return std::make_shared<ClassicWatermarker>(spec);
}

}  // namespace wmx
