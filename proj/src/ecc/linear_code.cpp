#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "wmx/ecc.hpp"
#include "wmx/error.hpp"
#include "wmx/rng.hpp"

namespace wmx::ecc {
namespace {

using Words = std::vector<std::uint64_t>;

Words pack(const Bits& bits) {
  Words w((bits.size() + 63) / 64, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) w[i / 64] |= std::uint64_t{1} << (i % 64);
  }
  return w;
}

Bits unpack(std::span<const std::uint64_t> words, std::size_t n) {
  Bits out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = (words[i / 64] >> (i % 64)) & 1U;
  return out;
}

std::size_t popcount_xor(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::popcount(a[i] ^ b[i]);
  return d;
}

// Reduced row echelon form; returns pivot columns in row order.
std::vector<std::size_t> rref(BitMatrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && !m.get(p, c)) ++p;
    if (p == m.rows()) continue;
    m.swap_rows(r, p);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i != r && m.get(i, c)) m.add_row(i, r);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

BitMatrix derive_parity_check(const BitMatrix& generator) {
  BitMatrix reduced = generator;
  const auto pivots = rref(reduced);
  const std::size_t n = generator.cols(), k = generator.rows();
  std::vector<bool> is_pivot(n, false);
  for (auto p : pivots) is_pivot[p] = true;
  BitMatrix h(n - k, n);
  std::size_t j = 0;
  for (std::size_t q = 0; q < n; ++q) {
    if (is_pivot[q]) continue;
    h.set(j, q, true);
    for (std::size_t i = 0; i < k; ++i) {
      if (reduced.get(i, q)) h.set(j, pivots[i], true);
    }
    ++j;
  }
  return h;
}

BitMatrix invert_square(const BitMatrix& a) {
  const std::size_t k = a.rows();
  BitMatrix aug(k, 2 * k);
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = 0; c < k; ++c) aug.set(r, c, a.get(r, c));
    aug.set(r, k + r, true);
  }
  const auto pivots = rref(aug);
  if (pivots.size() < k || pivots[k - 1] >= k) throw Error("information set is singular");
  std::vector<std::size_t> right(k);
  std::iota(right.begin(), right.end(), k);
  return aug.select_columns(right);
}

std::uint64_t binomial_sum(std::size_t n, std::size_t t) {
  std::uint64_t total = 0, c = 1;
  for (std::size_t i = 0; i <= t && i <= n; ++i) {
    if (i > 0) c = c * (n - i + 1) / i;
    total += c;
    if (total > (std::uint64_t{1} << 40)) return total;
  }
  return total;
}

}  // namespace

std::string_view to_string(DecoderStrategy s) {
  switch (s) {
    case DecoderStrategy::syndrome_table: return "syndrome_table";
    case DecoderStrategy::exhaustive_codeword: return "exhaustive_codeword";
    case DecoderStrategy::majority: return "majority";
    case DecoderStrategy::hadamard: return "hadamard";
    case DecoderStrategy::info_set_probabilistic: return "info_set_probabilistic";
  }
  return "unknown";
}

struct LinearCode::Tables {
  std::vector<std::size_t> info_set;
  BitMatrix info_inverse;  // (G restricted to info_set)^-1
  // Syndrome -> coset leader error positions.
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> leaders;
  std::vector<std::uint64_t> column_syndromes;
};

LinearCode::LinearCode(std::string name, BitMatrix generator, std::size_t declared_distance,
                       std::optional<BitMatrix> parity_check,
                       std::optional<DecoderStrategy> strategy, DecoderOptions options)
    : name_(std::move(name)),
      generator_(std::move(generator)),
      distance_(declared_distance),
      options_(options) {
  const std::size_t n = generator_.cols(), k = generator_.rows();
  if (k == 0 || n < k) throw ConfigError(name_ + ": need 1 <= k <= n");
  if (generator_.rank() != k) throw ConfigError(name_ + ": generator rows are linearly dependent");
  if (declared_distance == 0 || declared_distance > n - k + 1) {
    throw ConfigError(name_ + ": declared distance violates 1 <= d <= n-k+1");
  }

  if (parity_check) {
    if (parity_check->rows() != n - k || parity_check->cols() != n ||
        parity_check->rank() != n - k) {
      throw ConfigError(name_ + ": parity-check matrix must be a full-rank (n-k) x n matrix");
    }
    parity_check_ = std::move(*parity_check);
  } else {
    parity_check_ = derive_parity_check(generator_);
  }
  if (n > k && !generator_.multiply(parity_check_.transpose()).is_zero()) {
    throw ConfigError(name_ + ": G H^T != 0");
  }

  auto tables = std::make_shared<Tables>();
  {
    BitMatrix reduced = generator_;
    tables->info_set = rref(reduced);
    tables->info_inverse = invert_square(generator_.select_columns(tables->info_set));
  }

  const std::size_t r = n - k;
  const std::size_t t = correctable();
  auto syndrome_feasible = [&] {
    return r <= 24 && binomial_sum(n, t) <= options_.syndrome_pattern_budget;
  };

  if (strategy) {
    strategy_ = *strategy;
    if (strategy_ == DecoderStrategy::majority) {
      if (k != 1 || generator_.row_bits(0) != Bits(n, 1)) {
        throw ConfigError(name_ + ": majority decoding needs a repetition code");
      }
    } else if (strategy_ == DecoderStrategy::hadamard) {
      const bool pow2 = std::has_single_bit(n) && n >= 2;
      bool ok = pow2 && (std::size_t{1} << (k - 1)) == n;
      for (std::size_t row = 0; ok && row < k; ++row) {
        for (std::size_t j = 0; ok && j < n; ++j) {
          const bool expect = row == 0 ? true : ((j >> (row - 1)) & 1U);
          ok = generator_.get(row, j) == expect;
        }
      }
      if (!ok) throw ConfigError(name_ + ": hadamard decoding needs the first-order Reed-Muller layout");
    } else if (strategy_ == DecoderStrategy::syndrome_table && !syndrome_feasible()) {
      throw ConfigError(name_ + ": syndrome table too large for this code");
    } else if (strategy_ == DecoderStrategy::exhaustive_codeword && k > 20) {
      throw ConfigError(name_ + ": exhaustive decoding limited to k <= 20");
    }
  } else if (syndrome_feasible()) {
    strategy_ = DecoderStrategy::syndrome_table;
  } else if (k <= 20) {
    strategy_ = DecoderStrategy::exhaustive_codeword;
  } else {
    strategy_ = DecoderStrategy::info_set_probabilistic;
  }

  if (strategy_ == DecoderStrategy::syndrome_table) {
    tables->column_syndromes.assign(n, 0);
    for (std::size_t row = 0; row < r; ++row) {
      for (std::size_t j = 0; j < n; ++j) {
        if (parity_check_.get(row, j)) tables->column_syndromes[j] |= std::uint64_t{1} << row;
      }
    }
    // Coset leaders by increasing weight. Weights up to t are always complete;
    // heavier leaders are added while the budget lasts, which extends decoding
    // beyond the guaranteed radius.
    const std::uint64_t full = std::uint64_t{1} << r;
    std::size_t examined = 0;
    std::vector<std::uint32_t> pos;
    for (std::size_t w = 0; w <= n && tables->leaders.size() < full; ++w) {
      if (w > t && examined + binomial_sum(n, w) - binomial_sum(n, w - 1) >
                       options_.syndrome_pattern_budget) {
        break;
      }
      pos.resize(w);
      std::iota(pos.begin(), pos.end(), 0U);
      while (true) {
        std::uint64_t s = 0;
        for (auto p : pos) s ^= tables->column_syndromes[p];
        tables->leaders.try_emplace(s, pos);
        ++examined;
        // Next combination in lexicographic order.
        std::size_t i = w;
        while (i > 0 && pos[i - 1] == n - w + i - 1) --i;
        if (i == 0) break;
        ++pos[i - 1];
        for (std::size_t j = i; j < w; ++j) pos[j] = pos[j - 1] + 1;
      }
    }
  }
  tables_ = std::move(tables);
}

Bits LinearCode::encode(const Bits& message) const {
  if (message.size() != k()) {
    throw LengthError(name_ + ": message has " + std::to_string(message.size()) + " bits, expected " +
                      std::to_string(k()));
  }
  Words acc(generator_.words_per_row(), 0);
  for (std::size_t i = 0; i < k(); ++i) {
    if (!message[i]) continue;
    const auto row = generator_.row(i);
    for (std::size_t w = 0; w < acc.size(); ++w) acc[w] ^= row[w];
  }
  return unpack(acc, n());
}

Bits LinearCode::syndrome(const Bits& word) const {
  if (word.size() != n()) throw LengthError(name_ + ": word length does not match n");
  const Words packed = pack(word);
  Bits s(n() - k());
  for (std::size_t row = 0; row < s.size(); ++row) {
    const auto h = parity_check_.row(row);
    std::size_t ones = 0;
    for (std::size_t w = 0; w < packed.size(); ++w) ones += std::popcount(h[w] & packed[w]);
    s[row] = ones & 1U;
  }
  return s;
}

bool LinearCode::is_codeword(const Bits& word) const {
  const Bits s = syndrome(word);
  return std::all_of(s.begin(), s.end(), [](auto b) { return b == 0; });
}

Bits LinearCode::message_of(const Bits& codeword) const {
  if (codeword.size() != n()) throw LengthError(name_ + ": codeword length does not match n");
  const auto& inv = tables_->info_inverse;
  Words acc(inv.words_per_row(), 0);
  for (std::size_t i = 0; i < k(); ++i) {
    if (!codeword[tables_->info_set[i]]) continue;
    const auto row = inv.row(i);
    for (std::size_t w = 0; w < acc.size(); ++w) acc[w] ^= row[w];
  }
  return unpack(acc, k());
}

DecodeResult LinearCode::finish(const Bits& received, Bits codeword) const {
  DecodeResult res;
  res.corrections = hamming_distance(received, codeword);
  res.guaranteed = res.corrections <= correctable();
  res.message = message_of(codeword);
  res.codeword = std::move(codeword);
  return res;
}

std::optional<DecodeResult> LinearCode::decode(const Bits& received) const {
  if (received.size() != n()) {
    throw LengthError(name_ + ": received word has " + std::to_string(received.size()) +
                      " bits, expected " + std::to_string(n()));
  }
  switch (strategy_) {
    case DecoderStrategy::syndrome_table: return decode_syndrome(received);
    case DecoderStrategy::exhaustive_codeword: return decode_exhaustive(received);
    case DecoderStrategy::majority: return decode_majority(received);
    case DecoderStrategy::hadamard: return decode_hadamard(received);
    case DecoderStrategy::info_set_probabilistic: return decode_info_set(received);
  }
  return std::nullopt;
}

std::optional<DecodeResult> LinearCode::decode_syndrome(const Bits& received) const {
  std::uint64_t s = 0;
  for (std::size_t j = 0; j < n(); ++j) {
    if (received[j]) s ^= tables_->column_syndromes[j];
  }
  const auto it = tables_->leaders.find(s);
  if (it == tables_->leaders.end()) return std::nullopt;
  Bits cw = received;
  for (auto p : it->second) cw[p] ^= 1U;
  return finish(received, std::move(cw));
}

std::optional<DecodeResult> LinearCode::decode_exhaustive(const Bits& received) const {
  const Words r = pack(received);
  Words cw(r.size(), 0);
  std::size_t best = popcount_xor(cw, r);
  Words best_cw = cw;
  const std::uint64_t total = std::uint64_t{1} << k();
  // Gray-code walk: step i flips message bit ctz(i).
  for (std::uint64_t i = 1; i < total; ++i) {
    const auto row = generator_.row(static_cast<std::size_t>(std::countr_zero(i)));
    for (std::size_t w = 0; w < cw.size(); ++w) cw[w] ^= row[w];
    const std::size_t d = popcount_xor(cw, r);
    if (d < best) {
      best = d;
      best_cw = cw;
    }
  }
  return finish(received, unpack(best_cw, n()));
}

std::optional<DecodeResult> LinearCode::decode_majority(const Bits& received) const {
  const std::size_t ones = std::count(received.begin(), received.end(), 1);
  if (2 * ones == n()) return std::nullopt;
  return finish(received, Bits(n(), 2 * ones > n() ? 1 : 0));
}

std::optional<DecodeResult> LinearCode::decode_hadamard(const Bits& received) const {
  const std::size_t len = n();
  std::vector<long> f(len);
  for (std::size_t j = 0; j < len; ++j) f[j] = received[j] ? -1 : 1;
  for (std::size_t h = 1; h < len; h <<= 1) {
    for (std::size_t i = 0; i < len; i += 2 * h) {
      for (std::size_t j = i; j < i + h; ++j) {
        const long a = f[j], b = f[j + h];
        f[j] = a + b;
        f[j + h] = a - b;
      }
    }
  }
  std::size_t best = 0;
  for (std::size_t u = 1; u < len; ++u) {
    if (std::labs(f[u]) > std::labs(f[best])) best = u;
  }
  Bits message(k());
  message[0] = f[best] < 0 ? 1 : 0;
  for (std::size_t i = 1; i < k(); ++i) message[i] = (best >> (i - 1)) & 1U;
  return finish(received, encode(message));
}

std::optional<DecodeResult> LinearCode::decode_info_set(const Bits& received) const {
  const Words r = pack(received);
  std::uint64_t seed = 0;
  for (auto w : r) seed = mix64(seed ^ w);
  Rng rng(seed);

  std::vector<std::size_t> order(n());
  std::iota(order.begin(), order.end(), 0);
  std::size_t best = std::numeric_limits<std::size_t>::max();
  Words best_cw;
  for (std::size_t iter = 0; iter < options_.info_set_iterations; ++iter) {
    for (std::size_t i = n(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    BitMatrix g = generator_;
    std::vector<std::size_t> pivot_cols;
    std::size_t rank = 0;
    for (std::size_t idx = 0; idx < n() && rank < k(); ++idx) {
      const std::size_t c = order[idx];
      std::size_t p = rank;
      while (p < k() && !g.get(p, c)) ++p;
      if (p == k()) continue;
      g.swap_rows(rank, p);
      for (std::size_t row = 0; row < k(); ++row) {
        if (row != rank && g.get(row, c)) g.add_row(row, rank);
      }
      pivot_cols.push_back(c);
      ++rank;
    }
    // Row i of g is the unit vector on pivot_cols[i], so copying the
    // received bits there gives the unique codeword agreeing on them.
    Words cw(r.size(), 0);
    for (std::size_t i = 0; i < k(); ++i) {
      if (!received[pivot_cols[i]]) continue;
      const auto row = g.row(i);
      for (std::size_t w = 0; w < cw.size(); ++w) cw[w] ^= row[w];
    }
    const std::size_t d = popcount_xor(cw, r);
    if (d < best) {
      best = d;
      best_cw = cw;
    }
    if (best <= correctable()) break;
  }
  DecodeResult res = finish(received, unpack(best_cw, n()));
  // Within the radius the codeword is unique, so finding it settles the
  // answer; outside it nothing is promised.
  res.guaranteed = best <= correctable();
  return res;
}

std::size_t minimum_distance(const LinearCode& code) {
  if (code.k() > 24) throw ConfigError("minimum_distance: k too large to enumerate");
  const auto& g = code.generator();
  Words cw(g.words_per_row(), 0);
  std::size_t best = code.n();
  const std::uint64_t total = std::uint64_t{1} << code.k();
  for (std::uint64_t i = 1; i < total; ++i) {
    const auto row = g.row(static_cast<std::size_t>(std::countr_zero(i)));
    std::size_t w = 0;
    for (std::size_t j = 0; j < cw.size(); ++j) {
      cw[j] ^= row[j];
      w += std::popcount(cw[j]);
    }
    best = std::min(best, w);
  }
  return best;
}

std::pair<Bits, Bits> split_for_ensemble(const Bits& codeword, std::size_t m1, std::size_t m2) {
  if (codeword.size() != m1 + m2) {
    throw LengthError("split_for_ensemble: codeword has " + std::to_string(codeword.size()) +
                      " bits, capacities sum to " + std::to_string(m1 + m2));
  }
  return {Bits(codeword.begin(), codeword.begin() + static_cast<std::ptrdiff_t>(m1)),
          Bits(codeword.begin() + static_cast<std::ptrdiff_t>(m1), codeword.end())};
}

Bits join_from_ensemble(const Bits& first, const Bits& second) {
  Bits out = first;
  out.insert(out.end(), second.begin(), second.end());
  return out;
}

}  // namespace wmx::ecc
