#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wmx/bits.hpp"

namespace wmx::ecc {

// Dense matrix over GF(2) with rows packed into 64-bit words.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols);

  static BitMatrix from_rows(const std::vector<Bits>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t words_per_row() const { return stride_; }

  bool get(std::size_t r, std::size_t c) const {
    return (data_[r * stride_ + c / 64] >> (c % 64)) & 1U;
  }
  void set(std::size_t r, std::size_t c, bool v) {
    auto& w = data_[r * stride_ + c / 64];
    const std::uint64_t bit = std::uint64_t{1} << (c % 64);
    w = v ? (w | bit) : (w & ~bit);
  }

  std::span<const std::uint64_t> row(std::size_t r) const {
    return {data_.data() + r * stride_, stride_};
  }
  std::span<std::uint64_t> row(std::size_t r) { return {data_.data() + r * stride_, stride_}; }

  Bits row_bits(std::size_t r) const;
  // Row r ^= row s.
  void add_row(std::size_t r, std::size_t s);
  void swap_rows(std::size_t r, std::size_t s);

  std::size_t rank() const;
  BitMatrix transpose() const;
  // Product of this (a x b) with other (b x c).
  BitMatrix multiply(const BitMatrix& other) const;
  // Column subset, in the given order.
  BitMatrix select_columns(std::span<const std::size_t> cols) const;
  BitMatrix delete_columns(std::span<const std::size_t> cols) const;

  bool is_zero() const;
  bool operator==(const BitMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t stride_ = 0;
  std::vector<std::uint64_t> data_;
};

enum class DecoderStrategy {
  syndrome_table,
  exhaustive_codeword,
  majority,
  hadamard,
  info_set_probabilistic,
};

std::string_view to_string(DecoderStrategy s);

struct DecodeResult {
  Bits message;
  Bits codeword;
  std::size_t corrections = 0;
  // True when the result is the unique codeword within floor((d-1)/2) of the
  // received word. False for decodes beyond that radius, and for any
  // information-set decode that had to give up searching.
  bool guaranteed = true;
};

struct DecoderOptions {
  // Syndrome tables stop growing past this many stored error patterns.
  std::size_t syndrome_pattern_budget = std::size_t{1} << 22;
  std::size_t info_set_iterations = 4000;
};

// Binary linear [n, k, d] code. Immutable; copies share decoder tables.
class LinearCode {
 public:
  // Validates that the generator has full row rank and derives a parity-check
  // matrix when none is given (a given one must satisfy G H^T = 0 and have
  // rank n-k). Without an explicit strategy one is chosen from the code size.
  LinearCode(std::string name, BitMatrix generator, std::size_t declared_distance,
             std::optional<BitMatrix> parity_check = std::nullopt,
             std::optional<DecoderStrategy> strategy = std::nullopt, DecoderOptions options = {});

  const std::string& name() const { return name_; }
  std::size_t n() const { return generator_.cols(); }
  std::size_t k() const { return generator_.rows(); }
  std::size_t d() const { return distance_; }
  std::size_t correctable() const { return distance_ == 0 ? 0 : (distance_ - 1) / 2; }
  const BitMatrix& generator() const { return generator_; }
  const BitMatrix& parity_check() const { return parity_check_; }
  DecoderStrategy strategy() const { return strategy_; }

  Bits encode(const Bits& message) const;
  Bits syndrome(const Bits& word) const;
  bool is_codeword(const Bits& word) const;
  // Inverse of encode on valid codewords.
  Bits message_of(const Bits& codeword) const;

  // nullopt is a decode failure: no codeword within the decoder's reach.
  std::optional<DecodeResult> decode(const Bits& received) const;

 private:
  struct Tables;

  std::optional<DecodeResult> decode_syndrome(const Bits& received) const;
  std::optional<DecodeResult> decode_exhaustive(const Bits& received) const;
  std::optional<DecodeResult> decode_majority(const Bits& received) const;
  std::optional<DecodeResult> decode_hadamard(const Bits& received) const;
  std::optional<DecodeResult> decode_info_set(const Bits& received) const;
  DecodeResult finish(const Bits& received, Bits codeword) const;

  std::string name_;
  BitMatrix generator_;
  BitMatrix parity_check_;
  std::size_t distance_ = 0;
  DecoderStrategy strategy_ = DecoderStrategy::syndrome_table;
  DecoderOptions options_;
  std::shared_ptr<const Tables> tables_;
};

// Minimum nonzero codeword weight by enumerating all 2^k - 1 nonzero
// messages. Throws ConfigError for k > 24.
std::size_t minimum_distance(const LinearCode& code);

// Families. Generator row orders are part of the contract (message bit i
// multiplies row i).
LinearCode repetition(std::size_t n);
LinearCode parity(std::size_t n);
// Systematic [2^m-1, 2^m-1-m, 3]: message first, then m parity bits. The
// parity columns are the nonzero m-bit vectors of weight >= 2, by increasing
// weight, then decreasing value with the first parity bit most significant.
LinearCode hamming(std::size_t m);
LinearCode extended_hamming(std::size_t m);
// First-order Reed-Muller [2^m, m+1, 2^(m-1)]. Row 0 is all ones; row i
// (1..m) is bit i-1 of the coordinate index.
LinearCode reed_muller_1(std::size_t m);
// Cyclic code of the given length generated by g (coefficients, lowest degree
// first); rows are the shifts x^i g(x). g must divide x^length - 1.
// declared_distance = 0 asks for an exact computation (k <= 20 only).
LinearCode cyclic(std::size_t length, const Bits& generator_poly, std::size_t declared_distance = 0);

// Appends an overall parity bit.
LinearCode extend_code(const LinearCode& code);
// Keeps codewords that are zero on the 0-based positions, then deletes them.
LinearCode shorten_code(const LinearCode& code, std::span<const std::size_t> positions);
// Deletes the 0-based positions.
LinearCode puncture_code(const LinearCode& code, std::span<const std::size_t> positions);

// Parses "x^3+x+1", "1+x+x^3" or "x3+x1+1". Coefficients lowest degree first.
Bits parse_polynomial(std::string_view text);

// "repetition(8)", "parity(4)", "hamming(3)", "extended_hamming(3)",
// "reed_muller_1(4)", "cyclic(7,x^3+x+1[,d])", plus the operators
// "extend(<code>)", "shorten(<code>,p,...)" and "puncture(<code>,p,...)".
LinearCode build_named_code(std::string_view spec);

// Text format: first line "n k d"; then k generator rows of n '0'/'1'
// characters; optionally a line "H" followed by n-k parity-check rows.
// Blank lines and lines starting with '#' are ignored.
LinearCode parse_code(std::string_view text, std::string name = "file");
LinearCode read_code_file(const std::filesystem::path& path);
std::string format_code(const LinearCode& code);

// First m1 bits go to the first watermarker, the remaining m2 to the second.
std::pair<Bits, Bits> split_for_ensemble(const Bits& codeword, std::size_t m1, std::size_t m2);
Bits join_from_ensemble(const Bits& first, const Bits& second);

}  // namespace wmx::ecc
