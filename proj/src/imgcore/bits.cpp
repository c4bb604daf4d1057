#include "wmx/bits.hpp"

#include "wmx/error.hpp"

namespace wmx {

Bits random_bits(Rng& rng, std::size_t n) {
  Bits out(n);
  for (auto& b : out) b = static_cast<std::uint8_t>(rng.next() >> 63);
  return out;
}

std::size_t hamming_distance(const Bits& a, const Bits& b) {
  if (a.size() != b.size()) throw LengthError("hamming_distance: length mismatch");
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]);
  return d;
}

std::string to_hex(const Bits& bits) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  for (std::size_t i = 0; i < bits.size(); i += 4) {
    int v = 0;
    for (std::size_t j = 0; j < 4; ++j) {
      v <<= 1;
      if (i + j < bits.size()) v |= bits[i + j] & 1;
    }
    out.push_back(kDigits[v]);
  }
  return out;
}

Bits from_hex(std::string_view hex, std::size_t n) {
  if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
  const std::size_t digits = (n + 3) / 4;
  if (hex.size() != digits) {
    throw LengthError("secret hex has " + std::to_string(hex.size()) + " digits, expected " +
                      std::to_string(digits) + " for " + std::to_string(n) + " bits");
  }
  Bits out;
  out.reserve(digits * 4);
  for (char c : hex) {
    int v;
    if (c >= '0' && c <= '9') v = c - '0';
    else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
    else throw ConfigError(std::string("invalid hex digit '") + c + "'");
    for (int j = 3; j >= 0; --j) out.push_back(static_cast<std::uint8_t>((v >> j) & 1));
  }
  for (std::size_t i = n; i < out.size(); ++i) {
    if (out[i]) throw ConfigError("secret hex has nonzero padding bits");
  }
  out.resize(n);
  return out;
}

std::string to_string(const Bits& bits) {
  std::string s;
  s.reserve(bits.size());
  for (auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

Bits from_string(std::string_view s) {
  Bits out;
  out.reserve(s.size());
  for (char c : s) {
    if (c != '0' && c != '1') throw ConfigError(std::string("invalid bit character '") + c + "'");
    out.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return out;
}

}  // namespace wmx
