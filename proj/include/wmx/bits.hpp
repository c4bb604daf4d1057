#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "wmx/rng.hpp"

namespace wmx {

// One element per bit, each 0 or 1. Messages here are at most a few hundred
// bits, so the unpacked form keeps indexing and slicing trivial.
using Bits = std::vector<std::uint8_t>;

Bits random_bits(Rng& rng, std::size_t n);

std::size_t hamming_distance(const Bits& a, const Bits& b);

// Big-endian hex: the leftmost digit carries the first four bits. When n is
// not a multiple of four, the final digit is padded with zero bits.
std::string to_hex(const Bits& bits);

// Parses exactly ceil(n/4) hex digits; pad bits must be zero.
Bits from_hex(std::string_view hex, std::size_t n);

// "0101" <-> bits, for tests and code files.
std::string to_string(const Bits& bits);
Bits from_string(std::string_view s);

}  // namespace wmx
