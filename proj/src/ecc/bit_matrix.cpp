#include <algorithm>
#include <bit>
#include <utility>

#include "wmx/ecc.hpp"
#include "wmx/error.hpp"

namespace wmx::ecc {

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), stride_((cols + 63) / 64), data_(rows * stride_, 0) {}

BitMatrix BitMatrix::from_rows(const std::vector<Bits>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  BitMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw DimensionError("BitMatrix::from_rows: ragged rows");
    for (std::size_t c = 0; c < cols; ++c) m.set(r, c, rows[r][c] != 0);
  }
  return m;
}

Bits BitMatrix::row_bits(std::size_t r) const {
  Bits out(cols_);
  for (std::size_t c = 0; c < cols_; ++c) out[c] = get(r, c) ? 1 : 0;
  return out;
}

void BitMatrix::add_row(std::size_t r, std::size_t s) {
  auto dst = row(r);
  const auto src = std::as_const(*this).row(s);
  for (std::size_t w = 0; w < stride_; ++w) dst[w] ^= src[w];
}

void BitMatrix::swap_rows(std::size_t r, std::size_t s) {
  if (r == s) return;
  auto a = row(r);
  auto b = row(s);
  std::swap_ranges(a.begin(), a.end(), b.begin());
}

std::size_t BitMatrix::rank() const {
  BitMatrix m = *this;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols_ && rank < rows_; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows_ && !m.get(pivot, c)) ++pivot;
    if (pivot == rows_) continue;
    m.swap_rows(rank, pivot);
    for (std::size_t r = rank + 1; r < rows_; ++r) {
      if (m.get(r, c)) m.add_row(r, rank);
    }
    ++rank;
  }
  return rank;
}

BitMatrix BitMatrix::transpose() const {
  BitMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      if (get(r, c)) t.set(c, r, true);
    }
  }
  return t;
}

BitMatrix BitMatrix::multiply(const BitMatrix& other) const {
  if (cols_ != other.rows_) throw DimensionError("BitMatrix::multiply: inner dimensions differ");
  BitMatrix out(rows_, other.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    auto dst = out.row(r);
    for (std::size_t i = 0; i < cols_; ++i) {
      if (!get(r, i)) continue;
      const auto src = other.row(i);
      for (std::size_t w = 0; w < out.stride_; ++w) dst[w] ^= src[w];
    }
  }
  return out;
}

BitMatrix BitMatrix::select_columns(std::span<const std::size_t> cols) const {
  BitMatrix out(rows_, cols.size());
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t j = 0; j < cols.size(); ++j) out.set(r, j, get(r, cols[j]));
  }
  return out;
}

BitMatrix BitMatrix::delete_columns(std::span<const std::size_t> cols) const {
  std::vector<bool> drop(cols_, false);
  for (auto c : cols) drop.at(c) = true;
  std::vector<std::size_t> keep;
  for (std::size_t c = 0; c < cols_; ++c) {
    if (!drop[c]) keep.push_back(c);
  }
  return select_columns(keep);
}

bool BitMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](std::uint64_t w) { return w == 0; });
}

}  // namespace wmx::ecc
