#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kronrank/bitvec.hpp"

namespace kronrank {

// Largest number of entries kronecker() will materialize unless told otherwise.
inline constexpr std::uint64_t kDefaultMaterializationLimit = std::uint64_t{1} << 31;

struct Dims {
  std::size_t rows = 0;
  std::size_t cols = 0;
  friend bool operator==(const Dims&, const Dims&) = default;
};

// Dense 0/1 matrix with word-packed rows. Immutable; build with BoolMatrixBuilder.
class BoolMatrix {
 public:
  BoolMatrix() = default;

  static BoolMatrix zeros(std::size_t rows, std::size_t cols);
  static BoolMatrix ones(std::size_t rows, std::size_t cols);
  static BoolMatrix identity(std::size_t n);
  // Each string is one row of '0'/'1' characters.
  static BoolMatrix from_rows(const std::vector<std::string>& rows);
  static BoolMatrix from_rows(std::initializer_list<std::string_view> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Dims dims() const noexcept { return {rows_, cols_}; }
  std::size_t words_per_row() const noexcept { return stride_; }

  bool at(std::size_t i, std::size_t j) const { return (bits_[i * stride_ + j / kWordBits] >> (j % kWordBits)) & 1U; }
  std::span<const Word> row(std::size_t i) const { return {bits_.data() + i * stride_, stride_}; }

  std::size_t count_ones() const { return words_popcount(bits_); }
  bool is_zero() const { return !words_any(bits_); }

  friend bool operator==(const BoolMatrix&, const BoolMatrix&) = default;

 private:
  friend class BoolMatrixBuilder;
  BoolMatrix(std::size_t rows, std::size_t cols, std::vector<Word> bits)
      : rows_(rows), cols_(cols), stride_(words_for(cols)), bits_(std::move(bits)) {}

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t stride_ = 0;
  std::vector<Word> bits_;
};

class BoolMatrixBuilder {
 public:
  BoolMatrixBuilder(std::size_t rows, std::size_t cols);
  explicit BoolMatrixBuilder(const BoolMatrix& start);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  void set(std::size_t i, std::size_t j, bool value = true);
  bool at(std::size_t i, std::size_t j) const { return (bits_[i * stride_ + j / kWordBits] >> (j % kWordBits)) & 1U; }
  // OR a packed row (same width as the matrix) into row i.
  void or_row(std::size_t i, std::span<const Word> words);
  std::span<Word> row(std::size_t i) { return {bits_.data() + i * stride_, stride_}; }

  BoolMatrix build() &&;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::size_t stride_;
  std::vector<Word> bits_;
};

// (iA, jA, iB, jB) coordinates of an entry of a Kronecker product.
struct EntryIndex4 {
  std::size_t iA = 0;
  std::size_t jA = 0;
  std::size_t iB = 0;
  std::size_t jB = 0;

  std::pair<std::size_t, std::size_t> flat(Dims b) const { return {iA * b.rows + iB, jA * b.cols + jB}; }
  static EntryIndex4 from_flat(std::size_t row, std::size_t col, Dims b) {
    return {row / b.rows, col / b.cols, row % b.rows, col % b.cols};
  }
  friend bool operator==(const EntryIndex4&, const EntryIndex4&) = default;
};

// Entrywise OR. Throws on an empty list or mismatched shapes.
BoolMatrix boolean_sum(std::span<const BoolMatrix> ms);
BoolMatrix boolean_sum(std::initializer_list<BoolMatrix> ms);

// Product over the Boolean semiring.
BoolMatrix boolean_product(const BoolMatrix& u, const BoolMatrix& v);

// Throws MaterializationLimit when rows*cols of the result exceeds `limit`.
BoolMatrix kronecker(const BoolMatrix& a, const BoolMatrix& b, std::uint64_t limit = kDefaultMaterializationLimit);

bool is_rank_one(const BoolMatrix& m);

// m <= a entrywise.
bool dominated_by(const BoolMatrix& m, const BoolMatrix& a);

// Projections of a rank-1 submatrix of A (x) B onto the two factors.
std::pair<BoolMatrix, BoolMatrix> project_factors(const BoolMatrix& m, Dims a, Dims b);

BoolMatrix transpose(const BoolMatrix& m);

// Leading rows x cols block.
BoolMatrix leading_submatrix(const BoolMatrix& m, std::size_t rows, std::size_t cols);

// Text format: "rows cols" then one line of 0/1 characters per row.
void write_matrix(std::ostream& out, const BoolMatrix& m);
std::string to_text(const BoolMatrix& m);
BoolMatrix read_matrix(std::istream& in);
BoolMatrix parse_matrix(std::string_view text);

}  // namespace kronrank
