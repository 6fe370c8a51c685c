#include "kronrank/boolmat.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "kronrank/error.hpp"
#include "textio.hpp"

namespace kronrank {

namespace {

std::string dims_str(Dims d) { return std::to_string(d.rows) + "x" + std::to_string(d.cols); }

void require_same_dims(const BoolMatrix& a, const BoolMatrix& b, const char* op) {
  if (a.dims() != b.dims())
    throw DimensionError(std::string(op) + ": dimension mismatch " + dims_str(a.dims()) + " vs " + dims_str(b.dims()));
}

}  // namespace

BoolMatrixBuilder::BoolMatrixBuilder(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), stride_(words_for(cols)), bits_(rows * words_for(cols), 0) {}

BoolMatrixBuilder::BoolMatrixBuilder(const BoolMatrix& start)
    : rows_(start.rows_), cols_(start.cols_), stride_(start.stride_), bits_(start.bits_) {}

void BoolMatrixBuilder::set(std::size_t i, std::size_t j, bool value) {
  if (i >= rows_ || j >= cols_) throw DimensionError("entry (" + std::to_string(i) + "," + std::to_string(j) + ") out of range");
  Word& w = bits_[i * stride_ + j / kWordBits];
  const Word bit = Word{1} << (j % kWordBits);
  w = value ? (w | bit) : (w & ~bit);
}

void BoolMatrixBuilder::or_row(std::size_t i, std::span<const Word> words) {
  Word* dst = bits_.data() + i * stride_;
  for (std::size_t w = 0; w < stride_; ++w) dst[w] |= words[w];
  if (stride_) dst[stride_ - 1] &= tail_mask(cols_);
}

BoolMatrix BoolMatrixBuilder::build() && {
  if (stride_) {
    for (std::size_t i = 0; i < rows_; ++i) bits_[i * stride_ + stride_ - 1] &= tail_mask(cols_);
  }
  return BoolMatrix(rows_, cols_, std::move(bits_));
}

BoolMatrix BoolMatrix::zeros(std::size_t rows, std::size_t cols) { return BoolMatrixBuilder(rows, cols).build(); }

BoolMatrix BoolMatrix::ones(std::size_t rows, std::size_t cols) {
  BoolMatrixBuilder b(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (auto& w : b.row(i)) w = ~Word{0};
  return std::move(b).build();
}

BoolMatrix BoolMatrix::identity(std::size_t n) {
  BoolMatrixBuilder b(n, n);
  for (std::size_t i = 0; i < n; ++i) b.set(i, i);
  return std::move(b).build();
}

BoolMatrix BoolMatrix::from_rows(const std::vector<std::string>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  BoolMatrixBuilder b(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw DimensionError("from_rows: ragged rows");
    for (std::size_t j = 0; j < cols; ++j) {
      const char c = rows[i][j];
      if (c != '0' && c != '1') throw InvalidArgument("from_rows: expected '0' or '1'");
      if (c == '1') b.set(i, j);
    }
  }
  return std::move(b).build();
}

BoolMatrix BoolMatrix::from_rows(std::initializer_list<std::string_view> rows) {
  std::vector<std::string> v;
  for (auto r : rows) v.emplace_back(r);
  return from_rows(v);
}

BoolMatrix boolean_sum(std::span<const BoolMatrix> ms) {
  if (ms.empty()) throw InvalidArgument("boolean_sum: empty list");
  BoolMatrixBuilder out(ms.front());
  for (std::size_t k = 1; k < ms.size(); ++k) {
    require_same_dims(ms.front(), ms[k], "boolean_sum");
    for (std::size_t i = 0; i < ms[k].rows(); ++i) out.or_row(i, ms[k].row(i));
  }
  return std::move(out).build();
}

BoolMatrix boolean_sum(std::initializer_list<BoolMatrix> ms) { return boolean_sum(std::span<const BoolMatrix>(ms.begin(), ms.size())); }

BoolMatrix boolean_product(const BoolMatrix& u, const BoolMatrix& v) {
  if (u.cols() != v.rows())
    throw DimensionError("boolean_product: inner dimensions differ " + dims_str(u.dims()) + " * " + dims_str(v.dims()));
  BoolMatrixBuilder out(u.rows(), v.cols());
  for (std::size_t i = 0; i < u.rows(); ++i) {
    for_each_bit(u.row(i), [&](std::size_t t) { out.or_row(i, v.row(t)); });
  }
  return std::move(out).build();
}

BoolMatrix kronecker(const BoolMatrix& a, const BoolMatrix& b, std::uint64_t limit) {
  const unsigned __int128 rows = static_cast<unsigned __int128>(a.rows()) * b.rows();
  const unsigned __int128 cols = static_cast<unsigned __int128>(a.cols()) * b.cols();
  if (rows * cols > limit)
    throw MaterializationLimit("kronecker: product of " + dims_str(a.dims()) + " and " + dims_str(b.dims()) +
                               " exceeds the materialization limit of " + std::to_string(limit) + " entries");
  BoolMatrixBuilder out(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
  for (std::size_t ia = 0; ia < a.rows(); ++ia) {
    for_each_bit(a.row(ia), [&](std::size_t ja) {
      for (std::size_t ib = 0; ib < b.rows(); ++ib) {
        const std::size_t r = ia * b.rows() + ib;
        for_each_bit(b.row(ib), [&](std::size_t jb) { out.set(r, ja * b.cols() + jb); });
      }
    });
  }
  return std::move(out).build();
}

bool is_rank_one(const BoolMatrix& m) {
  // Every nonzero row must equal the same column pattern.
  const std::size_t stride = m.words_per_row();
  std::span<const Word> pattern;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    if (!words_any(r)) continue;
    if (pattern.empty()) {
      pattern = r;
      continue;
    }
    for (std::size_t w = 0; w < stride; ++w)
      if (r[w] != pattern[w]) return false;
  }
  return !pattern.empty();
}

bool dominated_by(const BoolMatrix& m, const BoolMatrix& a) {
  require_same_dims(m, a, "dominated_by");
  for (std::size_t i = 0; i < m.rows(); ++i)
    if (!words_subset(m.row(i), a.row(i))) return false;
  return true;
}

std::pair<BoolMatrix, BoolMatrix> project_factors(const BoolMatrix& m, Dims a, Dims b) {
  if (m.rows() != a.rows * b.rows || m.cols() != a.cols * b.cols)
    throw DimensionError("project_factors: matrix " + dims_str(m.dims()) + " is not the shape of a " + dims_str(a) +
                         " (x) " + dims_str(b) + " product");
  if (!is_rank_one(m)) throw InvalidArgument("project_factors: matrix is not of Boolean rank 1");
  BoolMatrixBuilder ma(a.rows, a.cols);
  BoolMatrixBuilder mb(b.rows, b.cols);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for_each_bit(m.row(r), [&](std::size_t c) {
      const auto e = EntryIndex4::from_flat(r, c, b);
      ma.set(e.iA, e.jA);
      mb.set(e.iB, e.jB);
    });
  }
  return {std::move(ma).build(), std::move(mb).build()};
}

BoolMatrix transpose(const BoolMatrix& m) {
  BoolMatrixBuilder out(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) for_each_bit(m.row(i), [&](std::size_t j) { out.set(j, i); });
  return std::move(out).build();
}

BoolMatrix leading_submatrix(const BoolMatrix& m, std::size_t rows, std::size_t cols) {
  if (rows > m.rows() || cols > m.cols()) throw DimensionError("leading_submatrix: block larger than matrix");
  BoolMatrixBuilder out(rows, cols);
  const std::size_t stride = words_for(cols);
  for (std::size_t i = 0; i < rows; ++i) out.or_row(i, m.row(i).first(stride));
  return std::move(out).build();
}

void write_matrix(std::ostream& out, const BoolMatrix& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  std::string line(m.cols(), '0');
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) line[j] = m.at(i, j) ? '1' : '0';
    out << line << '\n';
  }
}

std::string to_text(const BoolMatrix& m) {
  std::ostringstream os;
  write_matrix(os, m);
  return os.str();
}

BoolMatrix read_matrix(std::istream& in) {
  textio::LineReader r(in);
  const auto header = textio::split_spaces(r, r.expect("matrix header 'rows cols'"));
  if (header.size() != 2) r.fail(1, "matrix header must be 'rows cols'");
  const auto rows = textio::parse_uint(r, header[0]);
  const auto cols = textio::parse_uint(r, header[1]);
  BoolMatrixBuilder b(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto line = r.expect("matrix row");
    if (line.size() != cols)
      r.fail(std::min(line.size(), static_cast<std::size_t>(cols)) + 1,
             "row has " + std::to_string(line.size()) + " characters, expected " + std::to_string(cols));
    for (std::size_t j = 0; j < cols; ++j) {
      if (line[j] == '1')
        b.set(i, j);
      else if (line[j] != '0')
        r.fail(j + 1, "expected '0' or '1'");
    }
  }
  r.expect_end();
  return std::move(b).build();
}

BoolMatrix parse_matrix(std::string_view text) {
  std::istringstream is{std::string(text)};
  return read_matrix(is);
}

}  // namespace kronrank
