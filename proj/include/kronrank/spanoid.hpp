#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kronrank/bitvec.hpp"
#include "kronrank/boolmat.hpp"
#include "kronrank/cover.hpp"

namespace kronrank {

// Universe {0, ..., size-1}; subsets are BitVectors of that size.
class Spanoid {
 public:
  virtual ~Spanoid() = default;

  virtual std::size_t universe_size() const = 0;
  // True when some rule (S, i) has S contained in t. Monotone in t, and true whenever i is in t.
  virtual bool infers(const BitVector& t, std::size_t i) const = 0;
  // Closure of t under inference. Subclasses may override with a faster equivalent.
  virtual BitVector span(const BitVector& t) const;

  BitVector empty_set() const { return BitVector(universe_size()); }
  BitVector make_set(const std::vector<std::size_t>& elems) const;
  bool spans_all(const BitVector& t) const { return span(t).all(); }
};

// Fixed point of single inference steps, always via infers().
BitVector generic_span(const Spanoid& s, const BitVector& t);

struct SpanoidRule {
  std::vector<std::size_t> premises;
  std::size_t conclusion = 0;
  friend bool operator==(const SpanoidRule&, const SpanoidRule&) = default;
};

class ExplicitSpanoid : public Spanoid {
 public:
  // Throws InvalidArgument on an element outside the universe.
  ExplicitSpanoid(std::size_t universe, std::vector<SpanoidRule> rules);

  std::size_t universe_size() const override { return universe_; }
  bool infers(const BitVector& t, std::size_t i) const override;
  const std::vector<SpanoidRule>& rules() const noexcept { return rules_; }

 private:
  std::size_t universe_;
  std::vector<SpanoidRule> rules_;
  std::vector<BitVector> premise_sets_;
};

inline constexpr std::size_t kMatrixSpanoidCap = 10'000;

// Universe: every rank-1 M <= A, as (rows, cols) pairs ordered by column mask, then row mask.
class MatrixSpanoid : public Spanoid {
 public:
  // Throws BudgetExceeded when the universe would exceed `cap`; InvalidArgument beyond 63 rows or columns.
  explicit MatrixSpanoid(BoolMatrix a, std::size_t cap = kMatrixSpanoidCap);

  std::size_t universe_size() const override { return elements_.size(); }
  bool infers(const BitVector& t, std::size_t i) const override;
  BitVector span(const BitVector& t) const override;

  const BoolMatrix& matrix() const noexcept { return a_; }
  const Rectangle& element(std::size_t i) const { return elements_.at(i); }
  // Index of the rectangle rows x cols, if it is an element.
  std::optional<std::size_t> find(const Rectangle& r) const;

 private:
  BitVector support_union(const BitVector& t) const;

  BoolMatrix a_;
  std::vector<Rectangle> elements_;
  std::vector<BitVector> supports_;  // flattened row-major entries
};

inline constexpr std::size_t kProductUniverseCap = 100;

// Element (i, j) of U1 x U2 is i * |U2| + j.
class ProductSpanoid : public Spanoid {
 public:
  // Throws BudgetExceeded when |U1| * |U2| exceeds `cap`.
  ProductSpanoid(std::shared_ptr<const Spanoid> s1, std::shared_ptr<const Spanoid> s2, std::size_t cap = kProductUniverseCap);

  std::size_t universe_size() const override { return n1_ * n2_; }
  bool infers(const BitVector& t, std::size_t e) const override;
  BitVector span(const BitVector& t) const override;

  std::size_t pair(std::size_t i, std::size_t j) const { return i * n2_ + j; }
  const Spanoid& first() const { return *s1_; }
  const Spanoid& second() const { return *s2_; }

 private:
  BitVector column_slice(const BitVector& t, std::size_t j) const;
  BitVector row_slice(const BitVector& t, std::size_t i) const;

  std::shared_ptr<const Spanoid> s1_, s2_;
  std::size_t n1_, n2_;
};

struct SpanoidRankOptions {
  std::size_t max_size = 6;
  std::uint64_t budget = 50'000'000;  // spanning tests
};

struct SpanoidRank {
  bool exact = false;
  std::size_t lower = 0;  // no smaller set spans
  std::size_t upper = 0;  // size of `witness`
  std::vector<std::size_t> witness;  // lexicographically first spanning set of size upper
  std::uint64_t checked = 0;
};

// Iterative deepening over subset sizes.
SpanoidRank spanoid_rank(const Spanoid& s, const SpanoidRankOptions& opts = {});

struct ProductBound {
  bool ok = false;
  std::optional<std::size_t> witness;  // element of U1 whose collected N-sets fail to span U2
  std::size_t bound = 0;               // sum_t |M_t| |N_t|
  std::size_t spanning_set_size = 0;   // |union_t M_t x N_t|
  bool product_spans = false;
};

// Checks the hypothesis per element of U1, then that union_t M_t x N_t spans the product.
ProductBound check_product_bound(const std::shared_ptr<const Spanoid>& s1, const std::shared_ptr<const Spanoid>& s2,
                                 const std::vector<BitVector>& mSets, const std::vector<BitVector>& nSets);

// "SPANOID u r" then r lines "S: i1,...,ik -> j"; or a single line "MATSPANOID <matrix-file>",
// resolved against `base_dir`.
std::shared_ptr<const Spanoid> read_spanoid(std::istream& in, const std::string& base_dir = ".");
std::shared_ptr<const Spanoid> load_spanoid(const std::string& path);
void write_spanoid(std::ostream& out, const ExplicitSpanoid& s);

// "SETS s" then s lines, each a comma-separated list or "-" for the empty set.
std::vector<std::vector<std::size_t>> read_sets(std::istream& in);
void write_sets(std::ostream& out, const std::vector<std::vector<std::size_t>>& sets);

}  // namespace kronrank
