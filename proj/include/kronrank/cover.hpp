#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kronrank/boolmat.hpp"

namespace kronrank {

using Index = std::uint32_t;

// An all-ones block rows x cols. Both index lists are sorted, distinct and nonempty.
struct Rectangle {
  std::vector<Index> rows;
  std::vector<Index> cols;

  // Sorts and deduplicates; throws InvalidArgument on an empty side.
  static Rectangle make(std::vector<Index> rows, std::vector<Index> cols);

  std::uint64_t area() const { return static_cast<std::uint64_t>(rows.size()) * cols.size(); }
  BoolMatrix to_matrix(Dims dims) const;
  friend bool operator==(const Rectangle&, const Rectangle&) = default;
};

// Ordered list of rectangles certifying a cover of a rows x cols target.
struct Cover {
  Dims dims;
  std::vector<Rectangle> rects;

  std::size_t size() const noexcept { return rects.size(); }
  // Boolean sum of the rectangles.
  BoolMatrix to_matrix() const;
  friend bool operator==(const Cover&, const Cover&) = default;
};

// Equal-shape matrices, each optionally carrying a rank-1 decomposition.
class MatrixFamily {
 public:
  MatrixFamily() = default;
  explicit MatrixFamily(Dims dims) : dims_(dims) {}

  // Each member is the Boolean sum of its cover's rectangles.
  static MatrixFamily from_covers(Dims dims, std::vector<Cover> covers);
  // Members without decompositions. All must share a shape.
  static MatrixFamily from_matrices(std::vector<BoolMatrix> members);

  Dims dims() const noexcept { return dims_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  const BoolMatrix& member(std::size_t t) const { return members_.at(t); }
  const std::vector<BoolMatrix>& members() const noexcept { return members_; }
  const std::optional<Cover>& decomposition(std::size_t t) const { return decomps_.at(t); }
  bool has_decompositions() const;
  // Decomposition size per member; throws if any member lacks one.
  std::vector<std::size_t> rank_bounds() const;

  void push_back(BoolMatrix m, std::optional<Cover> decomposition = std::nullopt);

  MatrixFamily permuted(const std::vector<std::size_t>& order) const;
  MatrixFamily prefix(std::size_t s) const;
  // Every member restricted to its leading rows x cols block.
  MatrixFamily restricted(std::size_t rows, std::size_t cols) const;

 private:
  Dims dims_;
  std::vector<BoolMatrix> members_;
  std::vector<std::optional<Cover>> decomps_;
};

using Entry = std::pair<std::size_t, std::size_t>;

// Outcome of a verification. When !ok, `entry` / `index` name the first failure.
struct Verdict {
  bool ok = true;
  std::string detail;
  std::optional<Entry> entry;
  std::optional<std::size_t> index;

  explicit operator bool() const noexcept { return ok; }
  static Verdict pass() { return {}; }
  static Verdict fail(std::string detail, std::optional<Entry> entry = std::nullopt, std::optional<std::size_t> index = std::nullopt) {
    return {false, std::move(detail), entry, index};
  }
};

// Rectangles all-ones in `a` and their union equal to the support of `a`.
// Failures: first bad rectangle (its first zero entry), else first uncovered 1 in row-major order.
Verdict verify_cover(const BoolMatrix& a, const Cover& c);

// Union of the members equals the support of `a`; first differing entry on failure.
Verdict family_covers(const BoolMatrix& a, const MatrixFamily& fam);

struct KronVerdict {
  bool ok = true;
  std::string detail;
  std::optional<Entry> a_entry;  // entry of A whose selected N_t fail to cover B
  std::optional<Entry> b_entry;  // first entry of B on which the selection differs from B
  std::size_t selections_checked = 0;  // distinct member subsets examined

  explicit operator bool() const noexcept { return ok; }
};

// mFam covers a, and for every 1 of a the N_t with (M_t)_{i,j}=1 cover b.
// Checked per distinct selection, so a (x) b is never materialized.
KronVerdict verify_kron_hypotheses(const BoolMatrix& a, const MatrixFamily& mFam, const BoolMatrix& b,
                                   const MatrixFamily& nFam);

// All products M_t(i) (x) N_t(j) of the members' rank-1 decompositions, no checks.
Cover kron_rectangles(const MatrixFamily& mFam, const MatrixFamily& nFam);

// Checks the hypotheses, then returns kron_rectangles. Throws InvalidArgument with the witness on violation.
Cover compose_kron_cover(const BoolMatrix& a, const MatrixFamily& mFam, const BoolMatrix& b, const MatrixFamily& nFam);

// Upper bound sum_t |dec(M_t)| * |dec(N_t)| that compose_kron_cover attains.
std::size_t composed_size(const MatrixFamily& mFam, const MatrixFamily& nFam);

// Verifies a cover of a (x) b without materializing the product. Every rectangle must be a
// product of index sets (as composed covers are); throws InvalidArgument otherwise.
Verdict verify_cover_lazy(const BoolMatrix& a, const BoolMatrix& b, const Cover& c);

// Eager when the product fits under `limit`, lazy otherwise.
Verdict verify_kron_cover(const BoolMatrix& a, const BoolMatrix& b, const Cover& c,
                          std::uint64_t limit = kDefaultMaterializationLimit);

struct QCoverOptions {
  std::uint64_t budget = 1'000'000;  // subsets; beyond it switch to sampling
  std::uint64_t seed = 0x6b726f6e72616e6bULL;
  unsigned threads = 0;  // 0 = hardware concurrency
};

struct QCoverResult {
  bool ok = true;
  bool exhaustive = true;
  std::uint64_t subsets_checked = 0;
  std::vector<std::size_t> witness_subset;  // lexicographically first failing subset
  std::optional<Entry> witness_entry;       // first entry (row-major) where its sum differs from a

  explicit operator bool() const noexcept { return ok; }
};

// Every q-subset of the family sums to the support of a.
QCoverResult check_q_covering(const BoolMatrix& a, const MatrixFamily& fam, std::size_t q, const QCoverOptions& opts = {});

// Every ceil(s/2)-subset covers a. Always exhaustive.
QCoverResult check_half_covering(const BoolMatrix& a, const MatrixFamily& fam, unsigned threads = 0);

// Rank-1 factor pairs (M_t, N_t) with P_t <= M_t (x) N_t for each rectangle of a cover of a (x) b.
// The cover is verified first (eagerly below `limit`, lazily above).
std::pair<MatrixFamily, MatrixFamily> extract_families(const BoolMatrix& a, const BoolMatrix& b, const Cover& c,
                                                       std::uint64_t limit = kDefaultMaterializationLimit);

// Reorders a 3-member nFam to minimise sum_t rank(M_t) * rank(N_t). Returns the order and the bound.
std::pair<std::vector<std::size_t>, std::size_t> best_triple_order(const MatrixFamily& mFam, const MatrixFamily& nFam);

// Text formats.
void write_cover(std::ostream& out, const Cover& c);
Cover read_cover(std::istream& in);
void write_family(std::ostream& out, const MatrixFamily& fam);
MatrixFamily read_family(std::istream& in);

}  // namespace kronrank
