#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "kronrank/boolmat.hpp"
#include "kronrank/cover.hpp"

namespace kronrank {

using Rational = boost::multiprecision::cpp_rational;

// Smallest integer >= r.
std::uint64_t ceil_rational(const Rational& r);

// All maximal all-ones rectangles, sorted by area descending, then by (rows, cols) lexicographically.
// Throws BudgetExceeded when more than `cap` are found.
std::vector<Rectangle> maximal_rectangles(const BoolMatrix& a, std::size_t cap = 1'000'000);

struct LowerWitness {
  enum class Kind { Isolation, Mu, Search };
  Kind kind = Kind::Search;
  std::size_t value = 0;
};

const char* to_string(LowerWitness::Kind k);

struct RankCertificate {
  std::size_t value = 0;      // exact rank when `exact`, else the proven lower bound
  bool exact = false;
  bool budget_exhausted = false;
  Cover upper;                // verifies a; its size is the value when exact
  LowerWitness lower;
  std::uint64_t nodes = 0;
};

inline constexpr std::uint64_t kDefaultRankNodeBudget = 50'000'000;

// Minimum cover over maximal rectangles by iterative deepening. Stops at `limit`: if no cover of
// size < limit exists, returns a non-exact certificate with lower.value = limit.
RankCertificate exact_boolean_rank(const BoolMatrix& a, std::size_t limit = SIZE_MAX,
                                   std::uint64_t node_budget = kDefaultRankNodeBudget);

struct IsolationResult {
  std::size_t value = 0;
  std::vector<Entry> witness;  // row-major
  bool exact = true;
};

// Largest isolation set, by clique search over the 1-entries in row-major order.
IsolationResult isolation_number(const BoolMatrix& a, std::uint64_t node_budget = kDefaultRankNodeBudget);
bool is_isolation_set(const BoolMatrix& a, const std::vector<Entry>& entries);

struct MuResult {
  Rational value;
  std::uint64_t ones = 0;
  std::uint64_t max_area = 0;
  Rectangle witness;  // an all-ones rectangle of area max_area
};

// ones(a) / largest all-ones rectangle. Crown matrices use the closed form. Throws on a zero matrix.
MuResult mu(const BoolMatrix& a);
Rational mu_crown(std::size_t n);

struct KronLowerBound {
  std::uint64_t value = 0;  // ceil(max(mu(a) R(b), mu(b) R(a)))
  std::optional<std::uint64_t> isolation_value;  // max(i(a) R(b), R(a) i(b)) when both i are exact
  Rational mu_a, mu_b;
  std::size_t rank_a = 0, rank_b = 0;
};

// Boolean rank of crown matrices comes from sigma, otherwise from exact_boolean_rank
// (BudgetExceeded if that does not complete). Isolation numbers are attempted only for small matrices.
KronLowerBound kron_lower_bound(const BoolMatrix& a, const BoolMatrix& b);

// C(r, r/2)^2 * 2r >= 2^(2r), exactly. r must be even and positive.
bool central_binomial_bound_holds(unsigned r);

// Cover block followed by "LOWER kind=<kind> value=<v>".
void write_certificate(std::ostream& out, const RankCertificate& c);

}  // namespace kronrank
