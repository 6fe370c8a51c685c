#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kronrank/cover.hpp"
#include "kronrank/crown.hpp"
#include "kronrank/numeric.hpp"

namespace kronrank {

// g_i(x) = sum_{t=1..q} i^(t-1) * x_t mod p, for i in [p-1] and x in Z_p^q.
class ZpFunctionFamily {
 public:
  // Throws InvalidArgument unless p is prime and p > q >= 1.
  ZpFunctionFamily(std::uint64_t p, std::size_t q);

  std::uint64_t p() const noexcept { return p_; }
  std::size_t q() const noexcept { return q_; }
  std::size_t count() const noexcept { return static_cast<std::size_t>(p_ - 1); }

  // i in [1, p-1]; x has q entries in [0, p).
  std::uint64_t eval(std::uint64_t i, std::span<const std::uint64_t> x) const;
  // i^(t-1) mod p, t = 1..q.
  std::uint64_t coefficient(std::uint64_t i, std::size_t t) const { return coeff_[(i - 1) * q_ + (t - 1)]; }

 private:
  std::uint64_t p_;
  std::size_t q_;
  std::vector<std::uint64_t> coeff_;
};

// For every i and fixed (x_2..x_q), x_1 -> g_i(x) is a bijection of Z_p. Exhaustive.
bool zp_property_bijective(const ZpFunctionFamily& g);
// Any q distinct g_i have no common collision. Exhaustive over index subsets, checked as injectivity.
bool zp_property_no_common_collision(const ZpFunctionFamily& g);

struct AlgebraicCoverParams {
  std::size_t d = 0;
  std::size_t q = 0;
  std::uint64_t p = 0;
  std::uint64_t n = 0;  // p^q
  std::size_t k = 0;    // 2dq
  std::vector<SubsetMask> blocks;                // L_1..L_q
  std::vector<std::vector<SubsetMask>> chosen;   // B_j: p d-subsets of L_j, colex-smallest
  SubsetFamily product;                          // F: row r <-> (x_1..x_q), r = sum x_j p^(j-1)
};

// Parameters and the product family F for (d, q). Throws InvalidArgument unless p > q >= 2 and
// 2dq <= 63; MaterializationLimit when (p^q)^2 exceeds `limit`.
AlgebraicCoverParams algebraic_params(std::size_t d, std::size_t q, std::uint64_t limit = kDefaultMaterializationLimit);

// h_i: rewrites block 1 of each set of F to B_1[g_i(x)].
FamilyBijection algebraic_bijection(const AlgebraicCoverParams& params, const ZpFunctionFamily& g, std::uint64_t i);

struct AlgebraicFamily {
  AlgebraicCoverParams params;
  MatrixFamily family;  // p-1 members, A_i = sum_{t in L_1} P_{F_i}(t)
};

// Every q members cover C_{p^q}. Throws MaterializationLimit when (p^q)^2 exceeds `limit`.
AlgebraicFamily algebraic_family(std::size_t d, std::size_t q, std::uint64_t limit = kDefaultMaterializationLimit);

struct AsymptoticParams {
  std::uint64_t n = 0;        // requested size
  std::size_t d = 0;          // smallest d with n <= n_d
  BigInt n_d;                 // ((1/2) C(2d,d))^(2^d)
  std::uint64_t q = 0;        // 2^d
  std::uint64_t s = 0;        // 2^(d+1)
  std::uint64_t p = 0;        // largest prime <= C(2d,d)
  BigInt cover_size;          // p^q, side of the covered crown matrix
  std::size_t k = 0;          // sigma(n) rounded up to even
  std::uint64_t bound = 0;    // 2^(d+3) d^2
  bool feasible = false;      // p > q, p - 1 >= s and n <= p^q
  bool materializable = false;
};

AsymptoticParams asymptotic_params(std::uint64_t n, std::uint64_t limit = kDefaultMaterializationLimit);

// "PARAMS d=.. q=.. p=.. n=.. k=.. s=.. bound=.. feasible=yes|no"
std::string params_line(const AsymptoticParams& a);
std::string params_line(const AlgebraicCoverParams& a, std::size_t s, std::uint64_t bound);

// A cover of C_n (x) C_n given by two families; its rectangles are the products of the
// members' decompositions and are never listed.
struct ComposedCrownCover {
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t q = 0;
  std::size_t s = 0;
  MatrixFamily family;       // used as both M and N
  std::size_t size = 0;      // sum_t rank(M_t)^2
  std::size_t bound = 0;     // s * (2d)^2
  QCoverResult half;         // every ceil(s/2) members cover C_n
  KronVerdict hypotheses;    // lazy verification of the composed cover
  bool verified() const { return half.ok && hypotheses.ok; }
};

// Takes s members of algebraic_family(d, q), restricted to C_n (n <= p^q, 0 = p^q),
// and verifies the symmetric composition lazily.
ComposedCrownCover composed_crown_cover(std::size_t d, std::size_t q, std::size_t s, std::uint64_t n = 0,
                                        std::uint64_t limit = kDefaultMaterializationLimit, unsigned threads = 0);

struct AsymptoticResult {
  AsymptoticParams params;
  std::optional<ComposedCrownCover> cover;
  std::string note;  // why no cover was built, when it was not
};

// Uses the strict parameters q = 2^d, s = 2^(d+1); reports infeasibility instead of throwing.
AsymptoticResult asymptotic_cover(std::uint64_t n, std::uint64_t limit = kDefaultMaterializationLimit);

}  // namespace kronrank
