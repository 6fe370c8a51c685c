#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "kronrank/boolmat.hpp"
#include "kronrank/cover.hpp"

namespace kronrank {

// Subset of [k] as a bitmask: element e (1-based) is bit e-1. Supports k <= 63.
using SubsetMask = std::uint64_t;

inline constexpr std::size_t kMaxGround = 63;

std::vector<unsigned> subset_elements(SubsetMask m);  // sorted, 1-based
SubsetMask subset_from_elements(const std::vector<unsigned>& elems);
constexpr SubsetMask ground_set(std::size_t k) { return k >= 64 ? ~SubsetMask{0} : (SubsetMask{1} << k) - 1; }

// All ell-subsets of [k] in colexicographic order (equivalently, increasing as bitmasks).
std::vector<SubsetMask> colex_subsets(std::size_t k, std::size_t ell);

// Ordered family of distinct ell-subsets of [k]. Row i of B_F is sets[i]; column i is its complement.
class SubsetFamily {
 public:
  SubsetFamily() = default;
  // Throws InvalidArgument on a repeated set, a set of the wrong size, or elements outside [k].
  SubsetFamily(std::size_t k, std::size_t ell, std::vector<SubsetMask> sets);

  std::size_t k() const noexcept { return k_; }
  std::size_t ell() const noexcept { return ell_; }
  std::size_t size() const noexcept { return sets_.size(); }
  const std::vector<SubsetMask>& sets() const noexcept { return sets_; }
  SubsetMask operator[](std::size_t i) const { return sets_.at(i); }
  SubsetMask complement(std::size_t i) const { return ground_set(k_) & ~sets_.at(i); }

  // B_F: entry (i,j) is 1 iff F_i meets the complement of F_j.
  BoolMatrix intersection_matrix() const;

  friend bool operator==(const SubsetFamily&, const SubsetFamily&) = default;

 private:
  std::size_t k_ = 0;
  std::size_t ell_ = 0;
  std::vector<SubsetMask> sets_;
};

// A permutation h of a family's sets: images[i] = h(domain[i]).
class FamilyBijection {
 public:
  // Throws InvalidArgument if images is not a permutation of domain.sets().
  FamilyBijection(SubsetFamily domain, std::vector<SubsetMask> images);

  const SubsetFamily& domain() const noexcept { return domain_; }
  const std::vector<SubsetMask>& images() const noexcept { return images_; }
  // The ordered family (h(F_1), ..., h(F_n)).
  SubsetFamily image_family() const { return SubsetFamily(domain_.k(), domain_.ell(), images_); }

 private:
  SubsetFamily domain_;
  std::vector<SubsetMask> images_;
};

BoolMatrix crown_matrix(std::size_t n);
bool is_crown_matrix(const BoolMatrix& m);

// Smallest k with n <= C(k, ceil(k/2)). sigma(1) = 0.
std::size_t sigma(std::uint64_t n);

// The first n ceil(k/2)-subsets of [k] in colex order.
SubsetFamily canonical_family(std::size_t k, std::size_t n);

// P_F(t): rows of the sets containing t, columns of the sets not containing t.
// Throws InvalidArgument for t outside [k] or when either side would be empty.
Rectangle intersection_rectangle(const SubsetFamily& f, unsigned t);

// The rectangles P_F(t) for t in `elements`, skipping those with an empty side.
Cover intersection_cover(const SubsetFamily& f, const std::vector<unsigned>& elements);

// g on the (ell-1)-subsets of [k-1] with F and g(F) disjoint, ell = ceil(k/2).
FamilyBijection build_g(std::size_t k);

// The {i}-preserving, {i}-intersection shifting bijection on all ceil(k/2)-subsets of [k]. Needs k >= 5.
FamilyBijection build_h(std::size_t k, unsigned i);

bool is_L_preserving(const FamilyBijection& h, SubsetMask L);
bool is_L_intersection_shifting(const FamilyBijection& h, SubsetMask L);

// (r, k-r, k-r) triple for C_n, n = C(k, ceil(k/2)), from an [r]-preserving [r]-shifting h.
// With r = 1 and no h given, build_h(k, 1) is used.
MatrixFamily triple_cover(std::size_t k, std::size_t r, const std::optional<FamilyBijection>& h = std::nullopt);

// (1, k-1, k-1) triple for C_n, k = sigma(n), restricted from the full family to its leading n sets.
MatrixFamily crown_triple(std::size_t n);

// The hardcoded (2,2,3) triple for C_5 and a (2,2,2) triple for C_4.
MatrixFamily c5_triple();
MatrixFamily c4_triple();

struct GapCover {
  Cover cover;
  MatrixFamily mFam;  // triple for C_n, in composition order
  MatrixFamily nFam;  // triple for C_m, in composition order
};

// Cover of C_n (x) C_m smaller than sigma(n) * sigma(m). Supports n, m in {4, 5} or >= 7 with
// at least one of them >= 7, and additionally (4,4), (4,5), (5,4).
GapCover gap_cover(std::size_t n, std::size_t m);

// Text format: "FAMILY-SETS k ell n" then one comma-separated line of elements per set.
void write_subset_family(std::ostream& out, const SubsetFamily& f);
SubsetFamily read_subset_family(std::istream& in);

}  // namespace kronrank
