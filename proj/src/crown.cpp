#include "kronrank/crown.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <ostream>

#include "kronrank/error.hpp"
#include "kronrank/numeric.hpp"
#include "textio.hpp"

namespace kronrank {

namespace {

std::size_t ceil_half(std::size_t k) { return (k + 1) / 2; }

SubsetMask bit_of(unsigned e) { return SubsetMask{1} << (e - 1); }

// Maps a subset of [k-1] onto [k] \ {i}, shifting elements >= i up by one.
SubsetMask expand_skip(SubsetMask m, unsigned i) {
  const SubsetMask low = m & (bit_of(i) - 1);
  return low | ((m & ~(bit_of(i) - 1)) << 1);
}

// Inverse of expand_skip; the bit for i must be clear.
SubsetMask compress_skip(SubsetMask m, unsigned i) {
  const SubsetMask low = m & (bit_of(i) - 1);
  return low | ((m >> 1) & ~(bit_of(i) - 1));
}

std::size_t index_in_sorted(const std::vector<SubsetMask>& sorted, SubsetMask m) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), m);
  if (it == sorted.end() || *it != m) throw InternalError("subset not found in family");
  return static_cast<std::size_t>(it - sorted.begin());
}

}  // namespace

std::vector<unsigned> subset_elements(SubsetMask m) {
  std::vector<unsigned> out;
  while (m) {
    out.push_back(static_cast<unsigned>(std::countr_zero(m)) + 1);
    m &= m - 1;
  }
  return out;
}

SubsetMask subset_from_elements(const std::vector<unsigned>& elems) {
  SubsetMask m = 0;
  for (unsigned e : elems) {
    if (e < 1 || e > kMaxGround) throw InvalidArgument("subset element out of range");
    m |= bit_of(e);
  }
  return m;
}

std::vector<SubsetMask> colex_subsets(std::size_t k, std::size_t ell) {
  if (k > kMaxGround) throw InvalidArgument("ground set too large");
  std::vector<SubsetMask> out;
  if (ell > k) return out;
  if (ell == 0) return {0};
  // Gosper's hack enumerates same-popcount masks in increasing order.
  SubsetMask m = (SubsetMask{1} << ell) - 1;
  const SubsetMask limit = SubsetMask{1} << k;
  while (m < limit) {
    out.push_back(m);
    const SubsetMask c = m & (~m + 1);
    const SubsetMask r = m + c;
    m = (((r ^ m) >> 2) / c) | r;
  }
  return out;
}

// ---------------------------------------------------------------- SubsetFamily

SubsetFamily::SubsetFamily(std::size_t k, std::size_t ell, std::vector<SubsetMask> sets) : k_(k), ell_(ell), sets_(std::move(sets)) {
  if (k > kMaxGround) throw InvalidArgument("SubsetFamily: ground set too large");
  std::vector<SubsetMask> sorted = sets_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw InvalidArgument("SubsetFamily: repeated set");
  for (SubsetMask s : sets_) {
    if (s & ~ground_set(k)) throw InvalidArgument("SubsetFamily: element outside [k]");
    if (static_cast<std::size_t>(std::popcount(s)) != ell) throw InvalidArgument("SubsetFamily: set of the wrong size");
  }
}

BoolMatrix SubsetFamily::intersection_matrix() const {
  BoolMatrixBuilder b(size(), size());
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = 0; j < size(); ++j)
      if (sets_[i] & complement(j)) b.set(i, j);
  return std::move(b).build();
}

FamilyBijection::FamilyBijection(SubsetFamily domain, std::vector<SubsetMask> images)
    : domain_(std::move(domain)), images_(std::move(images)) {
  std::vector<SubsetMask> a = domain_.sets();
  std::vector<SubsetMask> b = images_;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a != b) throw InvalidArgument("FamilyBijection: images are not a permutation of the domain");
}

// ---------------------------------------------------------------- crown matrices

BoolMatrix crown_matrix(std::size_t n) {
  BoolMatrixBuilder b(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& w : b.row(i)) w = ~Word{0};
    b.set(i, i, false);
  }
  return std::move(b).build();
}

bool is_crown_matrix(const BoolMatrix& m) { return m.rows() == m.cols() && m == crown_matrix(m.rows()); }

std::size_t sigma(std::uint64_t n) {
  std::size_t k = 0;
  while (binomial(k, ceil_half(k)) < n) ++k;
  return k;
}

SubsetFamily canonical_family(std::size_t k, std::size_t n) {
  const std::size_t ell = ceil_half(k);
  if (binomial(k, ell) < n)
    throw InvalidArgument("canonical_family: n = " + std::to_string(n) + " exceeds C(" + std::to_string(k) + "," + std::to_string(ell) + ")");
  auto all = colex_subsets(k, ell);
  all.resize(n);
  return SubsetFamily(k, ell, std::move(all));
}

Rectangle intersection_rectangle(const SubsetFamily& f, unsigned t) {
  if (t < 1 || t > f.k()) throw InvalidArgument("intersection_rectangle: element " + std::to_string(t) + " outside [k]");
  Rectangle r;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] & bit_of(t))
      r.rows.push_back(static_cast<Index>(i));
    else
      r.cols.push_back(static_cast<Index>(i));
  }
  if (r.rows.empty() || r.cols.empty())
    throw InvalidArgument("intersection_rectangle: P_F(" + std::to_string(t) + ") is empty for this family");
  return r;
}

Cover intersection_cover(const SubsetFamily& f, const std::vector<unsigned>& elements) {
  Cover c{{f.size(), f.size()}, {}};
  for (unsigned t : elements) {
    if (t < 1 || t > f.k()) throw InvalidArgument("intersection_cover: element outside [k]");
    bool in = false, out = false;
    for (SubsetMask s : f.sets()) ((s & bit_of(t)) ? in : out) = true;
    if (in && out) c.rects.push_back(intersection_rectangle(f, t));
  }
  return c;
}

// ---------------------------------------------------------------- g and h

FamilyBijection build_g(std::size_t k) {
  if (k < 2) throw InvalidArgument("build_g: k must be at least 2");
  if (k - 1 > kMaxGround) throw InvalidArgument("build_g: k too large");
  const std::size_t ell = ceil_half(k);
  const SubsetMask ground = ground_set(k - 1);
  SubsetFamily domain(k - 1, ell - 1, colex_subsets(k - 1, ell - 1));
  const auto& left = domain.sets();
  std::vector<SubsetMask> images(left.size());

  if (k % 2 == 1) {
    for (std::size_t x = 0; x < left.size(); ++x) images[x] = ground & ~left[x];
    return FamilyBijection(std::move(domain), std::move(images));
  }

  // Containment graph between (ell-1)- and ell-subsets of [k-1]; ell-regular, so Hall gives a perfect matching.
  const auto right = colex_subsets(k - 1, ell);
  if (right.size() != left.size()) throw InternalError("build_g: sides of the containment graph differ in size");
  constexpr std::size_t kFree = static_cast<std::size_t>(-1);
  std::vector<std::size_t> match_right(right.size(), kFree);
  std::vector<std::size_t> match_left(left.size(), kFree);
  std::vector<char> visited(right.size());

  auto neighbours = [&](std::size_t x) {
    std::vector<std::size_t> out;
    for (unsigned e = 1; e <= k - 1; ++e)
      if (!(left[x] & bit_of(e))) out.push_back(index_in_sorted(right, left[x] | bit_of(e)));
    return out;
  };
  // Kuhn's augmenting paths, iterative to keep stack depth bounded.
  for (std::size_t root = 0; root < left.size(); ++root) {
    std::fill(visited.begin(), visited.end(), 0);
    struct Frame {
      std::size_t x;
      std::vector<std::size_t> nbrs;
      std::size_t next = 0;
    };
    std::vector<Frame> stack;
    stack.push_back({root, neighbours(root)});
    bool augmented = false;
    while (!stack.empty() && !augmented) {
      Frame& f = stack.back();
      if (f.next == f.nbrs.size()) {
        stack.pop_back();
        continue;
      }
      const std::size_t y = f.nbrs[f.next++];
      if (visited[y]) continue;
      visited[y] = 1;
      if (match_right[y] == kFree) {
        // Flip the path root -> ... -> y.
        std::size_t cur_y = y;
        for (std::size_t d = stack.size(); d-- > 0;) {
          const std::size_t x = stack[d].x;
          const std::size_t prev_y = match_left[x];
          match_left[x] = cur_y;
          match_right[cur_y] = x;
          cur_y = prev_y;
        }
        augmented = true;
      } else {
        const std::size_t x2 = match_right[y];
        stack.push_back({x2, neighbours(x2)});
      }
    }
    if (!augmented) throw InternalError("build_g: containment graph has no perfect matching");
  }
  for (std::size_t x = 0; x < left.size(); ++x) images[x] = ground & ~right[match_left[x]];
  return FamilyBijection(std::move(domain), std::move(images));
}

FamilyBijection build_h(std::size_t k, unsigned i) {
  if (k < 5) throw InvalidArgument("build_h: needs k >= 5");
  if (k > kMaxGround) throw InvalidArgument("build_h: k too large");
  if (i < 1 || i > k) throw InvalidArgument("build_h: i outside [k]");
  const FamilyBijection g = build_g(k);
  const auto& gdom = g.domain().sets();
  SubsetFamily domain(k, ceil_half(k), colex_subsets(k, ceil_half(k)));
  std::vector<SubsetMask> images;
  images.reserve(domain.size());
  for (SubsetMask f : domain.sets()) {
    if (!(f & bit_of(i))) {
      images.push_back(f);
      continue;
    }
    const SubsetMask inner = compress_skip(f & ~bit_of(i), i);
    const SubsetMask gi = g.images()[index_in_sorted(gdom, inner)];
    images.push_back(expand_skip(gi, i) | bit_of(i));
  }
  return FamilyBijection(std::move(domain), std::move(images));
}

bool is_L_preserving(const FamilyBijection& h, SubsetMask L) {
  const auto& d = h.domain().sets();
  for (std::size_t x = 0; x < d.size(); ++x)
    if ((d[x] & L) != (h.images()[x] & L)) return false;
  return true;
}

bool is_L_intersection_shifting(const FamilyBijection& h, SubsetMask L) {
  const auto& d = h.domain().sets();
  const auto& img = h.images();
  const SubsetMask ground = ground_set(h.domain().k());
  for (std::size_t x = 0; x < d.size(); ++x) {
    for (std::size_t y = 0; y < d.size(); ++y) {
      const SubsetMask meet = d[x] & ~d[y] & ground;
      if (meet == 0 || (meet & ~L) != 0) continue;
      if ((img[x] & ~img[y] & ground & ~L) == 0) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------- triples

MatrixFamily triple_cover(std::size_t k, std::size_t r, const std::optional<FamilyBijection>& h) {
  if (k < 2 || k > kMaxGround) throw InvalidArgument("triple_cover: k out of range");
  if (r < 1 || r > k) throw InvalidArgument("triple_cover: need 1 <= r <= k");
  const std::size_t ell = ceil_half(k);
  const SubsetFamily family(k, ell, colex_subsets(k, ell));
  std::optional<FamilyBijection> bij = h;
  if (!bij) {
    if (r != 1) throw InvalidArgument("triple_cover: r > 1 needs a caller-supplied bijection");
    bij = build_h(k, 1);
  }
  if (bij->domain() != family) throw InvalidArgument("triple_cover: bijection is not defined on all ceil(k/2)-subsets of [k] in colex order");
  const SubsetMask L = ground_set(r);
  if (!is_L_preserving(*bij, L) || !is_L_intersection_shifting(*bij, L))
    throw InvalidArgument("triple_cover: bijection is not [r]-preserving and [r]-intersection shifting");

  std::vector<unsigned> head, tail;
  for (unsigned t = 1; t <= k; ++t) (t <= r ? head : tail).push_back(t);
  const SubsetFamily shifted = bij->image_family();
  MatrixFamily fam = MatrixFamily::from_covers({family.size(), family.size()},
                                               {intersection_cover(family, head), intersection_cover(family, tail),
                                                intersection_cover(shifted, tail)});
  if (auto v = check_half_covering(crown_matrix(family.size()), fam); !v)
    throw InternalError("triple_cover: constructed triple does not pairwise cover C_n");
  return fam;
}

MatrixFamily crown_triple(std::size_t n) {
  if (n < 7) throw InvalidArgument("crown_triple: needs n >= 7");
  const std::size_t k = sigma(n);
  MatrixFamily fam = triple_cover(k, 1).restricted(n, n);
  if (auto v = check_half_covering(crown_matrix(n), fam); !v)
    throw InternalError("crown_triple: restricted triple does not pairwise cover C_n");
  return fam;
}

namespace {

// Members sum the intersection rectangles of a row/column subset labelling at each element group.
MatrixFamily labelled_triple(const std::vector<SubsetMask>& rows, const std::vector<SubsetMask>& cols,
                             const std::vector<std::vector<unsigned>>& groups) {
  const Dims d{rows.size(), cols.size()};
  std::vector<Cover> covers;
  for (const auto& g : groups) {
    Cover c{d, {}};
    for (unsigned t : g) {
      Rectangle r;
      for (std::size_t i = 0; i < rows.size(); ++i)
        if (rows[i] & bit_of(t)) r.rows.push_back(static_cast<Index>(i));
      for (std::size_t j = 0; j < cols.size(); ++j)
        if (cols[j] & bit_of(t)) r.cols.push_back(static_cast<Index>(j));
      if (!r.rows.empty() && !r.cols.empty()) c.rects.push_back(std::move(r));
    }
    covers.push_back(std::move(c));
  }
  return MatrixFamily::from_covers(d, std::move(covers));
}

}  // namespace

MatrixFamily c5_triple() {
  const std::vector<SubsetMask> rows{subset_from_elements({1, 4, 5, 7}), subset_from_elements({1, 3, 6, 7}),
                                     subset_from_elements({2, 4, 6, 7}), subset_from_elements({2, 3, 5, 7}),
                                     subset_from_elements({3, 4, 5, 6})};
  const std::vector<SubsetMask> cols{subset_from_elements({2, 3, 6}), subset_from_elements({2, 4, 5}),
                                     subset_from_elements({1, 3, 5}), subset_from_elements({1, 4, 6}),
                                     subset_from_elements({1, 2, 7})};
  return labelled_triple(rows, cols, {{1, 2}, {3, 4}, {5, 6, 7}});
}

MatrixFamily c4_triple() {
  // Found by exhaustive search over rank-2 submatrices of C_4; the search is rerun in the tests.
  const Dims d{4, 4};
  return MatrixFamily::from_covers(d, {Cover{d, {{{0, 1}, {2, 3}}, {{2, 3}, {0, 1}}}},
                                       Cover{d, {{{0, 3}, {1, 2}}, {{1, 2}, {0, 3}}}},
                                       Cover{d, {{{0, 2}, {1, 3}}, {{1, 3}, {0, 2}}}}});
}

GapCover gap_cover(std::size_t n, std::size_t m) {
  auto supported = [](std::size_t x) { return x == 4 || x == 5 || x >= 7; };
  const bool small_pair = n <= 5 && m <= 5;
  if (!supported(n) || !supported(m) || (small_pair && n == 5 && m == 5))
    throw InvalidArgument("gap_cover: unsupported sizes (" + std::to_string(n) + ", " + std::to_string(m) + ")");
  auto triple = [](std::size_t x) {
    if (x == 4) return c4_triple();
    if (x == 5) return c5_triple();
    return crown_triple(x);
  };
  GapCover out;
  out.mFam = triple(n);
  const MatrixFamily second = triple(m);
  out.nFam = second.permuted(best_triple_order(out.mFam, second).first);
  out.cover = compose_kron_cover(crown_matrix(n), out.mFam, crown_matrix(m), out.nFam);
  return out;
}

// ---------------------------------------------------------------- text format

void write_subset_family(std::ostream& out, const SubsetFamily& f) {
  out << "FAMILY-SETS " << f.k() << ' ' << f.ell() << ' ' << f.size() << '\n';
  for (SubsetMask s : f.sets()) out << textio::join_indices(subset_elements(s)) << '\n';
}

SubsetFamily read_subset_family(std::istream& in) {
  textio::LineReader rd(in);
  const auto head = textio::split_spaces(rd, rd.expect("'FAMILY-SETS k ell n'"));
  if (head.size() != 4) rd.fail(1, "header must be 'FAMILY-SETS k ell n'");
  textio::expect_keyword(rd, head[0], "FAMILY-SETS");
  const auto k = textio::parse_uint(rd, head[1]);
  const auto ell = textio::parse_uint(rd, head[2]);
  const auto n = textio::parse_uint(rd, head[3]);
  if (k > kMaxGround) rd.fail(head[1].column, "k larger than " + std::to_string(kMaxGround));
  std::vector<SubsetMask> sets;
  for (std::uint64_t x = 0; x < n; ++x) {
    const auto line = rd.expect("set line");
    const auto elems = textio::parse_index_list(rd, {line, 1}, ell == 0);
    SubsetMask m = 0;
    for (std::size_t p = 0; p < elems.size(); ++p) {
      if (elems[p] < 1 || elems[p] > k) rd.fail(1, "element " + std::to_string(elems[p]) + " outside [k]");
      if (p && elems[p] <= elems[p - 1]) rd.fail(1, "elements must be strictly increasing");
      m |= bit_of(static_cast<unsigned>(elems[p]));
    }
    if (elems.size() != ell) rd.fail(1, "set has " + std::to_string(elems.size()) + " elements, expected " + std::to_string(ell));
    sets.push_back(m);
  }
  rd.expect_end();
  try {
    return SubsetFamily(k, ell, std::move(sets));
  } catch (const InvalidArgument& e) {
    throw ParseError(rd.line_number(), 1, e.what());
  }
}

}  // namespace kronrank
