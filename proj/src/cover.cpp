#include "kronrank/cover.hpp"

#include <algorithm>
#include <atomic>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <thread>
#include <unordered_map>

#include "kronrank/error.hpp"
#include "textio.hpp"

namespace kronrank {

namespace {

std::string entry_str(Entry e) { return "(" + std::to_string(e.first) + "," + std::to_string(e.second) + ")"; }

unsigned resolve_threads(unsigned requested) {
  if (requested) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

// First entry (row-major) where the row words differ, given equal-width packed rows.
std::optional<std::size_t> first_diff(std::span<const Word> x, std::span<const Word> y) {
  for (std::size_t w = 0; w < x.size(); ++w) {
    if (const Word d = x[w] ^ y[w]) return w * kWordBits + static_cast<std::size_t>(std::countr_zero(d));
  }
  return std::nullopt;
}

BitVector index_mask(const std::vector<Index>& idx, std::size_t n) {
  BitVector v(n);
  for (Index i : idx) v.set(i);
  return v;
}

void check_rect_range(const Rectangle& r, Dims d, std::size_t k) {
  if (r.rows.empty() || r.cols.empty()) throw InvalidArgument("rectangle " + std::to_string(k) + " has an empty side");
  if (r.rows.back() >= d.rows || r.cols.back() >= d.cols)
    throw DimensionError("rectangle " + std::to_string(k) + " has an index out of range");
}

// Distinct sorted values of f(x) over xs.
template <typename F>
std::vector<Index> project(const std::vector<Index>& xs, F&& f) {
  std::vector<Index> out;
  out.reserve(xs.size());
  for (Index x : xs) out.push_back(static_cast<Index>(f(x)));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<Entry> first_one(const BoolMatrix& a) {
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto r = a.row(i);
    for (std::size_t w = 0; w < r.size(); ++w)
      if (r[w]) return Entry{i, w * kWordBits + static_cast<std::size_t>(std::countr_zero(r[w]))};
  }
  return std::nullopt;
}

// First zero of `a` inside rows x cols, row-major.
std::optional<Entry> first_zero(const BoolMatrix& a, const std::vector<Index>& rows, const std::vector<Index>& cols) {
  for (Index r : rows)
    for (Index c : cols)
      if (!a.at(r, c)) return Entry{r, c};
  return std::nullopt;
}

}  // namespace

// ---------------------------------------------------------------- Rectangle / Cover

Rectangle Rectangle::make(std::vector<Index> rows, std::vector<Index> cols) {
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  std::sort(cols.begin(), cols.end());
  cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
  if (rows.empty() || cols.empty()) throw InvalidArgument("rectangle must have nonempty row and column sets");
  return {std::move(rows), std::move(cols)};
}

BoolMatrix Rectangle::to_matrix(Dims dims) const {
  check_rect_range(*this, dims, 0);
  const BitVector mask = index_mask(cols, dims.cols);
  BoolMatrixBuilder b(dims.rows, dims.cols);
  for (Index r : rows) b.or_row(r, mask.words());
  return std::move(b).build();
}

BoolMatrix Cover::to_matrix() const {
  BoolMatrixBuilder b(dims.rows, dims.cols);
  for (std::size_t k = 0; k < rects.size(); ++k) {
    check_rect_range(rects[k], dims, k);
    const BitVector mask = index_mask(rects[k].cols, dims.cols);
    for (Index r : rects[k].rows) b.or_row(r, mask.words());
  }
  return std::move(b).build();
}

// ---------------------------------------------------------------- MatrixFamily

MatrixFamily MatrixFamily::from_covers(Dims dims, std::vector<Cover> covers) {
  MatrixFamily f(dims);
  for (auto& c : covers) {
    if (c.dims != dims) throw DimensionError("from_covers: member cover has the wrong shape");
    BoolMatrix m = c.to_matrix();
    f.push_back(std::move(m), std::move(c));
  }
  return f;
}

MatrixFamily MatrixFamily::from_matrices(std::vector<BoolMatrix> members) {
  if (members.empty()) return {};
  MatrixFamily f(members.front().dims());
  for (auto& m : members) f.push_back(std::move(m));
  return f;
}

void MatrixFamily::push_back(BoolMatrix m, std::optional<Cover> decomposition) {
  if (members_.empty() && dims_ == Dims{}) dims_ = m.dims();
  if (m.dims() != dims_) throw DimensionError("MatrixFamily: member has the wrong shape");
  if (decomposition) {
    if (decomposition->dims != dims_) throw DimensionError("MatrixFamily: decomposition has the wrong shape");
    if (decomposition->to_matrix() != m) throw InvalidArgument("MatrixFamily: decomposition does not sum to its member");
  }
  members_.push_back(std::move(m));
  decomps_.push_back(std::move(decomposition));
}

bool MatrixFamily::has_decompositions() const {
  return std::all_of(decomps_.begin(), decomps_.end(), [](const auto& d) { return d.has_value(); });
}

std::vector<std::size_t> MatrixFamily::rank_bounds() const {
  std::vector<std::size_t> out;
  for (std::size_t t = 0; t < decomps_.size(); ++t) {
    if (!decomps_[t]) throw InvalidArgument("family member " + std::to_string(t) + " has no rank-1 decomposition");
    out.push_back(decomps_[t]->size());
  }
  return out;
}

MatrixFamily MatrixFamily::permuted(const std::vector<std::size_t>& order) const {
  if (order.size() != size()) throw InvalidArgument("permuted: order has the wrong length");
  std::vector<char> seen(size(), 0);
  MatrixFamily f(dims_);
  for (std::size_t t : order) {
    if (t >= size() || seen[t]) throw InvalidArgument("permuted: not a permutation");
    seen[t] = 1;
    f.members_.push_back(members_[t]);
    f.decomps_.push_back(decomps_[t]);
  }
  return f;
}

MatrixFamily MatrixFamily::prefix(std::size_t s) const {
  if (s > size()) throw InvalidArgument("prefix: family has fewer members");
  MatrixFamily f(dims_);
  f.members_.assign(members_.begin(), members_.begin() + static_cast<std::ptrdiff_t>(s));
  f.decomps_.assign(decomps_.begin(), decomps_.begin() + static_cast<std::ptrdiff_t>(s));
  return f;
}

MatrixFamily MatrixFamily::restricted(std::size_t rows, std::size_t cols) const {
  MatrixFamily f(Dims{rows, cols});
  for (std::size_t t = 0; t < size(); ++t) {
    std::optional<Cover> dec;
    if (decomps_[t]) {
      Cover c{{rows, cols}, {}};
      for (const auto& r : decomps_[t]->rects) {
        Rectangle x;
        for (Index i : r.rows)
          if (i < rows) x.rows.push_back(i);
        for (Index j : r.cols)
          if (j < cols) x.cols.push_back(j);
        if (!x.rows.empty() && !x.cols.empty()) c.rects.push_back(std::move(x));
      }
      dec = std::move(c);
    }
    f.members_.push_back(leading_submatrix(members_[t], rows, cols));
    f.decomps_.push_back(std::move(dec));
  }
  return f;
}

// ---------------------------------------------------------------- verification

Verdict verify_cover(const BoolMatrix& a, const Cover& c) {
  if (a.dims() != c.dims) throw DimensionError("verify_cover: cover shape does not match the matrix");
  BoolMatrixBuilder uni(a.rows(), a.cols());
  for (std::size_t k = 0; k < c.rects.size(); ++k) {
    const Rectangle& r = c.rects[k];
    check_rect_range(r, c.dims, k);
    const BitVector mask = index_mask(r.cols, a.cols());
    for (Index i : r.rows) {
      if (!words_subset(mask.words(), a.row(i))) {
        const auto z = first_zero(a, {i}, r.cols);
        return Verdict::fail("rectangle " + std::to_string(k) + " covers the zero entry " + entry_str(*z), z, k);
      }
      uni.or_row(i, mask.words());
    }
  }
  const BoolMatrix u = std::move(uni).build();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (auto j = first_diff(a.row(i), u.row(i))) {
      const Entry e{i, *j};
      return Verdict::fail("entry " + entry_str(e) + " is a 1 not covered by any rectangle", e);
    }
  }
  return Verdict::pass();
}

Verdict family_covers(const BoolMatrix& a, const MatrixFamily& fam) {
  if (!fam.empty() && fam.dims() != a.dims()) throw DimensionError("family shape does not match the matrix");
  if (fam.empty()) {
    if (auto e = first_one(a)) return Verdict::fail("empty family leaves " + entry_str(*e) + " uncovered", e);
    return Verdict::pass();
  }
  const BoolMatrix u = boolean_sum(fam.members());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (auto j = first_diff(a.row(i), u.row(i))) {
      const Entry e{i, *j};
      const bool extra = u.at(i, *j);
      return Verdict::fail(extra ? "family has a 1 at " + entry_str(e) + " where the matrix is 0"
                                 : "family leaves the 1 at " + entry_str(e) + " uncovered",
                           e);
    }
  }
  return Verdict::pass();
}

namespace {

// Checks that the union of the selected N_t equals b; returns the first differing entry.
std::optional<Entry> selection_mismatch(const BoolMatrix& b, const MatrixFamily& nFam, const std::vector<std::size_t>& sel,
                                        std::vector<Word>& scratch) {
  const std::size_t stride = b.words_per_row();
  scratch.assign(stride, 0);
  for (std::size_t i = 0; i < b.rows(); ++i) {
    std::fill(scratch.begin(), scratch.end(), 0);
    for (std::size_t t : sel) {
      auto r = nFam.member(t).row(i);
      for (std::size_t w = 0; w < stride; ++w) scratch[w] |= r[w];
    }
    if (auto j = first_diff(b.row(i), scratch)) return Entry{i, *j};
  }
  return std::nullopt;
}

}  // namespace

KronVerdict verify_kron_hypotheses(const BoolMatrix& a, const MatrixFamily& mFam, const BoolMatrix& b,
                                   const MatrixFamily& nFam) {
  if (mFam.size() != nFam.size()) throw InvalidArgument("verify_kron_hypotheses: families have different lengths");
  if (!mFam.empty() && mFam.dims() != a.dims()) throw DimensionError("verify_kron_hypotheses: M family shape differs from A");
  if (!nFam.empty() && nFam.dims() != b.dims()) throw DimensionError("verify_kron_hypotheses: N family shape differs from B");

  KronVerdict out;
  if (auto v = family_covers(a, mFam); !v) {
    out.ok = false;
    out.detail = "M family is not a cover of A: " + v.detail;
    out.a_entry = v.entry;
    return out;
  }

  const std::size_t s = mFam.size();
  std::vector<Word> scratch;
  std::vector<std::size_t> sel;
  auto check = [&](std::size_t i, std::size_t j) -> bool {
    ++out.selections_checked;
    if (auto e = selection_mismatch(b, nFam, sel, scratch)) {
      out.ok = false;
      out.a_entry = Entry{i, j};
      out.b_entry = e;
      out.detail = "at A" + entry_str({i, j}) + " the " + std::to_string(sel.size()) + " selected N members differ from B at " +
                   entry_str(*e);
      return false;
    }
    return true;
  };

  if (s <= 20) {
    // 0 = unseen, 1 = good. A bad selection returns immediately.
    std::vector<std::uint8_t> memo(std::size_t{1} << s, 0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      auto arow = a.row(i);
      for (std::size_t w = 0; w < arow.size(); ++w) {
        Word x = arow[w];
        while (x) {
          const std::size_t bit = static_cast<std::size_t>(std::countr_zero(x));
          x &= x - 1;
          std::size_t mask = 0;
          for (std::size_t t = 0; t < s; ++t) mask |= static_cast<std::size_t>((mFam.member(t).row(i)[w] >> bit) & 1U) << t;
          if (memo[mask]) continue;
          sel.clear();
          for (std::size_t t = 0; t < s; ++t)
            if (mask >> t & 1U) sel.push_back(t);
          if (!check(i, w * kWordBits + bit)) return out;
          memo[mask] = 1;
        }
      }
    }
    return out;
  }

  struct KeyHash {
    std::size_t operator()(const std::vector<Word>& k) const noexcept {
      std::size_t h = 1469598103934665603ULL;
      for (Word w : k) h = (h ^ w) * 1099511628211ULL;
      return h;
    }
  };
  std::unordered_map<std::vector<Word>, bool, KeyHash> memo;
  std::vector<Word> key(words_for(s));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::optional<std::size_t> failed;
    for_each_bit(a.row(i), [&](std::size_t j) {
      if (failed) return;
      std::fill(key.begin(), key.end(), 0);
      for (std::size_t t = 0; t < s; ++t)
        if (mFam.member(t).at(i, j)) key[t / kWordBits] |= Word{1} << (t % kWordBits);
      if (memo.count(key)) return;
      sel.clear();
      for (std::size_t t = 0; t < s; ++t)
        if (key[t / kWordBits] >> (t % kWordBits) & 1U) sel.push_back(t);
      if (!check(i, j)) {
        failed = j;
        return;
      }
      memo.emplace(key, true);
    });
    if (failed) return out;
  }
  return out;
}

Cover kron_rectangles(const MatrixFamily& mFam, const MatrixFamily& nFam) {
  if (mFam.size() != nFam.size()) throw InvalidArgument("kron_rectangles: families have different lengths");
  const Dims da = mFam.dims();
  const Dims db = nFam.dims();
  Cover out{{da.rows * db.rows, da.cols * db.cols}, {}};
  for (std::size_t t = 0; t < mFam.size(); ++t) {
    const auto& dm = mFam.decomposition(t);
    const auto& dn = nFam.decomposition(t);
    if (!dm || !dn) throw InvalidArgument("kron_rectangles: member " + std::to_string(t) + " lacks a rank-1 decomposition");
    for (const auto& ra : dm->rects) {
      for (const auto& rb : dn->rects) {
        Rectangle r;
        r.rows.reserve(ra.rows.size() * rb.rows.size());
        r.cols.reserve(ra.cols.size() * rb.cols.size());
        for (Index x : ra.rows)
          for (Index y : rb.rows) r.rows.push_back(static_cast<Index>(x * db.rows + y));
        for (Index x : ra.cols)
          for (Index y : rb.cols) r.cols.push_back(static_cast<Index>(x * db.cols + y));
        out.rects.push_back(std::move(r));
      }
    }
  }
  return out;
}

Cover compose_kron_cover(const BoolMatrix& a, const MatrixFamily& mFam, const BoolMatrix& b, const MatrixFamily& nFam) {
  if (!mFam.has_decompositions() || !nFam.has_decompositions())
    throw InvalidArgument("compose_kron_cover: every member needs a rank-1 decomposition");
  if (auto v = verify_kron_hypotheses(a, mFam, b, nFam); !v) throw InvalidArgument("compose_kron_cover: " + v.detail);
  return kron_rectangles(mFam, nFam);
}

std::size_t composed_size(const MatrixFamily& mFam, const MatrixFamily& nFam) {
  if (mFam.size() != nFam.size()) throw InvalidArgument("composed_size: families have different lengths");
  const auto rm = mFam.rank_bounds();
  const auto rn = nFam.rank_bounds();
  std::size_t total = 0;
  for (std::size_t t = 0; t < rm.size(); ++t) total += rm[t] * rn[t];
  return total;
}

Verdict verify_cover_lazy(const BoolMatrix& a, const BoolMatrix& b, const Cover& c) {
  const Dims da = a.dims();
  const Dims db = b.dims();
  if (c.dims != Dims{da.rows * db.rows, da.cols * db.cols}) throw DimensionError("verify_cover_lazy: cover shape is not that of A (x) B");
  if (c.rects.empty()) {
    if (a.is_zero() || b.is_zero()) return Verdict::pass();
    const Entry ea = *first_one(a);
    const Entry eb = *first_one(b);
    const Entry e = EntryIndex4{ea.first, ea.second, eb.first, eb.second}.flat(db);
    return Verdict::fail("empty cover leaves " + entry_str(e) + " uncovered", e);
  }

  MatrixFamily mFam(da);
  MatrixFamily nFam(db);
  for (std::size_t k = 0; k < c.rects.size(); ++k) {
    const Rectangle& r = c.rects[k];
    check_rect_range(r, c.dims, k);
    Rectangle ra{project(r.rows, [&](Index x) { return x / db.rows; }), project(r.cols, [&](Index x) { return x / db.cols; })};
    Rectangle rb{project(r.rows, [&](Index x) { return x % db.rows; }), project(r.cols, [&](Index x) { return x % db.cols; })};
    if (ra.rows.size() * rb.rows.size() != r.rows.size() || ra.cols.size() * rb.cols.size() != r.cols.size())
      throw InvalidArgument("verify_cover_lazy: rectangle " + std::to_string(k) + " is not a product of index sets");
    if (auto z = first_zero(a, ra.rows, ra.cols)) {
      const Entry e = EntryIndex4{z->first, z->second, rb.rows.front(), rb.cols.front()}.flat(db);
      return Verdict::fail("rectangle " + std::to_string(k) + " covers the zero entry " + entry_str(e), e, k);
    }
    if (auto z = first_zero(b, rb.rows, rb.cols)) {
      const Entry e = EntryIndex4{ra.rows.front(), ra.cols.front(), z->first, z->second}.flat(db);
      return Verdict::fail("rectangle " + std::to_string(k) + " covers the zero entry " + entry_str(e), e, k);
    }
    BoolMatrix ma = ra.to_matrix(da);
    BoolMatrix mb = rb.to_matrix(db);
    mFam.push_back(std::move(ma), Cover{da, {std::move(ra)}});
    nFam.push_back(std::move(mb), Cover{db, {std::move(rb)}});
  }
  // Every rectangle equals M_t (x) N_t, so the union is sum_t M_t (x) N_t.
  const KronVerdict kv = verify_kron_hypotheses(a, mFam, b, nFam);
  if (kv) return Verdict::pass();
  if (kv.b_entry) {
    const Entry e = EntryIndex4{kv.a_entry->first, kv.a_entry->second, kv.b_entry->first, kv.b_entry->second}.flat(db);
    return Verdict::fail("entry " + entry_str(e) + " is a 1 not covered by any rectangle", e);
  }
  // The M family misses a 1 of A: the whole block is uncovered.
  const Entry eb = *first_one(b);
  const Entry e = EntryIndex4{kv.a_entry->first, kv.a_entry->second, eb.first, eb.second}.flat(db);
  return Verdict::fail("entry " + entry_str(e) + " is a 1 not covered by any rectangle", e);
}

Verdict verify_kron_cover(const BoolMatrix& a, const BoolMatrix& b, const Cover& c, std::uint64_t limit) {
  const unsigned __int128 entries = static_cast<unsigned __int128>(a.rows()) * b.rows() * a.cols() * b.cols();
  if (entries <= limit) return verify_cover(kronecker(a, b, limit), c);
  return verify_cover_lazy(a, b, c);
}

// ---------------------------------------------------------------- q-covering

namespace {

std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > cap) return cap + 1;
  }
  return static_cast<std::uint64_t>(r);
}

std::vector<std::uint32_t> all_subsets(std::size_t s, std::size_t q) {
  std::vector<std::uint32_t> flat;
  std::vector<std::uint32_t> cur(q);
  std::iota(cur.begin(), cur.end(), 0U);
  while (true) {
    flat.insert(flat.end(), cur.begin(), cur.end());
    std::size_t p = q;
    while (p > 0 && cur[p - 1] == s - q + p - 1) --p;
    if (p == 0) break;
    ++cur[p - 1];
    for (std::size_t j = p; j < q; ++j) cur[j] = cur[j - 1] + 1;
  }
  return flat;
}

std::vector<std::uint32_t> sampled_subsets(std::size_t s, std::size_t q, std::uint64_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::uint32_t>> subsets(count);
  std::vector<std::uint32_t> pool(s);
  for (auto& sub : subsets) {
    std::iota(pool.begin(), pool.end(), 0U);
    for (std::size_t j = 0; j < q; ++j) {
      std::uniform_int_distribution<std::size_t> pick(j, s - 1);
      std::swap(pool[j], pool[pick(rng)]);
    }
    sub.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(q));
    std::sort(sub.begin(), sub.end());
  }
  std::sort(subsets.begin(), subsets.end());
  subsets.erase(std::unique(subsets.begin(), subsets.end()), subsets.end());
  std::vector<std::uint32_t> flat;
  for (const auto& sub : subsets) flat.insert(flat.end(), sub.begin(), sub.end());
  return flat;
}

constexpr std::uint32_t kNoFail = std::numeric_limits<std::uint32_t>::max();

// For each subset (flat, q per subset), the first row in [lo, hi) where its sum differs from a.
void scan_rows(const BoolMatrix& a, const MatrixFamily& fam, const std::vector<std::uint32_t>& subsets, std::size_t q,
               std::size_t lo, std::size_t hi, std::vector<std::uint32_t>& fail, std::size_t block_rows) {
  const std::size_t stride = a.words_per_row();
  const std::size_t count = subsets.size() / q;
  std::vector<Word> prefix(q * block_rows * stride);
  std::size_t known_first_fail = count;  // subsets after a known failure cannot change the witness
  for (std::size_t r0 = lo; r0 < hi; r0 += block_rows) {
    const std::size_t nr = std::min(block_rows, hi - r0);
    std::size_t valid = 0;  // prefix levels valid for the previous subset
    const std::uint32_t* prev = nullptr;
    for (std::size_t x = 0; x < count && x < known_first_fail; ++x) {
      const std::uint32_t* sub = subsets.data() + x * q;
      std::size_t p = 0;
      if (prev)
        while (p < valid && sub[p] == prev[p]) ++p;
      for (std::size_t lvl = p; lvl < q; ++lvl) {
        Word* dst = prefix.data() + lvl * block_rows * stride;
        const BoolMatrix& m = fam.member(sub[lvl]);
        for (std::size_t i = 0; i < nr; ++i) {
          auto src = m.row(r0 + i);
          Word* d = dst + i * stride;
          if (lvl == 0) {
            std::copy(src.begin(), src.end(), d);
          } else {
            const Word* below = d - block_rows * stride;
            for (std::size_t w = 0; w < stride; ++w) d[w] = below[w] | src[w];
          }
        }
      }
      valid = q;
      prev = sub;
      const Word* top = prefix.data() + (q - 1) * block_rows * stride;
      for (std::size_t i = 0; i < nr; ++i) {
        auto ar = a.row(r0 + i);
        const Word* t = top + i * stride;
        if (!std::equal(ar.begin(), ar.end(), t)) {
          if (fail[x] == kNoFail || fail[x] > r0 + i) fail[x] = static_cast<std::uint32_t>(r0 + i);
          known_first_fail = std::min(known_first_fail, x + 1);
          break;
        }
      }
    }
  }
}

}  // namespace

QCoverResult check_q_covering(const BoolMatrix& a, const MatrixFamily& fam, std::size_t q, const QCoverOptions& opts) {
  const std::size_t s = fam.size();
  if (q < 1 || q > s) throw InvalidArgument("check_q_covering: need 1 <= q <= family size");
  if (fam.dims() != a.dims()) throw DimensionError("check_q_covering: family shape does not match the matrix");

  QCoverResult out;
  std::vector<std::uint32_t> subsets;
  if (binomial_capped(s, q, opts.budget) <= opts.budget) {
    subsets = all_subsets(s, q);
  } else {
    out.exhaustive = false;
    subsets = sampled_subsets(s, q, opts.budget, opts.seed);
  }
  const std::size_t count = subsets.size() / q;
  out.subsets_checked = count;

  const std::size_t stride = std::max<std::size_t>(1, a.words_per_row());
  const std::size_t block_rows = std::max<std::size_t>(1, (1U << 15) / (stride * q));
  const unsigned threads = std::min<unsigned>(resolve_threads(opts.threads), static_cast<unsigned>(std::max<std::size_t>(1, a.rows() / block_rows)));

  std::vector<std::vector<std::uint32_t>> fails(threads, std::vector<std::uint32_t>(count, kNoFail));
  if (threads == 1) {
    scan_rows(a, fam, subsets, q, 0, a.rows(), fails[0], block_rows);
  } else {
    std::vector<std::thread> pool;
    const std::size_t per = (a.rows() + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t lo = std::min(a.rows(), t * per);
      const std::size_t hi = std::min(a.rows(), lo + per);
      pool.emplace_back([&, t, lo, hi] { scan_rows(a, fam, subsets, q, lo, hi, fails[t], block_rows); });
    }
    for (auto& th : pool) th.join();
  }

  for (std::size_t x = 0; x < count; ++x) {
    std::uint32_t row = kNoFail;
    for (const auto& f : fails) row = std::min(row, f[x]);
    if (row == kNoFail) continue;
    out.ok = false;
    out.witness_subset.assign(subsets.begin() + static_cast<std::ptrdiff_t>(x * q),
                              subsets.begin() + static_cast<std::ptrdiff_t>((x + 1) * q));
    std::vector<Word> sum(a.words_per_row(), 0);
    for (std::size_t t : out.witness_subset) {
      auto r = fam.member(t).row(row);
      for (std::size_t w = 0; w < sum.size(); ++w) sum[w] |= r[w];
    }
    out.witness_entry = Entry{row, *first_diff(a.row(row), sum)};
    break;
  }
  return out;
}

QCoverResult check_half_covering(const BoolMatrix& a, const MatrixFamily& fam, unsigned threads) {
  if (fam.empty()) throw InvalidArgument("check_half_covering: empty family");
  QCoverOptions opts;
  opts.budget = std::numeric_limits<std::uint64_t>::max() - 1;
  opts.threads = threads;
  return check_q_covering(a, fam, (fam.size() + 1) / 2, opts);
}

// ---------------------------------------------------------------- extraction

std::pair<MatrixFamily, MatrixFamily> extract_families(const BoolMatrix& a, const BoolMatrix& b, const Cover& c,
                                                       std::uint64_t limit) {
  if (auto v = verify_kron_cover(a, b, c, limit); !v) throw InvalidArgument("extract_families: invalid cover: " + v.detail);
  const Dims da = a.dims();
  const Dims db = b.dims();
  MatrixFamily mFam(da);
  MatrixFamily nFam(db);
  for (const auto& r : c.rects) {
    Rectangle ra{project(r.rows, [&](Index x) { return x / db.rows; }), project(r.cols, [&](Index x) { return x / db.cols; })};
    Rectangle rb{project(r.rows, [&](Index x) { return x % db.rows; }), project(r.cols, [&](Index x) { return x % db.cols; })};
    BoolMatrix ma = ra.to_matrix(da);
    BoolMatrix mb = rb.to_matrix(db);
    mFam.push_back(std::move(ma), Cover{da, {std::move(ra)}});
    nFam.push_back(std::move(mb), Cover{db, {std::move(rb)}});
  }
  return {std::move(mFam), std::move(nFam)};
}

std::pair<std::vector<std::size_t>, std::size_t> best_triple_order(const MatrixFamily& mFam, const MatrixFamily& nFam) {
  if (mFam.size() != 3 || nFam.size() != 3) throw InvalidArgument("best_triple_order: both families need exactly 3 members");
  const auto rm = mFam.rank_bounds();
  const auto rn = nFam.rank_bounds();
  std::vector<std::size_t> perm{0, 1, 2};
  std::vector<std::size_t> best = perm;
  std::size_t best_bound = std::numeric_limits<std::size_t>::max();
  do {
    std::size_t bound = 0;
    for (std::size_t t = 0; t < 3; ++t) bound += rm[t] * rn[perm[t]];
    if (bound < best_bound) {
      best_bound = bound;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return {best, best_bound};
}

// ---------------------------------------------------------------- text formats

void write_cover(std::ostream& out, const Cover& c) {
  out << "COVER " << c.dims.rows << ' ' << c.dims.cols << ' ' << c.rects.size() << '\n';
  for (const auto& r : c.rects) out << "R " << textio::join_indices(r.rows) << " C " << textio::join_indices(r.cols) << '\n';
}

namespace {

std::vector<Index> checked_indices(const textio::LineReader& rd, textio::Token t, std::size_t bound) {
  const auto raw = textio::parse_index_list(rd, t, false);
  std::vector<Index> out;
  for (std::size_t k = 0; k < raw.size(); ++k) {
    if (raw[k] >= bound) rd.fail(t.column, "index " + std::to_string(raw[k]) + " out of range (bound " + std::to_string(bound) + ")");
    if (k && raw[k] <= raw[k - 1]) rd.fail(t.column, "indices must be strictly increasing");
    out.push_back(static_cast<Index>(raw[k]));
  }
  return out;
}

Cover read_cover_body(textio::LineReader& rd) {
  const auto head = textio::split_spaces(rd, rd.expect("'COVER rows cols s'"));
  if (head.size() != 4) rd.fail(1, "cover header must be 'COVER rows cols s'");
  textio::expect_keyword(rd, head[0], "COVER");
  Cover c{{textio::parse_uint(rd, head[1]), textio::parse_uint(rd, head[2])}, {}};
  const auto s = textio::parse_uint(rd, head[3]);
  for (std::uint64_t k = 0; k < s; ++k) {
    const auto tok = textio::split_spaces(rd, rd.expect("rectangle line 'R ... C ...'"));
    if (tok.size() != 4) rd.fail(1, "rectangle line must be 'R i1,i2,... C j1,j2,...'");
    textio::expect_keyword(rd, tok[0], "R");
    textio::expect_keyword(rd, tok[2], "C");
    Rectangle r{checked_indices(rd, tok[1], c.dims.rows), checked_indices(rd, tok[3], c.dims.cols)};
    c.rects.push_back(std::move(r));
  }
  return c;
}

}  // namespace

Cover read_cover(std::istream& in) {
  textio::LineReader rd(in);
  Cover c = read_cover_body(rd);
  rd.expect_end();
  return c;
}

void write_family(std::ostream& out, const MatrixFamily& fam) {
  if (!fam.has_decompositions()) throw InvalidArgument("write_family: every member needs a rank-1 decomposition");
  out << "FAMILY " << fam.dims().rows << ' ' << fam.dims().cols << ' ' << fam.size() << '\n';
  for (std::size_t t = 0; t < fam.size(); ++t) write_cover(out, *fam.decomposition(t));
}

MatrixFamily read_family(std::istream& in) {
  textio::LineReader rd(in);
  const auto head = textio::split_spaces(rd, rd.expect("'FAMILY rows cols s'"));
  if (head.size() != 4) rd.fail(1, "family header must be 'FAMILY rows cols s'");
  textio::expect_keyword(rd, head[0], "FAMILY");
  const Dims dims{textio::parse_uint(rd, head[1]), textio::parse_uint(rd, head[2])};
  const auto s = textio::parse_uint(rd, head[3]);
  MatrixFamily fam(dims);
  for (std::uint64_t t = 0; t < s; ++t) {
    const std::size_t line = rd.line_number() + 1;
    Cover c = read_cover_body(rd);
    if (c.dims != dims) throw ParseError(line, 1, "member cover shape differs from the family shape");
    BoolMatrix m = c.to_matrix();
    fam.push_back(std::move(m), std::move(c));
  }
  rd.expect_end();
  return fam;
}

}  // namespace kronrank
