#include "kronrank/spanoid.hpp"

#include <algorithm>
#include <bit>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "kronrank/error.hpp"
#include "textio.hpp"

namespace kronrank {

BitVector Spanoid::span(const BitVector& t) const { return generic_span(*this, t); }

BitVector Spanoid::make_set(const std::vector<std::size_t>& elems) const {
  BitVector b(universe_size());
  for (std::size_t e : elems) {
    if (e >= universe_size()) throw InvalidArgument("spanoid: element " + std::to_string(e) + " outside the universe");
    b.set(e);
  }
  return b;
}

BitVector generic_span(const Spanoid& s, const BitVector& t) {
  if (t.size() != s.universe_size()) throw DimensionError("span: set has the wrong universe size");
  BitVector cur = t;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < s.universe_size(); ++i) {
      if (!cur.test(i) && s.infers(cur, i)) {
        cur.set(i);
        changed = true;
      }
    }
  }
  return cur;
}

// ---------------------------------------------------------------- explicit

ExplicitSpanoid::ExplicitSpanoid(std::size_t universe, std::vector<SpanoidRule> rules)
    : universe_(universe), rules_(std::move(rules)) {
  for (const auto& r : rules_) {
    BitVector p(universe_);
    if (r.conclusion >= universe_) throw InvalidArgument("spanoid rule: conclusion outside the universe");
    for (std::size_t e : r.premises) {
      if (e >= universe_) throw InvalidArgument("spanoid rule: premise outside the universe");
      p.set(e);
    }
    premise_sets_.push_back(std::move(p));
  }
}

bool ExplicitSpanoid::infers(const BitVector& t, std::size_t i) const {
  if (t.test(i)) return true;
  for (std::size_t r = 0; r < rules_.size(); ++r)
    if (rules_[r].conclusion == i && premise_sets_[r].subset_of(t)) return true;
  return false;
}

// ---------------------------------------------------------------- matrix

MatrixSpanoid::MatrixSpanoid(BoolMatrix a, std::size_t cap) : a_(std::move(a)) {
  const std::size_t rows = a_.rows(), cols = a_.cols();
  if (rows > 63 || cols > 63) throw InvalidArgument("MatrixSpanoid: at most 63 rows and columns");
  std::vector<std::uint64_t> nbr(rows, 0);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (a_.at(i, j)) nbr[i] |= std::uint64_t{1} << j;

  // Column masks in increasing order; for each, every nonempty subset of its common rows.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> found;  // (cols, rows)
  const auto consider = [&](std::uint64_t y) {
    std::uint64_t common = 0;
    for (std::size_t i = 0; i < rows; ++i)
      if ((nbr[i] & y) == y) common |= std::uint64_t{1} << i;
    if (!common) return;
    std::vector<std::uint64_t> subs;
    for (std::uint64_t x = common; x; x = (x - 1) & common) subs.push_back(x);
    std::sort(subs.begin(), subs.end());
    for (std::uint64_t x : subs) {
      found.emplace_back(y, x);
      if (found.size() > cap) throw BudgetExceeded("MatrixSpanoid: universe exceeds " + std::to_string(cap) + " elements");
    }
  };
  // Candidate column sets: nonempty subsets of some row's neighbourhood.
  std::vector<std::uint64_t> ys;
  for (auto n : nbr) {
    if (std::popcount(n) > 40) throw BudgetExceeded("MatrixSpanoid: universe exceeds " + std::to_string(cap) + " elements");
    for (std::uint64_t y = n; y; y = (y - 1) & n) {
      ys.push_back(y);
      if (ys.size() > 4 * cap) {
        std::sort(ys.begin(), ys.end());
        ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
        if (ys.size() > cap) throw BudgetExceeded("MatrixSpanoid: universe exceeds " + std::to_string(cap) + " elements");
      }
    }
  }
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  for (auto y : ys) consider(y);

  for (const auto& [y, x] : found) {
    Rectangle r;
    BitVector sup(rows * cols);
    for (std::size_t i = 0; i < rows; ++i)
      if ((x >> i) & 1U) r.rows.push_back(static_cast<Index>(i));
    for (std::size_t j = 0; j < cols; ++j)
      if ((y >> j) & 1U) r.cols.push_back(static_cast<Index>(j));
    for (Index i : r.rows)
      for (Index j : r.cols) sup.set(i * cols + j);
    elements_.push_back(std::move(r));
    supports_.push_back(std::move(sup));
  }
}

BitVector MatrixSpanoid::support_union(const BitVector& t) const {
  if (t.size() != universe_size()) throw DimensionError("MatrixSpanoid: set has the wrong universe size");
  BitVector u(a_.rows() * a_.cols());
  for_each_bit(t.words(), [&](std::size_t e) { u |= supports_[e]; });
  return u;
}

bool MatrixSpanoid::infers(const BitVector& t, std::size_t i) const { return supports_.at(i).subset_of(support_union(t)); }

BitVector MatrixSpanoid::span(const BitVector& t) const {
  const BitVector u = support_union(t);
  BitVector out(universe_size());
  for (std::size_t e = 0; e < supports_.size(); ++e)
    if (supports_[e].subset_of(u)) out.set(e);
  return out;
}

std::optional<std::size_t> MatrixSpanoid::find(const Rectangle& r) const {
  for (std::size_t e = 0; e < elements_.size(); ++e)
    if (elements_[e] == r) return e;
  return std::nullopt;
}

// ---------------------------------------------------------------- product

ProductSpanoid::ProductSpanoid(std::shared_ptr<const Spanoid> s1, std::shared_ptr<const Spanoid> s2, std::size_t cap)
    : s1_(std::move(s1)), s2_(std::move(s2)), n1_(s1_->universe_size()), n2_(s2_->universe_size()) {
  if (n1_ * n2_ > cap)
    throw BudgetExceeded("ProductSpanoid: universe " + std::to_string(n1_ * n2_) + " exceeds " + std::to_string(cap));
}

BitVector ProductSpanoid::column_slice(const BitVector& t, std::size_t j) const {
  BitVector s(n1_);
  for (std::size_t i = 0; i < n1_; ++i)
    if (t.test(pair(i, j))) s.set(i);
  return s;
}

BitVector ProductSpanoid::row_slice(const BitVector& t, std::size_t i) const {
  BitVector s(n2_);
  for (std::size_t j = 0; j < n2_; ++j)
    if (t.test(pair(i, j))) s.set(j);
  return s;
}

bool ProductSpanoid::infers(const BitVector& t, std::size_t e) const {
  if (t.size() != universe_size()) throw DimensionError("ProductSpanoid: set has the wrong universe size");
  if (t.test(e)) return true;
  const std::size_t i = e / n2_, j = e % n2_;
  return s1_->infers(column_slice(t, j), i) || s2_->infers(row_slice(t, i), j);
}

BitVector ProductSpanoid::span(const BitVector& t) const {
  if (t.size() != universe_size()) throw DimensionError("ProductSpanoid: set has the wrong universe size");
  BitVector cur = t;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t j = 0; j < n2_; ++j) {
      const BitVector s = s1_->span(column_slice(cur, j));
      for (std::size_t i = 0; i < n1_; ++i)
        if (s.test(i) && !cur.test(pair(i, j))) cur.set(pair(i, j)), changed = true;
    }
    for (std::size_t i = 0; i < n1_; ++i) {
      const BitVector s = s2_->span(row_slice(cur, i));
      for (std::size_t j = 0; j < n2_; ++j)
        if (s.test(j) && !cur.test(pair(i, j))) cur.set(pair(i, j)), changed = true;
    }
  }
  return cur;
}

// ---------------------------------------------------------------- rank

SpanoidRank spanoid_rank(const Spanoid& s, const SpanoidRankOptions& opts) {
  const std::size_t u = s.universe_size();
  SpanoidRank out;
  out.upper = u;
  for (std::size_t e = 0; e < u; ++e) out.witness.push_back(e);
  for (std::size_t k = 0; k <= std::min(u, opts.max_size); ++k) {
    std::vector<std::size_t> c(k);
    for (std::size_t j = 0; j < k; ++j) c[j] = j;
    while (true) {
      if (++out.checked > opts.budget) return out;
      if (s.spans_all(s.make_set(c))) {
        out.exact = true;
        out.lower = out.upper = k;
        out.witness = c;
        return out;
      }
      std::size_t i = k;
      while (i > 0 && c[i - 1] == u - k + i - 1) --i;
      if (i == 0) break;
      ++c[i - 1];
      for (std::size_t j = i; j < k; ++j) c[j] = c[j - 1] + 1;
    }
    out.lower = k + 1;
  }
  if (out.lower >= out.upper) out.exact = true;
  return out;
}

ProductBound check_product_bound(const std::shared_ptr<const Spanoid>& s1, const std::shared_ptr<const Spanoid>& s2,
                                 const std::vector<BitVector>& mSets, const std::vector<BitVector>& nSets) {
  if (mSets.size() != nSets.size()) throw InvalidArgument("check_product_bound: set lists differ in length");
  const std::size_t n1 = s1->universe_size(), n2 = s2->universe_size();
  for (const auto& m : mSets)
    if (m.size() != n1) throw DimensionError("check_product_bound: M-set over the wrong universe");
  for (const auto& n : nSets)
    if (n.size() != n2) throw DimensionError("check_product_bound: N-set over the wrong universe");

  ProductBound out;
  for (std::size_t t = 0; t < mSets.size(); ++t) out.bound += mSets[t].count() * nSets[t].count();
  for (std::size_t i = 0; i < n1; ++i) {
    BitVector collected(n2);
    for (std::size_t t = 0; t < mSets.size(); ++t)
      if (mSets[t].test(i)) collected |= nSets[t];
    if (!s2->spans_all(collected)) {
      out.witness = i;
      return out;
    }
  }
  const ProductSpanoid prod(s1, s2, SIZE_MAX);
  BitVector all(n1 * n2);
  for (std::size_t t = 0; t < mSets.size(); ++t)
    for (std::size_t i : mSets[t].indices())
      for (std::size_t j : nSets[t].indices()) all.set(prod.pair(i, j));
  out.spanning_set_size = all.count();
  out.product_spans = prod.spans_all(all);
  out.ok = out.product_spans;
  return out;
}

// ---------------------------------------------------------------- text

std::shared_ptr<const Spanoid> read_spanoid(std::istream& in, const std::string& base_dir) {
  textio::LineReader r(in);
  const auto head = r.expect("spanoid header");
  const auto tok = textio::split_spaces(r, head);
  if (tok[0].text == "MATSPANOID") {
    if (tok.size() != 2) r.fail(1, "expected 'MATSPANOID <matrix-file>'");
    r.expect_end();
    const std::filesystem::path p = std::filesystem::path(base_dir) / std::string(tok[1].text);
    std::ifstream f(p);
    if (!f) throw InvalidArgument("cannot open matrix file " + p.string());
    return std::make_shared<MatrixSpanoid>(read_matrix(f));
  }
  textio::expect_keyword(r, tok[0], "SPANOID");
  if (tok.size() != 3) r.fail(1, "expected 'SPANOID u r'");
  const std::size_t u = textio::parse_uint(r, tok[1]);
  const std::size_t n = textio::parse_uint(r, tok[2]);
  std::vector<SpanoidRule> rules;
  for (std::size_t k = 0; k < n; ++k) {
    const auto line = r.expect("a rule line");
    const auto t = textio::split_spaces(r, line);
    // "S: i1,...,ik -> j", or "S: -> j" for an empty premise.
    if (t.size() != 4 && t.size() != 3) r.fail(1, "expected 'S: i1,...,ik -> j'");
    textio::expect_keyword(r, t[0], "S:");
    const bool empty = t.size() == 3;
    textio::expect_keyword(r, t[empty ? 1 : 2], "->");
    SpanoidRule rule;
    if (!empty)
      for (auto e : textio::parse_index_list(r, t[1], false)) {
        if (e >= u) r.fail(t[1].column, "element outside the universe");
        rule.premises.push_back(e);
      }
    const auto& ct = t[empty ? 2 : 3];
    rule.conclusion = textio::parse_uint(r, ct);
    if (rule.conclusion >= u) r.fail(ct.column, "element outside the universe");
    rules.push_back(std::move(rule));
  }
  r.expect_end();
  return std::make_shared<ExplicitSpanoid>(u, std::move(rules));
}

std::shared_ptr<const Spanoid> load_spanoid(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InvalidArgument("cannot open spanoid file " + path);
  return read_spanoid(f, std::filesystem::path(path).parent_path().string().empty()
                             ? std::string(".")
                             : std::filesystem::path(path).parent_path().string());
}

void write_spanoid(std::ostream& out, const ExplicitSpanoid& s) {
  out << "SPANOID " << s.universe_size() << ' ' << s.rules().size() << '\n';
  for (const auto& r : s.rules()) {
    out << "S:";
    if (!r.premises.empty()) out << ' ' << textio::join_indices(r.premises);
    out << " -> " << r.conclusion << '\n';
  }
}

std::vector<std::vector<std::size_t>> read_sets(std::istream& in) {
  textio::LineReader r(in);
  const auto tok = textio::split_spaces(r, r.expect("sets header"));
  textio::expect_keyword(r, tok[0], "SETS");
  if (tok.size() != 2) r.fail(1, "expected 'SETS s'");
  const std::size_t n = textio::parse_uint(r, tok[1]);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t k = 0; k < n; ++k) {
    const auto line = r.expect("a set line");
    std::vector<std::size_t> s;
    if (line != "-") {
      for (auto e : textio::parse_index_list(r, {line, 1}, false)) s.push_back(e);
      if (!std::is_sorted(s.begin(), s.end()) || std::adjacent_find(s.begin(), s.end()) != s.end())
        r.fail(1, "set elements must be sorted and distinct");
    }
    out.push_back(std::move(s));
  }
  r.expect_end();
  return out;
}

void write_sets(std::ostream& out, const std::vector<std::vector<std::size_t>>& sets) {
  out << "SETS " << sets.size() << '\n';
  for (const auto& s : sets) out << (s.empty() ? std::string("-") : textio::join_indices(s)) << '\n';
}

}  // namespace kronrank
