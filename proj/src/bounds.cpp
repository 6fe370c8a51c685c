#include "kronrank/bounds.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <ostream>
#include <set>

#include "kronrank/crown.hpp"
#include "kronrank/error.hpp"
#include "kronrank/numeric.hpp"

namespace kronrank {

namespace {

using Bits = std::vector<Word>;

std::size_t first_bit(const Bits& b) {
  for (std::size_t w = 0; w < b.size(); ++w)
    if (b[w]) return w * kWordBits + static_cast<std::size_t>(std::countr_zero(b[w]));
  return SIZE_MAX;
}

void set_bit(Bits& b, std::size_t e) { b[e / kWordBits] |= Word{1} << (e % kWordBits); }
void clear_bit(Bits& b, std::size_t e) { b[e / kWordBits] &= ~(Word{1} << (e % kWordBits)); }

struct NodeBudget {};

// Entries of a flattened row-major, one bit per entry.
struct FlatProblem {
  std::size_t rows = 0, cols = 0, nwords = 0;
  Bits ones;
  std::vector<Rectangle> rects;
  std::vector<Bits> masks;
  std::vector<std::vector<std::size_t>> containing;  // per entry, rectangle indices in order
  std::vector<Bits> compat;                          // per entry, union of rectangles through it
  std::uint64_t max_area = 0;

  explicit FlatProblem(const BoolMatrix& a) : rows(a.rows()), cols(a.cols()), nwords(words_for(a.rows() * a.cols())) {
    ones.assign(nwords, 0);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j)
        if (a.at(i, j)) set_bit(ones, i * cols + j);
    rects = maximal_rectangles(a);
    containing.resize(rows * cols);
    compat.assign(rows * cols, Bits(nwords, 0));
    for (std::size_t r = 0; r < rects.size(); ++r) {
      Bits m(nwords, 0);
      for (Index i : rects[r].rows)
        for (Index j : rects[r].cols) set_bit(m, i * cols + j);
      for (Index i : rects[r].rows)
        for (Index j : rects[r].cols) {
          containing[i * cols + j].push_back(r);
          auto& c = compat[i * cols + j];
          for (std::size_t w = 0; w < nwords; ++w) c[w] |= m[w];
        }
      masks.push_back(std::move(m));
      max_area = std::max(max_area, rects[r].area());
    }
  }

  // Size of a greedy set of uncovered entries, no two in a common rectangle.
  std::size_t independent_bound(const Bits& uncovered, std::size_t stop_above, std::vector<std::size_t>* chosen = nullptr) const {
    Bits blocked(nwords, 0);
    std::size_t count = 0;
    for (std::size_t w = 0; w < nwords; ++w) {
      Word free = uncovered[w] & ~blocked[w];
      while (free) {
        const std::size_t e = w * kWordBits + static_cast<std::size_t>(std::countr_zero(free));
        ++count;
        if (chosen) chosen->push_back(e);
        if (count > stop_above) return count;
        const auto& c = compat[e];
        for (std::size_t v = 0; v < nwords; ++v) blocked[v] |= c[v];
        free = uncovered[w] & ~blocked[w];
      }
    }
    return count;
  }
};

struct RankSearch {
  const FlatProblem& pb;
  std::uint64_t budget;
  std::uint64_t nodes = 0;
  std::vector<std::size_t> path;
  std::vector<Bits> covered;  // per depth

  bool dfs(std::size_t depth, std::size_t k) {
    if (++nodes > budget) throw NodeBudget{};
    const Bits& cov = covered[depth];
    Bits unc(pb.nwords);
    std::uint64_t cnt = 0;
    for (std::size_t w = 0; w < pb.nwords; ++w) {
      unc[w] = pb.ones[w] & ~cov[w];
      cnt += static_cast<std::uint64_t>(std::popcount(unc[w]));
    }
    if (cnt == 0) return true;
    if (depth == k) return false;
    const std::size_t remaining = k - depth;
    if (cnt > remaining * pb.max_area) return false;
    if (pb.independent_bound(unc, remaining) > remaining) return false;
    const std::size_t e = first_bit(unc);
    for (std::size_t r : pb.containing[e]) {
      Bits& next = covered[depth + 1];
      for (std::size_t w = 0; w < pb.nwords; ++w) next[w] = cov[w] | pb.masks[r][w];
      path.push_back(r);
      if (dfs(depth + 1, k)) return true;
      path.pop_back();
    }
    return false;
  }
};

Cover greedy_cover(const FlatProblem& pb) {
  Cover c{{pb.rows, pb.cols}, {}};
  Bits unc = pb.ones;
  while (first_bit(unc) != SIZE_MAX) {
    std::size_t best = 0;
    std::uint64_t gain = 0;
    for (std::size_t r = 0; r < pb.rects.size(); ++r) {
      std::uint64_t g = 0;
      for (std::size_t w = 0; w < pb.nwords; ++w) g += static_cast<std::uint64_t>(std::popcount(unc[w] & pb.masks[r][w]));
      if (g > gain) gain = g, best = r;
    }
    c.rects.push_back(pb.rects[best]);
    for (std::size_t w = 0; w < pb.nwords; ++w) unc[w] &= ~pb.masks[best][w];
  }
  return c;
}

}  // namespace

std::uint64_t ceil_rational(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  if (num < 0) throw InvalidArgument("ceil_rational: negative value");
  const BigInt c = (num + den - 1) / den;
  return c.convert_to<std::uint64_t>();
}

std::vector<Rectangle> maximal_rectangles(const BoolMatrix& a, std::size_t cap) {
  std::set<Bits> closed;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto row = a.row(i);
    if (!words_any(row)) continue;
    Bits ni(row.begin(), row.end());
    std::vector<Bits> fresh{ni};
    for (const Bits& y : closed) {
      Bits z(y.size());
      bool any = false;
      for (std::size_t w = 0; w < z.size(); ++w) any |= (z[w] = y[w] & ni[w]) != 0;
      if (any) fresh.push_back(std::move(z));
    }
    for (auto& f : fresh) closed.insert(std::move(f));
    if (closed.size() > cap) throw BudgetExceeded("maximal_rectangles: too many maximal rectangles");
  }
  std::vector<Rectangle> out;
  for (const Bits& y : closed) {
    Rectangle r;
    for_each_bit(std::span<const Word>(y), [&](std::size_t j) { r.cols.push_back(static_cast<Index>(j)); });
    for (std::size_t i = 0; i < a.rows(); ++i)
      if (words_subset(std::span<const Word>(y), a.row(i))) r.rows.push_back(static_cast<Index>(i));
    out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end(), [](const Rectangle& x, const Rectangle& y) {
    if (x.area() != y.area()) return x.area() > y.area();
    if (x.rows != y.rows) return x.rows < y.rows;
    return x.cols < y.cols;
  });
  return out;
}

const char* to_string(LowerWitness::Kind k) {
  switch (k) {
    case LowerWitness::Kind::Isolation: return "isolation";
    case LowerWitness::Kind::Mu: return "mu";
    case LowerWitness::Kind::Search: return "search";
  }
  return "search";
}

RankCertificate exact_boolean_rank(const BoolMatrix& a, std::size_t limit, std::uint64_t node_budget) {
  RankCertificate cert;
  cert.upper = Cover{a.dims(), {}};
  if (a.is_zero()) {
    cert.exact = true;
    return cert;
  }
  const FlatProblem pb(a);
  const std::uint64_t ones = a.count_ones();
  const std::size_t mu_bound = static_cast<std::size_t>((ones + pb.max_area - 1) / pb.max_area);
  const std::size_t iso_bound = pb.independent_bound(pb.ones, SIZE_MAX);
  const std::size_t root = std::max(mu_bound, iso_bound);

  RankSearch search{pb, node_budget, 0, {}, std::vector<Bits>(1, Bits(pb.nwords, 0))};
  std::size_t k = root;
  try {
    for (; k < limit; ++k) {
      search.covered.assign(k + 1, Bits(pb.nwords, 0));
      search.path.clear();
      if (search.dfs(0, k)) {
        cert.value = k;
        cert.exact = true;
        for (std::size_t r : search.path) cert.upper.rects.push_back(pb.rects[r]);
        if (k == iso_bound)
          cert.lower = {LowerWitness::Kind::Isolation, k};
        else if (k == mu_bound)
          cert.lower = {LowerWitness::Kind::Mu, k};
        else
          cert.lower = {LowerWitness::Kind::Search, k};
        cert.nodes = search.nodes;
        return cert;
      }
    }
  } catch (const NodeBudget&) {
    cert.budget_exhausted = true;
  }
  cert.nodes = search.nodes;
  cert.value = cert.budget_exhausted ? k : std::max(k, limit);
  cert.lower = {k == root && !cert.budget_exhausted && root >= limit
                    ? (root == iso_bound ? LowerWitness::Kind::Isolation : LowerWitness::Kind::Mu)
                    : LowerWitness::Kind::Search,
                cert.value};
  cert.upper = greedy_cover(pb);
  return cert;
}

bool is_isolation_set(const BoolMatrix& a, const std::vector<Entry>& entries) {
  for (std::size_t x = 0; x < entries.size(); ++x) {
    const auto [i, j] = entries[x];
    if (i >= a.rows() || j >= a.cols() || !a.at(i, j)) return false;
    for (std::size_t y = x + 1; y < entries.size(); ++y) {
      const auto [k, l] = entries[y];
      if (i == k || j == l) return false;
      if (a.at(i, l) && a.at(k, j)) return false;
    }
  }
  return true;
}

IsolationResult isolation_number(const BoolMatrix& a, std::uint64_t node_budget) {
  std::vector<Entry> verts;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (a.at(i, j)) verts.emplace_back(i, j);
  IsolationResult res;
  if (verts.empty()) return res;
  const std::size_t nv = verts.size(), nw = words_for(nv);
  std::vector<Bits> adj(nv, Bits(nw, 0));
  for (std::size_t x = 0; x < nv; ++x)
    for (std::size_t y = x + 1; y < nv; ++y) {
      const auto [i, j] = verts[x];
      const auto [k, l] = verts[y];
      if (i != k && j != l && !(a.at(i, l) && a.at(k, j))) {
        set_bit(adj[x], y);
        set_bit(adj[y], x);
      }
    }

  std::vector<std::size_t> best, cur;
  std::uint64_t nodes = 0;
  bool exhausted = false;
  std::function<void(Bits)> expand = [&](Bits p) {
    if (exhausted) return;
    if (++nodes > node_budget) {
      exhausted = true;
      return;
    }
    // Greedy colouring gives the bound; vertices are tried from the highest colour down.
    std::vector<std::size_t> order, colour;
    Bits uncoloured = p;
    std::size_t c = 0;
    while (first_bit(uncoloured) != SIZE_MAX) {
      ++c;
      Bits q = uncoloured;
      for (std::size_t v = first_bit(q); v != SIZE_MAX; v = first_bit(q)) {
        order.push_back(v);
        colour.push_back(c);
        clear_bit(uncoloured, v);
        clear_bit(q, v);
        for (std::size_t w = 0; w < nw; ++w) q[w] &= ~adj[v][w];
      }
    }
    for (std::size_t idx = order.size(); idx-- > 0;) {
      if (cur.size() + colour[idx] <= best.size()) return;
      const std::size_t v = order[idx];
      cur.push_back(v);
      Bits np(nw);
      bool any = false;
      for (std::size_t w = 0; w < nw; ++w) any |= (np[w] = p[w] & adj[v][w]) != 0;
      if (!any) {
        if (cur.size() > best.size()) best = cur;
      } else {
        expand(np);
      }
      cur.pop_back();
      clear_bit(p, v);
      if (exhausted) return;
    }
  };
  Bits all(nw, 0);
  for (std::size_t v = 0; v < nv; ++v) set_bit(all, v);
  expand(all);
  std::sort(best.begin(), best.end());
  for (std::size_t v : best) res.witness.push_back(verts[v]);
  res.value = best.size();
  res.exact = !exhausted;
  return res;
}

Rational mu_crown(std::size_t n) {
  if (n < 2) throw InvalidArgument("mu_crown: C_n is zero for n < 2");
  const std::uint64_t nn = n;
  return Rational(BigInt(nn * (nn - 1)), BigInt(((nn + 1) / 2) * (nn / 2)));
}

MuResult mu(const BoolMatrix& a) {
  if (a.is_zero()) throw InvalidArgument("mu: zero matrix");
  MuResult r;
  r.ones = a.count_ones();
  if (is_crown_matrix(a)) {
    const std::size_t n = a.rows(), c = (n + 1) / 2;
    for (std::size_t i = 0; i < c; ++i) r.witness.rows.push_back(static_cast<Index>(i));
    for (std::size_t j = c; j < n; ++j) r.witness.cols.push_back(static_cast<Index>(j));
    r.max_area = r.witness.area();
    r.value = mu_crown(n);
    return r;
  }
  const auto rects = maximal_rectangles(a);
  r.witness = rects.front();
  r.max_area = r.witness.area();
  r.value = Rational(BigInt(r.ones), BigInt(r.max_area));
  return r;
}

namespace {

std::size_t boolean_rank_of(const BoolMatrix& a) {
  if (is_crown_matrix(a)) return sigma(a.rows());
  const RankCertificate c = exact_boolean_rank(a);
  if (!c.exact) throw BudgetExceeded("kron_lower_bound: exact rank search did not complete");
  return c.value;
}

std::optional<std::size_t> small_isolation(const BoolMatrix& a) {
  if (a.count_ones() > 2000) return std::nullopt;
  const IsolationResult r = isolation_number(a, 1'000'000);
  if (!r.exact) return std::nullopt;
  return r.value;
}

}  // namespace

KronLowerBound kron_lower_bound(const BoolMatrix& a, const BoolMatrix& b) {
  if (a.is_zero() || b.is_zero()) throw InvalidArgument("kron_lower_bound: zero input");
  KronLowerBound out;
  out.mu_a = mu(a).value;
  out.mu_b = mu(b).value;
  out.rank_a = boolean_rank_of(a);
  out.rank_b = boolean_rank_of(b);
  out.value = std::max(ceil_rational(out.mu_a * out.rank_b), ceil_rational(out.mu_b * out.rank_a));
  const auto ia = small_isolation(a), ib = small_isolation(b);
  if (ia && ib) out.isolation_value = std::max(*ia * out.rank_b, out.rank_a * *ib);
  return out;
}

bool central_binomial_bound_holds(unsigned r) {
  if (r == 0 || r % 2) throw InvalidArgument("central_binomial_bound_holds: r must be even and positive");
  const BigInt c = binomial(r, r / 2);
  return c * c * (2 * r) >= (BigInt(1) << (2 * r));
}

void write_certificate(std::ostream& out, const RankCertificate& c) {
  write_cover(out, c.upper);
  out << "LOWER kind=" << to_string(c.lower.kind) << " value=" << c.lower.value << '\n';
}

}  // namespace kronrank
