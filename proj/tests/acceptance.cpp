// One PASS/FAIL line per acceptance criterion. Exit status is nonzero if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "kronrank/algebraic.hpp"
#include "kronrank/bounds.hpp"
#include "kronrank/cover.hpp"
#include "kronrank/crown.hpp"
#include "kronrank/numeric.hpp"
#include "kronrank/spanoid.hpp"
#include "oracles.hpp"

using namespace kronrank;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

// Records the first failed expectation.
struct Check {
  Outcome o;
  void operator()(bool cond, const std::string& what) {
    if (!cond && o.ok) o = {false, what};
  }
};

bool pairwise_cover(const BoolMatrix& c, const MatrixFamily& f) {
  for (std::size_t x = 0; x < f.size(); ++x)
    for (std::size_t y = x + 1; y < f.size(); ++y)
      if (boolean_sum({f.member(x), f.member(y)}) != c) return false;
  return true;
}

Outcome sigma_oracle() {
  Check c;
  for (std::size_t n = 1; n <= 8; ++n) {
    const auto r = exact_boolean_rank(crown_matrix(n));
    c(r.exact && r.value == sigma(n) && verify_cover(crown_matrix(n), r.upper).ok, "n=" + std::to_string(n));
  }
  c.o.detail = c.o.ok ? "n=1..8" : c.o.detail;
  return c.o;
}

Outcome composed_exact(std::size_t n, std::size_t m, const MatrixFamily& tn, const MatrixFamily& tm, std::size_t expect) {
  Check c;
  const Cover cov = compose_kron_cover(crown_matrix(n), tn, crown_matrix(m), tm);
  c(cov.size() == expect, "cover size " + std::to_string(cov.size()));
  c(verify_cover(kronecker(crown_matrix(n), crown_matrix(m)), cov).ok, "cover does not verify");
  const auto lb = kron_lower_bound(crown_matrix(n), crown_matrix(m));
  c(lb.value == expect, "lower bound " + std::to_string(lb.value));
  if (c.o.ok) c.o.detail = "cover " + std::to_string(cov.size()) + " = lower bound " + std::to_string(lb.value);
  return c.o;
}

Outcome c5_printed() {
  Check c;
  const auto t = c5_triple();
  c(t.member(0) == BoolMatrix::from_rows({"00111", "00111", "11001", "11001", "00000"}), "A1 differs");
  c(t.member(1) == BoolMatrix::from_rows({"01010", "10100", "01010", "10100", "11110"}), "A2 differs");
  c(t.member(2) == BoolMatrix::from_rows({"01101", "10011", "10011", "01101", "11110"}), "A3 differs");
  c(pairwise_cover(crown_matrix(5), t), "some pair does not cover C_5");
  c(t.rank_bounds() == std::vector<std::size_t>{2, 2, 3}, "decomposition sizes");
  if (c.o.ok) c.o.detail = "bit-exact, all 3 pairs cover";
  return c.o;
}

Outcome gap_theorem() {
  Check c;
  std::vector<std::size_t> ns;
  for (std::size_t k = 5; k <= 10; ++k) {
    const auto n = static_cast<std::size_t>(binomial(k, (k + 1) / 2));
    ns.push_back(n);
    const auto t = triple_cover(k, 1);
    c(pairwise_cover(crown_matrix(n), t), "triple k=" + std::to_string(k));
  }
  std::size_t eager = 0, lazy = 0;
  for (auto n : ns)
    for (auto m : ns) {
      const auto g = gap_cover(n, m);
      const std::string tag = "(" + std::to_string(n) + "," + std::to_string(m) + ")";
      c(g.cover.size() == sigma(n) * sigma(m) - 1, "size " + tag);
      if (n * m <= 4900) {
        c(verify_cover(kronecker(crown_matrix(n), crown_matrix(m)), g.cover).ok, "eager " + tag);
        ++eager;
      } else {
        c(verify_cover_lazy(crown_matrix(n), crown_matrix(m), g.cover).ok, "lazy " + tag);
        ++lazy;
      }
    }
  if (c.o.ok) c.o.detail = std::to_string(eager) + " eager, " + std::to_string(lazy) + " lazy";
  return c.o;
}

Outcome bijections() {
  Check c;
  for (std::size_t k = 2; k <= 12; ++k) {
    const auto g = build_g(k);
    auto img = g.images();
    std::sort(img.begin(), img.end());
    c(img == g.domain().sets(), "g not bijective k=" + std::to_string(k));
    for (std::size_t x = 0; x < img.size(); ++x) c((g.domain()[x] & g.images()[x]) == 0, "g meets F k=" + std::to_string(k));
  }
  for (std::size_t k = 5; k <= 10; ++k)
    for (unsigned i = 1; i <= k; ++i) {
      const auto h = build_h(k, i);
      const SubsetMask l = subset_from_elements({i});
      c(is_L_preserving(h, l) && is_L_intersection_shifting(h, l), "h k=" + std::to_string(k) + " i=" + std::to_string(i));
    }
  if (c.o.ok) c.o.detail = "g for k=2..12, h for k=5..10 and all i";
  return c.o;
}

Outcome zp_family() {
  Check c;
  std::size_t cases = 0;
  for (std::uint64_t p : {5, 7, 11, 13}) {
    std::uint64_t pq = p;
    for (std::size_t q = 1; q < p && pq <= 1000000; ++q, pq *= p) {
      const ZpFunctionFamily f(p, q);
      c(zp_property_bijective(f) && zp_property_no_common_collision(f), "p=" + std::to_string(p) + " q=" + std::to_string(q));
      ++cases;
    }
  }
  if (c.o.ok) c.o.detail = std::to_string(cases) + " (p,q) pairs";
  return c.o;
}

Outcome algebraic() {
  Check c;
  struct Case {
    std::size_t d, q, members, subsets;
    std::uint64_t n;
  };
  for (const auto& k : {Case{2, 2, 4, 6, 25}, Case{3, 2, 18, 153, 361}, Case{3, 3, 18, 816, 6859}}) {
    const auto f = algebraic_family(k.d, k.q);
    const std::string tag = "(" + std::to_string(k.d) + "," + std::to_string(k.q) + ")";
    c(f.params.n == k.n && f.family.size() == k.members, "shape " + tag);
    for (auto r : f.family.rank_bounds()) c(r <= 2 * k.d, "rank " + tag);
    const auto res = check_q_covering(crown_matrix(k.n), f.family, k.q);
    c(res.ok && res.exhaustive && res.subsets_checked == k.subsets, "coverage " + tag);
  }
  if (c.o.ok) c.o.detail = "6 + 153 + 816 subsets cover";
  return c.o;
}

Outcome asymptotic_witness() {
  Check c;
  const auto cc = composed_crown_cover(3, 3, 6);
  c(cc.n == 6859, "n");
  c(cc.half.ok && cc.half.exhaustive, "half covering");
  c(cc.hypotheses.ok, "hypotheses");
  c(cc.size <= 216 && cc.bound == 216, "size " + std::to_string(cc.size));
  c(cc.size < sigma(6859) * sigma(6859), "no gap");
  const auto strict = asymptotic_params(6859);
  c(!asymptotic_cover(81).cover, "strict d=2 should be reported infeasible");
  if (c.o.ok)
    c.o.detail = "size " + std::to_string(cc.size) + " < " + std::to_string(sigma(6859) * sigma(6859)) + "; strict route d=" +
                 std::to_string(strict.d) + " feasible=" + (strict.feasible ? "yes" : "no");
  return c.o;
}

Outcome lower_bounds() {
  Check c;
  for (std::size_t n = 3; n <= 8; ++n) {
    const auto r = isolation_number(crown_matrix(n));
    c(r.exact && r.value == 3 && is_isolation_set(crown_matrix(n), r.witness), "i(C_" + std::to_string(n) + ")");
  }
  c(kron_lower_bound(crown_matrix(10), crown_matrix(10)).value == 18, "n=10 bound");
  // every square cover the library builds
  for (std::size_t n : {4, 5, 7, 10, 20, 35, 70}) {
    const auto lb = kron_lower_bound(crown_matrix(n), crown_matrix(n)).value;
    if (n != 5) c(lb <= gap_cover(n, n).cover.size(), "gap n=" + std::to_string(n));
    c(lb <= sigma(n) * sigma(n), "product of canonical covers n=" + std::to_string(n));
  }
  const auto a25 = composed_crown_cover(2, 2, 4);
  c(kron_lower_bound(crown_matrix(25), crown_matrix(25)).value <= a25.size, "algebraic n=25");
  const auto a6859 = composed_crown_cover(3, 3, 6);
  c(kron_lower_bound(crown_matrix(6859), crown_matrix(6859)).value <= a6859.size, "algebraic n=6859");
  if (c.o.ok) c.o.detail = "i(C_n)=3 for n=3..8, C_10 bound 18";
  return c.o;
}

Outcome composition_soundness() {
  Check c;
  std::mt19937_64 rng(20240611);
  for (int it = 0; it < 200; ++it) {
    const auto a = oracle::random_matrix(rng, 1 + rng() % 5, 1 + rng() % 5, 0.6);
    const auto b = oracle::random_matrix(rng, 1 + rng() % 5, 1 + rng() % 5, 0.6);
    const std::size_t s = 1 + rng() % 5, q = (s + 1) / 2, need = s - q + 1;
    // each 1 goes into at least s - q + 1 members, so every q members cover
    auto spread = [&](const BoolMatrix& x) {
      std::vector<BoolMatrixBuilder> parts(s, BoolMatrixBuilder(x.rows(), x.cols()));
      for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) {
          if (!x.at(i, j)) continue;
          std::vector<std::size_t> order(s);
          for (std::size_t t = 0; t < s; ++t) order[t] = t;
          std::shuffle(order.begin(), order.end(), rng);
          const std::size_t take = need + rng() % (s - need + 1);
          for (std::size_t t = 0; t < take; ++t) parts[order[t]].set(i, j);
        }
      MatrixFamily f(x.dims());
      for (auto& p : parts) {
        BoolMatrix m = std::move(p).build();
        Cover cov{m.dims(), {}};
        for (std::size_t i = 0; i < m.rows(); ++i)
          for (std::size_t j = 0; j < m.cols(); ++j)
            if (m.at(i, j)) cov.rects.push_back(Rectangle::make({static_cast<Index>(i)}, {static_cast<Index>(j)}));
        f.push_back(std::move(m), std::move(cov));
      }
      return f;
    };
    const auto mf = spread(a), nf = spread(b);
    const std::string tag = "case " + std::to_string(it);
    c(verify_kron_hypotheses(a, mf, b, nf).ok, tag + ": hypotheses");
    const Cover cov = compose_kron_cover(a, mf, b, nf);
    const auto p = kronecker(a, b);
    const bool eager = verify_cover(p, cov).ok, lazy = verify_cover_lazy(a, b, cov).ok;
    c(eager && lazy, tag + ": eager=" + std::to_string(eager) + " lazy=" + std::to_string(lazy));
    // the sum of M_t (x) N_t equals A (x) B entry by entry
    const auto want = oracle::kron(oracle::dense(a), oracle::dense(b));
    oracle::Dense sum(want.size(), std::vector<int>(want.empty() ? 0 : want[0].size()));
    for (std::size_t t = 0; t < s; ++t) {
      const auto k = oracle::kron(oracle::dense(mf.member(t)), oracle::dense(nf.member(t)));
      for (std::size_t i = 0; i < k.size(); ++i)
        for (std::size_t j = 0; j < k[i].size(); ++j) sum[i][j] |= k[i][j];
    }
    c(sum == want, tag + ": sum of products");
  }
  if (c.o.ok) c.o.detail = "200 random pairs";
  return c.o;
}

Outcome spanoids() {
  Check c;
  std::size_t matrices = 0;
  for (std::size_t r = 1; r <= 3; ++r)
    for (std::size_t cc = 1; cc <= 3; ++cc)
      for (std::uint32_t bits = 0; bits < (1u << (r * cc)); ++bits) {
        BoolMatrixBuilder b(r, cc);
        for (std::size_t x = 0; x < r * cc; ++x)
          if ((bits >> x) & 1U) b.set(x / cc, x % cc);
        const auto a = std::move(b).build();
        const MatrixSpanoid s(a);
        if (s.universe_size() > 50) continue;
        const auto sr = spanoid_rank(s);
        c(sr.exact && sr.upper == exact_boolean_rank(a).value, "R(S_A) for " + to_text(a));
        ++matrices;
      }
  const auto c2 = std::make_shared<MatrixSpanoid>(BoolMatrix::from_rows({"01", "10"}));
  const auto pr = spanoid_rank(ProductSpanoid(c2, c2));
  const auto kr = exact_boolean_rank(kronecker(c2->matrix(), c2->matrix())).value;
  c(pr.exact && pr.upper == 4 && kr == 4, "C_2 product");

  // sandwich: a certified bound is never below the product rank
  std::size_t sandwiches = 0;
  const auto all = c2->make_set({0, 1});
  const auto ok = check_product_bound(c2, c2, {all, all}, {c2->make_set({0}), c2->make_set({1})});
  c(ok.ok && ok.bound >= pr.upper, "C_2 bound");
  ++sandwiches;
  const std::vector<BoolMatrix> shapes{BoolMatrix::ones(1, 2), BoolMatrix::ones(2, 2), BoolMatrix::identity(2)};
  for (const auto& x : shapes)
    for (const auto& y : shapes) {
      auto s1 = std::make_shared<MatrixSpanoid>(x);
      auto s2 = std::make_shared<MatrixSpanoid>(y);
      BitVector u1(s1->universe_size()), u2(s2->universe_size());
      u1.set_all();
      u2.set_all();
      const auto b = check_product_bound(s1, s2, {u1}, {u2});
      const auto r = spanoid_rank(ProductSpanoid(s1, s2));
      c(b.ok && b.product_spans && r.upper <= b.bound, "sandwich");
      ++sandwiches;
    }
  if (c.o.ok) c.o.detail = std::to_string(matrices) + " matrices, " + std::to_string(sandwiches) + " sandwiches";
  return c.o;
}

Outcome central_binomial() {
  Check c;
  for (unsigned r = 2; r <= 60; r += 2) {
    const BigInt lhs = binomial(r, r / 2) * binomial(r, r / 2) * (2 * r);
    const BigInt rhs = BigInt(1) << (2 * r);
    c(lhs >= rhs, "r=" + std::to_string(r));
    c(central_binomial_bound_holds(r) == (lhs >= rhs), "library disagrees at r=" + std::to_string(r));
  }
  if (c.o.ok) c.o.detail = "even r=2..60";
  return c.o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all{
      {1, "sigma(n) equals the exact rank of C_n", sigma_oracle},
      {2, "C4 (x) C4 rank is 12", [] { return composed_exact(4, 4, c4_triple(), c4_triple(), 12); }},
      {3, "C4 (x) C5 rank is 14", [] { return composed_exact(4, 5, c4_triple(), c5_triple(), 14); }},
      {4, "C5 (2,2,3) triple", c5_printed},
      {5, "gap covers for n >= 7", gap_theorem},
      {6, "bijections g and h", bijections},
      {7, "Z_p function family", zp_family},
      {8, "algebraic families cover", algebraic},
      {9, "C6859 (x) C6859 below sigma squared", asymptotic_witness},
      {10, "lower bounds", lower_bounds},
      {11, "composition soundness", composition_soundness},
      {12, "spanoid ranks", spanoids},
      {13, "central binomial inequality", central_binomial},
  };
  int failed = 0;
  for (const auto& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %2d %s: %s (%.1fs)\n", o.ok ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.ok;
  }
  return failed == 0 ? 0 : 1;
}
