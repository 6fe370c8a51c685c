#include "kronrank/algebraic.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <thread>

#include "kronrank/error.hpp"

namespace kronrank {

namespace {

std::uint64_t checked_pow(std::uint64_t base, std::size_t exp, std::uint64_t cap) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (r > cap / base) return cap + 1;
    r *= base;
  }
  return r;
}

// Next q-subset of [0, m) in lexicographic order; false after the last one.
bool next_combination(std::vector<std::size_t>& c, std::size_t m) {
  const std::size_t q = c.size();
  std::size_t i = q;
  while (i > 0 && c[i - 1] == m - q + i - 1) --i;
  if (i == 0) return false;
  ++c[i - 1];
  for (std::size_t j = i; j < q; ++j) c[j] = c[j - 1] + 1;
  return true;
}

}  // namespace

ZpFunctionFamily::ZpFunctionFamily(std::uint64_t p, std::size_t q) : p_(p), q_(q) {
  if (!is_prime(p)) throw InvalidArgument("ZpFunctionFamily: p must be prime");
  if (q < 1 || p <= q) throw InvalidArgument("ZpFunctionFamily: need p > q >= 1");
  coeff_.resize(count() * q);
  for (std::uint64_t i = 1; i < p; ++i) {
    std::uint64_t c = 1;
    for (std::size_t t = 0; t < q; ++t) {
      coeff_[(i - 1) * q + t] = c;
      c = c * i % p;
    }
  }
}

std::uint64_t ZpFunctionFamily::eval(std::uint64_t i, std::span<const std::uint64_t> x) const {
  if (i < 1 || i >= p_) throw InvalidArgument("ZpFunctionFamily::eval: index outside [p-1]");
  if (x.size() != q_) throw DimensionError("ZpFunctionFamily::eval: tuple of the wrong length");
  std::uint64_t v = 0;
  for (std::size_t t = 0; t < q_; ++t) {
    if (x[t] >= p_) throw InvalidArgument("ZpFunctionFamily::eval: entry outside Z_p");
    v = (v + coefficient(i, t + 1) * x[t]) % p_;
  }
  return v;
}

bool zp_property_bijective(const ZpFunctionFamily& g) {
  const std::uint64_t p = g.p();
  const std::size_t q = g.q();
  std::vector<std::uint64_t> x(q, 0);
  std::vector<char> seen(p);
  for (std::uint64_t i = 1; i < p; ++i) {
    std::fill(x.begin(), x.end(), 0);
    while (true) {
      std::fill(seen.begin(), seen.end(), 0);
      for (std::uint64_t x1 = 0; x1 < p; ++x1) {
        x[0] = x1;
        const std::uint64_t v = g.eval(i, x);
        if (seen[v]) return false;
        seen[v] = 1;
      }
      std::size_t t = 1;
      while (t < q && ++x[t] == p) x[t++] = 0;
      if (t == q) break;
    }
  }
  return true;
}

bool zp_property_no_common_collision(const ZpFunctionFamily& g) {
  const std::uint64_t p = g.p();
  const std::size_t q = g.q();
  const std::uint64_t total = checked_pow(p, q, std::uint64_t{1} << 32);
  if (total > (std::uint64_t{1} << 32)) throw BudgetExceeded("zp_property_no_common_collision: p^q too large");

  std::vector<std::vector<std::size_t>> subsets;
  std::vector<std::size_t> c(q);
  for (std::size_t j = 0; j < q; ++j) c[j] = j;
  do subsets.push_back(c);
  while (next_combination(c, g.count()));

  std::vector<std::uint64_t> place(q, 1);
  for (std::size_t j = 1; j < q; ++j) place[j] = place[j - 1] * p;

  std::atomic<bool> ok{true};
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    std::vector<char> seen(total);
    std::vector<std::uint64_t> x(q), vals(q);
    std::size_t idx;
    while (ok && (idx = next++) < subsets.size()) {
      const auto& sub = subsets[idx];
      std::fill(seen.begin(), seen.end(), 0);
      std::fill(x.begin(), x.end(), 0);
      std::fill(vals.begin(), vals.end(), 0);
      for (std::uint64_t step = 0; step < total; ++step) {
        std::uint64_t code = 0;
        for (std::size_t j = 0; j < q; ++j) code += vals[j] * place[j];
        if (seen[code]) {
          ok = false;
          return;
        }
        seen[code] = 1;
        // Odometer step: every digit that changes moves g by +i^(t-1), wrapping included.
        std::size_t t = 0;
        do {
          for (std::size_t j = 0; j < q; ++j) {
            vals[j] += g.coefficient(sub[j] + 1, t + 1);
            if (vals[j] >= p) vals[j] -= p;
          }
          if (++x[t] < p) break;
          x[t] = 0;
        } while (++t < q);
      }
    }
  };
  const unsigned nthreads = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), 16));
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < nthreads; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return ok;
}

AlgebraicCoverParams algebraic_params(std::size_t d, std::size_t q, std::uint64_t limit) {
  if (d < 1) throw InvalidArgument("algebraic_params: d must be at least 1");
  if (q < 2) throw InvalidArgument("algebraic_params: q must be at least 2");
  if (2 * d * q > kMaxGround) throw InvalidArgument("algebraic_params: 2dq exceeds 63");
  AlgebraicCoverParams a;
  a.d = d;
  a.q = q;
  a.k = 2 * d * q;
  a.p = largest_prime_leq(binomial(2 * d, d).convert_to<std::uint64_t>());
  if (a.p <= q)
    throw InvalidArgument("algebraic_params: p = " + std::to_string(a.p) + " must exceed q = " + std::to_string(q));
  const std::uint64_t side_cap = std::uint64_t{1} << 32;
  a.n = checked_pow(a.p, q, side_cap);
  if (a.n > side_cap || a.n * a.n > limit)
    throw MaterializationLimit("algebraic_params: C_n with n = " + std::to_string(a.p) + "^" + std::to_string(q) +
                               " exceeds the materialization limit");

  const std::vector<SubsetMask> local = colex_subsets(2 * d, d);
  for (std::size_t j = 0; j < q; ++j) {
    a.blocks.push_back(ground_set(2 * d) << (2 * d * j));
    std::vector<SubsetMask> bj;
    for (std::uint64_t v = 0; v < a.p; ++v) bj.push_back(local[v] << (2 * d * j));
    a.chosen.push_back(std::move(bj));
  }

  std::vector<SubsetMask> sets(a.n);
  std::vector<std::uint64_t> x(q, 0);
  for (std::uint64_t r = 0; r < a.n; ++r) {
    SubsetMask s = 0;
    for (std::size_t j = 0; j < q; ++j) s |= a.chosen[j][x[j]];
    sets[r] = s;
    for (std::size_t j = 0; j < q && ++x[j] == a.p; ++j) x[j] = 0;
  }
  a.product = SubsetFamily(a.k, d * q, std::move(sets));
  return a;
}

FamilyBijection algebraic_bijection(const AlgebraicCoverParams& params, const ZpFunctionFamily& g, std::uint64_t i) {
  if (g.p() != params.p || g.q() != params.q) throw InvalidArgument("algebraic_bijection: function family does not match");
  std::vector<SubsetMask> images(params.n);
  std::vector<std::uint64_t> x(params.q, 0);
  const SubsetMask rest = ~params.blocks[0];
  for (std::uint64_t r = 0; r < params.n; ++r) {
    images[r] = (params.product[r] & rest) | params.chosen[0][g.eval(i, x)];
    for (std::size_t j = 0; j < params.q && ++x[j] == params.p; ++j) x[j] = 0;
  }
  return FamilyBijection(params.product, std::move(images));
}

AlgebraicFamily algebraic_family(std::size_t d, std::size_t q, std::uint64_t limit) {
  AlgebraicFamily out{algebraic_params(d, q, limit), MatrixFamily({0, 0})};
  const auto& a = out.params;
  const ZpFunctionFamily g(a.p, a.q);
  const std::vector<unsigned> block1 = subset_elements(a.blocks[0]);
  out.family = MatrixFamily({a.n, a.n});
  for (std::uint64_t i = 1; i < a.p; ++i) {
    const FamilyBijection h = algebraic_bijection(a, g, i);
    Cover c = intersection_cover(h.image_family(), block1);
    BoolMatrix m = c.to_matrix();
    out.family.push_back(std::move(m), std::move(c));
  }
  return out;
}

AsymptoticParams asymptotic_params(std::uint64_t n, std::uint64_t limit) {
  if (n < 2) throw InvalidArgument("asymptotic_params: n must be at least 2");
  AsymptoticParams a;
  a.n = n;
  for (std::size_t d = 1;; ++d) {
    const BigInt half = binomial(2 * d, d) / 2;
    const BigInt nd = boost::multiprecision::pow(half, 1u << d);
    if (nd >= n) {
      a.d = d;
      a.n_d = nd;
      break;
    }
  }
  a.q = std::uint64_t{1} << a.d;
  a.s = std::uint64_t{1} << (a.d + 1);
  a.p = largest_prime_leq(binomial(2 * a.d, a.d).convert_to<std::uint64_t>());
  a.cover_size = boost::multiprecision::pow(BigInt(a.p), static_cast<unsigned>(a.q));
  a.k = sigma(n);
  if (a.k % 2) ++a.k;
  a.bound = (std::uint64_t{1} << (a.d + 3)) * a.d * a.d;
  a.feasible = a.p > a.q && a.p - 1 >= a.s && BigInt(n) <= a.cover_size;
  a.materializable = a.cover_size * a.cover_size <= limit && 2 * a.d * a.q <= kMaxGround;
  return a;
}

std::string params_line(const AsymptoticParams& a) {
  std::ostringstream o;
  o << "PARAMS d=" << a.d << " q=" << a.q << " p=" << a.p << " n=" << a.n << " k=" << a.k << " s=" << a.s
    << " bound=" << a.bound << " feasible=" << (a.feasible ? "yes" : "no");
  return o.str();
}

std::string params_line(const AlgebraicCoverParams& a, std::size_t s, std::uint64_t bound) {
  std::ostringstream o;
  o << "PARAMS d=" << a.d << " q=" << a.q << " p=" << a.p << " n=" << a.n << " k=" << a.k << " s=" << s
    << " bound=" << bound << " feasible=" << (a.p - 1 >= s ? "yes" : "no");
  return o.str();
}

ComposedCrownCover composed_crown_cover(std::size_t d, std::size_t q, std::size_t s, std::uint64_t n, std::uint64_t limit,
                                        unsigned threads) {
  AlgebraicFamily af = algebraic_family(d, q, limit);
  if (s < 1 || s > af.family.size())
    throw InvalidArgument("composed_crown_cover: s must lie in [1, p-1] = [1, " + std::to_string(af.family.size()) + "]");
  if (n == 0) n = af.params.n;
  if (n > af.params.n) throw InvalidArgument("composed_crown_cover: n exceeds p^q");

  ComposedCrownCover out;
  out.n = n;
  out.d = d;
  out.q = q;
  out.s = s;
  out.family = af.family.prefix(s);
  if (n < af.params.n) out.family = out.family.restricted(n, n);
  out.size = composed_size(out.family, out.family);
  out.bound = s * (2 * d) * (2 * d);
  const BoolMatrix c = crown_matrix(n);
  out.half = check_half_covering(c, out.family, threads);
  out.hypotheses = verify_kron_hypotheses(c, out.family, c, out.family);
  return out;
}

AsymptoticResult asymptotic_cover(std::uint64_t n, std::uint64_t limit) {
  AsymptoticResult r;
  r.params = asymptotic_params(n, limit);
  const auto& a = r.params;
  if (!a.feasible) {
    std::ostringstream o;
    o << "infeasible: p-1=" << a.p - 1 << " s=" << a.s << " q=" << a.q;
    if (BigInt(n) > a.cover_size) o << " n exceeds p^q";
    r.note = o.str();
    return r;
  }
  if (!a.materializable) {
    r.note = "beyond materialization: p^q=" + a.cover_size.str();
    return r;
  }
  r.cover = composed_crown_cover(a.d, a.q, a.s, n, limit);
  return r;
}

}  // namespace kronrank
