#include <doctest.h>

#include <random>
#include <sstream>

#include "kronrank/boolmat.hpp"
#include "kronrank/error.hpp"
#include "oracles.hpp"

using namespace kronrank;

TEST_CASE("boolean_sum") {
  const auto x = BoolMatrix::from_rows({"01", "10"});
  const auto y = BoolMatrix::from_rows({"10", "01"});
  CHECK(boolean_sum({x, y}) == BoolMatrix::ones(2, 2));
  CHECK(boolean_sum({x, x}) == x);
  CHECK_THROWS_AS(boolean_sum({x, BoolMatrix::zeros(2, 3)}), DimensionError);
  CHECK_THROWS_AS(boolean_sum(std::span<const BoolMatrix>()), InvalidArgument);

  // two labelled 4x4 matrices whose sum is C_4
  const auto p = BoolMatrix::from_rows({"0011", "0011", "1100", "1100"});
  const auto q = BoolMatrix::from_rows({"0110", "1001", "1001", "0110"});
  CHECK(boolean_sum({p, q}) == BoolMatrix::from_rows({"0111", "1011", "1101", "1110"}));
}

TEST_CASE("boolean_sum is associative, commutative and idempotent") {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 100; ++it) {
    const std::size_t r = 1 + rng() % 7, c = 1 + rng() % 70;
    const auto a = oracle::random_matrix(rng, r, c), b = oracle::random_matrix(rng, r, c), d = oracle::random_matrix(rng, r, c);
    CHECK(boolean_sum({a, b}) == boolean_sum({b, a}));
    CHECK(boolean_sum({boolean_sum({a, b}), d}) == boolean_sum({a, boolean_sum({b, d})}));
    CHECK(boolean_sum({a, a}) == a);
  }
}

TEST_CASE("boolean_product") {
  const auto m = BoolMatrix::from_rows({"101", "011"});
  CHECK(boolean_product(BoolMatrix::identity(2), m) == m);
  CHECK(boolean_product(BoolMatrix::ones(4, 1), BoolMatrix::ones(1, 5)) == BoolMatrix::ones(4, 5));
  CHECK_THROWS_AS(boolean_product(m, m), DimensionError);

  // U V = C_4 with U, V from the 2-subset labelling of rows and columns
  const auto u = BoolMatrix::from_rows({"1100", "1010", "0110", "1001"});
  const auto v = transpose(BoolMatrix::from_rows({"0011", "0101", "1001", "0110"}));
  const auto uv = boolean_product(u, v);
  const auto du = oracle::dense(u), dv = oracle::dense(v);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      int e = 0;
      for (std::size_t t = 0; t < 4; ++t) e |= du[i][t] & dv[t][j];
      CHECK(uv.at(i, j) == static_cast<bool>(e));
    }
  CHECK(uv == oracle::matrix(oracle::crown(4)));
}

TEST_CASE("kronecker") {
  const auto c2 = BoolMatrix::from_rows({"01", "10"});
  const auto p = kronecker(c2, c2);
  CHECK(p.count_ones() == 4);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) {
      const auto e = EntryIndex4::from_flat(r, c, c2.dims());
      CHECK(p.at(r, c) == (e.iA != e.jA && e.iB != e.jB));
    }
  const auto a = BoolMatrix::from_rows({"101", "110"});
  CHECK(kronecker(a, BoolMatrix::ones(1, 1)) == a);
  CHECK(kronecker(BoolMatrix::zeros(1, 1), a) == BoolMatrix::zeros(2, 3));
  CHECK_THROWS_AS(kronecker(BoolMatrix::ones(100, 100), BoolMatrix::ones(100, 100), 1000), MaterializationLimit);
}

TEST_CASE("kronecker agrees with the four-index definition") {
  std::mt19937_64 rng(5);
  for (std::size_t ra = 1; ra <= 6; ++ra)
    for (std::size_t ca = 1; ca <= 6; ++ca) {
      const auto a = oracle::random_matrix(rng, ra, ca);
      const auto b = oracle::random_matrix(rng, 1 + rng() % 6, 1 + rng() % 6);
      const auto p = kronecker(a, b);
      CHECK(oracle::dense(p) == oracle::kron(oracle::dense(a), oracle::dense(b)));
      for (std::size_t ia = 0; ia < ra; ++ia)
        for (std::size_t ja = 0; ja < ca; ++ja)
          for (std::size_t ib = 0; ib < b.rows(); ++ib)
            for (std::size_t jb = 0; jb < b.cols(); ++jb) {
              const EntryIndex4 e{ia, ja, ib, jb};
              const auto [r, c] = e.flat(b.dims());
              CHECK(EntryIndex4::from_flat(r, c, b.dims()) == e);
              CHECK(p.at(r, c) == (a.at(ia, ja) && b.at(ib, jb)));
            }
    }
}

TEST_CASE("is_rank_one and dominated_by") {
  CHECK(is_rank_one(BoolMatrix::ones(3, 3)));
  CHECK_FALSE(is_rank_one(BoolMatrix::identity(2)));
  CHECK_FALSE(is_rank_one(BoolMatrix::zeros(2, 2)));
  CHECK(is_rank_one(BoolMatrix::from_rows({"0101", "0000", "0101"})));

  CHECK(dominated_by(BoolMatrix::zeros(3, 3), BoolMatrix::identity(3)));
  CHECK(dominated_by(BoolMatrix::identity(3), BoolMatrix::identity(3)));
  CHECK_FALSE(dominated_by(BoolMatrix::identity(3), oracle::matrix(oracle::crown(3))));
  CHECK_THROWS_AS(dominated_by(BoolMatrix::zeros(2, 2), BoolMatrix::zeros(2, 3)), DimensionError);
}

TEST_CASE("project_factors") {
  const Dims a{2, 3}, b{3, 2};
  {
    BoolMatrixBuilder m(6, 6);
    const auto [r, c] = EntryIndex4{1, 2, 0, 1}.flat(b);
    m.set(r, c);
    const auto [ma, mb] = project_factors(std::move(m).build(), a, b);
    CHECK(oracle::dense(ma) == oracle::Dense{{0, 0, 0}, {0, 0, 1}});
    CHECK(oracle::dense(mb) == oracle::Dense{{0, 1}, {0, 0}, {0, 0}});
  }
  {
    // block X x Y inside block (0, 1)
    BoolMatrixBuilder m(6, 6);
    for (std::size_t ib : {0u, 2u})
      for (std::size_t jb : {0u, 1u}) {
        const auto [r, c] = EntryIndex4{0, 1, ib, jb}.flat(b);
        m.set(r, c);
      }
    const auto [ma, mb] = project_factors(std::move(m).build(), a, b);
    CHECK(oracle::dense(ma) == oracle::Dense{{0, 1, 0}, {0, 0, 0}});
    CHECK(oracle::dense(mb) == oracle::Dense{{1, 1}, {0, 0}, {1, 1}});
  }
  CHECK_THROWS_AS(project_factors(BoolMatrix::identity(6), a, b), InvalidArgument);
  CHECK_THROWS_AS(project_factors(BoolMatrix::ones(5, 6), a, b), DimensionError);
}

TEST_CASE("project_factors on every rank-1 submatrix of a product") {
  std::mt19937_64 rng(17);
  auto check_product = [](const BoolMatrix& a, const BoolMatrix& b) {
    const auto p = kronecker(a, b);
    for (const auto& r : oracle::all_rectangles(oracle::dense(p))) {
      BoolMatrixBuilder m(p.rows(), p.cols());
      for (std::size_t i = 0; i < p.rows(); ++i)
        for (std::size_t j = 0; j < p.cols(); ++j)
          if (((r.rows >> i) & 1U) && ((r.cols >> j) & 1U)) m.set(i, j);
      const auto mm = std::move(m).build();
      const auto [ma, mb] = project_factors(mm, a.dims(), b.dims());
      CHECK(is_rank_one(ma));
      CHECK(is_rank_one(mb));
      CHECK(dominated_by(ma, a));
      CHECK(dominated_by(mb, b));
      CHECK(dominated_by(mm, kronecker(ma, mb)));
    }
  };
  const auto c2 = BoolMatrix::from_rows({"01", "10"});
  check_product(c2, c2);
  for (int it = 0; it < 12; ++it)
    check_product(oracle::random_matrix(rng, 1 + rng() % 2, 1 + rng() % 3), oracle::random_matrix(rng, 1 + rng() % 2, 1 + rng() % 3));
}

TEST_CASE("transpose and leading_submatrix") {
  const auto m = BoolMatrix::from_rows({"101", "011"});
  CHECK(transpose(m) == BoolMatrix::from_rows({"10", "01", "11"}));
  CHECK(leading_submatrix(m, 2, 2) == BoolMatrix::from_rows({"10", "01"}));
}

TEST_CASE("matrix text format") {
  const auto m = BoolMatrix::from_rows({"101", "011"});
  CHECK(to_text(m) == "2 3\n101\n011\n");
  CHECK(parse_matrix(to_text(m)) == m);
  CHECK(parse_matrix("0 0\n") == BoolMatrix::zeros(0, 0));
  CHECK_THROWS_AS(parse_matrix("2 3\n101\n01\n"), ParseError);
  CHECK_THROWS_AS(parse_matrix("2 3\n101 \n011\n"), ParseError);
  CHECK_THROWS_AS(parse_matrix("2 3\n102\n011\n"), ParseError);
  CHECK_THROWS_AS(parse_matrix("2 3\n101\n"), ParseError);
  CHECK_THROWS_AS(parse_matrix("2 3\n101\r\n011\n"), ParseError);
  try {
    parse_matrix("2 3\n101\n0x1\n");
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 2);
  }
  std::mt19937_64 rng(3);
  for (int it = 0; it < 20; ++it) {
    const auto r = oracle::random_matrix(rng, rng() % 9, 1 + rng() % 130);
    CHECK(parse_matrix(to_text(r)) == r);
  }
}
