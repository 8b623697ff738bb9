#include <random>

#include "doctest.h"
#include "dgcat/linalg.hpp"

using namespace dgcat;

namespace {

Matrix random_matrix(std::mt19937& rng, int r, int c, const Field& f, int lo = -2, int hi = 2) {
  std::uniform_int_distribution<int> d(lo, hi);
  Matrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m.at(i, j) = f.make(d(rng));
  return m;
}

}  // namespace

TEST_CASE("scalars over Q and F_p") {
  Field q;
  CHECK(q.parse("3/6") == q.parse("1/2"));
  CHECK((q.parse("1/2") + q.parse("1/3")).str() == "5/6");
  Field f5 = Field::prime(5);
  CHECK(f5.make(7) == f5.make(2));
  CHECK(f5.make(2).inverse() == f5.make(3));
  CHECK(f5.parse("1/2") == f5.make(3));
  CHECK((f5.make(4) + Scalar(3)) == f5.make(2));
  CHECK_THROWS_AS(Field::prime(6), std::invalid_argument);
  CHECK_THROWS(q.zero().inverse());
}

TEST_CASE("rref_rank_kernel examples") {
  auto z = rref_rank_kernel(Matrix(2, 2));
  CHECK(z.rank == 0);
  CHECK(z.kernel_basis.size() == 2);
  auto id = rref_rank_kernel(Matrix::identity(3));
  CHECK(id.rank == 3);
  CHECK(id.kernel_basis.empty());
  auto r = rref_rank_kernel(Matrix::from_rows({{1, 2}, {2, 4}}));
  CHECK(r.rank == 1);
  REQUIRE(r.kernel_basis.size() == 1);
  CHECK(r.kernel_basis[0] == Vec{Scalar(-2), Scalar(1)});
}

TEST_CASE("solve_linear examples") {
  Vec b{Scalar(3), Scalar(4)};
  CHECK(*solve_linear(Matrix::identity(2), b) == b);
  CHECK_FALSE(solve_linear(Matrix(2, 2), b).has_value());
  auto x = solve_linear(Matrix::from_rows({{1, 1}, {0, 2}}), b);
  REQUIRE(x.has_value());
  CHECK(*x == Vec{Scalar(1), Scalar(2)});
  CHECK_THROWS_AS(solve_linear(Matrix::identity(3), b), StructuralError);
}

TEST_CASE("linear algebra properties on random matrices") {
  std::mt19937 rng(7);
  for (Field f : {Field::rationals(), Field::prime(3), Field::prime(101)}) {
    for (int t = 0; t < 60; ++t) {
      int r = 1 + static_cast<int>(rng() % 5), c = 1 + static_cast<int>(rng() % 5);
      Matrix m = random_matrix(rng, r, c, f);
      auto res = rref_rank_kernel(m);
      CHECK(res.rank == rank(m.transpose()));
      CHECK(res.rank + static_cast<int>(res.kernel_basis.size()) == c);
      for (const auto& k : res.kernel_basis) CHECK(to_sparse(m.apply(k)).empty());
      CHECK(rref_rank_kernel(res.rref).rref == res.rref);
      Vec b = random_matrix(rng, r, 1, f).column(0);
      auto x = solve_linear(m, b);
      Matrix aug = hstack(m, Matrix::from_columns({b}, r));
      CHECK(x.has_value() == (rank(aug) == res.rank));
      if (x) CHECK(m.apply(*x) == b);
    }
  }
}

TEST_CASE("inverse and RowEchelon determinism") {
  Matrix m = Matrix::from_rows({{2, 1}, {1, 1}});
  auto inv = inverse(m);
  REQUIRE(inv.has_value());
  CHECK(m * *inv == Matrix::identity(2));
  CHECK_FALSE(inverse(Matrix::from_rows({{1, 2}, {2, 4}})).has_value());
  RowEchelon a(3), b(3);
  a.add(Vec{Scalar(1), Scalar(1), Scalar(0)});
  a.add(Vec{Scalar(0), Scalar(1), Scalar(1)});
  b.add(Vec{Scalar(1), Scalar(2), Scalar(1)});
  b.add(Vec{Scalar(1), Scalar(0), Scalar(-1)});
  CHECK(a.rows() == b.rows());
  CHECK(a.free_columns() == std::vector<int>{2});
}
