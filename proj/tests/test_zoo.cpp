#include "doctest.h"
#include "dgcat/homotopy.hpp"
#include "dgcat/zoo.hpp"

using namespace dgcat;

namespace {

const ZigzagCategory& zz(int n) {
  static std::map<int, std::shared_ptr<const ZigzagCategory>> cache;
  auto& c = cache[n];
  if (!c) c = zigzag_category(n);
  return *c;
}

TwistedComplex ks(int n, const std::string& w) { return ks_complex(zz(n), parse_braid_word(n, w)); }

BimodPtr space(std::vector<int> degrees, const Matrix& d) {
  GradedSpace s{{}, {}};
  for (size_t i = 0; i < degrees.size(); ++i) s.basis.push_back({"v" + std::to_string(i), degrees[i]});
  return dg_space(s, d);
}

}  // namespace

TEST_CASE("zigzag dimensions") {
  CHECK(zigzag(2)->dim() == 6);
  CHECK(zigzag(3)->dim() == 10);
  CHECK(zigzag(5, Field::prime(3))->dim() == 18);
  CHECK_THROWS(zigzag(1));
  for (int n = 2; n <= 4; ++n) CHECK(check_dg_algebra(*zigzag(n)).passed);
}

TEST_CASE("Tian quotient") {
  auto t = tian_quotient();
  CHECK(t.r->dim() == 2);
  CHECK(t.m->dim() == 2);
  CHECK(check_dg_bimodule(*t.m).passed);
  auto m2 = tensor_over_algebra(t.m, t.m).object;
  CHECK(find_isomorphism(m2, shift(regular_bimodule(t.r), 1)).has_value());
  auto m4 = tensor_over_algebra(m2, m2).object;
  CHECK(find_isomorphism(m4, shift(regular_bimodule(t.r), 2)).has_value());
  CHECK(!find_isomorphism(m4, shift(regular_bimodule(t.r), 1)).has_value());
}

TEST_CASE("matrix dg algebras") {
  auto k1 = matrix_dg_algebra(space({0}, Matrix(1, 1)));
  CHECK(k1->dim() == 1);
  CHECK(k1->is_ground_field());
  auto e = matrix_dg_algebra(space({0, 1}, Matrix(2, 2)));
  CHECK(e->dim() == 4);
  CHECK(check_dg_algebra(*e).passed);
  CHECK(e->diff().is_zero());
  Matrix d(2, 2);
  d.at(1, 0) = 1;
  auto ea = matrix_dg_algebra(space({0, 1}, d));
  CHECK(check_dg_algebra(*ea).passed);
  CHECK(!ea->diff().is_zero());
  // acyclic as a left module over itself
  CHECK(is_acyclic_object(regular_left(ea)).acyclic);
  CHECK(!is_acyclic_object(regular_left(e)).acyclic);
  CHECK_THROWS(matrix_dg_algebra(space({}, Matrix(0, 0))));
}

TEST_CASE("braid words") {
  CHECK(parse_braid_word(3, "1 -2 3").letters == std::vector<int>{1, -2, 3});
  CHECK_THROWS(parse_braid_word(2, "3"));
  CHECK_THROWS(parse_braid_word(2, "0"));
  CHECK_THROWS(parse_braid_word(2, "x"));
  auto empty = ks(2, "");
  CHECK(empty == single(zz(2).amb, zz(2).identity()));
  CHECK(ks(2, "1").size() == 2);
  for (const char* w : {"1", "-1", "1 2", "-2 1"}) CHECK(mc_check(ks(2, w)).passed);
}

TEST_CASE("ks respects concatenation") {
  const auto& c = zz(3);
  std::vector<std::pair<std::string, std::string>> splits = {{"1", "2"}, {"1 -2", "3"}, {"-1", "2 1"}, {"3", ""}};
  for (const auto& [a, b] : splits) {
    CAPTURE(a);
    CAPTURE(b);
    auto whole = ks(3, a + " " + b);
    auto parts = compose(ks(3, a), ks(3, b));
    CHECK(whole == parts);
    CHECK(whole.total()->space().basis.size() == parts.total()->space().basis.size());
  }
  (void)c;
}

TEST_CASE("distant generators commute over Z_4") {
  auto v = homotopy_equivalent(ks(4, "1 3"), ks(4, "3 1"));
  CHECK(v.kind == Verdict::Equivalent);
  REQUIRE(v.certificate);
  CHECK(verify_certificate(*v.certificate).passed);
}

TEST_CASE("inverse letters over Z_3") {
  auto Z = single(zz(3).amb, zz(3).identity());
  for (int i = 1; i <= 3; ++i) {
    CAPTURE(i);
    for (const auto& w : {std::to_string(i) + " -" + std::to_string(i), "-" + std::to_string(i) + " " + std::to_string(i)}) {
      auto v = homotopy_equivalent(ks(3, w), Z);
      CHECK(v.kind == Verdict::Equivalent);
      REQUIRE(v.certificate);
      CHECK(verify_certificate(*v.certificate).passed);
    }
  }
}

TEST_CASE("matrix algebras are Morita equivalent to k") {
  auto k = DgAlgebra::ground({});
  Matrix d(3, 3);
  d.at(1, 0) = 1;
  for (const auto& v : {space({0}, Matrix(1, 1)), space({0, 0}, Matrix(2, 2)), space({0, 1, 1}, d)}) {
    auto e = matrix_dg_algebra(v);
    auto x = matrix_left_module(e, v);
    CHECK(check_dg_bimodule(*x).passed);
    auto r = morita_verify(e, k, x, dual(x));
    CHECK(r.equivalent);
    CHECK(r.xy.has_value());
    CHECK(r.yx.has_value());
  }
}
