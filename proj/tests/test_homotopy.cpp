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

BimodPtr ground_space(int dim0, int dim1 = 0) {
  GradedSpace s{Field{}, {}};
  for (int i = 0; i < dim0; ++i) s.basis.push_back({"a" + std::to_string(i), 0});
  for (int i = 0; i < dim1; ++i) s.basis.push_back({"b" + std::to_string(i), 1});
  return dg_space(s, Matrix(dim0 + dim1, dim0 + dim1));
}

std::map<int, int> total_cohomology(const TwistedComplex& x) {
  auto m = cohomology_dims(underlying_complex(*x.total()));
  std::erase_if(m, [](const auto& kv) { return kv.second == 0; });
  return m;
}

}  // namespace

TEST_CASE("cohomology") {
  ChainComplex zero{Field{}, {{0, 2}, {1, 3}}, {}};
  CHECK(cohomology(zero, 0).dim == 2);
  CHECK(cohomology(zero, 1).dim == 3);
  CHECK(cohomology(zero, 5).dim == 0);
  // k -> k -> k with both maps 1: d^2 != 0
  ChainComplex bad{Field{}, {{0, 1}, {1, 1}, {2, 1}},
                   {{0, Matrix::from_rows({{1}})}, {1, Matrix::from_rows({{1}})}}};
  CHECK_THROWS_AS(cohomology(bad, 1), StructuralError);
  // k^2 -> k, (1 1): H^0 = 1 with representative (-1, 1) after reduction
  ChainComplex c{Field{}, {{0, 2}, {1, 1}}, {{0, Matrix::from_rows({{1, 1}})}}};
  auto h = cohomology(c, 0);
  CHECK(h.dim == 1);
  CHECK(cohomology(c, 1).dim == 0);

  auto D = acyclic_d();
  auto rd = regular_bimodule(D);
  HomComplex end(rd, rd);
  for (const auto& [n, d] : cohomology_dims(end.complex())) CHECK(d == 0);
  CHECK(cohomology_dims(underlying_complex(*rd)).at(0) == 0);

  auto t1 = ks_generator(zz(2), 1);
  auto e = twisted_hom_complex(t1, t1);
  CHECK(cohomology(e->complex(), 0).dim >= 1);
}

TEST_CASE("null homotopies") {
  const auto& c = zz(2);
  auto Z = single(c.amb, c.identity());
  auto h0 = null_homotopy_witness(zero_morphism(Z, Z));
  REQUIRE(h0);
  CHECK(h0->mat.is_zero());
  CHECK_FALSE(null_homotopy_witness(identity(Z)));
  auto t1 = ks_generator(c, 1);
  auto ci = cone(identity(t1)).object;
  auto h = null_homotopy_witness(identity(ci));
  REQUIRE(h);
  CHECK(differential(*h).mat == identity(ci).mat);
  // hom(cone(id), anything) is acyclic
  auto hc = twisted_hom_complex(ci, t1);
  for (const auto& [n, d] : cohomology_dims(hc->complex())) CHECK(d == 0);
  // a map that is not closed
  TwistedMorphism nc{Z, ci, 0, Matrix(ci.total()->dim(), 6)};
  nc.mat.set_block(0, 0, c.mult[0].mat.transpose().block(0, 0, 6, 6));
  if (!differential(nc).mat.is_zero()) CHECK_THROWS_AS(null_homotopy_witness(nc), StructuralError);
}

TEST_CASE("acyclic objects") {
  auto D = acyclic_d();
  auto zero = zero_bimodule(D, D);
  CHECK(is_acyclic_object(zero).acyclic);
  auto rd = regular_bimodule(D);
  auto a = is_acyclic_object(rd);
  CHECK(a.acyclic);
  REQUIRE(a.witness);
  CHECK(hom_diff(*a.witness).mat == Matrix::identity(2));
  // left multiplication by x is a contraction
  int x = D->space().index_of("x");
  BimoduleMap lx{rd, rd, -1, D->left_mult(x)};
  CHECK(check_bimodule_map(lx).passed);
  CHECK(hom_diff(lx).mat == Matrix::identity(2));
  CHECK_FALSE(is_acyclic_object(ground_space(1)).acyclic);
  CHECK(is_acyclic_object(regular_left(D)).acyclic);
}

TEST_CASE("quasi-isomorphisms") {
  auto k = ground_space(1);
  CHECK(is_quasi_isomorphism(identity_map(k)));
  auto D = acyclic_d();
  GradedSpace dspace = D->space();
  auto dd = dg_space(dspace, D->diff());
  auto zero = ground_space(0);
  CHECK(is_quasi_isomorphism(zero_map(zero, dd)));
  CHECK_FALSE(is_quasi_isomorphism(zero_map(zero, k)));
  CHECK_FALSE(is_quasi_isomorphism(zero_map(k, k)));
  CHECK_THROWS_AS(is_quasi_isomorphism(BimoduleMap{dd, dd, 0, Matrix::from_rows({{0, 1}, {0, 0}})}), StructuralError);
  ChainMap cm{ChainComplex{Field{}, {{0, 1}}, {}}, ChainComplex{Field{}, {{0, 1}}, {}}, {{0, Matrix::from_rows({{2}})}}};
  CHECK(is_quasi_isomorphism(cm));
}

TEST_CASE("certificates") {
  auto t1 = ks_generator(zz(2), 1);
  auto id = identity_certificate(t1);
  CHECK(verify_certificate(id).passed);
  auto bad = id;
  bad.g.mat.at(0, 0) = 5;
  auto rep = verify_certificate(bad);
  CHECK_FALSE(rep.passed);
  CHECK(rep.has("source_homotopy"));
  auto r = gaussian_reduce(cone(identity(t1)).object);
  CHECK(verify_certificate(invert(r.certificate)).passed);
  CHECK(verify_certificate(compose_certificates(r.certificate, invert(r.certificate))).passed);
}

TEST_CASE("gaussian_reduce") {
  const auto& c = zz(2);
  auto t1 = ks_generator(c, 1);
  auto r0 = gaussian_reduce(cone(identity(t1)).object);
  CHECK(r0.minimal.size() == 0);
  CHECK(verify_certificate(r0.certificate).passed);

  auto Z = single(c.amb, c.identity());
  auto P = single(c.amb, c.atom(1));
  auto plain = direct_sum(Z, shift_twisted(P, 2));
  auto r1 = gaussian_reduce(plain);
  CHECK(r1.minimal == plain);
  CHECK(r1.certificate.f.mat == identity(plain).mat);

  auto r2 = gaussian_reduce(t1);
  CHECK(r2.minimal == t1);

  auto rii = gaussian_reduce(ks(2, "1 -1"));
  CHECK(rii.minimal == Z);
  CHECK(verify_certificate(rii.certificate).passed);
  auto again = gaussian_reduce(rii.minimal);
  CHECK(again.minimal == rii.minimal);
  CHECK(verify_certificate(gaussian_reduce(ks(2, "-1 1")).certificate).passed);
}

TEST_CASE("cohomology is invariant under reduction") {
  for (const char* w : {"1", "1 1", "1 -1", "1 2", "-2 1 2", "1 2 1"}) {
    CAPTURE(w);
    auto x = ks(2, w);
    auto r = gaussian_reduce(x);
    CHECK(verify_certificate(r.certificate).passed);
    CHECK(total_cohomology(x) == total_cohomology(r.minimal));
  }
}

TEST_CASE("homotopy_equivalent") {
  const auto& c = zz(2);
  auto Z = single(c.amb, c.identity());
  auto t1 = ks_generator(c, 1);
  auto self = homotopy_equivalent(t1, t1);
  CHECK(self.kind == Verdict::Equivalent);
  auto v = homotopy_equivalent(ks(2, "1 -1"), Z);
  CHECK(v.kind == Verdict::Equivalent);
  REQUIRE(v.certificate);
  CHECK(verify_certificate(*v.certificate).passed);
  auto w = homotopy_equivalent(Z, ks(2, "-1 1"));
  CHECK(w.kind == Verdict::Equivalent);
  // transitivity through Z
  REQUIRE(w.certificate);
  CHECK(verify_certificate(compose_certificates(*v.certificate, *w.certificate)).passed);

  auto braid = homotopy_equivalent(ks(2, "1 2 1"), ks(2, "2 1 2"));
  CHECK(braid.kind == Verdict::Equivalent);
  REQUIRE(braid.certificate);
  CHECK(verify_certificate(*braid.certificate).passed);

  auto no = homotopy_equivalent(Z, zero_complex(c.amb));
  CHECK(no.kind == Verdict::NotEquivalent);
  CHECK(no.reason.find("degree") != std::string::npos);
  auto no2 = homotopy_equivalent(t1, Z);
  CHECK(no2.kind != Verdict::Equivalent);
}
