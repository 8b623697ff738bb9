#include <random>

#include "doctest.h"
#include "dgcat/zoo.hpp"

using namespace dgcat;

namespace {

Vec unit_vec(const AlgPtr& a, int i) { return a->basis_vector(i); }

// multiplication Ze_i (x)_k e_iZ -> Z, read off from the labels of the ideals
BimoduleMap mult_map(const AlgPtr& z, int i) {
  Vec e = unit_vec(z, zigzag_idempotent(z, i));
  auto l = left_ideal(z, e), r = right_ideal(z, e);
  auto t = tensor_over_k(l, r);
  auto zz = regular_bimodule(z);
  Matrix m(z->dim(), t->dim());
  for (int x = 0; x < l->dim(); ++x)
    for (int y = 0; y < r->dim(); ++y) {
      Vec p = z->multiply(unit_vec(z, z->space().index_of(l->label(x))), unit_vec(z, z->space().index_of(r->label(y))));
      for (int k = 0; k < z->dim(); ++k) m.at(k, x * r->dim() + y) = p[k];
    }
  return {t, zz, 0, m};
}

BimodPtr random_space(std::mt19937& rng) {
  std::uniform_int_distribution<int> deg(-1, 1), dim(1, 3);
  GradedSpace s{Field{}, {}};
  int n = dim(rng);
  for (int i = 0; i < n; ++i) s.basis.push_back({"v" + std::to_string(i), deg(rng)});
  return dg_space(s, Matrix(n, n));
}

}  // namespace

TEST_CASE("check_dg_bimodule examples") {
  auto z = zigzag(2);
  CHECK(check_dg_bimodule(*regular_bimodule(z)).passed);
  CHECK(check_dg_bimodule(*regular_bimodule(acyclic_d())).passed);
  Vec e1 = unit_vec(z, zigzag_idempotent(z, 1));
  auto t = tensor_over_k(left_ideal(z, e1), right_ideal(z, e1));
  CHECK(t->dim() == 9);
  CHECK(check_dg_bimodule(*t).passed);

  auto d = dual_numbers();
  auto reg = regular_bimodule(d);
  auto bad_l = reg->left_actions();
  bad_l[1].at(0, 0) = 1;  // x . 1 gains a 1-component
  auto bad = DgBimodule::make(d, d, reg->space(), bad_l, reg->right_actions(), reg->diff());
  auto rep = check_dg_bimodule(*bad);
  CHECK_FALSE(rep.passed);
  CHECK(rep.has("left_associativity"));
}

TEST_CASE("hom_complex examples") {
  auto k = DgAlgebra::ground(Field{});
  HomComplex kk(regular_bimodule(k), regular_bimodule(k));
  CHECK(kk.dim(0) == 1);
  CHECK(kk.min_degree() == 0);
  CHECK(kk.max_degree() == 0);

  auto D = acyclic_d();
  auto reg = regular_bimodule(D);
  HomComplex dd(reg, reg);
  auto id = Matrix::identity(2);
  CHECK(dd.from_coords(0, dd.coords(0, id)) == id);
  for (int deg = dd.min_degree(); deg <= dd.max_degree(); ++deg)
    CHECK((dd.differential(deg + 1) * dd.differential(deg)).is_zero());

  auto tq = tian_quotient();
  auto py = left_ideal(tq.r, unit_vec(tq.r, 1));
  auto px = left_ideal(tq.r, unit_vec(tq.r, 0));
  HomComplex yx(py, px);
  for (int deg = -2; deg <= 2; ++deg) CHECK(yx.dim(deg) == 0);
  CHECK_THROWS_AS(HomComplex(reg, regular_bimodule(k)), StructuralError);
}

TEST_CASE("hom composition is a chain map") {
  auto z = zigzag(2);
  auto D = acyclic_d();
  std::mt19937 rng(3);
  for (auto a : {regular_bimodule(D), regular_left(D), regular_bimodule(z)}) {
    HomComplex h(a, a);
    for (int t = 0; t < 10; ++t) {
      int p = h.min_degree() + static_cast<int>(rng() % (h.max_degree() - h.min_degree() + 1));
      int q = h.min_degree() + static_cast<int>(rng() % (h.max_degree() - h.min_degree() + 1));
      if (!h.dim(p) || !h.dim(q)) continue;
      BimoduleMap f{a, a, p, h.basis(p)[rng() % h.dim(p)]};
      BimoduleMap g{a, a, q, h.basis(q)[rng() % h.dim(q)]};
      CHECK(check_bimodule_map(f).passed);
      auto lhs = hom_diff(compose(g, f));
      auto rhs = compose(hom_diff(g), f).mat + Scalar(q % 2 ? -1 : 1) * compose(g, hom_diff(f)).mat;
      CHECK(lhs.mat == rhs);
      CHECK(check_bimodule_map(hom_diff(f)).passed);
    }
  }
}

TEST_CASE("tensor_over_k") {
  auto k = DgAlgebra::ground(Field{});
  auto D = acyclic_d();
  auto m = regular_bimodule(D);
  auto km = tensor_over_k(regular_bimodule(k), m);
  CHECK(find_isomorphism(km, m).has_value());
  auto dd = tensor_over_k(m, m);
  CHECK(dd->dim() == 4);
  CHECK(check_dg_bimodule(*dd).passed);
}

TEST_CASE("tensor_over_algebra") {
  auto z = zigzag(2);
  auto reg = regular_bimodule(z);
  Vec e1 = unit_vec(z, zigzag_idempotent(z, 1));
  Vec e2 = unit_vec(z, zigzag_idempotent(z, 2));
  auto p1 = tensor_over_k(left_ideal(z, e1), right_ideal(z, e1));
  auto q = tensor_over_algebra(reg, p1);
  CHECK(check_dg_bimodule(*q.object).passed);
  CHECK(find_isomorphism(q.object, p1).has_value());

  auto p2 = tensor_over_k(left_ideal(z, e2), right_ideal(z, e2));
  auto x = tensor_over_algebra(tensor_over_algebra(p1, p2).object, p1).object;
  auto y = tensor_over_algebra(p1, tensor_over_algebra(p2, p1).object).object;
  CHECK(x->dim() == 9);
  CHECK(find_isomorphism(x, y).has_value());
  CHECK(check_dg_bimodule(*x).passed);
  CHECK_THROWS_AS(tensor_over_algebra(p1, regular_bimodule(acyclic_d())), StructuralError);
}

TEST_CASE("dual") {
  auto k = DgAlgebra::ground(Field{});
  CHECK(dual(regular_bimodule(k))->dim() == 1);
  auto D = acyclic_d();
  auto dd = dual(regular_bimodule(D));
  CHECK(dd->space().degrees() == std::vector<int>{0, 1});
  CHECK(check_dg_bimodule(*dd).passed);
  auto z = zigzag(2);
  Vec e1 = unit_vec(z, zigzag_idempotent(z, 1));
  for (auto m : {regular_bimodule(D), left_ideal(z, e1), regular_left(D), tensor_over_k(regular_left(D), regular_right(D))}) {
    auto mm = dual(dual(m));
    CHECK(check_dg_bimodule(*dual(m)).passed);
    CHECK(find_isomorphism(m, mm).has_value());
  }
}

TEST_CASE("hom over k matches n (x) m* per degree") {
  std::mt19937 rng(11);
  for (int t = 0; t < 20; ++t) {
    auto m = random_space(rng), n = random_space(rng);
    HomComplex h(m, n);
    auto nm = tensor_over_k(n, dual(m));
    std::map<int, int> dims;
    for (const auto& b : nm->space().basis) ++dims[b.degree];
    for (int d = -3; d <= 3; ++d) CHECK(h.dim(d) == dims[d]);
  }
}

TEST_CASE("shift") {
  auto D = acyclic_d();
  auto m = regular_bimodule(D);
  for (int k : {-2, -1, 1, 3}) {
    auto s = shift(m, k);
    CHECK(check_dg_bimodule(*s).passed);
    CHECK(s->degree(0) == -k);
    CHECK(find_isomorphism(shift(s, -k), m).has_value());
  }
}

TEST_CASE("cokernel") {
  auto z = zigzag(2);
  auto reg = regular_bimodule(z);
  auto zero = zero_bimodule(z, z);
  auto c0 = cokernel(zero_map(zero, reg));
  CHECK(c0.object->dim() == 6);
  auto cid = cokernel(identity_map(reg));
  CHECK(cid.object->dim() == 0);
  auto mult = mult_map(z, 1);
  CHECK(check_bimodule_map(mult).passed);
  auto cm = cokernel(mult);
  CHECK(cm.object->dim() == 6 - rank(mult.mat));
  CHECK(cm.object->dim() == 1);
  CHECK(check_dg_bimodule(*cm.object).passed);
  // universal property on maps killing the image
  HomComplex h(reg, reg);
  for (const auto& g : h.cycles(0)) {
    if (!(g.mat * mult.mat).is_zero()) continue;
    auto u = cm.factor(g);
    REQUIRE(u.has_value());
    CHECK(compose(*u, cm.proj).mat == g.mat);
    CHECK(solve_matrix(cm.proj.mat.transpose(), g.mat.transpose()).has_value());
  }
  BimoduleMap notclosed{regular_bimodule(acyclic_d()), regular_bimodule(acyclic_d()), 0, Matrix::identity(2)};
  notclosed.mat.at(1, 1) = 0;
  CHECK_THROWS_AS(cokernel(notclosed), StructuralError);
}

TEST_CASE("split_idempotent") {
  auto k = DgAlgebra::ground(Field{});
  GradedSpace s{Field{}, {{"a", 0}, {"b", 0}}};
  auto v = dg_space(s, Matrix(2, 2));
  auto sp = split_idempotent(identity_map(v));
  CHECK(sp.object->dim() == 2);
  CHECK(split_idempotent(zero_map(v, v)).object->dim() == 0);
  BimoduleMap e{v, v, 0, Matrix::from_rows({{1, 0}, {0, 0}})};
  auto one = split_idempotent(e);
  CHECK(one.object->dim() == 1);
  CHECK(compose(one.projection, one.inclusion).mat == Matrix::identity(1));
  CHECK(compose(one.inclusion, one.projection).mat == e.mat);
  BimoduleMap notidem{v, v, 0, Matrix::from_rows({{2, 0}, {0, 0}})};
  CHECK_THROWS_AS(split_idempotent(notidem), StructuralError);
}

TEST_CASE("direct_sum") {
  auto D = acyclic_d();
  auto m = regular_bimodule(D);
  auto s = direct_sum({m, m});
  CHECK(s.object->dim() == 4);
  CHECK(s.offsets == std::vector<int>{0, 2});
  CHECK(check_dg_bimodule(*s.object).passed);
}
