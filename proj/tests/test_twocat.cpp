#include "doctest.h"
#include "dgcat/homotopy.hpp"
#include "dgcat/twocat.hpp"
#include "dgcat/zoo.hpp"

using namespace dgcat;

namespace {

BimodPtr two_term_space(bool acyclic) {
  GradedSpace s{{}, {{"v0", 0}, {"v1", 1}}};
  Matrix d(2, 2);
  if (acyclic) d.at(1, 0) = 1;
  return dg_space(s, d);
}

std::vector<AlgPtr> base_algebras() {
  auto k = DgAlgebra::ground({});
  return {k, dual_numbers(), acyclic_d(), tian_quotient().r, zigzag(2)};
}

BimodPtr free_rank_one(const AlgPtr& a) { return tensor_over_k(regular_left(a), regular_right(a)); }

// Matrix of the composite E_p E_q in [X,X], p = i*n + l.
Vec matrix_unit_product(int n, int p, int q) {
  Vec v(n * n);
  if (p % n == q / n) v[(p / n) * n + q % n] = 1;
  return v;
}

}  // namespace

TEST_CASE("internal hom is a dg bimodule with closed evaluation") {
  for (const auto& a : {acyclic_d(), dual_numbers(), tian_quotient().r}) {
    auto x = regular_left(a);
    auto y = left_ideal(a, a->unit());
    auto h = internal_hom(x, y);
    CHECK(check_dg_bimodule(*h.object).passed);
    CHECK(check_bimodule_map(h.ev).passed);
    CHECK(is_closed(h.ev));
    CHECK(h.object->dim() == x->dim() * y->dim());
  }
}

TEST_CASE("internal hom adjunction matrices are mutually inverse") {
  auto a = acyclic_d();
  auto x = regular_left(a);
  auto h = internal_hom(x, x);
  for (const auto& g : {regular_bimodule(a), free_rank_one(a)}) {
    Quotient gx = tensor_over_algebra(g, x);
    HomComplex left(g, h.object), right(gx.object, x);
    for (int d = left.min_degree(); d <= left.max_degree(); ++d)
      for (const auto& b : left.basis(d)) {
        BimoduleMap gm{g, h.object, d, b};
        BimoduleMap f = h.phi(gm, gx);
        CHECK(check_bimodule_map(f).passed);
        CHECK(h.psi(f, gx, g).mat == b);
        // compatible with the differentials
        CHECK(h.phi(hom_diff(gm), gx).mat == hom_diff(f).mat);
      }
    for (int d = right.min_degree(); d <= right.max_degree(); ++d)
      for (const auto& b : right.basis(d)) {
        BimoduleMap f{gx.object, x, d, b};
        CHECK(h.phi(h.psi(f, gx, g), gx).mat == b);
      }
  }
}

TEST_CASE("internal_hom rejects modules with a nontrivial right action") {
  auto a = dual_numbers();
  CHECK_THROWS_AS(internal_hom(regular_bimodule(a), regular_left(a)), StructuralError);
}

TEST_CASE("internal end algebra of the regular module") {
  for (const auto& a : base_algebras()) {
    CAPTURE(a->dim());
    auto x = regular_left(a);
    InternalEnd e = internal_end_algebra(x);
    AlgebraReport rep = check_algebra_morphism(e.algebra);
    CHECK_MESSAGE(rep.passed, rep.summary());
    int n = x->dim();
    // the multiplication is composition of maps
    for (int p = 0; p < n * n; ++p)
      for (int q = 0; q < n * n; ++q) {
        Vec ep(n * n), eq(n * n);
        ep[p] = 1;
        eq[q] = 1;
        CHECK(e.algebra.multiply(ep, eq) == matrix_unit_product(n, p, q));
      }
    // the unit is the identity map
    Vec id(n * n);
    for (int i = 0; i < n; ++i) id[i * n + i] = 1;
    CHECK(e.algebra.unit == id);
    auto dual_tensor = tensor_over_k(regular_left(a), dual(regular_left(a)));
    CHECK(find_isomorphism(e.algebra.carrier, dual_tensor).has_value());
  }
}

TEST_CASE("internal end algebra over k is the matrix dg algebra") {
  for (bool acyclic : {false, true}) {
    auto v = two_term_space(acyclic);
    InternalEnd e = internal_end_algebra(v);
    auto got = to_dg_algebra(e.algebra);
    auto want = matrix_dg_algebra(v);
    CHECK(check_dg_algebra(*got).passed);
    REQUIRE(got->dim() == want->dim());
    CHECK(got->diff() == want->diff());
    CHECK(got->unit() == want->unit());
    for (int i = 0; i < got->dim(); ++i) {
      CHECK(got->degree(i) == want->degree(i));
      for (int j = 0; j < got->dim(); ++j) CHECK(got->product(i, j) == want->product(i, j));
    }
  }
}

TEST_CASE("[X,Y] is a right module over the internal end algebra") {
  for (const auto& a : {acyclic_d(), tian_quotient().r}) {
    auto x = regular_left(a);
    InternalEnd e = internal_end_algebra(x);
    auto y = left_ideal(a, a->basis_vector(0));
    ModuleOneMorphism m = internal_hom_module(e, internal_hom(x, y));
    AlgebraReport rep = check_module(e.algebra, m);
    CHECK_MESSAGE(rep.passed, rep.summary());
  }
}

TEST_CASE("square-zero extension and its violations") {
  auto t = tian_quotient();
  auto a = square_zero_extension(t.r, shift(t.m, -2));
  CHECK(check_algebra_morphism(a).passed);
  auto broken = a;
  broken.unit[0] = 0;
  AlgebraReport rep = check_algebra_morphism(broken);
  CHECK_FALSE(rep.passed);
  CHECK(rep.has("left_unit"));
}

TEST_CASE("free module adjunction round trips and naturality") {
  auto t = tian_quotient();
  auto alg = square_zero_extension(t.r, shift(t.m, -2));
  std::vector<BimodPtr> gens = {regular_bimodule(t.r), t.m};
  for (const auto& g : gens)
    for (const auto& h : gens) {
      FreeAdjunction adj = free_module_adjunction(alg, g);
      CHECK(check_module(alg, adj.free).passed);
      ModuleOneMorphism y = free_module(alg, h);
      HomComplex plain(g, y.object);
      for (int d = plain.min_degree(); d <= plain.max_degree(); ++d) {
        for (const auto& b : plain.basis(d)) {
          BimoduleMap gm{g, y.object, d, b};
          BimoduleMap f = adj.extend(gm, y);
          CHECK(check_bimodule_map(f).passed);
          CHECK(adj.restrict(f).mat == b);
          for (size_t k = 0; k < y.right_act.size(); ++k)
            CHECK(f.mat * adj.free.right_act[k] == y.right_act[k] * f.mat);
        }
        auto mods = module_maps(adj.free, y, d);
        CHECK(static_cast<int>(mods.size()) == plain.dim(d));
        for (const auto& f : mods) CHECK(adj.extend(adj.restrict(f), y).mat == f.mat);
      }
    }
  // naturality in G along t : G' -> G
  auto g = regular_bimodule(t.r);
  auto gp = t.m;
  FreeAdjunction ag = free_module_adjunction(alg, g), agp = free_module_adjunction(alg, gp);
  ModuleOneMorphism y = free_module(alg, t.m);
  for (int d = -2; d <= 2; ++d)
    for (const auto& tm : bimodule_maps(gp, g, d))
      for (const auto& f : module_maps(ag.free, y, 0)) {
        BimoduleMap tt{gp, g, d, tm};
        BimoduleMap t_id = tensor_maps(tt, identity_map(alg.carrier), *agp.free.free_on, *ag.free.free_on);
        CHECK(agp.restrict(compose(f, t_id)).mat == (ag.restrict(f).mat * tm));
      }
}

TEST_CASE("pushforward along the unit map recovers the free module") {
  auto a = acyclic_d();
  auto x = regular_left(a);
  InternalEnd e = internal_end_algebra(x);
  auto one = identity_algebra(a);
  CHECK(check_algebra_morphism(one).passed);
  BimoduleMap u = e.algebra.unit_map();
  CHECK(check_algebra_map(one, e.algebra, u).passed);
  for (const auto& g : {regular_bimodule(a), free_rank_one(a)}) {
    ModuleOneMorphism m = free_module(one, g);
    ModuleOneMorphism p = pushforward_algebra_map(one, e.algebra, u, m);
    CHECK(check_module(e.algebra, p).passed);
    CHECK(find_isomorphism(p.object, free_module(e.algebra, g).object).has_value());
  }
  // a non-multiplicative map is rejected by the check
  BimoduleMap bad = 2 * u;
  CHECK_FALSE(check_algebra_map(one, e.algebra, bad).passed);
}

TEST_CASE("action commutes with internal hom") {
  auto a = acyclic_d();
  auto x = regular_left(a);
  for (const auto& g : {regular_bimodule(a), free_rank_one(a)}) {
    CommutationIso c = internal_hom_commutation(g, x, x);
    CHECK(check_bimodule_map(c.map).passed);
    CHECK(is_closed(c.map));
    CHECK(c.inverse.has_value());
  }
  auto t = tian_quotient();
  auto px = left_ideal(t.r, t.r->basis_vector(0));
  CommutationIso c = internal_hom_commutation(t.m, regular_left(t.r), px);
  CHECK(check_bimodule_map(c.map).passed);
  CHECK(c.inverse.has_value());
}

TEST_CASE("evaluation on the Tian quotient and on cones") {
  auto t = tian_quotient();
  auto px = left_ideal(t.r, t.r->basis_vector(0));
  auto py = left_ideal(t.r, t.r->basis_vector(1));
  CHECK(find_isomorphism(evaluation(px, t.m), py).has_value());
  // M' M' ~ R'<1>
  auto mm = tensor_over_algebra(t.m, t.m).object;
  CHECK(find_isomorphism(mm, shift(regular_bimodule(t.r), 1)).has_value());

  auto a = acyclic_d();
  auto x = regular_left(a);
  auto f = free_rank_one(a);
  auto one = regular_bimodule(a);
  for (const auto& z : HomComplex(f, one).cycles(0)) {
    if (z.is_zero()) continue;
    auto lhs = evaluation(x, cone_bimodule(z));
    auto rhs = cone_bimodule(evaluation_map(z, x));
    CHECK(check_dg_bimodule(*lhs).passed);
    CHECK(find_isomorphism(lhs, rhs).has_value());
  }
}

TEST_CASE("Morita equivalences between matrix algebras and k") {
  auto k = DgAlgebra::ground({});
  auto kk = regular_left(k);
  CHECK(morita_verify(k, k, regular_bimodule(k), regular_bimodule(k)).equivalent);
  std::vector<BimodPtr> spaces = {dg_space(GradedSpace{{}, {{"v0", 0}, {"v1", 0}}}, Matrix(2, 2)), two_term_space(false),
                                  two_term_space(true)};
  for (size_t idx = 0; idx < spaces.size(); ++idx) {
    bool acyclic = idx == 2;
    auto v = spaces[idx];
    auto e = matrix_dg_algebra(v);
    auto x = matrix_left_module(e, v);
    auto y = dual(x);
    MoritaResult r = morita_verify(e, k, x, y);
    CHECK_MESSAGE(r.equivalent, r.reason);
    if (acyclic)
      for (const auto& [deg, dim] : cohomology_dims(underlying_complex(*regular_bimodule(e)))) CHECK(dim == 0);
  }
  auto dn = dual_numbers();
  MoritaResult r = morita_verify(k, dn, regular_right(dn), regular_left(dn));
  CHECK_FALSE(r.equivalent);
  CHECK(r.reason.find("dimension") != std::string::npos);
}

TEST_CASE("quotient-simplicity probes") {
  auto k = DgAlgebra::ground({});
  IdealProbe pk({identity_algebra(k), {regular_bimodule(k)}});
  CHECK(quotient_simple_probe(pk).kind == ProbeVerdict::NoProperIdealFound);

  // the ideal generated by a contraction h of D is everything
  auto d = acyclic_d();
  IdealProbe pd({identity_algebra(d), {regular_bimodule(d)}});
  Matrix h = d->left_mult(d->space().index_of("x"));
  IdealData ideal = pd.closure({{0, 0, {pd.probe(0).object, pd.probe(0).object, -1, h}}});
  CHECK(ideal.contains_identity(0));
  CHECK(quotient_simple_probe(pd).kind == ProbeVerdict::NoProperIdealFound);

  // the radical of 1_x (+) (e_x M'M' e_x)<-2> generates a proper ideal
  RepData rep = tian_radical_rep();
  CHECK(check_algebra_morphism(rep.alg).passed);
  IdealProbe pt(rep);
  ProbeVerdict v = quotient_simple_probe(pt);
  CHECK_FALSE(v.ideal.partial);
  CHECK(v.kind == ProbeVerdict::ProperIdeal);
  REQUIRE(v.witness.has_value());
  CHECK(v.witness->map.degree != 0);
}

TEST_CASE("module category objects include cones") {
  auto d = acyclic_d();
  auto one = identity_algebra(d);
  auto objs = module_category_objects(one, {regular_bimodule(d), free_rank_one(d)}, 3);
  CHECK(objs.size() > 2);
  for (const auto& m : objs) CHECK(check_module(one, m).passed);
}

TEST_CASE("C_A on a product of factors") {
  auto c = two_category({acyclic_d(), zigzag(2)});
  CHECK(c.objects() == 2);
  CHECK(check_dg_algebra(*c.algebra()).passed);
  for (int i = 0; i < 2; ++i) {
    CHECK(c.identity(i)->dim() == c.factors[i]->dim());
    CHECK(find_isomorphism(evaluation(c.natural_module(i), c.identity(i)), c.natural_module(i)).has_value());
    for (int j = 0; j < 2; ++j) {
      auto f = c.generator(j, i);
      CHECK(check_dg_bimodule(*f).passed);
      CHECK(f->dim() == c.factors[j]->dim() * c.factors[i]->dim());
      // F_{j,i} sends A_i to a sum of copies of A_j and kills A_l, l != i
      for (int l = 0; l < 2; ++l) {
        auto ev = evaluation(c.natural_module(l), f);
        CHECK(ev->dim() == (l == i ? c.factors[j]->dim() * c.factors[i]->dim() : 0));
      }
    }
  }
}

TEST_CASE("small internal homs") {
  auto k = DgAlgebra::ground({});
  auto one = regular_left(k);
  InternalEnd e = internal_end_algebra(one);
  CHECK(e.algebra.carrier->dim() == 1);
  CHECK(e.algebra.unit == Vec{Scalar(1)});
  auto v = two_term_space(true);
  auto h = internal_hom(v, v);
  CHECK(find_isomorphism(h.object, tensor_over_k(v, dual(v))).has_value());
}

TEST_CASE("ideal closure is monotone and idempotent") {
  IdealProbe pt(tian_radical_rep());
  auto basis = pt.basis_morphisms();
  REQUIRE(!basis.empty());
  ProbeMorphism zero = basis.front();
  zero.map.mat = Matrix(zero.map.mat.rows(), zero.map.mat.cols());
  IdealData z = pt.closure({zero});
  for (int s = 0; s < pt.probe_count(); ++s)
    for (int t = 0; t < pt.probe_count(); ++t) CHECK(z.dim(s, t) == 0);
  for (const auto& a : basis) {
    IdealData ia = pt.closure({a});
    // idempotent: closing the generated ideal again adds nothing
    std::vector<ProbeMorphism> gens;
    for (const auto& [key, by_deg] : ia.spans)
      for (const auto& [d, mats] : by_deg)
        for (const auto& m : mats)
          gens.push_back({key.first, key.second, {pt.probe(key.first).object, pt.probe(key.second).object, d, m}});
    IdealData again = pt.closure(gens);
    for (const auto& b : basis) {
      IdealData both = pt.closure({a, b});
      for (int s = 0; s < pt.probe_count(); ++s)
        for (int t = 0; t < pt.probe_count(); ++t) {
          CHECK(again.dim(s, t) == ia.dim(s, t));
          CHECK(both.dim(s, t) >= ia.dim(s, t));
        }
    }
  }
  // the identity of the free module on 1_x generates everything
  int n = pt.probe(0).object->dim();
  IdealData all = pt.closure({{0, 0, {pt.probe(0).object, pt.probe(0).object, 0, Matrix::identity(n)}}});
  for (int p = 0; p < pt.probe_count(); ++p) CHECK(all.contains_identity(p));
}

TEST_CASE("the radical quotient is an algebra epimorphism") {
  auto t = tian_quotient();
  RepData rep = tian_radical_rep();
  const auto& a = rep.alg;
  auto b = square_zero_extension(t.r, zero_bimodule(t.r, t.r), t.r->basis_vector(0));
  CHECK(check_algebra_morphism(b).passed);
  REQUIRE(a.carrier->dim() == 2);
  REQUIRE(b.carrier->dim() == 1);
  Matrix q(1, 2);
  q.at(0, 0) = 1;
  BimoduleMap alpha{a.carrier, b.carrier, 0, q};
  CHECK(check_algebra_map(a, b, alpha).passed);
  CHECK(rank(q) == 1);  // onto, with the radical as kernel
  ModuleOneMorphism pa = pushforward_algebra_map(a, b, alpha, free_module(a, rep.generators[0]));
  CHECK(check_module(b, pa).passed);
  CHECK(find_isomorphism(pa.object, b.carrier).has_value());
  // identity map: pushforward is the identity up to iso, on a free module and on a cone
  BimoduleMap id = identity_map(a.carrier);
  CHECK(check_algebra_map(a, a, id).passed);
  for (const auto& g : rep.generators) {
    ModuleOneMorphism m = free_module(a, g);
    if (m.object->dim() == 0) continue;
    ModuleOneMorphism p = pushforward_algebra_map(a, a, id, m);
    CHECK(find_isomorphism(p.object, m.object).has_value());
  }
}

TEST_CASE("pushforward preserves cones and shifts") {
  auto d = acyclic_d();
  auto one = identity_algebra(d);
  InternalEnd e = internal_end_algebra(regular_left(d));
  BimoduleMap u = e.algebra.unit_map();
  auto f1 = free_module(one, regular_bimodule(d));
  auto f2 = free_module(one, free_rank_one(d));
  int checked = 0;
  for (const auto& f : module_maps(f2, f1, 0)) {
    if (f.is_zero() || !is_closed(f)) continue;
    auto c = cone_module(f2, f1, f.mat);
    CHECK(check_module(one, c).passed);
    auto pc = pushforward_algebra_map(one, e.algebra, u, c);
    CHECK(check_module(e.algebra, pc).passed);
    // cone of the pushed-forward map, computed on free modules over A_X
    auto p1 = free_module(e.algebra, regular_bimodule(d));
    auto p2 = free_module(e.algebra, free_rank_one(d));
    FreeAdjunction adj = free_module_adjunction(e.algebra, free_rank_one(d));
    FreeAdjunction adj1 = free_module_adjunction(one, free_rank_one(d));
    // f restricted to the generator, then extended over A_X
    BimoduleMap g = adj1.restrict(f);
    Quotient gx = tensor_over_algebra(regular_bimodule(d), e.algebra.carrier);
    Quotient ga = tensor_over_algebra(regular_bimodule(d), one.carrier);
    BimoduleMap to_ax = tensor_maps(identity_map(regular_bimodule(d)), u, ga, gx);
    BimoduleMap g2{free_rank_one(d), p1.object, 0, to_ax.mat * g.mat};
    BimoduleMap pf = adj.extend(g2, p1);
    auto c2 = cone_module(adj.free, p1, pf.mat);
    CHECK(find_isomorphism(pc.object, c2.object).has_value());
    ++checked;
  }
  CHECK(checked > 0);
  auto s = pushforward_algebra_map(one, e.algebra, u, {shift(f1.object, 1), f1.right_act, nullptr, std::nullopt});
  CHECK(find_isomorphism(s.object, shift(free_module(e.algebra, regular_bimodule(d)).object, 1)).has_value());
}
