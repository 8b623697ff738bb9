#include <random>

#include "doctest.h"
#include "dgcat/zoo.hpp"

using namespace dgcat;

namespace {

const ZigzagCategory& z2() {
  static auto c = zigzag_category(2);
  return *c;
}

AmbPtr d_ambient() {
  static AmbPtr amb = [] {
    auto D = acyclic_d();
    auto a = Ambient::make(D, {tensor_over_k(regular_left(D), regular_right(D))}, {"DD"});
    a->set_basics({Gen{}});
    return AmbPtr(a);
  }();
  return amb;
}

bool verifies(const TwistedMorphism& h, const TwistedMorphism& target) {
  return differential(h).mat == target.mat;
}

}  // namespace

TEST_CASE("mc_check") {
  const auto& c = z2();
  auto Z = single(c.amb, c.identity());
  CHECK(mc_check(Z).passed);
  auto t1 = ks_generator(c, 1);
  CHECK(t1.size() == 2);
  CHECK(mc_check(t1).passed);
  CHECK(check_dg_bimodule(*t1.total()).passed);
  // a twist that is not closed breaks Maurer-Cartan
  auto P = single(c.amb, c.atom(1));
  auto two = direct_sum(Z, shift_twisted(P, 1));
  auto bad_alpha = two.alpha();
  Matrix m = c.mult[0].mat;
  bad_alpha[{0, 1}] = m;
  auto three = TwistedComplex(c.amb, {{c.identity(), 0}, {c.atom(1), 1}, {c.identity(), 2}},
                              {{{0, 1}, m}, {{1, 2}, c.coev[0].mat}});
  auto rep = mc_check(three);
  CHECK_FALSE(rep.passed);
  CHECK(rep.has("maurer_cartan"));
  auto lower = TwistedComplex(c.amb, {{c.identity(), 0}, {c.atom(1), 1}}, {{{1, 0}, c.coev[0].mat}});
  CHECK(mc_check(lower).has("upper_triangular"));
}

TEST_CASE("direct_sum is strict") {
  const auto& c = z2();
  auto x = ks_generator(c, 1), y = ks_generator(c, -2), z = ks_generator(c, 2);
  auto zero = zero_complex(c.amb);
  CHECK(direct_sum(x, zero) == x);
  CHECK(direct_sum(zero, x) == x);
  CHECK(direct_sum(direct_sum(x, y), z) == direct_sum(x, direct_sum(y, z)));
  CHECK(mc_check(direct_sum(x, y)).passed);
}

TEST_CASE("shift_twisted") {
  const auto& c = z2();
  auto x = ks_generator(c, 1);
  CHECK(shift_twisted(x, 0) == x);
  CHECK(shift_twisted(shift_twisted(x, 1), -1) == x);
  CHECK(mc_check(shift_twisted(x, 3)).passed);
  // shift of a cone and cone of the shifted map agree up to the sign on the source block
  auto P = single(c.amb, c.atom(1));
  auto Z = single(c.amb, c.identity());
  TwistedMorphism f{P, Z, 0, c.mult[0].mat};
  auto a = shift_twisted(cone(f).object, 1);
  auto b = cone(shift_morphism(f, 1)).object;
  CHECK(a.summands() == b.summands());
  CHECK(a.component(0, 1) == Scalar(-1) * b.component(0, 1));
  std::map<std::pair<int, int>, Matrix> iso{{{0, 0}, Matrix::identity(a.block_dim(0))},
                                            {{1, 1}, Scalar(-1) * Matrix::identity(a.block_dim(1))}};
  auto phi = from_blocks(a, b, 0, iso);
  CHECK(differential(phi).mat.is_zero());
}

TEST_CASE("cone structure maps") {
  const auto& c = z2();
  auto P = single(c.amb, c.atom(1));
  auto Z = single(c.amb, c.identity());
  TwistedMorphism f{P, Z, 0, c.mult[0].mat};
  auto cf = cone(f);
  CHECK(mc_check(cf.object).passed);
  CHECK(verifies(cf.in_homotopy, compose(cf.in, f)));
  CHECK(verifies(cf.out_homotopy, compose(f, cf.out)));
  CHECK(differential(cf.in).mat.is_zero());
  CHECK(differential(cf.out).mat.is_zero());
  // cone(0) = y (+) x<1>
  auto c0 = cone(zero_morphism(P, Z));
  CHECK(c0.object == direct_sum(Z, shift_twisted(P, 1)));
  TwistedMorphism notclosed{Z, Z, 0, Matrix::identity(6)};
  notclosed.mat.at(0, 0) = 2;
  CHECK_NOTHROW(cone(notclosed));
  TwistedMorphism deg1 = zero_morphism(Z, Z, 1);
  CHECK_THROWS_AS(cone(deg1), StructuralError);
}

TEST_CASE("cone of identity is contractible") {
  const auto& c = z2();
  auto t = ks_generator(c, 1);
  auto ci = cone(identity(t));
  int ny = t.size();
  std::map<std::pair<int, int>, Matrix> h;
  for (int n = 0; n < ny; ++n) h[{ny + n, n}] = Matrix::identity(t.block_dim(n));
  auto hh = from_blocks(ci.object, ci.object, -1, h);
  CHECK(differential(hh).mat == (Scalar(-1) * identity(ci.object)).mat);
}

TEST_CASE("composition of twisted complexes") {
  const auto& c = z2();
  auto Z = single(c.amb, c.identity());
  auto t1 = ks_generator(c, 1), t2 = ks_generator(c, 2), t1i = ks_generator(c, -1);
  CHECK(compose(Z, t1) == t1);
  CHECK(compose(t1, Z) == t1);
  auto tt = compose(t1, t1);
  CHECK(tt.size() == 4);
  CHECK(mc_check(tt).passed);
  CHECK(compose(compose(t1, t2), t1) == compose(t1, compose(t2, t1)));
  CHECK(compose(compose(t1i, t2), t1) == compose(t1i, compose(t2, t1)));
  CHECK(mc_check(compose(t1, t1i)).passed);
  CHECK(mc_check(compose(compose(t1, t2), t1)).passed);
  // distributes over direct sums
  CHECK(compose(direct_sum(t1, t2), t1i) == direct_sum(compose(t1, t1i), compose(t2, t1i)));
}

TEST_CASE("horizontal composition of morphisms") {
  const auto& c = z2();
  auto t1 = ks_generator(c, 1), t2 = ks_generator(c, -2);
  auto idc = hcompose(identity(t1), identity(t2));
  CHECK(idc.mat == identity(compose(t1, t2)).mat);
  std::mt19937 rng(5);
  auto h1 = twisted_hom_complex(t1, t1);
  auto h2 = twisted_hom_complex(t2, t2);
  for (int trial = 0; trial < 6; ++trial) {
    int p = static_cast<int>(rng() % 3) - 1, q = static_cast<int>(rng() % 3) - 1;
    if (!h1->dim(p) || !h2->dim(q)) continue;
    TwistedMorphism f{t1, t1, p, h1->basis(p)[rng() % h1->dim(p)]};
    TwistedMorphism g{t2, t2, q, h2->basis(q)[rng() % h2->dim(q)]};
    auto fg = hcompose(f, g);
    CHECK(check_twisted_morphism(fg).passed);
    auto lhs = differential(fg);
    auto rhs = hcompose(differential(f), g).mat + Scalar(p % 2 ? -1 : 1) * hcompose(f, differential(g)).mat;
    CHECK(lhs.mat == rhs);
  }
}

TEST_CASE("twisted hom complex") {
  const auto& c = z2();
  auto t1 = ks_generator(c, 1);
  auto h = twisted_hom_complex(t1, t1);
  auto id = identity(t1).mat;
  CHECK(h->from_coords(0, h->coords(0, id)) == id);
  for (int d = h->min_degree(); d <= h->max_degree(); ++d) CHECK((h->differential(d + 1) * h->differential(d)).is_zero());
  // 1-term complexes: same as the hom complex of the underlying bimodules, shifted
  auto P = c.amb->object(c.atom(1));
  auto Z = c.amb->object(c.identity());
  HomComplex plain(P, Z);
  auto tw = twisted_hom_complex(single(c.amb, c.atom(1), 1), single(c.amb, c.identity(), 0));
  for (int d = -2; d <= 2; ++d) CHECK(tw->dim(d + 1) == plain.dim(d));
  // hom(T1, Z)
  auto tz = twisted_hom_complex(t1, single(c.amb, c.identity()));
  CHECK(tz->dim(0) == 3);
  CHECK(tz->dim(1) == 2);
  CHECK(tz->dim(-1) == 0);
}

TEST_CASE("twisted complexes over the D ambient") {
  auto amb = d_ambient();
  auto one = single(amb, Gen{});
  auto dd = single(amb, Gen{{0}, -1});
  auto h = twisted_hom_complex(dd, one);
  for (const auto& f : h->cycles(0)) {
    TwistedMorphism m{dd, one, 0, f.mat};
    auto cf = cone(m);
    CHECK(mc_check(cf.object).passed);
    CHECK(verifies(cf.in_homotopy, compose(cf.in, m)));
    CHECK(verifies(cf.out_homotopy, compose(m, cf.out)));
  }
  CHECK(mc_check(compose(dd, dd)).passed);
}
