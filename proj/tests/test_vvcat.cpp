#include <random>

#include "doctest.h"
#include "dgcat/homotopy.hpp"
#include "dgcat/vvcat.hpp"
#include "dgcat/zoo.hpp"

using namespace dgcat;

namespace {

AmbPtr cd() {
  static AmbPtr a = algebra_category(acyclic_d());
  return a;
}

TwistedComplex random_complex(const AmbPtr& amb, std::mt19937& rng) {
  std::vector<Summand> s;
  int n = 1 + static_cast<int>(rng() % 2);
  for (int i = 0; i < n; ++i) {
    Gen g = rng() % 2 ? Gen{} : Gen{{0}, -1};
    s.push_back({g, static_cast<int>(rng() % 3) - 1});
  }
  return TwistedComplex(amb, s);
}

TwistedMorphism random_closed(const TwistedComplex& x, const TwistedComplex& y, std::mt19937& rng) {
  auto h = twisted_hom_complex(x, y);
  TwistedMorphism f = zero_morphism(x, y);
  for (const auto& z : h->cycles(0)) f.mat.add_block(0, 0, z.mat, Scalar(static_cast<long>(rng() % 5) - 2));
  return f;
}

ArrowObject random_arrow(const AmbPtr& amb, std::mt19937& rng) {
  auto x1 = random_complex(amb, rng), x0 = random_complex(amb, rng);
  return ArrowObject::make(random_closed(x1, x0, rng));
}

ArrowMorphism random_pair(const ArrowObject& a, const ArrowObject& b, std::mt19937& rng) {
  VvHom h(a, b);
  ArrowMorphism f{a, b, 0, zero_morphism(a.x0, b.x0), zero_morphism(a.x1, b.x1)};
  for (const auto& p : h.closed_pairs()) {
    Scalar c(static_cast<long>(rng() % 5) - 2);
    f.phi0.mat.add_block(0, 0, p.phi0.mat, c);
    f.phi1.mat.add_block(0, 0, p.phi1.mat, c);
  }
  return f;
}

bool same_object(const ArrowObject& a, const ArrowObject& b) { return a == b; }

}  // namespace

TEST_CASE("vv_hom of free objects is the twisted hom") {
  std::mt19937 rng(1);
  for (int t = 0; t < 4; ++t) {
    auto x = random_complex(cd(), rng), y = random_complex(cd(), rng);
    VvHom h(ArrowObject::free(x), ArrowObject::free(y));
    auto tw = twisted_hom_complex(x, y);
    for (int d = tw->min_degree() - 1; d <= tw->max_degree() + 1; ++d) CHECK(h.dim(d) == tw->dim(d));
  }
}

TEST_CASE("vv_hom quotients") {
  std::mt19937 rng(2);
  auto x = random_complex(cd(), rng);
  auto y = random_complex(cd(), rng);
  ArrowObject idx = ArrowObject::make(identity(x));
  auto a = random_arrow(cd(), rng);
  VvHom into_id(a, idx);
  for (int d = -3; d <= 3; ++d) CHECK(into_id.dim(d) == 0);
  VvHom out_of_id(idx, ArrowObject::free(y));
  for (int d = -3; d <= 3; ++d) CHECK(out_of_id.dim(d) == 0);
  for (int t = 0; t < 5; ++t) {
    auto p = random_arrow(cd(), rng), q = random_arrow(cd(), rng);
    VvHom h(p, q);
    auto c = h.complex();
    for (const auto& [n, m] : c.d)
      if (c.d.count(n + 1)) CHECK((c.diff(n + 1) * m).is_zero());
    for (int d = h.min_degree(); d <= h.max_degree(); ++d)
      for (const auto& r : h.basis(d)) {
        CHECK(commutes(r));
        CHECK(h.canonical(r).phi0.mat == r.phi0.mat);
      }
  }
}

TEST_CASE("vv_compose") {
  std::mt19937 rng(3);
  auto one = ArrowObject::free(single(cd(), Gen{}));
  for (int t = 0; t < 4; ++t) {
    auto g = random_arrow(cd(), rng), h = random_arrow(cd(), rng), k = random_arrow(cd(), rng);
    CHECK(same_object(vv_compose(vv_compose(g, h), k), vv_compose(g, vv_compose(h, k))));
    CHECK(same_object(vv_compose(one, h), h));
    auto gh = vv_compose(g, h);
    CHECK(differential(gh.x).mat.is_zero());
    CHECK(same_object(vv_action(g, vv_action(h, k)), vv_action(vv_compose(g, h), k)));
  }
  auto x = random_complex(cd(), rng), y = random_complex(cd(), rng);
  CHECK(same_object(vv_compose(ArrowObject::free(x), ArrowObject::free(y)), ArrowObject::free(compose(x, y))));
}

TEST_CASE("vv_hcompose of morphisms") {
  std::mt19937 rng(4);
  for (int t = 0; t < 3; ++t) {
    auto g = random_arrow(cd(), rng), g2 = random_arrow(cd(), rng);
    auto h = random_arrow(cd(), rng), h2 = random_arrow(cd(), rng);
    auto phi = random_pair(g, g2, rng), psi = random_pair(h, h2, rng);
    auto c = vv_hcompose(phi, psi);
    CHECK(commutes(c));
    CHECK(differential(c.phi0).mat.is_zero());
    CHECK(differential(c.phi1).mat.is_zero());
    auto id = vv_hcompose(vv_identity(g), vv_identity(h));
    CHECK(id.phi0.mat == identity(vv_compose(g, h).x0).mat);
    CHECK(id.phi1.mat == identity(vv_compose(g, h).x1).mat);
  }
  // composites carry several blocks
  auto g = random_arrow(cd(), rng), h = random_arrow(cd(), rng), k = random_arrow(cd(), rng);
  auto gh = vv_compose(g, h);
  CHECK(gh.blocks.size() == 2);
  auto id = vv_hcompose(vv_identity(k), vv_identity(gh));
  CHECK(id.phi1.mat == identity(vv_compose(k, gh).x1).mat);
  auto k2 = random_arrow(cd(), rng);
  auto phi = random_pair(k, k2, rng), psi = random_pair(gh, gh, rng);
  auto c = vv_hcompose(phi, psi);
  CHECK(commutes(c));
  CHECK(differential(c.phi1).mat.is_zero());
}

TEST_CASE("vv_cokernel") {
  std::mt19937 rng(5);
  for (int t = 0; t < 6; ++t) {
    auto a = random_arrow(cd(), rng), b = random_arrow(cd(), rng);
    auto f = random_pair(a, b, rng);
    auto c = vv_cokernel(f);
    CHECK(commutes(c.projection));
    CHECK(differential(c.object.x).mat.is_zero());
    // the projection kills f
    CHECK(VvHom(a, c.object).is_null(vv_compose(c.projection, f)));
    // universal property
    auto z = random_arrow(cd(), rng);
    auto u = random_pair(c.object, z, rng);
    auto g = vv_compose(u, c.projection);
    auto u2 = c.factor(g);
    REQUIRE(u2);
    CHECK(commutes(*u2));
    VvHom hz(c.object, z);
    CHECK(hz.coords(*u2) == hz.coords(u));
    auto self = c.factor(c.projection);
    REQUIRE(self);
    VvHom hc(c.object, c.object);
    CHECK(hc.coords(*self) == hc.coords(vv_identity(c.object)));
  }
  auto x = random_arrow(cd(), rng);
  auto cid = vv_cokernel(vv_identity(x));
  VvHom hc(cid.object, cid.object);
  for (int d = -3; d <= 3; ++d) CHECK(hc.dim(d) == 0);
  auto y = random_arrow(cd(), rng);
  ArrowMorphism zero{x, y, 0, zero_morphism(x.x0, y.x0), zero_morphism(x.x1, y.x1)};
  CHECK(concretize(vv_cokernel(zero).object).object->dim() == concretize(y).object->dim());
}

TEST_CASE("concretization") {
  std::mt19937 rng(6);
  for (int t = 0; t < 3; ++t) {
    auto g = random_arrow(cd(), rng), h = random_arrow(cd(), rng);
    auto gh = concretize(vv_compose(g, h)).object;
    auto tens = tensor_over_algebra(concretize(g).object, concretize(h).object).object;
    CHECK(gh->dim() == tens->dim());
    CHECK(find_isomorphism(gh, tens).has_value());
  }
}
