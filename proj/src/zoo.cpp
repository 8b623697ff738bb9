#include "dgcat/zoo.hpp"

#include <sstream>

namespace dgcat {

AlgPtr acyclic_d(const Field& f) {
  GradedSpace s{f, {{"1", 0}, {"x", -1}}};
  Matrix d(2, 2);
  d.at(0, 1) = f.one();
  return DgAlgebra::make(s, Vec{f.one(), f.zero()}, {{0, 0, 0, f.one()}, {0, 1, 1, f.one()}, {1, 0, 1, f.one()}}, d);
}

AlgPtr dual_numbers(const Field& f) {
  GradedSpace s{f, {{"1", 0}, {"x", 0}}};
  return DgAlgebra::make(s, Vec{f.one(), f.zero()}, {{0, 0, 0, f.one()}, {0, 1, 1, f.one()}, {1, 0, 1, f.one()}},
                         Matrix(2, 2));
}

AlgPtr zigzag(int n, const Field& f) {
  if (n < 2) throw StructuralError("zigzag algebra needs at least two vertices");
  Quiver q;
  q.vertices = n;
  // a_i : i -> i+1 at 2(i-1), b_i : i+1 -> i at 2(i-1)+1
  for (int i = 0; i + 1 < n; ++i) {
    q.arrows.push_back({"a" + std::to_string(i + 1), i, i + 1, 0});
    q.arrows.push_back({"b" + std::to_string(i + 1), i + 1, i, 0});
  }
  auto a = [](int i) { return 2 * i; };
  auto b = [](int i) { return 2 * i + 1; };
  std::vector<Relation> rel;
  for (int i = 0; i + 2 < n; ++i) {
    rel.push_back({{f.one(), {a(i), a(i + 1)}}});
    rel.push_back({{f.one(), {b(i + 1), b(i)}}});
  }
  for (int i = 1; i + 1 < n; ++i) rel.push_back({{f.one(), {a(i), b(i)}}, {-f.one(), {b(i - 1), a(i - 1)}}});
  // all paths of length three vanish; for n >= 3 this already follows
  std::vector<std::vector<int>> len2;
  for (size_t x = 0; x < q.arrows.size(); ++x)
    for (size_t y = 0; y < q.arrows.size(); ++y)
      if (q.arrows[x].target == q.arrows[y].source) len2.push_back({static_cast<int>(x), static_cast<int>(y)});
  for (const auto& p : len2)
    for (size_t z = 0; z < q.arrows.size(); ++z)
      if (q.arrows[p[1]].target == q.arrows[z].source) rel.push_back({{f.one(), {p[0], p[1], static_cast<int>(z)}}});
  return path_algebra(q, rel, f);
}

int zigzag_idempotent(const AlgPtr& z, int i) { return z->space().index_of("e" + std::to_string(i)); }

int zigzag_loop(const AlgPtr& z, int i) {
  int k = z->space().index_of("(" + std::to_string(i) + "|" + std::to_string(i + 1) + "|" + std::to_string(i) + ")");
  if (k < 0) k = z->space().index_of("(" + std::to_string(i) + "|" + std::to_string(i - 1) + "|" + std::to_string(i) + ")");
  return k;
}

TianQuotient tian_quotient(const Field& f) {
  GradedSpace rs{f, {{"e_x", 0}, {"e_y", 0}}};
  auto r = DgAlgebra::make(rs, Vec{f.one(), f.one()}, {{0, 0, 0, f.one()}, {1, 1, 1, f.one()}}, Matrix(2, 2));
  // m1 = e_y(x)e_x in degree 0, m2 = e_x(x)e_y<1> in degree -1
  GradedSpace ms{f, {{"e_y⊗e_x", 0}, {"e_x⊗e_y<1>", -1}}};
  Matrix lx(2, 2), ly(2, 2), rx(2, 2), ry(2, 2);
  ly.at(0, 0) = f.one();
  rx.at(0, 0) = f.one();
  lx.at(1, 1) = f.one();
  ry.at(1, 1) = f.one();
  auto m = DgBimodule::make(r, r, ms, {lx, ly}, {rx, ry}, Matrix(2, 2));
  return {r, m};
}

RepData tian_radical_rep(const Field& f) {
  auto t = tian_quotient(f);
  Vec ex = t.r->basis_vector(0), ey = t.r->basis_vector(1);
  auto mm = tensor_over_algebra(t.m, t.m).object;
  auto rad = shift(idempotent_part(mm, ex), -2);
  return {square_zero_extension(t.r, rad, ex),
          {idempotent_part(regular_bimodule(t.r), ex), idempotent_part(t.m, ey), idempotent_part(t.m, ex)}};
}

BimodPtr dg_space(const GradedSpace& s, const Matrix& diff) {
  auto k = DgAlgebra::ground(s.field);
  int n = s.dim();
  return DgBimodule::make(k, k, s, {Matrix::identity(n, s.field)}, {Matrix::identity(n, s.field)}, diff);
}

AlgPtr matrix_dg_algebra(const BimodPtr& v) {
  int n = v->dim();
  if (n == 0) throw StructuralError("matrix algebra of the zero space");
  const Field& f = v->field();
  GradedSpace s{f, {}};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      s.basis.push_back({"E(" + v->label(i) + "," + v->label(j) + ")", v->degree(i) - v->degree(j)});
  Vec unit(n * n);
  for (int i = 0; i < n; ++i) unit[i * n + i] = f.one();
  std::vector<MultTerm> mult;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) mult.push_back({i * n + j, j * n + l, i * n + l, f.one()});
  // d(E) = dV E - (-1)^{|E|} E dV
  Matrix d(n * n, n * n);
  const Matrix& dv = v->diff();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int col = i * n + j;
      for (int k = 0; k < n; ++k)
        if (!dv.at(k, i).is_zero()) d.at(k * n + j, col) += dv.at(k, i);
      Scalar sg = ((v->degree(i) - v->degree(j)) % 2 == 0) ? f.one() : -f.one();
      for (int l = 0; l < n; ++l)
        if (!dv.at(j, l).is_zero()) d.at(i * n + l, col) -= sg * dv.at(j, l);
    }
  return DgAlgebra::make(s, unit, mult, d);
}

BimodPtr matrix_left_module(const AlgPtr& e, const BimodPtr& v) {
  int n = v->dim();
  if (e->dim() != n * n) throw StructuralError("matrix_left_module: algebra is not End(V)");
  std::vector<Matrix> l;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Matrix m(n, n);
      m.at(i, j) = 1;
      l.push_back(std::move(m));
    }
  AlgPtr k = DgAlgebra::ground(v->field());
  return DgBimodule::make(e, k, v->space(), l, {Matrix::identity(n)}, v->diff());
}

}  // namespace dgcat

namespace dgcat {

AmbPtr algebra_category(const AlgPtr& a) {
  auto amb = Ambient::make(a, {tensor_over_k(regular_left(a), regular_right(a))}, {"F"});
  amb->set_basics({Gen{}, Gen{{0}, -1}});
  return amb;
}

std::shared_ptr<const ZigzagCategory> zigzag_category(int n, const Field& f) {
  auto c = std::make_shared<ZigzagCategory>();
  c->n = n;
  c->z = zigzag(n, f);
  const AlgPtr& z = c->z;
  auto zz = regular_bimodule(z);
  std::vector<BimodPtr> atoms;
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) {
    Vec e = z->basis_vector(zigzag_idempotent(z, i));
    auto l = left_ideal(z, e), r = right_ideal(z, e);
    auto p = tensor_over_k(l, r);
    atoms.push_back(p);
    names.push_back("P" + std::to_string(i));
    auto elem = [&](const BimodPtr& m, int b) { return z->basis_vector(z->space().index_of(m->label(b))); };
    Matrix mult(z->dim(), p->dim());
    for (int x = 0; x < l->dim(); ++x)
      for (int y = 0; y < r->dim(); ++y) {
        Vec v = z->multiply(elem(l, x), elem(r, y));
        for (int k = 0; k < z->dim(); ++k) mult.at(k, x * r->dim() + y) = v[k];
      }
    c->mult.push_back({p, zz, 0, mult});
    // Dual bases of Ze_i and e_iZ for the pairing (y, x) -> coefficient of the loop in y x.
    int loop = zigzag_loop(z, i);
    Matrix g(r->dim(), l->dim());
    for (int y = 0; y < r->dim(); ++y)
      for (int x = 0; x < l->dim(); ++x) g.at(y, x) = z->multiply(elem(r, y), elem(l, x))[loop];
    auto ginv = inverse(g);
    if (!ginv) throw StructuralError("trace pairing on the zigzag algebra is degenerate");
    Vec c1(p->dim());
    for (int k = 0; k < r->dim(); ++k)
      for (int x = 0; x < l->dim(); ++x) c1[x * r->dim() + k] += ginv->at(x, k);
    Matrix coev(p->dim(), z->dim());
    for (int b = 0; b < z->dim(); ++b) {
      Vec v = p->left_action(b).apply(c1);
      for (int k = 0; k < p->dim(); ++k) coev.at(k, b) = v[k];
    }
    BimoduleMap cm{zz, p, 0, coev};
    if (!check_bimodule_map(cm).passed || !is_closed(cm))
      throw StructuralError("coevaluation element is not central");
    c->coev.push_back(cm);
  }
  auto amb = Ambient::make(z, atoms, names);
  std::vector<Gen> basics{Gen{}};
  for (int i = 0; i < n; ++i) basics.push_back(Gen{{i}, -1});
  amb->set_basics(basics);
  c->amb = amb;
  return c;
}

BraidWord parse_braid_word(int n, const std::string& s) {
  BraidWord w{n, {}};
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) {
    size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != tok.size()) throw StructuralError("bad braid letter '" + tok + "'");
    if (v == 0 || v > n || v < -n) throw StructuralError("braid letter " + tok + " out of range");
    w.letters.push_back(v);
  }
  return w;
}

TwistedComplex ks_generator(const ZigzagCategory& c, int letter) {
  int i = letter > 0 ? letter : -letter;
  if (i < 1 || i > c.n) throw StructuralError("braid letter " + std::to_string(letter) + " out of range");
  auto Z = single(c.amb, c.identity());
  auto P = single(c.amb, c.atom(i));
  if (letter > 0) return cone({P, Z, 0, c.mult[i - 1].mat}).object;
  return shift_twisted(cone({Z, P, 0, c.coev[i - 1].mat}).object, -1);
}

TwistedComplex ks_complex(const ZigzagCategory& c, const BraidWord& w) {
  TwistedComplex out = single(c.amb, c.identity());
  for (int l : w.letters) out = compose(out, ks_generator(c, l));
  return out;
}

}  // namespace dgcat
