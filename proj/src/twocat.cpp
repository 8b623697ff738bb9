#include "dgcat/twocat.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace dgcat {

namespace {

Scalar sign(long e) { return (e % 2 == 0) ? Scalar(1) : Scalar(-1); }

std::vector<SparseVec> columns(const Matrix& m) {
  std::vector<SparseVec> cols(m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (!m.at(i, j).is_zero()) cols[j].emplace_back(i, m.at(i, j));
  return cols;
}

SparseVec unit_sparse(int i) { return {{i, Scalar(1)}}; }

SparseVec apply_cols(const std::vector<SparseVec>& cols, const SparseVec& x) {
  SparseVec y;
  for (const auto& [j, c] : x) axpy(y, c, cols[j]);
  return y;
}

bool same(const SparseVec& a, const SparseVec& b) {
  SparseVec d = a;
  axpy(d, Scalar(-1), b);
  return d.empty();
}

bool homogeneous_of(const DgBimodule& m, const SparseVec& v, int deg) {
  for (const auto& [i, c] : v)
    if (m.degree(i) != deg) return false;
  return true;
}

// x . c for a right multiplication table cols[k][i] = e_i c_k.
struct Table {
  std::vector<std::vector<SparseVec>> cols;
  explicit Table(const std::vector<Matrix>& right) {
    for (const auto& r : right) cols.push_back(columns(r));
  }
  SparseVec act(const SparseVec& x, const SparseVec& c) const {
    SparseVec y;
    for (const auto& [k, ck] : c)
      for (const auto& [i, xi] : x) axpy(y, ck * xi, cols[k][i]);
    return y;
  }
};

void require_module_sides(const BimodPtr& x, const char* what) {
  if (!x->right()->is_ground_field())
    throw StructuralError(std::string(what) + ": expected a left module (right algebra k)");
}

std::string lbl(const DgBimodule& m, int i) { return m.label(i); }

BimodPtr hom_object(const BimodPtr& x, const BimodPtr& y) {
  require_module_sides(x, "internal_hom");
  require_module_sides(y, "internal_hom");
  if (!same_algebra(x->left(), y->left())) throw StructuralError("internal_hom: modules over different algebras");
  const AlgPtr& a = x->left();
  int dx = x->dim(), dy = y->dim(), n = dx * dy;
  GradedSpace s{x->field(), {}};
  for (int i = 0; i < dy; ++i)
    for (int j = 0; j < dx; ++j) s.basis.push_back({"[" + y->label(i) + "|" + x->label(j) + "]", y->degree(i) - x->degree(j)});
  std::vector<Matrix> lact, ract;
  for (int e = 0; e < a->dim(); ++e) {
    auto ly = columns(y->left_action(e));
    Matrix l(n, n);
    for (int i = 0; i < dy; ++i)
      for (int j = 0; j < dx; ++j)
        for (const auto& [k, v] : ly[i]) l.at(k * dx + j, i * dx + j) = v;
    lact.push_back(std::move(l));
    const Matrix& lx = x->left_action(e);
    Matrix r(n, n);
    for (int i = 0; i < dy; ++i)
      for (int j = 0; j < dx; ++j)
        for (int m = 0; m < dx; ++m)
          if (!lx.at(j, m).is_zero()) r.at(i * dx + m, i * dx + j) = lx.at(j, m);
    ract.push_back(std::move(r));
  }
  // d(E) = dY E - (-1)^{|E|} E dX
  Matrix d(n, n);
  auto dyc = columns(y->diff());
  for (int i = 0; i < dy; ++i)
    for (int j = 0; j < dx; ++j) {
      int col = i * dx + j;
      for (const auto& [k, v] : dyc[i]) d.at(k * dx + j, col) += v;
      Scalar sg = sign(y->degree(i) - x->degree(j));
      for (int m = 0; m < dx; ++m)
        if (!x->diff().at(j, m).is_zero()) d.at(i * dx + m, col) -= sg * x->diff().at(j, m);
    }
  return DgBimodule::make(y->left(), a, s, lact, ract, d);
}

// Products in [X,Z] of [Y,Z] x [X,Y]: psi of f : (phi (x) psi) (x) x |-> phi(psi(x)).
// f is given on pure tensors, where psi(f)(gamma) = (x_j |-> f(gamma (x) x_j)), so
// the quotient (C (x)_A C) (x)_A X is never formed.
std::vector<Matrix> composition_table(const InternalHom& yz, const InternalHom& xy, const InternalHom& xz) {
  int dx = xy.x->dim(), dy = xy.y->dim(), nyz = yz.object->dim(), nxy = xy.object->dim();
  Quotient cc = tensor_over_algebra(yz.object, xy.object);
  int nxz = xz.object->dim();
  std::vector<SparseVec> psi_f(cc.object->dim());
  for (int b = 0; b < cc.object->dim(); ++b) {
    int p = cc.kept[b] / nxy, q = cc.kept[b] % nxy;
    int zi = p / dy, yl = p % dy, yi = q / dx, xl = q % dx;
    if (yl == yi) psi_f[b] = unit_sparse(zi * dx + xl);
  }
  auto pc = columns(cc.proj);
  std::vector<Matrix> table(nxy, Matrix(nxz, nyz));
  for (int i = 0; i < nyz; ++i)
    for (int k = 0; k < nxy; ++k)
      for (const auto& [row, c] : apply_cols(psi_f, pc[i * nxy + k])) table[k].at(row, i) = c;
  return table;
}

std::map<int, int> graded_dims(const DgBimodule& m) {
  std::map<int, int> out;
  for (int i = 0; i < m.dim(); ++i) ++out[m.degree(i)];
  return out;
}

constexpr int kShiftRange = 3;
constexpr int kZeroObject = -2;

SparseVec flatten(const Matrix& m) {
  SparseVec v;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (!m.at(i, j).is_zero()) v.emplace_back(i * m.cols() + j, m.at(i, j));
  return v;
}

}  // namespace

TwoCategoryCA two_category(const std::vector<AlgPtr>& factors) {
  if (factors.empty()) throw StructuralError("two_category: no objects");
  return {factors, product_algebra(factors)};
}

BimodPtr TwoCategoryCA::identity(int i) const {
  return idempotent_part(regular_bimodule(algebra()), product.central_idempotents.at(i));
}

BimodPtr TwoCategoryCA::generator(int j, int i) const {
  return tensor_over_k(left_ideal(algebra(), product.central_idempotents.at(j)),
                       right_ideal(algebra(), product.central_idempotents.at(i)));
}

BimodPtr TwoCategoryCA::natural_module(int i) const {
  return left_ideal(algebra(), product.central_idempotents.at(i));
}

BimodPtr evaluation(const BimodPtr& x, const BimodPtr& f) { return tensor_over_algebra(f, x).object; }

BimoduleMap evaluation_map(const BimoduleMap& t, const BimodPtr& x) {
  return tensor_maps(t, identity_map(x), tensor_over_algebra(t.source, x), tensor_over_algebra(t.target, x));
}

BimoduleMap evaluation_map(const BimodPtr& f, const BimoduleMap& phi) {
  return tensor_maps(identity_map(f), phi, tensor_over_algebra(f, phi.source), tensor_over_algebra(f, phi.target));
}

BimodPtr cone_bimodule(const BimoduleMap& f) {
  if (f.degree != 0 || !is_closed(f)) throw StructuralError("cone_bimodule: map must be closed of degree 0");
  auto ds = direct_sum({f.target, shift(f.source, 1)});
  const auto& o = ds.object;
  Matrix d = o->diff();
  d.add_block(0, ds.offsets[1], f.mat, Scalar(-1));
  return DgBimodule::make(o->left(), o->right(), o->space(), o->left_actions(), o->right_actions(), d);
}

// ---------------------------------------------------------------------------

BimoduleMap InternalHom::phi(const BimoduleMap& g, const Quotient& gx) const {
  return compose(ev, tensor_maps(g, identity_map(x), gx, ev_domain));
}

BimoduleMap InternalHom::psi(const BimoduleMap& f, const Quotient& gx, const BimodPtr& g) const {
  int dx = x->dim(), dy = y->dim();
  Matrix m = f.mat * gx.proj;
  Matrix out(object->dim(), g->dim());
  for (int c = 0; c < g->dim(); ++c)
    for (int i = 0; i < dy; ++i)
      for (int j = 0; j < dx; ++j) out.at(i * dx + j, c) = m.at(i, c * dx + j);
  return {g, object, f.degree, out};
}

InternalHom internal_hom(const BimodPtr& x, const BimodPtr& y, bool verify) {
  InternalHom h;
  h.x = x;
  h.y = y;
  h.object = hom_object(x, y);
  h.ev_domain = tensor_over_algebra(h.object, x);
  int dx = x->dim(), n = h.object->dim();
  Matrix amb(y->dim(), n * dx);
  for (int p = 0; p < n; ++p)
    for (int j = 0; j < dx; ++j)
      if (p % dx == j) amb.at(p / dx, p * dx + j) = 1;
  h.ev = {h.ev_domain.object, y, 0, amb.select_columns(h.ev_domain.kept)};
  if (verify) {
    const AlgPtr& a = x->left();
    std::vector<std::pair<std::string, BimodPtr>> probes = {
        {"A", regular_bimodule(a)}, {"A(x)A", tensor_over_k(regular_left(a), regular_right(a))}};
    for (const auto& [name, g] : probes) {
      HomComplex lhs(evaluation(x, g), y), rhs(g, h.object);
      int lo = std::min(lhs.min_degree(), rhs.min_degree()), hi = std::max(lhs.max_degree(), rhs.max_degree());
      for (int d = lo; d <= hi; ++d)
        if (lhs.dim(d) != rhs.dim(d))
          throw StructuralError("internal_hom: representability fails at probe generator " + name + " in degree " +
                                std::to_string(d));
    }
  }
  return h;
}

// ---------------------------------------------------------------------------

Vec AlgebraOneMorphism::multiply(const Vec& a, const Vec& b) const {
  Table t(right_mult);
  return to_dense(t.act(to_sparse(a), to_sparse(b)), carrier->dim());
}

BimoduleMap AlgebraOneMorphism::unit_map() const {
  int n = base->dim();
  std::vector<Vec> cols;
  for (int e = 0; e < n; ++e) cols.push_back(carrier->left_action(e).apply(unit));
  return {regular_bimodule(base), carrier, 0, Matrix::from_columns(cols, carrier->dim())};
}

BimoduleMap AlgebraOneMorphism::mult_map(const Quotient& cc) const {
  int n = carrier->dim();
  Matrix m(n, cc.object->dim());
  for (int b = 0; b < cc.object->dim(); ++b) {
    int i = cc.kept[b] / n, k = cc.kept[b] % n;
    for (int r = 0; r < n; ++r) m.at(r, b) = right_mult[k].at(r, i);
  }
  return {cc.object, carrier, 0, m};
}

AlgebraReport check_algebra_morphism(const AlgebraOneMorphism& a) {
  AlgebraReport rep;
  const DgBimodule& c = *a.carrier;
  AlgebraReport cr = check_dg_bimodule(c);
  for (auto& v : cr.violations) rep.add({"carrier:" + v.axiom, v.witness, v.detail});
  if (!rep.passed) return rep;
  int n = c.dim();
  if (static_cast<int>(a.right_mult.size()) != n || static_cast<int>(a.unit.size()) != n) {
    rep.add({"shape", {}, "table size differs from the carrier dimension"});
    return rep;
  }
  for (const auto& r : a.right_mult)
    if (r.rows() != n || r.cols() != n) {
      rep.add({"shape", {}, "right multiplication matrix has the wrong size"});
      return rep;
    }
  Table t(a.right_mult);
  auto dcols = columns(c.diff());
  SparseVec u = to_sparse(a.unit);
  auto e = [](int i) { return unit_sparse(i); };

  if (!homogeneous_of(c, u, 0)) rep.add({"unit_degree", {}, "u(1) is not of degree 0"});
  if (!apply_cols(dcols, u).empty()) rep.add({"unit_closed", {}, "d u(1) != 0"});
  for (int g : a.base->generators()) {
    if (!same(apply_cols(columns(c.left_action(g)), u), apply_cols(columns(c.right_action(g)), u)))
      rep.add({"unit_bimodule", {a.base->label(g)}, "a u(1) != u(1) a"});
  }
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      SparseVec p = t.cols[k][i];
      std::vector<std::string> w = {lbl(c, i), lbl(c, k)};
      if (!homogeneous_of(c, p, c.degree(i) + c.degree(k))) rep.add({"mult_degree", w, "product not of degree |c|+|c'|"});
      SparseVec rhs = t.act(dcols[i], e(k));
      axpy(rhs, sign(c.degree(i)), t.act(e(i), dcols[k]));
      if (!same(apply_cols(dcols, p), rhs)) rep.add({"leibniz", w, "d(cc') != d(c)c' +- c d(c')"});
    }
  for (int g : a.base->generators()) {
    auto l = columns(c.left_action(g)), r = columns(c.right_action(g));
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        std::vector<std::string> w = {a.base->label(g), lbl(c, i), lbl(c, k)};
        if (!same(t.act(l[i], e(k)), apply_cols(l, t.cols[k][i]))) rep.add({"left_linear", w, "(ac)c' != a(cc')"});
        if (!same(t.act(e(i), r[k]), apply_cols(r, t.cols[k][i]))) rep.add({"right_linear", w, "c(c'a) != (cc')a"});
        if (!same(t.act(r[i], e(k)), t.act(e(i), l[k]))) rep.add({"balanced", w, "(ca)c' != c(ac')"});
      }
  }
  for (int i = 0; i < n && rep.passed; ++i)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        if (!same(t.act(t.cols[k][i], e(l)), t.act(e(i), t.cols[l][k])))
          rep.add({"associativity", {lbl(c, i), lbl(c, k), lbl(c, l)}, "(cc')c'' != c(c'c'')"});
  for (int k = 0; k < n; ++k) {
    if (!same(t.act(u, e(k)), e(k))) rep.add({"left_unit", {lbl(c, k)}, "u(1) c != c"});
    if (!same(t.act(e(k), u), e(k))) rep.add({"right_unit", {lbl(c, k)}, "c u(1) != c"});
  }
  return rep;
}

AlgebraOneMorphism identity_algebra(const AlgPtr& a) {
  AlgebraOneMorphism r;
  r.base = a;
  r.carrier = regular_bimodule(a);
  r.unit = a->unit();
  for (int k = 0; k < a->dim(); ++k) r.right_mult.push_back(a->right_mult(k));
  return r;
}

BimodPtr idempotent_part(const BimodPtr& m, const Vec& e) {
  auto img = rref_rank_kernel(m->left_action(e)).image_basis;
  if (img.empty()) return zero_bimodule(m->left(), m->right());
  return submodule(m, Matrix::from_columns(img, m->dim()));
}

AlgebraOneMorphism square_zero_extension(const AlgPtr& r, const BimodPtr& m, std::optional<Vec> e) {
  if (!same_algebra(m->left(), r) || !same_algebra(m->right(), r))
    throw StructuralError("square_zero_extension: M must be an R-R bimodule");
  Vec idem = e.value_or(r->unit());
  if (r->multiply(idem, idem) != idem) throw StructuralError("square_zero_extension: e is not idempotent");
  auto ubasis = rref_rank_kernel(r->left_mult(idem)).image_basis;
  Matrix uc = Matrix::from_columns(ubasis, r->dim());
  int nu = uc.cols();
  for (int i = 0; i < nu; ++i)
    if (r->multiply(idem, ubasis[i]) != r->multiply(ubasis[i], idem))
      throw StructuralError("square_zero_extension: e is not central");
  if (m->left_action(idem) != Matrix::identity(m->dim()) || m->right_action(idem) != Matrix::identity(m->dim()))
    throw StructuralError("square_zero_extension: e M e != M");
  AlgebraOneMorphism a;
  a.base = r;
  auto ds = direct_sum({submodule(regular_bimodule(r), uc), m}, {"", "m:"});
  a.carrier = ds.object;
  int n = a.carrier->dim();
  auto ucoords = [&](const Vec& v) {
    auto c = solve_linear(uc, v);
    if (!c) throw StructuralError("square_zero_extension: eR is not closed");
    return *c;
  };
  a.unit = Vec(n);
  Vec eu = ucoords(idem);
  for (int i = 0; i < nu; ++i) a.unit[i] = eu[i];
  for (int k = 0; k < n; ++k) {
    Matrix x(n, n);
    for (int i = 0; i < n; ++i) {
      Vec v;
      int off = 0;
      if (k < nu && i < nu) {
        v = ucoords(r->multiply(ubasis[i], ubasis[k]));
      } else if (k < nu) {
        v = m->right_action(ubasis[k]).column(i - nu);
        off = nu;
      } else if (i < nu) {
        v = m->left_action(ubasis[i]).column(k - nu);
        off = nu;
      }
      for (size_t j = 0; j < v.size(); ++j) x.at(off + static_cast<int>(j), i) = v[j];
    }
    a.right_mult.push_back(std::move(x));
  }
  return a;
}

AlgPtr to_dg_algebra(const AlgebraOneMorphism& a) {
  if (!a.base->is_ground_field()) throw StructuralError("to_dg_algebra: base is not the ground field");
  std::vector<MultTerm> terms;
  int n = a.carrier->dim();
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int r = 0; r < n; ++r)
        if (!a.right_mult[k].at(r, i).is_zero()) terms.push_back({i, k, r, a.right_mult[k].at(r, i)});
  return DgAlgebra::make(a.carrier->space(), a.unit, terms, a.carrier->diff());
}

AlgebraReport check_module(const AlgebraOneMorphism& a, const ModuleOneMorphism& m) {
  AlgebraReport rep;
  const DgBimodule& o = *m.object;
  const DgBimodule& c = *a.carrier;
  AlgebraReport cr = check_dg_bimodule(o);
  for (auto& v : cr.violations) rep.add({"object:" + v.axiom, v.witness, v.detail});
  if (!rep.passed) return rep;
  int n = o.dim(), nc = c.dim();
  if (static_cast<int>(m.right_act.size()) != nc) {
    rep.add({"shape", {}, "one action matrix per carrier basis element expected"});
    return rep;
  }
  Table t(m.right_act), ct(a.right_mult);
  auto dn = columns(o.diff()), dc = columns(c.diff());
  auto e = [](int i) { return unit_sparse(i); };
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < nc; ++k) {
      std::vector<std::string> w = {lbl(o, i), lbl(c, k)};
      SparseVec p = t.cols[k][i];
      if (!homogeneous_of(o, p, o.degree(i) + c.degree(k))) rep.add({"action_degree", w, "m c not of degree |m|+|c|"});
      SparseVec rhs = t.act(dn[i], e(k));
      axpy(rhs, sign(o.degree(i)), t.act(e(i), dc[k]));
      if (!same(apply_cols(dn, p), rhs)) rep.add({"leibniz", w, "d(mc) != d(m)c +- m d(c)"});
      for (int l = 0; l < nc; ++l)
        if (!same(t.act(p, e(l)), t.act(e(i), ct.cols[l][k])))
          rep.add({"associativity", {lbl(o, i), lbl(c, k), lbl(c, l)}, "(mc)c' != m(cc')"});
    }
  for (int g : a.base->generators()) {
    auto lo = columns(o.left_action(g)), ro = columns(o.right_action(g));
    auto lc = columns(c.left_action(g)), rc = columns(c.right_action(g));
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < nc; ++k) {
        std::vector<std::string> w = {a.base->label(g), lbl(o, i), lbl(c, k)};
        if (!same(t.act(lo[i], e(k)), apply_cols(lo, t.cols[k][i]))) rep.add({"left_linear", w, "(an)c != a(nc)"});
        if (!same(t.act(e(i), rc[k]), apply_cols(ro, t.cols[k][i]))) rep.add({"right_linear", w, "n(ca) != (nc)a"});
        if (!same(t.act(ro[i], e(k)), t.act(e(i), lc[k]))) rep.add({"balanced", w, "(na)c != n(ac)"});
      }
  }
  SparseVec u = to_sparse(a.unit);
  for (int i = 0; i < n; ++i)
    if (!same(t.act(e(i), u), e(i))) rep.add({"unit", {lbl(o, i)}, "m u(1) != m"});
  return rep;
}

InternalEnd internal_end_algebra(const BimodPtr& x) {
  InternalEnd r{internal_hom(x, x), {}};
  const AlgPtr& a = x->left();
  AlgebraOneMorphism& alg = r.algebra;
  alg.base = a;
  alg.carrier = r.hom.object;
  // unit: psi of the action A (x)_A X -> X
  BimodPtr one = regular_bimodule(a);
  Quotient gx = tensor_over_algebra(one, x);
  int dx = x->dim();
  Matrix act(dx, a->dim() * dx);
  for (int e = 0; e < a->dim(); ++e)
    for (int j = 0; j < dx; ++j)
      for (int i = 0; i < dx; ++i) act.at(i, e * dx + j) = x->left_action(e).at(i, j);
  BimoduleMap actq{gx.object, x, 0, act.select_columns(gx.kept)};
  alg.unit = r.hom.psi(actq, gx, one).mat.apply(a->unit());
  alg.right_mult = composition_table(r.hom, r.hom, r.hom);
  return r;
}

ModuleOneMorphism internal_hom_module(const InternalEnd& e, const InternalHom& xy) {
  if (xy.x != e.hom.x) throw StructuralError("internal_hom_module: source objects differ");
  ModuleOneMorphism m;
  m.object = xy.object;
  m.right_act = composition_table(xy, e.hom, xy);
  return m;
}

// ---------------------------------------------------------------------------

ModuleOneMorphism free_module(const AlgebraOneMorphism& a, const BimodPtr& g) {
  Quotient gc = tensor_over_algebra(g, a.carrier);
  int nc = a.carrier->dim(), n = gc.object->dim();
  Table t(a.right_mult);
  ModuleOneMorphism m;
  m.object = gc.object;
  m.generator = g;
  auto pc = columns(gc.proj);
  for (int k = 0; k < nc; ++k) {
    Matrix r(n, n);
    for (int b = 0; b < n; ++b) {
      int gamma = gc.kept[b] / nc, c = gc.kept[b] % nc;
      SparseVec v;
      for (const auto& [q, s] : t.cols[k][c]) axpy(v, s, pc[gamma * nc + q]);
      for (const auto& [row, s] : v) r.at(row, b) = s;
    }
    m.right_act.push_back(std::move(r));
  }
  m.free_on = std::move(gc);
  return m;
}

ModuleOneMorphism cone_module(const ModuleOneMorphism& m, const ModuleOneMorphism& n, const Matrix& f) {
  ModuleOneMorphism r;
  r.object = cone_bimodule({m.object, n.object, 0, f});
  for (size_t k = 0; k < n.right_act.size(); ++k) r.right_act.push_back(direct_sum(n.right_act[k], m.right_act[k]));
  return r;
}

std::vector<BimoduleMap> module_maps(const ModuleOneMorphism& m, const ModuleOneMorphism& n, int d) {
  HomComplex h(m.object, n.object);
  const auto& basis = h.basis(d);
  int nb = static_cast<int>(basis.size());
  if (nb == 0) return {};
  // rows of the constraint f R^M_k = R^N_k f, one per matrix entry
  std::map<long, SparseVec> eq;
  long stride = static_cast<long>(n.object->dim()) * m.object->dim();
  for (int t = 0; t < nb; ++t)
    for (size_t k = 0; k < m.right_act.size(); ++k) {
      Matrix c = basis[t] * m.right_act[k] - n.right_act[k] * basis[t];
      for (int i = 0; i < c.rows(); ++i)
        for (int j = 0; j < c.cols(); ++j)
          if (!c.at(i, j).is_zero()) eq[static_cast<long>(k) * stride + i * c.cols() + j].emplace_back(t, c.at(i, j));
    }
  RowEchelon re(nb);
  for (auto& [key, row] : eq) re.add(row);
  std::vector<BimoduleMap> out;
  for (const Vec& v : re.null_space()) {
    Matrix f(n.object->dim(), m.object->dim());
    for (int t = 0; t < nb; ++t)
      if (!v[t].is_zero()) f += v[t] * basis[t];
    out.push_back({m.object, n.object, d, f});
  }
  return out;
}

BimoduleMap FreeAdjunction::restrict(const BimoduleMap& f) const { return {g, f.target, f.degree, f.mat * unit_in}; }

BimoduleMap FreeAdjunction::extend(const BimoduleMap& gm, const ModuleOneMorphism& y) const {
  const Quotient& gc = *free.free_on;
  int nc = static_cast<int>(y.right_act.size());
  Matrix amb(y.object->dim(), g->dim() * nc);
  for (int gamma = 0; gamma < g->dim(); ++gamma) {
    Vec v = gm.mat.column(gamma);
    for (int c = 0; c < nc; ++c) {
      Vec w = y.right_act[c].apply(v);
      for (int r = 0; r < amb.rows(); ++r) amb.at(r, gamma * nc + c) = w[r];
    }
  }
  return {free.object, y.object, gm.degree, amb.select_columns(gc.kept)};
}

FreeAdjunction free_module_adjunction(const AlgebraOneMorphism& a, const BimodPtr& g) {
  FreeAdjunction adj;
  adj.g = g;
  adj.free = free_module(a, g);
  const Quotient& gc = *adj.free.free_on;
  int nc = a.carrier->dim();
  Matrix in(adj.free.object->dim(), g->dim());
  for (int gamma = 0; gamma < g->dim(); ++gamma)
    for (int c = 0; c < nc; ++c)
      if (!a.unit[c].is_zero())
        for (int r = 0; r < in.rows(); ++r) in.at(r, gamma) += a.unit[c] * gc.proj.at(r, gamma * nc + c);
  adj.unit_in = std::move(in);
  return adj;
}

std::vector<ModuleOneMorphism> module_category_objects(const AlgebraOneMorphism& a,
                                                       const std::vector<BimodPtr>& generators, int cones) {
  std::vector<ModuleOneMorphism> out;
  for (const auto& g : generators) out.push_back(free_module(a, g));
  size_t nfree = out.size();
  for (size_t s = 0; s < nfree && cones > 0; ++s)
    for (size_t t = 0; t < nfree && cones > 0; ++t)
      for (const auto& f : module_maps(out[s], out[t], 0)) {
        if (cones <= 0) break;
        if (f.is_zero() || !is_closed(f)) continue;
        out.push_back(cone_module(out[s], out[t], f.mat));
        --cones;
      }
  return out;
}

AlgebraReport check_algebra_map(const AlgebraOneMorphism& a, const AlgebraOneMorphism& b, const BimoduleMap& alpha) {
  AlgebraReport rep = check_bimodule_map(alpha);
  if (!rep.passed) return rep;
  if (alpha.degree != 0) rep.add({"degree", {}, "algebra maps have degree 0"});
  if (!is_closed(alpha)) rep.add({"closed", {}, "d alpha != 0"});
  if (alpha.mat.apply(a.unit) != b.unit) rep.add({"unit", {}, "alpha(u) != u'"});
  Table ta(a.right_mult), tb(b.right_mult);
  auto al = columns(alpha.mat);
  int n = a.carrier->dim();
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      if (!same(apply_cols(al, ta.cols[k][i]), tb.act(al[i], al[k])))
        rep.add({"multiplicative", {lbl(*a.carrier, i), lbl(*a.carrier, k)}, "alpha(cc') != alpha(c)alpha(c')"});
  return rep;
}

ModuleOneMorphism pushforward_algebra_map(const AlgebraOneMorphism& a, const AlgebraOneMorphism& b,
                                          const BimoduleMap& alpha, const ModuleOneMorphism& m) {
  if (alpha.mat.rows() != b.carrier->dim() || alpha.mat.cols() != a.carrier->dim())
    throw StructuralError("pushforward_algebra_map: alpha has the wrong shape");
  Quotient q1 = tensor_over_algebra(m.object, b.carrier);
  int nm = m.object->dim(), na = a.carrier->dim(), nb = b.carrier->dim();
  auto pc = columns(q1.proj);
  auto al = columns(alpha.mat);
  Table tm(m.right_act), tb(b.right_mult);
  auto pure = [&](const SparseVec& x, const SparseVec& y) {
    SparseVec v;
    for (const auto& [i, s] : x)
      for (const auto& [j, t] : y) axpy(v, s * t, pc[i * nb + j]);
    return v;
  };
  // (m c) (x) b - m (x) alpha(c) b
  std::vector<SparseVec> rows;
  for (int i = 0; i < nm; ++i)
    for (int c = 0; c < na; ++c)
      for (int j = 0; j < nb; ++j) {
        SparseVec v = pure(tm.cols[c][i], unit_sparse(j));
        axpy(v, Scalar(-1), pure(unit_sparse(i), tb.act(al[c], unit_sparse(j))));
        if (!v.empty()) rows.push_back(std::move(v));
      }
  Quotient q2 = quotient(q1.object, rows);
  int n = q2.object->dim();
  auto p2 = columns(q2.proj);
  ModuleOneMorphism out;
  out.object = q2.object;
  for (int k = 0; k < nb; ++k) {
    Matrix r(n, n);
    for (int t = 0; t < n; ++t) {
      int amb = q1.kept[q2.kept[t]];
      int i = amb / nb, j = amb % nb;
      SparseVec v = apply_cols(p2, pure(unit_sparse(i), tb.cols[k][j]));
      for (const auto& [row, s] : v) r.at(row, t) = s;
    }
    out.right_act.push_back(std::move(r));
  }
  return out;
}

CommutationIso internal_hom_commutation(const BimodPtr& g, const BimodPtr& x, const BimodPtr& y) {
  CommutationIso r;
  Quotient gy = tensor_over_algebra(g, y);
  r.x_gy = hom_object(x, gy.object);
  BimodPtr xy = hom_object(x, y);
  r.g_xy = tensor_over_algebra(g, xy);
  int dx = x->dim(), dy = y->dim(), nxy = xy->dim();
  Matrix m(r.x_gy->dim(), r.g_xy.object->dim());
  for (int b = 0; b < r.g_xy.object->dim(); ++b) {
    int gamma = r.g_xy.kept[b] / nxy, p = r.g_xy.kept[b] % nxy;
    int i = p / dx, l = p % dx;
    for (int s = 0; s < gy.object->dim(); ++s) {
      const Scalar& c = gy.proj.at(s, gamma * dy + i);
      if (!c.is_zero()) m.at(s * dx + l, b) = c;
    }
  }
  r.map = {r.g_xy.object, r.x_gy, 0, m};
  if (m.rows() == m.cols()) r.inverse = inverse(m);
  return r;
}

MoritaResult morita_verify(const AlgPtr& a, const AlgPtr& b, const BimodPtr& x, const BimodPtr& y) {
  MoritaResult r;
  for (const auto& [name, alg] : {std::pair{"A", a}, std::pair{"B", b}}) {
    AlgebraReport rep = check_dg_algebra(*alg);
    if (!rep.passed) {
      r.reason = std::string("algebra ") + name + ": " + rep.summary();
      return r;
    }
  }
  if (!same_algebra(x->left(), a) || !same_algebra(x->right(), b) || !same_algebra(y->left(), b) ||
      !same_algebra(y->right(), a)) {
    r.reason = "X must be an A-B bimodule and Y a B-A bimodule";
    return r;
  }
  for (const auto& [name, m] : {std::pair{"X", x}, std::pair{"Y", y}}) {
    AlgebraReport rep = check_dg_bimodule(*m);
    if (!rep.passed) {
      r.reason = std::string("bimodule ") + name + ": " + rep.summary();
      return r;
    }
  }
  BimodPtr xy = tensor_over_algebra(x, y).object, yx = tensor_over_algebra(y, x).object;
  BimodPtr ra = regular_bimodule(a), rb = regular_bimodule(b);
  if (graded_dims(*xy) != graded_dims(*ra)) {
    r.reason = "X (x)_B Y and A differ in graded dimension";
    return r;
  }
  if (graded_dims(*yx) != graded_dims(*rb)) {
    r.reason = "Y (x)_A X and B differ in graded dimension";
    return r;
  }
  r.xy = find_isomorphism(xy, ra);
  if (!r.xy) {
    r.reason = "no isomorphism X (x)_B Y -> A found";
    return r;
  }
  r.yx = find_isomorphism(yx, rb);
  if (!r.yx) {
    r.reason = "no isomorphism Y (x)_A X -> B found";
    return r;
  }
  r.equivalent = true;
  return r;
}

// ---------------------------------------------------------------------------

int IdealData::dim(int s, int t) const {
  auto it = spans.find({s, t});
  if (it == spans.end()) return 0;
  int n = 0;
  for (const auto& [d, v] : it->second) n += static_cast<int>(v.size());
  return n;
}

bool IdealData::contains_identity(int p) const {
  auto it = spans.find({p, p});
  if (it == spans.end()) return false;
  auto jt = it->second.find(0);
  if (jt == it->second.end() || jt->second.empty()) return false;
  int n = jt->second.front().rows();
  RowEchelon re(n * n);
  for (const auto& m : jt->second) re.add(flatten(m));
  return re.contains(flatten(Matrix::identity(n)));
}

IdealProbe::IdealProbe(RepData rep) : rep_(std::move(rep)) {
  for (auto& p : module_category_objects(rep_.alg, rep_.generators))
    if (p.object->dim() > 0) probes_.push_back(std::move(p));
  int nc = rep_.alg.carrier->dim();
  int np = probe_count();
  action_.assign(rep_.generators.size(), std::vector<Action>(np));
  for (size_t gi = 0; gi < rep_.generators.size(); ++gi) {
    const BimodPtr& g = rep_.generators[gi];
    for (int p = 0; p < np; ++p) {
      Action& act = action_[gi][p];
      act.gp = tensor_over_algebra(g, probes_[p].object);
      if (act.gp.object->dim() == 0) {
        act.target = kZeroObject;
        continue;
      }
      Quotient ggp = tensor_over_algebra(g, probes_[p].generator);
      auto gdims = graded_dims(*ggp.object);
      for (int q = 0; q < np && act.target < 0; ++q)
        for (int sh = -kShiftRange; sh <= kShiftRange && act.target < 0; ++sh) {
          const BimodPtr& gq = probes_[q].generator;
          BimodPtr gqs = shift(gq, sh);
          if (graded_dims(*gqs) != gdims) continue;
          auto iso = find_isomorphism(ggp.object, gqs);
          if (!iso) continue;
          // (gamma, (gamma_p, c)) |-> t(gamma gamma_p) (x) c
          const Quotient& fp = *probes_[p].free_on;
          const Quotient& fq = *probes_[q].free_on;
          int npo = probes_[p].object->dim(), np_gen = probes_[p].generator->dim();
          auto tp = iso->forward.mat * ggp.proj;
          auto qc = columns(fq.proj);
          Matrix amb(probes_[q].object->dim(), g->dim() * npo);
          for (int gamma = 0; gamma < g->dim(); ++gamma)
            for (int b = 0; b < npo; ++b) {
              int gp = fp.kept[b] / nc, c = fp.kept[b] % nc;
              SparseVec v;
              for (int r = 0; r < gq->dim(); ++r) {
                const Scalar& s = tp.at(r, gamma * np_gen + gp);
                if (!s.is_zero()) axpy(v, s, qc[r * nc + c]);
              }
              for (const auto& [row, s] : v) amb.at(row, gamma * npo + b) = s;
            }
          Matrix to = amb.select_columns(act.gp.kept);
          auto inv = to.rows() == to.cols() ? inverse(to) : std::nullopt;
          if (!inv) continue;
          act.target = q;
          act.shift = sh;
          act.to_probe = std::move(to);
          act.from_probe = std::move(*inv);
        }
    }
  }
}

const std::map<int, std::vector<Matrix>>& IdealProbe::homs(int s, int t) const {
  auto key = std::make_pair(s, t);
  auto it = homs_.find(key);
  if (it != homs_.end()) return it->second;
  std::map<int, std::vector<Matrix>> out;
  HomComplex h(probes_[s].object, probes_[t].object);
  for (int d = h.min_degree(); d <= h.max_degree(); ++d) {
    auto maps = module_maps(probes_[s], probes_[t], d);
    for (auto& f : maps) out[d].push_back(std::move(f.mat));
  }
  return homs_[key] = std::move(out);
}

std::vector<ProbeMorphism> IdealProbe::basis_morphisms() const {
  std::vector<ProbeMorphism> out;
  for (int s = 0; s < probe_count(); ++s)
    for (int t = 0; t < probe_count(); ++t)
      for (const auto& [d, maps] : homs(s, t))
        for (const auto& m : maps) out.push_back({s, t, {probes_[s].object, probes_[t].object, d, m}});
  return out;
}

IdealData IdealProbe::closure(const std::vector<ProbeMorphism>& seeds, int budget) const {
  IdealData data;
  std::map<std::tuple<int, int, int>, RowEchelon> ech;
  std::vector<std::tuple<int, int, int, Matrix>> queue;
  auto insert = [&](int s, int t, int d, const Matrix& m) {
    if (m.is_zero()) return;
    auto key = std::make_tuple(s, t, d);
    auto it = ech.find(key);
    if (it == ech.end()) it = ech.emplace(key, RowEchelon(m.rows() * m.cols())).first;
    if (!it->second.add(flatten(m))) return;
    data.spans[{s, t}][d].push_back(m);
    queue.emplace_back(s, t, d, m);
  };
  for (const auto& sd : seeds) insert(sd.source, sd.target, sd.map.degree, sd.map.mat);
  int processed = 0;
  while (!queue.empty()) {
    if (processed++ >= budget) {
      data.partial = true;
      break;
    }
    auto [s, t, d, m] = queue.back();
    queue.pop_back();
    BimoduleMap f{probes_[s].object, probes_[t].object, d, m};
    insert(s, t, d + 1, hom_diff(f).mat);
    for (int u = 0; u < probe_count(); ++u) {
      for (const auto& [e, maps] : homs(t, u))
        for (const auto& g : maps) insert(s, u, d + e, g * m);
      for (const auto& [e, maps] : homs(u, s))
        for (const auto& h : maps) insert(u, t, d + e, m * h);
    }
    for (size_t gi = 0; gi < rep_.generators.size(); ++gi) {
      const Action& as = action_[gi][s];
      const Action& at = action_[gi][t];
      if (as.target == kZeroObject || at.target == kZeroObject) continue;
      if (as.target < 0 || at.target < 0) {
        data.partial = true;
        continue;
      }
      BimoduleMap gf = tensor_maps(identity_map(rep_.generators[gi]), f, as.gp, at.gp);
      insert(as.target, at.target, d + at.shift - as.shift, at.to_probe * gf.mat * as.from_probe);
    }
  }
  return data;
}

ProbeVerdict quotient_simple_probe(const IdealProbe& probe, unsigned seed, int budget) {
  ProbeVerdict v;
  auto check = [&](const ProbeMorphism& m) {
    if (m.map.is_zero()) return false;
    IdealData data = probe.closure({m});
    for (int p = 0; p < probe.probe_count(); ++p)
      if (!data.contains_identity(p)) {
        v.kind = ProbeVerdict::ProperIdeal;
        v.witness = m;
        v.ideal = std::move(data);
        return true;
      }
    v.ideal = std::move(data);
    return false;
  };
  auto basis = probe.basis_morphisms();
  for (const auto& m : basis)
    if (check(m)) return v;
  // random combinations within one Hom space and degree
  std::mt19937 rng(seed);
  for (int r = 0; r < budget; ++r) {
    int s = static_cast<int>(rng() % probe.probe_count()), t = static_cast<int>(rng() % probe.probe_count());
    const auto& hs = probe.homs(s, t);
    if (hs.empty()) continue;
    auto it = hs.begin();
    std::advance(it, rng() % hs.size());
    Matrix m(it->second.front().rows(), it->second.front().cols());
    for (const auto& b : it->second) m += Scalar(static_cast<long>(rng() % 7) - 3) * b;
    if (check({s, t, {probe.probe(s).object, probe.probe(t).object, it->first, m}})) return v;
  }
  v.kind = ProbeVerdict::NoProperIdealFound;
  v.witness.reset();
  return v;
}

}  // namespace dgcat
