#include "dgcat/dgbimod.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace dgcat {

namespace {

Scalar sign(long e) { return (e % 2 == 0) ? Scalar(1) : Scalar(-1); }

void normalize(SparseVec& v) {
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseVec out;
  for (auto& [i, c] : v) {
    if (!out.empty() && out.back().first == i)
      out.back().second += c;
    else
      out.emplace_back(i, c);
  }
  v.clear();
  for (auto& e : out)
    if (!e.second.is_zero()) v.push_back(e);
}

// Nonzeros of each column: cols[j] = {(i, m(i, j))}.
std::vector<SparseVec> column_lists(const Matrix& m) {
  std::vector<SparseVec> cols(m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (!m.at(i, j).is_zero()) cols[j].emplace_back(i, m.at(i, j));
  return cols;
}

std::vector<SparseVec> row_lists(const Matrix& m) {
  std::vector<SparseVec> rows(m.rows());
  for (int i = 0; i < m.rows(); ++i) rows[i] = m.sparse_row(i);
  return rows;
}

std::vector<int> blocks(const AlgPtr& a, const std::vector<Matrix>& act, int dim) {
  std::vector<int> out(dim, -1);
  const auto& idem = a->idempotents();
  if (idem.empty()) return out;
  for (int i = 0; i < dim; ++i) {
    int hit = -1;
    for (size_t t = 0; t < idem.size(); ++t) {
      const Matrix& m = act[idem[t]];
      bool fixes = true, kills = true;
      for (int r = 0; r < dim; ++r) {
        const Scalar& x = m.at(r, i);
        if (!x.is_zero()) kills = false;
        if (x != (r == i ? Scalar(1) : Scalar(0))) fixes = false;
      }
      if (fixes) {
        if (hit >= 0) {
          hit = -2;
          break;
        }
        hit = static_cast<int>(t);
      } else if (!kills) {
        hit = -2;
        break;
      }
    }
    out[i] = hit >= 0 ? hit : -1;
  }
  return out;
}

Matrix combine(const std::vector<Matrix>& mats, const Vec& a, int dim) {
  Matrix m(dim, dim);
  for (size_t i = 0; i < a.size(); ++i)
    if (!a[i].is_zero()) m.add_block(0, 0, mats[i], a[i]);
  return m;
}

std::string pair_label(const std::string& a, const std::string& b, bool paren) {
  return paren ? "(" + a + ")⊗(" + b + ")" : a + "⊗" + b;
}

bool labels_unique(const GradedSpace& s) {
  std::set<std::string> seen;
  for (const auto& b : s.basis)
    if (!seen.insert(b.label).second) return false;
  return true;
}

void require_same(const AlgPtr& a, const AlgPtr& b, const char* what) {
  if (!same_algebra(a, b)) throw StructuralError(std::string(what) + ": algebra mismatch");
}

}  // namespace

// ---------------------------------------------------------------------------

BimodPtr DgBimodule::make(AlgPtr left, AlgPtr right, GradedSpace space, std::vector<Matrix> left_action,
                          std::vector<Matrix> right_action, Matrix diff) {
  if (!left || !right) throw StructuralError("bimodule needs both algebras");
  if (left->field() != space.field || right->field() != space.field)
    throw StructuralError("bimodule and algebras over different fields");
  space.validate();
  int n = space.dim();
  if (static_cast<int>(left_action.size()) != left->dim() || static_cast<int>(right_action.size()) != right->dim())
    throw StructuralError("action table does not match the algebra dimension");
  for (const auto& m : left_action)
    if (m.rows() != n || m.cols() != n) throw StructuralError("left action matrix has wrong shape");
  for (const auto& m : right_action)
    if (m.rows() != n || m.cols() != n) throw StructuralError("right action matrix has wrong shape");
  if (diff.rows() != n || diff.cols() != n) throw StructuralError("bimodule differential has wrong shape");
  auto b = std::shared_ptr<DgBimodule>(new DgBimodule());
  b->left_ = std::move(left);
  b->right_ = std::move(right);
  b->space_ = std::move(space);
  b->lact_ = std::move(left_action);
  b->ract_ = std::move(right_action);
  b->diff_ = std::move(diff);
  b->lblock_ = blocks(b->left_, b->lact_, n);
  b->rblock_ = blocks(b->right_, b->ract_, n);
  return b;
}

Matrix DgBimodule::left_action(const Vec& a) const { return combine(lact_, a, dim()); }
Matrix DgBimodule::right_action(const Vec& b) const { return combine(ract_, b, dim()); }

bool same_sides(const DgBimodule& m, const DgBimodule& n) {
  return same_algebra(m.left(), n.left()) && same_algebra(m.right(), n.right());
}

AlgebraReport check_dg_bimodule(const DgBimodule& m) {
  AlgebraReport rep;
  const auto& A = *m.left();
  const auto& B = *m.right();
  int n = m.dim();
  Matrix id = Matrix::identity(n, m.field());
  auto first_col = [&](const Matrix& x) {
    for (int j = 0; j < x.cols(); ++j)
      for (int i = 0; i < x.rows(); ++i)
        if (!x.at(i, j).is_zero()) return j;
    return -1;
  };

  // degrees
  {
    std::string bad;
    std::vector<std::string> wit;
    for (int j = 0; j < n && bad.empty(); ++j)
      for (int i = 0; i < n; ++i)
        if (!m.diff().at(i, j).is_zero() && m.degree(i) != m.degree(j) + 1) {
          bad = "differential does not raise degree by one";
          wit = {m.label(j)};
          break;
        }
    for (int a = 0; a < A.dim() && bad.empty(); ++a)
      for (int j = 0; j < n && bad.empty(); ++j)
        for (int i = 0; i < n; ++i)
          if (!m.left_action(a).at(i, j).is_zero() && m.degree(i) != m.degree(j) + A.degree(a)) {
            bad = "left action does not respect degrees";
            wit = {A.label(a), m.label(j)};
            break;
          }
    for (int b = 0; b < B.dim() && bad.empty(); ++b)
      for (int j = 0; j < n && bad.empty(); ++j)
        for (int i = 0; i < n; ++i)
          if (!m.right_action(b).at(i, j).is_zero() && m.degree(i) != m.degree(j) + B.degree(b)) {
            bad = "right action does not respect degrees";
            wit = {m.label(j), B.label(b)};
            break;
          }
    if (!bad.empty()) rep.add({"degree", wit, bad});
  }

  {
    Matrix d2 = m.diff() * m.diff();
    int j = first_col(d2);
    if (j >= 0) rep.add({"d_squared", {m.label(j)}, ""});
  }

  if (m.left_action(A.unit()) != id) rep.add({"left_unit", {}, "1 does not act as the identity"});
  if (m.right_action(B.unit()) != id) rep.add({"right_unit", {}, "1 does not act as the identity"});

  [&] {
    for (int a = 0; a < A.dim(); ++a)
      for (int b = 0; b < A.dim(); ++b) {
        Matrix lhs = m.left_action(a) * m.left_action(b);
        Matrix rhs = m.left_action(to_dense(A.product(a, b), A.dim()));
        if (lhs != rhs) {
          int j = first_col(lhs - rhs);
          rep.add({"left_associativity", {A.label(a), A.label(b), m.label(j)}, ""});
          return;
        }
      }
  }();
  [&] {
    for (int a = 0; a < B.dim(); ++a)
      for (int b = 0; b < B.dim(); ++b) {
        Matrix lhs = m.right_action(b) * m.right_action(a);
        Matrix rhs = m.right_action(to_dense(B.product(a, b), B.dim()));
        if (lhs != rhs) {
          int j = first_col(lhs - rhs);
          rep.add({"right_associativity", {m.label(j), B.label(a), B.label(b)}, ""});
          return;
        }
      }
  }();
  [&] {
    for (int a = 0; a < A.dim(); ++a)
      for (int b = 0; b < B.dim(); ++b) {
        Matrix lhs = m.left_action(a) * m.right_action(b);
        Matrix rhs = m.right_action(b) * m.left_action(a);
        if (lhs != rhs) {
          int j = first_col(lhs - rhs);
          rep.add({"commuting_actions", {A.label(a), m.label(j), B.label(b)}, ""});
          return;
        }
      }
  }();
  // d(a m) = d(a) m + (-1)^{|a|} a d(m)
  for (int a = 0; a < A.dim(); ++a) {
    Matrix lhs = m.diff() * m.left_action(a);
    Matrix rhs = m.left_action(A.diff().column(a)) + sign(A.degree(a)) * (m.left_action(a) * m.diff());
    if (lhs != rhs) {
      rep.add({"left_leibniz", {A.label(a), m.label(first_col(lhs - rhs))}, ""});
      break;
    }
  }
  // d(m b) = d(m) b + (-1)^{|m|} m d(b)
  {
    Matrix s(n, n);
    for (int i = 0; i < n; ++i) s.at(i, i) = sign(m.degree(i));
    for (int b = 0; b < B.dim(); ++b) {
      Matrix lhs = m.diff() * m.right_action(b);
      Matrix rhs = m.right_action(b) * m.diff() + m.right_action(B.diff().column(b)) * s;
      if (lhs != rhs) {
        rep.add({"right_leibniz", {m.label(first_col(lhs - rhs)), B.label(b)}, ""});
        break;
      }
    }
  }
  return rep;
}

BimodPtr regular_bimodule(const AlgPtr& a) {
  std::vector<Matrix> l, r;
  for (int i = 0; i < a->dim(); ++i) {
    l.push_back(a->left_mult(i));
    r.push_back(a->right_mult(i));
  }
  return DgBimodule::make(a, a, a->space(), l, r, a->diff());
}

BimodPtr regular_left(const AlgPtr& a) {
  std::vector<Matrix> l;
  for (int i = 0; i < a->dim(); ++i) l.push_back(a->left_mult(i));
  return DgBimodule::make(a, DgAlgebra::ground(a->field()), a->space(), l, {Matrix::identity(a->dim(), a->field())},
                          a->diff());
}

BimodPtr regular_right(const AlgPtr& a) {
  std::vector<Matrix> r;
  for (int i = 0; i < a->dim(); ++i) r.push_back(a->right_mult(i));
  return DgBimodule::make(DgAlgebra::ground(a->field()), a, a->space(), {Matrix::identity(a->dim(), a->field())}, r,
                          a->diff());
}

BimodPtr zero_bimodule(const AlgPtr& left, const AlgPtr& right) {
  return DgBimodule::make(left, right, GradedSpace{left->field(), {}}, std::vector<Matrix>(left->dim(), Matrix()),
                          std::vector<Matrix>(right->dim(), Matrix()), Matrix());
}

BimodPtr submodule(const BimodPtr& m, const Matrix& basis, std::vector<std::string> labels) {
  int r = basis.cols();
  GradedSpace s{m->field(), {}};
  for (int j = 0; j < r; ++j) {
    int lead = -1;
    for (int i = 0; i < basis.rows(); ++i)
      if (!basis.at(i, j).is_zero()) {
        if (lead < 0) lead = i;
        else if (m->degree(i) != m->degree(lead)) throw StructuralError("submodule basis vector is not homogeneous");
      }
    if (lead < 0) throw StructuralError("submodule basis contains zero");
    s.basis.push_back({labels.empty() ? m->label(lead) : labels[j], m->degree(lead)});
  }
  if (!labels_unique(s))
    for (int j = 0; j < r; ++j) s.basis[j].label = "v" + std::to_string(j + 1);
  auto restrict = [&](const Matrix& x) {
    auto y = solve_matrix(basis, x * basis);
    if (!y) throw StructuralError("submodule basis is not closed under the structure maps");
    return *y;
  };
  std::vector<Matrix> l, rr;
  for (const auto& x : m->left_actions()) l.push_back(restrict(x));
  for (const auto& x : m->right_actions()) rr.push_back(restrict(x));
  return DgBimodule::make(m->left(), m->right(), s, l, rr, restrict(m->diff()));
}

BimodPtr left_ideal(const AlgPtr& a, const Vec& e) {
  auto img = rref_rank_kernel(a->right_mult(e));
  return submodule(regular_left(a), Matrix::from_columns(img.image_basis, a->dim()));
}

BimodPtr right_ideal(const AlgPtr& a, const Vec& e) {
  auto img = rref_rank_kernel(a->left_mult(e));
  return submodule(regular_right(a), Matrix::from_columns(img.image_basis, a->dim()));
}

// ---------------------------------------------------------------------------

BimoduleMap identity_map(const BimodPtr& m) { return {m, m, 0, Matrix::identity(m->dim(), m->field())}; }

BimoduleMap zero_map(const BimodPtr& s, const BimodPtr& t, int degree) {
  return {s, t, degree, Matrix(t->dim(), s->dim())};
}

BimoduleMap compose(const BimoduleMap& g, const BimoduleMap& f) {
  if (g.source->dim() != f.target->dim()) throw StructuralError("compose: maps are not composable");
  return {f.source, g.target, f.degree + g.degree, g.mat * f.mat};
}

BimoduleMap hom_diff(const BimoduleMap& f) {
  return {f.source, f.target, f.degree + 1, f.target->diff() * f.mat - sign(f.degree) * (f.mat * f.source->diff())};
}

bool is_closed(const BimoduleMap& f) { return hom_diff(f).mat.is_zero(); }

AlgebraReport check_bimodule_map(const BimoduleMap& f) {
  AlgebraReport rep;
  const auto& M = *f.source;
  const auto& N = *f.target;
  if (f.mat.rows() != N.dim() || f.mat.cols() != M.dim()) {
    rep.add({"shape", {}, "matrix does not match the source and target"});
    return rep;
  }
  for (int j = 0; j < M.dim(); ++j)
    for (int i = 0; i < N.dim(); ++i)
      if (!f.mat.at(i, j).is_zero() && N.degree(i) != M.degree(j) + f.degree) {
        rep.add({"degree", {M.label(j)}, "entry of the wrong degree"});
        i = N.dim();
        j = M.dim();
      }
  if (!same_sides(M, N)) {
    rep.add({"algebras", {}, "source and target over different algebras"});
    return rep;
  }
  for (int a = 0; a < M.left()->dim(); ++a)
    if (f.mat * M.left_action(a) != sign(static_cast<long>(f.degree) * M.left()->degree(a)) * (N.left_action(a) * f.mat)) {
      rep.add({"left_linear", {M.left()->label(a)}, ""});
      break;
    }
  for (int b = 0; b < M.right()->dim(); ++b)
    if (f.mat * M.right_action(b) != N.right_action(b) * f.mat) {
      rep.add({"right_linear", {M.right()->label(b)}, ""});
      break;
    }
  return rep;
}

BimoduleMap operator+(const BimoduleMap& a, const BimoduleMap& b) { return {a.source, a.target, a.degree, a.mat + b.mat}; }
BimoduleMap operator-(const BimoduleMap& a, const BimoduleMap& b) { return {a.source, a.target, a.degree, a.mat - b.mat}; }
BimoduleMap operator*(const Scalar& s, const BimoduleMap& f) { return {f.source, f.target, f.degree, s * f.mat}; }

int ChainComplex::dim(int n) const {
  auto it = dims.find(n);
  return it == dims.end() ? 0 : it->second;
}

Matrix ChainComplex::diff(int n) const {
  auto it = d.find(n);
  if (it != d.end()) return it->second;
  return Matrix(dim(n + 1), dim(n));
}

// ---------------------------------------------------------------------------

HomComplex::HomComplex(BimodPtr source, BimodPtr target) : src_(std::move(source)), tgt_(std::move(target)) {
  if (!same_sides(*src_, *tgt_)) throw StructuralError("hom_complex: algebra mismatch");
  if (src_->dim() && tgt_->dim()) {
    auto sd = src_->space().degrees(), td = tgt_->space().degrees();
    auto [smin, smax] = std::minmax_element(sd.begin(), sd.end());
    auto [tmin, tmax] = std::minmax_element(td.begin(), td.end());
    lo_ = *tmin - *smax;
    hi_ = *tmax - *smin;
  }
}

const HomComplex::Degree& HomComplex::at(int d) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = cache_.find(d);
  if (it != cache_.end()) return *it->second;
  auto deg = std::make_unique<Degree>();
  const DgBimodule& M = *src_;
  const DgBimodule& N = *tgt_;
  int dm = M.dim(), dn = N.dim();
  std::vector<std::pair<int, int>> unk;
  std::vector<int> var(static_cast<size_t>(dn) * dm, -1);
  if (d >= lo_ && d <= hi_)
    for (int r = 0; r < dn; ++r)
      for (int c = 0; c < dm; ++c) {
        if (N.degree(r) != M.degree(c) + d) continue;
        if (N.left_block(r) >= 0 && M.left_block(c) >= 0 && N.left_block(r) != M.left_block(c)) continue;
        if (N.right_block(r) >= 0 && M.right_block(c) >= 0 && N.right_block(r) != M.right_block(c)) continue;
        var[static_cast<size_t>(r) * dm + c] = static_cast<int>(unk.size());
        unk.emplace_back(r, c);
      }
  RowEchelon ech(static_cast<int>(unk.size()));
  // F X_M - s X_N F = 0 for the structure matrices X of each generator.
  auto constrain = [&](const Matrix& xm, const Matrix& xn, const Scalar& s) {
    auto mrows = row_lists(xm);     // (F X_M)[r][m] = sum_k F[r][k] X_M[k][m]
    auto ncols = column_lists(xn);  // (X_N F)[n][c] = sum_k X_N[n][k] F[k][c]
    std::map<long, SparseVec> eq;
    for (size_t u = 0; u < unk.size(); ++u) {
      auto [r, c] = unk[u];
      for (const auto& [m, x] : mrows[c]) eq[static_cast<long>(r) * dm + m].emplace_back(static_cast<int>(u), x);
      for (const auto& [n, x] : ncols[r]) eq[static_cast<long>(n) * dm + c].emplace_back(static_cast<int>(u), -(s * x));
    }
    for (auto& [k, v] : eq) {
      normalize(v);
      if (!v.empty()) ech.add(v);
    }
  };
  if (!unk.empty()) {
    for (int a : M.left()->generators())
      constrain(M.left_action(a), N.left_action(a), sign(static_cast<long>(d) * M.left()->degree(a)));
    for (int b : M.right()->generators()) constrain(M.right_action(b), N.right_action(b), Scalar(1));
  }
  for (int u : ech.free_columns()) deg->free.push_back(unk[u]);
  for (const auto& v : ech.null_space()) {
    Matrix f(dn, dm);
    for (size_t u = 0; u < unk.size(); ++u)
      if (!v[u].is_zero()) f.at(unk[u].first, unk[u].second) = v[u];
    deg->basis.push_back(std::move(f));
  }
  auto& slot = cache_[d];
  slot = std::move(deg);
  return *slot;
}

const std::vector<Matrix>& HomComplex::basis(int d) const { return at(d).basis; }

Vec HomComplex::coords(int d, const Matrix& f) const {
  const Degree& g = at(d);
  Vec c;
  for (auto [r, col] : g.free) c.push_back(f.at(r, col));
  return c;
}

Matrix HomComplex::from_coords(int d, const Vec& c) const {
  const Degree& g = at(d);
  Matrix f(tgt_->dim(), src_->dim());
  for (size_t i = 0; i < c.size(); ++i)
    if (!c[i].is_zero()) f.add_block(0, 0, g.basis[i], c[i]);
  return f;
}

Matrix HomComplex::differential(int d) const {
  const auto& b = basis(d);
  int rows = dim(d + 1);
  Matrix out(rows, static_cast<int>(b.size()));
  for (size_t j = 0; j < b.size(); ++j) {
    Matrix df = tgt_->diff() * b[j] - sign(d) * (b[j] * src_->diff());
    Vec c = coords(d + 1, df);
    for (int i = 0; i < rows; ++i) out.at(i, static_cast<int>(j)) = c[i];
  }
  return out;
}

ChainComplex HomComplex::complex() const {
  ChainComplex c{src_->field(), {}, {}};
  for (int d = lo_; d <= hi_; ++d)
    if (dim(d)) c.dims[d] = dim(d);
  for (int d = lo_; d <= hi_; ++d)
    if (dim(d) && dim(d + 1)) c.d[d] = differential(d);
  return c;
}

std::vector<BimoduleMap> HomComplex::cycles(int d) const {
  std::vector<BimoduleMap> out;
  for (const auto& k : kernel_basis(differential(d))) out.push_back({src_, tgt_, d, from_coords(d, k)});
  return out;
}

std::vector<Matrix> bimodule_maps(const BimodPtr& s, const BimodPtr& t, int degree) {
  return HomComplex(s, t).basis(degree);
}

// ---------------------------------------------------------------------------

BimodPtr tensor_over_k(const BimodPtr& m, const BimodPtr& n) {
  if (m->field() != n->field()) throw StructuralError("tensor over different fields");
  AlgPtr L = tensor_algebra(m->left(), n->left());
  AlgPtr R = tensor_algebra(m->right(), n->right());
  int dm = m->dim(), dn = n->dim(), d = dm * dn;
  GradedSpace s{m->field(), {}};
  for (bool paren : {false, true}) {
    s.basis.clear();
    for (int i = 0; i < dm; ++i)
      for (int j = 0; j < dn; ++j) s.basis.push_back({pair_label(m->label(i), n->label(j), paren), m->degree(i) + n->degree(j)});
    if (labels_unique(s)) break;
  }
  int la = m->left()->dim(), lc = n->left()->dim();
  int rb = m->right()->dim(), rd = n->right()->dim();
  std::vector<Matrix> lact, ract;
  for (int a = 0; a < la; ++a)
    for (int c = 0; c < lc; ++c) {
      Matrix x(d, d);
      auto ca = column_lists(m->left_action(a));
      auto cc = column_lists(n->left_action(c));
      for (int i = 0; i < dm; ++i)
        for (int j = 0; j < dn; ++j) {
          Scalar sg = sign(static_cast<long>(n->left()->degree(c)) * m->degree(i));
          for (const auto& [p, u] : ca[i])
            for (const auto& [q, v] : cc[j]) x.at(p * dn + q, i * dn + j) += sg * u * v;
        }
      lact.push_back(std::move(x));
    }
  for (int b = 0; b < rb; ++b)
    for (int e = 0; e < rd; ++e) {
      Matrix x(d, d);
      auto cb = column_lists(m->right_action(b));
      auto ce = column_lists(n->right_action(e));
      for (int i = 0; i < dm; ++i)
        for (int j = 0; j < dn; ++j) {
          Scalar sg = sign(static_cast<long>(n->degree(j)) * m->right()->degree(b));
          for (const auto& [p, u] : cb[i])
            for (const auto& [q, v] : ce[j]) x.at(p * dn + q, i * dn + j) += sg * u * v;
        }
      ract.push_back(std::move(x));
    }
  Matrix diff(d, d);
  auto dmc = column_lists(m->diff());
  auto dnc = column_lists(n->diff());
  for (int i = 0; i < dm; ++i)
    for (int j = 0; j < dn; ++j) {
      for (const auto& [p, u] : dmc[i]) diff.at(p * dn + j, i * dn + j) += u;
      Scalar sg = sign(m->degree(i));
      for (const auto& [q, v] : dnc[j]) diff.at(i * dn + q, i * dn + j) += sg * v;
    }
  return DgBimodule::make(L, R, s, lact, ract, diff);
}

BimoduleMap tensor_maps_k(const BimoduleMap& f, const BimoduleMap& g, const BimodPtr& src, const BimodPtr& tgt) {
  int dm = f.source->dim(), dn = g.source->dim();
  int tn = g.target->dim();
  Matrix x(tgt->dim(), src->dim());
  auto fc = column_lists(f.mat);
  auto gc = column_lists(g.mat);
  for (int i = 0; i < dm; ++i)
    for (int j = 0; j < dn; ++j) {
      Scalar sg = sign(static_cast<long>(g.degree) * f.source->degree(i));
      for (const auto& [p, u] : fc[i])
        for (const auto& [q, v] : gc[j]) x.at(p * tn + q, i * dn + j) += sg * u * v;
    }
  return {src, tgt, f.degree + g.degree, x};
}

Matrix Quotient::lift() const {
  Matrix l(proj.cols(), static_cast<int>(kept.size()));
  for (size_t i = 0; i < kept.size(); ++i) l.at(kept[i], static_cast<int>(i)) = 1;
  return l;
}

namespace {

using Columns = std::vector<SparseVec>;

// Quotient of the bimodule given by sparse columns of its structure maps.
Quotient quotient_columns(const AlgPtr& left, const AlgPtr& right, const GradedSpace& space,
                          const std::vector<Columns>& lact, const std::vector<Columns>& ract, const Columns& diff,
                          const std::vector<SparseVec>& rows) {
  int n = space.dim();
  RowEchelon ech(n);
  for (const auto& r : rows) ech.add(r);
  Quotient q;
  q.kept = ech.free_columns();
  int k = static_cast<int>(q.kept.size());
  std::vector<int> pos(n, -1);
  for (int i = 0; i < k; ++i) pos[q.kept[i]] = i;
  Columns pc(n);
  for (int c = 0; c < n; ++c) {
    if (pos[c] >= 0) {
      pc[c].emplace_back(pos[c], space.field.one());
      continue;
    }
    for (const auto& [j, x] : ech.pivot_row(c))
      if (pos[j] >= 0) pc[c].emplace_back(pos[j], -x);
  }
  q.proj = Matrix(k, n);
  for (int c = 0; c < n; ++c)
    for (const auto& [r, x] : pc[c]) q.proj.at(r, c) = x;
  auto induced = [&](const Columns& x) {
    Matrix y(k, k);
    for (int t = 0; t < k; ++t) {
      SparseVec v;
      for (const auto& [a, u] : x[q.kept[t]]) axpy(v, u, pc[a]);
      for (const auto& [r, w] : v) y.at(r, t) = w;
    }
    return y;
  };
  GradedSpace s{space.field, {}};
  for (int i : q.kept) s.basis.push_back(space.basis[i]);
  std::vector<Matrix> l, r;
  for (const auto& x : lact) l.push_back(induced(x));
  for (const auto& x : ract) r.push_back(induced(x));
  q.object = DgBimodule::make(left, right, s, l, r, induced(diff));
  return q;
}

}  // namespace

Quotient quotient(const BimodPtr& m, const std::vector<SparseVec>& rows) {
  std::vector<Columns> l, r;
  for (const auto& x : m->left_actions()) l.push_back(column_lists(x));
  for (const auto& x : m->right_actions()) r.push_back(column_lists(x));
  return quotient_columns(m->left(), m->right(), m->space(), l, r, column_lists(m->diff()), rows);
}

Quotient tensor_over_algebra(const BimodPtr& m, const BimodPtr& n) {
  require_same(m->right(), n->left(), "tensor_over_algebra");
  const AlgPtr& B = m->right();
  int dm = m->dim(), dn = n->dim(), d = dm * dn;
  GradedSpace s{m->field(), {}};
  for (bool paren : {false, true}) {
    s.basis.clear();
    for (int i = 0; i < dm; ++i)
      for (int j = 0; j < dn; ++j) s.basis.push_back({pair_label(m->label(i), n->label(j), paren), m->degree(i) + n->degree(j)});
    if (labels_unique(s)) break;
  }
  std::vector<Columns> lact, ract;
  for (const auto& x : m->left_actions()) {
    Columns y(d);
    auto xc = column_lists(x);
    for (int i = 0; i < dm; ++i)
      for (int j = 0; j < dn; ++j) {
        for (const auto& [p, u] : xc[i]) y[i * dn + j].emplace_back(p * dn + j, u);
      }
    lact.push_back(std::move(y));
  }
  for (const auto& x : n->right_actions()) {
    Columns y(d);
    auto xc = column_lists(x);
    for (int i = 0; i < dm; ++i)
      for (int j = 0; j < dn; ++j)
        for (const auto& [q, v] : xc[j]) y[i * dn + j].emplace_back(i * dn + q, v);
    ract.push_back(std::move(y));
  }
  Columns diff(d);
  auto dmc = column_lists(m->diff());
  auto dnc = column_lists(n->diff());
  for (int i = 0; i < dm; ++i)
    for (int j = 0; j < dn; ++j) {
      SparseVec& v = diff[i * dn + j];
      for (const auto& [p, u] : dmc[i]) v.emplace_back(p * dn + j, u);
      Scalar sg = sign(m->degree(i));
      for (const auto& [q, w] : dnc[j]) v.emplace_back(i * dn + q, sg * w);
      normalize(v);
    }
  std::vector<SparseVec> rel;
  for (int b : B->generators()) {
    auto rc = column_lists(m->right_action(b));
    auto lc = column_lists(n->left_action(b));
    for (int i = 0; i < dm; ++i)
      for (int j = 0; j < dn; ++j) {
        SparseVec v;
        for (const auto& [p, u] : rc[i]) v.emplace_back(p * dn + j, u);
        for (const auto& [q, w] : lc[j]) v.emplace_back(i * dn + q, -w);
        normalize(v);
        if (!v.empty()) rel.push_back(std::move(v));
      }
  }
  return quotient_columns(m->left(), n->right(), s, lact, ract, diff, rel);
}

BimoduleMap tensor_maps(const BimoduleMap& f, const BimoduleMap& g, const Quotient& src, const Quotient& tgt) {
  int dn = g.source->dim();
  int tn = g.target->dim();
  auto fc = column_lists(f.mat);
  auto gc = column_lists(g.mat);
  int amb = tgt.proj.cols();
  Matrix x(tgt.object->dim(), src.object->dim());
  auto pc = column_lists(tgt.proj);
  for (size_t col = 0; col < src.kept.size(); ++col) {
    int i = src.kept[col] / dn, j = src.kept[col] % dn;
    Scalar sg = sign(static_cast<long>(g.degree) * f.source->degree(i));
    for (const auto& [p, u] : fc[i])
      for (const auto& [q, v] : gc[j]) {
        int a = p * tn + q;
        if (a >= amb) throw StructuralError("tensor_maps: target does not match");
        Scalar c = sg * u * v;
        for (const auto& [r, w] : pc[a]) x.at(r, static_cast<int>(col)) += c * w;
      }
  }
  return {src.object, tgt.object, f.degree + g.degree, x};
}

// ---------------------------------------------------------------------------

BimodPtr dual(const BimodPtr& m) {
  int n = m->dim();
  GradedSpace s{m->field(), {}};
  for (int i = 0; i < n; ++i) s.basis.push_back({m->label(i) + "*", -m->degree(i)});
  std::vector<Matrix> l, r;
  for (int b = 0; b < m->right()->dim(); ++b) l.push_back(sign(m->right()->degree(b)) * m->right_action(b).transpose());
  for (int a = 0; a < m->left()->dim(); ++a) r.push_back(m->left_action(a).transpose());
  Matrix d(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!m->diff().at(i, j).is_zero()) d.at(j, i) = -(sign(m->degree(i)) * m->diff().at(i, j));
  return DgBimodule::make(m->right(), m->left(), s, l, r, d);
}

BimodPtr shift(const BimodPtr& m, int k) {
  if (k == 0) return m;
  std::vector<Matrix> l;
  for (int a = 0; a < m->left()->dim(); ++a) l.push_back(sign(static_cast<long>(k) * m->left()->degree(a)) * m->left_action(a));
  return DgBimodule::make(m->left(), m->right(), shifted(m->space(), k), l, m->right_actions(), sign(k) * m->diff());
}

BimoduleMap shift_map(const BimoduleMap& f, const BimodPtr& src, const BimodPtr& tgt, int k) {
  return {src, tgt, f.degree, sign(static_cast<long>(k) * f.degree) * f.mat};
}

// ---------------------------------------------------------------------------

std::optional<BimoduleMap> Cokernel::factor(const BimoduleMap& g) const {
  if (g.mat.cols() != section.rows() || !is_closed(g)) return std::nullopt;
  BimoduleMap u{object, g.target, g.degree, g.mat * section};
  if (u.mat * proj.mat != g.mat) return std::nullopt;
  return u;
}

Cokernel cokernel(const BimoduleMap& f) {
  if (f.degree != 0 || !is_closed(f)) throw StructuralError("cokernel needs a closed map of degree 0");
  std::vector<SparseVec> rows;
  for (int j = 0; j < f.mat.cols(); ++j) rows.push_back(to_sparse(f.mat.column(j)));
  Quotient q = quotient(f.target, rows);
  return {q.object, {f.target, q.object, 0, q.proj}, q.lift()};
}

Splitting split_idempotent(const BimoduleMap& e) {
  if (e.degree != 0 || e.source->dim() != e.target->dim()) throw StructuralError("split_idempotent: not an endomorphism of degree 0");
  if (!is_closed(e)) throw StructuralError("split_idempotent: map is not closed");
  if (e.mat * e.mat != e.mat) throw StructuralError("split_idempotent: map is not idempotent");
  auto r = rref_rank_kernel(e.mat);
  Matrix inc = e.mat.select_columns(r.pivots);
  std::vector<int> top(r.rank);
  for (int i = 0; i < r.rank; ++i) top[i] = i;
  Matrix pr = r.rref.select_rows(top);
  const auto& M = e.source;
  GradedSpace s{M->field(), {}};
  for (int p : r.pivots) s.basis.push_back(M->space().basis[p]);
  std::vector<Matrix> l, rr;
  for (const auto& x : M->left_actions()) l.push_back(pr * (x * inc));
  for (const auto& x : M->right_actions()) rr.push_back(pr * (x * inc));
  auto obj = DgBimodule::make(M->left(), M->right(), s, l, rr, pr * (M->diff() * inc));
  return {obj, {obj, M, 0, inc}, {M, obj, 0, pr}};
}

DirectSum direct_sum(const std::vector<BimodPtr>& parts, const std::vector<std::string>& prefixes) {
  if (parts.empty()) throw StructuralError("direct sum of nothing");
  for (const auto& p : parts)
    if (!same_sides(*p, *parts[0])) throw StructuralError("direct_sum: algebra mismatch");
  DirectSum out;
  GradedSpace s{parts[0]->field(), {}};
  int n = 0;
  for (size_t t = 0; t < parts.size(); ++t) {
    out.offsets.push_back(n);
    n += parts[t]->dim();
  }
  for (int pass = 0; pass < 2; ++pass) {
    s.basis.clear();
    for (size_t t = 0; t < parts.size(); ++t)
      for (const auto& b : parts[t]->space().basis) {
        std::string pre = !prefixes.empty() ? prefixes[t] : (pass ? std::to_string(t + 1) + ":" : "");
        s.basis.push_back({pre + b.label, b.degree});
      }
    if (labels_unique(s) || !prefixes.empty()) break;
  }
  const auto& A = parts[0]->left();
  const auto& B = parts[0]->right();
  std::vector<Matrix> l(A->dim(), Matrix(n, n)), r(B->dim(), Matrix(n, n));
  Matrix d(n, n);
  for (size_t t = 0; t < parts.size(); ++t) {
    int o = out.offsets[t];
    for (int a = 0; a < A->dim(); ++a) l[a].set_block(o, o, parts[t]->left_action(a));
    for (int b = 0; b < B->dim(); ++b) r[b].set_block(o, o, parts[t]->right_action(b));
    d.set_block(o, o, parts[t]->diff());
  }
  out.object = DgBimodule::make(A, B, s, l, r, d);
  return out;
}

std::optional<Isomorphism> find_isomorphism(const BimodPtr& m, const BimodPtr& n, unsigned seed, int tries) {
  if (!same_sides(*m, *n) || m->dim() != n->dim()) return std::nullopt;
  std::map<int, int> dm, dn;
  for (const auto& b : m->space().basis) ++dm[b.degree];
  for (const auto& b : n->space().basis) ++dn[b.degree];
  if (dm != dn) return std::nullopt;
  if (m->dim() == 0) return Isomorphism{zero_map(m, n), zero_map(n, m)};
  HomComplex h(m, n);
  auto z = h.cycles(0);
  if (z.empty()) return std::nullopt;
  auto attempt = [&](const Matrix& f) -> std::optional<Isomorphism> {
    auto inv = inverse(f);
    if (!inv) return std::nullopt;
    return Isomorphism{{m, n, 0, f}, {n, m, 0, *inv}};
  };
  for (const auto& f : z)
    if (auto r = attempt(f.mat)) return r;
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> coef(-3, 3);
  for (int t = 0; t < tries; ++t) {
    Matrix f(n->dim(), m->dim());
    for (const auto& g : z) f.add_block(0, 0, g.mat, m->field().make(coef(rng)));
    if (auto r = attempt(f)) return r;
  }
  return std::nullopt;
}

}  // namespace dgcat
