#include "dgcat/dgalg.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace dgcat {

int GradedSpace::index_of(const std::string& label) const {
  for (int i = 0; i < dim(); ++i)
    if (basis[i].label == label) return i;
  return -1;
}

std::vector<int> GradedSpace::degrees() const {
  std::vector<int> d;
  for (const auto& b : basis) d.push_back(b.degree);
  return d;
}

void GradedSpace::validate() const {
  std::set<std::string> seen;
  for (const auto& b : basis)
    if (!seen.insert(b.label).second) throw StructuralError("duplicate basis label '" + b.label + "'");
}

GradedSpace shifted(const GradedSpace& s, int k) {
  GradedSpace r = s;
  for (auto& b : r.basis) b.degree -= k;
  return r;
}

void AlgebraReport::add(Violation v) {
  passed = false;
  violations.push_back(std::move(v));
}

bool AlgebraReport::has(const std::string& axiom) const {
  for (const auto& v : violations)
    if (v.axiom == axiom) return true;
  return false;
}

std::string AlgebraReport::summary() const {
  if (passed) return "passed";
  std::ostringstream os;
  for (size_t i = 0; i < violations.size(); ++i) {
    const auto& v = violations[i];
    os << (i ? "; " : "") << v.axiom << " at (";
    for (size_t k = 0; k < v.witness.size(); ++k) os << (k ? "," : "") << v.witness[k];
    os << ")";
    if (!v.detail.empty()) os << ": " << v.detail;
  }
  return os.str();
}

// ---------------------------------------------------------------------------

AlgPtr DgAlgebra::make(GradedSpace space, Vec unit, std::vector<MultTerm> mult, Matrix diff) {
  space.validate();
  int n = space.dim();
  if (static_cast<int>(unit.size()) != n) throw StructuralError("unit vector has wrong length");
  if (diff.rows() != n || diff.cols() != n) throw StructuralError("differential has wrong shape");
  for (const auto& t : mult)
    if (t.i < 0 || t.j < 0 || t.k < 0 || t.i >= n || t.j >= n || t.k >= n)
      throw StructuralError("multiplication triple out of range");
  auto a = std::shared_ptr<DgAlgebra>(new DgAlgebra());
  a->space_ = std::move(space);
  a->unit_ = std::move(unit);
  a->terms_ = std::move(mult);
  a->diff_ = std::move(diff);
  a->finish();
  return a;
}

AlgPtr DgAlgebra::ground(const Field& f) {
  GradedSpace s{f, {{"1", 0}}};
  return make(s, Vec{f.one()}, {{0, 0, 0, f.one()}}, Matrix(1, 1));
}

void DgAlgebra::finish() {
  int n = dim();
  prod_.assign(static_cast<size_t>(n) * n, {});
  for (const auto& t : terms_) {
    if (t.c.is_zero()) continue;
    SparseVec& s = prod_[static_cast<size_t>(t.i) * n + t.j];
    axpy(s, t.c, SparseVec{{t.k, field().one()}});
  }
  lmat_.assign(n, Matrix(n, n));
  rmat_.assign(n, Matrix(n, n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (const auto& [k, c] : product(i, j)) {
        lmat_[i].at(k, j) += c;
        rmat_[j].at(k, i) += c;
      }
  // Orthogonal idempotents among basis elements.
  std::vector<int> cand;
  for (int i = 0; i < n; ++i) {
    const SparseVec& p = product(i, i);
    if (p.size() == 1 && p[0].first == i && p[0].second.is_one() && degree(i) == 0 &&
        to_sparse(diff_.column(i)).empty())
      cand.push_back(i);
  }
  bool ok = !cand.empty();
  for (int a : cand)
    for (int b : cand)
      if (a != b && !product(a, b).empty()) ok = false;
  if (ok) {
    Vec s(n);
    for (int a : cand) s[a] += 1;
    for (int i = 0; i < n; ++i)
      if (s[i] != unit_[i]) ok = false;
  }
  if (ok) idem_ = cand;
  // Greedy generating set.
  RowEchelon span(n);
  std::vector<Vec> spanned;
  auto close = [&](const std::vector<int>& gens) {
    RowEchelon w(n);
    std::vector<Vec> vecs;
    if (w.add(unit_)) vecs.push_back(unit_);
    for (int g : gens)
      if (w.add(basis_vector(g))) vecs.push_back(basis_vector(g));
    for (size_t q = 0; q < vecs.size(); ++q)
      for (int g : gens) {
        Vec p = multiply(vecs[q], basis_vector(g));
        if (w.add(p)) vecs.push_back(p);
      }
    return w;
  };
  RowEchelon cur = close({});
  for (int i = 0; i < n && cur.rank() < n; ++i) {
    if (cur.contains(to_sparse(basis_vector(i)))) continue;
    gens_.push_back(i);
    cur = close(gens_);
  }
}

Vec DgAlgebra::basis_vector(int i) const {
  Vec v(dim());
  v[i] = field().one();
  return v;
}

Vec DgAlgebra::multiply(const Vec& a, const Vec& b) const {
  int n = dim();
  Vec r(n);
  for (int i = 0; i < n; ++i) {
    if (a[i].is_zero()) continue;
    for (int j = 0; j < n; ++j) {
      if (b[j].is_zero()) continue;
      Scalar c = a[i] * b[j];
      for (const auto& [k, x] : product(i, j)) r[k] += c * x;
    }
  }
  return r;
}

Matrix DgAlgebra::left_mult(const Vec& a) const {
  Matrix m(dim(), dim());
  for (int i = 0; i < dim(); ++i)
    if (!a[i].is_zero()) m.add_block(0, 0, lmat_[i], a[i]);
  return m;
}

Matrix DgAlgebra::right_mult(const Vec& a) const {
  Matrix m(dim(), dim());
  for (int i = 0; i < dim(); ++i)
    if (!a[i].is_zero()) m.add_block(0, 0, rmat_[i], a[i]);
  return m;
}

bool DgAlgebra::is_ground_field() const {
  return dim() == 1 && degree(0) == 0 && unit_[0].is_one() && product(0, 0).size() == 1 &&
         product(0, 0)[0].second.is_one() && diff_.is_zero();
}

AlgPtr DgAlgebra::with_diff(const Matrix& d) const { return make(space_, unit_, terms_, d); }

AlgPtr DgAlgebra::relabel(const std::vector<std::string>& labels) const {
  if (static_cast<int>(labels.size()) != dim()) throw StructuralError("relabel: wrong number of labels");
  GradedSpace s = space_;
  for (int i = 0; i < dim(); ++i) s.basis[i].label = labels[i];
  return make(s, unit_, terms_, diff_);
}

bool same_algebra(const AlgPtr& a, const AlgPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->field() != b->field() || a->dim() != b->dim()) return false;
  int n = a->dim();
  for (int i = 0; i < n; ++i)
    if (a->degree(i) != b->degree(i) || a->unit()[i] != b->unit()[i]) return false;
  if (a->diff() != b->diff()) return false;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const auto& p = a->product(i, j);
      const auto& q = b->product(i, j);
      if (p.size() != q.size()) return false;
      for (size_t k = 0; k < p.size(); ++k)
        if (p[k].first != q[k].first || p[k].second != q[k].second) return false;
    }
  return true;
}

// ---------------------------------------------------------------------------

AlgebraReport check_dg_algebra(const DgAlgebra& a) {
  AlgebraReport rep;
  int n = a.dim();
  auto lab = [&](int i) { return a.label(i); };

  // degree of multiplication and differential
  bool deg_bad = false;
  for (int i = 0; i < n && !deg_bad; ++i)
    for (int j = 0; j < n && !deg_bad; ++j)
      for (const auto& [k, c] : a.product(i, j))
        if (a.degree(k) != a.degree(i) + a.degree(j)) {
          rep.add({"degree", {lab(i), lab(j)}, "product leaves degree " + std::to_string(a.degree(i) + a.degree(j))});
          deg_bad = true;
          break;
        }
  for (int j = 0; j < n && !deg_bad; ++j)
    for (int i = 0; i < n; ++i)
      if (!a.diff().at(i, j).is_zero() && a.degree(i) != a.degree(j) + 1) {
        rep.add({"degree", {lab(j)}, "differential does not raise degree by one"});
        deg_bad = true;
        break;
      }

  // unit
  {
    bool bad = false;
    for (int i = 0; i < n && !bad; ++i)
      if (!a.unit()[i].is_zero() && a.degree(i) != 0) {
        rep.add({"unit", {lab(i)}, "unit not of degree 0"});
        bad = true;
      }
    if (!bad && !to_sparse(a.diff().apply(a.unit())).empty()) {
      rep.add({"unit", {"1"}, "d(1) != 0"});
      bad = true;
    }
    for (int i = 0; i < n && !bad; ++i) {
      Vec e = a.basis_vector(i);
      if (a.multiply(a.unit(), e) != e || a.multiply(e, a.unit()) != e) {
        rep.add({"unit", {lab(i)}, "1 is not a two-sided unit"});
        bad = true;
      }
    }
  }

  // associativity
  {
    bool bad = false;
    for (int i = 0; i < n && !bad; ++i)
      for (int j = 0; j < n && !bad; ++j) {
        Vec ij = to_dense(a.product(i, j), n);
        for (int k = 0; k < n; ++k) {
          Vec l = a.multiply(ij, a.basis_vector(k));
          Vec r = a.multiply(a.basis_vector(i), to_dense(a.product(j, k), n));
          if (l != r) {
            rep.add({"associativity", {lab(i), lab(j), lab(k)}, ""});
            bad = true;
            break;
          }
        }
      }
  }

  // d^2 = 0
  {
    Matrix d2 = a.diff() * a.diff();
    for (int j = 0; j < n; ++j)
      if (!to_sparse(d2.column(j)).empty()) {
        rep.add({"d_squared", {lab(j)}, ""});
        break;
      }
  }

  // Leibniz: d(xy) = d(x) y + (-1)^{|x|} x d(y)
  {
    bool bad = false;
    for (int i = 0; i < n && !bad; ++i)
      for (int j = 0; j < n; ++j) {
        Vec xy = to_dense(a.product(i, j), n);
        Vec lhs = a.diff().apply(xy);
        Vec rhs = a.multiply(a.diff().column(i), a.basis_vector(j));
        Vec t = a.multiply(a.basis_vector(i), a.diff().column(j));
        Scalar s = (a.degree(i) % 2 == 0) ? Scalar(1) : Scalar(-1);
        for (int k = 0; k < n; ++k) rhs[k] += s * t[k];
        if (lhs != rhs) {
          rep.add({"leibniz", {lab(i), lab(j)}, ""});
          bad = true;
          break;
        }
      }
  }
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

struct PathKey {
  int start;
  std::vector<int> arrows;
  bool operator<(const PathKey& o) const {
    if (arrows.size() != o.arrows.size()) return arrows.size() < o.arrows.size();
    if (start != o.start) return start < o.start;
    return arrows < o.arrows;
  }
  bool operator==(const PathKey& o) const { return start == o.start && arrows == o.arrows; }
};

}  // namespace

AlgPtr path_algebra(const Quiver& q, const std::vector<Relation>& relations, const Field& f, int length_cap) {
  int nv = q.vertices;
  if (nv <= 0) throw StructuralError("quiver needs at least one vertex");
  for (const auto& a : q.arrows)
    if (a.source < 0 || a.source >= nv || a.target < 0 || a.target >= nv)
      throw StructuralError("arrow '" + a.name + "' has an endpoint out of range");
  auto vname = [&](int v) {
    return v < static_cast<int>(q.vertex_names.size()) ? q.vertex_names[v] : std::to_string(v + 1);
  };
  auto path_end = [&](const PathKey& p) { return p.arrows.empty() ? p.start : q.arrows[p.arrows.back()].target; };

  // Relations: all terms of one relation share a length.
  std::vector<std::pair<int, std::vector<std::pair<Scalar, PathKey>>>> rels;
  for (const auto& r : relations) {
    if (r.empty()) continue;
    int len = static_cast<int>(r.front().arrows.size());
    std::vector<std::pair<Scalar, PathKey>> terms;
    for (const auto& t : r) {
      if (static_cast<int>(t.arrows.size()) != len)
        throw StructuralError("relation is not homogeneous in path length");
      if (t.arrows.empty()) throw StructuralError("relations of length 0 are not supported");
      for (size_t k = 0; k + 1 < t.arrows.size(); ++k)
        if (q.arrows[t.arrows[k]].target != q.arrows[t.arrows[k + 1]].source)
          throw StructuralError("relation term is not a path");
      terms.push_back({f.make(t.coeff.value()), PathKey{q.arrows[t.arrows[0]].source, t.arrows}});
    }
    rels.push_back({len, terms});
  }

  // Per length: enumerate paths, reduce modulo the ideal, keep the normal forms.
  struct Level {
    std::vector<PathKey> paths;
    std::map<PathKey, int> index;
    RowEchelon ideal{0};
    std::vector<int> normal;  // indices of paths that survive
  };
  std::vector<Level> levels;
  std::vector<PathKey> cur;
  for (int v = 0; v < nv; ++v) cur.push_back(PathKey{v, {}});
  for (int len = 0;; ++len) {
    if (len > length_cap)
      throw StructuralError("path algebra quotient is not finite-dimensional below the length cap " +
                            std::to_string(length_cap));
    Level lv;
    lv.paths = cur;
    std::sort(lv.paths.begin(), lv.paths.end());
    for (size_t i = 0; i < lv.paths.size(); ++i) lv.index[lv.paths[i]] = static_cast<int>(i);
    lv.ideal = RowEchelon(static_cast<int>(lv.paths.size()));
    for (const auto& [rlen, terms] : rels) {
      if (rlen > len) continue;
      // u r v with |u| + rlen + |v| = len; enumerate u and v as prefixes/suffixes of level paths.
      int rest = len - rlen;
      for (int ul = 0; ul <= rest; ++ul) {
        std::set<std::pair<std::vector<int>, std::vector<int>>> done;
        for (const auto& p : lv.paths) {
          std::vector<int> u(p.arrows.begin(), p.arrows.begin() + ul);
          std::vector<int> v(p.arrows.end() - (rest - ul), p.arrows.end());
          int ustart = p.start;
          if (!done.insert({u, v}).second && ul + (rest - ul) > 0) continue;
          SparseVec row;
          for (const auto& [c, t] : terms) {
            std::vector<int> w = u;
            w.insert(w.end(), t.arrows.begin(), t.arrows.end());
            w.insert(w.end(), v.begin(), v.end());
            PathKey key{ul == 0 ? t.start : ustart, w};
            // composability
            int at = key.start;
            bool ok = true;
            for (int a : w) {
              if (q.arrows[a].source != at) {
                ok = false;
                break;
              }
              at = q.arrows[a].target;
            }
            if (!ok) continue;
            auto it = lv.index.find(key);
            if (it == lv.index.end()) continue;
            axpy(row, c, SparseVec{{it->second, f.one()}});
          }
          if (!row.empty()) lv.ideal.add(row);
        }
      }
    }
    lv.normal = lv.ideal.free_columns();
    bool empty = lv.normal.empty();
    levels.push_back(std::move(lv));
    if (empty) break;
    std::vector<PathKey> next;
    for (const auto& p : levels.back().paths)
      for (size_t a = 0; a < q.arrows.size(); ++a)
        if (q.arrows[a].source == path_end(p)) {
          PathKey n2 = p;
          n2.arrows.push_back(static_cast<int>(a));
          next.push_back(n2);
        }
    if (next.empty()) {
      Level lz;
      lz.ideal = RowEchelon(0);
      levels.push_back(std::move(lz));
      break;
    }
    cur = next;
  }

  // Basis: normal-form paths by length.
  GradedSpace space{f, {}};
  std::vector<std::pair<int, int>> where;  // (level, path index)
  std::map<std::pair<int, int>, int> basis_of;
  for (size_t l = 0; l < levels.size(); ++l)
    for (int i : levels[l].normal) {
      const PathKey& p = levels[l].paths[i];
      std::string label;
      int deg = 0;
      if (p.arrows.empty()) {
        label = "e" + vname(p.start);
      } else {
        label = "(" + vname(p.start);
        for (int a : p.arrows) {
          label += "|" + vname(q.arrows[a].target);
          deg += q.arrows[a].degree;
        }
        label += ")";
      }
      // distinguish parallel arrows by name when vertex sequences collide
      if (space.index_of(label) >= 0) {
        label = "(";
        for (size_t k = 0; k < p.arrows.size(); ++k) label += (k ? "." : "") + q.arrows[p.arrows[k]].name;
        label += ")";
      }
      basis_of[{static_cast<int>(l), i}] = space.dim();
      space.basis.push_back({label, deg});
      where.push_back({static_cast<int>(l), i});
    }
  int n = space.dim();

  // Coordinates of an arbitrary path in the normal-form basis.
  auto coords = [&](const PathKey& p) -> SparseVec {
    size_t l = p.arrows.size();
    if (l >= levels.size()) return {};
    const Level& lv = levels[l];
    auto it = lv.index.find(p);
    if (it == lv.index.end()) return {};
    SparseVec v{{it->second, f.one()}};
    SparseVec red = lv.ideal.reduce(v);
    SparseVec out;
    for (const auto& [c, x] : red) out.emplace_back(basis_of.at({static_cast<int>(l), c}), x);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
  };

  std::vector<MultTerm> mult;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const PathKey& p = levels[where[i].first].paths[where[i].second];
      const PathKey& r = levels[where[j].first].paths[where[j].second];
      if (path_end(p) != r.start) continue;
      PathKey c{p.start, p.arrows};
      c.arrows.insert(c.arrows.end(), r.arrows.begin(), r.arrows.end());
      for (const auto& [k, x] : coords(c)) mult.push_back({i, j, k, x});
    }
  Vec unit(n);
  for (int v = 0; v < nv; ++v) {
    auto c = coords(PathKey{v, {}});
    for (const auto& [k, x] : c) unit[k] += x;
  }
  return DgAlgebra::make(space, unit, mult, Matrix(n, n));
}

ProductAlgebra product_algebra(const std::vector<AlgPtr>& factors) {
  if (factors.empty()) throw StructuralError("product of no algebras");
  if (factors.size() == 1) {
    return {factors[0], {factors[0]->unit()}, {0}};
  }
  Field f = factors[0]->field();
  std::set<std::string> labels;
  bool clash = false;
  for (const auto& a : factors) {
    if (a->field() != f) throw StructuralError("product of algebras over different fields");
    for (int i = 0; i < a->dim(); ++i)
      if (!labels.insert(a->label(i)).second) clash = true;
  }
  GradedSpace space{f, {}};
  std::vector<int> off;
  for (size_t t = 0; t < factors.size(); ++t) {
    off.push_back(space.dim());
    for (const auto& b : factors[t]->space().basis)
      space.basis.push_back({clash ? std::to_string(t + 1) + ":" + b.label : b.label, b.degree});
  }
  int n = space.dim();
  Vec unit(n);
  std::vector<MultTerm> mult;
  Matrix d(n, n);
  std::vector<Vec> idem;
  for (size_t t = 0; t < factors.size(); ++t) {
    const auto& a = factors[t];
    int o = off[t];
    Vec e(n);
    for (int i = 0; i < a->dim(); ++i) {
      unit[o + i] = a->unit()[i];
      e[o + i] = a->unit()[i];
    }
    idem.push_back(e);
    for (const auto& m : a->mult_terms()) mult.push_back({o + m.i, o + m.j, o + m.k, m.c});
    d.set_block(o, o, a->diff());
  }
  return {DgAlgebra::make(space, unit, mult, d), idem, off};
}

AlgPtr tensor_algebra(const AlgPtr& a, const AlgPtr& b) {
  if (a->field() != b->field()) throw StructuralError("tensor of algebras over different fields");
  if (b->is_ground_field()) return a;
  if (a->is_ground_field()) return b;
  int na = a->dim(), nb = b->dim(), n = na * nb;
  GradedSpace space{a->field(), {}};
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j)
      space.basis.push_back({a->label(i) + "*" + b->label(j), a->degree(i) + b->degree(j)});
  Vec unit(n);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j) unit[i * nb + j] = a->unit()[i] * b->unit()[j];
  std::vector<MultTerm> mult;
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j)
      for (int k = 0; k < na; ++k)
        for (int l = 0; l < nb; ++l) {
          const auto& p = a->product(i, k);
          const auto& r = b->product(j, l);
          if (p.empty() || r.empty()) continue;
          int sgn = (b->degree(j) * a->degree(k)) % 2 ? -1 : 1;
          for (const auto& [x, cx] : p)
            for (const auto& [y, cy] : r) mult.push_back({i * nb + j, k * nb + l, x * nb + y, cx * cy * Scalar(sgn)});
        }
  Matrix d(n, n);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j) {
      int col = i * nb + j;
      for (int x = 0; x < na; ++x)
        if (!a->diff().at(x, i).is_zero()) d.at(x * nb + j, col) += a->diff().at(x, i);
      Scalar s = (a->degree(i) % 2) ? Scalar(-1) : Scalar(1);
      for (int y = 0; y < nb; ++y)
        if (!b->diff().at(y, j).is_zero()) d.at(i * nb + y, col) += s * b->diff().at(y, j);
    }
  return DgAlgebra::make(space, unit, mult, d);
}

}  // namespace dgcat
