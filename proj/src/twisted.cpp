#include "dgcat/twisted.hpp"

#include <sstream>

namespace dgcat {

namespace {

Scalar sign(long e) { return (e % 2 == 0) ? Scalar(1) : Scalar(-1); }

std::vector<int> cat(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

void require_same(const AmbPtr& a, const AmbPtr& b) {
  if (a != b) throw StructuralError("twisted complexes over different ambient categories");
}

}  // namespace

std::shared_ptr<Ambient> Ambient::make(AlgPtr a, std::vector<BimodPtr> atoms, std::vector<std::string> names) {
  if (names.size() != atoms.size()) throw StructuralError("one name per atom expected");
  for (const auto& m : atoms)
    if (!same_algebra(m->left(), a) || !same_algebra(m->right(), a))
      throw StructuralError("atoms must be bimodules over the ambient algebra");
  auto amb = std::shared_ptr<Ambient>(new Ambient());
  amb->alg_ = std::move(a);
  amb->atoms_ = std::move(atoms);
  amb->names_ = std::move(names);
  return amb;
}

std::string Ambient::name(const Gen& g) const {
  std::string s;
  for (size_t i = 0; i < g.word.size(); ++i) s += (i ? "·" : "") + names_[g.word[i]];
  if (s.empty()) s = "1";
  if (g.split >= 0) s += "#" + std::to_string(g.split);
  return s;
}

const Ambient::Realized& Ambient::realize(const std::vector<int>& word) const {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  auto it = real_.find(word);
  if (it != real_.end()) return *it->second;
  auto r = std::make_unique<Realized>();
  if (word.empty()) {
    r->object = regular_bimodule(alg_);
  } else if (word.size() == 1) {
    r->object = atoms_.at(word[0]);
    for (int b = 0; b < r->object->dim(); ++b) r->tuples.push_back({b});
  } else {
    std::vector<int> pre(word.begin(), word.end() - 1);
    const Realized& p = realize(pre);
    const BimodPtr& atom = atoms_.at(word.back());
    r->step = std::make_shared<Quotient>(tensor_over_algebra(p.object, atom));
    r->object = r->step->object;
    int dn = atom->dim();
    for (int c : r->step->kept) {
      auto t = p.tuples[c / dn];
      t.push_back(c % dn);
      r->tuples.push_back(std::move(t));
    }
  }
  auto& slot = real_[word];
  slot = std::move(r);
  return *slot;
}

Vec Ambient::extend(const std::vector<int>& prefix, const Vec& x, const std::vector<int>& suffix,
                    const std::vector<int>& tuple) const {
  std::vector<int> cur = prefix;
  Vec v = x;
  for (size_t k = 0; k < suffix.size(); ++k) {
    cur.push_back(suffix[k]);
    const Realized& r = realize(cur);
    int dn = atoms_[suffix[k]]->dim();
    Vec next(r.object->dim());
    for (size_t i = 0; i < v.size(); ++i) {
      if (v[i].is_zero()) continue;
      int c = static_cast<int>(i) * dn + tuple[k];
      for (int row = 0; row < r.object->dim(); ++row) {
        const Scalar& w = r.step->proj.at(row, c);
        if (!w.is_zero()) next[row] += v[i] * w;
      }
    }
    v = std::move(next);
  }
  return v;
}

Vec Ambient::pure_class(const std::vector<int>& word, const std::vector<int>& tuple) const {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  auto key = std::make_pair(word, tuple);
  auto it = pure_cache_.find(key);
  if (it != pure_cache_.end()) return it->second;
  std::vector<int> first{word[0]};
  Vec x(atoms_[word[0]]->dim());
  x[tuple[0]] = field().one();
  Vec v = extend(first, x, std::vector<int>(word.begin() + 1, word.end()), std::vector<int>(tuple.begin() + 1, tuple.end()));
  pure_cache_[key] = v;
  return v;
}

Matrix Ambient::word_hcomp(const std::vector<int>& u, const std::vector<int>& u2, const Matrix& gamma,
                           const std::vector<int>& v, const std::vector<int>& v2, const Matrix& delta,
                           const std::function<long(int)>& sign_exp) const {
  const Realized& src = realize(cat(u, v));
  const Realized& tgt = realize(cat(u2, v2));
  const Realized& ru = realize(u);
  const Realized& rv2 = realize(v2);
  const Realized& ru2 = realize(u2);
  int n = src.object->dim();
  Matrix out(tgt.object->dim(), n);
  std::map<std::vector<int>, int> uidx;
  for (size_t i = 0; i < ru.tuples.size(); ++i) uidx[ru.tuples[i]] = static_cast<int>(i);
  const Vec& unit = alg_->unit();
  for (int b = 0; b < n; ++b) {
    Vec x, y;
    int xdeg = 0;
    if (u.empty()) {
      x = unit;
      y = Vec(src.object->dim());
      y[b] = field().one();
    } else if (v.empty()) {
      x = Vec(ru.object->dim());
      x[b] = field().one();
      xdeg = ru.object->degree(b);
      y = unit;
    } else {
      const auto& t = src.tuples[b];
      std::vector<int> pre(t.begin(), t.begin() + static_cast<long>(u.size()));
      std::vector<int> suf(t.begin() + static_cast<long>(u.size()), t.end());
      int xi = uidx.at(pre);
      x = Vec(ru.object->dim());
      x[xi] = field().one();
      xdeg = ru.object->degree(xi);
      y = pure_class(v, suf);
    }
    Vec x2 = gamma.apply(x), y2 = delta.apply(y);
    Vec r;
    if (u2.empty()) {
      r = rv2.object->left_action(x2).apply(y2);
    } else if (v2.empty()) {
      r = ru2.object->right_action(y2).apply(x2);
    } else {
      r = Vec(tgt.object->dim());
      for (size_t j = 0; j < y2.size(); ++j) {
        if (y2[j].is_zero()) continue;
        Vec e = extend(u2, x2, v2, rv2.tuples[j]);
        for (size_t k = 0; k < e.size(); ++k) r[k] += y2[j] * e[k];
      }
    }
    Scalar s = sign(sign_exp(xdeg));
    for (size_t k = 0; k < r.size(); ++k)
      if (!r[k].is_zero()) out.at(static_cast<int>(k), b) = s * r[k];
  }
  return out;
}

int Ambient::register_split(const std::vector<int>& word, const Matrix& e) const {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  for (size_t i = 0; i < splits_.size(); ++i)
    if (splits_[i].word == word && splits_[i].e == e) return static_cast<int>(i);
  BimodPtr w = realize(word).object;
  Splitting sp = split_idempotent({w, w, 0, e});
  splits_.push_back({word, e, sp.inclusion.mat, sp.projection.mat, sp.object});
  return static_cast<int>(splits_.size()) - 1;
}

BimodPtr Ambient::object(const Gen& g) const {
  if (g.split < 0) return realize(g.word).object;
  std::lock_guard<std::recursive_mutex> lock(mu_);
  return splits_.at(g.split).object;
}

Matrix Ambient::split_idempotent_of(const Gen& g) const {
  if (g.split < 0) return Matrix::identity(realize(g.word).object->dim(), field());
  std::lock_guard<std::recursive_mutex> lock(mu_);
  return splits_.at(g.split).e;
}

Matrix Ambient::inclusion(const Gen& g) const {
  if (g.split < 0) return Matrix::identity(realize(g.word).object->dim(), field());
  std::lock_guard<std::recursive_mutex> lock(mu_);
  return splits_.at(g.split).inc;
}

Matrix Ambient::projection(const Gen& g) const {
  if (g.split < 0) return Matrix::identity(realize(g.word).object->dim(), field());
  std::lock_guard<std::recursive_mutex> lock(mu_);
  return splits_.at(g.split).proj;
}

Gen Ambient::split(const Gen& g, const Matrix& e) const {
  Matrix big = inclusion(g) * e * projection(g);
  if (g.split < 0 && big == Matrix::identity(big.rows(), field())) return g;
  return Gen{g.word, register_split(g.word, big)};
}

Gen Ambient::concat(const Gen& a, const Gen& b) const {
  auto w = cat(a.word, b.word);
  if (a.split < 0 && b.split < 0) return Gen{w, -1};
  Matrix e = word_hcomp(a.word, a.word, split_idempotent_of(a), b.word, b.word, split_idempotent_of(b),
                        [](int) { return 0L; });
  if (e == Matrix::identity(e.rows(), field())) return Gen{w, -1};
  return Gen{w, register_split(w, e)};
}

Matrix Ambient::hcomp(const Summand& src1, const Summand& tgt1, int p, const Matrix& gamma, const Summand& src2,
                      const Summand& tgt2, int q, const Matrix& delta) const {
  Matrix G = inclusion(tgt1.gen) * gamma * projection(src1.gen);
  Matrix D = inclusion(tgt2.gen) * delta * projection(src2.gen);
  int s = src1.shift, s2 = tgt1.shift, t = src2.shift, t2 = tgt2.shift;
  auto se = [=](int x) -> long {
    return static_cast<long>(t) * x + static_cast<long>(q) * (x - s) + static_cast<long>(t2) * (x + p + s2 - s);
  };
  Matrix H = word_hcomp(src1.gen.word, tgt1.gen.word, G, src2.gen.word, tgt2.gen.word, D, se);
  Gen cs = concat(src1.gen, src2.gen), ct = concat(tgt1.gen, tgt2.gen);
  return projection(ct) * H * inclusion(cs);
}

const HomComplex& Ambient::hom(const Gen& a, const Gen& b) const {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  auto key = std::make_pair(a, b);
  auto it = homs_.find(key);
  if (it != homs_.end()) return *it->second;
  auto h = std::make_unique<HomComplex>(object(a), object(b));
  auto& slot = homs_[key];
  slot = std::move(h);
  return *slot;
}

// ---------------------------------------------------------------------------

TwistedComplex::TwistedComplex(AmbPtr amb, std::vector<Summand> summands, std::map<std::pair<int, int>, Matrix> alpha)
    : amb_(std::move(amb)), sum_(std::move(summands)) {
  if (!amb_) throw StructuralError("twisted complex without an ambient category");
  int n = size();
  std::vector<BimodPtr> parts;
  std::vector<std::string> pre;
  int o = 0;
  for (int k = 0; k < n; ++k) {
    parts.push_back(amb_->object(sum_[k]));
    pre.push_back(std::to_string(k) + ":");
    off_.push_back(o);
    o += parts.back()->dim();
  }
  for (auto& [kl, m] : alpha) {
    auto [k, l] = kl;
    if (k < 0 || l < 0 || k >= n || l >= n) throw StructuralError("twist component index out of range");
    if (m.rows() != parts[k]->dim() || m.cols() != parts[l]->dim())
      throw StructuralError("twist component has the wrong shape");
    if (!m.is_zero()) alpha_[kl] = m;
  }
  const AlgPtr& A = amb_->algebra();
  if (n == 0) {
    total_ = zero_bimodule(A, A);
    return;
  }
  auto ds = direct_sum(parts, pre);
  Matrix d = ds.object->diff();
  for (const auto& [kl, m] : alpha_) d.add_block(off_[kl.first], off_[kl.second], m);
  total_ = DgBimodule::make(A, A, ds.object->space(), ds.object->left_actions(), ds.object->right_actions(), d);
}

int TwistedComplex::block_dim(int k) const { return amb_->object(sum_[k])->dim(); }

Matrix TwistedComplex::component(int k, int l) const {
  auto it = alpha_.find({k, l});
  if (it != alpha_.end()) return it->second;
  return Matrix(block_dim(k), block_dim(l));
}

bool operator==(const TwistedComplex& a, const TwistedComplex& b) {
  if (a.amb_ != b.amb_ || !(a.sum_ == b.sum_) || a.alpha_.size() != b.alpha_.size()) return false;
  for (const auto& [kl, m] : a.alpha_) {
    auto it = b.alpha_.find(kl);
    if (it == b.alpha_.end() || it->second != m) return false;
  }
  return true;
}

TwistedComplex single(const AmbPtr& amb, const Gen& g, int shift) { return TwistedComplex(amb, {{g, shift}}); }
TwistedComplex zero_complex(const AmbPtr& amb) { return TwistedComplex(amb, {}); }

Matrix TwistedMorphism::block(int n, int m) const {
  return mat.block(target.offsets()[n], source.offsets()[m], target.block_dim(n), source.block_dim(m));
}

TwistedMorphism identity(const TwistedComplex& x) {
  return {x, x, 0, Matrix::identity(x.total()->dim(), x.ambient()->field())};
}

TwistedMorphism zero_morphism(const TwistedComplex& x, const TwistedComplex& y, int degree) {
  return {x, y, degree, Matrix(y.total()->dim(), x.total()->dim())};
}

TwistedMorphism compose(const TwistedMorphism& g, const TwistedMorphism& f) {
  if (g.source.total()->dim() != f.target.total()->dim()) throw StructuralError("compose: morphisms are not composable");
  return {f.source, g.target, f.degree + g.degree, g.mat * f.mat};
}

TwistedMorphism differential(const TwistedMorphism& f) {
  return {f.source, f.target, f.degree + 1,
          f.target.total()->diff() * f.mat - sign(f.degree) * (f.mat * f.source.total()->diff())};
}

TwistedMorphism operator+(const TwistedMorphism& a, const TwistedMorphism& b) {
  return {a.source, a.target, a.degree, a.mat + b.mat};
}
TwistedMorphism operator-(const TwistedMorphism& a, const TwistedMorphism& b) {
  return {a.source, a.target, a.degree, a.mat - b.mat};
}
TwistedMorphism operator*(const Scalar& s, const TwistedMorphism& f) { return {f.source, f.target, f.degree, s * f.mat}; }

TwistedMorphism from_blocks(const TwistedComplex& x, const TwistedComplex& y, int degree,
                            const std::map<std::pair<int, int>, Matrix>& blocks) {
  TwistedMorphism f = zero_morphism(x, y, degree);
  for (const auto& [nm, b] : blocks) f.mat.set_block(y.offsets()[nm.first], x.offsets()[nm.second], b);
  return f;
}

AlgebraReport mc_check(const TwistedComplex& x) {
  AlgebraReport rep;
  const auto& amb = *x.ambient();
  for (const auto& [kl, m] : x.alpha())
    if (kl.first >= kl.second) {
      rep.add({"upper_triangular", {std::to_string(kl.first), std::to_string(kl.second)}, "twist below the diagonal"});
      break;
    }
  for (const auto& [kl, m] : x.alpha()) {
    BimoduleMap c{amb.object(x.summands()[kl.second]), amb.object(x.summands()[kl.first]), 1, m};
    auto r = check_bimodule_map(c);
    if (!r.passed) {
      rep.add({"twist_component", {std::to_string(kl.first), std::to_string(kl.second)}, r.summary()});
      break;
    }
  }
  Matrix d2 = x.total()->diff() * x.total()->diff();
  if (!d2.is_zero()) {
    for (int k = 0; k < x.size(); ++k)
      for (int l = 0; l < x.size(); ++l)
        if (!d2.block(x.offsets()[k], x.offsets()[l], x.block_dim(k), x.block_dim(l)).is_zero()) {
          rep.add({"maurer_cartan", {std::to_string(k), std::to_string(l)}, "d(alpha) + alpha alpha != 0"});
          return rep;
        }
  }
  return rep;
}

AlgebraReport check_twisted_morphism(const TwistedMorphism& f) { return check_bimodule_map(f.as_map()); }

TwistedComplex direct_sum(const TwistedComplex& x, const TwistedComplex& y) {
  require_same(x.ambient(), y.ambient());
  auto s = x.summands();
  s.insert(s.end(), y.summands().begin(), y.summands().end());
  auto a = x.alpha();
  for (const auto& [kl, m] : y.alpha()) a[{kl.first + x.size(), kl.second + x.size()}] = m;
  return TwistedComplex(x.ambient(), s, a);
}

TwistedComplex shift_twisted(const TwistedComplex& x, int k) {
  auto s = x.summands();
  for (auto& e : s) e.shift += k;
  auto a = x.alpha();
  for (auto& [kl, m] : a) m = sign(k) * m;
  return TwistedComplex(x.ambient(), s, a);
}

TwistedMorphism shift_morphism(const TwistedMorphism& f, int k) {
  return {shift_twisted(f.source, k), shift_twisted(f.target, k), f.degree, sign(static_cast<long>(k) * f.degree) * f.mat};
}

Cone cone(const TwistedMorphism& f) {
  if (f.degree != 0) throw StructuralError("cone needs a morphism of degree 0");
  if (!differential(f).mat.is_zero()) throw StructuralError("cone needs a closed morphism");
  const TwistedComplex& X = f.source;
  const TwistedComplex& Y = f.target;
  require_same(X.ambient(), Y.ambient());
  int ny = Y.size(), nx = X.size();
  auto s = Y.summands();
  for (auto e : X.summands()) {
    e.shift += 1;
    s.push_back(e);
  }
  auto a = Y.alpha();
  for (const auto& [kl, m] : X.alpha()) a[{kl.first + ny, kl.second + ny}] = -Scalar(1) * m;
  for (int n = 0; n < ny; ++n)
    for (int m = 0; m < nx; ++m) {
      Matrix b = f.block(n, m);
      if (!b.is_zero()) a[{n, ny + m}] = Scalar(-1) * b;
    }
  Cone c;
  c.object = TwistedComplex(X.ambient(), s, a);
  TwistedComplex down = shift_twisted(c.object, -1);
  const Field& fld = X.ambient()->field();
  std::map<std::pair<int, int>, Matrix> in, out, hin, hout;
  for (int n = 0; n < ny; ++n) {
    in[{n, n}] = Matrix::identity(Y.block_dim(n), fld);
    hout[{n, n}] = Matrix::identity(Y.block_dim(n), fld);
  }
  for (int m = 0; m < nx; ++m) {
    out[{m, ny + m}] = Matrix::identity(X.block_dim(m), fld);
    hin[{ny + m, m}] = Scalar(-1) * Matrix::identity(X.block_dim(m), fld);
  }
  c.in = from_blocks(Y, c.object, 0, in);
  c.out = from_blocks(down, X, 0, out);
  c.in_homotopy = from_blocks(X, c.object, -1, hin);
  c.out_homotopy = from_blocks(down, Y, -1, hout);
  return c;
}

TwistedComplex compose(const TwistedComplex& x, const TwistedComplex& y) {
  require_same(x.ambient(), y.ambient());
  const Ambient& amb = *x.ambient();
  int nx = x.size(), ny = y.size();
  std::vector<Summand> s;
  for (int k = 0; k < nx; ++k)
    for (int k2 = 0; k2 < ny; ++k2)
      s.push_back({amb.concat(x.summands()[k].gen, y.summands()[k2].gen), x.summands()[k].shift + y.summands()[k2].shift});
  std::map<std::pair<int, int>, Matrix> a;
  for (const auto& [kl, m] : x.alpha())
    for (int k2 = 0; k2 < ny; ++k2) {
      const Summand& t = y.summands()[k2];
      Matrix id = Matrix::identity(y.block_dim(k2), amb.field());
      a[{kl.first * ny + k2, kl.second * ny + k2}] =
          amb.hcomp(x.summands()[kl.second], x.summands()[kl.first], 1, m, t, t, 0, id);
    }
  for (int k = 0; k < nx; ++k) {
    const Summand& t = x.summands()[k];
    Matrix id = Matrix::identity(x.block_dim(k), amb.field());
    for (const auto& [kl, m] : y.alpha())
      a[{k * ny + kl.first, k * ny + kl.second}] =
          amb.hcomp(t, t, 0, id, y.summands()[kl.second], y.summands()[kl.first], 1, m);
  }
  return TwistedComplex(x.ambient(), s, a);
}

TwistedMorphism hcompose(const TwistedMorphism& f, const TwistedMorphism& g) {
  TwistedComplex src = compose(f.source, g.source), tgt = compose(f.target, g.target);
  const Ambient& amb = *f.source.ambient();
  int ns = g.source.size(), nt = g.target.size();
  std::map<std::pair<int, int>, Matrix> blocks;
  for (int n = 0; n < f.target.size(); ++n)
    for (int m = 0; m < f.source.size(); ++m) {
      Matrix fb = f.block(n, m);
      if (fb.is_zero()) continue;
      for (int n2 = 0; n2 < nt; ++n2)
        for (int m2 = 0; m2 < ns; ++m2) {
          Matrix gb = g.block(n2, m2);
          if (gb.is_zero()) continue;
          blocks[{n * nt + n2, m * ns + m2}] =
              amb.hcomp(f.source.summands()[m], f.target.summands()[n], f.degree, fb, g.source.summands()[m2],
                        g.target.summands()[n2], g.degree, gb);
        }
    }
  return from_blocks(src, tgt, f.degree + g.degree, blocks);
}

std::shared_ptr<HomComplex> twisted_hom_complex(const TwistedComplex& x, const TwistedComplex& y) {
  require_same(x.ambient(), y.ambient());
  return std::make_shared<HomComplex>(x.total(), y.total());
}

}  // namespace dgcat
