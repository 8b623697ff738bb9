#include "dgcat/vvcat.hpp"

namespace dgcat {

namespace {

void require_same(const AmbPtr& a, const AmbPtr& b) {
  if (a != b) throw StructuralError("arrow objects live over different ambient categories");
}

TwistedMorphism tm(const TwistedComplex& s, const TwistedComplex& t, int d, Matrix m) { return {s, t, d, std::move(m)}; }

Vec tail(const Vec& v, size_t from, size_t n) { return Vec(v.begin() + from, v.begin() + from + n); }

// Summands [start, start + count) of x, which must not receive twist from outside.
TwistedComplex slice(const TwistedComplex& x, int start, int count) {
  std::vector<Summand> s(x.summands().begin() + start, x.summands().begin() + start + count);
  std::map<std::pair<int, int>, Matrix> a;
  for (const auto& [kl, m] : x.alpha()) {
    bool in_k = kl.first >= start && kl.first < start + count, in_l = kl.second >= start && kl.second < start + count;
    if (in_k && in_l) a[{kl.first - start, kl.second - start}] = m;
  }
  return TwistedComplex(x.ambient(), s, a);
}

int offset_of(const TwistedComplex& x, int k) { return k < x.size() ? x.offsets()[k] : x.total()->dim(); }

struct Block {
  int start, count, off, dim;
};

std::vector<Block> block_ranges(const TwistedComplex& x, const std::vector<int>& blocks) {
  std::vector<Block> out;
  int s = 0;
  for (int c : blocks) {
    out.push_back({s, c, offset_of(x, s), offset_of(x, s + c) - offset_of(x, s)});
    s += c;
  }
  return out;
}

std::vector<int> default_blocks(const TwistedComplex& x1) {
  if (x1.size() == 0) return {};
  return {x1.size()};
}

}  // namespace

ArrowObject ArrowObject::make(TwistedMorphism x) {
  if (x.degree != 0) throw StructuralError("arrow object: the arrow must have degree 0");
  require_same(x.source.ambient(), x.target.ambient());
  if (!differential(x).mat.is_zero()) throw StructuralError("arrow object: the arrow is not closed");
  return {x.source, x.target, x, default_blocks(x.source)};
}

bool operator==(const ArrowObject& a, const ArrowObject& b) {
  return a.x1 == b.x1 && a.x0 == b.x0 && a.x.mat == b.x.mat && a.blocks == b.blocks;
}

ArrowObject ArrowObject::free(const TwistedComplex& x0) {
  auto z = zero_complex(x0.ambient());
  return {z, x0, zero_morphism(z, x0), {}};
}

ArrowMorphism vv_identity(const ArrowObject& a) { return {a, a, 0, identity(a.x0), identity(a.x1)}; }

ArrowMorphism vv_compose(const ArrowMorphism& g, const ArrowMorphism& f) {
  return {f.source, g.target, f.degree + g.degree, compose(g.phi0, f.phi0), compose(g.phi1, f.phi1)};
}

ArrowMorphism vv_differential(const ArrowMorphism& f) {
  return {f.source, f.target, f.degree + 1, differential(f.phi0), differential(f.phi1)};
}

bool commutes(const ArrowMorphism& f) { return f.phi0.mat * f.source.x.mat == f.target.x.mat * f.phi1.mat; }

// ---------------------------------------------------------------------------

VvHom::VvHom(ArrowObject a, ArrowObject b) : a_(std::move(a)), b_(std::move(b)) {
  require_same(a_.x0.ambient(), b_.x0.ambient());
  h00_ = twisted_hom_complex(a_.x0, b_.x0);
  h11_ = twisted_hom_complex(a_.x1, b_.x1);
  h10_ = twisted_hom_complex(a_.x1, b_.x0);
  h01_ = twisted_hom_complex(a_.x0, b_.x1);
}

ArrowMorphism VvHom::pair_from(int d, const Vec& c0, const Vec& c1) const {
  return {a_, b_, d, tm(a_.x0, b_.x0, d, h00_->from_coords(d, c0)), tm(a_.x1, b_.x1, d, h11_->from_coords(d, c1))};
}

const VvHom::Degree& VvHom::at(int d) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = cache_.find(d);
  if (it != cache_.end()) return *it->second;
  auto g = std::make_unique<Degree>();
  int n00 = h00_->dim(d), n11 = h11_->dim(d), n10 = h10_->dim(d), n01 = h01_->dim(d);
  // phi0 x - y phi1 = 0 in Hom(X1, Y0)
  Matrix m(n10, n00 + n11);
  for (int i = 0; i < n00; ++i) {
    Vec c = h10_->coords(d, h00_->basis(d)[i] * a_.x.mat);
    for (int r = 0; r < n10; ++r) m.at(r, i) = c[r];
  }
  for (int j = 0; j < n11; ++j) {
    Vec c = h10_->coords(d, b_.x.mat * h11_->basis(d)[j]);
    for (int r = 0; r < n10; ++r) m.at(r, n00 + j) = -c[r];
  }
  RowEchelon e(n00);
  for (int k = 0; k < n01; ++k) {
    Vec c = h00_->coords(d, b_.x.mat * h01_->basis(d)[k]);
    if (e.add(c)) g->null.push_back(c);
  }
  for (const auto& k : kernel_basis(m)) {
    Vec c0 = tail(k, 0, n00), c1 = tail(k, n00, n11);
    g->admissible.push_back(c0);
    if (e.add(c0)) g->reps.push_back(pair_from(d, c0, c1));
  }
  std::vector<Vec> cols;
  for (const auto& r : g->reps) cols.push_back(h00_->coords(d, r.phi0.mat));
  cols.insert(cols.end(), g->null.begin(), g->null.end());
  g->span = Matrix::from_columns(cols, n00);
  auto& slot = cache_[d];
  slot = std::move(g);
  return *slot;
}

Vec VvHom::coords(const ArrowMorphism& f) const {
  const Degree& g = at(f.degree);
  Vec c = h00_->coords(f.degree, f.phi0.mat);
  if (g.span.cols() == 0) {
    for (const auto& v : c)
      if (!v.is_zero()) throw StructuralError("vv_hom: phi0 does not lift to a commuting pair");
    return {};
  }
  auto x = solve_linear(g.span, c);
  if (!x) throw StructuralError("vv_hom: phi0 does not lift to a commuting pair");
  return tail(*x, 0, g.reps.size());
}

bool VvHom::is_null(const ArrowMorphism& f) const {
  for (const auto& c : coords(f))
    if (!c.is_zero()) return false;
  return true;
}

ArrowMorphism VvHom::canonical(const ArrowMorphism& f) const {
  Vec c = coords(f);
  const auto& reps = at(f.degree).reps;
  ArrowMorphism out{a_, b_, f.degree, zero_morphism(a_.x0, b_.x0, f.degree), zero_morphism(a_.x1, b_.x1, f.degree)};
  for (size_t i = 0; i < c.size(); ++i) {
    out.phi0.mat.add_block(0, 0, reps[i].phi0.mat, c[i]);
    out.phi1.mat.add_block(0, 0, reps[i].phi1.mat, c[i]);
  }
  return out;
}

Matrix VvHom::differential(int d) const {
  const auto& reps = at(d).reps;
  Matrix out(dim(d + 1), static_cast<int>(reps.size()));
  for (size_t j = 0; j < reps.size(); ++j) {
    Vec c;
    try {
      c = coords(vv_differential(reps[j]));
    } catch (const StructuralError&) {
      throw std::logic_error("vv_hom: the differential does not descend to the quotient");
    }
    for (size_t i = 0; i < c.size(); ++i) out.at(static_cast<int>(i), static_cast<int>(j)) = c[i];
  }
  return out;
}

ChainComplex VvHom::complex() const {
  ChainComplex c{a_.x0.ambient()->field(), {}, {}};
  for (int d = min_degree(); d <= max_degree(); ++d)
    if (dim(d)) c.dims[d] = dim(d);
  for (int d = min_degree(); d <= max_degree(); ++d)
    if (dim(d) && dim(d + 1)) c.d[d] = differential(d);
  return c;
}

std::vector<ArrowMorphism> VvHom::closed_pairs() const {
  int n00 = h00_->dim(0), n11 = h11_->dim(0), n10 = h10_->dim(0);
  int r0 = h00_->dim(1), r1 = h11_->dim(1);
  Matrix m(n10 + r0 + r1, n00 + n11);
  for (int i = 0; i < n00; ++i) {
    Vec c = h10_->coords(0, h00_->basis(0)[i] * a_.x.mat);
    for (int r = 0; r < n10; ++r) m.at(r, i) = c[r];
  }
  for (int j = 0; j < n11; ++j) {
    Vec c = h10_->coords(0, b_.x.mat * h11_->basis(0)[j]);
    for (int r = 0; r < n10; ++r) m.at(r, n00 + j) = -c[r];
  }
  if (r0 && n00) m.set_block(n10, 0, h00_->differential(0));
  if (r1 && n11) m.set_block(n10 + r0, n00, h11_->differential(0));
  std::vector<ArrowMorphism> out;
  for (const auto& k : kernel_basis(m)) out.push_back(pair_from(0, tail(k, 0, n00), tail(k, n00, n11)));
  return out;
}

// ---------------------------------------------------------------------------

ArrowObject vv_compose(const ArrowObject& g, const ArrowObject& h) {
  require_same(g.x0.ambient(), h.x0.ambient());
  auto a = hcompose(g.x, identity(h.x0));
  TwistedComplex x1 = a.source;
  Matrix m = a.mat;
  std::vector<int> blocks;
  for (int c : g.blocks) blocks.push_back(c * h.x0.size());
  for (const Block& b : block_ranges(h.x1, h.blocks)) {
    TwistedComplex hb = slice(h.x1, b.start, b.count);
    auto part = hcompose(identity(g.x0), TwistedMorphism{hb, h.x0, 0, h.x.mat.block(0, b.off, h.x.mat.rows(), b.dim)});
    x1 = direct_sum(x1, part.source);
    m = hstack(m, part.mat);
    blocks.push_back(part.source.size());
  }
  return {x1, a.target, {x1, a.target, 0, m}, blocks};
}

ArrowMorphism vv_hcompose(const ArrowMorphism& phi, const ArrowMorphism& psi) {
  ArrowObject s = vv_compose(phi.source, psi.source), t = vv_compose(phi.target, psi.target);
  int d = phi.degree + psi.degree;
  Matrix first = hcompose(phi.phi1, psi.phi0).mat;
  Matrix p1(t.x1.total()->dim(), s.x1.total()->dim());
  p1.set_block(0, 0, first);
  auto sb = block_ranges(psi.source.x1, psi.source.blocks), tb = block_ranges(psi.target.x1, psi.target.blocks);
  int col = first.cols();
  for (const Block& b : sb) {
    TwistedComplex src = slice(psi.source.x1, b.start, b.count);
    int row = first.rows(), width = 0;
    for (const Block& c : tb) {
      TwistedComplex tgt = slice(psi.target.x1, c.start, c.count);
      TwistedMorphism piece{src, tgt, psi.degree, psi.phi1.mat.block(c.off, b.off, c.dim, b.dim)};
      Matrix m = hcompose(phi.phi0, piece).mat;
      p1.set_block(row, col, m);
      row += m.rows();
      width = m.cols();
    }
    if (tb.empty()) width = compose(phi.source.x0, src).total()->dim();
    col += width;
  }
  return {s, t, d, tm(s.x0, t.x0, d, hcompose(phi.phi0, psi.phi0).mat), tm(s.x1, t.x1, d, p1)};
}

ArrowObject vv_action(const ArrowObject& g, const ArrowObject& m) { return vv_compose(g, m); }

VvCokernel vv_cokernel(const ArrowMorphism& f) {
  if (f.degree != 0) throw StructuralError("vv_cokernel: morphism must have degree 0");
  if (!commutes(f)) throw StructuralError("vv_cokernel: the square does not commute");
  if (!differential(f.phi0).mat.is_zero() || !differential(f.phi1).mat.is_zero())
    throw StructuralError("vv_cokernel: morphism is not closed");
  const ArrowObject& x = f.source;
  const ArrowObject& y = f.target;
  TwistedComplex c1 = direct_sum(y.x1, x.x0);
  std::vector<int> blocks = y.blocks;
  if (x.x0.size()) blocks.push_back(x.x0.size());
  ArrowObject c{c1, y.x0, {c1, y.x0, 0, hstack(y.x.mat, f.phi0.mat)}, blocks};
  const Field& fld = y.x0.ambient()->field();
  Matrix inc = vstack(Matrix::identity(y.x1.total()->dim(), fld), Matrix(x.x0.total()->dim(), y.x1.total()->dim()));
  ArrowMorphism proj{y, c, 0, identity(y.x0), tm(y.x1, c1, 0, inc)};
  return {f, c, proj};
}

std::optional<ArrowMorphism> VvCokernel::factor(const ArrowMorphism& g) const {
  if (g.source.x0 != map.target.x0 || g.source.x1 != map.target.x1) throw StructuralError("factor: wrong source");
  const ArrowObject& z = g.target;
  const TwistedComplex& x0 = map.source.x0;
  int d = g.degree;
  auto hx = twisted_hom_complex(x0, z.x1);
  auto hz = twisted_hom_complex(x0, z.x0);
  Vec rhs = hz->coords(d, g.phi0.mat * map.phi0.mat);
  auto solve_in = [&](const std::vector<Matrix>& etas) -> std::optional<Matrix> {
    Matrix m(hz->dim(d), static_cast<int>(etas.size()));
    for (size_t k = 0; k < etas.size(); ++k) {
      Vec c = hz->coords(d, z.x.mat * etas[k]);
      for (int r = 0; r < m.rows(); ++r) m.at(r, static_cast<int>(k)) = c[r];
    }
    auto s = solve_linear(m, rhs);
    if (!s) return std::nullopt;
    Matrix eta(z.x1.total()->dim(), x0.total()->dim());
    for (size_t k = 0; k < etas.size(); ++k) eta.add_block(0, 0, etas[k], (*s)[k]);
    return eta;
  };
  std::vector<Matrix> cyc;
  for (const auto& c : hx->cycles(d)) cyc.push_back(c.mat);
  auto eta = solve_in(cyc);
  if (!eta) eta = solve_in(hx->basis(d));
  if (!eta) return std::nullopt;
  ArrowMorphism u{object, z, d, g.phi0, tm(object.x1, z.x1, d, hstack(g.phi1.mat, *eta))};
  return u;
}

Cokernel concretize(const ArrowObject& a) { return cokernel(a.x.as_map()); }

}  // namespace dgcat
