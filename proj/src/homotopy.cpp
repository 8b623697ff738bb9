#include "dgcat/homotopy.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace dgcat {

namespace {

std::vector<int> range(int start, int n) {
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = start + i;
  return v;
}

Scalar small_random(std::mt19937& rng, const Field& f) { return f.make(static_cast<long>(rng() % 7) - 3); }

// Twisted complex on `summands` whose total differential is d, if d is upper
// triangular with the base differentials on the diagonal.
std::optional<TwistedComplex> complex_from_total(const AmbPtr& amb, const std::vector<Summand>& summands,
                                                 const Matrix& d) {
  std::vector<int> off, dims;
  int o = 0;
  for (const auto& s : summands) {
    off.push_back(o);
    dims.push_back(amb->object(s)->dim());
    o += dims.back();
  }
  std::map<std::pair<int, int>, Matrix> alpha;
  for (size_t k = 0; k < summands.size(); ++k)
    for (size_t l = k + 1; l < summands.size(); ++l) {
      Matrix b = d.block(off[k], off[l], dims[k], dims[l]);
      if (!b.is_zero()) alpha[{static_cast<int>(k), static_cast<int>(l)}] = b;
    }
  TwistedComplex x(amb, summands, alpha);
  if (x.total()->diff() != d) return std::nullopt;
  return x;
}

Matrix identity_like(const TwistedComplex& x) { return Matrix::identity(x.total()->dim(), x.ambient()->field()); }

void drop_empty(TwistedComplex& cur, Certificate& cert) {
  std::vector<Summand> keep;
  std::map<int, int> pos;
  for (int k = 0; k < cur.size(); ++k)
    if (cur.block_dim(k) > 0) {
      pos[k] = static_cast<int>(keep.size());
      keep.push_back(cur.summands()[k]);
    }
  if (static_cast<int>(keep.size()) == cur.size()) return;
  std::map<std::pair<int, int>, Matrix> alpha;
  for (const auto& [kl, m] : cur.alpha()) alpha[{pos.at(kl.first), pos.at(kl.second)}] = m;
  TwistedComplex next(cur.ambient(), keep, alpha);
  Matrix id = identity_like(cur);
  Certificate step{{cur, next, 0, id}, {next, cur, 0, id}, zero_morphism(cur, cur, -1), zero_morphism(next, next, -1)};
  cert = compose_certificates(cert, step);
  cur = next;
}

struct SplitPair {
  Matrix pi, iota;
};

std::optional<SplitPair> find_split(const Ambient& amb, const Gen& x, const Gen& b, int j, std::mt19937& rng) {
  const HomComplex& hxb = amb.hom(x, b);
  const HomComplex& hbx = amb.hom(b, x);
  if (!hxb.dim(j) || !hbx.dim(-j)) return std::nullopt;
  auto zp = hxb.cycles(j), zi = hbx.cycles(-j);
  if (zp.empty() || zi.empty()) return std::nullopt;
  for (const auto& p : zp)
    for (const auto& i : zi)
      if (inverse(p.mat * i.mat)) return SplitPair{p.mat, i.mat};
  const Field& f = amb.field();
  for (int t = 0; t < 64; ++t) {
    Matrix p(zp[0].mat.rows(), zp[0].mat.cols()), i(zi[0].mat.rows(), zi[0].mat.cols());
    for (const auto& z : zp) p.add_block(0, 0, z.mat, small_random(rng, f));
    for (const auto& z : zi) i.add_block(0, 0, z.mat, small_random(rng, f));
    if (inverse(p * i)) return SplitPair{p, i};
  }
  return std::nullopt;
}

// Replaces one summand X<s> by B<s+j> (+) X' where X = B<j> (+) X'.  Returns
// false if no generator admits a basic summand.
bool split_off_basic(TwistedComplex& cur, Certificate& cert, std::mt19937& rng) {
  const AmbPtr& ambp = cur.ambient();
  const Ambient& amb = *ambp;
  const auto& basics = amb.basics();
  for (int k = 0; k < cur.size(); ++k) {
    const Summand& sk = cur.summands()[k];
    const Gen& x = sk.gen;
    if (std::find(basics.begin(), basics.end(), x) != basics.end()) continue;
    for (const Gen& b : basics) {
      const HomComplex& hxb = amb.hom(x, b);
      for (int j = hxb.min_degree(); j <= hxb.max_degree(); ++j) {
        auto sp = find_split(amb, x, b, j, rng);
        if (!sp) continue;
        Matrix inv = *inverse(sp->pi * sp->iota);
        Matrix e = sp->iota * inv * sp->pi;
        int dx = cur.block_dim(k);
        Gen rest = amb.split(x, Matrix::identity(dx, amb.field()) - e);
        int drest = amb.object(rest)->dim();
        int db = amb.object(b)->dim();

        std::vector<Summand> ns;
        for (int m = 0; m < k; ++m) ns.push_back(cur.summands()[m]);
        ns.push_back({b, sk.shift + j});
        if (drest > 0) ns.push_back({rest, sk.shift});
        for (int m = k + 1; m < cur.size(); ++m) ns.push_back(cur.summands()[m]);

        int n_old = cur.total()->dim();
        int n_new = n_old - dx + db + drest;
        Matrix phi(n_new, n_old), psi(n_old, n_new);
        int ok = cur.offsets()[k];
        for (int i = 0; i < ok; ++i) phi.at(i, i) = psi.at(i, i) = amb.field().one();
        phi.set_block(ok, ok, sp->pi);
        psi.set_block(ok, ok, sp->iota * inv);
        if (drest > 0) {
          phi.set_block(ok + db, ok, amb.projection(rest) * amb.inclusion(x));
          psi.set_block(ok, ok + db, amb.projection(x) * amb.inclusion(rest));
        }
        for (int i = ok + dx; i < n_old; ++i) phi.at(i - dx + db + drest, i) = psi.at(i, i - dx + db + drest) = amb.field().one();
        auto next = complex_from_total(ambp, ns, phi * cur.total()->diff() * psi);
        if (!next) continue;
        Certificate step{{cur, *next, 0, phi}, {*next, cur, 0, psi}, zero_morphism(cur, cur, -1),
                         zero_morphism(*next, *next, -1)};
        cert = compose_certificates(cert, step);
        cur = *next;
        return true;
      }
    }
  }
  return false;
}

// Cancels one invertible twist component.  Returns false if none is left.
bool cancel_one(TwistedComplex& cur, Certificate& cert) {
  std::vector<std::pair<int, int>> pairs;
  for (const auto& [kl, m] : cur.alpha())
    if (m.rows() == m.cols()) pairs.push_back(kl);
  std::stable_sort(pairs.begin(), pairs.end(), [](auto a, auto b) { return a.second - a.first < b.second - b.first; });
  const Matrix& d = cur.total()->diff();
  for (auto [k, l] : pairs) {
    auto phi_inv = inverse(cur.component(k, l));
    if (!phi_inv) continue;
    std::vector<int> ia = range(cur.offsets()[k], cur.block_dim(k));
    std::vector<int> ib = range(cur.offsets()[l], cur.block_dim(l));
    std::vector<int> iw;
    std::vector<Summand> ns;
    for (int m = 0; m < cur.size(); ++m) {
      if (m == k || m == l) continue;
      ns.push_back(cur.summands()[m]);
      auto r = range(cur.offsets()[m], cur.block_dim(m));
      iw.insert(iw.end(), r.begin(), r.end());
    }
    Matrix d_wb = d.select_rows(iw).select_columns(ib);
    Matrix d_aw = d.select_rows(ia).select_columns(iw);
    Matrix d_ww = d.select_rows(iw).select_columns(iw);
    Matrix corr_left = d_wb * *phi_inv;   // W <- A
    Matrix corr_right = *phi_inv * d_aw;  // B <- W
    auto next = complex_from_total(cur.ambient(), ns, d_ww - corr_left * d_aw);
    if (!next) continue;
    int nc = cur.total()->dim(), nw = static_cast<int>(iw.size());
    const Field& fld = cur.ambient()->field();
    Matrix f(nw, nc), g(nc, nw), h(nc, nc);
    for (int r = 0; r < nw; ++r) {
      f.at(r, iw[r]) = fld.one();
      g.at(iw[r], r) = fld.one();
      for (size_t c = 0; c < ia.size(); ++c) f.at(r, ia[c]) = -corr_left.at(r, static_cast<int>(c));
    }
    for (size_t r = 0; r < ib.size(); ++r) {
      for (int c = 0; c < nw; ++c) g.at(ib[r], c) = -corr_right.at(static_cast<int>(r), c);
      for (size_t c = 0; c < ia.size(); ++c) h.at(ib[r], ia[c]) = -phi_inv->at(static_cast<int>(r), static_cast<int>(c));
    }
    Certificate step{{cur, *next, 0, f}, {*next, cur, 0, g}, {cur, cur, -1, h}, zero_morphism(*next, *next, -1)};
    cert = compose_certificates(cert, step);
    cur = *next;
    return true;
  }
  return false;
}

ChainComplex window(const HomComplex& h, int n) {
  ChainComplex c{h.source()->field(), {}, {}};
  for (int d = n - 1; d <= n + 1; ++d)
    if (h.dim(d)) c.dims[d] = h.dim(d);
  for (int d = n - 1; d <= n; ++d)
    if (h.dim(d) && h.dim(d + 1)) c.d[d] = h.differential(d);
  return c;
}

}  // namespace

Cohomology cohomology(const ChainComplex& c, int n) {
  Matrix dn = c.diff(n), dprev = c.diff(n - 1);
  if (c.dim(n) && c.dim(n - 1) && c.dim(n + 1) && !(dn * dprev).is_zero())
    throw StructuralError("cohomology: d^2 != 0 at degree " + std::to_string(n));
  Cohomology h;
  if (!c.dim(n)) return h;
  RowEchelon im(c.dim(n));
  for (int j = 0; j < dprev.cols(); ++j) im.add(dprev.column(j));
  std::vector<Vec> ker = c.dim(n + 1) ? kernel_basis(dn) : kernel_basis(Matrix(0, c.dim(n)));
  for (const auto& z : ker)
    if (im.add(z)) h.representatives.push_back(z);
  h.dim = static_cast<int>(h.representatives.size());
  return h;
}

std::map<int, int> cohomology_dims(const ChainComplex& c) {
  std::map<int, int> out;
  for (const auto& [n, d] : c.dims)
    if (d) out[n] = cohomology(c, n).dim;
  return out;
}

ChainComplex underlying_complex(const DgBimodule& m) {
  ChainComplex c{m.field(), {}, {}};
  std::map<int, std::vector<int>> idx;
  for (int i = 0; i < m.dim(); ++i) idx[m.degree(i)].push_back(i);
  for (const auto& [n, v] : idx) c.dims[n] = static_cast<int>(v.size());
  for (const auto& [n, v] : idx) {
    auto it = idx.find(n + 1);
    if (it != idx.end()) c.d[n] = m.diff().select_rows(it->second).select_columns(v);
  }
  return c;
}

std::optional<BimoduleMap> null_homotopy_witness(const BimoduleMap& f) {
  if (!is_closed(f)) throw StructuralError("null_homotopy_witness: morphism is not closed");
  auto rep = check_bimodule_map(f);
  if (!rep.passed) throw StructuralError("null_homotopy_witness: not a bimodule map: " + rep.summary());
  if (f.is_zero()) return zero_map(f.source, f.target, f.degree - 1);
  HomComplex h(f.source, f.target);
  if (!h.dim(f.degree - 1)) return std::nullopt;
  auto x = solve_linear(h.differential(f.degree - 1), h.coords(f.degree, f.mat));
  if (!x) return std::nullopt;
  BimoduleMap out{f.source, f.target, f.degree - 1, h.from_coords(f.degree - 1, *x)};
  if (hom_diff(out).mat != f.mat) return std::nullopt;
  return out;
}

std::optional<TwistedMorphism> null_homotopy_witness(const TwistedMorphism& f) {
  auto h = null_homotopy_witness(f.as_map());
  if (!h) return std::nullopt;
  return TwistedMorphism{f.source, f.target, f.degree - 1, h->mat};
}

Acyclicity is_acyclic_object(const BimodPtr& m) {
  auto h = null_homotopy_witness(identity_map(m));
  return {h.has_value(), h};
}

Acyclicity is_acyclic_object(const TwistedComplex& x) { return is_acyclic_object(x.total()); }

Matrix ChainMap::at(int n) const {
  auto it = f.find(n);
  if (it != f.end()) return it->second;
  return Matrix(target.dim(n), source.dim(n));
}

bool is_quasi_isomorphism(const ChainMap& f) {
  std::set<int> deg;
  for (const auto& [n, d] : f.source.dims) deg.insert(n);
  for (const auto& [n, d] : f.target.dims) deg.insert(n);
  for (int n : deg)
    if (f.target.diff(n) * f.at(n) != f.at(n + 1) * f.source.diff(n))
      throw StructuralError("is_quasi_isomorphism: not a chain map at degree " + std::to_string(n));
  // cone^n = target^n (+) source^{n+1}
  ChainComplex cone{f.source.field, {}, {}};
  std::set<int> cdeg;
  for (int n : deg) {
    cdeg.insert(n);
    cdeg.insert(n - 1);
  }
  for (int n : cdeg) {
    int dn = f.target.dim(n) + f.source.dim(n + 1);
    if (dn) cone.dims[n] = dn;
  }
  for (int n : cdeg) {
    Matrix d(f.target.dim(n + 1) + f.source.dim(n + 2), f.target.dim(n) + f.source.dim(n + 1));
    d.set_block(0, 0, f.target.diff(n));
    d.set_block(0, f.target.dim(n), f.at(n + 1));
    d.set_block(f.target.dim(n + 1), f.target.dim(n), Scalar(-1) * f.source.diff(n + 1));
    if (d.rows() && d.cols()) cone.d[n] = d;
  }
  for (const auto& [n, h] : cohomology_dims(cone))
    if (h) return false;
  return true;
}

bool is_quasi_isomorphism(const BimoduleMap& f) {
  if (f.degree != 0) throw StructuralError("is_quasi_isomorphism: degree must be 0");
  if (!is_closed(f)) throw StructuralError("is_quasi_isomorphism: morphism is not closed");
  auto rep = check_bimodule_map(f);
  if (!rep.passed) throw StructuralError("is_quasi_isomorphism: " + rep.summary());
  ChainMap c{underlying_complex(*f.source), underlying_complex(*f.target), {}};
  std::map<int, std::vector<int>> si, ti;
  for (int i = 0; i < f.source->dim(); ++i) si[f.source->degree(i)].push_back(i);
  for (int i = 0; i < f.target->dim(); ++i) ti[f.target->degree(i)].push_back(i);
  for (const auto& [n, v] : si) {
    auto it = ti.find(n);
    if (it != ti.end()) c.f[n] = f.mat.select_rows(it->second).select_columns(v);
  }
  return is_quasi_isomorphism(c);
}

// ---------------------------------------------------------------------------

AlgebraReport verify_certificate(const Certificate& c) {
  AlgebraReport rep;
  int ns = c.f.source.total()->dim(), nt = c.f.target.total()->dim();
  auto shape_ok = [](const TwistedMorphism& m, int rows, int cols) {
    return m.mat.rows() == rows && m.mat.cols() == cols && m.source.total()->dim() == cols &&
           m.target.total()->dim() == rows;
  };
  if (!shape_ok(c.f, nt, ns) || !shape_ok(c.g, ns, nt) || !shape_ok(c.h_src, ns, ns) || !shape_ok(c.h_tgt, nt, nt)) {
    rep.add({"shape", {}, "certificate matrices do not fit the complexes"});
    return rep;
  }
  if (c.f.degree != 0 || c.g.degree != 0 || c.h_src.degree != -1 || c.h_tgt.degree != -1)
    rep.add({"degree", {}, "f, g need degree 0 and homotopies degree -1"});
  const char* names[] = {"f", "g", "h_src", "h_tgt"};
  const TwistedMorphism* ms[] = {&c.f, &c.g, &c.h_src, &c.h_tgt};
  for (int i = 0; i < 4; ++i) {
    auto r = check_bimodule_map(ms[i]->as_map());
    if (!r.passed) rep.add({"bimodule_map", {names[i]}, r.summary()});
  }
  if (!differential(c.f).mat.is_zero()) rep.add({"closed_f", {}, "d(f) != 0"});
  if (!differential(c.g).mat.is_zero()) rep.add({"closed_g", {}, "d(g) != 0"});
  const Field& fld = c.f.source.ambient()->field();
  if (c.g.mat * c.f.mat - Matrix::identity(ns, fld) != differential(c.h_src).mat)
    rep.add({"source_homotopy", {}, "g f - 1 != d(h_src)"});
  if (c.f.mat * c.g.mat - Matrix::identity(nt, fld) != differential(c.h_tgt).mat)
    rep.add({"target_homotopy", {}, "f g - 1 != d(h_tgt)"});
  return rep;
}

Certificate identity_certificate(const TwistedComplex& x) {
  return {identity(x), identity(x), zero_morphism(x, x, -1), zero_morphism(x, x, -1)};
}

Certificate invert(const Certificate& c) { return {c.g, c.f, c.h_tgt, c.h_src}; }

Certificate compose_certificates(const Certificate& c1, const Certificate& c2) {
  Certificate c;
  c.f = compose(c2.f, c1.f);
  c.g = compose(c1.g, c2.g);
  c.h_src = c1.h_src + compose(c1.g, compose(c2.h_src, c1.f));
  c.h_tgt = c2.h_tgt + compose(c2.f, compose(c1.h_tgt, c2.g));
  return c;
}

Reduction gaussian_reduce(const TwistedComplex& x, unsigned seed) {
  std::mt19937 rng(seed);
  TwistedComplex cur = x;
  Certificate cert = identity_certificate(x);
  drop_empty(cur, cert);
  while (split_off_basic(cur, cert, rng)) drop_empty(cur, cert);
  while (cancel_one(cur, cert)) {
  }
  return {cur, cert};
}

const char* to_string(Verdict::Kind k) {
  switch (k) {
    case Verdict::Equivalent: return "Equivalent";
    case Verdict::NotEquivalent: return "NotEquivalent";
    default: return "Unknown";
  }
}

Verdict homotopy_equivalent(const TwistedComplex& x, const TwistedComplex& y, const SearchOptions& opt) {
  if (x.ambient() != y.ambient()) throw StructuralError("homotopy_equivalent: different ambient categories");
  Verdict v;
  if (x == y) {
    v.kind = Verdict::Equivalent;
    v.certificate = identity_certificate(x);
    return v;
  }
  Reduction rx = gaussian_reduce(x, opt.seed), ry = gaussian_reduce(y, opt.seed);
  auto finish = [&](const Certificate& mid) {
    Certificate c = compose_certificates(compose_certificates(rx.certificate, mid), invert(ry.certificate));
    if (!verify_certificate(c).passed) return false;
    v.kind = Verdict::Equivalent;
    v.certificate = c;
    return true;
  };
  if (rx.minimal == ry.minimal && finish(identity_certificate(rx.minimal))) return v;

  const TwistedComplex& a = rx.minimal;
  const TwistedComplex& b = ry.minimal;
  HomComplex hab(a.total(), b.total()), hba(b.total(), a.total());
  HomComplex haa(a.total(), a.total()), hbb(b.total(), b.total());

  std::vector<Matrix> candidates;
  Cohomology h0 = cohomology(window(hab, 0), 0);
  for (const auto& r : h0.representatives) candidates.push_back(hab.from_coords(0, r));
  std::mt19937 rng(opt.seed);
  const Field& fld = x.ambient()->field();
  if (h0.dim > 1)
    for (int t = 0; t < opt.budget; ++t) {
      Vec c(h0.dim);
      for (auto& e : c) e = small_random(rng, fld);
      Vec full(hab.dim(0), fld.zero());
      for (int i = 0; i < h0.dim; ++i)
        for (int j = 0; j < hab.dim(0); ++j) full[j] += c[i] * h0.representatives[i][j];
      candidates.push_back(hab.from_coords(0, full));
    }
  if (candidates.empty()) candidates.push_back(Matrix(b.total()->dim(), a.total()->dim()));

  std::vector<Matrix> zg;
  if (hba.dim(0)) {
    Matrix dz = hba.dim(1) ? hba.differential(0) : Matrix(0, hba.dim(0));
    for (const auto& k : kernel_basis(dz)) zg.push_back(hba.from_coords(0, k));
  }
  int nz = static_cast<int>(zg.size()), na = haa.dim(-1), nb = hbb.dim(-1);
  int ra = haa.dim(0), rb = hbb.dim(0);
  Matrix daa = na && ra ? haa.differential(-1) : Matrix(ra, na);
  Matrix dbb = nb && rb ? hbb.differential(-1) : Matrix(rb, nb);
  Vec rhs = haa.coords(0, identity_like(a));
  Vec rhs_b = hbb.coords(0, identity_like(b));
  rhs.insert(rhs.end(), rhs_b.begin(), rhs_b.end());

  for (const Matrix& f : candidates) {
    Matrix sys(ra + rb, nz + na + nb);
    for (int i = 0; i < nz; ++i) {
      Vec ca = haa.coords(0, zg[i] * f), cb = hbb.coords(0, f * zg[i]);
      for (int r = 0; r < ra; ++r) sys.at(r, i) = ca[r];
      for (int r = 0; r < rb; ++r) sys.at(ra + r, i) = cb[r];
    }
    sys.set_block(0, nz, Scalar(-1) * daa);
    sys.set_block(ra, nz + na, Scalar(-1) * dbb);
    auto sol = solve_linear(sys, rhs);
    if (!sol) continue;
    Matrix g(a.total()->dim(), b.total()->dim());
    for (int i = 0; i < nz; ++i) g.add_block(0, 0, zg[i], (*sol)[i]);
    Vec ha(sol->begin() + nz, sol->begin() + nz + na), hb(sol->begin() + nz + na, sol->end());
    Certificate mid{{a, b, 0, f},
                    {b, a, 0, g},
                    {a, a, -1, na ? haa.from_coords(-1, ha) : Matrix(a.total()->dim(), a.total()->dim())},
                    {b, b, -1, nb ? hbb.from_coords(-1, hb) : Matrix(b.total()->dim(), b.total()->dim())}};
    if (finish(mid)) return v;
  }

  // Obstructions: Hom(-, a) and Hom(-, b) must agree on a and b up to cohomology.
  auto ca = cohomology_dims(haa.complex()), cba = cohomology_dims(hba.complex());
  auto cab = cohomology_dims(hab.complex()), cb = cohomology_dims(hbb.complex());
  auto compare = [&](const std::map<int, int>& p, const std::map<int, int>& q, const std::string& pn,
                     const std::string& qn) {
    std::set<int> deg;
    for (auto [n, d] : p) deg.insert(n);
    for (auto [n, d] : q) deg.insert(n);
    for (int n : deg) {
      int dp = p.count(n) ? p.at(n) : 0, dq = q.count(n) ? q.at(n) : 0;
      if (dp != dq) {
        v.kind = Verdict::NotEquivalent;
        v.reason = "degree " + std::to_string(n) + ": dim H(" + pn + ") = " + std::to_string(dp) + " but dim H(" + qn +
                   ") = " + std::to_string(dq);
        return true;
      }
    }
    return false;
  };
  if (compare(ca, cba, "Hom(x,x)", "Hom(y,x)") || compare(cab, cb, "Hom(x,y)", "Hom(y,y)") ||
      compare(ca, cb, "Hom(x,x)", "Hom(y,y)"))
    return v;
  v.kind = Verdict::Unknown;
  v.reason = "no certificate found within the search budget";
  return v;
}

}  // namespace dgcat
