#include "dgcat/linalg.hpp"

#include <algorithm>
#include <sstream>

namespace dgcat {

namespace {

mpq_class reduce_mod(const mpq_class& q, std::uint32_t p) {
  mpz_class m(p);
  mpz_class num = q.get_num() % m;
  if (num < 0) num += m;
  mpz_class den = q.get_den() % m;
  if (den == 0) throw std::domain_error("denominator divisible by the field characteristic");
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t());
  mpz_class r = (num * inv) % m;
  return mpq_class(r);
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Scalar::Scalar(const mpq_class& v, std::uint32_t p) : v_(v), p_(p) {
  v_.canonicalize();
  if (p_) v_ = reduce_mod(v_, p_);
}

void Scalar::lift_to(std::uint32_t p) {
  if (p == p_ || p == 0) return;
  if (p_ != 0) throw StructuralError("scalars from different prime fields");
  p_ = p;
  v_ = reduce_mod(v_, p);
}

Scalar Scalar::operator-() const {
  Scalar r = *this;
  if (p_) {
    if (!r.is_zero()) r.v_ = mpq_class(p_) - r.v_;
  } else {
    r.v_ = -r.v_;
  }
  return r;
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero");
  Scalar r = *this;
  if (p_) {
    mpz_class inv, m(p_);
    mpz_invert(inv.get_mpz_t(), v_.get_num().get_mpz_t(), m.get_mpz_t());
    r.v_ = mpq_class(inv);
  } else {
    r.v_ = 1 / v_;
  }
  return r;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  if (o.is_zero()) return *this;
  std::uint32_t p = std::max(p_, o.p_);
  lift_to(p);
  if (o.p_ == p) {
    v_ += o.v_;
  } else {
    v_ += reduce_mod(o.v_, p);
  }
  if (p_ && v_ >= p_) v_ -= p_;
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) { return *this += -o; }

Scalar& Scalar::operator*=(const Scalar& o) {
  std::uint32_t p = std::max(p_, o.p_);
  lift_to(p);
  if (o.p_ == p) {
    v_ *= o.v_;
  } else {
    v_ *= reduce_mod(o.v_, p);
  }
  if (p_) v_ = reduce_mod(v_, p_);
  return *this;
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (a.p_ == b.p_) return a.v_ == b.v_;
  std::uint32_t p = std::max(a.p_, b.p_);
  mpq_class x = a.p_ ? a.v_ : reduce_mod(a.v_, p);
  mpq_class y = b.p_ ? b.v_ : reduce_mod(b.v_, p);
  return x == y;
}

std::string Scalar::str() const { return v_.get_str(); }

Field Field::prime(std::uint32_t p) {
  if (!is_prime(p)) throw std::invalid_argument("not a prime: " + std::to_string(p));
  return Field{p};
}

Scalar Field::parse(const std::string& s) const {
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad coefficient '" + s + "'");
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
  q.canonicalize();
  return Scalar(q, p);
}

std::string Field::name() const { return p ? "F" + std::to_string(p) : "Q"; }

// ---------------------------------------------------------------------------

Matrix Matrix::identity(int n, const Field& f) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = f.one();
  return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<long>>& rows, const Field& f) {
  int r = static_cast<int>(rows.size());
  int c = r ? static_cast<int>(rows[0].size()) : 0;
  Matrix m(r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows[i].size()) != c) throw StructuralError("ragged matrix");
    for (int j = 0; j < c; ++j) m.at(i, j) = f.make(rows[i][j]);
  }
  return m;
}

Matrix Matrix::from_columns(const std::vector<Vec>& cols, int rows) {
  Matrix m(rows, static_cast<int>(cols.size()));
  for (size_t j = 0; j < cols.size(); ++j) {
    if (static_cast<int>(cols[j].size()) != rows) throw StructuralError("column length mismatch");
    for (int i = 0; i < rows; ++i) m.at(i, static_cast<int>(j)) = cols[j][i];
  }
  return m;
}

bool Matrix::is_zero() const {
  for (const auto& x : a_)
    if (!x.is_zero()) return false;
  return true;
}

Matrix Matrix::transpose() const {
  Matrix t(c_, r_);
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < c_; ++j) t.at(j, i) = at(i, j);
  return t;
}

Vec Matrix::column(int j) const {
  Vec v(r_);
  for (int i = 0; i < r_; ++i) v[i] = at(i, j);
  return v;
}

Vec Matrix::row(int i) const {
  return Vec(a_.begin() + static_cast<long>(i) * c_, a_.begin() + static_cast<long>(i + 1) * c_);
}

SparseVec Matrix::sparse_row(int i) const {
  SparseVec s;
  for (int j = 0; j < c_; ++j)
    if (!at(i, j).is_zero()) s.emplace_back(j, at(i, j));
  return s;
}

Vec Matrix::apply(const Vec& x) const {
  if (static_cast<int>(x.size()) != c_) throw StructuralError("apply: dimension mismatch");
  Vec y(r_);
  for (int j = 0; j < c_; ++j) {
    if (x[j].is_zero()) continue;
    for (int i = 0; i < r_; ++i)
      if (!at(i, j).is_zero()) y[i] += at(i, j) * x[j];
  }
  return y;
}

Matrix Matrix::block(int r0, int c0, int nr, int nc) const {
  Matrix b(nr, nc);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nc; ++j) b.at(i, j) = at(r0 + i, c0 + j);
  return b;
}

void Matrix::set_block(int r0, int c0, const Matrix& b) {
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) at(r0 + i, c0 + j) = b.at(i, j);
}

void Matrix::add_block(int r0, int c0, const Matrix& b, const Scalar& s) {
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j)
      if (!b.at(i, j).is_zero()) at(r0 + i, c0 + j) += s * b.at(i, j);
}

Matrix Matrix::select_columns(const std::vector<int>& js) const {
  Matrix m(r_, static_cast<int>(js.size()));
  for (int i = 0; i < r_; ++i)
    for (size_t k = 0; k < js.size(); ++k) m.at(i, static_cast<int>(k)) = at(i, js[k]);
  return m;
}

Matrix Matrix::select_rows(const std::vector<int>& is) const {
  Matrix m(static_cast<int>(is.size()), c_);
  for (size_t k = 0; k < is.size(); ++k)
    for (int j = 0; j < c_; ++j) m.at(static_cast<int>(k), j) = at(is[k], j);
  return m;
}

Matrix& Matrix::operator+=(const Matrix& o) {
  if (r_ != o.r_ || c_ != o.c_) throw StructuralError("matrix sum: dimension mismatch");
  for (size_t k = 0; k < a_.size(); ++k)
    if (!o.a_[k].is_zero()) a_[k] += o.a_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  if (r_ != o.r_ || c_ != o.c_) throw StructuralError("matrix difference: dimension mismatch");
  for (size_t k = 0; k < a_.size(); ++k)
    if (!o.a_[k].is_zero()) a_[k] -= o.a_[k];
  return *this;
}

Matrix& Matrix::operator*=(const Scalar& s) {
  for (auto& x : a_)
    if (!x.is_zero()) x *= s;
  return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.c_ != b.r_)
    throw StructuralError("matrix product: " + std::to_string(a.r_) + "x" + std::to_string(a.c_) +
                          " times " + std::to_string(b.r_) + "x" + std::to_string(b.c_));
  Matrix p(a.r_, b.c_);
  for (int i = 0; i < a.r_; ++i)
    for (int k = 0; k < a.c_; ++k) {
      const Scalar& x = a.at(i, k);
      if (x.is_zero()) continue;
      for (int j = 0; j < b.c_; ++j) {
        const Scalar& y = b.at(k, j);
        if (!y.is_zero()) p.at(i, j) += x * y;
      }
    }
  return p;
}

bool operator==(const Matrix& a, const Matrix& b) {
  if (a.r_ != b.r_ || a.c_ != b.c_) return false;
  for (size_t k = 0; k < a.a_.size(); ++k)
    if (a.a_[k] != b.a_[k]) return false;
  return true;
}

std::string Matrix::str() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < r_; ++i) {
    os << (i ? ", [" : "[");
    for (int j = 0; j < c_; ++j) os << (j ? ", " : "") << at(i, j).str();
    os << "]";
  }
  os << "]";
  return os.str();
}

Matrix hstack(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw StructuralError("hstack: row mismatch");
  Matrix m(a.rows(), a.cols() + b.cols());
  m.set_block(0, 0, a);
  m.set_block(0, a.cols(), b);
  return m;
}

Matrix vstack(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw StructuralError("vstack: column mismatch");
  Matrix m(a.rows() + b.rows(), a.cols());
  m.set_block(0, 0, a);
  m.set_block(a.rows(), 0, b);
  return m;
}

Matrix direct_sum(const Matrix& a, const Matrix& b) {
  Matrix m(a.rows() + b.rows(), a.cols() + b.cols());
  m.set_block(0, 0, a);
  m.set_block(a.rows(), a.cols(), b);
  return m;
}

SparseVec to_sparse(const Vec& v) {
  SparseVec s;
  for (size_t i = 0; i < v.size(); ++i)
    if (!v[i].is_zero()) s.emplace_back(static_cast<int>(i), v[i]);
  return s;
}

Vec to_dense(const SparseVec& v, int n) {
  Vec d(n);
  for (const auto& [i, x] : v) d[i] = x;
  return d;
}

void axpy(SparseVec& y, const Scalar& a, const SparseVec& x) {
  if (a.is_zero() || x.empty()) return;
  SparseVec out;
  out.reserve(y.size() + x.size());
  size_t i = 0, j = 0;
  while (i < y.size() || j < x.size()) {
    if (j == x.size() || (i < y.size() && y[i].first < x[j].first)) {
      out.push_back(std::move(y[i++]));
    } else if (i == y.size() || x[j].first < y[i].first) {
      out.emplace_back(x[j].first, a * x[j].second);
      ++j;
    } else {
      Scalar s = y[i].second + a * x[j].second;
      if (!s.is_zero()) out.emplace_back(y[i].first, std::move(s));
      ++i;
      ++j;
    }
  }
  y = std::move(out);
}

// ---------------------------------------------------------------------------

int RowEchelon::find(int col) const {
  auto it = std::lower_bound(piv_.begin(), piv_.end(), col);
  if (it == piv_.end() || *it != col) return -1;
  return static_cast<int>(it - piv_.begin());
}

bool RowEchelon::is_pivot(int col) const { return find(col) >= 0; }

SparseVec RowEchelon::reduce(const SparseVec& v) const {
  SparseVec r = v;
  for (const auto& [c, x] : v) {
    int k = find(c);
    if (k >= 0) axpy(r, -x, prow_[k]);
  }
  return r;
}

bool RowEchelon::add(const SparseVec& row) {
  for (const auto& e : row)
    if (e.first < 0 || e.first >= n_) throw StructuralError("row index out of range");
  SparseVec r = reduce(row);
  if (r.empty()) return false;
  int lead = r.front().first;
  Scalar inv = r.front().second.inverse();
  for (auto& e : r) e.second *= inv;
  for (auto& p : prow_) {
    auto it = std::lower_bound(p.begin(), p.end(), lead,
                               [](const std::pair<int, Scalar>& e, int c) { return e.first < c; });
    if (it != p.end() && it->first == lead) {
      Scalar x = it->second;
      axpy(p, -x, r);
    }
  }
  auto pos = std::lower_bound(piv_.begin(), piv_.end(), lead);
  long k = pos - piv_.begin();
  piv_.insert(pos, lead);
  prow_.insert(prow_.begin() + k, std::move(r));
  return true;
}

std::vector<int> RowEchelon::pivots() const { return piv_; }

std::vector<int> RowEchelon::free_columns() const {
  std::vector<int> f;
  size_t k = 0;
  for (int c = 0; c < n_; ++c) {
    if (k < piv_.size() && piv_[k] == c) {
      ++k;
      continue;
    }
    f.push_back(c);
  }
  return f;
}

const SparseVec& RowEchelon::pivot_row(int col) const {
  int k = find(col);
  if (k < 0) throw std::out_of_range("not a pivot column");
  return prow_[k];
}

std::vector<SparseVec> RowEchelon::rows() const { return prow_; }

std::vector<Vec> RowEchelon::null_space() const {
  std::vector<Vec> basis;
  for (int f : free_columns()) {
    Vec x(n_);
    x[f] = 1;
    for (size_t k = 0; k < piv_.size(); ++k) {
      const SparseVec& p = prow_[k];
      auto it = std::lower_bound(p.begin(), p.end(), f,
                                 [](const std::pair<int, Scalar>& e, int c) { return e.first < c; });
      if (it != p.end() && it->first == f) x[piv_[k]] = -it->second;
    }
    basis.push_back(std::move(x));
  }
  return basis;
}

RrefResult rref_rank_kernel(const Matrix& m) {
  RrefResult res;
  RowEchelon rows(m.cols());
  for (int i = 0; i < m.rows(); ++i) rows.add(m.sparse_row(i));
  res.rank = rows.rank();
  res.pivots = rows.pivots();
  res.kernel_basis = rows.null_space();
  res.rref = Matrix(m.rows(), m.cols());
  auto rs = rows.rows();
  for (size_t k = 0; k < rs.size(); ++k)
    for (const auto& [j, x] : rs[k]) res.rref.at(static_cast<int>(k), j) = x;
  RowEchelon cols(m.rows());
  for (int j = 0; j < m.cols(); ++j) cols.add(to_sparse(m.column(j)));
  for (const auto& r : cols.rows()) res.image_basis.push_back(to_dense(r, m.rows()));
  return res;
}

int rank(const Matrix& m) {
  RowEchelon rows(m.cols());
  for (int i = 0; i < m.rows(); ++i) rows.add(m.sparse_row(i));
  return rows.rank();
}

std::vector<Vec> kernel_basis(const Matrix& m) {
  RowEchelon rows(m.cols());
  for (int i = 0; i < m.rows(); ++i) rows.add(m.sparse_row(i));
  return rows.null_space();
}

std::optional<Vec> solve_linear(const Matrix& m, const Vec& b) {
  if (static_cast<int>(b.size()) != m.rows()) throw StructuralError("solve_linear: rhs length mismatch");
  int n = m.cols();
  RowEchelon rows(n + 1);
  for (int i = 0; i < m.rows(); ++i) {
    SparseVec r = m.sparse_row(i);
    if (!b[i].is_zero()) r.emplace_back(n, b[i]);
    rows.add(r);
  }
  if (rows.is_pivot(n)) return std::nullopt;
  Vec x(n);
  for (int p : rows.pivots()) {
    const SparseVec& r = rows.pivot_row(p);
    if (!r.empty() && r.back().first == n) x[p] = r.back().second;
  }
  return x;
}

std::optional<Matrix> solve_matrix(const Matrix& m, const Matrix& b) {
  if (b.rows() != m.rows()) throw StructuralError("solve_matrix: rhs row mismatch");
  int n = m.cols(), k = b.cols();
  RowEchelon rows(n + k);
  for (int i = 0; i < m.rows(); ++i) {
    SparseVec r = m.sparse_row(i);
    for (int j = 0; j < k; ++j)
      if (!b.at(i, j).is_zero()) r.emplace_back(n + j, b.at(i, j));
    rows.add(r);
  }
  auto piv = rows.pivots();
  if (!piv.empty() && piv.back() >= n) return std::nullopt;
  Matrix x(n, k);
  for (int p : piv)
    for (const auto& [j, v] : rows.pivot_row(p))
      if (j >= n) x.at(p, j - n) = v;
  return x;
}

std::optional<Matrix> inverse(const Matrix& m) {
  if (m.rows() != m.cols()) return std::nullopt;
  if (rank(m) != m.rows()) return std::nullopt;
  Matrix id(m.rows(), m.rows());
  for (int i = 0; i < m.rows(); ++i) id.at(i, i) = 1;
  return solve_matrix(m, id);
}

std::string format_vec(const Vec& v) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i].str();
  os << ")";
  return os.str();
}

}  // namespace dgcat
