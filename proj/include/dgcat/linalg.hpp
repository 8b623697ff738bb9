#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dgcat {

// Raised when inputs do not fit together (dimension, algebra or field mismatch).
struct StructuralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An exact field element.  p == 0 means a rational number; otherwise the value
// is a residue in [0, p).  Values with p == 0 mix freely with residues: they
// are reduced on contact.
class Scalar {
 public:
  Scalar() = default;
  Scalar(long v) : v_(v) {}  // NOLINT: implicit on purpose
  Scalar(const mpq_class& v, std::uint32_t p);

  std::uint32_t modulus() const { return p_; }
  const mpq_class& value() const { return v_; }
  bool is_zero() const { return sgn(v_) == 0; }
  bool is_one() const { return v_ == 1; }

  Scalar operator-() const;
  Scalar inverse() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o) { return *this *= o.inverse(); }

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend bool operator==(const Scalar& a, const Scalar& b);
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  std::string str() const;

 private:
  void lift_to(std::uint32_t p);
  mpq_class v_{0};
  std::uint32_t p_ = 0;
};

struct Field {
  std::uint32_t p = 0;  // 0: rationals

  static Field rationals() { return {}; }
  static Field prime(std::uint32_t p);

  bool is_rational() const { return p == 0; }
  Scalar zero() const { return Scalar(mpq_class(0), p); }
  Scalar one() const { return Scalar(mpq_class(1), p); }
  Scalar make(long v) const { return Scalar(mpq_class(v), p); }
  Scalar make(const mpq_class& v) const { return Scalar(v, p); }
  // "a", "-a", "a/b"; residues are reduced.
  Scalar parse(const std::string& s) const;
  std::string name() const;

  friend bool operator==(const Field& a, const Field& b) { return a.p == b.p; }
  friend bool operator!=(const Field& a, const Field& b) { return a.p != b.p; }
};

bool is_prime(std::uint64_t n);

using Vec = std::vector<Scalar>;
using SparseVec = std::vector<std::pair<int, Scalar>>;  // sorted, no zeros

class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : r_(rows), c_(cols), a_(static_cast<size_t>(rows) * cols) {}

  static Matrix identity(int n, const Field& f = {});
  static Matrix from_rows(const std::vector<std::vector<long>>& rows, const Field& f = {});
  static Matrix from_columns(const std::vector<Vec>& cols, int rows);

  int rows() const { return r_; }
  int cols() const { return c_; }
  Scalar& at(int i, int j) { return a_[static_cast<size_t>(i) * c_ + j]; }
  const Scalar& at(int i, int j) const { return a_[static_cast<size_t>(i) * c_ + j]; }
  Scalar& operator()(int i, int j) { return at(i, j); }
  const Scalar& operator()(int i, int j) const { return at(i, j); }

  bool is_zero() const;
  Matrix transpose() const;
  Vec column(int j) const;
  Vec row(int i) const;
  SparseVec sparse_row(int i) const;
  Vec apply(const Vec& x) const;
  Matrix block(int r0, int c0, int nr, int nc) const;
  void set_block(int r0, int c0, const Matrix& b);
  void add_block(int r0, int c0, const Matrix& b, const Scalar& s = 1);
  Matrix select_columns(const std::vector<int>& js) const;
  Matrix select_rows(const std::vector<int>& is) const;

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(const Scalar& s);
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const Scalar& s) { return a *= s; }
  friend Matrix operator*(const Scalar& s, Matrix a) { return a *= s; }
  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend bool operator==(const Matrix& a, const Matrix& b);
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  std::string str() const;

 private:
  int r_ = 0, c_ = 0;
  std::vector<Scalar> a_;
};

Matrix hstack(const Matrix& a, const Matrix& b);
Matrix vstack(const Matrix& a, const Matrix& b);
Matrix direct_sum(const Matrix& a, const Matrix& b);

SparseVec to_sparse(const Vec& v);
Vec to_dense(const SparseVec& v, int n);
void axpy(SparseVec& y, const Scalar& a, const SparseVec& x);  // y += a x

// Incremental fully reduced row echelon form.  The reduced basis of a row
// space is unique, so results do not depend on insertion order.
class RowEchelon {
 public:
  explicit RowEchelon(int ncols = 0) : n_(ncols) {}
  int ncols() const { return n_; }
  int rank() const { return static_cast<int>(piv_.size()); }
  // Returns false if the row was already in the span.
  bool add(const SparseVec& row);
  bool add(const Vec& row) { return add(to_sparse(row)); }
  SparseVec reduce(const SparseVec& v) const;
  bool contains(const SparseVec& v) const { return reduce(v).empty(); }
  std::vector<int> pivots() const;
  std::vector<int> free_columns() const;
  const SparseVec& pivot_row(int col) const;
  bool is_pivot(int col) const;
  // Rows sorted by pivot column.
  std::vector<SparseVec> rows() const;
  // Basis of {x : row . x = 0 for all rows}, one vector per free column.
  std::vector<Vec> null_space() const;

 private:
  int n_;
  std::vector<int> piv_;                 // sorted pivot columns
  std::vector<SparseVec> prow_;          // aligned with piv_
  int find(int col) const;
};

struct RrefResult {
  int rank = 0;
  std::vector<Vec> kernel_basis;
  std::vector<Vec> image_basis;
  Matrix rref;
  std::vector<int> pivots;
};

RrefResult rref_rank_kernel(const Matrix& m);
int rank(const Matrix& m);
std::vector<Vec> kernel_basis(const Matrix& m);
std::optional<Vec> solve_linear(const Matrix& m, const Vec& b);
// Solves m X = B column by column; nullopt if any column is unsolvable.
std::optional<Matrix> solve_matrix(const Matrix& m, const Matrix& b);
std::optional<Matrix> inverse(const Matrix& m);

std::string format_vec(const Vec& v);

}  // namespace dgcat
