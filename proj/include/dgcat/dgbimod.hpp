#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>

#include "dgcat/dgalg.hpp"

namespace dgcat {

class DgBimodule;
using BimodPtr = std::shared_ptr<const DgBimodule>;

// A finite-dimensional dg A-B-bimodule.  left_action[a] is the matrix of
// m -> e_a m, right_action[b] the matrix of m -> m e_b.
class DgBimodule {
 public:
  static BimodPtr make(AlgPtr left, AlgPtr right, GradedSpace space, std::vector<Matrix> left_action,
                       std::vector<Matrix> right_action, Matrix diff);

  const AlgPtr& left() const { return left_; }
  const AlgPtr& right() const { return right_; }
  const GradedSpace& space() const { return space_; }
  const Field& field() const { return space_.field; }
  int dim() const { return space_.dim(); }
  int degree(int i) const { return space_.degree(i); }
  const std::string& label(int i) const { return space_.basis[i].label; }
  const Matrix& diff() const { return diff_; }
  const Matrix& left_action(int a) const { return lact_[a]; }
  const Matrix& right_action(int b) const { return ract_[b]; }
  Matrix left_action(const Vec& a) const;
  Matrix right_action(const Vec& b) const;
  const std::vector<Matrix>& left_actions() const { return lact_; }
  const std::vector<Matrix>& right_actions() const { return ract_; }
  // Position of the idempotent e with e m = m (resp. m e = m), -1 if m is not homogeneous.
  int left_block(int i) const { return lblock_[i]; }
  int right_block(int i) const { return rblock_[i]; }

 private:
  DgBimodule() = default;
  AlgPtr left_, right_;
  GradedSpace space_;
  std::vector<Matrix> lact_, ract_;
  Matrix diff_;
  std::vector<int> lblock_, rblock_;
};

AlgebraReport check_dg_bimodule(const DgBimodule& m);
bool same_sides(const DgBimodule& m, const DgBimodule& n);

BimodPtr regular_bimodule(const AlgPtr& a);
BimodPtr regular_left(const AlgPtr& a);   // A as A-k
BimodPtr regular_right(const AlgPtr& a);  // A as k-A
BimodPtr zero_bimodule(const AlgPtr& left, const AlgPtr& right);
// Sub-bimodule spanned by the columns of `basis` (assumed closed under the actions and d).
BimodPtr submodule(const BimodPtr& m, const Matrix& basis, std::vector<std::string> labels = {});
// A e and e A for an idempotent e.
BimodPtr left_ideal(const AlgPtr& a, const Vec& e);
BimodPtr right_ideal(const AlgPtr& a, const Vec& e);

struct BimoduleMap {
  BimodPtr source, target;
  int degree = 0;
  Matrix mat;

  bool is_zero() const { return mat.is_zero(); }
};

BimoduleMap identity_map(const BimodPtr& m);
BimoduleMap zero_map(const BimodPtr& s, const BimodPtr& t, int degree = 0);
BimoduleMap compose(const BimoduleMap& g, const BimoduleMap& f);  // g after f
BimoduleMap hom_diff(const BimoduleMap& f);                        // d f - (-1)^|f| f d
bool is_closed(const BimoduleMap& f);
// Degree bookkeeping and f(a m) = (-1)^{|f||a|} a f(m), f(m b) = f(m) b.
AlgebraReport check_bimodule_map(const BimoduleMap& f);
BimoduleMap operator+(const BimoduleMap& a, const BimoduleMap& b);
BimoduleMap operator-(const BimoduleMap& a, const BimoduleMap& b);
BimoduleMap operator*(const Scalar& s, const BimoduleMap& f);

// Complex of finite-dimensional graded spaces; d.at(n) : C^n -> C^{n+1}.
struct ChainComplex {
  Field field;
  std::map<int, int> dims;
  std::map<int, Matrix> d;
  int dim(int n) const;
  Matrix diff(int n) const;
};

// Hom complex of bimodule maps, computed one degree at a time.  Coordinates
// of a map are its entries at the free positions of the constraint system.
class HomComplex {
 public:
  HomComplex(BimodPtr source, BimodPtr target);
  const BimodPtr& source() const { return src_; }
  const BimodPtr& target() const { return tgt_; }
  int min_degree() const { return lo_; }
  int max_degree() const { return hi_; }
  int dim(int d) const { return static_cast<int>(basis(d).size()); }
  const std::vector<Matrix>& basis(int d) const;
  Vec coords(int d, const Matrix& f) const;
  Matrix from_coords(int d, const Vec& c) const;
  Matrix differential(int d) const;  // dim(d+1) x dim(d)
  ChainComplex complex() const;
  std::vector<BimoduleMap> cycles(int d) const;

 private:
  struct Degree {
    std::vector<std::pair<int, int>> free;  // matrix positions
    std::vector<Matrix> basis;
  };
  const Degree& at(int d) const;
  BimodPtr src_, tgt_;
  int lo_ = 0, hi_ = -1;
  mutable std::mutex mu_;
  mutable std::map<int, std::unique_ptr<Degree>> cache_;
};

std::vector<Matrix> bimodule_maps(const BimodPtr& s, const BimodPtr& t, int degree);

// M (x)_k N with Koszul signs: (a c)(m n) = (-1)^{|c||m|} am cn.
BimodPtr tensor_over_k(const BimodPtr& m, const BimodPtr& n);
// (f (x) g)(x y) = (-1)^{|g||x|} f(x) g(y), on tensor_over_k objects.
BimoduleMap tensor_maps_k(const BimoduleMap& f, const BimoduleMap& g, const BimodPtr& src, const BimodPtr& tgt);

struct Quotient {
  BimodPtr object;
  Matrix proj;              // dim(object) x dim(ambient)
  std::vector<int> kept;    // ambient basis vectors forming the basis of the quotient
  Matrix lift() const;      // section: unit vectors at `kept`
};

// Quotient of m by the sub-bimodule spanned by `rows` (closed under actions and d).
Quotient quotient(const BimodPtr& m, const std::vector<SparseVec>& rows);

// M (x)_B N as the cokernel of rho (x) id - id (x) lambda on M (x)_k B (x)_k N.
// Pair (i, j) sits at index i * dim(N) + j of the ambient.
Quotient tensor_over_algebra(const BimodPtr& m, const BimodPtr& n);
BimoduleMap tensor_maps(const BimoduleMap& f, const BimoduleMap& g, const Quotient& src, const Quotient& tgt);

BimodPtr dual(const BimodPtr& m);
BimodPtr shift(const BimodPtr& m, int k);
BimoduleMap shift_map(const BimoduleMap& f, const BimodPtr& src, const BimodPtr& tgt, int k);

struct Cokernel {
  BimodPtr object;
  BimoduleMap proj;
  Matrix section;
  // The unique u with u proj = g, for a closed g killing the image.
  std::optional<BimoduleMap> factor(const BimoduleMap& g) const;
};
Cokernel cokernel(const BimoduleMap& f);

struct Splitting {
  BimodPtr object;
  BimoduleMap inclusion, projection;
};
Splitting split_idempotent(const BimoduleMap& e);

struct DirectSum {
  BimodPtr object;
  std::vector<int> offsets;
};
DirectSum direct_sum(const std::vector<BimodPtr>& parts, const std::vector<std::string>& prefixes = {});

// A closed degree-0 isomorphism m -> n and its inverse, searched among Z^0
// basis elements and seeded random combinations.
struct Isomorphism {
  BimoduleMap forward, backward;
};
std::optional<Isomorphism> find_isomorphism(const BimodPtr& m, const BimodPtr& n, unsigned seed = 0, int tries = 64);

}  // namespace dgcat
