#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "dgcat/linalg.hpp"

namespace dgcat {

struct BasisElem {
  std::string label;
  int degree = 0;
};

struct GradedSpace {
  Field field;
  std::vector<BasisElem> basis;

  int dim() const { return static_cast<int>(basis.size()); }
  int degree(int i) const { return basis[i].degree; }
  int index_of(const std::string& label) const;  // -1 if absent
  std::vector<int> degrees() const;
  void validate() const;  // unique labels
};

GradedSpace shifted(const GradedSpace& s, int k);  // (V<k>)^n = V^{n+k}

struct Violation {
  std::string axiom;
  std::vector<std::string> witness;
  std::string detail;
};

struct AlgebraReport {
  bool passed = true;
  std::vector<Violation> violations;
  void add(Violation v);
  bool has(const std::string& axiom) const;
  std::string summary() const;
};

struct MultTerm {
  int i, j, k;
  Scalar c;
};

class DgAlgebra;
using AlgPtr = std::shared_ptr<const DgAlgebra>;

// A finite-dimensional dg algebra given by structure constants.  Construction
// validates only the shape of the tables; the axioms are checked separately.
class DgAlgebra {
 public:
  static AlgPtr make(GradedSpace space, Vec unit, std::vector<MultTerm> mult, Matrix diff);
  static AlgPtr ground(const Field& f);

  const GradedSpace& space() const { return space_; }
  const Field& field() const { return space_.field; }
  int dim() const { return space_.dim(); }
  int degree(int i) const { return space_.degree(i); }
  const std::string& label(int i) const { return space_.basis[i].label; }
  const Vec& unit() const { return unit_; }
  const Matrix& diff() const { return diff_; }
  const std::vector<MultTerm>& mult_terms() const { return terms_; }

  const SparseVec& product(int i, int j) const { return prod_[static_cast<size_t>(i) * dim() + j]; }
  Vec multiply(const Vec& a, const Vec& b) const;
  Vec basis_vector(int i) const;
  // Matrix of x -> e_a x and x -> x e_a.
  const Matrix& left_mult(int a) const { return lmat_[a]; }
  const Matrix& right_mult(int a) const { return rmat_[a]; }
  Matrix left_mult(const Vec& a) const;
  Matrix right_mult(const Vec& a) const;

  // Basis elements generating the algebra together with the unit.
  const std::vector<int>& generators() const { return gens_; }
  // Orthogonal idempotent basis elements summing to the unit, if the basis
  // contains such a family; otherwise empty.
  const std::vector<int>& idempotents() const { return idem_; }
  bool is_ground_field() const;

  AlgPtr with_diff(const Matrix& d) const;
  AlgPtr relabel(const std::vector<std::string>& labels) const;

 private:
  DgAlgebra() = default;
  void finish();
  GradedSpace space_;
  Vec unit_;
  std::vector<MultTerm> terms_;
  Matrix diff_;
  std::vector<SparseVec> prod_;
  std::vector<Matrix> lmat_, rmat_;
  std::vector<int> gens_, idem_;
};

AlgebraReport check_dg_algebra(const DgAlgebra& a);

struct Arrow {
  std::string name;
  int source = 0;
  int target = 0;
  int degree = 0;
};

struct Quiver {
  int vertices = 1;
  std::vector<std::string> vertex_names;  // defaults to 1..n
  std::vector<Arrow> arrows;
};

// A path is a sequence of arrow indices; an empty path at vertex v is e_v.
struct PathTerm {
  Scalar coeff;
  std::vector<int> arrows;
};
using Relation = std::vector<PathTerm>;

// Quotient of the path algebra by the two-sided ideal of the relations, which
// must be homogeneous in path length.  Paths compose left to right.
AlgPtr path_algebra(const Quiver& q, const std::vector<Relation>& relations, const Field& f = {},
                    int length_cap = 16);

struct ProductAlgebra {
  AlgPtr algebra;
  std::vector<Vec> central_idempotents;
  std::vector<int> offsets;
};

ProductAlgebra product_algebra(const std::vector<AlgPtr>& factors);

// A (x) B with the Koszul sign; returns the other factor when one is the ground field.
AlgPtr tensor_algebra(const AlgPtr& a, const AlgPtr& b);

// Algebra elements are compared as vectors; these helpers keep call sites short.
bool same_algebra(const AlgPtr& a, const AlgPtr& b);

}  // namespace dgcat
