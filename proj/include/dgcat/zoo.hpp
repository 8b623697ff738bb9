#pragma once

#include "dgcat/twisted.hpp"
#include "dgcat/twocat.hpp"

namespace dgcat {

// k[x]/(x^2) with |x| = -1 and d(x) = 1.
AlgPtr acyclic_d(const Field& f = {});
// k[x]/(x^2) with |x| = 0 and d = 0.
AlgPtr dual_numbers(const Field& f = {});
// The zigzag algebra on n >= 2 vertices, trivially graded.
AlgPtr zigzag(int n, const Field& f = {});
// Index of e_i, (i|i+1|i) style loop, and of the arrow paths of Z_n.
int zigzag_idempotent(const AlgPtr& z, int i);
int zigzag_loop(const AlgPtr& z, int i);

struct TianQuotient {
  AlgPtr r;     // k e_x x k e_y
  BimodPtr m;   // k e_y(x)e_x + k e_x(x)e_y<1>
};
TianQuotient tian_quotient(const Field& f = {});

// A complex of vector spaces as a k-k bimodule.
// Algebra 1-morphism 1_x (+) (e_x M'M' e_x)<-2> on the Tian quotient, with
// generators 1_x, e_y M' and e_x M'.
RepData tian_radical_rep(const Field& f = {});

BimodPtr dg_space(const GradedSpace& s, const Matrix& diff);
// End(V) = V* (x) V with E(i,j) E(k,l) = delta_jk E(i,l) and d the graded commutator.
AlgPtr matrix_dg_algebra(const BimodPtr& v);

// V as an End(V)-k bimodule, E(i,j) v_l = delta_jl v_i; e must be matrix_dg_algebra(v).
BimodPtr matrix_left_module(const AlgPtr& e, const BimodPtr& v);

// The 2-category C_A on one object: 1-morphisms built from A and F = A (x)_k A.
AmbPtr algebra_category(const AlgPtr& a);

struct ZigzagCategory {
  int n = 0;
  AlgPtr z;
  AmbPtr amb;                      // atoms P_i = Ze_i (x) e_iZ, named "P1".."Pn"
  std::vector<BimoduleMap> mult;   // P_i -> Z
  std::vector<BimoduleMap> coev;   // Z -> P_i, from the trace form
  Gen identity() const { return {}; }
  Gen atom(int i) const { return Gen{{i - 1}, -1}; }
};
std::shared_ptr<const ZigzagCategory> zigzag_category(int n, const Field& f = {});

struct BraidWord {
  int n = 0;
  std::vector<int> letters;  // +i or -i, 1 <= i <= n
};
BraidWord parse_braid_word(int n, const std::string& s);

// T_i = cone(P_i -> Z), T_i' = cone(Z -> P_i)<-1>, words composed left to right.
TwistedComplex ks_generator(const ZigzagCategory& c, int letter);
TwistedComplex ks_complex(const ZigzagCategory& c, const BraidWord& w);

}  // namespace dgcat
