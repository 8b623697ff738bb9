#pragma once

#include <optional>

#include "dgcat/dgbimod.hpp"

namespace dgcat {

// C_A for A = A_1 x ... x A_n, realized on one object through the product
// algebra: 1-morphisms i -> j are bimodules supported on e_j (-) e_i.
struct TwoCategoryCA {
  std::vector<AlgPtr> factors;
  ProductAlgebra product;
  const AlgPtr& algebra() const { return product.algebra; }
  int objects() const { return static_cast<int>(factors.size()); }
  BimodPtr identity(int i) const;          // e_i A e_i
  BimodPtr generator(int j, int i) const;  // F_{j,i} = A e_j (x)_k e_i A
  BimodPtr natural_module(int i) const;    // A e_i, the object of the natural 2-representation at i
};
TwoCategoryCA two_category(const std::vector<AlgPtr>& factors);

// Objects of the natural 2-representation of C_A are dg A-k bimodules; a
// 1-morphism F acts by F (x)_A -.
BimodPtr evaluation(const BimodPtr& x, const BimodPtr& f);
// Ev on 2-morphisms: t (x)_A id_X, and on module maps: id_F (x)_A phi.
BimoduleMap evaluation_map(const BimoduleMap& t, const BimodPtr& x);
BimoduleMap evaluation_map(const BimodPtr& f, const BimoduleMap& phi);

// N (+) M<1> with the twist -f, as in the cone of twisted complexes.
BimodPtr cone_bimodule(const BimoduleMap& f);

// [X, Y] = Hom_k(X, Y) as an A-A bimodule: (a phi b)(m) = a phi(b m).  Basis
// element i * dim(X) + j sends x_j to y_i.
struct InternalHom {
  BimodPtr x, y, object;
  Quotient ev_domain;  // [X,Y] (x)_A X
  BimoduleMap ev;      // ev_domain.object -> Y

  // Hom(G, [X,Y]) -> Hom(G X, Y), g |-> ev (g (x) id)
  BimoduleMap phi(const BimoduleMap& g, const Quotient& gx) const;
  // Hom(G X, Y) -> Hom(G, [X,Y]), f |-> (gamma |-> (x |-> f(gamma (x) x)))
  BimoduleMap psi(const BimoduleMap& f, const Quotient& gx, const BimodPtr& g) const;
};
// Throws StructuralError naming the probe generator if Hom(G X, Y) and
// Hom(G, [X,Y]) differ in some degree; probes are A and A (x)_k A.
InternalHom internal_hom(const BimodPtr& x, const BimodPtr& y, bool verify = true);

// A dg algebra 1-morphism over the base algebra: carrier C (an A-A bimodule),
// unit u(1) and multiplication c_i c_k = column i of right_mult[k].
struct AlgebraOneMorphism {
  AlgPtr base;
  BimodPtr carrier;
  Vec unit;
  std::vector<Matrix> right_mult;

  Vec multiply(const Vec& a, const Vec& b) const;
  BimoduleMap unit_map() const;                 // A -> C
  BimoduleMap mult_map(const Quotient& cc) const;  // C (x)_A C -> C
};
AlgebraReport check_algebra_morphism(const AlgebraOneMorphism& a);
// The trivial algebra 1-morphism A on the regular bimodule.
AlgebraOneMorphism identity_algebra(const AlgPtr& a);
// e M for a central idempotent e of the left algebra.
BimodPtr idempotent_part(const BimodPtr& m, const Vec& e);
// eR (+) M with M M = 0, for a central idempotent e of R and an R-R bimodule
// M with e M e = M; e = 1 by default.
AlgebraOneMorphism square_zero_extension(const AlgPtr& r, const BimodPtr& m, std::optional<Vec> e = std::nullopt);
// For base k: the dg algebra with the same structure constants.
AlgPtr to_dg_algebra(const AlgebraOneMorphism& a);

// Right module over an algebra 1-morphism: m c_k = column of right_act[k].
struct ModuleOneMorphism {
  BimodPtr object;
  std::vector<Matrix> right_act;
  BimodPtr generator;             // G, for a free module G C
  std::optional<Quotient> free_on;  // G (x)_A C, for a free module
};
AlgebraReport check_module(const AlgebraOneMorphism& a, const ModuleOneMorphism& m);

struct InternalEnd {
  InternalHom hom;
  AlgebraOneMorphism algebra;
};
// A_X = [X, X] with unit and multiplication transported through psi.
InternalEnd internal_end_algebra(const BimodPtr& x);
// [X, Y] as a right A_X-module.
ModuleOneMorphism internal_hom_module(const InternalEnd& e, const InternalHom& xy);

// Free module G C with (g c) c' = g (c c').
ModuleOneMorphism free_module(const AlgebraOneMorphism& a, const BimodPtr& g);
// Cone of a closed degree-0 module map f : M -> N.
ModuleOneMorphism cone_module(const ModuleOneMorphism& m, const ModuleOneMorphism& n, const Matrix& f);
// Basis of the degree-d module maps M -> N.
std::vector<BimoduleMap> module_maps(const ModuleOneMorphism& m, const ModuleOneMorphism& n, int d);

struct FreeAdjunction {
  BimodPtr g;
  ModuleOneMorphism free;  // G C
  Matrix unit_in;          // G -> G C, gamma |-> gamma (x) u(1)
  // f |-> f (id_G o_0 u) and g |-> rho (g o_0 id_C).
  BimoduleMap restrict(const BimoduleMap& f) const;
  BimoduleMap extend(const BimoduleMap& g, const ModuleOneMorphism& y) const;
};
FreeAdjunction free_module_adjunction(const AlgebraOneMorphism& a, const BimodPtr& g);

// Free modules G C for the given 1-morphisms, followed by up to `cones` cones
// of closed degree-0 basis module maps between them.
std::vector<ModuleOneMorphism> module_category_objects(const AlgebraOneMorphism& a,
                                                       const std::vector<BimodPtr>& generators, int cones = 0);

// M o_A B for a morphism alpha : A -> B of algebra 1-morphisms.
AlgebraReport check_algebra_map(const AlgebraOneMorphism& a, const AlgebraOneMorphism& b, const BimoduleMap& alpha);
ModuleOneMorphism pushforward_algebra_map(const AlgebraOneMorphism& a, const AlgebraOneMorphism& b,
                                          const BimoduleMap& alpha, const ModuleOneMorphism& m);

// G [X,Y] -> [X, G Y], gamma (x) phi |-> (x |-> gamma (x) phi(x)).
struct CommutationIso {
  Quotient g_xy;      // G (x)_A [X,Y]
  BimodPtr x_gy;      // [X, G Y]
  BimoduleMap map;
  std::optional<Matrix> inverse;
};
CommutationIso internal_hom_commutation(const BimodPtr& g, const BimodPtr& x, const BimodPtr& y);

struct MoritaResult {
  bool equivalent = false;
  std::optional<Isomorphism> xy;  // X (x)_B Y ~ A
  std::optional<Isomorphism> yx;  // Y (x)_A X ~ B
  std::string reason;
};
// x is an A-B bimodule, y a B-A bimodule.
MoritaResult morita_verify(const AlgPtr& a, const AlgPtr& b, const BimodPtr& x, const BimodPtr& y);

// Module category data for ideal probes: the free modules G C.
struct RepData {
  AlgebraOneMorphism alg;
  std::vector<BimodPtr> generators;
};

struct ProbeMorphism {
  int source = 0, target = 0;  // probe indices
  BimoduleMap map;
};

// Graded subspaces of Hom(P_s, P_t) for all probe pairs.
struct IdealData {
  std::map<std::pair<int, int>, std::map<int, std::vector<Matrix>>> spans;
  bool partial = false;  // budget exhausted or an action left the probe set
  int dim(int s, int t) const;
  bool contains_identity(int p) const;
};

class IdealProbe {
 public:
  explicit IdealProbe(RepData rep);
  int probe_count() const { return static_cast<int>(probes_.size()); }
  const ModuleOneMorphism& probe(int i) const { return probes_[i]; }
  // All module maps P_s -> P_t, by degree.
  const std::map<int, std::vector<Matrix>>& homs(int s, int t) const;
  // Least ideal containing the seeds: closed under d, composition with probe
  // morphisms and the action of the generators.
  IdealData closure(const std::vector<ProbeMorphism>& seeds, int budget = 4096) const;
  // Seeds: each basis morphism between probes.
  std::vector<ProbeMorphism> basis_morphisms() const;

 private:
  RepData rep_;
  std::vector<ModuleOneMorphism> probes_;
  mutable std::map<std::pair<int, int>, std::map<int, std::vector<Matrix>>> homs_;
  // action_[g][p] = (q, s, iso from G P_p onto P_q<s>), when G P_p is a
  // shifted probe.  Maps keep their matrices; degrees move by the shifts.
  struct Action {
    int target = -1;
    int shift = 0;
    Quotient gp;
    Matrix to_probe, from_probe;
  };
  std::vector<std::vector<Action>> action_;
};

struct ProbeVerdict {
  enum Kind { NoProperIdealFound, ProperIdeal } kind = NoProperIdealFound;
  std::optional<ProbeMorphism> witness;
  IdealData ideal;
};
// Closes each basis morphism (then `budget` seeded random combinations) and
// reports the first seed whose ideal misses some probe identity.
ProbeVerdict quotient_simple_probe(const IdealProbe& probe, unsigned seed = 0, int budget = 8);

}  // namespace dgcat
