#pragma once

#include "dgcat/twisted.hpp"

namespace dgcat {

// X1 --x--> X0 with x closed of degree 0; stands for the cokernel of x.
// X1 is an ordered sum of blocks without twist between them; composites are
// formed blockwise, which keeps composition strictly associative.
struct ArrowObject {
  TwistedComplex x1, x0;
  TwistedMorphism x;
  std::vector<int> blocks;  // summand counts, summing to x1.size()

  static ArrowObject make(TwistedMorphism x);
  static ArrowObject free(const TwistedComplex& x0);  // 0 -> X0
};

// A pair (phi0, phi1) with phi0 x = y phi1.
struct ArrowMorphism {
  ArrowObject source, target;
  int degree = 0;
  TwistedMorphism phi0, phi1;
};

bool operator==(const ArrowObject& a, const ArrowObject& b);

ArrowMorphism vv_identity(const ArrowObject& a);
ArrowMorphism vv_compose(const ArrowMorphism& g, const ArrowMorphism& f);  // g after f
ArrowMorphism vv_differential(const ArrowMorphism& f);
bool commutes(const ArrowMorphism& f);

// Morphism space a -> b: pairs modulo those with phi0 = y eta.  A class is
// determined by phi0; each degree has a deterministic basis of
// representatives complementing the null subspace.
class VvHom {
 public:
  VvHom(ArrowObject a, ArrowObject b);
  const ArrowObject& source() const { return a_; }
  const ArrowObject& target() const { return b_; }
  int min_degree() const { return h00_->min_degree(); }
  int max_degree() const { return h00_->max_degree(); }
  int dim(int d) const { return static_cast<int>(at(d).reps.size()); }
  const std::vector<ArrowMorphism>& basis(int d) const { return at(d).reps; }
  // Class coordinates of a commuting pair; throws if phi0 admits no phi1.
  Vec coords(const ArrowMorphism& f) const;
  bool is_null(const ArrowMorphism& f) const;
  // Canonical representative of the class of f.
  ArrowMorphism canonical(const ArrowMorphism& f) const;
  Matrix differential(int d) const;
  ChainComplex complex() const;
  // Basis of commuting pairs with both components closed, degree 0.
  std::vector<ArrowMorphism> closed_pairs() const;

 private:
  struct Degree {
    std::vector<Vec> admissible;  // phi0 coordinates
    std::vector<Vec> null;
    std::vector<ArrowMorphism> reps;
    Matrix span;                  // columns: reps then null, in phi0 coordinates
  };
  const Degree& at(int d) const;
  ArrowMorphism pair_from(int d, const Vec& c0, const Vec& c1) const;
  ArrowObject a_, b_;
  std::shared_ptr<HomComplex> h00_, h11_, h10_, h01_;
  mutable std::mutex mu_;
  mutable std::map<int, std::unique_ptr<Degree>> cache_;
};

// (G1 -> G0)(H1 -> H0) = (G1H0 (+) G0H1 --[g o id, id o h]--> G0H0), with
// G0H1 taken block by block.
ArrowObject vv_compose(const ArrowObject& g, const ArrowObject& h);
ArrowMorphism vv_hcompose(const ArrowMorphism& phi, const ArrowMorphism& psi);
// Action of a 1-morphism on an object of the regular 2-representation; the
// same block formula as composition.
ArrowObject vv_action(const ArrowObject& g, const ArrowObject& m);

struct VvCokernel {
  ArrowMorphism map;         // f : X -> Y
  ArrowObject object;        // Y1 (+) X0 --(y, f0)--> Y0
  ArrowMorphism projection;  // Y -> object
  // u with u o projection = g, for g : Y -> Z with g o f null; nullopt otherwise.
  std::optional<ArrowMorphism> factor(const ArrowMorphism& g) const;
};
VvCokernel vv_cokernel(const ArrowMorphism& f);

// The bimodule cokernel of x on the total objects.
Cokernel concretize(const ArrowObject& a);

}  // namespace dgcat
