#pragma once

#include <optional>

#include "dgcat/twisted.hpp"

namespace dgcat {

struct Cohomology {
  int dim = 0;
  std::vector<Vec> representatives;  // cycles whose classes form a basis of H^n
};

// Throws StructuralError if d^n d^{n-1} != 0.
Cohomology cohomology(const ChainComplex& c, int n);
// All degrees in the support of c.
std::map<int, int> cohomology_dims(const ChainComplex& c);

// The underlying complex of vector spaces; degree-n basis = basis vectors of
// degree n in index order.
ChainComplex underlying_complex(const DgBimodule& m);

// h with d(h) = f, or nullopt when f is not a boundary.
std::optional<BimoduleMap> null_homotopy_witness(const BimoduleMap& f);
std::optional<TwistedMorphism> null_homotopy_witness(const TwistedMorphism& f);

struct Acyclicity {
  bool acyclic = false;
  std::optional<BimoduleMap> witness;  // d(h) = id
};
Acyclicity is_acyclic_object(const BimodPtr& m);
Acyclicity is_acyclic_object(const TwistedComplex& x);

// A degree-0 chain map between complexes of vector spaces.
struct ChainMap {
  ChainComplex source, target;
  std::map<int, Matrix> f;  // f.at(n) : source^n -> target^n
  Matrix at(int n) const;
};
bool is_quasi_isomorphism(const ChainMap& f);
// For a closed degree-0 map between dg bimodules, on underlying complexes.
bool is_quasi_isomorphism(const BimoduleMap& f);

// f : source -> target, g : target -> source, both closed of degree 0, with
// g f - 1 = d(h_src) and f g - 1 = d(h_tgt).
struct Certificate {
  TwistedMorphism f, g, h_src, h_tgt;
};
AlgebraReport verify_certificate(const Certificate& c);
Certificate identity_certificate(const TwistedComplex& x);
Certificate invert(const Certificate& c);
// c1 : x ~ y, c2 : y ~ z  gives  x ~ z.
Certificate compose_certificates(const Certificate& c1, const Certificate& c2);

struct Reduction {
  TwistedComplex minimal;
  Certificate certificate;  // input -> minimal
};
// Splits basic summands off the generators, then cancels invertible twist
// components until none is left.
Reduction gaussian_reduce(const TwistedComplex& x, unsigned seed = 0);

struct SearchOptions {
  unsigned seed = 0;
  int budget = 64;  // random candidates after the H^0 basis
};

struct Verdict {
  enum Kind { Equivalent, NotEquivalent, Unknown } kind = Unknown;
  std::optional<Certificate> certificate;
  std::string reason;
};
const char* to_string(Verdict::Kind k);

Verdict homotopy_equivalent(const TwistedComplex& x, const TwistedComplex& y, const SearchOptions& opt = {});

}  // namespace dgcat
