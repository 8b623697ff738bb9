#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>

#include "dgcat/dgbimod.hpp"

namespace dgcat {

// A generating 1-morphism: a word in the atom bimodules, optionally cut down
// by a registered split idempotent.  The empty word is the identity bimodule.
struct Gen {
  std::vector<int> word;
  int split = -1;
  friend bool operator==(const Gen& a, const Gen& b) { return a.word == b.word && a.split == b.split; }
  friend bool operator<(const Gen& a, const Gen& b) {
    return a.word != b.word ? a.word < b.word : a.split < b.split;
  }
};

struct Summand {
  Gen gen;
  int shift = 0;
  friend bool operator==(const Summand& a, const Summand& b) { return a.gen == b.gen && a.shift == b.shift; }
};

// The dg category of bimodules generated by a fixed list of atoms under
// relative composition over one algebra.  Composition of words is
// concatenation, hence strictly associative.
class Ambient {
 public:
  static std::shared_ptr<Ambient> make(AlgPtr a, std::vector<BimodPtr> atoms, std::vector<std::string> names);

  const AlgPtr& algebra() const { return alg_; }
  const Field& field() const { return alg_->field(); }
  int atom_count() const { return static_cast<int>(atoms_.size()); }
  const std::string& atom_name(int i) const { return names_[i]; }
  std::string name(const Gen& g) const;

  BimodPtr object(const Gen& g) const;
  BimodPtr object(const Summand& s) const { return shift(object(s.gen), s.shift); }
  Gen concat(const Gen& a, const Gen& b) const;
  // Summand of g cut out by an idempotent closed degree-0 endomorphism of object(g).
  Gen split(const Gen& g, const Matrix& e) const;
  // Word-level idempotent and its factorisation E = I P, P I = 1.
  Matrix split_idempotent_of(const Gen& g) const;
  Matrix inclusion(const Gen& g) const;
  Matrix projection(const Gen& g) const;

  // Underlying matrix of gamma o_0 delta : src1 src2 -> tgt1 tgt2 for maps of
  // shifted degrees p and q between shifted generators.
  Matrix hcomp(const Summand& src1, const Summand& tgt1, int p, const Matrix& gamma, const Summand& src2,
               const Summand& tgt2, int q, const Matrix& delta) const;

  const HomComplex& hom(const Gen& a, const Gen& b) const;

  void set_basics(std::vector<Gen> b) { basics_ = std::move(b); }
  const std::vector<Gen>& basics() const { return basics_; }

  // Realisation of a plain word: the left-nested relative tensor product.
  struct Realized {
    BimodPtr object;
    std::vector<std::vector<int>> tuples;  // atom basis indices of each basis vector
    std::shared_ptr<Quotient> step;        // prefix (x)_A last atom, for words of length >= 2
  };
  const Realized& realize(const std::vector<int>& word) const;

 private:
  Ambient() = default;
  struct SplitData {
    std::vector<int> word;
    Matrix e, inc, proj;
    BimodPtr object;
  };
  Matrix word_hcomp(const std::vector<int>& u, const std::vector<int>& u2, const Matrix& gamma,
                    const std::vector<int>& v, const std::vector<int>& v2, const Matrix& delta,
                    const std::function<long(int)>& sign_exp) const;
  Vec pure_class(const std::vector<int>& word, const std::vector<int>& tuple) const;
  Vec extend(const std::vector<int>& prefix, const Vec& x, const std::vector<int>& suffix, const std::vector<int>& tuple) const;
  int register_split(const std::vector<int>& word, const Matrix& e) const;

  AlgPtr alg_;
  std::vector<BimodPtr> atoms_;
  std::vector<std::string> names_;
  std::vector<Gen> basics_;
  mutable std::recursive_mutex mu_;
  mutable std::map<std::vector<int>, std::unique_ptr<Realized>> real_;
  mutable std::vector<SplitData> splits_;
  mutable std::map<std::pair<Gen, Gen>, std::unique_ptr<HomComplex>> homs_;
  mutable std::map<std::pair<std::vector<int>, std::vector<int>>, Vec> pure_cache_;
};
using AmbPtr = std::shared_ptr<const Ambient>;

// One-sided twisted complex.  alpha[(k, l)], k < l, is the underlying matrix of
// the component summand l -> summand k, of shifted degree +1.
class TwistedComplex {
 public:
  TwistedComplex() = default;
  TwistedComplex(AmbPtr amb, std::vector<Summand> summands, std::map<std::pair<int, int>, Matrix> alpha = {});

  const AmbPtr& ambient() const { return amb_; }
  const std::vector<Summand>& summands() const { return sum_; }
  const std::map<std::pair<int, int>, Matrix>& alpha() const { return alpha_; }
  int size() const { return static_cast<int>(sum_.size()); }
  const BimodPtr& total() const { return total_; }
  const std::vector<int>& offsets() const { return off_; }
  int block_dim(int k) const;
  // Twist component k <- l, zero if absent.
  Matrix component(int k, int l) const;

  friend bool operator==(const TwistedComplex& a, const TwistedComplex& b);
  friend bool operator!=(const TwistedComplex& a, const TwistedComplex& b) { return !(a == b); }

 private:
  AmbPtr amb_;
  std::vector<Summand> sum_;
  std::map<std::pair<int, int>, Matrix> alpha_;
  std::vector<int> off_;
  BimodPtr total_;
};

TwistedComplex single(const AmbPtr& amb, const Gen& g, int shift = 0);
TwistedComplex zero_complex(const AmbPtr& amb);

// Morphisms are stored as matrices between the total bimodules.
struct TwistedMorphism {
  TwistedComplex source, target;
  int degree = 0;
  Matrix mat;

  Matrix block(int n, int m) const;
  BimoduleMap as_map() const { return {source.total(), target.total(), degree, mat}; }
};

TwistedMorphism identity(const TwistedComplex& x);
TwistedMorphism zero_morphism(const TwistedComplex& x, const TwistedComplex& y, int degree = 0);
TwistedMorphism compose(const TwistedMorphism& g, const TwistedMorphism& f);
TwistedMorphism differential(const TwistedMorphism& f);
TwistedMorphism operator+(const TwistedMorphism& a, const TwistedMorphism& b);
TwistedMorphism operator-(const TwistedMorphism& a, const TwistedMorphism& b);
TwistedMorphism operator*(const Scalar& s, const TwistedMorphism& f);
// Assemble a morphism from underlying component matrices (n, m) : m -> n.
TwistedMorphism from_blocks(const TwistedComplex& x, const TwistedComplex& y, int degree,
                            const std::map<std::pair<int, int>, Matrix>& blocks);

AlgebraReport mc_check(const TwistedComplex& x);
AlgebraReport check_twisted_morphism(const TwistedMorphism& f);

TwistedComplex direct_sum(const TwistedComplex& x, const TwistedComplex& y);
TwistedComplex shift_twisted(const TwistedComplex& x, int k);
// The iso shift(cone f, k) -> cone(shift f, k); the two differ by a sign on the source part.
TwistedMorphism shift_morphism(const TwistedMorphism& f, int k);

struct Cone {
  TwistedComplex object;
  TwistedMorphism in;           // Y -> C_f
  TwistedMorphism out;          // C_f<-1> -> X
  TwistedMorphism in_homotopy;  // d(in_homotopy) = in o f
  TwistedMorphism out_homotopy; // d(out_homotopy) = f o out
};
Cone cone(const TwistedMorphism& f);

// Summands ordered lexicographically, twist alpha o_0 id + id o_0 alpha'.
TwistedComplex compose(const TwistedComplex& x, const TwistedComplex& y);
// Horizontal composite of morphisms of twisted complexes.
TwistedMorphism hcompose(const TwistedMorphism& f, const TwistedMorphism& g);

std::shared_ptr<HomComplex> twisted_hom_complex(const TwistedComplex& x, const TwistedComplex& y);

}  // namespace dgcat
