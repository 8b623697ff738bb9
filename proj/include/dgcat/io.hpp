#pragma once

#include <map>
#include <string>

#include "json.hpp"

#include "dgcat/homotopy.hpp"
#include "dgcat/zoo.hpp"

namespace dgcat {

using json = nlohmann::json;

// Raised on malformed input; distinct from StructuralError so callers can map
// it to the parse-error exit code.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Field field_from_json(const json& j);  // "Q" or {"Fp": p}
json field_to_json(const Field& f);

// Matrices are sparse triples [row, col, "coeff"]; the shape comes from context.
Matrix matrix_from_json(const json& j, int rows, int cols, const Field& f);
json matrix_to_json(const Matrix& m);

// {"field", "basis": [{"name", "degree"}], "unit": [[i, "c"]],
//  "mult": [[i, j, k, "c"]] (e_i e_j has c at e_k), "diff": [[i, j, "c"]] (d e_i has c at e_j)}
AlgPtr algebra_from_json(const json& j, const Field& fallback = {});
json algebra_to_json(const DgAlgebra& a);

// Named examples: "k", "dual", "D", "Rprime", "Z<n>".
AlgPtr zoo_algebra(const std::string& name, const Field& f = {});

// Ambient 2-categories for twisted complexes:
//   {"type": "zigzag", "n": n, "field": ...}, {"type": "algebra", "algebra": <algebra>}
//   or {"type": "algebra", "zoo": name, "field": ...}.
struct AmbientSpec {
  json spec;
  AmbPtr amb;
};
AmbientSpec ambient_from_json(const json& j, const Field& fallback = {});
// The zigzag category behind the {"type": "zigzag"} ambient, shared so that
// complexes built in code and parsed from files live in the same ambient.
std::shared_ptr<const ZigzagCategory> shared_zigzag(int n, const Field& f = {});
json zigzag_ambient_json(int n, const Field& f = {});

// {"summands": [{"word": [atom, ...], "shift": k}], "alpha": [{"k", "l", "matrix"}]}, k < l.
TwistedComplex complex_from_json(const json& j, const AmbPtr& amb);
json complex_to_json(const TwistedComplex& x);
TwistedMorphism morphism_from_json(const json& j, const TwistedComplex& s, const TwistedComplex& t);
json morphism_to_json(const TwistedMorphism& f);

// {"kind": "certificate", "ambient", "source", "target", "f", "g", "h_src", "h_tgt"}
json certificate_to_json(const Certificate& c, const json& ambient);
Certificate certificate_from_json(const json& j);

struct CheckEntry {
  std::string kind, name;
  AlgebraReport report;
};

// Named objects from one input file.  Bimodules reference algebras by name:
// {"left": name, "right": name, "basis", "left_action": [[a, i, j, "c"]]
// (e_a m_i has c at m_j), "right_action": [[b, i, j, "c"]], "diff"}.
struct NamedBimodule {
  std::string left, right;
  BimodPtr module;
};

struct Workspace {
  Field field;
  unsigned seed = 0;
  std::map<std::string, AlgPtr> algebras;
  std::map<std::string, NamedBimodule> bimodules;
  std::map<std::string, std::pair<json, TwistedComplex>> complexes;  // ambient spec, complex
  std::map<std::string, std::pair<json, Certificate>> certificates;
};

// A file holding one algebra, one certificate, or a bundle with the keys
// "algebras", "bimodules", "complexes", "certificates".
Workspace workspace_from_json(const json& j);
json workspace_to_json(const Workspace& w);
// Axiom checks for every stored object, in name order per kind.
std::vector<CheckEntry> check_workspace(const Workspace& w);

}  // namespace dgcat
