#include "dgcat/io.hpp"

#include <mutex>

namespace dgcat {

namespace {

[[noreturn]] void fail(const std::string& what) { throw ParseError(what); }

const json& need(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(std::string("missing key '") + key + "'");
  return j.at(key);
}

int index_in(const json& j, int n, const char* what) {
  if (!j.is_number_integer()) fail(std::string(what) + ": expected an integer index");
  int i = j.get<int>();
  if (i < 0 || i >= n) fail(std::string(what) + ": index " + std::to_string(i) + " out of range");
  return i;
}

Scalar coeff(const json& j, const Field& f) {
  try {
    if (j.is_string()) return f.parse(j.get<std::string>());
    if (j.is_number_integer()) return f.make(j.get<long>());
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
  fail("coefficients must be strings \"a/b\" or integers");
}

GradedSpace space_from_json(const json& j, const Field& f) {
  GradedSpace s{f, {}};
  if (!j.is_array()) fail("basis must be an array");
  for (const auto& b : j) {
    const json& name = need(b, "name");
    const json& deg = need(b, "degree");
    if (!name.is_string() || !deg.is_number_integer()) fail("basis entries are {\"name\": string, \"degree\": int}");
    s.basis.push_back({name.get<std::string>(), deg.get<int>()});
  }
  try {
    s.validate();
  } catch (const std::exception& e) {
    fail(e.what());
  }
  return s;
}

json space_to_json(const GradedSpace& s) {
  json b = json::array();
  for (const auto& e : s.basis) b.push_back({{"name", e.label}, {"degree", e.degree}});
  return b;
}

// Triples [i, j, "c"] meaning: image of basis vector i has c at j.
Matrix images_from_json(const json& j, int n, const Field& f, const char* what) {
  Matrix m(n, n);
  if (!j.is_array()) fail(std::string(what) + " must be an array");
  for (const auto& t : j) {
    if (!t.is_array() || t.size() != 3) fail(std::string(what) + " entries are [i, j, \"c\"]");
    int i = index_in(t[0], n, what), k = index_in(t[1], n, what);
    m.at(k, i) += coeff(t[2], f);
  }
  return m;
}

json images_to_json(const Matrix& m) {
  json out = json::array();
  for (int i = 0; i < m.cols(); ++i)
    for (int k = 0; k < m.rows(); ++k)
      if (!m.at(k, i).is_zero()) out.push_back({i, k, m.at(k, i).str()});
  return out;
}

std::vector<Matrix> actions_from_json(const json& j, int na, int n, const Field& f, const char* what) {
  std::vector<Matrix> out(na, Matrix(n, n));
  if (!j.is_array()) fail(std::string(what) + " must be an array");
  for (const auto& t : j) {
    if (!t.is_array() || t.size() != 4) fail(std::string(what) + " entries are [a, i, j, \"c\"]");
    int a = index_in(t[0], na, what), i = index_in(t[1], n, what), k = index_in(t[2], n, what);
    out[a].at(k, i) += coeff(t[3], f);
  }
  return out;
}

json actions_to_json(const std::vector<Matrix>& ms) {
  json out = json::array();
  for (size_t a = 0; a < ms.size(); ++a)
    for (const auto& t : images_to_json(ms[a])) out.push_back({static_cast<int>(a), t[0], t[1], t[2]});
  return out;
}

std::recursive_mutex ambient_mu;
std::map<std::string, AmbPtr>& ambient_cache() {
  static std::map<std::string, AmbPtr> c;
  return c;
}

}  // namespace

Field field_from_json(const json& j) {
  if (j.is_string() && j.get<std::string>() == "Q") return Field::rationals();
  if (j.is_object() && j.contains("Fp") && j.at("Fp").is_number_unsigned()) {
    try {
      return Field::prime(j.at("Fp").get<std::uint32_t>());
    } catch (const std::exception& e) {
      fail(e.what());
    }
  }
  fail("field must be \"Q\" or {\"Fp\": p}");
}

json field_to_json(const Field& f) { return f.is_rational() ? json("Q") : json{{"Fp", f.p}}; }

Matrix matrix_from_json(const json& j, int rows, int cols, const Field& f) {
  Matrix m(rows, cols);
  if (!j.is_array()) fail("matrix must be an array of [row, col, \"c\"]");
  for (const auto& t : j) {
    if (!t.is_array() || t.size() != 3) fail("matrix entries are [row, col, \"c\"]");
    m.at(index_in(t[0], rows, "matrix row"), index_in(t[1], cols, "matrix column")) += coeff(t[2], f);
  }
  return m;
}

json matrix_to_json(const Matrix& m) {
  json out = json::array();
  for (int i = 0; i < m.rows(); ++i)
    for (int k = 0; k < m.cols(); ++k)
      if (!m.at(i, k).is_zero()) out.push_back({i, k, m.at(i, k).str()});
  return out;
}

AlgPtr algebra_from_json(const json& j, const Field& fallback) {
  Field f = j.contains("field") ? field_from_json(j.at("field")) : fallback;
  GradedSpace s = space_from_json(need(j, "basis"), f);
  int n = s.dim();
  if (n == 0) fail("algebra with empty basis");
  Vec unit(n, f.zero());
  const json& u = need(j, "unit");
  if (!u.is_array()) fail("unit must be a sparse vector [[i, \"c\"]]");
  for (const auto& t : u) {
    if (!t.is_array() || t.size() != 2) fail("unit entries are [i, \"c\"]");
    unit[index_in(t[0], n, "unit")] += coeff(t[1], f);
  }
  std::vector<MultTerm> mult;
  const json& m = need(j, "mult");
  if (!m.is_array()) fail("mult must be an array");
  for (const auto& t : m) {
    if (!t.is_array() || t.size() != 4) fail("mult entries are [i, j, k, \"c\"]");
    mult.push_back({index_in(t[0], n, "mult"), index_in(t[1], n, "mult"), index_in(t[2], n, "mult"), coeff(t[3], f)});
  }
  Matrix d = j.contains("diff") ? images_from_json(j.at("diff"), n, f, "diff") : Matrix(n, n);
  try {
    return DgAlgebra::make(s, unit, mult, d);
  } catch (const StructuralError& e) {
    fail(e.what());
  }
}

json algebra_to_json(const DgAlgebra& a) {
  json unit = json::array();
  for (int i = 0; i < a.dim(); ++i)
    if (!a.unit()[i].is_zero()) unit.push_back({i, a.unit()[i].str()});
  json mult = json::array();
  for (int i = 0; i < a.dim(); ++i)
    for (int k = 0; k < a.dim(); ++k)
      for (const auto& [t, c] : a.product(i, k)) mult.push_back({i, k, t, c.str()});
  return {{"field", field_to_json(a.field())},
          {"basis", space_to_json(a.space())},
          {"unit", unit},
          {"mult", mult},
          {"diff", images_to_json(a.diff())}};
}

AlgPtr zoo_algebra(const std::string& name, const Field& f) {
  if (name == "k") return DgAlgebra::ground(f);
  if (name == "dual") return dual_numbers(f);
  if (name == "D") return acyclic_d(f);
  if (name == "Rprime") return tian_quotient(f).r;
  if (name.size() > 1 && name[0] == 'Z') {
    size_t pos = 0;
    int n = 0;
    try {
      n = std::stoi(name.substr(1), &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos + 1 == name.size()) return zigzag(n, f);
  }
  throw ParseError("unknown algebra '" + name + "' (known: k, dual, D, Rprime, Z<n>)");
}

AmbientSpec ambient_from_json(const json& j, const Field& fallback) {
  Field f = j.contains("field") ? field_from_json(j.at("field")) : fallback;
  const json& type = need(j, "type");
  json spec;
  if (type == "zigzag") {
    const json& n = need(j, "n");
    if (!n.is_number_integer()) fail("zigzag ambient needs an integer n");
    spec = {{"type", "zigzag"}, {"n", n}, {"field", field_to_json(f)}};
  } else if (type == "algebra") {
    AlgPtr a = j.contains("zoo") ? zoo_algebra(need(j, "zoo").get<std::string>(), f) : algebra_from_json(need(j, "algebra"), f);
    spec = {{"type", "algebra"}, {"algebra", algebra_to_json(*a)}};
  } else {
    fail("ambient type must be \"zigzag\" or \"algebra\"");
  }
  std::lock_guard lock(ambient_mu);
  auto& slot = ambient_cache()[spec.dump()];
  if (!slot) {
    try {
      if (spec["type"] == "zigzag")
        slot = shared_zigzag(spec["n"].get<int>(), f)->amb;
      else
        slot = algebra_category(algebra_from_json(spec["algebra"]));
    } catch (const StructuralError& e) {
      fail(e.what());
    }
  }
  return {spec, slot};
}

std::shared_ptr<const ZigzagCategory> shared_zigzag(int n, const Field& f) {
  static std::map<std::pair<int, std::uint32_t>, std::shared_ptr<const ZigzagCategory>> cache;
  std::lock_guard lock(ambient_mu);
  auto& c = cache[{n, f.p}];
  if (!c) c = zigzag_category(n, f);
  return c;
}

json zigzag_ambient_json(int n, const Field& f) { return {{"type", "zigzag"}, {"n", n}, {"field", field_to_json(f)}}; }

TwistedComplex complex_from_json(const json& j, const AmbPtr& amb) {
  std::vector<Summand> sums;
  const json& s = need(j, "summands");
  if (!s.is_array()) fail("summands must be an array");
  for (const auto& e : s) {
    Summand x;
    for (const auto& a : need(e, "word")) x.gen.word.push_back(index_in(a, amb->atom_count(), "atom"));
    if (e.contains("split") && e.at("split") != -1) fail("split generators cannot be serialized");
    const json& sh = need(e, "shift");
    if (!sh.is_number_integer()) fail("shift must be an integer");
    x.shift = sh.get<int>();
    sums.push_back(x);
  }
  TwistedComplex shape(amb, sums);
  std::map<std::pair<int, int>, Matrix> alpha;
  if (j.contains("alpha")) {
    for (const auto& e : j.at("alpha")) {
      int k = index_in(need(e, "k"), shape.size(), "alpha k"), l = index_in(need(e, "l"), shape.size(), "alpha l");
      if (k >= l) fail("alpha component (" + std::to_string(k) + ", " + std::to_string(l) + ") violates k < l");
      if (alpha.count({k, l})) fail("duplicate alpha component");
      alpha[{k, l}] = matrix_from_json(need(e, "matrix"), shape.block_dim(k), shape.block_dim(l), amb->field());
    }
  }
  try {
    return TwistedComplex(amb, sums, alpha);
  } catch (const StructuralError& e) {
    fail(e.what());
  }
}

json complex_to_json(const TwistedComplex& x) {
  json s = json::array();
  for (const auto& e : x.summands()) {
    if (e.gen.split >= 0) throw StructuralError("split generators cannot be serialized");
    s.push_back({{"word", e.gen.word}, {"shift", e.shift}});
  }
  json a = json::array();
  for (const auto& [kl, m] : x.alpha())
    if (!m.is_zero()) a.push_back({{"k", kl.first}, {"l", kl.second}, {"matrix", matrix_to_json(m)}});
  return {{"summands", s}, {"alpha", a}};
}

TwistedMorphism morphism_from_json(const json& j, const TwistedComplex& s, const TwistedComplex& t) {
  const json& d = need(j, "degree");
  if (!d.is_number_integer()) fail("degree must be an integer");
  return {s, t, d.get<int>(), matrix_from_json(need(j, "matrix"), t.total()->dim(), s.total()->dim(), s.ambient()->field())};
}

json morphism_to_json(const TwistedMorphism& f) { return {{"degree", f.degree}, {"matrix", matrix_to_json(f.mat)}}; }

json certificate_to_json(const Certificate& c, const json& ambient) {
  return {{"kind", "certificate"},     {"ambient", ambient},
          {"source", complex_to_json(c.f.source)}, {"target", complex_to_json(c.f.target)},
          {"f", morphism_to_json(c.f)}, {"g", morphism_to_json(c.g)},
          {"h_src", morphism_to_json(c.h_src)}, {"h_tgt", morphism_to_json(c.h_tgt)}};
}

Certificate certificate_from_json(const json& j) {
  AmbientSpec amb = ambient_from_json(need(j, "ambient"));
  auto x = complex_from_json(need(j, "source"), amb.amb);
  auto y = complex_from_json(need(j, "target"), amb.amb);
  return {morphism_from_json(need(j, "f"), x, y), morphism_from_json(need(j, "g"), y, x),
          morphism_from_json(need(j, "h_src"), x, x), morphism_from_json(need(j, "h_tgt"), y, y)};
}

Workspace workspace_from_json(const json& j) {
  if (!j.is_object()) fail("input must be a JSON object");
  Workspace w;
  if (j.contains("field")) w.field = field_from_json(j.at("field"));
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) fail("seed must be a non-negative integer");
    w.seed = j.at("seed").get<unsigned>();
  }
  if (j.contains("basis")) {
    w.algebras["algebra"] = algebra_from_json(j, w.field);
    return w;
  }
  if (j.value("kind", "") == "certificate") {
    w.certificates["certificate"] = {j.at("ambient"), certificate_from_json(j)};
    return w;
  }
  auto section = [&](const char* key) -> const json& {
    static const json empty = json::object();
    if (!j.contains(key)) return empty;
    if (!j.at(key).is_object()) fail(std::string(key) + " must map names to objects");
    return j.at(key);
  };
  for (const auto& [name, a] : section("algebras").items()) {
    if (a.is_string())
      w.algebras[name] = zoo_algebra(a.get<std::string>(), w.field);
    else
      w.algebras[name] = algebra_from_json(a, w.field);
  }
  for (const auto& [name, b] : section("bimodules").items()) {
    auto side = [&](const char* key) {
      const json& v = need(b, key);
      if (!v.is_string() || !w.algebras.count(v.get<std::string>()))
        fail("bimodule " + name + ": " + key + " must name an algebra in this file");
      return v.get<std::string>();
    };
    std::string l = side("left"), r = side("right");
    AlgPtr la = w.algebras.at(l), ra = w.algebras.at(r);
    if (la->field() != ra->field()) fail("bimodule " + name + ": algebras over different fields");
    const Field& f = la->field();
    GradedSpace s = space_from_json(need(b, "basis"), f);
    int n = s.dim();
    auto lact = actions_from_json(need(b, "left_action"), la->dim(), n, f, "left_action");
    auto ract = actions_from_json(need(b, "right_action"), ra->dim(), n, f, "right_action");
    Matrix d = b.contains("diff") ? images_from_json(b.at("diff"), n, f, "diff") : Matrix(n, n);
    try {
      w.bimodules[name] = {l, r, DgBimodule::make(la, ra, s, lact, ract, d)};
    } catch (const StructuralError& e) {
      fail("bimodule " + name + ": " + e.what());
    }
  }
  for (const auto& [name, c] : section("complexes").items()) {
    AmbientSpec amb = ambient_from_json(need(c, "ambient"), w.field);
    w.complexes[name] = {amb.spec, complex_from_json(c, amb.amb)};
  }
  for (const auto& [name, c] : section("certificates").items()) {
    Certificate cert = certificate_from_json(c);
    w.certificates[name] = {ambient_from_json(c.at("ambient")).spec, cert};
  }
  return w;
}

json workspace_to_json(const Workspace& w) {
  json out = {{"field", field_to_json(w.field)}, {"seed", w.seed}};
  json algs = json::object(), bims = json::object(), cxs = json::object(), certs = json::object();
  for (const auto& [name, a] : w.algebras) algs[name] = algebra_to_json(*a);
  for (const auto& [name, b] : w.bimodules) {
    const auto& m = *b.module;
    bims[name] = {{"left", b.left},
                  {"right", b.right},
                  {"basis", space_to_json(m.space())},
                  {"left_action", actions_to_json(m.left_actions())},
                  {"right_action", actions_to_json(m.right_actions())},
                  {"diff", images_to_json(m.diff())}};
  }
  for (const auto& [name, c] : w.complexes) {
    json x = complex_to_json(c.second);
    x["ambient"] = c.first;
    cxs[name] = x;
  }
  for (const auto& [name, c] : w.certificates) certs[name] = certificate_to_json(c.second, c.first);
  out["algebras"] = algs;
  out["bimodules"] = bims;
  out["complexes"] = cxs;
  out["certificates"] = certs;
  return out;
}

std::vector<CheckEntry> check_workspace(const Workspace& w) {
  std::vector<CheckEntry> out;
  for (const auto& [name, a] : w.algebras) out.push_back({"algebra", name, check_dg_algebra(*a)});
  for (const auto& [name, b] : w.bimodules) out.push_back({"bimodule", name, check_dg_bimodule(*b.module)});
  for (const auto& [name, c] : w.complexes) out.push_back({"complex", name, mc_check(c.second)});
  for (const auto& [name, c] : w.certificates) {
    AlgebraReport r = mc_check(c.second.f.source);
    for (const auto& v : mc_check(c.second.f.target).violations) r.add(v);
    if (r.passed) r = verify_certificate(c.second);
    out.push_back({"certificate", name, r});
  }
  return out;
}

}  // namespace dgcat
