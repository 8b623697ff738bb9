#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "dgcat/io.hpp"

using namespace dgcat;

namespace {

enum Exit { kOk = 0, kFailed = 1, kParse = 2, kUnknown = 3 };

struct Options {
  std::string field = "Q";
  unsigned seed = 0;
  int budget = 64;
  bool json_out = false;
  std::string certificate_out;
};

struct TaskArgs {
  std::string task, algebra = "D", module = "regular", target = "regular", example = "tian";
  std::string lhs, rhs, word, input, object, space = "0 1";
  int n = 2;
  bool acyclic = false;
};

Field parse_field(const std::string& s) {
  if (s == "Q") return Field::rationals();
  std::string digits = !s.empty() && (s[0] == 'F' || s[0] == 'p') ? s.substr(1) : s;
  try {
    size_t pos = 0;
    unsigned long p = std::stoul(digits, &pos);
    if (pos == digits.size()) return Field::prime(static_cast<std::uint32_t>(p));
  } catch (const std::exception&) {
  }
  throw ParseError("bad --field '" + s + "' (use Q or F<p>)");
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << j.dump(2) << "\n";
}

json dims_json(const std::map<int, int>& d) {
  json out = json::object();
  for (const auto& [k, v] : d)
    if (v) out[std::to_string(k)] = v;
  return out;
}

std::map<int, int> graded_dims(const GradedSpace& s) {
  std::map<int, int> out;
  for (const auto& b : s.basis) ++out[b.degree];
  return out;
}

json violations_json(const AlgebraReport& r) {
  json out = json::array();
  for (const auto& v : r.violations) out.push_back({{"axiom", v.axiom}, {"witness", v.witness}, {"detail", v.detail}});
  return out;
}

std::string summand_names(const TwistedComplex& x) {
  std::ostringstream os;
  for (int i = 0; i < x.size(); ++i) {
    const auto& s = x.summands()[i];
    std::string g = x.ambient()->name(s.gen);
    os << (i ? " (+) " : "") << (g.empty() ? "1" : g);
    if (s.shift) os << "<" << s.shift << ">";
  }
  return x.size() ? os.str() : "0";
}

json complex_summary(const TwistedComplex& x) {
  json s = json::array();
  for (const auto& e : x.summands()) {
    std::string g = x.ambient()->name(e.gen);
    s.push_back({{"generator", g.empty() ? "1" : g}, {"shift", e.shift}});
  }
  return {{"summands", s}, {"total_dim", x.total()->dim()}};
}

// Everything printed goes through here: text lines or one JSON document.
struct Report {
  bool as_json = false;
  json doc;
  std::vector<std::string> lines;
  void line(const std::string& s) { lines.push_back(s); }
  int finish(int code) {
    doc["exit_code"] = code;
    if (as_json)
      std::cout << doc.dump(2) << "\n";
    else
      for (const auto& l : lines) std::cout << l << "\n";
    return code;
  }
};

BimodPtr left_module(const std::string& kind, const AlgPtr& a) {
  if (kind == "regular") return regular_left(a);
  if (kind == "free") return tensor_over_k(regular_left(a), tensor_over_k(regular_right(a), regular_left(a)));
  throw ParseError("module must be 'regular' or 'free'");
}

BimodPtr space_from_degrees(const std::string& degrees, bool acyclic, const Field& f) {
  GradedSpace s{f, {}};
  std::istringstream is(degrees);
  std::string tok;
  while (is >> tok) {
    try {
      size_t pos = 0;
      int d = std::stoi(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument(tok);
      s.basis.push_back({"v" + std::to_string(s.basis.size()), d});
    } catch (const std::exception&) {
      throw ParseError("bad degree '" + tok + "' in --space");
    }
  }
  if (s.basis.empty()) throw ParseError("--space needs at least one degree");
  int n = s.dim();
  Matrix d(n, n);
  if (acyclic) {
    // pair v_i with a later v_j of degree |v_i| + 1, each vector used once
    std::vector<bool> used(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n && !used[i]; ++j)
        if (!used[j] && i != j && s.degree(j) == s.degree(i) + 1) {
          d.at(j, i) = f.one();
          used[i] = used[j] = true;
        }
    if (std::find(used.begin(), used.end(), false) != used.end())
      throw ParseError("--acyclic: the degrees in --space cannot be paired by an isomorphic differential");
  }
  return dg_space(s, d);
}

TwistedComplex braid_complex(int n, const std::string& w, const Field& f) {
  return ks_complex(*shared_zigzag(n, f), parse_braid_word(n, w));
}

int cmd_check(const std::string& path, const Options& opt) {
  Report rep{opt.json_out, {{"command", "check"}, {"input", path}}, {}};
  Workspace w = workspace_from_json(read_json(path));
  rep.doc["seed"] = w.seed;
  rep.doc["field"] = field_to_json(w.field);
  bool ok = true;
  json objs = json::array();
  for (const auto& e : check_workspace(w)) {
    ok = ok && e.report.passed;
    objs.push_back({{"kind", e.kind}, {"name", e.name}, {"passed", e.report.passed}, {"violations", violations_json(e.report)}});
    rep.line(e.kind + " " + e.name + ": " + (e.report.passed ? "ok" : "FAILED"));
    if (!e.report.passed) rep.line("  " + e.report.summary());
  }
  rep.doc["objects"] = objs;
  rep.doc["passed"] = ok;
  return rep.finish(ok ? kOk : kFailed);
}

int cmd_compute(const TaskArgs& t, const Options& opt) {
  Field f = parse_field(opt.field);
  Report rep{opt.json_out, {{"command", "compute"}, {"task", t.task}, {"seed", opt.seed}, {"field", field_to_json(f)}}, {}};
  auto write_certificate = [&](const Certificate& c, const json& ambient) {
    if (opt.certificate_out.empty()) return;
    write_json(opt.certificate_out, certificate_to_json(c, ambient));
    rep.doc["certificate_file"] = opt.certificate_out;
    rep.line("certificate written to " + opt.certificate_out);
  };

  if (t.task == "cohomology") {
    if (!t.word.empty() || t.input.empty() && t.object.empty() && t.algebra.empty()) {
      auto x = braid_complex(t.n, t.word, f);
      auto total = cohomology_dims(underlying_complex(*x.total()));
      auto end = cohomology_dims(twisted_hom_complex(x, x)->complex());
      rep.doc["object"] = complex_summary(x);
      rep.doc["cohomology"] = dims_json(total);
      rep.doc["end_cohomology"] = dims_json(end);
      rep.line("complex: " + summand_names(x));
      rep.line("H*(total): " + dims_json(total).dump());
      rep.line("H*(End): " + dims_json(end).dump());
      return rep.finish(kOk);
    }
    BimodPtr m;
    if (!t.input.empty()) {
      Workspace w = workspace_from_json(read_json(t.input));
      if (w.bimodules.count(t.object))
        m = w.bimodules.at(t.object).module;
      else if (w.algebras.count(t.object))
        m = regular_bimodule(w.algebras.at(t.object));
      else
        throw ParseError("no algebra or bimodule named '" + t.object + "' in " + t.input);
    } else {
      m = regular_bimodule(zoo_algebra(t.algebra, f));
    }
    auto h = cohomology_dims(underlying_complex(*m));
    rep.doc["cohomology"] = dims_json(h);
    rep.doc["acyclic_object"] = is_acyclic_object(m).acyclic;
    rep.line("H*: " + dims_json(h).dump());
    return rep.finish(kOk);
  }

  if (t.task == "reduce") {
    auto x = braid_complex(t.n, t.word, f);
    auto r = gaussian_reduce(x, opt.seed);
    bool ok = verify_certificate(r.certificate).passed;
    rep.doc["input"] = complex_summary(x);
    rep.doc["minimal"] = complex_summary(r.minimal);
    rep.doc["certificate_verified"] = ok;
    rep.line(summand_names(x) + "  reduces to  " + summand_names(r.minimal));
    rep.line(std::string("certificate ") + (ok ? "verified" : "FAILED"));
    write_certificate(r.certificate, zigzag_ambient_json(t.n, f));
    return rep.finish(ok ? kOk : kFailed);
  }

  if (t.task == "braid-equiv") {
    auto x = braid_complex(t.n, t.lhs, f), y = braid_complex(t.n, t.rhs, f);
    Verdict v = homotopy_equivalent(x, y, {opt.seed, opt.budget});
    rep.doc["verdict"] = to_string(v.kind);
    rep.doc["reason"] = v.reason;
    rep.line(std::string("verdict: ") + to_string(v.kind) + (v.reason.empty() ? "" : " (" + v.reason + ")"));
    if (v.kind == Verdict::Unknown) return rep.finish(kUnknown);
    if (v.kind == Verdict::NotEquivalent) return rep.finish(kFailed);
    bool ok = v.certificate && verify_certificate(*v.certificate).passed;
    rep.doc["certificate_verified"] = ok;
    if (v.certificate) write_certificate(*v.certificate, zigzag_ambient_json(t.n, f));
    return rep.finish(ok ? kOk : kFailed);
  }

  if (t.task == "internal-hom") {
    AlgPtr a = zoo_algebra(t.algebra, f);
    InternalHom h = internal_hom(left_module(t.module, a), left_module(t.target, a));
    bool ok = check_dg_bimodule(*h.object).passed && is_closed(h.ev) && check_bimodule_map(h.ev).passed;
    rep.doc["dims"] = dims_json(graded_dims(h.object->space()));
    rep.doc["axioms_passed"] = ok;
    rep.line("[X,Y] graded dims: " + rep.doc["dims"].dump());
    rep.line(std::string("axioms: ") + (ok ? "ok" : "FAILED"));
    return rep.finish(ok ? kOk : kFailed);
  }

  if (t.task == "internal-end") {
    AlgPtr a = zoo_algebra(t.algebra, f);
    BimodPtr x = left_module(t.module, a);
    InternalEnd e = internal_end_algebra(x);
    AlgebraReport r = check_algebra_morphism(e.algebra);
    auto dims = graded_dims(e.algebra.carrier->space());
    BimodPtr expected = tensor_over_k(x, dual(x));
    bool iso = find_isomorphism(e.algebra.carrier, expected, opt.seed).has_value();
    rep.doc["dims"] = dims_json(dims);
    rep.doc["expected_dims"] = dims_json(graded_dims(expected->space()));
    rep.doc["isomorphic_to_dual_tensor"] = iso;
    rep.doc["axioms_passed"] = r.passed;
    rep.doc["violations"] = violations_json(r);
    rep.line("A_X graded dims: " + rep.doc["dims"].dump() + "  (X (x) X*: " + rep.doc["expected_dims"].dump() + ")");
    rep.line(std::string("algebra axioms: ") + (r.passed ? "ok" : "FAILED " + r.summary()));
    rep.line(std::string("A_X ~ X (x)_k X*: ") + (iso ? "yes" : "no"));
    return rep.finish(r.passed && iso ? kOk : kFailed);
  }

  if (t.task == "morita") {
    BimodPtr v = space_from_degrees(t.space, t.acyclic, f);
    AlgPtr e = matrix_dg_algebra(v);
    AlgPtr k = DgAlgebra::ground(f);
    BimodPtr x = matrix_left_module(e, v);
    MoritaResult m = morita_verify(e, k, x, dual(x));
    auto h = cohomology_dims(underlying_complex(*regular_bimodule(e)));
    bool acyclic = std::all_of(h.begin(), h.end(), [](const auto& kv) { return kv.second == 0; });
    rep.doc["equivalent"] = m.equivalent;
    rep.doc["reason"] = m.reason;
    rep.doc["end_acyclic"] = acyclic;
    rep.line(std::string("End(V) Morita equivalent to k: ") + (m.equivalent ? "yes" : "no (" + m.reason + ")"));
    rep.line(std::string("End(V) acyclic: ") + (acyclic ? "yes" : "no"));
    return rep.finish(m.equivalent ? kOk : kFailed);
  }

  if (t.task == "ideal-probe") {
    RepData data;
    if (t.example == "tian") {
      data = tian_radical_rep(f);
    } else {
      AlgPtr a = zoo_algebra(t.example, f);
      data = {identity_algebra(a), {regular_bimodule(a)}};
    }
    IdealProbe probe(data);
    ProbeVerdict v = quotient_simple_probe(probe, opt.seed, opt.budget);
    bool proper = v.kind == ProbeVerdict::ProperIdeal;
    rep.doc["verdict"] = proper ? "ProperIdeal" : "NoProperIdealFound";
    rep.doc["partial"] = v.ideal.partial;
    rep.doc["probes"] = probe.probe_count();
    if (v.witness)
      rep.doc["witness"] = {{"source", v.witness->source},
                            {"target", v.witness->target},
                            {"degree", v.witness->map.degree},
                            {"matrix", matrix_to_json(v.witness->map.mat)}};
    rep.line(std::string("verdict: ") + rep.doc["verdict"].get<std::string>() + (v.ideal.partial ? " (partial search)" : ""));
    if (v.witness) rep.line("witness: probe " + std::to_string(v.witness->source) + " -> " + std::to_string(v.witness->target) +
                            " in degree " + std::to_string(v.witness->map.degree));
    if (!proper && v.ideal.partial) return rep.finish(kUnknown);
    return rep.finish(kOk);
  }

  if (t.task == "tensor") {
    if (t.input.empty()) throw ParseError("tensor needs --input with two bimodules --lhs and --rhs");
    Workspace w = workspace_from_json(read_json(t.input));
    if (!w.bimodules.count(t.lhs) || !w.bimodules.count(t.rhs)) throw ParseError("unknown bimodule name");
    const auto& l = w.bimodules.at(t.lhs);
    const auto& r = w.bimodules.at(t.rhs);
    if (l.right != r.left) throw ParseError("tensor: " + t.lhs + " is over " + l.right + " on the right, " + t.rhs + " over " + r.left + " on the left");
    Quotient q = tensor_over_algebra(l.module, r.module);
    AlgebraReport ok = check_dg_bimodule(*q.object);
    rep.doc["dims"] = dims_json(graded_dims(q.object->space()));
    rep.doc["axioms_passed"] = ok.passed;
    Workspace out;
    out.field = w.field;
    out.seed = opt.seed;
    out.algebras[l.left] = w.algebras.at(l.left);
    out.algebras[r.right] = w.algebras.at(r.right);
    out.bimodules[t.lhs + "*" + t.rhs] = {l.left, r.right, q.object};
    rep.doc["result"] = workspace_to_json(out);
    rep.line(t.lhs + " (x) " + t.rhs + " graded dims: " + rep.doc["dims"].dump());
    if (!opt.json_out) rep.line(rep.doc["result"].dump());
    return rep.finish(ok.passed ? kOk : kFailed);
  }

  throw ParseError("unknown task '" + t.task + "'");
}

int cmd_list(const Options& opt) {
  json doc = {{"algebras", {"k", "dual", "D", "Rprime", "Z<n>"}},
              {"tasks", {"cohomology", "reduce", "braid-equiv", "internal-hom", "internal-end", "morita", "ideal-probe", "tensor"}},
              {"ideal_probe_examples", {"tian", "k", "dual", "D", "Rprime", "Z<n>"}}};
  if (opt.json_out) {
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << "algebras: k dual D Rprime Z<n>\n"
              << "tasks: cohomology reduce braid-equiv internal-hom internal-end morita ideal-probe tensor\n"
              << "ideal-probe examples: tian, or any algebra name\n";
  }
  return kOk;
}

int cmd_export(const std::string& algebra, int n, const std::string& word, const std::string& out, const Options& opt) {
  Field f = parse_field(opt.field);
  Workspace w;
  w.field = f;
  w.seed = opt.seed;
  if (!word.empty() || algebra.empty()) {
    auto x = braid_complex(n, word, f);
    w.complexes["ks"] = {zigzag_ambient_json(n, f), x};
  } else {
    w.algebras[algebra] = zoo_algebra(algebra, f);
  }
  json j = workspace_to_json(w);
  if (out.empty())
    std::cout << j.dump(2) << "\n";
  else
    write_json(out, j);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact computations with dg bimodules, twisted complexes and algebra 1-morphisms"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--field", opt.field, "Q or F<p>");
  app.add_option("--seed", opt.seed, "seed for randomized searches");
  app.add_option("--budget", opt.budget, "random candidates tried by searches");
  app.add_flag("--json", opt.json_out, "machine-readable report");
  app.add_option("--certificate-out", opt.certificate_out, "write the certificate of the computation here");

  std::string input;
  auto* check = app.add_subcommand("check", "run the axiom checkers on a JSON file");
  check->add_option("input", input, "input file")->required();

  TaskArgs t;
  auto* compute = app.add_subcommand("compute", "run one computation");
  compute->add_option("task", t.task, "cohomology | reduce | braid-equiv | internal-hom | internal-end | morita | ideal-probe | tensor")
      ->required();
  compute->add_option("--n", t.n, "zigzag algebra Z_n for braid tasks");
  compute->add_option("--word", t.word, "braid word, e.g. \"1 -2\"");
  compute->add_option("--lhs", t.lhs, "left braid word, or bimodule name for tensor");
  compute->add_option("--rhs", t.rhs, "right braid word, or bimodule name for tensor");
  compute->add_option("--algebra", t.algebra, "k | dual | D | Rprime | Z<n>");
  compute->add_option("--module", t.module, "regular | free");
  compute->add_option("--target", t.target, "second module for internal-hom");
  compute->add_option("--space", t.space, "degrees of V for morita, e.g. \"0 1\"");
  compute->add_flag("--acyclic", t.acyclic, "give V an isomorphic differential");
  compute->add_option("--example", t.example, "tian or an algebra name, for ideal-probe");
  compute->add_option("--input", t.input, "JSON file for cohomology or tensor");
  compute->add_option("--object", t.object, "object name inside --input");

  auto* list = app.add_subcommand("list", "list named examples and tasks");
  std::string ex_alg, ex_word, ex_out;
  int ex_n = 2;
  auto* exp = app.add_subcommand("export", "write a named example as JSON");
  exp->add_option("--algebra", ex_alg, "algebra name");
  exp->add_option("--n", ex_n, "zigzag size for a braid complex");
  exp->add_option("--word", ex_word, "braid word");
  exp->add_option("-o,--output", ex_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kParse;
  }

  try {
    if (*check) return cmd_check(input, opt);
    if (*compute) return cmd_compute(t, opt);
    if (*list) return cmd_list(opt);
    if (*exp) return cmd_export(ex_alg, ex_n, ex_word, ex_out, opt);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const StructuralError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kParse;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kParse;
  }
  return kOk;
}
