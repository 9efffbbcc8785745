#include "gradalg/cli.hpp"

#include "gradalg/duality.hpp"
#include "gradalg/io.hpp"
#include "gradalg/models.hpp"
#include "gradalg/tk.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <ostream>
#include <sstream>

namespace gradalg::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string command;
  std::string problem;
  std::string format = "text";
  std::optional<std::uint64_t> seed;
  std::optional<std::uint32_t> prime;
  std::string degrees;
  bool maps = false;
  std::string target, cert, output;
  std::optional<int> degree;
  int level = 0;
  int k = 0;
  std::string model;
  std::vector<int> dims;
  std::optional<int> margin;
  int copies = 1;
  std::vector<int> shifts;
};

std::pair<int, int> parse_range(const std::string& s, int n) {
  if (s.empty()) return {-n, n};
  auto dots = s.find("..");
  try {
    std::size_t used = 0;
    if (dots == std::string::npos) {
      int v = std::stoi(s, &used);
      if (used != s.size()) throw UsageError("");
      return {v, v};
    }
    std::string a = s.substr(0, dots), b = s.substr(dots + 2);
    int lo = std::stoi(a, &used);
    if (used != a.size()) throw UsageError("");
    int hi = std::stoi(b, &used);
    if (used != b.size()) throw UsageError("");
    if (lo > hi) throw UsageError("");
    return {lo, hi};
  } catch (const std::exception&) {
    throw UsageError("--degrees expects a..b with a <= b, got '" + s + "'");
  }
}

// Text form of a report: nested keys, scalar lists kept on one line.
bool flat_json(const json& j) {
  if (j.is_primitive()) return true;
  if (j.empty()) return true;
  if (!j.is_array()) return false;
  for (const auto& v : j)
    if (!v.is_primitive() && !(v.is_array() && flat_json(v))) return false;
  return true;
}

std::string inline_text(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_object()) return "{}";
  if (j.is_array()) {
    std::string s = "[";
    for (std::size_t i = 0; i < j.size(); ++i) s += (i ? ", " : "") + inline_text(j[i]);
    return s + "]";
  }
  return j.dump();
}

void render_text(const json& j, std::ostream& os, int indent) {
  const std::string pad(indent, ' ');
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (flat_json(v)) {
        os << pad << k << ": " << inline_text(v) << "\n";
      } else {
        os << pad << k << ":\n";
        render_text(v, os, indent + 2);
      }
    }
  } else if (j.is_array()) {
    for (const auto& v : j) {
      if (flat_json(v)) {
        os << pad << "- " << inline_text(v) << "\n";
      } else {
        std::ostringstream item;
        render_text(v, item, indent + 2);
        std::string text = item.str();
        text.replace(indent, 2, "- ");
        os << text;
      }
    }
  } else {
    os << pad << inline_text(j) << "\n";
  }
}

const char* status_of(int code) {
  switch (code) {
    case kOk: return "ok";
    case kFalse: return "false";
    case kError: return "error";
    default: return "usage";
  }
}

json envelope(const std::string& command, const FieldSpec& f, int truncation, int margin, std::uint64_t seed) {
  return json{{"tool", {{"name", "gradalg"}, {"version", kVersion}}},
              {"command", command},
              {"field", field_to_json(f)},
              {"truncation", truncation},
              {"margin", margin},
              {"seed", seed}};
}

void emit(const Options& o, json report, int code, std::ostream& out) {
  report["exit"] = code;
  report["status"] = status_of(code);
  if (o.format == "json") {
    out << pretty(report) << "\n";
    return;
  }
  out << "gradalg " << kVersion << " " << o.command << ": " << status_of(code) << "\n";
  report.erase("tool");
  report.erase("command");
  render_text(report, out, 0);
}

template <class S>
json names(const Action<S>& a, const std::vector<Word>& ws) {
  json out = json::array();
  for (const auto& w : ws) out.push_back(a.word_names(w));
  return out;
}

json rank_json(const RankCheck& r) { return {{"degree", r.degree}, {"rank", r.rank}, {"expected", r.expected}}; }

template <class S>
std::pair<std::string, GradedSubspace<S>> find_invariant_subspace(const Action<S>& a, const IrreducibilityReport& rep) {
  const auto& sp = a.space();
  if (!rep.annihilator_zero) return {"vectors killed by every generator", annihilator_in_module(a)};
  if (!rep.transitivity_failures.empty()) {
    auto [n, t] = rep.transitivity_failures.front();
    GradedSubspace<S> seed = empty_subspace(sp);
    seed.basis[n] = identity(a.field(), sp.dim(n));
    return {"submodule generated by W(" + std::to_string(n) + ") misses part of W(" + std::to_string(t) + ")",
            vector_spin(a, seed)};
  }
  for (const auto& c : rep.absolute) {
    if (c.ok()) continue;
    const int n = c.degree;
    Mat<S> p = irreducible_submodule(detail::degree_zero_gens(a, n), sp.dim(n), a.field(), a.seed());
    GradedSubspace<S> seed = empty_subspace(sp);
    seed.basis[n] = p;
    return {"submodule generated by a degree-0 invariant subspace of W(" + std::to_string(n) + ")",
            vector_spin(a, seed)};
  }
  return {"", empty_subspace(sp)};
}

template <class S>
int cmd_check(const Options&, const Action<S>& a, json& result) {
  const int N = a.trusted();
  IrreducibilityReport rep = irreducibility_report(a);
  BlockCriteria crit = check_block_criteria(a, N);
  json abs = json::array(), ineq = json::array(), cabs = json::array();
  for (const auto& r : rep.absolute) abs.push_back(rank_json(r));
  for (const auto& r : crit.absolute) cabs.push_back(rank_json(r));
  for (const auto& p : crit.inequivalence)
    ineq.push_back({{"r", p.r}, {"s", p.s}, {"nonzero_on_r", p.nonzero_on_r}, {"zero_on_s", p.zero_on_s}});
  json fails = json::array();
  for (auto [n, t] : rep.transitivity_failures) fails.push_back({n, t});
  result["irreducible"] = rep.irreducible();
  result["annihilator_zero"] = rep.annihilator_zero;
  result["absolute"] = abs;
  result["transitivity_failures"] = fails;
  result["block_criteria"] = {{"k", crit.k},       {"absolute", cabs}, {"inequivalence", ineq},
                              {"top", rank_json(crit.top)}, {"ok", crit.ok()}};
  if (rep.irreducible()) return kOk;
  auto [reason, sub] = find_invariant_subspace(a, rep);
  std::vector<int> dims = sub.dims();
  dims.resize(std::min<std::size_t>(dims.size(), N + 1));
  result["invariant_subspace"] = {{"reason", reason}, {"dims", dims}, {"basis", subspace_to_json(sub, a.field(), N)}};
  return kFalse;
}

template <class S>
int cmd_closure(const Options& o, const Action<S>& a, json& result) {
  auto [lo, hi] = parse_range(o.degrees, a.trusted());
  json degs = json::array();
  for (const auto& [d, basis] : closure(a, lo, hi)) {
    json e = {{"degree", d}, {"dim", basis.dim()}, {"words", names(a, basis.words)}};
    if (o.maps) {
      json maps = json::array();
      for (const auto& m : basis.maps) maps.push_back(graded_map_to_json(m));
      e["maps"] = maps;
    }
    degs.push_back(std::move(e));
  }
  result["degrees"] = degs;
  return kOk;
}

template <class S>
int cmd_commutant(const Options& o, const Action<S>& a, json& result) {
  auto [lo, hi] = parse_range(o.degrees, a.trusted());
  json degs = json::array();
  for (const auto& [d, maps] : commutant(a, lo, hi)) {
    json e = {{"degree", d}, {"dim", static_cast<int>(maps.size())}};
    if (o.maps) {
      json ms = json::array();
      for (const auto& m : maps) ms.push_back(graded_map_to_json(m));
      e["maps"] = ms;
    }
    degs.push_back(std::move(e));
  }
  result["degrees"] = degs;
  return kOk;
}

template <class S>
int cmd_dc_check(const Options&, const Action<S>& a, json& result) {
  DoubleCommutantReport rep = check_double_commutant(a);
  json degs = json::array();
  for (const auto& d : rep.degrees)
    degs.push_back({{"degree", d.degree},
                    {"closure_dim", d.closure_dim},
                    {"double_commutant_dim", d.double_commutant_dim},
                    {"contained", d.contained},
                    {"ok", d.ok()}});
  result["degrees"] = degs;
  result["double_commutant_equals_closure"] = rep.ok();
  return rep.ok() ? kOk : kFalse;
}

template <class S>
json component_json(const Component<S>& c) {
  return {{"lowest", c.lowest},
          {"multiplicity_dims", c.v_dims()},
          {"multiplicity", c.v_total()},
          {"module_dims", c.module.space().dims()},
          {"module", action_to_json(c.module)}};
}

template <class S>
int cmd_decompose(const Options&, const Action<S>& a, json& result) {
  Decomposition<S> d = isotypic_decompose(a);
  json comps = json::array();
  for (const auto& c : d.components) comps.push_back(component_json(c));
  result["components"] = comps;
  result["summands"] = d.summands();
  result["semisimple"] = true;
  return kOk;
}

template <class S>
int cmd_tk(const Options& o, const Action<S>& a, json& result) {
  TkAlgebra<S> t = compute_tk(a, o.k);
  const int rad = static_cast<int>(radical(t.algebra).cols());
  result["k"] = t.k;
  result["dim"] = t.algebra.dim();
  result["closure_dim"] = t.closure_dim;
  result["ideal_dim"] = static_cast<int>(t.b0k.size());
  result["radical_dim"] = rad;
  result["semisimple"] = rad == 0;
  result["pi_rank"] = t.pi_rank;
  result["pi_target_dim"] = t.pi_target_dim;
  result["words"] = names(a, t.words);
  return rad == 0 ? kOk : kFalse;
}

template <class S>
int cmd_rationality(const Options& o, const Action<S>& a, json& result) {
  RationalityReport<S> rep = check_rationality_conditions(a, o.k);
  const auto& f = a.field();
  json rads = json::array(), classes = json::array(), diffs = json::array(), rets = json::array();
  for (auto [k, d] : rep.radical_dims) rads.push_back({{"k", k}, {"radical_dim", d}});
  for (const auto& c : rep.classes)
    classes.push_back({{"module_dim", c.module_dim}, {"summands", c.summands}, {"lambda", f.format(c.lambda)}});
  for (const auto& d : rep.differences)
    diffs.push_back({{"i", d.i}, {"j", d.j}, {"difference", f.format(d.difference)}, {"integer", d.integer}});
  for (const auto& r : rep.returns)
    rets.push_back({{"n", r.n}, {"raise_rank", r.raise_rank}, {"return_rank", r.return_rank}, {"ok", r.ok()}});
  result["K"] = rep.K;
  result["radicals"] = rads;
  result["tk_dims"] = rep.tk_dims;
  result["classes"] = classes;
  result["differences"] = diffs;
  result["returns"] = rets;
  result["condition1"] = rep.condition1();
  result["condition2"] = rep.condition2();
  result["condition3"] = rep.condition3();
  result["rational"] = rep.ok();
  return rep.ok() ? kOk : kFalse;
}

template <class S>
int cmd_duality(const Options&, const Action<S>& a, json& result) {
  DualityReport<S> rep = verify_duality(a);
  json comps = json::array(), dims = json::array(), mult = json::array(), wits = json::array();
  for (const auto& c : rep.decomposition.components)
    comps.push_back({{"lowest", c.lowest}, {"multiplicity_dims", c.v_dims()}, {"module_dims", c.module.space().dims()}});
  for (const auto& [k, md] : rep.commutant_dims)
    dims.push_back({{"degree", k}, {"measured", md.first}, {"predicted", md.second}});
  for (const auto& m : rep.multiplicity) {
    json abs = json::array(), fails = json::array();
    for (const auto& r : m.absolute) abs.push_back(rank_json(r));
    for (auto [s, t] : m.transitivity_failures) fails.push_back({s, t});
    mult.push_back({{"component", m.component}, {"absolute", abs}, {"transitivity_failures", fails}, {"ok", m.ok()}});
  }
  for (const auto& w : rep.witnesses)
    wits.push_back({{"component", w.component}, {"in_commutant", w.in_commutant}, {"separates", w.separates}});
  result["components"] = comps;
  result["commutant_dims"] = dims;
  result["multiplicity"] = mult;
  result["witnesses"] = wits;
  result["dimension_identity"] = rep.dimension_identity;
  result["condition1"] = rep.condition1();
  result["condition2"] = rep.condition2();
  result["condition3"] = rep.condition3();
  result["duality"] = rep.ok();
  return rep.ok() ? kOk : kFalse;
}

template <class S>
int cmd_burnside(const Options& o, const Action<S>& a, json& result) {
  if (o.target.empty()) throw UsageError("burnside needs --target FILE");
  GradedMap<S> target = graded_map_from_json(read_json_file(o.target), a.space(), "target", o.degree);
  if (!check_irreducible(a)) {
    result["irreducible"] = false;
    return kFalse;
  }
  Certificate<S> cert = burnside_solve(a, target, o.level);
  json doc = certificate_to_json(a, target, cert);
  json stages = json::array();
  for (const auto& s : cert.stages) stages.push_back(static_cast<int>(s.size()));
  result["degree"] = cert.degree;
  result["level"] = cert.level;
  result["stage_terms"] = stages;
  result["verified"] = cert.verified;
  if (o.output.empty()) {
    result["certificate"] = doc;
  } else {
    write_text_file(o.output, pretty(doc) + "\n");
    result["certificate_file"] = o.output;
  }
  return cert.verified ? kOk : kError;
}

template <class S>
int cmd_verify(const Options& o, const Action<S>& a, json& result) {
  if (o.cert.empty()) throw UsageError("verify needs --cert FILE");
  auto [target, cert] = certificate_from_json(a, read_json_file(o.cert));
  VerifyResult v = verify_certificate(a, target, cert);
  result["degree"] = cert.degree;
  result["level"] = cert.level;
  result["verified"] = v.ok;
  if (!v.ok) result["failure"] = {{"stage", v.stage}, {"reason", v.reason}};
  return v.ok ? kOk : kFalse;
}

template <class S>
int execute(const Options& o, Action<S> a, std::ostream& out) {
  if (o.seed) a.set_seed(*o.seed);
  json report = envelope(o.command, a.field().spec(), a.trusted(), a.margin(), a.seed());
  json result = json::object();
  int code = kOk;
  auto fail = [&](int c, const std::string& kind, const std::string& message, const std::string& advice = "") {
    code = c;
    json e = {{"kind", kind}, {"message", message}};
    if (!advice.empty()) e["advice"] = advice;
    result["error"] = e;
  };
  try {
    if (o.command == "check") code = cmd_check(o, a, result);
    else if (o.command == "closure") code = cmd_closure(o, a, result);
    else if (o.command == "commutant") code = cmd_commutant(o, a, result);
    else if (o.command == "dc-check") code = cmd_dc_check(o, a, result);
    else if (o.command == "decompose") code = cmd_decompose(o, a, result);
    else if (o.command == "tk") code = cmd_tk(o, a, result);
    else if (o.command == "rationality") code = cmd_rationality(o, a, result);
    else if (o.command == "duality") code = cmd_duality(o, a, result);
    else if (o.command == "burnside") code = cmd_burnside(o, a, result);
    else if (o.command == "verify") code = cmd_verify(o, a, result);
    else throw UsageError("unknown subcommand '" + o.command + "'");
  } catch (const StageUnsolvable& e) {
    fail(kError, "StageUnsolvable", e.what(),
         "the truncation margin is too small for this target; regenerate with margin " +
             std::to_string(std::max(1, 2 * a.margin())) + " and rerun");
  } catch (const SplitUndecided& e) {
    fail(kError, "SplitUndecided", e.what(), "rerun over a finite field, e.g. --prime 101");
  } catch (const NotSemisimple& e) {
    result["semisimple"] = false;
    fail(kFalse, "NotSemisimple", e.what());
    result["error"]["degree"] = e.degree();
    result["error"]["witness"] = e.witness();
  } catch (const DOperatorMissing& e) {
    fail(kError, "DOperatorMissing", e.what(), "add a generator acting as the degree operator");
  } catch (const UnsupportedCharacteristic& e) {
    fail(kError, "UnsupportedCharacteristic", e.what(), "rerun over the rationals or a larger prime");
  } catch (const PreconditionFailed& e) {
    fail(kError, "PreconditionFailed", e.what());
  } catch (const UsageError&) {
    throw;
  } catch (const ValidationError& e) {
    fail(kUsage, "ValidationError", e.what());
  } catch (const ParseError& e) {
    fail(kUsage, "ParseError", e.what());
  }
  report["result"] = result;
  emit(o, std::move(report), code, out);
  return code;
}

int run_model(const Options& o, std::ostream& out) {
  auto build = [&](const auto& f) {
    using S = std::decay_t<decltype(f.zero())>;
    Action<S> m = [&] {
      if (o.model == "full") {
        if (o.dims.empty()) throw UsageError("model full needs --dims d0,d1,...");
        return model_full(f, o.dims, o.margin.value_or(1));
      }
      if (o.model == "heisenberg") return model_heisenberg(f, o.level, o.margin);
      if (o.model == "virasoro") return model_virasoro_sugawara(f, o.level, o.margin);
      throw UsageError("unknown model '" + o.model + "' (full, heisenberg, virasoro)");
    }();
    if (o.copies < 1) throw UsageError("--copies must be positive");
    if (o.copies > 1 || !o.shifts.empty()) {
      std::vector<int> shifts = o.shifts;
      shifts.resize(o.copies, 0);
      m = model_direct_sum(std::vector<Action<S>>{m}, {o.copies}, {shifts});
    }
    m.set_seed(o.seed.value_or(0));
    json doc = action_to_json(m);
    if (o.output.empty()) {
      out << pretty(doc) << "\n";
      return kOk;
    }
    write_text_file(o.output, pretty(doc) + "\n");
    json report = envelope("model", m.field().spec(), m.trusted(), m.margin(), m.seed());
    report["result"] = {{"model", o.model},
                        {"file", o.output},
                        {"dims", m.space().dims()},
                        {"generators", m.size()},
                        {"copies", o.copies}};
    emit(o, std::move(report), kOk, out);
    return kOk;
  };
  if (o.prime) return build(PField(*o.prime));
  return build(QField{});
}

int load_and_execute(const Options& o, std::ostream& out) {
  json doc = read_json_file(o.problem);
  ProblemHeader h = problem_header(doc);
  if (!h.field.is_rational()) {
    if (o.prime && *o.prime != h.field.p) throw UsageError("--prime differs from the problem's field");
    return execute(o, action_from_json(doc, PField(h.field.p)), out);
  }
  Action<Rational> q = action_from_json(doc, QField{});
  if (o.prime) return execute(o, reduce_mod(q, PField(*o.prime)), out);
  return execute(o, std::move(q), out);
}

}  // namespace

std::string schema_help() {
  return R"(Problem file (JSON, UTF-8):
  {
    "field": {"kind": "rational"} | {"kind": "prime", "p": <prime>},   default rational
    "truncation": N,
    "dims": [d_0, ..., d_N] or [d_0, ..., d_{N+margin}],
    "margin": <int>,            default max |generator degree|
    "seed": <unsigned int>,     default 0
    "generators": [
      {"name": <string>, "degree": <int>,
       "blocks": {"<source degree>": [["<scalar>", ...], ...]}}
    ]
  }
Blocks map W(m) to W(m + degree) and have shape dims[m + degree] x dims[m];
absent blocks are zero. Scalars are strings: "3", "-1/2", or residues mod p.
Schemas for problems, graded maps, certificates and reports ship in schemas/.
)";
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Closures, graded Burnside certificates, T_k algebras and commutant duality over exact fields",
               "gradalg"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  auto common = [&](CLI::App* s, bool problem = true) {
    if (problem) s->add_option("problem", o.problem, "problem file")->required();
    s->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "text"}));
    s->add_option("--seed", o.seed, "override the problem seed");
  };
  auto reduce = [&](CLI::App* s) { s->add_option("--prime", o.prime, "reduce a rational problem modulo p"); };

  auto* check = app.add_subcommand("check", "irreducibility and block criteria");
  common(check);
  reduce(check);
  auto* clo = app.add_subcommand("closure", "closure dimensions and spanning words per degree");
  common(clo);
  reduce(clo);
  clo->add_option("--degrees", o.degrees, "degree range a..b");
  clo->add_flag("--maps", o.maps, "include the basis maps");
  auto* bur = app.add_subcommand("burnside", "solve for a graded Burnside certificate");
  common(bur);
  reduce(bur);
  bur->add_option("--target", o.target, "graded map file")->required();
  bur->add_option("--degree", o.degree, "degree of the target");
  bur->add_option("--level", o.level, "level K")->required();
  bur->add_option("-o,--output", o.output, "certificate file");
  auto* ver = app.add_subcommand("verify", "re-derive every stage of a certificate");
  common(ver);
  reduce(ver);
  ver->add_option("--cert", o.cert, "certificate file")->required();
  auto* com = app.add_subcommand("commutant", "commutant dimensions per degree");
  common(com);
  reduce(com);
  com->add_option("--degrees", o.degrees, "degree range a..b");
  com->add_flag("--maps", o.maps, "include the basis maps");
  auto* dc = app.add_subcommand("dc-check", "compare the double commutant with the closure");
  common(dc);
  reduce(dc);
  auto* dec = app.add_subcommand("decompose", "isotypic decomposition");
  common(dec);
  reduce(dec);
  auto* tk = app.add_subcommand("tk", "the quotient algebra T_k and its radical");
  common(tk);
  reduce(tk);
  tk->add_option("-k", o.k, "k")->required();
  auto* rat = app.add_subcommand("rationality", "rationality conditions up to K");
  common(rat);
  reduce(rat);
  rat->add_option("-K", o.k, "K")->required();
  auto* dua = app.add_subcommand("duality", "commutant duality checks");
  common(dua);
  reduce(dua);
  auto* mod = app.add_subcommand("model", "emit a reference model as a problem file");
  common(mod, false);
  mod->add_option("name", o.model, "full, heisenberg or virasoro")->required();
  mod->add_option("--dims", o.dims, "full model dims")->delimiter(',');
  mod->add_option("--level", o.level, "truncation N");
  mod->add_option("--margin", o.margin, "margin");
  mod->add_option("--copies", o.copies, "number of copies in a direct sum");
  mod->add_option("--shifts", o.shifts, "degree shift per copy")->delimiter(',');
  mod->add_option("--prime", o.prime, "build over F_p");
  mod->add_option("-o,--output", o.output, "problem file");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "gradalg: " << e.what() << "\n\n" << app.help() << "\n" << schema_help();
    return kUsage;
  }
  o.command = app.get_subcommands().front()->get_name();
  try {
    if (o.prime && !is_prime(*o.prime)) throw UsageError("--prime must be a prime");
    if (o.command == "model") return run_model(o, out);
    return load_and_execute(o, out);
  } catch (const UsageError& e) {
    err << "gradalg: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    err << "gradalg: " << e.what() << "\n\n" << schema_help();
    return kUsage;
  } catch (const ValidationError& e) {
    err << "gradalg: " << e.what() << "\n\n" << schema_help();
    return kUsage;
  } catch (const std::exception& e) {
    err << "gradalg: " << e.what() << "\n";
    return kError;
  }
}

}  // namespace gradalg::cli
