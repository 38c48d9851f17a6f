#pragma once

/**
 * @file cli.hpp
 * @brief The `mildred` command line: subcommand parsing, JSON input
 *        documents, and deterministic JSON reports.
 *
 * Exit status: 0 on success, 1 when a mathematical check fails (or a
 * library precondition rejects the data), 2 on malformed input.
 */

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mildred/deformation_data.hpp"
#include "mildred/dessins.hpp"
#include "mildred/lifting_arith.hpp"
#include "mildred/tail_covers.hpp"
#include "mildred/tree_calculus.hpp"

namespace mildred::cli {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

enum Exit { Ok = 0, CheckFailed = 1, Malformed = 2 };

inline json to_json(const Rational& r) { return {{"num", r.num()}, {"den", r.den()}}; }

inline json to_json(const std::vector<Rational>& v) {
  json a = json::array();
  for (const auto& r : v) a.push_back(to_json(r));
  return a;
}

inline json error_json(const Error& e) { return {{"code", std::string(to_string(e.code()))}, {"message", e.what()}}; }

inline bool is_malformed(Errc c) { return c == Errc::ParseError || c == Errc::UnknownSubcommand || c == Errc::MalformedGraph; }

// ---------------------------------------------------------------- parsing

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

inline Rational parse_rational(const std::string& s) {
  try {
    return Rational::parse(s);
  } catch (const Error&) {
    fail(Errc::ParseError, "bad rational '" + s + "'");
  }
}

inline std::vector<Rational> parse_rationals(const std::string& s) {
  std::vector<Rational> out;
  for (const auto& x : split(s, ',')) out.push_back(parse_rational(x));
  return out;
}

inline std::int64_t parse_int(const std::string& s) {
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  require(!s.empty() && used == s.size(), Errc::ParseError, "bad integer '" + s + "'");
  return v;
}

/// "1,1,1|2": per tail, '|'-separated alternatives for |Aut|.
inline std::vector<std::vector<std::int64_t>> parse_aut(const std::string& s) {
  std::vector<std::vector<std::int64_t>> out;
  for (const auto& tail : split(s, ',')) {
    std::vector<std::int64_t> alts;
    for (const auto& x : split(tail, '|')) alts.push_back(parse_int(x));
    out.push_back(std::move(alts));
  }
  return out;
}

inline std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

inline json read_document(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), Errc::ParseError, "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    auto [line, col] = line_column(text, e.byte);
    fail(Errc::ParseError, path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": invalid JSON");
  }
}

inline VertexKind parse_kind(const std::string& s) {
  if (s == "interior") return VertexKind::Interior;
  if (s == "prim") return VertexKind::LeafPrim;
  if (s == "new") return VertexKind::LeafNew;
  if (s == "wild") return VertexKind::LeafWild;
  fail(Errc::ParseError, "unknown vertex kind '" + s + "' (interior, prim, new, wild)");
}

/**
 * Tree document:
 *   {"root": "v0",
 *    "vertices": [{"name": "v0", "kind": "interior", "genus": 0}, ...],
 *    "edges": [{"from": "v0", "to": "a", "sigma": "1/6", "m": 6,
 *               "reverse_sigma": "-1/6"}, ...]}
 * kind, genus, m and reverse_sigma are optional.
 */
inline ReductionTree tree_from_json(const json& doc) {
  auto where = [](const std::string& path, const std::string& what) { return path + ": " + what; };
  require(doc.is_object(), Errc::ParseError, "tree document must be an object");
  require(doc.contains("vertices") && doc["vertices"].is_array(), Errc::ParseError, "missing 'vertices' array");
  require(doc.contains("edges") && doc["edges"].is_array(), Errc::ParseError, "missing 'edges' array");
  ReductionTree t;
  std::map<std::string, std::size_t> id;
  for (std::size_t i = 0; i < doc["vertices"].size(); ++i) {
    const json& v = doc["vertices"][i];
    std::string path = "vertices[" + std::to_string(i) + "]";
    require(v.is_object() && v.contains("name") && v["name"].is_string(), Errc::ParseError, where(path, "needs a string 'name'"));
    std::string name = v["name"];
    require(!id.count(name), Errc::ParseError, where(path, "duplicate vertex '" + name + "'"));
    VertexKind k = v.contains("kind") ? parse_kind(v["kind"].get<std::string>()) : VertexKind::Interior;
    std::int64_t g = v.contains("genus") ? v["genus"].get<std::int64_t>() : 0;
    id[name] = t.add_vertex(name, k, g);
  }
  auto vertex = [&](const json& e, const char* key, const std::string& path) {
    require(e.contains(key) && e[key].is_string(), Errc::ParseError, where(path, std::string("needs a string '") + key + "'"));
    auto it = id.find(e[key].get<std::string>());
    require(it != id.end(), Errc::ParseError, where(path, "unknown vertex '" + e[key].get<std::string>() + "'"));
    return it->second;
  };
  auto rational = [&](const json& x, const std::string& path) {
    if (x.is_number_integer()) return Rational(x.get<std::int64_t>());
    require(x.is_string(), Errc::ParseError, where(path, "sigma must be an integer or an \"a/b\" string"));
    return parse_rational(x.get<std::string>());
  };
  for (std::size_t i = 0; i < doc["edges"].size(); ++i) {
    const json& e = doc["edges"][i];
    std::string path = "edges[" + std::to_string(i) + "]";
    require(e.is_object() && e.contains("sigma"), Errc::ParseError, where(path, "needs 'sigma'"));
    std::int64_t m = e.contains("m") ? e["m"].get<std::int64_t>() : 0;
    auto idx = t.add_edge(vertex(e, "from", path), vertex(e, "to", path), rational(e["sigma"], path), m);
    if (e.contains("reverse_sigma")) {
      std::int64_t rm = e.contains("reverse_m") ? e["reverse_m"].get<std::int64_t>() : 0;
      t.set_reverse(idx, rational(e["reverse_sigma"], path), rm);
    }
  }
  if (doc.contains("root")) {
    require(doc["root"].is_string() && id.count(doc["root"].get<std::string>()), Errc::ParseError, "unknown root");
    t.set_root(id[doc["root"].get<std::string>()]);
  }
  return t;
}

// ---------------------------------------------------------------- commands

struct Report {
  json inputs = json::object();
  json results = json::object();
  json provenance = json::object();
  bool ok = true;
};

inline void analyze_dessin_cmd(Report& r, int p, const std::string& type_list, std::optional<std::int64_t> n_prime,
                                 const std::string& aut, std::optional<std::uint64_t> group_order) {
  r.inputs = {{"p", p}, {"types", type_list}};
  std::vector<CycleType> types;
  for (const auto& s : split(type_list, ',')) types.push_back(CycleType::parse(s, p));
  require(types.size() == 3, Errc::ParseError, "--types needs three cycle types");
  DessinOverrides ov;
  ov.n_prime = n_prime;
  ov.group_order = group_order;
  if (!aut.empty()) ov.aut_orders = parse_aut(aut);
  if (n_prime) r.inputs["n_prime"] = *n_prime;
  if (!aut.empty()) r.inputs["aut"] = aut;
  if (group_order) r.inputs["group_order"] = *group_order;

  auto a = analyze_dessin(p, types, ov);
  json classes = json::array();
  for (const auto& d : a.classes)
    classes.push_back({{"g0", perm::str(d.g0)},
                       {"g1", perm::str(d.g1)},
                       {"ginf", perm::str(d.ginf)},
                       {"group_order", d.group_order},
                       {"canonical", d.canonical}});
  r.results["count"] = a.classes.size();
  r.results["classes"] = classes;
  r.provenance["count"] = "Nielsen classes of transitive triples g0 g1 ginf = 1, up to simultaneous conjugation in S_p";
  if (a.genus) r.results["genus"] = *a.genus;
  r.provenance["genus"] = "Riemann-Hurwitz: 2g - 2 = -2p + sum (p - cycles)";
  if (a.signature) {
    r.results["signature"] = to_json(a.signature->entries);
    r.provenance["signature"] = "sigma_j = (cycles_j - 1)/(p - 1), zero entries wild";
  }
  if (!a.epsilon.empty()) {
    r.results["epsilon"] = {{"value", a.epsilon}, {"field", a.epsilon_field}};
    r.provenance["epsilon"] = "C(eps z dx/(x(x-1))) = eps z dx/(x(x-1)) on z^m = x^{h1}(x-1)^{h2}";
  }
  if (a.bounds) {
    r.results["n_prime_bounds"] = {{"lower", a.bounds->lower},
                                   {"upper", a.bounds->upper},
                                   {"normalizer_order", a.bounds->normalizer_order},
                                   {"centralizer_order", a.bounds->centralizer_order}};
    r.provenance["n_prime_bounds"] = "upper = [N_G(P) : C_G(P)], lower = gcd(m_j) for injective chi";
  }
  if (a.lifting) {
    r.results["h_values"] = a.h_values;
    r.results["m_values"] = a.m_values;
    r.results["N"] = a.lifting->N;
    r.results["patching"] = {{"count", a.lifting->patching.count},
                             {"orbit_length", a.lifting->patching.orbit_length},
                             {"orbit_count", a.lifting->patching.orbit_count}};
    r.provenance["N"] = "N = (p-1) lcm h_j";
    r.provenance["patching"] = "(p-1) prod h_j special G-maps, in orbits of length N";
    json choices = json::array();
    for (const auto& c : a.choices) {
      json cands = json::array();
      for (const auto& m : c.candidates)
        cands.push_back({{"n_prime", m.n_prime}, {"lift_count", m.lift_count}, {"N_prime", m.N_prime}});
      choices.push_back({{"aut_orders", c.aut_orders}, {"candidates", cands}});
    }
    r.results["choices"] = choices;
    r.results["e_prediction"] = a.e_prediction;
    r.provenance["N_prime"] = "N' = (p-1)/n' lcm (h_j/|Aut_j|)";
    r.provenance["e_prediction"] = "ramification index of p in the field of moduli, one value per admissible choice";
    r.provenance["galois_orbits"] = "orbit decomposition over number fields is not computed";
  }
  if (a.failure) {
    r.ok = false;
    r.results["failure"] = error_json(*a.failure);
    r.results["failure"]["stage"] = a.failure_stage;
  }
}

inline std::string point_str(const XPoint& x, const FieldPtr& F) { return x.infinite ? "inf" : F->str(x.x); }

inline void verify_datum_cmd(Report& r, std::uint32_t p, const std::string& sigma_list) {
  r.inputs = {{"p", p}, {"sigma", sigma_list}};
  auto sigma = parse_rationals(sigma_list);
  auto verdict = is_special(sigma);
  r.results["special"] = verdict.special;
  if (!verdict.special) r.results["special_reason"] = verdict.reason;
  auto dd = build_normalized_special(p, sigma);
  const auto& F = dd.curve.field();
  r.results["field"] = F->name();
  r.results["m"] = dd.h_order;
  r.results["epsilon"] = F->str(dd.epsilon);
  r.results["cartier_eigenvalue"] = F->str(dd.cartier_eigenvalue);
  auto cls = classify_differential(dd.omega, dd.curve);
  r.results["verdict"] = std::string(to_string(cls));
  json pts = json::array();
  for (const auto& cp : critical_invariants(dd))
    pts.push_back({{"tau", point_str(cp.tau, F)},
                   {"m", cp.m_tau},
                   {"h", cp.h_tau},
                   {"sigma", to_json(cp.sigma)},
                   {"kind", std::string(to_string(cp.kind))}});
  r.results["critical_points"] = pts;
  auto vcf = check_local_vcf(dd);
  r.results["vcf"] = {{"pass", vcf.pass}, {"sum", to_json(vcf.sum)}, {"expected", to_json(vcf.expected)}};
  r.provenance["epsilon"] = "eps^{p-1} = lambda^p with C(z dx/(x(x-1))) = lambda z dx/(x(x-1))";
  r.provenance["vcf"] = "sum (sigma_j - 1) = 2 g_X - 2 over the critical points";
  r.ok = cls == DifferentialClass::Logarithmic && vcf.pass;
}

inline void enumerate_signatures_cmd(Report& r, std::uint32_t p, std::size_t max_new, bool divide) {
  r.inputs = {{"p", p}, {"max_new_tails", max_new}, {"denominators_divide_p_minus_1", divide}};
  json sigs = json::array();
  auto all = enumerate_signatures(p, max_new, divide);
  for (const auto& s : all) {
    json roles = json::array();
    for (auto x : s.roles) roles.push_back(std::string(to_string(x)));
    sigs.push_back({{"entries", to_json(s.entries)}, {"roles", roles}, {"label", s.str()}});
  }
  r.results["count"] = all.size();
  r.results["signatures"] = sigs;
  r.provenance["signatures"] = "sigma_j < 2, sigma_j != 1, three entries below 1, fractional parts summing to 1";
}

inline json violations_json(const std::vector<TreeViolation>& vs) {
  json a = json::array();
  for (const auto& v : vs)
    a.push_back({{"rule", v.rule}, {"where", v.where}, {"residual", to_json(v.residual)}, {"detail", v.detail}});
  return a;
}

inline void tree_check_cmd(Report& r, const std::string& path, bool three_point) {
  r.inputs = {{"input", path}, {"three_point", three_point}};
  ReductionTree t = tree_from_json(read_document(path));
  auto rep = validate_tree(t, three_point);
  r.results["validate"] = {{"pass", rep.pass}, {"violations", violations_json(rep.violations)}};
  auto vcf = global_vcf(t);
  json chain = json::array();
  for (const auto& c : vcf.chain)
    chain.push_back({{"added", t.vertices()[c.added].name}, {"sum", to_json(c.sum)}, {"target", to_json(c.target)}});
  r.results["global_vcf"] = {{"pass", vcf.pass}, {"lhs", to_json(vcf.lhs)}, {"rhs", to_json(vcf.rhs)}, {"chain", chain}};
  r.provenance["validate"] = "sigma_e + sigma_ebar = 0 and sum (sigma_e - 1) = 2 g_v - 2 at every interior vertex";
  r.provenance["global_vcf"] = "sum_prim sigma + sum_new (sigma - 1) = 2 g_X - 2 + |B0|";
  r.ok = rep.pass && vcf.pass;
  if (three_point) {
    auto s = classify_structure(t, true);
    json js = {{"class", std::string(to_string(s.cls))}, {"reason", s.reason}};
    if (s.certificate) {
      js["certificate_edge"] = detail::edge_name(t, *s.certificate);
      js["certificate_nu"] = s.certificate_nu;
    }
    r.results["structure"] = js;
    r.provenance["structure"] = "three-point trees reduce to the original component alone";
    if (s.cls == StructureClass::Inconsistent) r.ok = false;
    try {
      auto nu = nu_profile(t);
      json entries = json::array();
      for (const auto& e : nu.entries)
        entries.push_back({{"edge", detail::edge_name(t, e.edge)}, {"nu", e.nu}, {"frac", to_json(e.frac)}});
      r.results["nu_profile"] = {{"pass", nu.pass()}, {"entries", entries}, {"violations", violations_json(nu.violations)}};
    } catch (const Error& e) {
      r.results["nu_profile"] = {{"skipped", error_json(e)}};
    }
  }
}

inline json series_json(const Series& s, const FieldPtr& F) {
  json a = json::array();
  for (std::size_t i = 0; i < s.precision(); ++i) a.push_back(F->str(s[i]));
  return a;
}

inline void tail_normalize_cmd(Report& r, std::int64_t p, std::int64_t m, std::int64_t a, const std::string& coeffs) {
  r.inputs = {{"p", p}, {"m", m}, {"a", a}, {"coeffs", coeffs}};
  std::vector<std::int64_t> b;
  for (const auto& x : split(coeffs, ',')) b.push_back(parse_int(x));
  TailCover tail = make_tail(p, m, a, b);
  auto met = tail_metrics(tail);
  auto cls = classify_tail(tail);
  r.results["sigma"] = to_json(met.sigma);
  r.results["genus"] = met.genus;
  r.results["aut0_order"] = met.aut0_order;
  r.results["kind"] = std::string(to_string(cls.kind));
  auto n = normalize_tail(tail);
  const auto& F = n.canonical.field;
  r.results["field"] = F->name();
  json canon = json::array();
  for (auto c : n.canonical.b) canon.push_back(F->str(c));
  r.results["canonical_coeffs"] = canon;
  json chain = json::array();
  for (const auto& s : n.chain) {
    json step = {{"kind", std::string(to_string(s.kind))}};
    if (s.kind == StepKind::Homothety) step["gamma"] = F->str(s.gamma);
    if (s.kind == StepKind::Shift) step["d"] = F->str(s.d);
    if (s.kind == StepKind::ArtinSchreier) step["g"] = series_json(s.g, F);
    chain.push_back(step);
  }
  r.results["chain"] = chain;
  auto bad = verify_normalization(n);
  r.results["verified"] = !bad.has_value();
  if (bad) r.results["first_mismatch"] = *bad;
  r.provenance["chain"] = "homothety z -> gamma z, shift x -> x + d, then y -> y + g removing the z^{a} term";
  r.provenance["verified"] = "back-substitution of the chain into the input, to stored precision";
  r.ok = !bad;
}

inline void germ_reduce_cmd(Report& r, std::int64_t p, std::int64_t m, std::int64_t h, const std::string& ratio, std::int64_t w) {
  r.inputs = {{"p", p}, {"m", m}, {"h", h}, {"ratio", ratio}, {"w", w}};
  auto v = germ_reduction(p, m, h, parse_rational(ratio), w);
  r.results["outcome"] = std::string(to_string(v.outcome));
  r.results["threshold"] = to_json(v.threshold);
  r.results["rhs"] = v.rhs.str("z");
  if (v.outcome == GermOutcome::GoodReduction) {
    r.results["conductor"] = v.conductor;
  } else {
    r.results["differential"] = v.differential.str("z");
    r.results["zero_order_at_origin"] = v.zero_order_at_origin;
    r.results["simple_zeros"] = v.simple_zeros;
  }
  r.provenance["threshold"] = "good reduction iff val(T)/val(p) >= p m / ((p-1) h)";
}

// ---------------------------------------------------------------- driver

inline int emit(const std::string& command, const Report& r, const std::optional<Error>& err, std::ostream& out,
                const std::string& out_path) {
  json doc = {{"schema_version", kSchemaVersion}, {"command", command}, {"inputs", r.inputs}};
  int code = Exit::Ok;
  if (err) {
    doc["status"] = is_malformed(err->code()) ? "malformed" : "failed";
    doc["error"] = error_json(*err);
    code = is_malformed(err->code()) ? Exit::Malformed : Exit::CheckFailed;
  } else {
    doc["results"] = r.results;
    doc["provenance"] = r.provenance;
    doc["status"] = r.ok ? "ok" : "failed";
    code = r.ok ? Exit::Ok : Exit::CheckFailed;
  }
  std::string text = doc.dump(2) + "\n";
  if (out_path.empty()) {
    out << text;
  } else {
    std::ofstream f(out_path);
    if (!f) {
      out << json{{"schema_version", kSchemaVersion}, {"status", "malformed"},
                  {"error", {{"code", "ParseError"}, {"message", "cannot write '" + out_path + "'"}}}}.dump(2)
          << "\n";
      return Exit::Malformed;
    }
    f << text;
  }
  return code;
}

/// Entry point; args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Stable reduction arithmetic for prime-degree covers", "mildred"};
  app.require_subcommand(1);
  app.fallthrough();  // --out may follow the subcommand
  app.set_help_flag("--help", "print this help");  // -h would clash with the conductor flag
  std::string out_path;
  app.add_option("--out", out_path, "write the report here instead of stdout");

  std::string command;
  std::function<void(Report&)> action;

  int p = 0;
  std::string types, aut, sigma, input, coeffs, ratio;
  std::optional<std::int64_t> n_prime;
  std::optional<std::uint64_t> group_order;
  std::size_t max_new = 2;
  bool divide = false, three_point = false;
  std::int64_t m = 0, a = 0, h = 0, w = 1;

  auto* ad = app.add_subcommand("analyze-dessin", "Nielsen classes and lifting prediction for three cycle types");
  ad->add_option("--p", p, "prime degree")->required();
  ad->add_option("--types", types, "three cycle types, e.g. 2-3,2-3,7")->required();
  ad->add_option("--n-prime", n_prime, "fix n'");
  ad->add_option("--aut", aut, "per tail |Aut| alternatives, e.g. 1,1,1|2");
  ad->add_option("--group-order", group_order, "required monodromy order (default p!)");
  ad->callback([&] {
    command = "analyze-dessin";
    action = [&](Report& r) { analyze_dessin_cmd(r, p, types, n_prime, aut, group_order); };
  });

  auto* vd = app.add_subcommand("verify-datum", "build and check the special deformation datum of a signature");
  vd->add_option("--p", p, "prime")->required();
  vd->add_option("--sigma", sigma, "three rationals, e.g. 1/6,1/6,2/3")->required();
  vd->callback([&] {
    command = "verify-datum";
    action = [&](Report& r) { verify_datum_cmd(r, static_cast<std::uint32_t>(p), sigma); };
  });

  auto* es = app.add_subcommand("enumerate-signatures", "list admissible special signatures");
  es->add_option("--p", p, "prime")->required();
  es->add_option("--max-new", max_new, "maximum number of new tails");
  es->add_flag("--divide-p-minus-1", divide, "only denominators dividing p-1");
  es->callback([&] {
    command = "enumerate-signatures";
    action = [&](Report& r) { enumerate_signatures_cmd(r, static_cast<std::uint32_t>(p), max_new, divide); };
  });

  auto* tc = app.add_subcommand("tree-check", "validate a reduction tree document");
  tc->add_option("--input", input, "tree JSON")->required();
  tc->add_flag("--three-point", three_point, "apply the three-point checks and classify");
  tc->callback([&] {
    command = "tree-check";
    action = [&](Report& r) { tree_check_cmd(r, input, three_point); };
  });

  auto* tn = app.add_subcommand("tail-normalize", "normalize y^p - y = z^a (b0 x + b1 x^2 + ...), x = z^m");
  tn->add_option("--p", p, "prime")->required();
  tn->add_option("--m", m, "tame order")->required();
  tn->add_option("--a", a, "h - m")->required();
  tn->add_option("--coeffs", coeffs, "b0,b1,... as integers mod p")->required();
  tn->callback([&] {
    command = "tail-normalize";
    action = [&](Report& r) { tail_normalize_cmd(r, p, m, a, coeffs); };
  });

  auto* gr = app.add_subcommand("germ-reduce", "reduction of a new-tail germ at a valuation ratio");
  gr->add_option("--p", p, "prime")->required();
  gr->add_option("--m", m, "tame order")->required();
  gr->set_help_flag("--help", "print this help");
  gr->add_option("--h", h, "conductor")->required();
  gr->add_option("--ratio", ratio, "val(T)/val(p) as a/b")->required();
  gr->add_option("--w", w, "residue of the unit w");
  gr->callback([&] {
    command = "germ-reduce";
    action = [&](Report& r) { germ_reduce_cmd(r, p, m, h, ratio, w); };
  });

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return Exit::Ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return Exit::Ok;
  } catch (const CLI::ParseError& e) {
    bool unknown = !args.empty() && args[0].rfind("-", 0) != 0;
    for (const auto* sub : app.get_subcommands({})) unknown = unknown && sub->get_name() != args[0];
    Error wrapped(unknown ? Errc::UnknownSubcommand : Errc::ParseError,
                  unknown ? "unknown subcommand '" + args[0] + "'" : std::string(e.what()));
    err << wrapped.what() << "\n";
    return emit(unknown ? "?" : (command.empty() ? "?" : command), Report{}, wrapped, out, "");
  }

  Report r;
  std::optional<Error> failure;
  try {
    action(r);
  } catch (const Error& e) {
    failure = e;
  } catch (const json::exception& e) {
    failure = Error(Errc::ParseError, e.what());
  }
  return emit(command, r, failure, out, out_path);
}

}  // namespace mildred::cli
