#pragma once

/**
 * @file tree_calculus.hpp
 * @brief Reduction trees with exact edge invariants: vanishing-cycle checks,
 *        the nu-profile, structural classification, and a bounded enumerator.
 *
 * Each edge is stored once, directed; the opposite direction carries -sigma
 * unless an explicit reverse value was supplied (documents may do that, and
 * then antisymmetry is something to check rather than a given).
 *
 * A leaf's sigma_j is the sigma of the edge pointing *into* the leaf.
 */

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mildred/deformation_data.hpp"
#include "mildred/rational.hpp"

namespace mildred {

enum class VertexKind { Interior, LeafPrim, LeafNew, LeafWild };

inline std::string_view to_string(VertexKind k) {
  switch (k) {
    case VertexKind::Interior: return "interior";
    case VertexKind::LeafPrim: return "prim";
    case VertexKind::LeafNew: return "new";
    case VertexKind::LeafWild: return "wild";
  }
  return "?";
}

struct TreeVertex {
  std::string name;
  VertexKind kind = VertexKind::Interior;
  std::int64_t genus = 0;  // interior vertices only
  bool is_leaf() const { return kind != VertexKind::Interior; }
};

struct TreeEdge {
  std::size_t source = 0;
  std::size_t target = 0;
  Rational sigma;
  std::int64_t m = 0;  // optional (0 = not given)
  std::optional<Rational> reverse_sigma;
  std::int64_t reverse_m = 0;
};

/// A directed view of an edge: `forward` means source -> target as stored.
struct HalfEdge {
  std::size_t edge = 0;
  bool forward = true;
  std::size_t from = 0;
  std::size_t to = 0;
  Rational sigma;
};

class ReductionTree {
 public:
  std::size_t add_vertex(std::string name, VertexKind kind, std::int64_t genus = 0) {
    vertices_.push_back({std::move(name), kind, genus});
    return vertices_.size() - 1;
  }
  /// Edge source -> target carrying sigma (and optionally m, giving h = sigma m).
  std::size_t add_edge(std::size_t s, std::size_t t, Rational sigma, std::int64_t m = 0) {
    edges_.push_back({s, t, sigma, m, std::nullopt, 0});
    return edges_.size() - 1;
  }
  void set_reverse(std::size_t e, Rational sigma, std::int64_t m = 0) {
    edges_.at(e).reverse_sigma = sigma;
    edges_.at(e).reverse_m = m;
  }
  void set_root(std::size_t r) { root_ = r; }
  void set_sigma(std::size_t e, Rational s) { edges_.at(e).sigma = s; }
  void set_genus(std::size_t v, std::int64_t g) { vertices_.at(v).genus = g; }

  std::size_t root() const { return root_; }
  const std::vector<TreeVertex>& vertices() const { return vertices_; }
  const std::vector<TreeEdge>& edges() const { return edges_; }

  Rational sigma_of(const TreeEdge& e, bool forward) const {
    if (forward) return e.sigma;
    return e.reverse_sigma ? *e.reverse_sigma : -e.sigma;
  }

  /// All directed edges leaving v.
  std::vector<HalfEdge> out(std::size_t v) const {
    std::vector<HalfEdge> r;
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      const auto& e = edges_[i];
      if (e.source == v) r.push_back({i, true, e.source, e.target, sigma_of(e, true)});
      if (e.target == v) r.push_back({i, false, e.target, e.source, sigma_of(e, false)});
    }
    return r;
  }

  std::vector<HalfEdge> all_half_edges() const {
    std::vector<HalfEdge> r;
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      const auto& e = edges_[i];
      r.push_back({i, true, e.source, e.target, sigma_of(e, true)});
      r.push_back({i, false, e.target, e.source, sigma_of(e, false)});
    }
    return r;
  }

  /// sigma_j of a leaf (the edge pointing into it).
  Rational leaf_sigma(std::size_t leaf) const {
    for (const auto& h : out(leaf)) {
      // h leaves the leaf; the opposite direction points into it
      const auto& e = edges_[h.edge];
      return sigma_of(e, !h.forward);
    }
    fail(Errc::MalformedGraph, "leaf without an edge");
  }

  std::vector<std::size_t> leaves(VertexKind k) const {
    std::vector<std::size_t> r;
    for (std::size_t i = 0; i < vertices_.size(); ++i)
      if (vertices_[i].kind == k) r.push_back(i);
    return r;
  }
  std::vector<std::size_t> interior() const { return leaves(VertexKind::Interior); }
  std::size_t b0_count() const { return leaves(VertexKind::LeafPrim).size() + leaves(VertexKind::LeafWild).size(); }
  std::int64_t total_genus() const {
    std::int64_t g = 0;
    for (const auto& v : vertices_)
      if (!v.is_leaf()) g += v.genus;
    return g;
  }

  /// Vertices on the target side of half-edge h (the component of T - {e} holding `to`).
  std::vector<bool> far_side(const HalfEdge& h) const {
    std::vector<bool> seen(vertices_.size(), false);
    std::vector<std::size_t> stack = {h.to};
    seen[h.to] = true;
    seen[h.from] = true;  // block crossing back over e
    while (!stack.empty()) {
      std::size_t v = stack.back();
      stack.pop_back();
      for (const auto& o : out(v)) {
        if (o.edge == h.edge || seen[o.to]) continue;
        seen[o.to] = true;
        stack.push_back(o.to);
      }
    }
    seen[h.from] = false;
    return seen;
  }

 private:
  std::vector<TreeVertex> vertices_;
  std::vector<TreeEdge> edges_;
  std::size_t root_ = 0;
};

struct TreeViolation {
  std::string rule;  // "antisymmetry", "vertex_sum", "leaf_range", "three_point", "m_compat"
  std::string where;
  Rational residual;
  std::string detail;
};

struct TreeReport {
  bool pass = true;
  std::vector<TreeViolation> violations;
};

enum class StructureClass { Star, Exceptional1, Exceptional2, Inconsistent };

inline std::string_view to_string(StructureClass c) {
  switch (c) {
    case StructureClass::Star: return "Star";
    case StructureClass::Exceptional1: return "Exceptional1";
    case StructureClass::Exceptional2: return "Exceptional2";
    case StructureClass::Inconsistent: return "Inconsistent";
  }
  return "?";
}

namespace detail {

inline std::string edge_name(const ReductionTree& t, const HalfEdge& h) {
  return t.vertices()[h.from].name + "->" + t.vertices()[h.to].name;
}

// Exceptional leaf configurations: one prim leaf with sigma 1 and no new
// leaves, or no prim leaves and one new leaf with sigma 2.
inline std::optional<StructureClass> exceptional_config(const ReductionTree& t) {
  auto prim = t.leaves(VertexKind::LeafPrim), news = t.leaves(VertexKind::LeafNew);
  if (prim.size() == 1 && news.empty() && t.leaf_sigma(prim[0]) == Rational(1)) return StructureClass::Exceptional1;
  if (prim.empty() && news.size() == 1 && t.leaf_sigma(news[0]) == Rational(2)) return StructureClass::Exceptional2;
  return std::nullopt;
}

// Throws MalformedGraph unless t is a tree rooted at an interior vertex with
// leaves of degree one.
inline void check_structure(const ReductionTree& t) {
  const auto& V = t.vertices();
  const auto& E = t.edges();
  require(!V.empty(), Errc::MalformedGraph, "empty tree");
  require(t.root() < V.size(), Errc::MalformedGraph, "root out of range");
  require(V[t.root()].kind == VertexKind::Interior, Errc::MalformedGraph, "root must be an interior vertex");
  require(E.size() + 1 == V.size(), Errc::MalformedGraph,
          "a tree on " + std::to_string(V.size()) + " vertices needs " + std::to_string(V.size() - 1) + " edges");
  for (const auto& e : E) {
    require(e.source < V.size() && e.target < V.size(), Errc::MalformedGraph, "edge endpoint out of range");
    require(e.source != e.target, Errc::MalformedGraph, "self-loop at " + V[e.source].name);
  }
  std::vector<bool> seen(V.size(), false);
  std::vector<std::size_t> stack = {t.root()};
  seen[t.root()] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    for (const auto& h : t.out(v))
      if (!seen[h.to]) {
        seen[h.to] = true;
        ++count;
        stack.push_back(h.to);
      }
  }
  require(count == V.size(), Errc::MalformedGraph, "graph is not connected");
  for (std::size_t v = 0; v < V.size(); ++v) {
    if (V[v].is_leaf())
      require(t.out(v).size() == 1, Errc::MalformedGraph, "leaf " + V[v].name + " must have degree 1");
    else
      require(V[v].genus >= 0, Errc::MalformedGraph, "negative genus at " + V[v].name);
    if (V[v].is_leaf())
      require(!V[t.out(v)[0].to].is_leaf(), Errc::MalformedGraph, "two leaves joined by an edge");
  }
}

}  // namespace detail

/**
 * Edge antisymmetry (and m-compatibility when m is given on both sides),
 * interior vertex sums sum_{s(e)=v} (sigma_e - 1) = 2 g_v - 2, and leaf ranges:
 * wild 0, prim in (0,1), new in (1,2), except the two exceptional
 * configurations. With three_point set, |B_0| must be 3.
 */
inline TreeReport validate_tree(const ReductionTree& t, bool three_point = false) {
  detail::check_structure(t);
  TreeReport r;
  auto add = [&](std::string rule, std::string where, Rational res, std::string detail) {
    r.pass = false;
    r.violations.push_back({std::move(rule), std::move(where), res, std::move(detail)});
  };
  const auto& V = t.vertices();
  for (const auto& e : t.edges()) {
    if (!e.reverse_sigma) continue;
    Rational s = e.sigma + *e.reverse_sigma;
    std::string nm = V[e.source].name + "->" + V[e.target].name;
    if (!s.is_zero()) add("antisymmetry", nm, s, "sigma_e + sigma_ebar = " + s.str());
    if (e.m && e.reverse_m && e.m != e.reverse_m)
      add("m_compat", nm, Rational(e.m - e.reverse_m), "m differs across the edge");
  }
  for (const auto& e : t.edges()) {
    if (e.m <= 0) continue;
    Rational h = e.sigma * Rational(e.m);
    if (!h.is_integer())
      add("m_compat", V[e.source].name + "->" + V[e.target].name, h.frac(), "sigma*m is not an integer");
  }
  for (std::size_t v = 0; v < V.size(); ++v) {
    if (V[v].is_leaf()) continue;
    Rational sum;
    for (const auto& h : t.out(v)) sum += h.sigma - Rational(1);
    Rational target(2 * V[v].genus - 2);
    if (sum != target) add("vertex_sum", V[v].name, sum - target, "sum = " + sum.str() + ", expected " + target.str());
  }
  auto exc = detail::exceptional_config(t);
  for (std::size_t v = 0; v < V.size(); ++v) {
    if (!V[v].is_leaf()) continue;
    Rational s = t.leaf_sigma(v);
    bool ok = true;
    switch (V[v].kind) {
      case VertexKind::LeafWild: ok = s.is_zero(); break;
      case VertexKind::LeafPrim:
        ok = (s > Rational(0) && s < Rational(1)) || (exc == StructureClass::Exceptional1 && s == Rational(1));
        break;
      case VertexKind::LeafNew:
        ok = (s > Rational(1) && s < Rational(2)) || (exc == StructureClass::Exceptional2 && s == Rational(2));
        break;
      default: break;
    }
    if (!ok) add("leaf_range", V[v].name, s, std::string(to_string(V[v].kind)) + " leaf with sigma " + s.str());
  }
  if (three_point && t.b0_count() != 3)
    add("three_point", "B0", Rational(static_cast<std::int64_t>(t.b0_count()) - 3),
        "|B0| = " + std::to_string(t.b0_count()));
  return r;
}

struct ChainStep {
  std::size_t added = 0;  // vertex v_i
  Rational sum;           // sum over E_i of (sigma_e - 1)
  Rational target;        // 2 g(T_i) - 2
};

struct GlobalVcf {
  bool pass = false;
  Rational lhs;  // sum_prim sigma + sum_new (sigma - 1)
  Rational rhs;  // 2 g_X - 2 + |B0|
  std::vector<ChainStep> chain;
};

/**
 * Global identity over the leaves plus its derivation through the chain
 * T_0 = {v_0} c T_1 c ... of interior subtrees (breadth-first order), with
 * E_i the edges leaving T_i. The target at step i is 2 g(T_i) - 2, the sum of
 * the genera in T_i; it equals 2 g_X - 2 throughout when only the root has
 * positive genus.
 */
inline GlobalVcf global_vcf(const ReductionTree& t) {
  detail::check_structure(t);
  GlobalVcf out;
  for (auto j : t.leaves(VertexKind::LeafPrim)) out.lhs += t.leaf_sigma(j);
  for (auto j : t.leaves(VertexKind::LeafNew)) out.lhs += t.leaf_sigma(j) - Rational(1);
  out.rhs = Rational(2 * t.total_genus() - 2 + static_cast<std::int64_t>(t.b0_count()));
  bool ok = out.lhs == out.rhs;

  const auto& V = t.vertices();
  std::vector<std::size_t> order = {t.root()};
  std::vector<bool> in(V.size(), false);
  in[t.root()] = true;
  for (std::size_t k = 0; k < order.size(); ++k)
    for (const auto& h : t.out(order[k]))
      if (!in[h.to] && !V[h.to].is_leaf()) {
        in[h.to] = true;
        order.push_back(h.to);
      }
  std::vector<bool> inside(V.size(), false);
  std::int64_t g = 0;
  for (auto v : order) {
    inside[v] = true;
    g += V[v].genus;
    ChainStep st;
    st.added = v;
    for (auto u = std::size_t{0}; u < V.size(); ++u) {
      if (!inside[u]) continue;
      for (const auto& h : t.out(u))
        if (!inside[h.to]) st.sum += h.sigma - Rational(1);
    }
    st.target = Rational(2 * g - 2);
    if (st.sum != st.target) ok = false;
    out.chain.push_back(st);
  }
  out.pass = ok;
  return out;
}

/// Every interior vertex has at least two edges not leading to a wild leaf
/// (degree >= 2 in the dual graph of the special fibre). The nu identities
/// below rest on this.
inline bool interior_branching(const ReductionTree& t) {
  for (auto v : t.interior()) {
    int k = 0;
    for (const auto& h : t.out(v)) k += t.vertices()[h.to].kind != VertexKind::LeafWild;
    if (k < 2) return false;
  }
  return true;
}

struct NuEntry {
  HalfEdge edge;
  std::int64_t nu = 0;
  Rational frac;
  std::int64_t b0_beyond = 0;  // |{j in B0 on the target side}|
  bool root_precedes = false;  // root on the source side
};

struct NuProfile {
  std::vector<NuEntry> entries;
  std::vector<TreeViolation> violations;
  bool pass() const { return violations.empty(); }
};

/**
 * nu_e = floor(sigma_e) on every directed edge, with the checks
 *  - nu_e + nu_ebar = -1 on edges not touching a wild leaf,
 *  - sum <sigma_e> = 1 and sum (nu_e - 1) = -3 around each interior vertex,
 *  - -2 <= nu_e <= 1,
 *  - nu_e = 1 - |{j in B0 beyond e}| and (nu_e >= 0 iff the root precedes e),
 *    on edges whose source is not a wild leaf (from a wild leaf nu = 0 always).
 * The identities need interior_branching(t); without it they are reported
 * as violations, not assumed.
 */
inline NuProfile nu_profile(const ReductionTree& t) {
  detail::check_structure(t);
  require(t.b0_count() == 3, Errc::PreconditionViolated, "nu-profile needs three-point mode (|B0| = 3)");
  auto tails = t.leaves(VertexKind::LeafPrim).size() + t.leaves(VertexKind::LeafNew).size();
  require(tails >= 2 && !detail::exceptional_config(t), Errc::ExceptionalInput,
          "nu-profile needs a non-exceptional tree with at least two tails");
  NuProfile P;
  const auto& V = t.vertices();
  auto add = [&](std::string rule, std::string where, Rational res, std::string d) {
    P.violations.push_back({std::move(rule), std::move(where), res, std::move(d)});
  };
  for (const auto& h : t.all_half_edges()) {
    NuEntry n;
    n.edge = h;
    n.nu = h.sigma.floor();
    n.frac = h.sigma.frac();
    auto far = t.far_side(h);
    for (std::size_t v = 0; v < V.size(); ++v)
      if (far[v] && (V[v].kind == VertexKind::LeafPrim || V[v].kind == VertexKind::LeafWild)) ++n.b0_beyond;
    n.root_precedes = !far[t.root()];
    P.entries.push_back(n);
    std::string nm = detail::edge_name(t, h);
    if (n.nu < -2 || n.nu > 1) add("nu_bounds", nm, Rational(n.nu), "nu = " + std::to_string(n.nu) + " outside [-2, 1]");
    if (V[h.from].kind != VertexKind::LeafWild) {
      std::int64_t closed = 1 - n.b0_beyond;
      if (closed != n.nu)
        add("nu_closed_form", nm, Rational(n.nu - closed),
            "nu = " + std::to_string(n.nu) + ", B0 count gives " + std::to_string(closed));
      if ((n.nu >= 0) != n.root_precedes)
        add("nu_sign", nm, Rational(n.nu), "sign of nu disagrees with the root's position");
    }
  }
  for (std::size_t i = 0; i + 1 < P.entries.size(); i += 2) {
    const auto& a = P.entries[i];
    const auto& b = P.entries[i + 1];
    if (V[a.edge.from].kind == VertexKind::LeafWild || V[a.edge.to].kind == VertexKind::LeafWild) continue;
    if (a.nu + b.nu != -1)
      add("nu_pair", detail::edge_name(t, a.edge), Rational(a.nu + b.nu + 1),
          "nu_e + nu_ebar = " + std::to_string(a.nu + b.nu));
  }
  for (std::size_t v = 0; v < V.size(); ++v) {
    if (V[v].is_leaf()) continue;
    Rational fs;
    std::int64_t ns = 0;
    for (const auto& h : t.out(v)) {
      fs += h.sigma.frac();
      ns += h.sigma.floor() - 1;
    }
    if (fs != Rational(1)) add("frac_sum", V[v].name, fs - Rational(1), "sum <sigma_e> = " + fs.str());
    if (ns != -3) add("nu_sum", V[v].name, Rational(ns + 3), "sum (nu_e - 1) = " + std::to_string(ns));
  }
  return P;
}

struct StructureVerdict {
  StructureClass cls = StructureClass::Star;
  std::string reason;
  std::optional<std::size_t> vertex;  // offending interior vertex
  std::optional<HalfEdge> certificate;  // its edge toward the root
  std::int64_t certificate_nu = 0;
};

/**
 * Star when the root is the only interior vertex (Exceptional1/2 when the
 * leaves form an exceptional configuration). Otherwise Inconsistent, naming a
 * non-root interior vertex v next to the root and the edge e0 from v to the
 * root: in three-point mode nu_{e0} < 0, so omega_v has a pole of order >= 2
 * (not logarithmic), and the nu-profile around v is the configuration that
 * rules out an exact datum.
 */
inline StructureVerdict classify_structure(const ReductionTree& t, bool three_point = true) {
  detail::check_structure(t);
  StructureVerdict out;
  auto inner = t.interior();
  auto exc = detail::exceptional_config(t);
  if (inner.size() == 1) {
    out.cls = exc ? *exc : StructureClass::Star;
    return out;
  }
  out.cls = StructureClass::Inconsistent;
  std::size_t v = 0;
  std::optional<HalfEdge> e0;
  for (const auto& h : t.out(t.root()))
    if (!t.vertices()[h.to].is_leaf()) {
      for (const auto& back : t.out(h.to))
        if (back.to == t.root()) {
          v = h.to;
          e0 = back;
        }
      break;
    }
  out.vertex = v;
  out.certificate = e0;
  out.certificate_nu = e0 ? e0->sigma.floor() : 0;
  const std::string vn = t.vertices()[v].name;
  if (!three_point) {
    out.reason = "interior vertex " + vn + " besides the root (no three-point classification requested)";
  } else if (exc) {
    out.reason = "exceptional leaves need the root and the unique tail only; vertex " + vn +
                 " has edge to the root with sigma " + (e0 ? e0->sigma.str() : "?");
  } else {
    out.reason = "vertex " + vn + " precedes the root: sigma=" + (e0 ? e0->sigma.str() : "?") +
                 ", nu=" + std::to_string(out.certificate_nu) +
                 " < 0 gives a pole of order >= 2 (not logarithmic) and a unique negative nu with fractional sum 1 (not exact)";
  }
  return out;
}

/// Canonical string of the tree rooted at its root (sorted recursive encoding).
inline std::string canonical_form(const ReductionTree& t) {
  const auto& V = t.vertices();
  std::function<std::string(std::size_t, std::size_t, const Rational&)> enc = [&](std::size_t v, std::size_t parent,
                                                                                  const Rational& in) {
    if (V[v].is_leaf()) return std::string(to_string(V[v].kind)) + ":" + in.str();
    std::vector<std::string> kids;
    for (const auto& h : t.out(v))
      if (h.to != parent) kids.push_back(enc(h.to, v, h.sigma));
    std::sort(kids.begin(), kids.end());
    std::string s = "(g" + std::to_string(V[v].genus) + ":" + in.str();
    for (auto& k : kids) s += " " + k;
    return s + ")";
  };
  return enc(t.root(), V.size(), Rational(0));
}

// ---------------------------------------------------------------------------
// Bounded enumeration

struct DatumAdmissibility {
  bool logarithmic_possible = false;
  bool exact_possible = false;
  bool admissible() const { return logarithmic_possible || exact_possible; }
};

/**
 * Whether the outgoing invariants at an interior vertex can belong to a
 * logarithmic or an exact datum: a logarithmic form has at worst simple
 * poles, so every sigma_e >= 0; an exact form has no simple poles (sigma_e != 0)
 * and, for a cyclic datum, cannot have a unique negative nu_e together with
 * sum <sigma_e> = 1 and sum (nu_e - 1) = -3.
 */
inline DatumAdmissibility datum_admissibility(const std::vector<Rational>& out_sigmas) {
  DatumAdmissibility a;
  a.logarithmic_possible = std::all_of(out_sigmas.begin(), out_sigmas.end(), [](const Rational& s) { return s >= Rational(0); });
  bool has_zero = std::any_of(out_sigmas.begin(), out_sigmas.end(), [](const Rational& s) { return s.is_zero(); });
  int negative = 0;
  Rational fs;
  std::int64_t ns = 0;
  for (const auto& s : out_sigmas) {
    if (s.floor() < 0) ++negative;
    fs += s.frac();
    ns += s.floor() - 1;
  }
  bool excluded = negative == 1 && fs == Rational(1) && ns == -3;
  a.exact_possible = !has_zero && !excluded;
  return a;
}

struct TreeEnumeration {
  std::vector<ReductionTree> trees;
  std::size_t leaf_sets = 0;
  std::size_t candidates = 0;         // valid three-point trees before the datum filter
  std::size_t rejected_by_datum = 0;  // of which some vertex admits no datum
};

namespace detail {

struct LeafSpec {
  VertexKind kind;
  Rational sigma;
  std::string code() const { return std::string(to_string(kind)) + ":" + sigma.str(); }
  bool in_b0() const { return kind == VertexKind::LeafPrim || kind == VertexKind::LeafWild; }
};

struct SubTree;
using SubTreePtr = std::shared_ptr<const SubTree>;

// Either a leaf or an interior vertex with children.
struct SubTree {
  std::optional<LeafSpec> leaf;
  std::vector<SubTreePtr> children;
  Rational in_sigma;  // sigma of the edge from the parent into this vertex
  std::size_t interior = 0;
  std::size_t b0 = 0;
  bool admissible = true;  // every interior vertex below (and at) here admits a datum
  std::string code;
};

class TreeBuilder {
 public:
  TreeBuilder(std::size_t max_interior, bool datum_filter) : max_interior_(max_interior), datum_filter_(datum_filter) {}

  // All canonical rooted trees for the root with the given leaves.
  void roots(const std::vector<LeafSpec>& items, TreeEnumeration& out, std::set<std::string>& seen) {
    for_each_partition(items, [&](const std::vector<std::vector<std::size_t>>& blocks) {
      // each B0 leaf in its own root branch
      std::vector<std::vector<LeafSpec>> groups;
      for (const auto& b : blocks) {
        std::vector<LeafSpec> g;
        std::size_t b0 = 0;
        for (auto i : b) {
          g.push_back(items[i]);
          b0 += items[i].in_b0();
        }
        if (b0 > 1) return;
        groups.push_back(std::move(g));
      }
      std::vector<std::vector<SubTreePtr>> options;
      for (const auto& g : groups) {
        options.push_back(g.size() == 1 ? std::vector<SubTreePtr>{leaf(g[0])} : subtrees(g, max_interior_ - 1));
        if (options.back().empty()) return;
      }
      std::vector<SubTreePtr> pick(options.size());
      std::function<void(std::size_t, std::size_t)> choose = [&](std::size_t k, std::size_t used) {
        if (k == options.size()) {
          emit(pick, out, seen);
          return;
        }
        for (const auto& o : options[k]) {
          if (used + o->interior > max_interior_ - 1) continue;
          pick[k] = o;
          choose(k + 1, used + o->interior);
        }
      };
      choose(0, 0);
    });
  }

 private:
  static void for_each_partition(const std::vector<LeafSpec>& items,
                                 const std::function<void(const std::vector<std::vector<std::size_t>>&)>& fn) {
    std::vector<std::vector<std::size_t>> blocks;
    std::set<std::string> seen;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == items.size()) {
        std::vector<std::string> codes;
        for (const auto& b : blocks) {
          std::vector<std::string> c;
          for (auto k : b) c.push_back(items[k].code());
          std::sort(c.begin(), c.end());
          std::string s;
          for (auto& x : c) s += x + ",";
          codes.push_back(s);
        }
        std::sort(codes.begin(), codes.end());
        std::string key;
        for (auto& c : codes) key += "[" + c + "]";
        if (seen.insert(key).second) fn(blocks);
        return;
      }
      for (std::size_t b = 0; b < blocks.size(); ++b) {
        blocks[b].push_back(i);
        rec(i + 1);
        blocks[b].pop_back();
      }
      blocks.push_back({i});
      rec(i + 1);
      blocks.pop_back();
    };
    rec(0);
  }

  static SubTreePtr leaf(const LeafSpec& s) {
    auto t = std::make_shared<SubTree>();
    t->leaf = s;
    t->in_sigma = s.sigma;
    t->b0 = s.in_b0();
    t->code = s.code();
    return t;
  }

  static std::string key_of(const std::vector<LeafSpec>& items, std::size_t budget) {
    std::vector<std::string> c;
    for (const auto& s : items) c.push_back(s.code());
    std::sort(c.begin(), c.end());
    std::string k = std::to_string(budget) + "|";
    for (auto& x : c) k += x + ",";
    return k;
  }

  // Subtrees with an interior root over the given leaves (at least two children,
  // at most `budget` interior vertices).
  std::vector<SubTreePtr> subtrees(const std::vector<LeafSpec>& items, std::size_t budget) {
    if (budget == 0 || items.size() < 2) return {};
    std::string key = key_of(items, budget);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    std::map<std::string, SubTreePtr> found;
    for_each_partition(items, [&](const std::vector<std::vector<std::size_t>>& blocks) {
      if (blocks.size() < 2) return;
      std::vector<std::vector<SubTreePtr>> options;
      for (const auto& b : blocks) {
        std::vector<LeafSpec> g;
        for (auto i : b) g.push_back(items[i]);
        options.push_back(g.size() == 1 ? std::vector<SubTreePtr>{leaf(g[0])} : subtrees(g, budget - 1));
        if (options.back().empty()) return;
      }
      std::vector<SubTreePtr> pick(options.size());
      std::function<void(std::size_t, std::size_t)> choose = [&](std::size_t k, std::size_t used) {
        if (k == options.size()) {
          auto t = std::make_shared<SubTree>();
          t->children = pick;
          t->interior = used + 1;
          Rational sum;
          std::vector<Rational> outs;
          std::vector<std::string> codes;
          for (const auto& c : pick) {
            sum += c->in_sigma - Rational(1);
            outs.push_back(c->in_sigma);
            t->b0 += c->b0;
            t->admissible = t->admissible && c->admissible;
            codes.push_back(c->code);
          }
          // genus 0: (-sigma_in - 1) + sum = -2
          t->in_sigma = sum + Rational(1);
          outs.push_back(-t->in_sigma);
          if (datum_filter_ && !datum_admissibility(outs).admissible()) t->admissible = false;
          std::sort(codes.begin(), codes.end());
          t->code = "(" + t->in_sigma.str();
          for (auto& c : codes) t->code += " " + c;
          t->code += ")";
          found.emplace(t->code, t);
          return;
        }
        for (const auto& o : options[k]) {
          if (used + o->interior > budget - 1) continue;
          pick[k] = o;
          choose(k + 1, used + o->interior);
        }
      };
      choose(0, 0);
    });
    std::vector<SubTreePtr> out;
    for (auto& [k, v] : found) out.push_back(v);
    memo_[key] = out;
    return out;
  }

  void emit(const std::vector<SubTreePtr>& kids, TreeEnumeration& out, std::set<std::string>& seen) {
    std::vector<std::string> codes;
    for (const auto& c : kids) codes.push_back(c->code);
    std::sort(codes.begin(), codes.end());
    std::string code = "R";
    for (auto& c : codes) code += " " + c;
    if (!seen.insert(code).second) return;

    ReductionTree t;
    std::size_t root = t.add_vertex("v0", VertexKind::Interior, 0);
    t.set_root(root);
    std::size_t counter = 1;
    std::map<VertexKind, std::size_t> leaf_count;
    std::function<void(std::size_t, const SubTreePtr&)> attach = [&](std::size_t parent, const SubTreePtr& s) {
      if (s->leaf) {
        auto k = s->leaf->kind;
        std::string nm = std::string(to_string(k)) + std::to_string(++leaf_count[k]);
        std::size_t id = t.add_vertex(nm, k);
        t.add_edge(parent, id, s->in_sigma);
        return;
      }
      std::size_t id = t.add_vertex("v" + std::to_string(counter++), VertexKind::Interior, 0);
      t.add_edge(parent, id, s->in_sigma);
      for (const auto& c : s->children) attach(id, c);
    };
    bool ok = true;
    std::vector<Rational> outs;
    for (const auto& c : kids) {
      attach(root, c);
      ok = ok && c->admissible;
      outs.push_back(c->in_sigma);
    }
    if (!validate_tree(t, true).pass) return;  // root vertex sum or leaf rules
    ++out.candidates;
    if (datum_filter_ && (!ok || !datum_admissibility(outs).admissible())) {
      ++out.rejected_by_datum;
      return;
    }
    out.trees.push_back(std::move(t));
  }

  std::size_t max_interior_;
  bool datum_filter_;
  std::map<std::string, std::vector<SubTreePtr>> memo_;
};

// Leaf multisets: three B0 leaves plus new leaves, fractional parts summing to
// one, denominators dividing p-1 and at most max_den; plus the two
// exceptional configurations.
inline std::vector<std::vector<LeafSpec>> leaf_sets(std::int64_t p_minus_1, std::int64_t max_den) {
  const std::int64_t p = p_minus_1 + 1;
  std::vector<Rational> fr;
  for (std::int64_t d = 2; d <= std::min(max_den, p_minus_1); ++d) {
    if (p_minus_1 % d) continue;
    for (std::int64_t n = 1; n < d; ++n)
      if (std::gcd(n, d) == 1) fr.emplace_back(n, d);
  }
  std::sort(fr.begin(), fr.end());
  std::vector<Rational> b0 = {Rational(0)};
  b0.insert(b0.end(), fr.begin(), fr.end());
  std::vector<Rational> news;
  for (const auto& f : fr)
    if ((f + Rational(1)).num() % p != 0) news.push_back(f + Rational(1));

  std::vector<std::vector<LeafSpec>> out;
  auto spec = [](const Rational& s) {
    if (s.is_zero()) return LeafSpec{VertexKind::LeafWild, s};
    return LeafSpec{s < Rational(1) ? VertexKind::LeafPrim : VertexKind::LeafNew, s};
  };
  std::vector<Rational> cur;  // new leaves chosen so far
  std::function<void(std::size_t, Rational)> rec = [&](std::size_t start, Rational used) {
    for (std::size_t a = 0; a < b0.size(); ++a)
      for (std::size_t b = a; b < b0.size(); ++b)
        for (std::size_t c = b; c < b0.size(); ++c) {
          if (used + b0[a] + b0[b] + b0[c] != Rational(1)) continue;
          std::vector<LeafSpec> s = {spec(b0[a]), spec(b0[b]), spec(b0[c])};
          std::size_t tails_count = cur.size();
          for (auto x : {b0[a], b0[b], b0[c]}) tails_count += !x.is_zero();
          if (tails_count < 2) continue;
          for (const auto& n : cur) s.push_back(spec(n));
          out.push_back(std::move(s));
        }
    for (std::size_t i = start; i < news.size(); ++i) {
      Rational u = used + news[i].frac();
      if (u > Rational(1)) continue;
      cur.push_back(news[i]);
      rec(i, u);
      cur.pop_back();
    }
  };
  rec(0, Rational(0));
  out.push_back({{VertexKind::LeafPrim, Rational(1)}, {VertexKind::LeafWild, Rational(0)}, {VertexKind::LeafWild, Rational(0)}});
  out.push_back({{VertexKind::LeafWild, Rational(0)},
                 {VertexKind::LeafWild, Rational(0)},
                 {VertexKind::LeafWild, Rational(0)},
                 {VertexKind::LeafNew, Rational(2)}});
  return out;
}

inline TreeEnumeration enumerate_trees(std::int64_t p_minus_1, std::size_t max_interior, std::int64_t max_den,
                                       bool datum_filter) {
  require(max_interior <= 6 && max_den <= 12, Errc::BoundsTooLarge,
          "enumeration bounds too large (interior vertices <= 6, denominators <= 12)");
  require(max_interior >= 1, Errc::PreconditionViolated, "need at least the root");
  require(p_minus_1 >= 2 && p_minus_1 % 2 == 0 && is_prime_u64(static_cast<std::uint64_t>(p_minus_1 + 1)),
          Errc::PreconditionViolated, "p-1 must come from an odd prime p");
  TreeEnumeration out;
  std::set<std::string> seen;
  TreeBuilder builder(max_interior, datum_filter);
  for (const auto& leaves : leaf_sets(p_minus_1, max_den)) {
    ++out.leaf_sets;
    builder.roots(leaves, out, seen);
  }
  return out;
}

}  // namespace detail

/**
 * Three-point trees (|B0| = 3, root separating the B0 leaves, every non-root
 * interior vertex of degree >= 3, genus 0 everywhere) up to root-preserving
 * isomorphism, with at most max_vertices interior vertices, leaf denominators
 * dividing p-1 and at most max_denominator, such that every interior vertex
 * admits a logarithmic or exact datum.
 */
inline TreeEnumeration enumerate_admissible_trees_report(std::int64_t p_minus_1, std::size_t max_vertices,
                                                         std::int64_t max_denominator) {
  return detail::enumerate_trees(p_minus_1, max_vertices, max_denominator, true);
}

inline std::vector<ReductionTree> enumerate_admissible_trees(std::int64_t p_minus_1, std::size_t max_vertices,
                                                             std::int64_t max_denominator) {
  return enumerate_admissible_trees_report(p_minus_1, max_vertices, max_denominator).trees;
}

/// Same trees without the datum filter: everything the vanishing-cycle rules allow.
inline std::vector<ReductionTree> enumerate_valid_trees(std::int64_t p_minus_1, std::size_t max_vertices,
                                                        std::int64_t max_denominator) {
  return detail::enumerate_trees(p_minus_1, max_vertices, max_denominator, false).trees;
}

}  // namespace mildred
