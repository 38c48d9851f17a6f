#pragma once

/**
 * @file dessins.hpp
 * @brief Prime-degree dessins: permutation triples in S_p, Nielsen classes up
 *        to simultaneous conjugation, monodromy group orders, genus and
 *        reduction signature from cycle types, the normalizer index bound on
 *        n', and the assembled lifting prediction.
 */

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mildred/deformation_data.hpp"
#include "mildred/error.hpp"
#include "mildred/lifting_arith.hpp"
#include "mildred/rational.hpp"

namespace mildred {

/// Permutation of {0..n-1}; g[x] is the image of x.
using Perm = std::vector<std::uint8_t>;

namespace perm {

inline Perm identity(std::size_t n) {
  Perm g(n);
  std::iota(g.begin(), g.end(), std::uint8_t{0});
  return g;
}

/// First a, then b.
inline Perm mul(const Perm& a, const Perm& b) {
  Perm c(a.size());
  for (std::size_t x = 0; x < a.size(); ++x) c[x] = b[a[x]];
  return c;
}

inline Perm inverse(const Perm& a) {
  Perm c(a.size());
  for (std::size_t x = 0; x < a.size(); ++x) c[a[x]] = static_cast<std::uint8_t>(x);
  return c;
}

inline bool is_identity(const Perm& a) {
  for (std::size_t x = 0; x < a.size(); ++x)
    if (a[x] != x) return false;
  return true;
}

/// s g s^-1 read as relabelling: the result maps s(x) to s(g(x)).
inline Perm relabel(const Perm& g, const Perm& s) {
  Perm h(g.size());
  for (std::size_t x = 0; x < g.size(); ++x) h[s[x]] = s[g[x]];
  return h;
}

inline std::vector<std::vector<std::uint8_t>> cycles(const Perm& g) {
  std::vector<std::vector<std::uint8_t>> out;
  std::vector<bool> seen(g.size());
  for (std::size_t x = 0; x < g.size(); ++x) {
    if (seen[x]) continue;
    std::vector<std::uint8_t> c;
    for (std::size_t y = x; !seen[y]; y = g[y]) {
      seen[y] = true;
      c.push_back(static_cast<std::uint8_t>(y));
    }
    out.push_back(std::move(c));
  }
  return out;
}

inline std::string str(const Perm& g) {
  std::string out;
  for (const auto& c : cycles(g)) {
    if (c.size() == 1) continue;
    out += "(";
    for (std::size_t i = 0; i < c.size(); ++i) out += (i ? " " : "") + std::to_string(c[i] + 1);
    out += ")";
  }
  return out.empty() ? "()" : out;
}

}  // namespace perm

/// Partition of p; parts kept in descending order, fixed points included.
struct CycleType {
  std::vector<int> parts;

  int degree() const { return std::accumulate(parts.begin(), parts.end(), 0); }
  int cycles() const { return static_cast<int>(parts.size()); }

  static CycleType of(const Perm& g) {
    CycleType t;
    for (const auto& c : perm::cycles(g)) t.parts.push_back(static_cast<int>(c.size()));
    std::sort(t.parts.rbegin(), t.parts.rend());
    return t;
  }

  /// "2-3" in degree 7 is a transposition times a 3-cycle; "1" is the identity.
  static CycleType parse(std::string_view s, int p) {
    require(p >= 2 && p <= 64, Errc::PreconditionViolated, "degree out of range");
    CycleType t;
    int used = 0;
    std::size_t i = 0;
    require(!s.empty(), Errc::ParseError, "empty cycle type");
    while (i <= s.size()) {
      std::size_t j = s.find_first_of("-.", i);
      if (j == std::string_view::npos) j = s.size();
      std::string_view tok = s.substr(i, j - i);
      require(!tok.empty() && tok.size() <= 3 && std::all_of(tok.begin(), tok.end(), [](char c) { return c >= '0' && c <= '9'; }),
              Errc::ParseError, "bad cycle type '" + std::string(s) + "'");
      int len = std::stoi(std::string(tok));
      require(len >= 1, Errc::ParseError, "cycle length must be positive in '" + std::string(s) + "'");
      if (len > 1) t.parts.push_back(len);
      used += len > 1 ? len : 0;
      i = j + 1;
    }
    require(used <= p, Errc::ParseError, "cycle type '" + std::string(s) + "' exceeds degree " + std::to_string(p));
    for (int k = used; k < p; ++k) t.parts.push_back(1);
    std::sort(t.parts.rbegin(), t.parts.rend());
    return t;
  }

  std::string str() const {
    std::string out;
    std::vector<int> nt(parts.rbegin(), parts.rend());
    for (int x : nt)
      if (x > 1) out += (out.empty() ? "" : "-") + std::to_string(x);
    return out.empty() ? "1" : out;
  }

  /// Canonical element: cycles on consecutive points, longest first.
  Perm representative() const {
    Perm g(static_cast<std::size_t>(degree()));
    int start = 0;
    for (int len : parts) {
      for (int k = 0; k < len; ++k) g[start + k] = static_cast<std::uint8_t>(start + (k + 1) % len);
      start += len;
    }
    return g;
  }

  friend bool operator==(const CycleType&, const CycleType&) = default;
};

/**
 * Permutation group given by generators, with a base and strong generating
 * set (Schreier-Sims) for order and membership. The element table is built
 * on request and only for small groups.
 */
class PermGroup {
 public:
  PermGroup(std::size_t n, std::vector<Perm> gens) : n_(n) {
    for (auto& g : gens) {
      require(g.size() == n, Errc::PreconditionViolated, "generator of wrong degree");
      if (!perm::is_identity(g)) gens_.push_back(std::move(g));
    }
    build();
  }

  std::size_t degree() const { return n_; }
  const std::vector<Perm>& generators() const { return gens_; }

  std::uint64_t order() const {
    std::uint64_t o = 1;
    for (const auto& t : trans_) o *= t.size();
    return o;
  }

  bool contains(const Perm& g) const {
    Perm h = g;
    return sift(h) == base_.size() && perm::is_identity(h);
  }

  bool transitive() const {
    if (n_ == 0) return true;
    std::vector<bool> seen(n_);
    std::vector<std::size_t> q{0};
    seen[0] = true;
    for (std::size_t i = 0; i < q.size(); ++i)
      for (const auto& g : gens_)
        if (!seen[g[q[i]]]) {
          seen[g[q[i]]] = true;
          q.push_back(g[q[i]]);
        }
    return q.size() == n_;
  }

  /// All elements, by closure; BoundsTooLarge above the limit.
  std::vector<Perm> elements(std::uint64_t limit = 40320) const {
    require(order() <= limit, Errc::BoundsTooLarge, "group of order " + std::to_string(order()) + " too large to tabulate");
    std::set<Perm> seen{perm::identity(n_)};
    std::vector<Perm> q{perm::identity(n_)};
    for (std::size_t i = 0; i < q.size(); ++i)
      for (const auto& g : gens_) {
        Perm h = perm::mul(q[i], g);
        if (seen.insert(h).second) q.push_back(std::move(h));
      }
    return q;
  }

 private:
  using Transversal = std::map<std::uint8_t, Perm>;  // orbit point -> element taking the base point there

  std::size_t n_;
  std::vector<Perm> gens_;
  std::vector<std::uint8_t> base_;
  std::vector<Perm> strong_;
  std::vector<Transversal> trans_;

  std::vector<Perm> level_gens(std::size_t i) const {
    std::vector<Perm> out;
    for (const auto& s : strong_) {
      bool fixes = true;
      for (std::size_t k = 0; k < i && fixes; ++k) fixes = s[base_[k]] == base_[k];
      if (fixes) out.push_back(s);
    }
    return out;
  }

  void orbit(std::size_t i) {
    Transversal t;
    t[base_[i]] = perm::identity(n_);
    std::vector<std::uint8_t> q{base_[i]};
    auto S = level_gens(i);
    for (std::size_t k = 0; k < q.size(); ++k)
      for (const auto& s : S) {
        std::uint8_t y = s[q[k]];
        if (!t.count(y)) {
          t[y] = perm::mul(t[q[k]], s);
          q.push_back(y);
        }
      }
    trans_[i] = std::move(t);
  }

  /// Strips g down the levels; returns the first level where it left the orbit.
  std::size_t sift(Perm& g, std::size_t from = 0) const {
    for (std::size_t i = from; i < base_.size(); ++i) {
      auto it = trans_[i].find(g[base_[i]]);
      if (it == trans_[i].end()) return i;
      g = perm::mul(g, perm::inverse(it->second));
    }
    return base_.size();
  }

  void extend_base(const Perm& g) {
    for (std::size_t x = 0; x < n_; ++x)
      if (g[x] != x) {
        base_.push_back(static_cast<std::uint8_t>(x));
        trans_.emplace_back();
        return;
      }
  }

  void build() {
    strong_ = gens_;
    for (const auto& g : strong_) {
      bool moves_base = false;
      for (auto b : base_) moves_base = moves_base || g[b] != b;
      if (!moves_base) extend_base(g);
    }
    for (std::size_t i = 0; i < base_.size(); ++i) orbit(i);
    std::size_t i = base_.size();
    while (i-- > 0) {
      bool restarted = false;
      auto S = level_gens(i);
      for (auto it = trans_[i].begin(); it != trans_[i].end() && !restarted; ++it) {
        for (const auto& s : S) {
          Perm u = perm::mul(it->second, s);
          Perm h = perm::mul(u, perm::inverse(trans_[i].at(u[base_[i]])));
          std::size_t j = sift(h, i + 1);
          if (j == base_.size() && perm::is_identity(h)) continue;
          strong_.push_back(h);
          if (j == base_.size()) extend_base(h);
          for (std::size_t k = i + 1; k < base_.size(); ++k) orbit(k);
          i = base_.size();
          restarted = true;
          break;
        }
      }
    }
  }
};

struct DessinClass {
  Perm g0, g1, ginf;
  std::string canonical;
  std::uint64_t group_order = 0;
  bool transitive = false;
  bool primitive = false;  // prime degree: same as transitive
  bool contains_alternating = false;

  PermGroup group() const { return PermGroup(g0.size(), {g0, g1}); }
};

namespace detail {

inline void check_dessin_degree(int p) {
  require(p >= 2 && detail::is_prime_u64(static_cast<std::uint64_t>(p)), Errc::PreconditionViolated,
          "degree must be prime, got " + std::to_string(p));
  require(p <= 11, Errc::DegreeTooLarge, "brute force limited to p <= 11, got " + std::to_string(p));
}

inline std::uint64_t factorial(int n) {
  std::uint64_t f = 1;
  for (int k = 2; k <= n; ++k) f *= static_cast<std::uint64_t>(k);
  return f;
}

/// Calls f on every permutation with the given cycle type.
inline void for_each_of_type(const CycleType& t, const std::function<void(const Perm&)>& f) {
  const std::size_t n = static_cast<std::size_t>(t.degree());
  std::map<int, int> left;
  for (int x : t.parts) ++left[x];
  Perm g(n);
  std::vector<bool> used(n);
  std::function<void()> rec = [&]() {
    std::size_t start = 0;
    while (start < n && used[start]) ++start;
    if (start == n) {
      f(g);
      return;
    }
    used[start] = true;
    for (auto& [len, cnt] : left) {
      if (!cnt) continue;
      --cnt;
      std::vector<std::uint8_t> cyc{static_cast<std::uint8_t>(start)};
      std::function<void()> grow = [&]() {
        if (cyc.size() == static_cast<std::size_t>(len)) {
          for (std::size_t k = 0; k < cyc.size(); ++k) g[cyc[k]] = cyc[(k + 1) % cyc.size()];
          rec();
          return;
        }
        for (std::size_t y = start + 1; y < n; ++y) {
          if (used[y]) continue;
          used[y] = true;
          cyc.push_back(static_cast<std::uint8_t>(y));
          grow();
          cyc.pop_back();
          used[y] = false;
        }
      };
      grow();
      ++cnt;
    }
    used[start] = false;
  };
  rec();
}

/// Centralizer of a type representative: permute equal-length cycles, rotate each.
inline std::vector<Perm> representative_centralizer(const CycleType& t) {
  const std::size_t n = static_cast<std::size_t>(t.degree());
  std::vector<int> start;
  int s = 0;
  for (int len : t.parts) {
    start.push_back(s);
    s += len;
  }
  const std::size_t k = t.parts.size();
  std::vector<Perm> out;
  Perm c(n);
  std::vector<bool> taken(k);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == k) {
      out.push_back(c);
      return;
    }
    int len = t.parts[i];
    for (std::size_t j = 0; j < k; ++j) {
      if (taken[j] || t.parts[j] != len) continue;
      taken[j] = true;
      for (int r = 0; r < len; ++r) {
        for (int q = 0; q < len; ++q) c[start[i] + q] = static_cast<std::uint8_t>(start[j] + (q + r) % len);
        rec(i + 1);
      }
      taken[j] = false;
    }
  };
  rec(0);
  return out;
}

inline bool transitive_pair(const Perm& a, const Perm& b) {
  const std::size_t n = a.size();
  std::uint32_t seen = 1;
  std::uint8_t q[32];
  std::size_t len = 1;
  q[0] = 0;
  for (std::size_t i = 0; i < len; ++i)
    for (auto y : {a[q[i]], b[q[i]]})
      if (!(seen >> y & 1)) {
        seen |= 1u << y;
        q[len++] = y;
      }
  return len == n;
}

inline std::string key_of(const Perm& g0, const Perm& g1) {
  std::string s;
  for (auto x : g0) s += static_cast<char>('a' + x);
  s += '|';
  for (auto x : g1) s += static_cast<char>('a' + x);
  return s;
}

/// Lexicographically least g1 over the centralizer of the fixed g0.
inline Perm least_image(const Perm& g1, const std::vector<Perm>& centralizer) {
  Perm best = g1;
  for (const auto& c : centralizer) {
    Perm h = perm::relabel(g1, c);
    if (h < best) best = std::move(h);
  }
  return best;
}

}  // namespace detail

/**
 * Canonical key of a triple under simultaneous conjugation: relabel so that
 * g0 becomes its type representative, then take the least g1 over the
 * centralizer of that representative.
 */
inline std::string canonical_form(const Perm& g0, const Perm& g1) {
  CycleType t = CycleType::of(g0);
  Perm rep = t.representative();
  // match cycles of g0 (longest first) to those of rep
  auto cs = perm::cycles(g0);
  std::stable_sort(cs.begin(), cs.end(), [](const auto& a, const auto& b) { return a.size() > b.size(); });
  Perm s(g0.size());
  std::size_t start = 0;
  for (const auto& c : cs) {
    for (std::size_t k = 0; k < c.size(); ++k) s[c[k]] = static_cast<std::uint8_t>(start + k);
    start += c.size();
  }
  require(perm::relabel(g0, s) == rep, Errc::InternalInconsistency, "relabelling failed to reach the representative");
  return detail::key_of(rep, detail::least_image(perm::relabel(g1, s), detail::representative_centralizer(t)));
}

/**
 * Nielsen classes of triples g0 g1 ginf = 1 (g0 applied first) with the given
 * cycle types and transitive group, counted up to simultaneous conjugation
 * in S_p. require_group keeps only classes whose group has that order.
 */
inline std::vector<DessinClass> enumerate_nielsen(int p, const std::vector<CycleType>& types,
                                                  std::optional<std::uint64_t> require_group = std::nullopt) {
  detail::check_dessin_degree(p);
  require(types.size() == 3, Errc::PreconditionViolated, "need three cycle types");
  for (const auto& t : types)
    require(t.degree() == p, Errc::PreconditionViolated, "cycle type " + t.str() + " is not a partition of " + std::to_string(p));
  const Perm g0 = types[0].representative();
  const auto cent = detail::representative_centralizer(types[0]);
  std::map<std::string, DessinClass> found;
  const std::uint64_t full = detail::factorial(p);
  detail::for_each_of_type(types[1], [&](const Perm& g1) {
    Perm ginf = perm::inverse(perm::mul(g0, g1));
    if (!(CycleType::of(ginf) == types[2])) return;
    if (!detail::transitive_pair(g0, g1)) return;
    Perm least = detail::least_image(g1, cent);
    std::string key = detail::key_of(g0, least);
    if (found.count(key)) return;
    PermGroup G(static_cast<std::size_t>(p), {g0, least});
    std::uint64_t order = G.order();
    if (require_group && order != *require_group) return;
    DessinClass d;
    d.g0 = g0;
    d.g1 = least;
    d.ginf = perm::inverse(perm::mul(g0, least));
    d.canonical = key;
    d.group_order = order;
    d.transitive = true;
    d.primitive = true;
    d.contains_alternating = order * 2 >= full;
    found.emplace(std::move(key), std::move(d));
  });
  std::vector<DessinClass> out;
  for (auto& [k, d] : found) out.push_back(std::move(d));
  return out;
}

struct GroupId {
  std::uint64_t order = 0;
  bool is_full_symmetric = false;
  bool is_alternating = false;
  bool is_order_168 = false;
};

inline GroupId monodromy_group_id(const DessinClass& d) {
  require(perm::is_identity(perm::mul(perm::mul(d.g0, d.g1), d.ginf)), Errc::PreconditionViolated,
          "triple does not multiply to the identity");
  GroupId id;
  id.order = d.group().order();
  std::uint64_t full = detail::factorial(static_cast<int>(d.g0.size()));
  id.is_full_symmetric = id.order == full;
  id.is_alternating = id.order * 2 == full;
  id.is_order_168 = id.order == 168;
  return id;
}

/// 2g - 2 = -2p + sum (p - cycles). NonIntegralGenus when odd or negative.
inline std::int64_t cover_genus(int p, const std::vector<CycleType>& types) {
  std::int64_t twice = -2 * static_cast<std::int64_t>(p) + 2;
  for (const auto& t : types) {
    require(t.degree() == p, Errc::PreconditionViolated, "cycle type " + t.str() + " is not a partition of " + std::to_string(p));
    twice += p - t.cycles();
  }
  require(twice % 2 == 0, Errc::NonIntegralGenus, "2g = " + std::to_string(twice) + " is odd");
  require(twice >= 0, Errc::NonIntegralGenus, "negative genus, 2g = " + std::to_string(twice));
  return twice / 2;
}

/// sigma_j = (cycles_j - 1)/(p - 1); zero entries are wild.
inline Signature reduction_signature(int p, const std::vector<CycleType>& types) {
  std::int64_t g = cover_genus(p, types);
  require(g == 0, Errc::GenusNotZero, "cover has genus " + std::to_string(g));
  Signature s;
  Rational total;
  for (const auto& t : types) {
    Rational sigma(t.cycles() - 1, p - 1);
    require(sigma != Rational(1), Errc::SignatureViolation, "type " + t.str() + " gives sigma = 1");
    require(sigma < Rational(1), Errc::SignatureViolation, "sigma " + sigma.str() + " exceeds 1");
    s.entries.push_back(sigma);
    s.roles.push_back(sigma.is_zero() ? Role::Wild : Role::Prim);
    total += sigma;
  }
  require(total == Rational(1), Errc::InternalInconsistency, "sigma values sum to " + total.str());
  return s;
}

namespace detail {

/// Some p-cycle of G: a generator, or a random product of order divisible by p.
inline std::optional<Perm> find_p_cycle(const PermGroup& G) {
  const std::size_t p = G.degree();
  auto is_full_cycle = [&](const Perm& g) { return perm::cycles(g).size() == 1; };
  for (const auto& g : G.generators())
    if (is_full_cycle(g)) return g;
  if (G.generators().empty()) return std::nullopt;
  std::mt19937_64 rng(p);
  Perm x = perm::identity(p);
  for (int step = 0; step < 200000; ++step) {
    x = perm::mul(x, G.generators()[rng() % G.generators().size()]);
    if (is_full_cycle(x)) return x;
  }
  return std::nullopt;
}

}  // namespace detail

struct NPrimeBounds {
  std::int64_t lower = 1;
  std::int64_t upper = 1;
  std::uint64_t normalizer_order = 0;
  std::uint64_t centralizer_order = 0;
};

/**
 * upper = [N_G(P) : C_G(P)] for a p-Sylow P of G <= S_p, lower = gcd(m_j)
 * when chi is injective. N_G(P) lies in the affine group of the cycle
 * generating P, so each affine map is tested for membership in G.
 */
inline NPrimeBounds n_prime_bounds(int p, const PermGroup& G, const std::vector<std::int64_t>& m_values, bool chi_injective) {
  require(G.degree() == static_cast<std::size_t>(p), Errc::PreconditionViolated, "group degree differs from p");
  std::uint64_t order = G.order();
  require(order % static_cast<std::uint64_t>(p) == 0 && (order / p) % static_cast<std::uint64_t>(p) != 0,
          Errc::PSylowNotCyclicOrderP, "p does not divide |G| = " + std::to_string(order) + " exactly once");
  auto c = detail::find_p_cycle(G);
  require(c.has_value(), Errc::PSylowNotCyclicOrderP, "no p-cycle found in G");
  std::vector<std::uint8_t> pos(static_cast<std::size_t>(p));  // a_i = c^i(a_0)
  std::vector<std::uint8_t> at(static_cast<std::size_t>(p));
  std::uint8_t x = 0;
  for (int i = 0; i < p; ++i, x = (*c)[x]) {
    at[i] = x;
    pos[x] = static_cast<std::uint8_t>(i);
  }
  NPrimeBounds r;
  for (int k = 1; k < p; ++k)
    for (int b = 0; b < p; ++b) {
      Perm s(static_cast<std::size_t>(p));
      for (int y = 0; y < p; ++y) s[y] = at[(k * pos[y] + b) % p];
      if (!G.contains(s)) continue;
      ++r.normalizer_order;
      if (perm::mul(s, *c) == perm::mul(*c, s)) ++r.centralizer_order;
    }
  require(r.centralizer_order > 0 && r.normalizer_order % r.centralizer_order == 0, Errc::InternalInconsistency,
          "centralizer is not a subgroup of the normalizer");
  r.upper = static_cast<std::int64_t>(r.normalizer_order / r.centralizer_order);
  r.lower = n_prime_bounds_from(r.upper, m_values, chi_injective).first;
  return r;
}

struct DessinOverrides {
  std::vector<std::vector<std::int64_t>> aut_orders;  // per tail, the admissible |Aut_j| (empty = {1})
  std::optional<std::int64_t> n_prime;
  std::optional<std::uint64_t> group_order;  // default p!
  bool chi_injective = true;
};

struct AutChoice {
  std::vector<std::int64_t> aut_orders;
  std::vector<ModuliCandidate> candidates;
};

struct DessinAnalysis {
  int p = 0;
  std::vector<CycleType> types;
  std::vector<DessinClass> classes;
  std::optional<std::int64_t> genus;
  std::optional<Signature> signature;
  std::string epsilon;  // in the field below
  std::string epsilon_field;
  std::vector<std::int64_t> h_values, m_values;
  std::optional<NPrimeBounds> bounds;
  std::optional<LiftingReport> lifting;
  std::vector<AutChoice> choices;
  std::vector<std::int64_t> e_prediction;  // distinct N' over all choices
  std::optional<Error> failure;
  std::string failure_stage;
};

/**
 * Full pipeline from three cycle types to the lifting prediction. Enumeration
 * always runs; later stages stop at the first error, which is kept in the
 * report instead of being thrown.
 */
inline DessinAnalysis analyze_dessin(int p, const std::vector<CycleType>& types, const DessinOverrides& ov = {}) {
  DessinAnalysis a;
  a.p = p;
  a.types = types;
  a.classes = enumerate_nielsen(p, types, ov.group_order ? ov.group_order : std::optional(detail::factorial(p)));
  std::string stage = "genus";
  try {
    a.genus = cover_genus(p, types);
    stage = "signature";
    a.signature = reduction_signature(p, types);
    stage = "datum";
    DeformationDatum dd = build_normalized_special(static_cast<std::uint32_t>(p), a.signature->entries);
    a.epsilon = dd.curve.field()->str(dd.epsilon);
    a.epsilon_field = dd.curve.field()->name();
    for (const auto& s : a.signature->entries)
      if (!s.is_zero()) {
        a.h_values.push_back(s.num());
        a.m_values.push_back(s.den());
      }
    stage = "bounds";
    require(!a.classes.empty(), Errc::PreconditionViolated, "no Nielsen class to take the monodromy group from");
    a.bounds = n_prime_bounds(p, a.classes.front().group(), a.m_values, ov.chi_injective);
    stage = "lifting";
    std::vector<std::vector<std::int64_t>> alts = ov.aut_orders;
    if (alts.empty()) alts.assign(a.h_values.size(), {1});
    require(alts.size() == a.h_values.size(), Errc::PreconditionViolated,
            "expected " + std::to_string(a.h_values.size()) + " automorphism entries");
    std::vector<std::size_t> idx(alts.size(), 0);
    std::set<std::int64_t> es;
    for (;;) {
      SpecialGDatumSummary s;
      s.p = p;
      s.h_values = a.h_values;
      s.m_values = a.m_values;
      for (std::size_t j = 0; j < alts.size(); ++j) s.aut_inner_orders.push_back(alts[j].at(idx[j]));
      s.n_prime = ov.n_prime;
      s.n_prime_bounds = {a.bounds->lower, a.bounds->upper};
      s.chi_injective = ov.chi_injective;
      LiftingReport rep = lifting_report(s, a.classes.front().group_order);
      if (!a.lifting) a.lifting = rep;
      for (const auto& c : rep.candidates) es.insert(c.N_prime);
      a.choices.push_back({s.aut_inner_orders, rep.candidates});
      std::size_t j = 0;
      while (j < idx.size() && ++idx[j] == alts[j].size()) idx[j++] = 0;
      if (j == idx.size()) break;
    }
    a.e_prediction.assign(es.begin(), es.end());
  } catch (const Error& e) {
    a.failure = e;
    a.failure_stage = stage;
  }
  return a;
}

}  // namespace mildred
