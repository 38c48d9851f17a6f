#pragma once

/**
 * @file tail_covers.hpp
 * @brief Local Artin-Schreier/Kummer tail covers
 *
 *     z^m = x,   y^p - y = z^a (b_0 x + b_1 + b_2 x^{-1} + ...),   h = m + a,
 *
 * their normalization to y^p - y = z^h, ramification metrics, and the
 * good/bad reduction criterion for the germ of a new tail.
 *
 * Right-hand sides are handled as Laurent series in z with a top exponent:
 * {top, s} stands for sum_j s_j z^{top-j}, i.e. z^top s(w) with w = 1/z.
 */

#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "mildred/rational.hpp"
#include "mildred/series.hpp"

namespace mildred {

struct TailCover {
  FieldPtr field;
  std::int64_t p = 0;
  std::int64_t m = 0;
  std::int64_t a = 0;
  std::vector<Elem> b;  // b_0, b_1, ...; precision = b.size()

  std::int64_t h() const { return m + a; }
  std::size_t precision() const { return b.size(); }
  Rational sigma() const { return Rational(h(), m); }
};

namespace detail {

inline void check_tail_type(std::int64_t p, std::int64_t m, std::int64_t h) {
  require(p >= 3 && is_prime_u64(static_cast<std::uint64_t>(p)), Errc::PreconditionViolated, "p must be an odd prime");
  require(m >= 1 && h >= 1, Errc::PreconditionViolated, "need m >= 1 and h >= 1");
  require(m % p != 0, Errc::NotCoprime, "m must be prime to p");
  require(h % p != 0, Errc::NotCoprime, "h must be prime to p");
  require(((p - 1) * h) % m == 0, Errc::HasseArfViolation,
          "m = " + std::to_string(m) + " does not divide (p-1)h = " + std::to_string((p - 1) * h));
}

}  // namespace detail

/// Validates the invariants of a tail; throws on violation.
inline void check_tail(const TailCover& t) {
  detail::check_tail_type(t.p, t.m, t.h());
  require(t.field && static_cast<std::int64_t>(t.field->characteristic()) == t.p, Errc::PreconditionViolated,
          "tail field has the wrong characteristic");
  require(!t.b.empty() && t.b[0].v != 0, Errc::PreconditionViolated, "b_0 must be nonzero");
}

/// The canonical tail y^p - y = z^h over F_p, with 2h+2 coefficients unless given.
inline TailCover build_tail(std::int64_t p, std::int64_t m, std::int64_t h, std::size_t precision = 0) {
  detail::check_tail_type(p, m, h);
  TailCover t;
  t.field = field(static_cast<std::uint32_t>(p));
  t.p = p;
  t.m = m;
  t.a = h - m;
  t.b.assign(precision ? precision : static_cast<std::size_t>(2 * h + 2), Elem{0});
  t.b[0] = t.field->one();
  return t;
}

/// Tail with integer coefficients b_i (reduced mod p) and exponent a.
inline TailCover make_tail(std::int64_t p, std::int64_t m, std::int64_t a, const std::vector<std::int64_t>& coeffs) {
  TailCover t;
  t.field = field(static_cast<std::uint32_t>(p));
  t.p = p;
  t.m = m;
  t.a = a;
  for (auto c : coeffs) t.b.push_back(t.field->from_int(c));
  check_tail(t);
  return t;
}

struct LaurentZ {
  std::int64_t top = 0;
  Series s;
};

/// Right-hand side of a tail as {h, sum_i b_i w^{i m}}, precision N m.
inline LaurentZ tail_rhs(const TailCover& t) {
  const auto P = t.b.size() * static_cast<std::size_t>(t.m);
  Series s(t.field, P);
  for (std::size_t i = 0; i < t.b.size(); ++i) s.at(i * static_cast<std::size_t>(t.m)) = t.b[i];
  return {t.h(), s};
}

enum class StepKind { Homothety, Shift, ArtinSchreier };

inline std::string_view to_string(StepKind k) {
  switch (k) {
    case StepKind::Homothety: return "homothety";
    case StepKind::Shift: return "shift";
    case StepKind::ArtinSchreier: return "artin_schreier";
  }
  return "?";
}

/**
 * One coordinate change, old coordinates in terms of new:
 *  - Homothety: z = gamma z', x = gamma^m x'
 *  - Shift:     x = x' + d, z = z' (1 + d/x')^{1/m}
 *  - ArtinSchreier: y = y' + g with g a series in w' = 1/z' (no constant term)
 */
struct SubstitutionStep {
  StepKind kind = StepKind::Homothety;
  Elem gamma{0};
  Elem d{0};
  Series g;
};

struct NormalizedTail {
  TailCover input;  // embedded into `canonical.field`
  TailCover canonical;
  std::vector<SubstitutionStep> chain;
};

namespace detail {

// Smallest field F_{p^t} (t a multiple of deg F) in which c has an n-th root.
inline std::pair<FieldPtr, Embedding> raise_for_root(const FieldPtr& F, Elem c, std::uint64_t n) {
  const auto p = F->characteristic();
  for (std::uint32_t t = F->degree(); t <= 24; t += F->degree()) {
    double bits = t * std::log2(static_cast<double>(p));
    if (bits > 22) break;
    auto G = field(p, t);
    Embedding e(F, G);
    if (G->is_nth_power(e(c), n)) return {G, e};
  }
  fail(Errc::DegreeTooLarge, "no small field contains the required root");
}

inline Series frobenius_power(const Series& g, std::int64_t q) {
  // g(w)^q for q a power of p: coefficient k goes to k q, raised to the q-th power
  const FiniteField& F = *g.field();
  Series r(g.field(), g.precision());
  for (std::size_t k = 0; k * static_cast<std::size_t>(q) < g.precision(); ++k)
    r.at(k * static_cast<std::size_t>(q)) = F.pow(g[k], q);
  return r;
}

// sum_j s_j w^j V^{top - j}
inline Series substitute_z(const LaurentZ& f, const Series& V) {
  const auto P = f.s.precision();
  Series acc(f.s.field(), P);
  Series Vinv = V.inverse();
  for (std::size_t j = 0; j < P; ++j) {
    if (f.s[j].v == 0) continue;
    std::int64_t k = f.top - static_cast<std::int64_t>(j);
    Series term = (k >= 0 ? V.pow(k) : Vinv.pow(-k)).scaled(f.s[j]).shifted(j);
    acc = acc + term;
  }
  return acc;
}

// (1 + d w^m)^{1/m}
inline Series shift_factor(const FieldPtr& F, Elem d, std::int64_t m, std::size_t P) {
  Series base = Series::constant(F, F->one(), P);
  if (static_cast<std::size_t>(m) < P) base.at(static_cast<std::size_t>(m)) = d;
  return base.nth_root(static_cast<std::uint64_t>(m), F->one());
}

// U(phi(w)) for phi with zero constant term.
inline Series compose(const Series& U, const Series& phi) {
  const auto P = U.precision();
  Series acc(U.field(), P);
  for (std::size_t i = P; i-- > 0;) {
    acc = acc * phi;
    acc.at(0) = U.field()->add(acc[0], U[i]);
  }
  return acc;
}

// Add G^p - G (G a series in w) to a top-form series.
inline Series artin_schreier_term(const Series& G, std::int64_t p, std::int64_t top, std::size_t P) {
  const FiniteField& F = *G.field();
  Series gp = frobenius_power(G, p) - G;
  Series r(G.field(), P);
  for (std::size_t k = 0; k < gp.precision(); ++k) {
    std::int64_t j = static_cast<std::int64_t>(k) + top;
    if (j >= 0 && static_cast<std::size_t>(j) < P) r.at(static_cast<std::size_t>(j)) = F.add(r[static_cast<std::size_t>(j)], gp[k]);
  }
  return r;
}

}  // namespace detail

/**
 * Reduces a tail to y^p - y = z^h. New tails (h > m) use a homothety to make
 * b_0 = 1, a shift to kill b_1, then an Artin-Schreier change to absorb the
 * rest; primitive tails (h < m) only the homothety and the Artin-Schreier change.
 * The coefficients may move to an extension field when b_0 has no h-th root.
 */
inline NormalizedTail normalize_tail(const TailCover& t) {
  check_tail(t);
  const std::int64_t h = t.h();
  const bool is_new = h > t.m;
  require(h != t.m && h < 2 * t.m, Errc::PreconditionViolated, "normalization covers special tails (sigma < 2, sigma != 1)");
  require(t.precision() >= (is_new ? 2u : 1u), Errc::InsufficientPrecision,
          "normalization needs b_0" + std::string(is_new ? " and b_1" : ""));
  // field with gamma^h = 1/b_0
  auto [F, emb] = detail::raise_for_root(t.field, t.field->inv(t.b[0]), static_cast<std::uint64_t>(h));
  NormalizedTail out;
  out.input = t;
  out.input.field = F;
  for (auto& c : out.input.b) c = emb(c);

  LaurentZ f = tail_rhs(out.input);
  const std::size_t P = f.s.precision();
  const std::size_t m = static_cast<std::size_t>(t.m);

  Elem gamma = *F->nth_root(F->inv(out.input.b[0]), static_cast<std::uint64_t>(h));
  if (gamma != F->one()) {
    Series s(F, P);
    for (std::size_t j = 0; j < P; ++j) s.at(j) = F->mul(f.s[j], F->pow(gamma, f.top - static_cast<std::int64_t>(j)));
    f.s = s;
    out.chain.push_back({StepKind::Homothety, gamma, Elem{0}, {}});
  }
  if (is_new && f.s[m].v != 0) {
    // b_0 (h/m) d + b_1 = 0 with b_0 = 1 now
    Elem hm = F->div(F->from_int(h), F->from_int(t.m));
    Elem d = F->neg(F->div(f.s[m], hm));
    f.s = detail::substitute_z(f, detail::shift_factor(F, d, t.m, P));
    require(f.s[m].v == 0 && f.s[0] == F->one(), Errc::InternalInconsistency, "shift failed to clear b_1");
    out.chain.push_back({StepKind::Shift, Elem{0}, d, {}});
  }
  // remaining terms all have negative z-exponent
  for (std::size_t j = 1; j < P && static_cast<std::int64_t>(j) <= f.top; ++j)
    require(f.s[j].v == 0, Errc::InternalInconsistency, "term z^" + std::to_string(f.top - static_cast<std::int64_t>(j)) +
                                                           " survives the affine normalization");
  const std::size_t Q = P - static_cast<std::size_t>(f.top);
  Series T(F, Q);
  bool any = false;
  for (std::size_t k = 1; k < Q; ++k) {
    T.at(k) = f.s[k + static_cast<std::size_t>(f.top)];
    any = any || T[k].v != 0;
  }
  if (any) {
    // G = -(T + T^p + T^{p^2} + ...), so G^p - G = T
    Series G(F, Q);
    for (std::int64_t q = 1; static_cast<std::size_t>(q) < Q; q *= t.p) G = G - detail::frobenius_power(T, q);
    f.s = f.s - detail::artin_schreier_term(G, t.p, f.top, P);
    out.chain.push_back({StepKind::ArtinSchreier, Elem{0}, Elem{0}, G});
  }
  for (std::size_t j = 1; j < P; ++j)
    require(f.s[j].v == 0, Errc::InternalInconsistency, "normalization left a nonzero term");

  out.canonical = out.input;
  std::fill(out.canonical.b.begin(), out.canonical.b.end(), Elem{0});
  out.canonical.b[0] = F->one();
  return out;
}

/**
 * Back-substitution: composes the chain into z_old = z U(w) and y_old = y + G,
 * substitutes into the input equation and compares with z^h to the stored
 * precision. Returns the first mismatching index in top form, if any.
 */
inline std::optional<std::size_t> verify_normalization(const NormalizedTail& n) {
  const auto& F = n.input.field;
  LaurentZ f = tail_rhs(n.input);
  const std::size_t P = f.s.precision();
  Series U = Series::constant(F, F->one(), P);
  Series w = Series(F, P);
  if (P > 1) w.at(1) = F->one();
  Series G(F, 1);
  for (const auto& st : n.chain) {
    switch (st.kind) {
      case StepKind::Homothety: {
        // U_new(w) = gamma U(w / gamma)
        U = detail::compose(U, w.scaled(F->inv(st.gamma))).scaled(st.gamma);
        break;
      }
      case StepKind::Shift: {
        Series V = detail::shift_factor(F, st.d, n.input.m, P);
        U = detail::compose(U, w * V.inverse()) * V;
        break;
      }
      case StepKind::ArtinSchreier: G = st.g; break;
    }
  }
  Series lhs = detail::substitute_z(f, U);
  if (G.precision() > 1) lhs = lhs - detail::artin_schreier_term(G, n.input.p, f.top, P);
  for (std::size_t j = 0; j < P; ++j) {
    Elem want = j == 0 ? F->one() : Elem{0};
    if (lhs[j] != want) return j;
  }
  return std::nullopt;
}

struct TailMetrics {
  Rational sigma;
  std::int64_t genus = 0;  // of the y-curve over the z-line
  std::int64_t aut0_order = 0;
  std::int64_t inner_aut_order = 0;
};

inline TailMetrics tail_metrics(std::int64_t p, std::int64_t m, std::int64_t h) {
  detail::check_tail_type(p, m, h);
  TailMetrics r;
  r.sigma = Rational(h, m);
  // 2g - 2 = -2p + (p-1)(h+1)
  std::int64_t twice = -2 * p + (p - 1) * (h + 1) + 2;
  require(twice >= 0 && twice % 2 == 0, Errc::InternalInconsistency, "tail genus is not a nonnegative integer");
  r.genus = twice / 2;
  r.aut0_order = (p - 1) * h;
  r.inner_aut_order = h;
  return r;
}

inline TailMetrics tail_metrics(const TailCover& t) { return tail_metrics(t.p, t.m, t.h()); }

enum class TailKind { Primitive, New, NotSpecial };

inline std::string_view to_string(TailKind k) {
  switch (k) {
    case TailKind::Primitive: return "Primitive";
    case TailKind::New: return "New";
    case TailKind::NotSpecial: return "NotSpecial";
  }
  return "?";
}

struct TailClassification {
  TailKind kind = TailKind::NotSpecial;
  std::string reason;
  // 2g - 2 of the G-cover if it were totally ramified at infinity and etale elsewhere
  std::int64_t etale_euler = 0;
  int tame_branch_points = 0;
};

/**
 * Primitive iff 0 < sigma < 1, New iff 1 < sigma < 2. For sigma < 1 an
 * etale-away-from-infinity cover would have 2g - 2 = p(h - m) - 1 - h < -2,
 * which forces the single tame branch point.
 */
inline TailClassification classify_tail(std::int64_t p, std::int64_t m, std::int64_t h) {
  detail::check_tail_type(p, m, h);
  TailClassification c;
  Rational s(h, m);
  c.etale_euler = p * (h - m) - 1 - h;
  if (s < Rational(1)) {
    require(c.etale_euler < -2, Errc::InternalInconsistency, "primitive range without forced tame point");
    c.kind = TailKind::Primitive;
    c.tame_branch_points = 1;
    c.reason = "0 < sigma < 1; etale Euler characteristic " + std::to_string(c.etale_euler) + " < -2 forces one tame point";
  } else if (s == Rational(1)) {
    c.reason = "sigma = 1";
  } else if (s < Rational(2)) {
    c.kind = TailKind::New;
    c.reason = "1 < sigma < 2; etale away from infinity";
  } else {
    c.reason = "sigma >= 2";
  }
  return c;
}

inline TailClassification classify_tail(const TailCover& t) { return classify_tail(t.p, t.m, t.h()); }

enum class GermOutcome { GoodReduction, BadReduction };

inline std::string_view to_string(GermOutcome o) {
  return o == GermOutcome::GoodReduction ? "GoodReduction" : "BadReduction";
}

struct GermVerdict {
  GermOutcome outcome = GermOutcome::GoodReduction;
  Rational threshold;  // p m / ((p-1) h)
  std::int64_t conductor = 0;
  // Good: y'^p - y' = rhs(z'); Bad: y'^p = rhs(z'), an alpha_p-torsor
  Polynomial rhs;
  Polynomial differential;  // d(rhs)/dz', on bad reduction
  std::int64_t zero_order_at_origin = 0;
  std::int64_t simple_zeros = 0;
};

/**
 * Reduction of the germ at a new tail, given val(T)/val(p). The reduced
 * coefficient w_bar of z'^a is the residue of the unit w when the ratio sits
 * exactly at the threshold (or below it), and 0 strictly above.
 */
inline GermVerdict germ_reduction(std::int64_t p, std::int64_t m, std::int64_t h, const Rational& valuation_ratio,
                                  std::int64_t w_bar = 1) {
  detail::check_tail_type(p, m, h);
  const std::int64_t a = h - m;
  require(a > 0 && a < m, Errc::PreconditionViolated, "germ reduction needs a new tail, h = m + a with 0 < a < m");
  require((a * (p - 1)) % m == 0, Errc::PreconditionViolated, "m must divide a(p-1)");
  require(w_bar % p != 0, Errc::PreconditionViolated, "w must be a unit");
  auto F = field(static_cast<std::uint32_t>(p));
  GermVerdict v;
  v.threshold = Rational(p * m, (p - 1) * h);
  Elem w = F->from_int(w_bar);
  if (valuation_ratio >= v.threshold) {
    v.outcome = GermOutcome::GoodReduction;
    Elem coeff = valuation_ratio == v.threshold ? w : Elem{0};
    v.rhs = Polynomial::monomial(F, F->one(), static_cast<std::size_t>(h)) +
            Polynomial::monomial(F, coeff, static_cast<std::size_t>(a));
    v.conductor = h;
    return v;
  }
  v.outcome = GermOutcome::BadReduction;
  v.rhs = Polynomial::monomial(F, F->one(), static_cast<std::size_t>(h)) +
          Polynomial::monomial(F, w, static_cast<std::size_t>(a));
  v.differential = v.rhs.derivative();
  require(!v.differential.is_zero(), Errc::InternalInconsistency, "exact differential vanished");
  v.zero_order_at_origin = static_cast<std::int64_t>(v.differential.low_degree());
  // the cofactor a w + h z^m has distinct nonzero roots
  Polynomial rest = v.differential / Polynomial::monomial(F, F->one(), static_cast<std::size_t>(v.zero_order_at_origin));
  require(rest.coeff(0).v != 0 && Polynomial::gcd(rest, rest.derivative()).degree() == 0, Errc::InternalInconsistency,
          "cofactor of the differential is not squarefree");
  v.simple_zeros = rest.degree();
  return v;
}

}  // namespace mildred
