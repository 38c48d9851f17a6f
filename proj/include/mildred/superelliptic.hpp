#pragma once

/**
 * @file superelliptic.hpp
 * @brief Cyclic covers z^m = f(x) of the line, their places over marked
 *        x-points, differentials sum_j r_j(x) z^j dx, and the Cartier operator.
 *
 * The working field is raised at construction until it contains a primitive
 * m-th root of unity and every marked point's leading unit c has an m-th root
 * there, so every place over a marked point is rational and has an explicit
 * local parametrization
 *
 *     x - x0 = pi^e   (or x = pi^{-e} at infinity),   z = lambda pi^{v/g} (u/c)^{1/m},
 *
 * with g = gcd(m, v), e = m/g, v = ord_{x0} f and lambda^m = c. Places over x0
 * correspond to lambda modulo mu_e.
 */

#include <cstdlib>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mildred/rational_function.hpp"
#include "mildred/series.hpp"

namespace mildred {

/// An x-coordinate on P^1: a field element or infinity.
struct XPoint {
  bool infinite = false;
  Elem x{};

  static XPoint at(Elem a) { return {false, a}; }
  static XPoint infinity() { return {true, Elem{}}; }
  friend bool operator==(const XPoint& a, const XPoint& b) {
    return a.infinite == b.infinite && (a.infinite || a.x == b.x);
  }
};

struct PlaceProfile {
  XPoint x0;
  int ord_f = 0;                 // v = ord_{x0} f (negative at infinity)
  std::uint32_t e = 1;           // ramification index m / gcd(m, v)
  std::uint32_t place_count = 1;
  std::uint32_t residual_degree = 1;  // over the smallest field holding zeta_m and the roots
  Elem unit{};                   // leading coefficient c of f at x0
  std::vector<Elem> lambdas;     // one m-th root of c per place (working field)
};

/// One place: a marked point together with the index of its lambda.
struct Place {
  std::size_t point = 0;
  std::size_t branch = 0;
};

/// omega = sum_j comps[j](x) z^j dx, 0 <= j < m.
struct CurveDifferential {
  std::vector<RationalFunction> comps;

  bool is_zero() const {
    for (const auto& r : comps)
      if (!r.is_zero()) return false;
    return true;
  }
  friend bool operator==(const CurveDifferential&, const CurveDifferential&) = default;

  friend CurveDifferential operator+(const CurveDifferential& a, const CurveDifferential& b) {
    require(a.comps.size() == b.comps.size(), Errc::PreconditionViolated, "differentials on different curves");
    CurveDifferential out = a;
    for (std::size_t j = 0; j < a.comps.size(); ++j) out.comps[j] += b.comps[j];
    return out;
  }
  friend CurveDifferential operator-(const CurveDifferential& a, const CurveDifferential& b) {
    require(a.comps.size() == b.comps.size(), Errc::PreconditionViolated, "differentials on different curves");
    CurveDifferential out = a;
    for (std::size_t j = 0; j < a.comps.size(); ++j) out.comps[j] -= b.comps[j];
    return out;
  }
  CurveDifferential scaled(Elem c) const {
    CurveDifferential out = *this;
    for (auto& r : out.comps) r = r.scaled(c);
    return out;
  }

  std::string str() const {
    std::string out;
    for (std::size_t j = 0; j < comps.size(); ++j) {
      if (comps[j].is_zero()) continue;
      if (!out.empty()) out += " + ";
      out += comps[j].str();
      if (j == 1) out += "*z";
      if (j > 1) out += "*z^" + std::to_string(j);
    }
    return out.empty() ? "0" : out + " dx";
  }
};

enum class DifferentialClass { Logarithmic, Exact, Neither };

inline std::string_view to_string(DifferentialClass c) {
  switch (c) {
    case DifferentialClass::Logarithmic: return "Logarithmic";
    case DifferentialClass::Exact: return "Exact";
    case DifferentialClass::Neither: return "Neither";
  }
  return "?";
}

/// A value in F_p^x only when eigen && in_prime_field; anything else reads as NotEigen.
struct Eigencharacter {
  bool eigen = false;
  bool in_prime_field = false;
  std::uint32_t component = 0;  // the j with r_j != 0
  Elem value{};                 // zeta_m^j

  bool has_value() const { return eigen && in_prime_field; }
};

class SuperellipticCurve {
 public:
  const FieldPtr& field() const { return F_; }
  std::uint32_t p() const { return F_->characteristic(); }
  std::uint32_t m() const { return m_; }
  const Polynomial& f() const { return f_; }
  const std::vector<std::pair<Elem, int>>& roots() const { return roots_; }
  Elem leading_coeff() const { return lc_; }
  const std::vector<PlaceProfile>& profiles() const { return profiles_; }
  /// The field that was asked for, before the automatic raise.
  std::uint32_t requested_degree() const { return requested_s_; }
  /// Embedding of the requested field into the working field.
  const Embedding& embedding() const { return *embed_; }
  Elem zeta() const { return *F_->root_of_unity(m_); }

  std::size_t profile_index(const XPoint& x0) const {
    for (std::size_t i = 0; i < profiles_.size(); ++i)
      if (profiles_[i].x0 == x0) return i;
    fail(Errc::PreconditionViolated, "point is not marked on this curve");
  }

  std::vector<Place> places() const {
    std::vector<Place> out;
    for (std::size_t i = 0; i < profiles_.size(); ++i)
      for (std::size_t b = 0; b < profiles_[i].lambdas.size(); ++b) out.push_back({i, b});
    return out;
  }

  /// 2g - 2 = -2m + sum over marked points of (m - gcd(m, v)).
  std::int64_t genus() const {
    std::int64_t two_g_minus_2 = -2 * static_cast<std::int64_t>(m_);
    for (const auto& pr : profiles_)
      two_g_minus_2 += static_cast<std::int64_t>(m_) - static_cast<std::int64_t>(m_ / pr.e);
    require(two_g_minus_2 >= -2 && two_g_minus_2 % 2 == 0, Errc::InternalInconsistency,
            "Riemann-Hurwitz sum " + std::to_string(two_g_minus_2) + " is not 2g-2 for any genus");
    return (two_g_minus_2 + 2) / 2;
  }

  CurveDifferential zero_differential() const {
    return {std::vector<RationalFunction>(m_, RationalFunction::zero(F_))};
  }

  /// r(x) z^j dx with 0 <= j; z^m is reduced through f.
  CurveDifferential monomial(const RationalFunction& r, std::int64_t j) const {
    auto w = zero_differential();
    auto [k, factor] = reduce_power(j);
    w.comps[k] = r * factor;
    return w;
  }

  /// z^j = z^k * factor with 0 <= k < m.
  std::pair<std::size_t, RationalFunction> reduce_power(std::int64_t j) const {
    std::int64_t mm = m_;
    std::int64_t q = j >= 0 ? j / mm : -((-j + mm - 1) / mm);
    std::int64_t k = j - q * mm;
    return {static_cast<std::size_t>(k), RationalFunction(f_).pow(q)};
  }

  friend SuperellipticCurve build_curve(std::uint32_t, std::uint32_t, std::uint32_t,
                                        const std::vector<std::pair<Elem, int>>&, Elem,
                                        const std::vector<Elem>&);

 private:
  FieldPtr F_;
  std::uint32_t m_ = 1;
  std::uint32_t requested_s_ = 1;
  Polynomial f_;
  std::vector<std::pair<Elem, int>> roots_;
  Elem lc_{};
  std::vector<PlaceProfile> profiles_;
  std::shared_ptr<Embedding> embed_;
};

namespace detail {

// Order of c modulo g-th powers in the multiplicative group of F.
inline std::uint32_t class_order(const FiniteField& F, Elem c, std::uint32_t g) {
  std::uint64_t n = F.size() - 1;
  std::uint64_t gg = std::gcd<std::uint64_t>(g, n);
  std::uint64_t l = F.log(c) % gg;
  return static_cast<std::uint32_t>(gg / std::gcd(gg, l));
}

inline Elem unit_at(const FiniteField& F, const std::vector<std::pair<Elem, int>>& roots, Elem lc, const XPoint& x0) {
  if (x0.infinite) return lc;
  Elem c = lc;
  for (auto [r, k] : roots)
    if (r != x0.x) c = F.mul(c, F.pow(F.sub(x0.x, r), k));
  return c;
}

inline int ord_at(const std::vector<std::pair<Elem, int>>& roots, const XPoint& x0) {
  int v = 0;
  for (auto [r, k] : roots) {
    if (x0.infinite)
      v -= k;
    else if (r == x0.x)
      v += k;
  }
  return v;
}

}  // namespace detail

/**
 * z^m = lc * prod (x - r)^k over F_{p^s}, roots and lc given in F_{p^s}.
 * Marked points: every root, infinity, then `extra_points` (also in F_{p^s}).
 */
inline SuperellipticCurve build_curve(std::uint32_t p, std::uint32_t s, std::uint32_t m,
                                      const std::vector<std::pair<Elem, int>>& roots, Elem lc,
                                      const std::vector<Elem>& extra_points = {}) {
  require(m >= 1, Errc::PreconditionViolated, "cover degree must be positive");
  require(m % p != 0, Errc::NotCoprime, "cover degree " + std::to_string(m) + " divisible by p=" + std::to_string(p));
  FieldPtr F0 = field(p, s);
  require(lc.v != 0 && F0->contains(lc), Errc::EmptyRHS, "right-hand side is zero");
  for (auto [r, k] : roots) {
    require(k >= 0, Errc::PreconditionViolated, "negative exponent in right-hand side");
    require(F0->contains(r), Errc::PreconditionViolated, "root outside the base field");
  }
  // merge repeated roots, drop zero exponents
  std::vector<std::pair<Elem, int>> merged;
  for (auto [r, k] : roots) {
    if (k == 0) continue;
    auto it = std::find_if(merged.begin(), merged.end(), [&](auto& q) { return q.first == r; });
    if (it == merged.end())
      merged.emplace_back(r, k);
    else
      it->second += k;
  }

  std::vector<XPoint> pts;
  for (auto [r, k] : merged) pts.push_back(XPoint::at(r));
  pts.push_back(XPoint::infinity());
  for (auto x : extra_points)
    if (std::find(pts.begin(), pts.end(), XPoint::at(x)) == pts.end()) pts.push_back(XPoint::at(x));

  // field with zeta_m: profiles (residual degrees) are measured here
  std::uint32_t t0 = minimal_extension_degree(p, s, {m});
  FieldPtr Fz = field(p, t0);
  Embedding ez(F0, Fz);
  auto map_roots = [](const std::vector<std::pair<Elem, int>>& rs, const Embedding& e) {
    std::vector<std::pair<Elem, int>> out;
    for (auto [r, k] : rs) out.emplace_back(e(r), k);
    return out;
  };
  auto rz = map_roots(merged, ez);
  std::vector<std::uint64_t> orders = {m};
  std::vector<PlaceProfile> profiles;
  for (const auto& x : pts) {
    XPoint xz = x.infinite ? x : XPoint::at(ez(x.x));
    PlaceProfile pr;
    pr.x0 = xz;
    pr.ord_f = detail::ord_at(rz, xz);
    std::uint32_t g = std::gcd<std::uint32_t>(m, static_cast<std::uint32_t>(std::abs(pr.ord_f)));
    if (pr.ord_f == 0) g = m;
    pr.e = m / g;
    pr.unit = detail::unit_at(*Fz, rz, ez(lc), xz);
    pr.residual_degree = detail::class_order(*Fz, pr.unit, g);
    pr.place_count = g / pr.residual_degree;
    orders.push_back(static_cast<std::uint64_t>(m) * Fz->multiplicative_order(pr.unit));
    profiles.push_back(pr);
  }

  // working field: every unit has an m-th root
  std::uint32_t t = minimal_extension_degree(p, t0, orders);
  FieldPtr F = field(p, t);
  Embedding ezf(Fz, F);
  SuperellipticCurve C;
  C.F_ = F;
  C.m_ = m;
  C.requested_s_ = s;
  C.embed_ = std::make_shared<Embedding>(F0, F);
  C.roots_ = map_roots(merged, *C.embed_);
  C.lc_ = (*C.embed_)(lc);
  Polynomial fpoly = Polynomial::constant(F, C.lc_);
  for (auto [r, k] : C.roots_) fpoly *= Polynomial(F, {F->neg(r), F->one()}).pow(static_cast<std::uint64_t>(k));
  C.f_ = fpoly;
  for (auto pr : profiles) {
    if (!pr.x0.infinite) pr.x0.x = ezf(pr.x0.x);
    pr.unit = ezf(pr.unit);
    // one lambda per coset of mu_e, smallest code first
    auto all = F->nth_roots(pr.unit, m);
    require(all.size() == m, Errc::InternalInconsistency, "unit has no m-th root after field raise");
    Elem eta = *F->root_of_unity(pr.e);
    std::vector<bool> used(all.size(), false);
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (used[i]) continue;
      pr.lambdas.push_back(all[i]);
      Elem cur = all[i];
      for (std::uint32_t k = 0; k < pr.e; ++k) {
        auto it = std::lower_bound(all.begin(), all.end(), cur);
        used[static_cast<std::size_t>(it - all.begin())] = true;
        cur = F->mul(cur, eta);
      }
    }
    require(pr.lambdas.size() == m / pr.e, Errc::InternalInconsistency, "place count mismatch");
    C.profiles_.push_back(pr);
  }
  return C;
}

/// Convenience: roots, leading coefficient and extra points as integers mod p.
inline SuperellipticCurve build_curve(std::uint32_t p, std::uint32_t m, const std::vector<std::pair<std::int64_t, int>>& roots,
                                      std::int64_t lc = 1, const std::vector<std::int64_t>& extra = {}) {
  require(detail::is_prime_u64(p), Errc::PreconditionViolated, "p must be prime");
  FieldPtr F = field(p, 1);
  std::vector<std::pair<Elem, int>> r;
  for (auto [a, k] : roots) r.emplace_back(F->from_int(a), k);
  std::vector<Elem> ex;
  for (auto a : extra) ex.push_back(F->from_int(a));
  return build_curve(p, 1, m, r, F->from_int(lc), ex);
}

namespace detail {

// A local function pi^k * S(pi), S a unit series.
struct LocalTerm {
  std::int64_t shift = 0;
  Series unit;
};

// Local expansion of a nonzero polynomial in T (T = x - x0, or 1/x at infinity):
// returns (ord_T, P_unit(T)) with P = T^ord * P_unit.
inline std::pair<int, Polynomial> local_poly(const Polynomial& P, const XPoint& x0) {
  if (x0.infinite) return {-P.degree(), P.reversed(P.degree())};
  Polynomial sh = taylor_shift(P, x0.x);
  int k = sh.low_degree();
  std::vector<Elem> c(sh.coeffs().begin() + k, sh.coeffs().end());
  return {k, Polynomial(P.field(), std::move(c))};
}

}  // namespace detail

/**
 * ord of omega at a place. Each component's leading term is computed from the
 * explicit parametrization; precision is doubled until the sum has a nonzero
 * coefficient, since components j = j' (mod e) may cancel.
 */
inline std::int64_t differential_order(const CurveDifferential& w, const SuperellipticCurve& C, const Place& pl) {
  require(!w.is_zero(), Errc::ZeroDifferential, "order of the zero differential");
  const FieldPtr& F = C.field();
  const PlaceProfile& pr = C.profiles().at(pl.point);
  const std::int64_t e = pr.e;
  const std::uint32_t m = C.m();
  const std::int64_t g = m / e;
  const std::int64_t vprime = pr.ord_f / g;
  Elem lambda = pr.lambdas.at(pl.branch);

  auto [fv, fu] = detail::local_poly(C.f(), pr.x0);
  Elem inv_c = F->inv(pr.unit);

  for (std::size_t prec = 16; prec <= 8192; prec *= 2) {
    // w(pi) = (u(pi^e)/c)^{1/m}
    std::size_t tprec = prec / static_cast<std::size_t>(e) + 2;
    Series u = Series::from_poly(fu, tprec).scaled(inv_c);
    Series wroot = u.nth_root(m, F->one()).substitute_power(static_cast<std::size_t>(e), prec);
    // dx = sign * e * pi^{dx_shift}
    std::int64_t dx_shift = pr.x0.infinite ? -e - 1 : e - 1;
    Elem dx_coef = F->from_int(pr.x0.infinite ? -e : e);

    std::vector<detail::LocalTerm> terms;
    for (std::size_t j = 0; j < w.comps.size(); ++j) {
      const auto& r = w.comps[j];
      if (r.is_zero()) continue;
      auto [an, au] = detail::local_poly(r.num(), pr.x0);
      auto [bn, bu] = detail::local_poly(r.den(), pr.x0);
      Series rs = (Series::from_poly(au, tprec) * Series::from_poly(bu, tprec).inverse())
                      .substitute_power(static_cast<std::size_t>(e), prec);
      Series zj = wroot.pow(static_cast<std::int64_t>(j)).scaled(F->pow(lambda, static_cast<std::int64_t>(j)));
      detail::LocalTerm t;
      t.shift = e * (an - bn) + static_cast<std::int64_t>(j) * vprime + dx_shift;
      t.unit = (rs * zj).scaled(dx_coef);
      terms.push_back(std::move(t));
    }
    std::int64_t lo = terms.front().shift;
    for (auto& t : terms) lo = std::min(lo, t.shift);
    Series total(F, prec);
    for (auto& t : terms) total = total + t.unit.shifted(static_cast<std::size_t>(t.shift - lo));
    std::size_t v = total.valuation();
    if (v < prec / 2) return lo + static_cast<std::int64_t>(v);
  }
  fail(Errc::InternalInconsistency, "differential order did not stabilize");
}

inline std::int64_t differential_order(const CurveDifferential& w, const SuperellipticCurve& C, const XPoint& x0,
                                       std::size_t branch = 0) {
  return differential_order(w, C, Place{C.profile_index(x0), branch});
}

/// Cartier operator: C(r z^j dx) = z^{(j + s m)/p} C(r f^{-s} dx) with j + s m = 0 (mod p).
inline CurveDifferential cartier(const CurveDifferential& w, const SuperellipticCurve& C) {
  const std::uint32_t p = C.p(), m = C.m();
  require(w.comps.size() == m, Errc::PreconditionViolated, "differential has wrong number of components");
  CurveDifferential out = C.zero_differential();
  RationalFunction f(C.f());
  for (std::uint32_t j = 0; j < m; ++j) {
    if (w.comps[j].is_zero()) continue;
    std::uint32_t s = 0;
    while ((j + s * m) % p != 0) ++s;
    std::uint32_t k = (j + s * m) / p;
    RationalFunction c = cartier_rational(w.comps[j] * f.pow(-static_cast<std::int64_t>(s)));
    out.comps[k] += c;
  }
  return out;
}

inline DifferentialClass classify_differential(const CurveDifferential& w, const SuperellipticCurve& C) {
  CurveDifferential c = cartier(w, C);
  if (c.is_zero()) return DifferentialClass::Exact;
  if (c == w) return DifferentialClass::Logarithmic;
  return DifferentialClass::Neither;
}

/// Eigenvalue of omega under z -> zeta_m z.
inline Eigencharacter eigencharacter(const CurveDifferential& w, const SuperellipticCurve& C) {
  auto zeta = C.field()->root_of_unity(C.m());
  require(zeta.has_value(), Errc::NoRootOfUnity, "no primitive m-th root of unity in the field");
  Eigencharacter out;
  int nonzero = 0;
  for (std::uint32_t j = 0; j < w.comps.size(); ++j) {
    if (!w.comps[j].is_zero()) {
      ++nonzero;
      out.component = j;
    }
  }
  if (nonzero != 1) return out;
  out.eigen = true;
  out.value = C.field()->pow(*zeta, out.component);
  out.in_prime_field = C.field()->in_prime_field(out.value);
  return out;
}

/// d(a z^j) = (a' + j a f'/(m f)) z^j dx.
inline CurveDifferential exact_monomial(const SuperellipticCurve& C, const RationalFunction& a, std::int64_t j) {
  const FieldPtr& F = C.field();
  RationalFunction f(C.f());
  RationalFunction coef =
      a.derivative() + a * RationalFunction(C.f().derivative()) / f *
                           RationalFunction::constant(F, F->div(F->from_int(j), F->from_int(C.m())));
  return C.monomial(coef, j);
}

/// d(a z^j)/(a z^j) = (a'/a + j f'/(m f)) dx.
inline CurveDifferential log_monomial(const SuperellipticCurve& C, const RationalFunction& a, std::int64_t j) {
  const FieldPtr& F = C.field();
  RationalFunction f(C.f());
  RationalFunction coef = a.derivative() / a + RationalFunction(C.f().derivative()) / f *
                                                   RationalFunction::constant(F, F->div(F->from_int(j), F->from_int(C.m())));
  return C.monomial(coef, 0);
}

}  // namespace mildred
