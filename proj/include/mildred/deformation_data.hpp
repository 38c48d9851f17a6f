#pragma once

/**
 * @file deformation_data.hpp
 * @brief Deformation data (Z, omega) on the line: critical-point invariants,
 *        signatures, the local vanishing-cycle check, specialness, kernel
 *        descent, normalized special data and signature enumeration.
 */

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "mildred/rational.hpp"
#include "mildred/superelliptic.hpp"

namespace mildred {

enum class PointKind { Wild, PrimitiveRange, Unit, NewRange, Other };

inline std::string_view to_string(PointKind k) {
  switch (k) {
    case PointKind::Wild: return "Wild";
    case PointKind::PrimitiveRange: return "Primitive";
    case PointKind::Unit: return "Unit";
    case PointKind::NewRange: return "New";
    case PointKind::Other: return "Other";
  }
  return "?";
}

inline PointKind classify_sigma(const Rational& s) {
  if (s.is_zero()) return PointKind::Wild;
  if (s > Rational(0) && s < Rational(1)) return PointKind::PrimitiveRange;
  if (s == Rational(1)) return PointKind::Unit;
  if (s > Rational(1) && s < Rational(2)) return PointKind::NewRange;
  return PointKind::Other;
}

struct CriticalPoint {
  XPoint tau;
  std::int64_t m_tau = 1;
  std::int64_t h_tau = 1;
  Rational sigma{1};
  PointKind kind = PointKind::Unit;
};

struct DeformationDatum {
  SuperellipticCurve curve;
  CurveDifferential omega;
  std::int64_t h_order = 1;          // |H|
  std::int64_t chi_kernel_order = 1;  // |Ker chi|
  std::int64_t base_genus = 0;
  // filled by build_normalized_special
  Elem epsilon{};
  Elem cartier_eigenvalue{};  // C(z dx/(x(x-1))) = lambda * z dx/(x(x-1))
  // reporting order of the marked points; empty means the curve's own order
  std::vector<XPoint> point_order;
};

/// Datum with H = Z/m acting faithfully (|H| = m, trivial kernel) over the line.
inline DeformationDatum make_datum(SuperellipticCurve C, CurveDifferential w) {
  DeformationDatum dd;
  dd.h_order = C.m();
  dd.curve = std::move(C);
  dd.omega = std::move(w);
  return dd;
}

/// One record per marked point with (m_tau, h_tau) != (1, 1).
inline std::vector<CriticalPoint> critical_invariants(const DeformationDatum& dd) {
  std::vector<CriticalPoint> out;
  const auto& C = dd.curve;
  std::vector<std::size_t> idx;
  if (dd.point_order.empty()) {
    for (std::size_t i = 0; i < C.profiles().size(); ++i) idx.push_back(i);
  } else {
    for (const auto& x : dd.point_order) idx.push_back(C.profile_index(x));
  }
  for (std::size_t i : idx) {
    CriticalPoint cp;
    cp.tau = C.profiles()[i].x0;
    cp.m_tau = C.profiles()[i].e;
    cp.h_tau = differential_order(dd.omega, C, Place{i, 0}) + 1;
    cp.sigma = Rational(cp.h_tau, cp.m_tau);
    cp.kind = classify_sigma(cp.sigma);
    if (cp.m_tau == 1 && cp.h_tau == 1) continue;
    out.push_back(cp);
  }
  return out;
}

struct VcfCheck {
  bool pass = false;
  Rational sum;       // sum (sigma_j - 1)
  Rational expected;  // 2 g_X - 2
  Rational residual;  // sum - expected
};

inline VcfCheck check_local_vcf(const std::vector<Rational>& sigmas, std::int64_t base_genus = 0) {
  VcfCheck r;
  for (const auto& s : sigmas) r.sum += s - Rational(1);
  r.expected = Rational(2 * base_genus - 2);
  r.residual = r.sum - r.expected;
  r.pass = r.residual.is_zero();
  return r;
}

inline VcfCheck check_local_vcf(const DeformationDatum& dd) {
  std::vector<Rational> s;
  for (const auto& cp : critical_invariants(dd)) s.push_back(cp.sigma);
  return check_local_vcf(s, dd.base_genus);
}

enum class Role { Wild, Prim, New };

inline std::string_view to_string(Role r) {
  switch (r) {
    case Role::Wild: return "wild";
    case Role::Prim: return "prim";
    case Role::New: return "new";
  }
  return "?";
}

struct Signature {
  std::vector<Rational> entries;
  std::vector<Role> roles;

  std::vector<std::size_t> indices(Role r) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < roles.size(); ++i)
      if (roles[i] == r) out.push_back(i);
    return out;
  }
  std::string str() const {
    std::string out = "(";
    for (std::size_t i = 0; i < entries.size(); ++i) out += (i ? "," : "") + entries[i].str();
    return out + ")";
  }
  friend bool operator==(const Signature&, const Signature&) = default;
};

struct SpecialVerdict {
  bool special = false;
  Signature signature;
  Rational fractional_sum;
  std::string reason;
};

/// sigma_j < 2, sigma_j != 1, exactly three sigma_j < 1, and sum <sigma_j> = 1.
inline SpecialVerdict is_special(const std::vector<Rational>& sigmas) {
  SpecialVerdict v;
  int below_one = 0;
  for (const auto& s : sigmas) {
    if (s < Rational(0)) {
      v.reason = "negative sigma " + s.str();
      return v;
    }
    if (s == Rational(1)) {
      v.reason = "sigma=1 forbidden";
      return v;
    }
    if (s >= Rational(2)) {
      v.reason = "sigma=" + s.str() + " is not below 2";
      return v;
    }
    if (s < Rational(1)) ++below_one;
    v.signature.entries.push_back(s);
    v.signature.roles.push_back(s.is_zero() ? Role::Wild : (s < Rational(1) ? Role::Prim : Role::New));
    v.fractional_sum += s.frac();
  }
  if (below_one != 3) {
    v.reason = std::to_string(below_one) + " entries below 1, need exactly 3";
    return v;
  }
  if (v.fractional_sum != Rational(1)) {
    v.reason = "fractional parts sum to " + v.fractional_sum.str() + ", not 1";
    return v;
  }
  v.special = true;
  return v;
}

inline SpecialVerdict is_special(const DeformationDatum& dd) {
  std::vector<Rational> s;
  for (const auto& cp : critical_invariants(dd)) s.push_back(cp.sigma);
  return is_special(s);
}

/**
 * z^m = x^{a_1} (x-1)^{a_2}, omega = eps * z dx/(x(x-1)), with m = lcm of the
 * denominators and a_j = sigma_j m; the points 0, 1, infinity carry sigma_1,
 * sigma_2, sigma_3. eps is searched in F_p^x first; otherwise eps^{p-1} =
 * lambda^p is solved in the smallest field extension holding a root.
 */
inline DeformationDatum build_normalized_special(std::uint32_t p, const std::vector<Rational>& sigma) {
  require(sigma.size() == 3, Errc::PreconditionViolated, "need exactly three sigma values");
  Rational total;
  std::int64_t m = 1;
  for (const auto& s : sigma) {
    require(s >= Rational(0) && s < Rational(1), Errc::PreconditionViolated,
            "sigma " + s.str() + " outside {0} u (0,1)");
    total += s;
    m = lcm64(m, s.den());
  }
  require(total == Rational(1), Errc::PreconditionViolated, "sigma values sum to " + total.str() + ", not 1");
  require(m > 1, Errc::PreconditionViolated, "signature forces m = 1");
  require(m % p != 0, Errc::NotCoprime, "m = " + std::to_string(m) + " divisible by p");
  const int a1 = static_cast<int>((sigma[0] * Rational(m)).num());
  const int a2 = static_cast<int>((sigma[1] * Rational(m)).num());

  auto make = [&](std::uint32_t s) {
    FieldPtr F = field(p, s);
    std::vector<std::pair<Elem, int>> roots;
    if (a1) roots.emplace_back(F->zero(), a1);
    if (a2) roots.emplace_back(F->one(), a2);
    return build_curve(p, s, static_cast<std::uint32_t>(m), roots, F->one(), {F->zero(), F->one()});
  };
  auto base_form = [](const SuperellipticCurve& C) {
    auto F = C.field();
    auto x = RationalFunction::x(F);
    auto one = RationalFunction::constant(F, F->one());
    return C.monomial(one / (x * (x - one)), 1);
  };
  auto eigenvalue = [&](const SuperellipticCurve& C, const CurveDifferential& w0) {
    auto c = cartier(w0, C);
    if (c.is_zero())
      fail(Errc::NoLogarithmicTwist, "Cartier operator kills z dx/(x(x-1)); the datum is exact");
    for (std::size_t j = 0; j < c.comps.size(); ++j)
      if (j != 1 && !c.comps[j].is_zero()) fail(Errc::NoLogarithmicTwist, "Cartier image leaves the eigen-line");
    RationalFunction ratio = c.comps[1] / w0.comps[1];
    if (ratio.num().degree() != 0 || ratio.den().degree() != 0)
      fail(Errc::NoLogarithmicTwist, "Cartier image is not proportional to omega");
    return ratio.num().leading();
  };

  SuperellipticCurve C = make(1);
  CurveDifferential w0 = base_form(C);
  Elem lambda = eigenvalue(C, w0);
  FieldPtr F = C.field();
  std::optional<Elem> eps;
  for (std::uint32_t c = 1; c < p && !eps; ++c) {
    Elem e{c};
    if (F->pth_root(e) == F->div(e, lambda)) eps = e;  // e^{1/p} lambda = e
  }
  if (!eps) {
    Elem target = F->frobenius(lambda);  // eps^{p-1} = lambda^p
    std::uint32_t t = minimal_extension_degree(p, F->degree(), {static_cast<std::uint64_t>(p - 1) * F->multiplicative_order(target)});
    C = make(t);
    w0 = base_form(C);
    lambda = eigenvalue(C, w0);
    F = C.field();
    eps = F->nth_root(F->frobenius(lambda), p - 1);
    require(eps.has_value(), Errc::NoLogarithmicTwist, "no eps with eps^(p-1) = lambda^p");
  }
  DeformationDatum dd{C, w0.scaled(*eps), m, 1, 0, *eps, lambda,
                      {XPoint::at(F->zero()), XPoint::at(F->one()), XPoint::infinity()}};
  require(classify_differential(dd.omega, C) == DifferentialClass::Logarithmic, Errc::InternalInconsistency,
          "twisted differential is not Cartier-fixed");
  return dd;
}

/// (m_j, h_j) -> (m_j/k, h_j/k).
inline std::vector<std::pair<std::int64_t, std::int64_t>> descend_by_kernel(
    const std::vector<std::pair<std::int64_t, std::int64_t>>& inv, std::int64_t kernel_order) {
  require(kernel_order >= 1, Errc::PreconditionViolated, "kernel order must be positive");
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  for (auto [m, h] : inv) {
    require(m % kernel_order == 0 && h % kernel_order == 0, Errc::NotDivisible,
            "kernel order " + std::to_string(kernel_order) + " does not divide (" + std::to_string(m) + "," +
                std::to_string(h) + ")");
    out.emplace_back(m / kernel_order, h / kernel_order);
  }
  return out;
}

/**
 * Signatures: an ordered triple for the points 0, 1, infinity with entries in
 * {0} u (0,1), followed by a non-increasing list of at most `max_new_tails`
 * values in (1,2), fractional parts summing to 1. With the flag set every
 * denominator divides p-1; without it denominators range over 1..p-1. New-tail
 * numerators divisible by p are dropped (the conductor is prime to p).
 * Output is sorted lexicographically.
 */
inline std::vector<Signature> enumerate_signatures(std::uint32_t p, std::size_t max_new_tails,
                                                   bool denominators_divide_p_minus_1) {
  require(detail::is_prime_u64(p) && p % 2 == 1, Errc::PreconditionViolated, "p must be an odd prime");
  std::vector<Rational> small = {Rational(0)};
  std::vector<Rational> fracs;  // values in (0,1)
  for (std::int64_t d = 2; d <= static_cast<std::int64_t>(p) - 1; ++d) {
    if (denominators_divide_p_minus_1 && (p - 1) % d != 0) continue;
    for (std::int64_t n = 1; n < d; ++n)
      if (std::gcd(n, d) == 1) fracs.emplace_back(n, d);
  }
  std::sort(fracs.begin(), fracs.end());
  small.insert(small.end(), fracs.begin(), fracs.end());
  std::vector<Rational> news;
  for (const auto& f : fracs)
    if ((f + Rational(1)).num() % static_cast<std::int64_t>(p) != 0) news.push_back(f + Rational(1));
  std::sort(news.begin(), news.end(), std::greater<>());

  std::vector<std::vector<Rational>> tails;  // non-increasing multisets with fractional sum <= 1
  std::vector<Rational> cur;
  std::function<void(std::size_t, Rational)> rec = [&](std::size_t start, Rational used) {
    tails.push_back(cur);
    if (cur.size() == max_new_tails) return;
    for (std::size_t i = start; i < news.size(); ++i) {
      Rational u = used + news[i].frac();
      if (u > Rational(1)) continue;
      cur.push_back(news[i]);
      rec(i, u);
      cur.pop_back();
    }
  };
  rec(0, Rational(0));

  std::vector<Signature> out;
  for (const auto& t : tails) {
    Rational tsum;
    for (const auto& v : t) tsum += v.frac();
    for (const auto& a : small)
      for (const auto& b : small)
        for (const auto& c : small) {
          if (a + b + c + tsum != Rational(1)) continue;
          Signature s;
          s.entries = {a, b, c};
          s.entries.insert(s.entries.end(), t.begin(), t.end());
          for (const auto& e : s.entries)
            s.roles.push_back(e.is_zero() ? Role::Wild : (e < Rational(1) ? Role::Prim : Role::New));
          out.push_back(std::move(s));
        }
  }
  std::sort(out.begin(), out.end(), [](const Signature& x, const Signature& y) {
    return std::lexicographical_compare(x.entries.begin(), x.entries.end(), y.entries.begin(), y.entries.end());
  });
  return out;
}

}  // namespace mildred
