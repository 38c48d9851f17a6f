#pragma once

/**
 * @file rational_function.hpp
 * @brief Rational functions in x over F_{p^s}, and the Cartier operator on
 *        rational differentials r(x) dx.
 */

#include <string>
#include <utility>

#include "mildred/polynomial.hpp"

namespace mildred {

/// num/den with den monic and gcd(num, den) = 1; zero is 0/1.
class RationalFunction {
 public:
  RationalFunction() = default;
  explicit RationalFunction(Polynomial num) : num_(std::move(num)), den_(Polynomial::constant(num_.field(), num_.field()->one())) {}
  RationalFunction(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

  static RationalFunction zero(const FieldPtr& F) { return RationalFunction(Polynomial(F)); }
  static RationalFunction constant(const FieldPtr& F, Elem c) { return RationalFunction(Polynomial::constant(F, c)); }
  static RationalFunction x(const FieldPtr& F) { return RationalFunction(Polynomial::x(F)); }

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }
  const FieldPtr& field() const { return num_.field(); }
  bool is_zero() const { return num_.is_zero(); }

  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    if (a.den_ == b.den_) return RationalFunction(a.num_ + b.num_, a.den_);
    return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
    if (a.den_ == b.den_) return RationalFunction(a.num_ - b.num_, a.den_);
    return RationalFunction(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  RationalFunction operator-() const { return RationalFunction(-num_, den_); }
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
    if (b.is_zero()) fail(Errc::DivisionByZero, "rational function division by zero");
    return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
  }
  RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
  RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
  RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }
  RationalFunction& operator/=(const RationalFunction& o) { return *this = *this / o; }

  RationalFunction scaled(Elem c) const { return RationalFunction(num_.scaled(c), den_); }

  RationalFunction pow(std::int64_t e) const {
    if (e < 0) {
      if (is_zero()) fail(Errc::DivisionByZero, "negative power of zero rational function");
      return RationalFunction(den_.pow(static_cast<std::uint64_t>(-e)), num_.pow(static_cast<std::uint64_t>(-e)));
    }
    // already reduced, so no gcd is needed
    RationalFunction r;
    r.num_ = num_.pow(static_cast<std::uint64_t>(e));
    r.den_ = den_.pow(static_cast<std::uint64_t>(e));
    return r;
  }

  RationalFunction derivative() const {
    return RationalFunction(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
  }

  /// ord_{x=a}; throws on zero.
  int order_at(Elem a) const {
    require(!is_zero(), Errc::ZeroDifferential, "order of the zero function");
    return num_.root_multiplicity(a) - den_.root_multiplicity(a);
  }

  /// ord at x = infinity, i.e. deg den - deg num.
  int order_at_infinity() const {
    require(!is_zero(), Errc::ZeroDifferential, "order of the zero function");
    return den_.degree() - num_.degree();
  }

  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  std::string str() const {
    if (den_.degree() == 0) return num_.str();
    return "(" + num_.str() + ")/(" + den_.str() + ")";
  }

 private:
  void normalize() {
    if (den_.is_zero()) fail(Errc::DivisionByZero, "zero denominator");
    const FieldPtr& F = num_.field() ? num_.field() : den_.field();
    if (num_.is_zero()) {
      num_ = Polynomial(F);
      den_ = Polynomial::constant(F, F->one());
      return;
    }
    Polynomial g = Polynomial::gcd(num_, den_);
    if (g.degree() > 0) {
      num_ = num_ / g;
      den_ = den_ / g;
    }
    Elem lc = den_.leading();
    if (lc != F->one()) {
      Elem inv = F->inv(lc);
      num_ = num_.scaled(inv);
      den_ = den_.scaled(inv);
    }
  }

  Polynomial num_;
  Polynomial den_;
};

/// Coefficient r of the differential r(x) dx.
struct RationalDifferential {
  RationalFunction coefficient;
  friend bool operator==(const RationalDifferential&, const RationalDifferential&) = default;
};

/**
 * Cartier operator on r dx. With r = A/B, write r = A B^{p-1} / B^p; only the
 * monomials x^i of c = A B^{p-1} with i = p-1 (mod p) survive, each sent to
 * c_i^{1/p} x^{(i+1)/p - 1}, and the B^p in the denominator comes out as B.
 */
inline RationalFunction cartier_rational(const RationalFunction& r) {
  const FieldPtr& F = r.field();
  if (r.is_zero()) return r;
  const std::uint32_t p = F->characteristic();
  Polynomial c = r.num() * r.den().pow(p - 1);
  std::vector<Elem> out;
  const auto& cc = c.coeffs();
  for (std::size_t i = p - 1; i < cc.size(); i += p) {
    std::size_t k = (i + 1) / p - 1;
    if (out.size() <= k) out.resize(k + 1, Elem{0});
    out[k] = F->pth_root(cc[i]);
  }
  return RationalFunction(Polynomial(F, std::move(out)), r.den());
}

inline RationalDifferential cartier_rational(const RationalDifferential& w) {
  return {cartier_rational(w.coefficient)};
}

/// du/u as a differential.
inline RationalDifferential dlog(const RationalFunction& u) {
  require(!u.is_zero(), Errc::DivisionByZero, "dlog of zero");
  return {u.derivative() / u};
}

inline RationalDifferential d(const RationalFunction& v) { return {v.derivative()}; }

}  // namespace mildred
