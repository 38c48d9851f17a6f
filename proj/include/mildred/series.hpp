#pragma once

/**
 * @file series.hpp
 * @brief Truncated power series a_0 + a_1 T + ... (mod T^N) over a FiniteField.
 */

#include <utility>
#include <vector>

#include "mildred/polynomial.hpp"

namespace mildred {

class Series {
 public:
  Series() = default;
  Series(FieldPtr F, std::size_t precision) : F_(std::move(F)), a_(precision, Elem{0}) {}
  Series(FieldPtr F, std::vector<Elem> a) : F_(std::move(F)), a_(std::move(a)) {}

  static Series from_poly(const Polynomial& P, std::size_t precision) {
    Series s(P.field(), precision);
    for (std::size_t i = 0; i < precision; ++i) s.a_[i] = P.coeff(i);
    return s;
  }
  static Series constant(FieldPtr F, Elem c, std::size_t precision) {
    Series s(std::move(F), precision);
    if (precision) s.a_[0] = c;
    return s;
  }

  const FieldPtr& field() const { return F_; }
  std::size_t precision() const { return a_.size(); }
  Elem operator[](std::size_t i) const { return i < a_.size() ? a_[i] : Elem{0}; }
  Elem& at(std::size_t i) { return a_.at(i); }
  const std::vector<Elem>& coeffs() const { return a_; }

  /// Index of the first nonzero coefficient, or precision() if all known ones vanish.
  std::size_t valuation() const {
    for (std::size_t i = 0; i < a_.size(); ++i)
      if (a_[i].v != 0) return i;
    return a_.size();
  }

  Series truncated(std::size_t n) const {
    Series s(F_, n);
    for (std::size_t i = 0; i < n && i < a_.size(); ++i) s.a_[i] = a_[i];
    return s;
  }

  Series scaled(Elem c) const {
    Series s(F_, a_.size());
    for (std::size_t i = 0; i < a_.size(); ++i) s.a_[i] = F_->mul(a_[i], c);
    return s;
  }

  /// Multiply by T^k (precision is kept, high terms drop).
  Series shifted(std::size_t k) const {
    Series s(F_, a_.size());
    for (std::size_t i = 0; i + k < a_.size(); ++i) s.a_[i + k] = a_[i];
    return s;
  }

  /// Substitute T -> T^e; known to precision e*(N-1)+1, returned at precision `out_prec`.
  Series substitute_power(std::size_t e, std::size_t out_prec) const {
    require(e >= 1 && (a_.size() - 1) * e + 1 >= out_prec, Errc::InsufficientPrecision,
            "series substitution needs more terms");
    Series s(F_, out_prec);
    for (std::size_t i = 0; i * e < out_prec; ++i) s.a_[i * e] = a_[i];
    return s;
  }

  friend Series operator+(const Series& x, const Series& y) {
    std::size_t n = std::min(x.a_.size(), y.a_.size());
    Series s(x.F_, n);
    for (std::size_t i = 0; i < n; ++i) s.a_[i] = x.F_->add(x.a_[i], y.a_[i]);
    return s;
  }
  friend Series operator-(const Series& x, const Series& y) {
    std::size_t n = std::min(x.a_.size(), y.a_.size());
    Series s(x.F_, n);
    for (std::size_t i = 0; i < n; ++i) s.a_[i] = x.F_->sub(x.a_[i], y.a_[i]);
    return s;
  }
  friend Series operator*(const Series& x, const Series& y) {
    std::size_t n = std::min(x.a_.size(), y.a_.size());
    const FiniteField& F = *x.F_;
    Series s(x.F_, n);
    for (std::size_t i = 0; i < n; ++i) {
      if (x.a_[i].v == 0) continue;
      for (std::size_t j = 0; i + j < n; ++j) s.a_[i + j] = F.add(s.a_[i + j], F.mul(x.a_[i], y.a_[j]));
    }
    return s;
  }

  Series inverse() const {
    require(!a_.empty() && a_[0].v != 0, Errc::DivisionByZero, "series inverse needs a unit constant term");
    const FiniteField& F = *F_;
    Series b(F_, a_.size());
    Elem inv0 = F.inv(a_[0]);
    b.a_[0] = inv0;
    for (std::size_t n = 1; n < a_.size(); ++n) {
      Elem acc{0};
      for (std::size_t k = 1; k <= n; ++k) acc = F.add(acc, F.mul(a_[k], b.a_[n - k]));
      b.a_[n] = F.neg(F.mul(acc, inv0));
    }
    return b;
  }

  Series pow(std::int64_t e) const {
    if (e < 0) return inverse().pow(-e);
    Series acc = constant(F_, F_->one(), a_.size()), base = *this;
    while (e) {
      if (e & 1) acc = acc * base;
      base = base * base;
      e >>= 1;
    }
    return acc;
  }

  /// The m-th root with constant term w0 (w0^m must equal the constant term).
  /// Newton iteration; m must be prime to p.
  Series nth_root(std::uint64_t m, Elem w0) const {
    const FiniteField& F = *F_;
    require(m % F.characteristic() != 0, Errc::NotCoprime, "series root of order divisible by p");
    require(!a_.empty() && F.pow(w0, static_cast<std::int64_t>(m)) == a_[0] && a_[0].v != 0,
            Errc::PreconditionViolated, "bad constant term for series root");
    const std::size_t N = a_.size();
    Elem inv_m = F.inv(F.from_int(static_cast<std::int64_t>(m % F.characteristic())));
    Series w = constant(F_, w0, 1);
    std::size_t prec = 1;
    while (prec < N) {
      prec = std::min(2 * prec, N);
      Series wp = w.truncated(prec);
      Series target = truncated(prec);
      Series wm1 = wp.pow(static_cast<std::int64_t>(m - 1));
      Series num = target - wm1 * wp;
      Series step = (num * wm1.inverse()).scaled(inv_m);
      w = wp + step;
    }
    return w;
  }

  friend bool operator==(const Series& x, const Series& y) { return x.a_ == y.a_; }

 private:
  FieldPtr F_;
  std::vector<Elem> a_;
};

/// P(x0 + T) as a polynomial in T.
inline Polynomial taylor_shift(const Polynomial& P, Elem x0) {
  const FieldPtr& F = P.field();
  Polynomial lin(F, {x0, F->one()});
  Polynomial acc(F);
  for (std::size_t i = P.coeffs().size(); i-- > 0;) acc = acc * lin + Polynomial::constant(F, P.coeffs()[i]);
  return acc;
}

/// Image of a polynomial under a field embedding.
inline Polynomial embed(const Polynomial& P, const Embedding& e) {
  std::vector<Elem> c;
  c.reserve(P.coeffs().size());
  for (auto a : P.coeffs()) c.push_back(e(a));
  return Polynomial(e.target(), std::move(c));
}

}  // namespace mildred
