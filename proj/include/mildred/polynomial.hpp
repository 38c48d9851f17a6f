#pragma once

/**
 * @file polynomial.hpp
 * @brief Dense univariate polynomials over a FiniteField.
 *
 * Coefficients are stored low to high with no trailing zeros, so the zero
 * polynomial is the empty vector and degree() is -1 for it.
 */

#include <string>
#include <utility>
#include <vector>

#include "mildred/finite_field.hpp"

namespace mildred {

class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(FieldPtr F) : F_(std::move(F)) {}
  Polynomial(FieldPtr F, std::vector<Elem> coeffs) : F_(std::move(F)), c_(std::move(coeffs)) { trim(); }

  static Polynomial constant(FieldPtr F, Elem c) { return Polynomial(std::move(F), {c}); }
  static Polynomial x(FieldPtr F) {
    Elem one = F->one();
    return Polynomial(std::move(F), {Elem{0}, one});
  }
  /// c * x^n
  static Polynomial monomial(FieldPtr F, Elem c, std::size_t n) {
    std::vector<Elem> v(n + 1, Elem{0});
    v[n] = c;
    return Polynomial(std::move(F), std::move(v));
  }
  /// Polynomial from integer coefficients (low to high), reduced mod p.
  static Polynomial from_ints(FieldPtr F, const std::vector<std::int64_t>& ints) {
    std::vector<Elem> v;
    v.reserve(ints.size());
    for (auto i : ints) v.push_back(F->from_int(i));
    return Polynomial(std::move(F), std::move(v));
  }

  const FieldPtr& field() const { return F_; }
  const std::vector<Elem>& coeffs() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  Elem coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Elem{0}; }
  Elem leading() const { return c_.empty() ? Elem{0} : c_.back(); }
  bool is_monic() const { return !c_.empty() && c_.back() == F_->one(); }

  /// Index of the lowest nonzero coefficient (ord_0); -1 for zero.
  int low_degree() const {
    for (std::size_t i = 0; i < c_.size(); ++i)
      if (c_[i].v != 0) return static_cast<int>(i);
    return -1;
  }

  Polynomial monic() const {
    if (c_.empty()) return *this;
    return scaled(F_->inv(leading()));
  }

  Polynomial scaled(Elem s) const {
    std::vector<Elem> v(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) v[i] = F_->mul(c_[i], s);
    return Polynomial(F_, std::move(v));
  }

  Elem eval(Elem a) const {
    Elem acc{0};
    for (std::size_t i = c_.size(); i-- > 0;) acc = F_->add(F_->mul(acc, a), c_[i]);
    return acc;
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return Polynomial(F_);
    std::vector<Elem> v(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) v[i - 1] = F_->mul(F_->from_int(static_cast<std::int64_t>(i)), c_[i]);
    return Polynomial(F_, std::move(v));
  }

  /// Multiply by x^n.
  Polynomial shifted(std::size_t n) const {
    if (c_.empty()) return *this;
    std::vector<Elem> v(n, Elem{0});
    v.insert(v.end(), c_.begin(), c_.end());
    return Polynomial(F_, std::move(v));
  }

  /// Reverse with respect to degree d: x^d * P(1/x). Requires d >= degree().
  Polynomial reversed(int d) const {
    require(d >= degree(), Errc::PreconditionViolated, "reversal degree below polynomial degree");
    std::vector<Elem> v(static_cast<std::size_t>(d + 1), Elem{0});
    for (std::size_t i = 0; i < c_.size(); ++i) v[static_cast<std::size_t>(d) - i] = c_[i];
    return Polynomial(F_, std::move(v));
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    const FieldPtr& F = pick(a, b);
    std::vector<Elem> v(std::max(a.c_.size(), b.c_.size()), Elem{0});
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = F->add(a.coeff(i), b.coeff(i));
    return Polynomial(F, std::move(v));
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    const FieldPtr& F = pick(a, b);
    std::vector<Elem> v(std::max(a.c_.size(), b.c_.size()), Elem{0});
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = F->sub(a.coeff(i), b.coeff(i));
    return Polynomial(F, std::move(v));
  }
  Polynomial operator-() const { return Polynomial(F_) - *this; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    const FieldPtr& F = pick(a, b);
    if (a.c_.empty() || b.c_.empty()) return Polynomial(F);
    std::vector<Elem> v(a.c_.size() + b.c_.size() - 1, Elem{0});
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i].v == 0) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] = F->add(v[i + j], F->mul(a.c_[i], b.c_[j]));
    }
    return Polynomial(F, std::move(v));
  }

  Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
  Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  /// Quotient and remainder; throws DivisionByZero on b = 0.
  static std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b) {
    const FieldPtr& F = pick(a, b);
    if (b.is_zero()) fail(Errc::DivisionByZero, "polynomial division by zero");
    std::vector<Elem> r = a.c_;
    const std::size_t db = b.c_.size() - 1;
    if (r.size() <= db) return {Polynomial(F), a};
    std::vector<Elem> q(r.size() - db, Elem{0});
    Elem inv_lead = F->inv(b.leading());
    for (std::size_t k = r.size(); k-- > db;) {
      Elem c = F->mul(r[k], inv_lead);
      q[k - db] = c;
      if (c.v == 0) continue;
      for (std::size_t i = 0; i <= db; ++i) r[k - db + i] = F->sub(r[k - db + i], F->mul(c, b.c_[i]));
    }
    return {Polynomial(F, std::move(q)), Polynomial(F, std::move(r))};
  }

  friend Polynomial operator/(const Polynomial& a, const Polynomial& b) { return divmod(a, b).first; }
  friend Polynomial operator%(const Polynomial& a, const Polynomial& b) { return divmod(a, b).second; }

  /// Monic gcd (zero when both are zero).
  static Polynomial gcd(Polynomial a, Polynomial b) {
    while (!b.is_zero()) {
      Polynomial r = a % b;
      a = std::move(b);
      b = std::move(r);
    }
    return a.monic();
  }

  Polynomial pow(std::uint64_t e) const {
    Polynomial acc = constant(F_, F_->one()), base = *this;
    while (e) {
      if (e & 1) acc *= base;
      base *= base;
      e >>= 1;
    }
    return acc;
  }

  /// Multiplicity of the root a (0 if P(a) != 0); P must be nonzero.
  int root_multiplicity(Elem a) const {
    require(!is_zero(), Errc::PreconditionViolated, "multiplicity in zero polynomial");
    Polynomial lin(F_, {F_->neg(a), F_->one()});
    Polynomial cur = *this;
    int k = 0;
    for (;;) {
      auto [q, r] = divmod(cur, lin);
      if (!r.is_zero()) return k;
      cur = std::move(q);
      ++k;
    }
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

  std::string str(const std::string& var = "x") const {
    if (c_.empty()) return "0";
    std::string out;
    for (std::size_t i = c_.size(); i-- > 0;) {
      if (c_[i].v == 0) continue;
      std::string coef = F_->str(c_[i]);
      if (!out.empty()) out += " + ";
      if (i == 0) {
        out += coef;
      } else {
        if (c_[i] != F_->one()) out += coef + "*";
        out += var;
        if (i > 1) out += "^" + std::to_string(i);
      }
    }
    return out;
  }

 private:
  static const FieldPtr& pick(const Polynomial& a, const Polynomial& b) {
    if (a.F_ && b.F_ && a.F_ != b.F_)
      fail(Errc::PreconditionViolated, "polynomials over different fields");
    const FieldPtr& F = a.F_ ? a.F_ : b.F_;
    if (!F) fail(Errc::PreconditionViolated, "polynomial without a field");
    return F;
  }

  void trim() {
    while (!c_.empty() && c_.back().v == 0) c_.pop_back();
  }

  FieldPtr F_;
  std::vector<Elem> c_;
};

}  // namespace mildred
