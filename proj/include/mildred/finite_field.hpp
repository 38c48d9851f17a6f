#pragma once

/**
 * @file finite_field.hpp
 * @brief Runtime finite fields F_{p^s} with table-driven arithmetic.
 *
 * F_{p^s} = F_p[t]/(modulus). The modulus is the smallest monic irreducible
 * polynomial of degree s when polynomials are ordered by the integer code
 * sum_i c_i p^i of their lower coefficients. An element is stored as the
 * same kind of code, so elements of the prime field are exactly the codes
 * 0..p-1 and compare equal across all extensions of F_p in value.
 *
 * Multiplication uses discrete log / exponent tables against the generator
 * with the smallest code; fields are capped at 2^22 elements. Field objects
 * are immutable and shared through FieldPtr; the cache behind field() is
 * thread-safe.
 */

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mildred/error.hpp"

namespace mildred {

/// An element code of some FiniteField. Meaningless without its field.
struct Elem {
  std::uint32_t v = 0;
  friend bool operator==(Elem, Elem) = default;
  friend auto operator<=>(Elem, Elem) = default;
};

class FiniteField;
using FieldPtr = std::shared_ptr<const FiniteField>;

namespace detail {

inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  if (m == 1) return 0;
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

// Dense polynomials over F_p with small coefficients, used only while
// constructing a field (before any tables exist).
using SmallPoly = std::vector<std::uint32_t>;

inline void trim(SmallPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline SmallPoly small_mod(SmallPoly a, const SmallPoly& m, std::uint32_t p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  std::uint64_t inv_lead = powmod(m.back(), p - 2, p);
  while (a.size() > dm) {
    std::uint64_t c = a.back() * inv_lead % p;
    std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i)
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - c * m[i] % p) % p);
    trim(a);
  }
  return a;
}

inline SmallPoly small_mulmod(const SmallPoly& a, const SmallPoly& b, const SmallPoly& m, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  SmallPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] = static_cast<std::uint32_t>((r[i + j] + static_cast<std::uint64_t>(a[i]) * b[j]) % p);
  return small_mod(std::move(r), m, p);
}

inline SmallPoly small_gcd(SmallPoly a, SmallPoly b, std::uint32_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    SmallPoly r = small_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// Rabin-style test: f of degree s is irreducible iff gcd(f, t^{p^k} - t) = 1
// for every 1 <= k <= s/2.
inline bool small_irreducible(const SmallPoly& f, std::uint32_t p) {
  const std::size_t s = f.size() - 1;
  if (s == 1) return true;
  if (f[0] == 0) return false;
  SmallPoly t = {0, 1};
  SmallPoly power = t;
  for (std::size_t k = 1; k <= s / 2; ++k) {
    // power <- power^p mod f
    SmallPoly base = power, acc = {1};
    std::uint32_t e = p;
    while (e) {
      if (e & 1) acc = small_mulmod(acc, base, f, p);
      base = small_mulmod(base, base, f, p);
      e >>= 1;
    }
    power = acc;
    SmallPoly diff = power;
    diff.resize(std::max<std::size_t>(diff.size(), 2), 0);
    diff[1] = (diff[1] + p - 1) % p;
    trim(diff);
    SmallPoly g = small_gcd(f, diff, p);
    if (g.size() > 1) return false;
  }
  return true;
}

}  // namespace detail

class FiniteField {
 public:
  static constexpr std::uint64_t kMaxSize = std::uint64_t{1} << 22;

  FiniteField(std::uint32_t p, std::uint32_t s) : p_(p), s_(s) {
    require(detail::is_prime_u64(p) && p % 2 == 1, Errc::PreconditionViolated,
            "field characteristic must be an odd prime, got " + std::to_string(p));
    require(s >= 1, Errc::PreconditionViolated, "extension degree must be >= 1");
    std::uint64_t q = 1;
    for (std::uint32_t i = 0; i < s; ++i) {
      q *= p;
      require(q <= kMaxSize, Errc::DegreeTooLarge,
              "field F_" + std::to_string(p) + "^" + std::to_string(s) + " exceeds table limit");
    }
    q_ = q;
    pow_p_.resize(s + 1);
    pow_p_[0] = 1;
    for (std::uint32_t i = 1; i <= s; ++i) pow_p_[i] = pow_p_[i - 1] * p;
    find_modulus();
    build_tables();
  }

  std::uint32_t characteristic() const { return p_; }
  std::uint32_t degree() const { return s_; }
  std::uint64_t size() const { return q_; }
  /// Coefficients low to high, monic, length degree()+1.
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }

  Elem zero() const { return {0}; }
  Elem one() const { return {1}; }

  Elem from_int(std::int64_t n) const {
    std::int64_t r = n % static_cast<std::int64_t>(p_);
    if (r < 0) r += p_;
    return {static_cast<std::uint32_t>(r)};
  }

  /// Element with the given coefficients on the power basis 1, t, t^2, ...
  Elem from_digits(const std::vector<std::uint32_t>& d) const {
    require(d.size() <= s_, Errc::PreconditionViolated, "too many coordinates for field element");
    std::uint64_t code = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      require(d[i] < p_, Errc::PreconditionViolated, "coordinate out of range");
      code += d[i] * pow_p_[i];
    }
    return {static_cast<std::uint32_t>(code)};
  }

  std::vector<std::uint32_t> digits(Elem a) const {
    std::vector<std::uint32_t> d(s_);
    std::uint32_t v = a.v;
    for (std::uint32_t i = 0; i < s_; ++i) {
      d[i] = v % p_;
      v /= p_;
    }
    return d;
  }

  bool contains(Elem a) const { return a.v < q_; }
  bool in_prime_field(Elem a) const { return a.v < p_; }

  Elem add(Elem a, Elem b) const {
    if (s_ == 1) return {(a.v + b.v) % p_};
    std::uint32_t out = 0, x = a.v, y = b.v;
    for (std::uint32_t i = 0; i < s_; ++i) {
      out += ((x % p_ + y % p_) % p_) * static_cast<std::uint32_t>(pow_p_[i]);
      x /= p_;
      y /= p_;
    }
    return {out};
  }

  Elem neg(Elem a) const {
    if (s_ == 1) return {(p_ - a.v) % p_};
    std::uint32_t out = 0, x = a.v;
    for (std::uint32_t i = 0; i < s_; ++i) {
      out += ((p_ - x % p_) % p_) * static_cast<std::uint32_t>(pow_p_[i]);
      x /= p_;
    }
    return {out};
  }

  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }

  Elem mul(Elem a, Elem b) const {
    if (a.v == 0 || b.v == 0) return zero();
    if (s_ == 1) return {static_cast<std::uint32_t>(static_cast<std::uint64_t>(a.v) * b.v % p_)};
    std::uint64_t k = log_[a.v] + log_[b.v];
    if (k >= q_ - 1) k -= q_ - 1;
    return {exp_[k]};
  }

  Elem inv(Elem a) const {
    if (a.v == 0) fail(Errc::DivisionByZero, "inverse of zero in finite field");
    std::uint64_t k = log_[a.v];
    return {exp_[k == 0 ? 0 : q_ - 1 - k]};
  }

  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

  Elem pow(Elem a, std::int64_t e) const {
    if (a.v == 0) {
      if (e < 0) fail(Errc::DivisionByZero, "negative power of zero");
      return e == 0 ? one() : zero();
    }
    const std::int64_t order = static_cast<std::int64_t>(q_ - 1);
    std::int64_t r = e % order;
    if (r < 0) r += order;
    return {exp_[static_cast<std::uint64_t>(detail::mulmod(log_[a.v], static_cast<std::uint64_t>(r), q_ - 1))]};
  }

  /// a^p.
  Elem frobenius(Elem a) const { return pow(a, p_); }

  /// The unique b with b^p = a (inverse Frobenius, a^{p^{s-1}}).
  Elem pth_root(Elem a) const {
    if (a.v == 0) return zero();
    std::uint64_t k = detail::mulmod(log_[a.v], pow_p_[s_ - 1] % (q_ - 1), q_ - 1);
    return {exp_[k]};
  }

  /// Generator of the multiplicative group (the one with the smallest code).
  Elem generator() const { return {exp_[1 % (q_ - 1)]}; }

  /// Discrete log with respect to generator().
  std::uint64_t log(Elem a) const {
    if (a.v == 0) fail(Errc::PreconditionViolated, "log of zero");
    return log_[a.v];
  }

  std::uint64_t multiplicative_order(Elem a) const {
    if (a.v == 0) fail(Errc::PreconditionViolated, "order of zero");
    std::uint64_t n = q_ - 1;
    return n / std::gcd(n, log_[a.v]);
  }

  /// Primitive n-th root of unity g^{(q-1)/n}, if n | q-1.
  std::optional<Elem> root_of_unity(std::uint64_t n) const {
    if (n == 0 || (q_ - 1) % n != 0) return std::nullopt;
    return Elem{exp_[(q_ - 1) / n % (q_ - 1)]};
  }

  bool is_nth_power(Elem c, std::uint64_t n) const {
    if (c.v == 0) return true;
    return log_[c.v] % std::gcd(n, q_ - 1) == 0;
  }

  /// Every b with b^n = c, sorted by code.
  std::vector<Elem> nth_roots(Elem c, std::uint64_t n) const {
    if (c.v == 0) return {zero()};
    std::uint64_t order = q_ - 1;
    std::uint64_t g = std::gcd(n % order == 0 ? order : n % order, order);
    std::uint64_t lc = log_[c.v];
    if (lc % g != 0) return {};
    std::vector<Elem> out;
    // solutions k of n*k = lc (mod order): k0 + i*order/g
    std::uint64_t n_red = (n % order) / g, ord_red = order / g, lc_red = lc / g;
    std::uint64_t k0 = 0;
    if (ord_red > 1) k0 = detail::mulmod(lc_red % ord_red, modinv(n_red % ord_red, ord_red), ord_red);
    for (std::uint64_t i = 0; i < g; ++i) out.push_back(Elem{exp_[(k0 + i * ord_red) % order]});
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Smallest-code n-th root of c, if one exists in this field.
  std::optional<Elem> nth_root(Elem c, std::uint64_t n) const {
    auto roots = nth_roots(c, n);
    if (roots.empty()) return std::nullopt;
    return roots.front();
  }

  /// Prime-field elements print as integers, others as [c0,c1,...] coordinates.
  std::string str(Elem a) const {
    if (in_prime_field(a)) return std::to_string(a.v);
    auto d = digits(a);
    std::string out = "[";
    for (std::size_t i = 0; i < d.size(); ++i) out += (i ? "," : "") + std::to_string(d[i]);
    return out + "]";
  }

  std::string name() const {
    return s_ == 1 ? "F_" + std::to_string(p_) : "F_" + std::to_string(p_) + "^" + std::to_string(s_);
  }

 private:
  static std::uint64_t modinv(std::uint64_t a, std::uint64_t m) {
    __int128 t = 0, nt = 1, r = m, nr = a;
    while (nr != 0) {
      __int128 q = r / nr;
      __int128 tmp = t - q * nt;
      t = nt;
      nt = tmp;
      tmp = r - q * nr;
      r = nr;
      nr = tmp;
    }
    if (t < 0) t += m;
    return static_cast<std::uint64_t>(t);
  }

  void find_modulus() {
    if (s_ == 1) {
      modulus_ = {0, 1};
      return;
    }
    for (std::uint64_t code = 0; code < q_; ++code) {
      detail::SmallPoly f(s_ + 1);
      std::uint64_t c = code;
      for (std::uint32_t i = 0; i < s_; ++i) {
        f[i] = static_cast<std::uint32_t>(c % p_);
        c /= p_;
      }
      f[s_] = 1;
      if (detail::small_irreducible(f, p_)) {
        modulus_ = f;
        return;
      }
    }
    fail(Errc::InternalInconsistency, "no irreducible polynomial found");
  }

  detail::SmallPoly to_small(std::uint64_t code) const {
    detail::SmallPoly a(s_);
    for (std::uint32_t i = 0; i < s_; ++i) {
      a[i] = static_cast<std::uint32_t>(code % p_);
      code /= p_;
    }
    detail::trim(a);
    return a;
  }

  std::uint64_t from_small(const detail::SmallPoly& a) const {
    std::uint64_t code = 0;
    for (std::size_t i = 0; i < a.size(); ++i) code += a[i] * pow_p_[i];
    return code;
  }

  void build_tables() {
    const std::uint64_t order = q_ - 1;
    exp_.assign(order, 0);
    log_.assign(q_, 0);
    if (s_ == 1) {
      // smallest primitive root mod p
      auto factors = detail::prime_factors(order);
      for (std::uint64_t g = 1; g < p_; ++g) {
        bool ok = true;
        for (auto r : factors)
          if (detail::powmod(g, order / r, p_) == 1) ok = false;
        if (!ok) continue;
        std::uint64_t x = 1;
        for (std::uint64_t k = 0; k < order; ++k) {
          exp_[k] = static_cast<std::uint32_t>(x);
          log_[x] = static_cast<std::uint32_t>(k);
          x = x * g % p_;
        }
        return;
      }
      fail(Errc::InternalInconsistency, "no primitive root");
    }
    auto factors = detail::prime_factors(order);
    auto slow_pow = [&](const detail::SmallPoly& b, std::uint64_t e) {
      detail::SmallPoly acc = {1}, base = b;
      while (e) {
        if (e & 1) acc = detail::small_mulmod(acc, base, modulus_, p_);
        base = detail::small_mulmod(base, base, modulus_, p_);
        e >>= 1;
      }
      return acc;
    };
    for (std::uint64_t code = 2; code < q_; ++code) {
      detail::SmallPoly g = to_small(code);
      bool ok = true;
      for (auto r : factors) {
        auto t = slow_pow(g, order / r);
        if (t.size() == 1 && t[0] == 1) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      detail::SmallPoly x = {1};
      for (std::uint64_t k = 0; k < order; ++k) {
        std::uint64_t c = from_small(x);
        exp_[k] = static_cast<std::uint32_t>(c);
        log_[c] = static_cast<std::uint32_t>(k);
        x = detail::small_mulmod(x, g, modulus_, p_);
      }
      return;
    }
    fail(Errc::InternalInconsistency, "no multiplicative generator");
  }

  std::uint32_t p_;
  std::uint32_t s_;
  std::uint64_t q_ = 0;
  std::vector<std::uint64_t> pow_p_;
  std::vector<std::uint32_t> modulus_;
  std::vector<std::uint32_t> exp_;
  std::vector<std::uint32_t> log_;
};

/// Shared, cached field F_{p^s}.
inline FieldPtr field(std::uint32_t p, std::uint32_t s = 1) {
  static std::mutex mu;
  static std::map<std::pair<std::uint32_t, std::uint32_t>, FieldPtr> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(p, s);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto f = std::make_shared<const FiniteField>(p, s);
  cache.emplace(key, f);
  return f;
}

/**
 * Smallest multiple t of s (t <= max_degree) with L | p^t - 1, where L is the
 * lcm of `orders`. Used to find the field that contains given roots of unity
 * or n-th roots of given elements (an element of order r has an n-th root in
 * F_{p^t} iff n*r | p^t - 1).
 */
inline std::uint32_t minimal_extension_degree(std::uint32_t p, std::uint32_t s,
                                              const std::vector<std::uint64_t>& orders,
                                              std::uint32_t max_degree = 24) {
  std::uint64_t L = 1;
  for (auto o : orders) {
    if (o == 0) continue;
    L = L / std::gcd(L, o) * o;
  }
  for (std::uint32_t t = s; t <= max_degree; t += s)
    if (detail::powmod(p, t, L) == 1 % L) return t;
  fail(Errc::DegreeTooLarge, "required extension of F_" + std::to_string(p) + " exceeds degree " +
                                 std::to_string(max_degree));
}

/// Field embedding F_{p^s} -> F_{p^t} for s | t, fixed by sending the class of
/// the power-basis variable to the smallest-code root of the source modulus.
class Embedding {
 public:
  Embedding(FieldPtr from, FieldPtr to) : from_(std::move(from)), to_(std::move(to)) {
    require(from_->characteristic() == to_->characteristic() && to_->degree() % from_->degree() == 0,
            Errc::PreconditionViolated, "no embedding " + from_->name() + " -> " + to_->name());
    const auto& mod = from_->modulus();
    const FiniteField& T = *to_;
    if (from_->degree() == 1) {
      alpha_ = T.zero();
      return;
    }
    // roots of the source modulus lie in the subfield of order q_s
    std::uint64_t step = (T.size() - 1) / (from_->size() - 1);
    std::optional<Elem> best;
    for (std::uint64_t k = 0; k + 1 < from_->size(); ++k) {
      Elem cand = T.pow(T.generator(), static_cast<std::int64_t>(k * step));
      Elem acc = T.zero();
      for (std::size_t i = mod.size(); i-- > 0;) acc = T.add(T.mul(acc, cand), T.from_int(mod[i]));
      if (acc == T.zero() && (!best || cand < *best)) best = cand;
    }
    require(best.has_value(), Errc::InternalInconsistency, "modulus has no root in target field");
    alpha_ = *best;
  }

  Elem operator()(Elem a) const {
    if (from_->degree() == 1) return to_->from_int(a.v);
    const FiniteField& T = *to_;
    auto d = from_->digits(a);
    Elem acc = T.zero();
    for (std::size_t i = d.size(); i-- > 0;) acc = T.add(T.mul(acc, alpha_), T.from_int(d[i]));
    return acc;
  }

  const FieldPtr& source() const { return from_; }
  const FieldPtr& target() const { return to_; }

 private:
  FieldPtr from_;
  FieldPtr to_;
  Elem alpha_{};
};

}  // namespace mildred
