#pragma once

/**
 * @file lifting_arith.hpp
 * @brief Counting and degree formulas for lifts of a special G-map: the
 *        stable-reduction field degree N, the patching count, the number of
 *        lifts and the field-of-moduli degree N', and the mildness classifier.
 */

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "mildred/error.hpp"
#include "mildred/rational.hpp"

namespace mildred {

namespace detail {

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  require(!__builtin_mul_overflow(a, b, &r), Errc::Overflow, "integer overflow");
  return r;
}

inline std::int64_t lcm_all(const std::vector<std::int64_t>& v) {
  std::int64_t l = 1;
  for (auto x : v) l = lcm64(l, x);
  return l;
}

inline void check_h_values(std::int64_t p, const std::vector<std::int64_t>& h) {
  require(p >= 2, Errc::PreconditionViolated, "p must be prime");
  for (auto x : h) {
    require(x >= 1, Errc::PreconditionViolated, "h_j must be positive");
    require(x % p != 0, Errc::NotCoprime, "h_j must be prime to p");
  }
}

}  // namespace detail

/// N = (p-1) lcm_j h_j (lcm of the empty list is 1).
inline std::int64_t stable_field_degree(std::int64_t p, const std::vector<std::int64_t>& h_values) {
  detail::check_h_values(p, h_values);
  std::int64_t N = detail::checked_mul(p - 1, detail::lcm_all(h_values));
  require(N % p != 0, Errc::InternalInconsistency, "N is divisible by p");
  return N;
}

struct PatchingCount {
  std::int64_t count = 0;         // (p-1) prod h_j
  std::int64_t orbit_length = 0;  // N
  std::int64_t orbit_count = 0;
};

inline PatchingCount patching_count(std::int64_t p, const std::vector<std::int64_t>& h_values) {
  PatchingCount r;
  r.orbit_length = stable_field_degree(p, h_values);
  r.count = p - 1;
  for (auto h : h_values) r.count = detail::checked_mul(r.count, h);
  require(r.count % r.orbit_length == 0, Errc::InternalInconsistency, "orbit length does not divide the count");
  r.orbit_count = r.count / r.orbit_length;
  return r;
}

struct SpecialGDatumSummary {
  std::int64_t p = 0;
  std::vector<std::int64_t> h_values;
  std::vector<std::int64_t> m_values;
  std::vector<std::int64_t> aut_inner_orders;  // empty = all 1
  std::optional<std::int64_t> n_prime;
  std::pair<std::int64_t, std::int64_t> n_prime_bounds{1, 0};  // upper 0 = unknown (taken as p-1)
  bool chi_injective = false;
};

struct ModuliCandidate {
  std::int64_t n_prime = 0;
  std::int64_t lift_count = 0;  // (p-1)/n' prod h_j/|Aut_j|
  std::int64_t N_prime = 0;     // (p-1)/n' lcm h_j/|Aut_j|
  std::string label;
};

/// Admissible n': divisors of the upper bound that are multiples of the lower bound.
inline std::vector<std::int64_t> n_prime_candidates(const SpecialGDatumSummary& s) {
  std::int64_t upper = s.n_prime_bounds.second ? s.n_prime_bounds.second : s.p - 1;
  std::int64_t lower = std::max<std::int64_t>(1, s.n_prime_bounds.first);
  std::vector<std::int64_t> r;
  for (std::int64_t d = lower; d <= upper; ++d)
    if (upper % d == 0 && d % lower == 0) r.push_back(d);
  return r;
}

/**
 * One candidate per admissible n' (or the fixed one). Throws NotDivisible if
 * some |Aut_j| does not divide h_j or n' does not divide p-1.
 */
inline std::vector<ModuliCandidate> moduli_degree(const SpecialGDatumSummary& s) {
  detail::check_h_values(s.p, s.h_values);
  std::vector<std::int64_t> aut = s.aut_inner_orders;
  if (aut.empty()) aut.assign(s.h_values.size(), 1);
  require(aut.size() == s.h_values.size(), Errc::PreconditionViolated, "one automorphism order per tail");
  std::vector<std::int64_t> q;
  for (std::size_t j = 0; j < aut.size(); ++j) {
    require(aut[j] >= 1 && s.h_values[j] % aut[j] == 0, Errc::NotDivisible,
            "|Aut_j| = " + std::to_string(aut[j]) + " does not divide h_j = " + std::to_string(s.h_values[j]));
    q.push_back(s.h_values[j] / aut[j]);
  }
  std::vector<std::int64_t> ns;
  if (s.n_prime) {
    std::int64_t n = *s.n_prime;
    require(n >= 1 && (s.p - 1) % n == 0, Errc::NotDivisible, "n' must divide p-1");
    std::int64_t upper = s.n_prime_bounds.second ? s.n_prime_bounds.second : s.p - 1;
    require(n % std::max<std::int64_t>(1, s.n_prime_bounds.first) == 0 && upper % n == 0, Errc::PreconditionViolated,
            "n' outside its bounds");
    ns = {n};
  } else {
    ns = n_prime_candidates(s);
  }
  std::vector<ModuliCandidate> out;
  for (auto n : ns) {
    require((s.p - 1) % n == 0, Errc::NotDivisible, "n' must divide p-1");
    ModuliCandidate c;
    c.n_prime = n;
    c.lift_count = (s.p - 1) / n;
    for (auto x : q) c.lift_count = detail::checked_mul(c.lift_count, x);
    c.N_prime = detail::checked_mul((s.p - 1) / n, detail::lcm_all(q));
    c.label = (s.n_prime ? "n'=" : "n' candidate ") + std::to_string(n);
    out.push_back(std::move(c));
  }
  return out;
}

/// lower = gcd_j m_j when the character is injective (else 1); upper as given.
inline std::pair<std::int64_t, std::int64_t> n_prime_bounds_from(std::int64_t upper, const std::vector<std::int64_t>& m_values,
                                                                 bool chi_injective) {
  std::int64_t lower = 1;
  if (chi_injective && !m_values.empty()) {
    lower = 0;
    for (auto m : m_values) lower = std::gcd(lower, m);
  }
  return {lower, upper};
}

enum class Mildness { GoodReductionForced, StrictlyDividesMildIfBad, PSquareUnknown };

inline std::string_view to_string(Mildness m) {
  switch (m) {
    case Mildness::GoodReductionForced: return "GoodReductionForced";
    case Mildness::StrictlyDividesMildIfBad: return "StrictlyDividesMildIfBad";
    case Mildness::PSquareUnknown: return "PSquareUnknown";
  }
  return "?";
}

inline Mildness reduction_mildness(std::int64_t group_order, std::int64_t p) {
  require(group_order >= 1 && p >= 2, Errc::PreconditionViolated, "group order must be positive");
  int v = 0;
  while (group_order % p == 0) {
    group_order /= p;
    ++v;
  }
  return v == 0 ? Mildness::GoodReductionForced : v == 1 ? Mildness::StrictlyDividesMildIfBad : Mildness::PSquareUnknown;
}

struct LiftingReport {
  std::int64_t N = 0;
  PatchingCount patching;
  std::vector<ModuliCandidate> candidates;
  std::vector<Rational> disk_thresholds;  // p m_j / ((p-1) h_j) for new tails
  std::optional<Mildness> mildness;
  bool empty_tail_list = false;
};

inline LiftingReport lifting_report(const SpecialGDatumSummary& s, std::optional<std::int64_t> group_order = std::nullopt) {
  LiftingReport r;
  r.N = stable_field_degree(s.p, s.h_values);
  r.patching = patching_count(s.p, s.h_values);
  require(r.patching.orbit_length == r.N, Errc::InternalInconsistency, "orbit length differs from N");
  r.candidates = moduli_degree(s);
  r.empty_tail_list = s.h_values.empty();
  for (std::size_t j = 0; j < s.h_values.size() && j < s.m_values.size(); ++j)
    if (s.h_values[j] > s.m_values[j])
      r.disk_thresholds.emplace_back(s.p * s.m_values[j], (s.p - 1) * s.h_values[j]);
  if (group_order) r.mildness = reduction_mildness(*group_order, s.p);
  return r;
}

}  // namespace mildred
