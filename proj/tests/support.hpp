#pragma once

#include <random>

#include "mildred/rational_function.hpp"

namespace mildred::gen {

inline Elem random_elem(const FiniteField& F, std::mt19937_64& rng) {
  return Elem{static_cast<std::uint32_t>(rng() % F.size())};
}

inline Elem random_unit(const FiniteField& F, std::mt19937_64& rng) {
  return Elem{static_cast<std::uint32_t>(1 + rng() % (F.size() - 1))};
}

inline Polynomial random_poly(const FieldPtr& F, int max_deg, std::mt19937_64& rng) {
  int d = static_cast<int>(rng() % static_cast<std::uint64_t>(max_deg + 1));
  std::vector<Elem> c(static_cast<std::size_t>(d + 1));
  for (auto& e : c) e = random_elem(*F, rng);
  return Polynomial(F, std::move(c));
}

inline RationalFunction random_rf(const FieldPtr& F, int max_deg, std::mt19937_64& rng, bool nonzero = false) {
  Polynomial den;
  do den = random_poly(F, max_deg, rng);
  while (den.is_zero());
  Polynomial num;
  do num = random_poly(F, max_deg, rng);
  while (nonzero && num.is_zero());
  return RationalFunction(num, den);
}

}  // namespace mildred::gen
