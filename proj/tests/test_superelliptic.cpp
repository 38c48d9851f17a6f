#include <gtest/gtest.h>

#include "mildred/superelliptic.hpp"
#include "support.hpp"

using namespace mildred;

namespace {

SuperellipticCurve z6() { return build_curve(7, 6, {{0, 1}, {1, 1}}); }

// z dx / (x (x - 1)) on the given curve
CurveDifferential standard_form(const SuperellipticCurve& C) {
  auto F = C.field();
  auto x = RationalFunction::x(F);
  auto one = RationalFunction::constant(F, F->one());
  return C.monomial(one / (x * (x - one)), 1);
}

}  // namespace

TEST(Superelliptic, PlaceProfilesZ6) {
  auto C = z6();
  auto& p0 = C.profiles()[C.profile_index(XPoint::at(Elem{0}))];
  EXPECT_EQ(p0.e, 6u);
  EXPECT_EQ(p0.place_count, 1u);
  auto& pinf = C.profiles()[C.profile_index(XPoint::infinity())];
  EXPECT_EQ(pinf.ord_f, -2);
  EXPECT_EQ(pinf.e, 3u);
  EXPECT_EQ(pinf.place_count, 2u);
  for (const auto& pr : C.profiles()) EXPECT_EQ(pr.e * pr.place_count * pr.residual_degree, C.m());
}

TEST(Superelliptic, ResidualDegreeOfNonsplitPoint) {
  // z^2 = 3x over F_7: at infinity e = 2; at an extra point x = 1 the unit 3 is a
  // non-square, so one place of residual degree 2
  auto C = build_curve(7, 2, {{0, 1}}, 3, {1});
  auto& pr = C.profiles()[2];
  EXPECT_EQ(pr.e, 1u);
  EXPECT_EQ(pr.place_count, 1u);
  EXPECT_EQ(pr.residual_degree, 2u);
  EXPECT_EQ(pr.lambdas.size(), 2u);  // both places exist over the raised field
  EXPECT_EQ(C.field()->degree(), 2u);
}

TEST(Superelliptic, Genus) {
  EXPECT_EQ(z6().genus(), 2);
  EXPECT_EQ(build_curve(7, 2, {{0, 1}, {1, 1}}).genus(), 0);
  EXPECT_EQ(build_curve(5, 1, {{0, 1}, {2, 3}}).genus(), 0);
  // hyperelliptic check: z^2 = quintic has genus 2
  EXPECT_EQ(build_curve(11, 2, {{0, 1}, {1, 1}, {2, 1}, {3, 1}, {4, 1}}).genus(), 2);
}

TEST(Superelliptic, RejectsBadInput) {
  try {
    build_curve(7, 7, {{0, 1}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotCoprime);
  }
  try {
    build_curve(7, 2, {{0, 1}}, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::EmptyRHS);
  }
}

TEST(Superelliptic, DifferentialOrders) {
  auto C = z6();
  auto w = standard_form(C);
  EXPECT_EQ(differential_order(w, C, XPoint::at(Elem{0})), 0);
  EXPECT_EQ(differential_order(w, C, XPoint::at(Elem{1})), 0);
  EXPECT_EQ(differential_order(w, C, XPoint::infinity(), 0), 1);
  EXPECT_EQ(differential_order(w, C, XPoint::infinity(), 1), 1);
  auto C2 = build_curve(7, 2, {{0, 1}, {1, 1}});
  EXPECT_EQ(differential_order(standard_form(C2), C2, XPoint::infinity()), -1);
  EXPECT_THROW(differential_order(C.zero_differential(), C, XPoint::infinity()), Error);
}

TEST(Superelliptic, OrderSeesCancellation) {
  // on z^2 = x^2 + 1 over F_5 (roots 2, 3), omega = (z - x) dx. At infinity z = +-x(1 + ...),
  // so one branch sees z - x vanish to higher order than either term alone.
  auto C = build_curve(5, 2, {{2, 1}, {3, 1}});
  auto F = C.field();
  auto x = RationalFunction::x(F);
  auto one = RationalFunction::constant(F, F->one());
  auto w = C.monomial(one, 1) - C.monomial(x, 0);
  auto o0 = differential_order(w, C, XPoint::infinity(), 0);
  auto o1 = differential_order(w, C, XPoint::infinity(), 1);
  // z - x ~ 1/(2x) on the matching branch, ~ -2x on the other; dx has order -2
  EXPECT_EQ(std::min(o0, o1), -3);
  EXPECT_EQ(std::max(o0, o1), -1);
}

TEST(Superelliptic, DegreeOfCanonicalDivisor) {
  std::mt19937_64 rng(99);
  for (auto [p, m] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{7, 6}, {7, 3}, {5, 4}, {11, 5}}) {
    auto C = build_curve(p, m, {{0, 1}, {1, 2}, {3, 1}});
    auto F = C.field();
    auto x = RationalFunction::x(F);
    auto one = RationalFunction::constant(F, F->one());
    for (std::int64_t j = 0; j < m; ++j) {
      // zeros and poles of r supported on the marked points 0, 1, 3, infinity
      auto r = x.pow(static_cast<std::int64_t>(rng() % 5) - 2) * (x - one).pow(static_cast<std::int64_t>(rng() % 5) - 2);
      auto w = C.monomial(r, j);
      std::int64_t total = 0;
      for (auto pl : C.places()) total += differential_order(w, C, pl);
      EXPECT_EQ(total, 2 * C.genus() - 2) << "p=" << p << " m=" << m << " j=" << j;
    }
  }
}

TEST(Superelliptic, CartierExamples) {
  auto C = z6();
  auto F = C.field();
  auto x = RationalFunction::x(F);
  auto one = RationalFunction::constant(F, F->one());
  auto r = one / (x - one);
  EXPECT_EQ(cartier(C.monomial(r, 0), C).comps[0], cartier_rational(r));
  EXPECT_EQ(cartier(C.monomial(r, 6), C), cartier(C.monomial(r * RationalFunction(C.f()), 0), C));
  // the standard form is an eigenvector of C with eigenvalue -2 = 5
  auto w = standard_form(C);
  EXPECT_EQ(cartier(w, C), w.scaled(F->from_int(5)));
  EXPECT_EQ(classify_differential(w, C), DifferentialClass::Neither);
  EXPECT_EQ(classify_differential(C.monomial(one / x, 0), C), DifferentialClass::Logarithmic);
  EXPECT_EQ(classify_differential(C.monomial(one, 0), C), DifferentialClass::Exact);
  auto C2 = build_curve(7, 2, {{0, 1}, {1, 1}});
  EXPECT_EQ(classify_differential(standard_form(C2), C2), DifferentialClass::Logarithmic);
}

TEST(Superelliptic, Eigencharacter) {
  auto C = z6();
  auto F = C.field();
  auto ev = eigencharacter(standard_form(C), C);
  ASSERT_TRUE(ev.has_value());
  EXPECT_TRUE(F->in_prime_field(ev.value));
  EXPECT_EQ(F->multiplicative_order(ev.value), 6u);
  auto one = RationalFunction::constant(F, F->one());
  auto e0 = eigencharacter(C.monomial(one, 0), C);
  ASSERT_TRUE(e0.has_value());
  EXPECT_EQ(e0.value, F->one());
  EXPECT_FALSE(eigencharacter(C.monomial(one, 1) + C.monomial(one, 2), C).eigen);
  // m = 8 over F_7: zeta_8 lives in F_49 only, so the eigenvalue of z dx is not in F_7
  auto C8 = build_curve(7, 8, {{0, 1}, {1, 1}});
  auto e8 = eigencharacter(C8.monomial(RationalFunction::constant(C8.field(), Elem{1}), 1), C8);
  EXPECT_TRUE(e8.eigen);
  EXPECT_FALSE(e8.has_value());
}

TEST(Superelliptic, RandomizedProperties) {
  std::mt19937_64 rng(7);
  std::vector<SuperellipticCurve> curves = {z6(), build_curve(5, 4, {{0, 3}, {2, 1}}), build_curve(3, 2, {{0, 1}, {1, 1}, {2, 1}}),
                                            build_curve(7, 3, {{1, 2}, {4, 1}})};
  for (const auto& C : curves) {
    auto F = C.field();
    for (int it = 0; it < 25; ++it) {
      auto a = gen::random_rf(F, 3, rng, true);
      auto b = gen::random_rf(F, 3, rng, true);
      std::int64_t j = static_cast<std::int64_t>(rng() % (2 * C.m()));
      EXPECT_EQ(classify_differential(log_monomial(C, a, j), C), DifferentialClass::Logarithmic);
      EXPECT_EQ(classify_differential(exact_monomial(C, b, j), C), DifferentialClass::Exact);
      // sum of exact forms is exact
      auto dv = exact_monomial(C, a, j) + exact_monomial(C, b, j + 1);
      EXPECT_TRUE(cartier(dv, C).is_zero());
      Elem c = gen::random_unit(*F, rng);
      auto w1 = C.monomial(a, j) + C.monomial(b, j + 1);
      auto w2 = C.monomial(b, j + 2);
      EXPECT_EQ(cartier(w1 + w2, C), cartier(w1, C) + cartier(w2, C));
      EXPECT_EQ(cartier(w1.scaled(c), C), cartier(w1, C).scaled(F->pth_root(c)));
      auto e1 = eigencharacter(C.monomial(a, j), C);
      auto e2 = eigencharacter(C.monomial(a, j).scaled(c), C);
      EXPECT_EQ(e1.value, e2.value);
      EXPECT_EQ(e1.eigen, e2.eigen);
    }
  }
}
