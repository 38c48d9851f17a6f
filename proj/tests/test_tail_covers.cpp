#include <gtest/gtest.h>

#include <random>

#include "mildred/tail_covers.hpp"
#include "tail_support.hpp"

using namespace mildred;
using namespace mildred::gen;

namespace {

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return Errc::Overflow;
}

}  // namespace

TEST(BuildTail, Examples) {
  auto t = build_tail(7, 6, 1);
  EXPECT_EQ(t.h(), 1);
  EXPECT_EQ(t.a, -5);
  EXPECT_EQ(t.precision(), 4u);
  EXPECT_TRUE(is_canonical(t));
  EXPECT_EQ(build_tail(7, 6, 4).sigma(), Rational(2, 3));
  EXPECT_EQ(code_of([] { build_tail(7, 4, 1); }), Errc::HasseArfViolation);
  EXPECT_EQ(code_of([] { build_tail(7, 6, 7); }), Errc::NotCoprime);
  EXPECT_EQ(code_of([] { build_tail(7, 7, 1); }), Errc::NotCoprime);
  // h = m + a = 3 with p = 3 is not a tail
  EXPECT_EQ(code_of([] { make_tail(3, 2, 1, {2, 0, 0}); }), Errc::NotCoprime);
}

TEST(Normalize, CanonicalUnchanged) {
  auto t = build_tail(7, 6, 1);
  auto n = normalize_tail(t);
  EXPECT_TRUE(n.chain.empty());
  EXPECT_EQ(n.canonical.b, t.b);
  EXPECT_EQ(n.canonical.field, t.field);
}

TEST(Normalize, HomothetyOnly) {
  // p = 5, m = 2, a = 1: 2 z^3 + ...  ->  z^3 with gamma^3 = 1/2 = 3
  auto t = make_tail(5, 2, 1, {2, 0, 0, 0, 0, 0, 0, 0});
  auto n = normalize_tail(t);
  ASSERT_EQ(n.chain.size(), 1u);
  EXPECT_EQ(n.chain[0].kind, StepKind::Homothety);
  const auto& F = *n.canonical.field;
  EXPECT_EQ(F.pow(n.chain[0].gamma, 3), F.from_int(3));
  EXPECT_TRUE(is_canonical(n.canonical));
  EXPECT_FALSE(verify_normalization(n));
}

TEST(Normalize, PrimitiveAtP3) {
  auto t = make_tail(3, 2, -1, {2, 1, 2, 0});
  auto n = normalize_tail(t);
  EXPECT_TRUE(is_canonical(n.canonical));
  EXPECT_EQ(n.chain.front().kind, StepKind::Homothety);
  EXPECT_EQ(n.chain.back().kind, StepKind::ArtinSchreier);
  EXPECT_FALSE(verify_normalization(n));
}

TEST(Normalize, ShiftAndArtinSchreier) {
  // p = 7, m = 6, a = 2 (h = 8), coefficients (1, 3, 5, 0, ...)
  std::vector<std::int64_t> c(18, 0);
  c[0] = 1, c[1] = 3, c[2] = 5;
  auto n = normalize_tail(make_tail(7, 6, 2, c));
  ASSERT_EQ(n.chain.size(), 2u);
  EXPECT_EQ(n.chain[0].kind, StepKind::Shift);
  // d = -b_1 / (h/m) = -3 / (8/6) = 3 in F_7
  EXPECT_EQ(n.chain[0].d, n.canonical.field->from_int(3));
  EXPECT_EQ(n.chain[1].kind, StepKind::ArtinSchreier);
  EXPECT_TRUE(is_canonical(n.canonical));
  EXPECT_FALSE(verify_normalization(n));
}

TEST(Normalize, ExtensionFieldWhenNoRoot) {
  // p = 7, h = 3 (m = 2, a = 1): 3 is not a cube in F_7, so 1/b_0 = 1/5 = 3 needs F_{7^3}
  auto n = normalize_tail(make_tail(7, 2, 1, {5, 1, 0, 0, 0, 0, 0, 0}));
  EXPECT_EQ(n.canonical.field->degree(), 3u);
  EXPECT_TRUE(is_canonical(n.canonical));
  EXPECT_FALSE(verify_normalization(n));
}

TEST(Normalize, Errors) {
  EXPECT_EQ(code_of([] { normalize_tail(make_tail(7, 6, 2, {1})); }), Errc::InsufficientPrecision);
  EXPECT_EQ(code_of([] { normalize_tail(make_tail(7, 2, 2, {1, 0})); }), Errc::PreconditionViolated);
}

TEST(Normalize, TamperedChainDetected) {
  std::vector<std::int64_t> c(18, 0);
  c[0] = 1, c[1] = 3, c[2] = 5;
  auto n = normalize_tail(make_tail(7, 6, 2, c));
  n.chain[0].d = n.canonical.field->from_int(4);
  EXPECT_TRUE(verify_normalization(n).has_value());
}

TEST(Metrics, Examples) {
  auto a = tail_metrics(7, 6, 1);
  EXPECT_EQ(a.sigma, Rational(1, 6));
  EXPECT_EQ(a.genus, 0);
  EXPECT_EQ(a.aut0_order, 6);
  EXPECT_EQ(a.inner_aut_order, 1);
  auto b = tail_metrics(7, 3, 2);
  EXPECT_EQ(b.sigma, Rational(2, 3));
  EXPECT_EQ(b.genus, 3);
  EXPECT_EQ(b.aut0_order, 12);
  EXPECT_EQ(b.inner_aut_order, 2);
  auto c = tail_metrics(3, 2, 1);
  EXPECT_EQ(c.genus, 0);
  EXPECT_EQ(c.aut0_order, 2);
}

TEST(Classify, Examples) {
  EXPECT_EQ(classify_tail(7, 6, 1).kind, TailKind::Primitive);
  EXPECT_EQ(classify_tail(7, 6, 1).tame_branch_points, 1);
  EXPECT_EQ(classify_tail(7, 3, 4).kind, TailKind::New);
  EXPECT_EQ(classify_tail(5, 2, 2).kind, TailKind::NotSpecial);
  EXPECT_EQ(classify_tail(5, 2, 2).reason, "sigma = 1");
  EXPECT_EQ(classify_tail(7, 1, 2).kind, TailKind::NotSpecial);
}

TEST(Germ, Examples) {
  auto g = germ_reduction(7, 3, 4, Rational(7, 8));
  EXPECT_EQ(g.outcome, GermOutcome::GoodReduction);
  EXPECT_EQ(g.threshold, Rational(7, 8));
  EXPECT_EQ(g.conductor, 4);
  EXPECT_EQ(g.rhs.str(), Polynomial::from_ints(field(7), {0, 1, 0, 0, 1}).str());

  auto b = germ_reduction(7, 3, 4, Rational(1, 2));
  EXPECT_EQ(b.outcome, GermOutcome::BadReduction);
  EXPECT_EQ(b.zero_order_at_origin, 0);
  EXPECT_EQ(b.simple_zeros, 3);
  // d(z + z^4) = (1 + 4 z^3) dz
  EXPECT_EQ(b.differential, Polynomial::from_ints(field(7), {1, 0, 0, 4}));

  EXPECT_EQ(germ_reduction(5, 2, 3, Rational(1)).outcome, GermOutcome::GoodReduction);
  EXPECT_EQ(germ_reduction(5, 2, 3, Rational(1)).rhs, Polynomial::from_ints(field(5), {0, 0, 0, 1}));
  EXPECT_EQ(code_of([] { germ_reduction(7, 6, 1, Rational(1)); }), Errc::PreconditionViolated);
}

TEST(Germ, ZeroOrderAtOrigin) {
  // a = 4: d(z^4 + z^10) has a zero of order 3 at 0 and 6 simple zeros
  auto b = germ_reduction(7, 6, 10, Rational(0));
  EXPECT_EQ(b.zero_order_at_origin, 3);
  EXPECT_EQ(b.simple_zeros, 6);
}

// --- properties

TEST(Property, RandomNewTailsNormalize) {
  // b_0 of order 3 needs a 9th root, living in F_{7^9}: beyond the field tables
  std::mt19937_64 rng(99);
  int done = 0, too_large = 0;
  while (done < 100) {
    std::int64_t p = rng() % 2 ? 5 : 7;
    auto types = new_types(p);
    ASSERT_FALSE(types.empty());
    auto [m, a] = types[rng() % types.size()];
    std::vector<std::int64_t> c(static_cast<std::size_t>(2 * (m + a) + 2));
    for (auto& x : c) x = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(p));
    if (c[0] == 0) c[0] = 1;
    auto t = make_tail(p, m, a, c);
    try {
      auto n = normalize_tail(t);
      EXPECT_TRUE(is_canonical(n.canonical)) << p << " " << m << " " << a;
      EXPECT_FALSE(verify_normalization(n)) << p << " " << m << " " << a;
      EXPECT_TRUE(normalize_tail(n.canonical).chain.empty());
      ++done;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::DegreeTooLarge);
      EXPECT_EQ(p, 7);
      EXPECT_EQ((m + a) % 9, 0);
      ++too_large;
    }
  }
  EXPECT_LT(too_large, 20);
}

TEST(Property, NoNewTailsAtP3) { EXPECT_TRUE(new_types(3).empty()); }

TEST(Property, RandomPrimitiveTailsNormalize) {
  std::mt19937_64 rng(5);
  for (std::int64_t p : {3, 5, 7}) {
    auto types = primitive_types(p);
    for (int i = 0; i < 30; ++i) {
      auto [m, h] = types[rng() % types.size()];
      std::vector<std::int64_t> c(static_cast<std::size_t>(2 * h + 2));
      for (auto& x : c) x = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(p));
      if (c[0] == 0) c[0] = p - 1;
      auto n = normalize_tail(make_tail(p, m, h - m, c));
      EXPECT_TRUE(is_canonical(n.canonical));
      EXPECT_FALSE(verify_normalization(n));
      for (const auto& s : n.chain) EXPECT_NE(s.kind, StepKind::Shift);
    }
  }
}

TEST(Property, HasseArfOnAccepted) {
  for (std::int64_t p : {3, 5, 7, 11})
    for (std::int64_t m = 1; m <= 20; ++m)
      for (std::int64_t h = 1; h <= 20; ++h) {
        try {
          auto t = build_tail(p, m, h);
          EXPECT_EQ(((p - 1) * t.h()) % t.m, 0);
        } catch (const Error&) {
          EXPECT_TRUE(m % p == 0 || h % p == 0 || ((p - 1) * h) % m != 0);
        }
      }
}

TEST(Property, GenusNonnegativeAndZeroIffH1) {
  for (std::int64_t p : {3, 5, 7, 11, 13})
    for (std::int64_t h = 1; h <= 40; ++h) {
      if (h % p == 0) continue;
      auto g = tail_metrics(p, 1, h).genus;
      EXPECT_GE(g, 0);
      EXPECT_EQ(g == 0, h == 1);
    }
}

TEST(Property, GermMonotoneAndFlipsAtThreshold) {
  for (std::int64_t p : {5, 7, 11, 13}) {
    for (auto [m, a] : new_types(p)) {
      std::int64_t h = m + a;
      Rational thr(p * m, (p - 1) * h);
      EXPECT_EQ(germ_reduction(p, m, h, thr).outcome, GermOutcome::GoodReduction);
      EXPECT_EQ(germ_reduction(p, m, h, thr - Rational(1, 1000)).outcome, GermOutcome::BadReduction);
      bool good = false;
      for (std::int64_t k = 0; k <= 60; ++k) {
        bool now = germ_reduction(p, m, h, Rational(k, 20)).outcome == GermOutcome::GoodReduction;
        EXPECT_TRUE(!good || now);
        good = now;
      }
    }
  }
}
