#include <gtest/gtest.h>

#include "mildred/tree_calculus.hpp"
#include "tree_support.hpp"

using namespace mildred;
using gen::star;

namespace {

Rational R(std::int64_t n, std::int64_t d = 1) { return Rational(n, d); }

bool has_rule(const std::vector<TreeViolation>& v, const std::string& rule) {
  for (const auto& x : v)
    if (x.rule == rule) return true;
  return false;
}

}  // namespace

TEST(Validate, StarPasses) {
  auto t = star({R(1, 6), R(1, 6), R(2, 3)});
  auto r = validate_tree(t, true);
  EXPECT_TRUE(r.pass);
}

TEST(Validate, BadVertexSumNamesResidual) {
  auto t = star({R(1, 2), R(1, 2), R(1, 4)});
  auto r = validate_tree(t);
  ASSERT_FALSE(r.pass);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0].rule, "vertex_sum");
  EXPECT_EQ(r.violations[0].detail, "sum = -7/4, expected -2");
}

TEST(Validate, AntisymmetryNamesEdge) {
  auto t = star({R(1, 6), R(1, 6), R(2, 3)});
  t.set_reverse(1, R(-1, 3));
  auto r = validate_tree(t);
  ASSERT_FALSE(r.pass);
  EXPECT_EQ(r.violations[0].rule, "antisymmetry");
  EXPECT_EQ(r.violations[0].where, "v0->j2");
  EXPECT_EQ(r.violations[0].residual, R(-1, 6));
}

TEST(Validate, LeafRanges) {
  // prim leaf with sigma 1 outside the exceptional configuration
  auto t = star({R(1), R(1, 2), R(1, 2)});
  t.set_sigma(0, R(1));
  auto r = validate_tree(t);
  EXPECT_TRUE(has_rule(r.violations, "leaf_range"));
  // exceptional configurations are accepted
  EXPECT_TRUE(validate_tree(star({R(1), R(0), R(0)}), true).pass);
  EXPECT_TRUE(validate_tree(star({R(0), R(0), R(0), R(2)}), true).pass);
}

TEST(Validate, MalformedGraphs) {
  ReductionTree t;
  t.add_vertex("v0", VertexKind::Interior);
  t.add_vertex("a", VertexKind::LeafPrim);
  EXPECT_THROW(validate_tree(t), Error);  // missing edge
  t.add_edge(0, 1, R(1, 2));
  t.set_root(1);
  EXPECT_THROW(validate_tree(t), Error);  // leaf root
  ReductionTree cyc;
  for (int i = 0; i < 3; ++i) cyc.add_vertex("v" + std::to_string(i), VertexKind::Interior);
  cyc.add_edge(0, 1, R(0));
  cyc.add_edge(1, 0, R(0));
  try {
    validate_tree(cyc);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::MalformedGraph);
  }
}

TEST(GlobalVcf, Examples) {
  auto a = global_vcf(star({R(1, 6), R(1, 6), R(2, 3)}));
  EXPECT_TRUE(a.pass);
  EXPECT_EQ(a.lhs, R(1));
  auto b = global_vcf(star({R(1, 2), R(1, 2), R(0)}));
  EXPECT_TRUE(b.pass);
  EXPECT_EQ(b.lhs, R(1));
}

TEST(GlobalVcf, ChainSumsOnTwoVertexTree) {
  auto t = gen::chain_counterexample();
  ASSERT_TRUE(validate_tree(t, true).pass);
  auto v = global_vcf(t);
  EXPECT_TRUE(v.pass);
  ASSERT_EQ(v.chain.size(), 2u);
  // direct summation: E_0 = {a, b, v}: (1/6-1)+(1/3-1)+(1/2-1) = -2
  EXPECT_EQ(v.chain[0].sum, R(1, 6) - R(1) + R(1, 3) - R(1) + R(1, 2) - R(1));
  // E_1 = {a, b, c, n}: (1/6-1)+(1/3-1)+(1/6-1)+(4/3-1) = -2
  EXPECT_EQ(v.chain[1].sum, R(1, 6) + R(1, 3) + R(1, 6) + R(4, 3) - R(4));
  for (const auto& s : v.chain) EXPECT_EQ(s.sum, R(-2));
}

TEST(GlobalVcf, ChainTargetTracksGenus) {
  // root of genus 1 with a genus-0 child: both chain sums are 0
  ReductionTree t;
  auto r = t.add_vertex("v0", VertexKind::Interior, 1);
  auto v = t.add_vertex("v1", VertexKind::Interior, 0);
  t.set_root(r);
  auto a = t.add_vertex("a", VertexKind::LeafPrim);
  auto b = t.add_vertex("b", VertexKind::LeafPrim);
  auto n = t.add_vertex("n", VertexKind::LeafNew);
  // v: (1/2-1)+(3/2-1)+(-s-1) = -2  =>  s = 1
  t.add_edge(r, v, R(1));
  t.add_edge(v, a, R(1, 2));
  t.add_edge(v, n, R(3, 2));
  // r: (1-1) + (sb-1) = 0  =>  sb = 1 is forbidden, so split into b at 1/2 and another new tail at 3/2
  t.add_edge(r, b, R(1, 2));
  auto n2 = t.add_vertex("n2", VertexKind::LeafNew);
  t.add_edge(r, n2, R(3, 2));
  ASSERT_TRUE(validate_tree(t).pass);
  auto g = global_vcf(t);
  EXPECT_TRUE(g.pass);
  EXPECT_EQ(g.chain[0].target, R(0));
  EXPECT_EQ(g.chain[1].target, R(0));
}

TEST(NuProfile, StarValues) {
  auto p = nu_profile(star({R(1, 6), R(1, 6), R(2, 3)}));
  EXPECT_TRUE(p.pass());
  for (const auto& e : p.entries) EXPECT_EQ(e.nu, e.edge.forward ? 0 : -1);
}

TEST(NuProfile, NewTailEdge) {
  auto t = star({R(1, 6), R(1, 3), R(0), R(3, 2)});
  ASSERT_TRUE(validate_tree(t, true).pass);
  auto p = nu_profile(t);
  EXPECT_TRUE(p.pass());
  for (const auto& e : p.entries) {
    if (e.edge.edge == 3) {
      EXPECT_EQ(e.nu, e.edge.forward ? 1 : -2);
    }
  }
}

TEST(NuProfile, BoundViolationReported) {
  auto t = star({R(1, 6), R(1, 6), R(5, 2)});
  t.add_vertex("x", VertexKind::LeafPrim);
  t.add_edge(0, 4, R(-3, 2));
  auto p = nu_profile(t);
  EXPECT_TRUE(has_rule(p.violations, "nu_bounds"));
}

TEST(NuProfile, ExceptionalInputRejected) {
  try {
    nu_profile(star({R(1), R(0), R(0)}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ExceptionalInput);
  }
}

TEST(Classify, Shapes) {
  EXPECT_EQ(classify_structure(star({R(1, 6), R(1, 6), R(2, 3)})).cls, StructureClass::Star);
  EXPECT_EQ(classify_structure(star({R(1), R(0), R(0)})).cls, StructureClass::Exceptional1);
  EXPECT_EQ(classify_structure(star({R(0), R(0), R(0), R(2)})).cls, StructureClass::Exceptional2);
}

TEST(Classify, ChainCounterexampleRejected) {
  auto t = gen::chain_counterexample();
  ASSERT_TRUE(validate_tree(t, true).pass);
  auto v = classify_structure(t);
  EXPECT_EQ(v.cls, StructureClass::Inconsistent);
  ASSERT_TRUE(v.vertex && v.certificate);
  EXPECT_EQ(t.vertices()[*v.vertex].name, "v1");
  EXPECT_EQ(v.certificate->sigma, R(-1, 2));
  EXPECT_EQ(v.certificate_nu, -1);
  // the nu-profile identities hold on it even so
  EXPECT_TRUE(nu_profile(t).pass());
}

TEST(Classify, ExceptionalChainRejected) {
  auto t = gen::exceptional_chain();
  ASSERT_TRUE(validate_tree(t, true).pass);
  auto v = classify_structure(t);
  EXPECT_EQ(v.cls, StructureClass::Inconsistent);
  ASSERT_TRUE(v.certificate);
  EXPECT_EQ(v.certificate->sigma, R(-1));
}

TEST(Admissibility, Rules) {
  EXPECT_TRUE(datum_admissibility({R(1, 6), R(1, 6), R(2, 3)}).logarithmic_possible);
  // chain vertex: (1/6, 4/3, -1/2)
  auto a = datum_admissibility({R(1, 6), R(4, 3), R(-1, 2)});
  EXPECT_FALSE(a.logarithmic_possible);
  EXPECT_FALSE(a.exact_possible);
  // simple pole excludes exact
  EXPECT_FALSE(datum_admissibility({R(0), R(2), R(-1)}).exact_possible);
}

TEST(Enumerate, SpecExamplesP7) {
  auto trees = enumerate_admissible_trees(6, 4, 6);
  auto want = canonical_form(star({R(1, 6), R(1, 6), R(2, 3)}));
  bool found = false;
  for (const auto& t : trees) {
    found = found || canonical_form(t) == want;
    EXPECT_EQ(t.interior().size(), 1u);
    EXPECT_NE(classify_structure(t).cls, StructureClass::Inconsistent);
  }
  EXPECT_TRUE(found);
}

TEST(Enumerate, SpecExamplesP3) {
  auto trees = enumerate_admissible_trees(2, 2, 2);
  auto want = canonical_form(star({R(1, 2), R(1, 2), R(0)}));
  bool found = false;
  for (const auto& t : trees) found = found || canonical_form(t) == want;
  EXPECT_TRUE(found);
}

TEST(Enumerate, StarCountOracle) {
  // p = 3: B0 values {0, 1/2}, no new tails (3/2 has numerator 3). Triples with sum 1
  // and >= 2 tails: {1/2,1/2,0}; plus the two exceptional stars.
  auto trees = enumerate_admissible_trees(2, 3, 2);
  EXPECT_EQ(trees.size(), 3u);
}

TEST(Enumerate, FilterDoesWork) {
  auto report = enumerate_admissible_trees_report(6, 4, 6);
  auto all = enumerate_valid_trees(6, 4, 6);
  EXPECT_EQ(report.candidates, all.size());
  std::size_t non_star = 0;
  for (const auto& t : all) {
    if (t.interior().size() == 1) continue;
    ++non_star;
    EXPECT_EQ(classify_structure(t).cls, StructureClass::Inconsistent);
    if (!detail::exceptional_config(t) && interior_branching(t)) {
      EXPECT_TRUE(nu_profile(t).pass()) << canonical_form(t);
    }
  }
  EXPECT_GT(non_star, 0u);
  EXPECT_EQ(report.trees.size() + non_star, all.size());
}

TEST(Enumerate, Bounds) {
  EXPECT_THROW(enumerate_admissible_trees(6, 7, 6), Error);
  EXPECT_THROW(enumerate_admissible_trees(6, 4, 13), Error);
  EXPECT_THROW(enumerate_admissible_trees(8, 2, 6), Error);  // 9 is not prime
}

TEST(Canonical, Deterministic) {
  auto a = star({R(1, 6), R(2, 3), R(1, 6)});
  auto b = star({R(2, 3), R(1, 6), R(1, 6)});
  EXPECT_EQ(canonical_form(a), canonical_form(b));
}

// --- properties

TEST(Property, RandomConsistentTrees) {
  std::mt19937_64 rng(20261019);
  for (int i = 0; i < 1000; ++i) {
    auto t = gen::random_consistent_tree(rng);
    auto r = validate_tree(t);
    ASSERT_TRUE(r.pass) << canonical_form(t) << " " << r.violations[0].detail;
    auto g = global_vcf(t);
    ASSERT_TRUE(g.pass) << canonical_form(t);
    EXPECT_EQ(g.lhs - g.rhs, R(0));
    for (const auto& e : t.all_half_edges()) {
      const auto& E = t.edges()[e.edge];
      EXPECT_EQ(t.sigma_of(E, true) + t.sigma_of(E, false), R(0));
    }
  }
}

TEST(Property, MutatedTreesFail) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    auto t = gen::random_consistent_tree(rng);
    std::size_t e = rng() % t.edges().size();
    Rational delta(1 + static_cast<std::int64_t>(rng() % 5), 1 + static_cast<std::int64_t>(rng() % 6));
    if (rng() % 2) delta = -delta;
    t.set_sigma(e, t.edges()[e].sigma + delta);
    if (t.edges()[e].reverse_sigma) t.set_reverse(e, -t.edges()[e].sigma);
    EXPECT_FALSE(validate_tree(t).pass);
    EXPECT_FALSE(global_vcf(t).pass);
  }
}

TEST(Property, NuIdentitiesOnAllValidTrees) {
  std::size_t checked = 0;
  for (std::int64_t pm1 : {2, 4, 6}) {
    for (const auto& t : enumerate_valid_trees(pm1, 4, 6)) {
      if (detail::exceptional_config(t) || !interior_branching(t)) continue;
      ++checked;
      auto p = nu_profile(t);
      EXPECT_TRUE(p.pass()) << canonical_form(t) << ": " << p.violations[0].detail;
    }
  }
  EXPECT_GT(checked, 10u);
}

TEST(Property, UnbranchedRootBreaksNuSums) {
  // root with two wild leaves and a single edge of sigma 1 toward the tails
  std::size_t seen = 0;
  for (const auto& t : enumerate_valid_trees(6, 4, 6)) {
    if (detail::exceptional_config(t) || interior_branching(t)) continue;
    ++seen;
    EXPECT_FALSE(nu_profile(t).pass());
  }
  EXPECT_GT(seen, 0u);
}

TEST(Property, NoInconsistentTreeEmitted) {
  for (std::int64_t pm1 : {2, 4, 6}) {
    auto trees = enumerate_admissible_trees(pm1, 5, 6);
    EXPECT_FALSE(trees.empty());
    for (const auto& t : trees) EXPECT_NE(classify_structure(t).cls, StructureClass::Inconsistent);
  }
}
