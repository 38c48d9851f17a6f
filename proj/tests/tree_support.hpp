#pragma once

#include <random>
#include <vector>

#include "mildred/tree_calculus.hpp"

namespace mildred::gen {

/// Star: root of genus 0 with one leaf per sigma (kind from its range).
inline ReductionTree star(const std::vector<Rational>& sigmas) {
  ReductionTree t;
  auto r = t.add_vertex("v0", VertexKind::Interior, 0);
  t.set_root(r);
  int k = 0;
  for (const auto& s : sigmas) {
    VertexKind kind = s.is_zero() ? VertexKind::LeafWild : s <= Rational(1) ? VertexKind::LeafPrim : VertexKind::LeafNew;
    auto j = t.add_vertex("j" + std::to_string(++k), kind);
    t.add_edge(r, j, s);
  }
  return t;
}

inline Rational random_fraction(std::mt19937_64& rng) {
  static const std::int64_t dens[] = {2, 3, 4, 5, 6, 12};
  std::int64_t d = dens[rng() % 6];
  return Rational(1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(d - 1)), d);
}

/**
 * A random tree whose edge data satisfies every interior vertex sum: random
 * shape, genera and leaves, parent edges solved bottom-up, and the root closed
 * off with one (or two) extra leaves. Half the trees also store the reverse
 * sigma explicitly.
 */
inline ReductionTree random_consistent_tree(std::mt19937_64& rng) {
  ReductionTree t;
  const std::size_t n = 1 + rng() % 6;
  std::vector<std::size_t> parent(n, 0);
  std::vector<std::size_t> id(n);
  for (std::size_t i = 0; i < n; ++i) {
    id[i] = t.add_vertex("v" + std::to_string(i), VertexKind::Interior, static_cast<std::int64_t>(rng() % 3));
    if (i) parent[i] = rng() % i;
  }
  t.set_root(id[0]);
  std::size_t leaf_no = 0;
  std::vector<Rational> sum(n);  // sum of (sigma - 1) over child edges
  auto add_leaf = [&](std::size_t i, VertexKind k, Rational s) {
    auto j = t.add_vertex("j" + std::to_string(++leaf_no), k);
    t.add_edge(id[i], j, s);
    sum[i] += s - Rational(1);
  };
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t leaves = rng() % 4;
    for (std::size_t k = 0; k < leaves; ++k) {
      switch (rng() % 3) {
        case 0: add_leaf(i, VertexKind::LeafWild, Rational(0)); break;
        case 1: add_leaf(i, VertexKind::LeafPrim, random_fraction(rng)); break;
        default: add_leaf(i, VertexKind::LeafNew, Rational(1) + random_fraction(rng)); break;
      }
    }
  }
  for (std::size_t i = n; i-- > 1;) {
    Rational s = sum[i] + Rational(1 - 2 * t.vertices()[id[i]].genus);
    t.add_edge(id[parent[i]], id[i], s);
    sum[parent[i]] += s - Rational(1);
  }
  // close off the root: need sigma_fix - 1 = 2 g - 2 - S with sigma_fix in [0, 2)
  while (sum[0] <= Rational(-3)) add_leaf(0, VertexKind::LeafNew, Rational(3, 2));
  std::int64_t g = 0;
  Rational fix = Rational(-1) - sum[0];
  while (fix < Rational(0)) {
    ++g;
    fix += Rational(2);
  }
  t.set_genus(id[0], g);
  auto leaf = [&](VertexKind k, Rational s) {
    auto j = t.add_vertex("j" + std::to_string(++leaf_no), k);
    t.add_edge(id[0], j, s);
  };
  if (fix.is_zero()) leaf(VertexKind::LeafWild, fix);
  else if (fix < Rational(1)) leaf(VertexKind::LeafPrim, fix);
  else if (fix > Rational(1)) leaf(VertexKind::LeafNew, fix);
  else {
    leaf(VertexKind::LeafPrim, Rational(1, 2));
    leaf(VertexKind::LeafNew, Rational(3, 2));
  }
  if (rng() % 2)
    for (std::size_t e = 0; e < t.edges().size(); ++e) t.set_reverse(e, -t.edges()[e].sigma);
  return t;
}

/// Root -- v -- tails: v carries a prim tail c and a new tail n, the root two prim tails a, b.
inline ReductionTree chain_counterexample() {
  ReductionTree t;
  auto r = t.add_vertex("v0", VertexKind::Interior, 0);
  auto v = t.add_vertex("v1", VertexKind::Interior, 0);
  t.set_root(r);
  auto a = t.add_vertex("a", VertexKind::LeafPrim);
  auto b = t.add_vertex("b", VertexKind::LeafPrim);
  auto c = t.add_vertex("c", VertexKind::LeafPrim);
  auto n = t.add_vertex("n", VertexKind::LeafNew);
  t.add_edge(r, a, Rational(1, 6));
  t.add_edge(r, b, Rational(1, 3));
  t.add_edge(r, v, Rational(1, 2));
  t.add_edge(v, c, Rational(1, 6));
  t.add_edge(v, n, Rational(4, 3));
  return t;
}

/// Root -- v -- new tail of sigma 2, three wild leaves (two at the root).
inline ReductionTree exceptional_chain() {
  ReductionTree t;
  auto r = t.add_vertex("v0", VertexKind::Interior, 0);
  auto v = t.add_vertex("v1", VertexKind::Interior, 0);
  t.set_root(r);
  auto w1 = t.add_vertex("w1", VertexKind::LeafWild);
  auto w2 = t.add_vertex("w2", VertexKind::LeafWild);
  auto w3 = t.add_vertex("w3", VertexKind::LeafWild);
  auto n = t.add_vertex("n", VertexKind::LeafNew);
  t.add_edge(r, w1, Rational(0));
  t.add_edge(r, w2, Rational(0));
  t.add_edge(r, v, Rational(1));
  t.add_edge(v, w3, Rational(0));
  t.add_edge(v, n, Rational(2));
  return t;
}

}  // namespace mildred::gen
