#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"

using namespace profinite;

namespace {

const CosetTree& mod2_tree() {
  static const CosetTree t = build_tree(cyclic_power_chain(2), 6);
  return t;
}

const CosetTree& rn_tree() {
  static const CosetTree t = build_tree(rn_chain(Graph::cycle(5), 3), 4);
  return t;
}

bool is_prefix(const std::string& a, const std::string& b) {
  return a.size() <= b.size() && b.compare(0, a.size(), a) == 0;
}

} // namespace

TEST(Cantor, EmptyTree) {
  const CosetTree t = build_tree(cyclic_power_chain(2), 0);
  EXPECT_EQ(t.depth, 0u);
  EXPECT_TRUE(t.branching.empty());
  EXPECT_TRUE(verify_difference_axioms(t, 0, 10).ok());
}

TEST(Cantor, Mod2Branching) {
  const CosetTree& t = mod2_tree();
  for (std::size_t n = 0; n != t.depth; ++n) {
    EXPECT_EQ(t.branching[n], 2u);
    EXPECT_TRUE(t.reps[n][0].empty());
    // The nontrivial coset of level n is x0^(2^n).
    EXPECT_EQ(t.reps[n][1], Word::generator(0, 1ll << n)) << render(t.reps[n][1]);
  }
  for (std::size_t n = 0; n <= t.depth; ++n)
    EXPECT_EQ(level_paths(t, n).size(), std::size_t(1) << n);
}

TEST(Cantor, MeklerBranching) {
  const CosetTree& t = rn_tree();
  EXPECT_EQ(t.branching, (std::vector<std::size_t>{3, 3, 9, 27}));
  for (std::size_t n = 0; n != t.depth; ++n)
    EXPECT_TRUE(t.reps[n][0].empty());
}

TEST(Cantor, RepresentativesSeparateCosets) {
  for (const CosetTree* t : {&mod2_tree(), &rn_tree()})
    for (std::size_t n = 0; n != t->depth; ++n) {
      const LatticeElement& fine = t->levels[n + 1];
      std::set<Elem> seen;
      for (const Word& w : t->reps[n]) {
        const Elem x = evaluate(fine, w);
        EXPECT_EQ(t->projection[n][x], t->levels[n].target.identity());
        seen.insert(x);
      }
      EXPECT_EQ(seen.size(), t->branching[n]);
    }
}

TEST(Cantor, RejectsBadChains) {
  const FilterChain flat = FilterChain::constant(top_element());
  EXPECT_NO_THROW(build_tree(flat, 0));
  const FilterChain shifted = FilterChain::from_rule(
      [](std::size_t i) { return canonicalize(cyclic_group(std::size_t(2) << i), {1}); });
  try {
    build_tree(shifted, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "cantor.NotStrictlyDescending");
  }
}

TEST(Cantor, EncodeExamples) {
  EXPECT_EQ(encode_F({2, 3, 4}, {0, 0, 0}), "000000");
  EXPECT_EQ(encode_F({2, 3, 4}, {1, 2, 0}), "11000");
  EXPECT_EQ(encode_F({2, 3, 4}, {0, 1, 2}), "00101");
  try {
    encode_F({2, 3}, {0, 3});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "cantor.DigitOutOfRange");
  }
}

TEST(Cantor, ZeroPathEncodesToZeros) {
  for (const CosetTree* t : {&mod2_tree(), &rn_tree()}) {
    const std::string bits = encode_F(*t, TreePath(t->depth, 0));
    EXPECT_EQ(bits, std::string(bits.size(), '0'));
  }
}

TEST(Cantor, ChildCodesFormCompletePrefixCode) {
  for (std::size_t k = 1; k != 30; ++k) {
    std::vector<std::string> codes;
    for (std::size_t i = 0; i != k; ++i)
      codes.push_back(encode_F(std::vector<std::size_t>{k}, TreePath{i}));
    // Sum of 2^-len equals 1, computed exactly on a common denominator.
    std::size_t longest = 0;
    for (const auto& c : codes)
      longest = std::max(longest, c.size());
    unsigned long long total = 0;
    for (const auto& c : codes)
      total += 1ull << (longest - c.size());
    EXPECT_EQ(total, 1ull << longest) << k;
    for (std::size_t i = 0; i != k; ++i)
      for (std::size_t j = 0; j != k; ++j)
        if (i != j)
          EXPECT_FALSE(is_prefix(codes[i], codes[j])) << k;
  }
}

TEST(Cantor, EncodingIsInjective) {
  for (const CosetTree* t : {&mod2_tree(), &rn_tree()})
    for (std::size_t n = 0; n <= std::min<std::size_t>(t->depth, 3); ++n) {
      std::set<std::string> seen;
      for (const auto& p : level_paths(*t, n))
        seen.insert(encode_F(*t, p));
      EXPECT_EQ(seen.size(), level_paths(*t, n).size());
    }
}

TEST(Cantor, RhoExamples) {
  const CosetTree& t = rn_tree();
  for (const auto& z : level_paths(t, 2)) {
    EXPECT_EQ(rho(t, z, z, 2), TreePath(2, 0));
    EXPECT_EQ(rho(t, z, TreePath(2, 0), 2), z);
  }
  try {
    rho(t, {0}, {0}, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "cantor.DepthInsufficient");
  }
}

TEST(Cantor, Mod2RhoIsSubtraction) {
  const CosetTree& t = mod2_tree();
  auto value = [](const TreePath& p) {
    unsigned v = 0;
    for (std::size_t i = 0; i != p.size(); ++i)
      v |= unsigned(p[i]) << i;
    return v;
  };
  for (const auto& z : level_paths(t, 4))
    for (const auto& w : level_paths(t, 4))
      EXPECT_EQ(value(rho(t, z, w, 4)), (value(z) + 16 - value(w)) % 16);
}

TEST(Cantor, DifferenceAxioms) {
  for (std::size_t n = 0; n <= 3; ++n) {
    const auto r = verify_difference_axioms(mod2_tree(), n, 100);
    EXPECT_TRUE(r.ok() && r.exhaustive) << n;
  }
  const auto r2 = verify_difference_axioms(rn_tree(), 2, 100);
  EXPECT_TRUE(r2.ok());
  EXPECT_TRUE(r2.exhaustive);
  EXPECT_EQ(r2.points, 9u);
  const auto r3 = verify_difference_axioms(rn_tree(), 3, 100);
  EXPECT_TRUE(r3.ok() && r3.exhaustive);
  EXPECT_EQ(r3.points, 81u);
  const auto r4 = verify_difference_axioms(rn_tree(), 4, 500);
  EXPECT_TRUE(r4.ok());
  EXPECT_FALSE(r4.exhaustive);
  const auto r4x = verify_difference_axioms(rn_tree(), 4, 0, true);
  EXPECT_TRUE(r4x.ok() && r4x.exhaustive);
}

// Truncation square: prefixes, quotient projections and rho commute.
TEST(Cantor, TowerCoherence) {
  std::mt19937_64 rng(21);
  const CosetTree& t = rn_tree();
  const auto points = level_paths(t, 4);
  std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);
  for (int k = 0; k != 300; ++k) {
    const TreePath& z = points[pick(rng)];
    const TreePath& w = points[pick(rng)];
    const TreePath full = rho(t, z, w, 4);
    for (std::size_t n = 0; n != 4; ++n) {
      const TreePath zn(z.begin(), z.begin() + long(n)), wn(w.begin(), w.begin() + long(n));
      EXPECT_EQ(rho(t, zn, wn, n), TreePath(full.begin(), full.begin() + long(n)));
      Elem x = coset_element(t, z, n + 1);
      EXPECT_EQ(t.projection[n][x], coset_element(t, z, n));
    }
  }
}

TEST(Cantor, ActionByDigitPermutations) {
  const CosetTree& t = rn_tree();
  const std::vector<std::size_t> id{0, 1, 2}, swap{0, 2, 1};
  auto moved = [](const std::vector<std::size_t>& pi, TreePath p) {
    p[0] = pi[p[0]];
    return p;
  };
  for (const auto& z : level_paths(t, 2))
    for (const auto& w : level_paths(t, 2)) {
      EXPECT_EQ(act_homeomorphism(t, id, z, w, 2), rho(t, z, w, 2));
      // pi^-1 . (pi . rho) = rho; swap is its own inverse.
      const TreePath back = moved(swap, act_homeomorphism(t, swap, moved(swap, z), moved(swap, w), 2));
      EXPECT_EQ(back, rho(t, z, w, 2));
    }
  // The conjugated operation is again a group difference.
  const auto points = level_paths(t, 2);
  std::map<TreePath, std::size_t> index;
  for (std::size_t i = 0; i != points.size(); ++i)
    index[points[i]] = i;
  const TreePath zero(2, 0);
  auto r = [&](const TreePath& a, const TreePath& b) { return act_homeomorphism(t, swap, a, b, 2); };
  auto prod = [&](const TreePath& a, const TreePath& b) { return r(a, r(zero, b)); };
  std::vector<Elem> table;
  for (const auto& a : points) {
    EXPECT_EQ(r(a, a), zero);
    EXPECT_EQ(r(a, zero), a);
    for (const auto& b : points)
      table.push_back(Elem(index.at(prod(a, b))));
  }
  EXPECT_TRUE(oracle::table_associative(points.size(), table));
  try {
    act_homeomorphism(t, {1, 0, 2}, zero, zero, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "cantor.PermutationMovesZero");
  }
}
