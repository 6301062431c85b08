#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "pools.hpp"

using namespace profinite;

namespace {

std::vector<Word> word_pool(std::mt19937_64& rng) {
  const Word x0 = Word::generator(0), x1 = Word::generator(1), x2 = Word::generator(2);
  std::vector<Word> out = {Word(),
                           power(x0, 2),
                           power(x0, 4),
                           power(x0, 8),
                           power(x0, 9),
                           power(x1, 3),
                           commutator(x0, x1),
                           commutator(x0, x2),
                           commutator(commutator(x0, x2), x1),
                           power(x0 * x2, 3),
                           Word::generator(7)};
  std::uniform_int_distribution<std::size_t> gen(0, 3), len(1, 5);
  std::uniform_int_distribution<int> exp(-3, 3);
  for (int k = 0; k != 30; ++k) {
    std::vector<Syllable> syl;
    for (std::size_t n = len(rng); n-- > 0;) {
      const int e = exp(rng);
      syl.push_back({gen(rng), e == 0 ? 2 : e});
    }
    out.emplace_back(std::move(syl));
  }
  return out;
}

} // namespace

TEST(Filter, ContainsExamples) {
  for (const auto& [name, r] : pools::filter_pool()) {
    EXPECT_EQ(contains(r, top_element(), 0), Membership::Yes) << name;
    EXPECT_EQ(contains(r, r.at(0), 0), Membership::Yes) << name;
  }
  const auto c = canonicalize(cyclic_group(4), {1});
  const auto l = canonicalize(cyclic_group(3), {1});
  ASSERT_FALSE(leq(c, l));
  const FilterChain principal = FilterChain::constant(c);
  for (std::size_t d : {0, 3, 50})
    EXPECT_EQ(contains(principal, l, d), Membership::NoAtDepth);
}

TEST(Filter, ContainsIsUnknownPastTruncation) {
  const FilterChain t = FilterChain::truncated({top_element(), canonicalize(cyclic_group(2), {1})});
  const auto mod4 = canonicalize(cyclic_group(4), {1});
  EXPECT_EQ(contains(t, mod4, 1), Membership::NoAtDepth);
  EXPECT_EQ(contains(t, mod4, 2), Membership::Unknown);
}

TEST(Filter, TruncatedRejectsAscendingLevels) {
  try {
    FilterChain::truncated({canonicalize(cyclic_group(4), {1}), canonicalize(cyclic_group(2), {1})});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "filter.NotDescending");
  }
}

TEST(Filter, QuotientExamples) {
  const FilterChain top = FilterChain::constant(top_element());
  for (std::size_t i = 0; i != 4; ++i)
    EXPECT_EQ(quotient_at(top, i).order(), 1u);
  const FilterChain mod2 = cyclic_power_chain(2);
  for (std::size_t i = 0; i != 8; ++i) {
    const FiniteGroup q = quotient_at(mod2, i);
    EXPECT_TRUE(is_isomorphic(q, cyclic_group(std::size_t(1) << i))) << i;
  }
  EXPECT_EQ(mod2.bound(), std::optional<std::size_t>(12));
}

TEST(Filter, MeklerChainOrdersMatchRewriting) {
  const Graph c5 = Graph::cycle(5);
  const FilterChain r = rn_chain(c5, 3);
  ASSERT_EQ(r.bound(), std::optional<std::size_t>(5));
  for (std::size_t n = 0; n != 5; ++n)
    EXPECT_EQ(quotient_at(r, n).order(), oracle::generated_order(c5, 3, n)) << n;
  // {0,1} is an edge of C5, so level 2 is abelian of order 9.
  EXPECT_EQ(quotient_at(r, 2).order(), 9u);
  EXPECT_TRUE(is_abelian(quotient_at(r, 2)));
}

TEST(Filter, PrincipalDetection) {
  const FilterChain c = FilterChain::constant(canonicalize(cyclic_group(3), {1}));
  for (std::size_t d = 0; d != 6; ++d)
    EXPECT_TRUE(is_principal_up_to(c, d));
  const FilterChain mod2 = cyclic_power_chain(2);
  for (std::size_t d = 2; d != 10; ++d)
    EXPECT_FALSE(is_principal_up_to(mod2, d)) << d;
  const FilterChain rn = rn_chain(Graph::cycle(5), 3);
  EXPECT_FALSE(is_principal_up_to(rn, 4));
  // A chain that settles: mod-4 from level 2 on.
  const FilterChain settles = FilterChain::from_rule([](std::size_t i) {
    return i == 0 ? top_element() : canonicalize(cyclic_group(i == 1 ? 2 : 4), {1});
  });
  EXPECT_TRUE(is_principal_up_to(settles, 4));
  EXPECT_FALSE(is_principal_up_to(settles, 3));
}

TEST(Filter, ExtendGenerators) {
  const FilterChain mod2 = cyclic_power_chain(2);
  const FilterChain same = extend_generators(mod2, 1, 1);
  for (std::size_t i = 0; i != 6; ++i)
    EXPECT_TRUE(same.at(i) == mod2.at(i));
  const FilterChain top = extend_generators(FilterChain::constant(top_element()), 0, 4);
  EXPECT_TRUE(top.is_constant());
  EXPECT_TRUE(top.at(0) == top_element());
  const FilterChain wide = extend_generators(mod2, 1, 3);
  for (std::size_t i = 0; i != 8; ++i)
    EXPECT_TRUE(is_isomorphic(quotient_at(wide, i), quotient_at(mod2, i))) << i;
  const FilterChain rn = rn_chain(Graph::cycle(5), 3);
  const FilterChain narrow = extend_generators(rn, 2, 5);
  EXPECT_NO_THROW(narrow.at(2));
  try {
    narrow.at(3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "filter.SupportTooLarge");
  }
}

TEST(Filter, ExtendGeneratorsKeepsTruncation) {
  const FilterChain t = FilterChain::truncated({top_element(), base_element(0)});
  const FilterChain e = extend_generators(t, 3, 5);
  EXPECT_TRUE(e.is_truncated());
  EXPECT_EQ(e.bound(), t.bound());
}

TEST(Filter, ThetaMeetExamples) {
  std::mt19937_64 rng(3);
  for (const auto& [name, r] : pools::filter_pool())
    EXPECT_TRUE(theta_meet(r, Word(), 3)) << name;
  const FilterChain top = FilterChain::constant(top_element());
  for (const Word& w : word_pool(rng))
    EXPECT_TRUE(theta_meet(top, w, 5));
  const FilterChain mod2 = cyclic_power_chain(2);
  EXPECT_TRUE(theta_meet(mod2, Word::generator(0), 0));
  for (std::size_t d = 1; d != 5; ++d)
    EXPECT_FALSE(theta_meet(mod2, Word::generator(0), d));
  EXPECT_TRUE(theta_meet(mod2, power(Word::generator(0), 8), 3));
  EXPECT_FALSE(theta_meet(mod2, power(Word::generator(0), 8), 4));
}

TEST(Filter, ThetaMeetIsMonotoneInDepth) {
  std::mt19937_64 rng(4);
  const auto words = word_pool(rng);
  for (const auto& [name, r] : pools::filter_pool())
    for (const Word& w : words) {
      bool previous = true;
      for (std::size_t d = 0; d != 4; ++d) {
        const bool now = theta_meet(r, w, d);
        EXPECT_FALSE(now && !previous) << name << " " << render(w);
        previous = now;
      }
    }
}

// contains(R, L, d) = yes forces every word of the depth-d meet into ker L.
TEST(Filter, PhiThetaRoundTrip) {
  std::mt19937_64 rng(5);
  const auto words = word_pool(rng);
  constexpr std::size_t kDepth = 3;
  for (const auto& [name, r] : pools::filter_pool())
    for (std::size_t i = 0; i <= 40; ++i) {
      const LatticeElement l = enumerate(i);
      if (contains(r, l, kDepth) != Membership::Yes)
        continue;
      for (const Word& w : words)
        if (theta_meet(r, w, kDepth))
          EXPECT_EQ(evaluate(l, w), l.target.identity()) << name << " L" << i << " " << render(w);
    }
}

TEST(Filter, ProjectionsBetweenLevels) {
  constexpr std::size_t kDepth = 3;
  for (const auto& [name, r] : pools::filter_pool())
    for (std::size_t j = 0; j <= kDepth; ++j)
      for (std::size_t i = 0; i < j; ++i) {
        const LatticeElement fine = r.at(j), coarse = r.at(i);
        const std::size_t k = std::max(fine.support, coarse.support);
        const auto map = extend_homomorphism(fine.target, impl::padded_images(fine, k),
                                             coarse.target, impl::padded_images(coarse, k));
        ASSERT_TRUE(map) << name << " " << i << " " << j;
        std::set<Elem> image(map->begin(), map->end());
        EXPECT_EQ(image.size(), coarse.target.order()) << name;
      }
}

TEST(Filter, HausdorffExamples) {
  const auto pool = pools::filter_pool();
  const FilterChain top = FilterChain::constant(top_element());
  for (const auto& [name, r] : pool) {
    for (std::size_t n = 0; n != 5; ++n)
      EXPECT_TRUE(hausdorff_level(r, r, n)) << name;
    if (r.at(0) == top_element())
      EXPECT_TRUE(hausdorff_level(r, pool[3].second, 0)) << name;
  }
  // x0 mod 2 is visible once the neighbourhood sees parity of x0.
  const FilterChain mod2 = FilterChain::constant(canonicalize(cyclic_group(2), {1}));
  bool separated = false;
  for (std::size_t n = 0; n != 5; ++n)
    separated = separated || !hausdorff_level(top, mod2, n);
  EXPECT_TRUE(separated);
}

TEST(Filter, HausdorffIsRefiningEquivalence) {
  const auto pool = pools::filter_pool();
  const std::size_t m = pool.size();
  for (std::size_t n = 0; n != 5; ++n) {
    std::vector<std::vector<char>> eq(m, std::vector<char>(m));
    for (std::size_t a = 0; a != m; ++a)
      for (std::size_t b = 0; b != m; ++b)
        eq[a][b] = hausdorff_level(pool[a].second, pool[b].second, n);
    for (std::size_t a = 0; a != m; ++a) {
      EXPECT_TRUE(eq[a][a]);
      for (std::size_t b = 0; b != m; ++b) {
        EXPECT_EQ(eq[a][b], eq[b][a]);
        for (std::size_t c = 0; c != m; ++c)
          if (eq[a][b] && eq[b][c])
            EXPECT_TRUE(eq[a][c]) << n << ": " << a << b << c;
        if (eq[a][b] && n > 0)
          EXPECT_TRUE(hausdorff_level(pool[a].second, pool[b].second, n - 1));
      }
    }
  }
}

TEST(Filter, HausdorffWitnessConditionsAgree) {
  const auto pool = pools::filter_pool();
  std::vector<LatticeElement> sample;
  for (std::size_t i = 0; i <= 40; ++i)
    sample.push_back(enumerate(i));
  for (std::size_t n = 0; n <= 4; ++n)
    for (std::size_t a = 0; a != pool.size(); ++a)
      for (std::size_t b = a; b != pool.size(); ++b) {
        const auto w = hausdorff_witness(pool[a].second, pool[b].second, n, sample);
        EXPECT_EQ(w.images, w.joins) << n << " " << pool[a].first << " " << pool[b].first;
        EXPECT_EQ(w.above, w.joins) << n << " " << pool[a].first << " " << pool[b].first;
      }
}

TEST(Filter, StableJoinNeedsSettledRule) {
  // With only levels 0 and 1 available, x0 -> Z/2 still changes the join
  // with the parity neighbourhood.
  const FilterChain mod2 = cyclic_power_chain(2);
  try {
    hausdorff_level(mod2, mod2, 1, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "filter.DepthInsufficient");
  }
  EXPECT_TRUE(hausdorff_level(mod2, mod2, 1, 4));
}
