// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>

#include "oracles.hpp"
#include "pools.hpp"

using namespace profinite;

namespace {

// Records the first few failed checks of a criterion.
class Check {
public:
  void operator()(bool ok, const std::string& what) {
    if (!ok && failures_.size() < 5)
      failures_.push_back(what);
    ok_ = ok_ && ok;
  }
  bool ok() const { return ok_; }
  const std::vector<std::string>& failures() const { return failures_; }

private:
  bool ok_ = true;
  std::vector<std::string> failures_;
};

MeklerElement with_alpha(const MeklerContextPtr& ctx, std::vector<std::uint32_t> alpha) {
  MeklerElement v = mekler_identity(ctx);
  v.alpha = std::move(alpha);
  return v;
}

void gamma2_round_trip(Check& check) {
  const std::vector<std::tuple<std::string, Graph, std::size_t>> cases = {
      {"C5/3", Graph::cycle(5), 3}, {"C5/5", Graph::cycle(5), 5}, {"Petersen/3", Graph::petersen(), 3}};
  for (const auto& [name, g, p] : cases) {
    const Gamma2Result r = gamma2(g, p);
    check(r.isomorphic && r.graph == g, "gamma2 " + name);
  }
}

void commutator_formula_matches(Check& check) {
  const auto ctx = make_mekler_context(Graph::cycle(5), 3);
  const auto level = rn_level(ctx, 3);
  std::vector<MeklerElement> elements;
  for (std::size_t code = 0; code != 81; ++code) {
    MeklerElement u = mekler_identity(ctx);
    u.alpha[0] = code % 3;
    u.alpha[1] = code / 3 % 3;
    u.alpha[2] = code / 9 % 3;
    u.beta[ctx->index_of(0, 2)] = std::uint32_t(code / 27);
    elements.push_back(u);
  }
  check(level.target.order() == elements.size(), "level-3 truncation has order 81");
  const oracle::Rewriter rw(ctx->graph, 3);
  for (const auto& u : elements)
    for (const auto& w : elements) {
      const auto c = commutator_formula(u, w);
      check(c == commutator_oracle(u, w), "formula vs oracle at p=3: " + render(u) + ", " + render(w));
      check(oracle::to_nil(c) == rw.commutator(oracle::to_nil(u), oracle::to_nil(w)),
            "formula vs rewriting at p=3: " + render(u) + ", " + render(w));
    }
  const auto ctx5 = make_mekler_context(Graph::cycle(5), 5);
  const oracle::Rewriter rw5(ctx5->graph, 5);
  std::mt19937_64 rng(2002);
  for (int t = 0; t != 1000; ++t) {
    const auto u = oracle::random_element(ctx5, rng), w = oracle::random_element(ctx5, rng);
    const auto c = commutator_formula(u, w);
    check(c == commutator_oracle(u, w) &&
              oracle::to_nil(c) == rw5.commutator(oracle::to_nil(u), oracle::to_nil(w)),
          "formula at p=5: " + render(u) + ", " + render(w));
  }
}

void class_size_table(Check& check) {
  const auto ctx = make_mekler_context(Graph::cycle(5), 3);
  const std::vector<std::pair<std::vector<std::uint32_t>, std::size_t>> expected = {
      {{1, 0, 0, 0, 0}, 2}, {{1, 1, 0, 0, 0}, 4}, {{1, 0, 1, 0, 0}, 6}, {{1, 0, 1, 0, 1}, 2}};
  std::map<std::size_t, std::size_t> class_of;
  const auto sizes = oracle::centralizer_class_sizes(Graph::cycle(5), 3, &class_of);
  for (const auto& [alpha, size] : expected) {
    const auto v = with_alpha(ctx, alpha);
    check(class_size(v) == size, "class_size of " + render(v));
    std::size_t code = 0;
    for (std::size_t i = alpha.size(); i-- > 0;)
      code = code * 3 + alpha[i];
    check(sizes.at(class_of.at(code)) == size, "enumerated class of " + render(v));
  }
  check(class_of.size() == 242, "all noncentral cosets enumerated");
  for (const auto& [code, first] : class_of)
    check(class_size(impl::alpha_element(ctx, code)) == sizes.at(first),
          "class_size at coset " + std::to_string(code));
}

void centralizer_power_invariance(Check& check) {
  const auto ctx = make_mekler_context(Graph::cycle(5), 3);
  const std::size_t betas = ctx->pairs.size();
  std::size_t beta_codes = 1;
  for (std::size_t k = 0; k != betas; ++k)
    beta_codes *= 3;
  std::size_t noncentral = 0;
  for (std::size_t a = 0; a != 243; ++a)
    for (std::size_t b = 0; b != beta_codes; ++b) {
      MeklerElement v = impl::alpha_element(ctx, a);
      for (std::size_t k = 0, c = b; k != betas; ++k, c /= 3)
        v.beta[k] = std::uint32_t(c % 3);
      if (is_central(v))
        continue;
      ++noncentral;
      check(centralizer_kernel(v) == centralizer_kernel(power(v, 2)), "C(v) != C(v^2) at " + render(v));
    }
  check(noncentral == 242 * beta_codes, "noncentral element count");
}

void lattice_and_hausdorff(Check& check) {
  std::vector<LatticeElement> s;
  for (std::size_t i = 0; i <= 40; ++i)
    s.push_back(enumerate(i));
  const std::size_t n = s.size();
  std::vector<std::vector<char>> le(n, std::vector<char>(n));
  for (std::size_t i = 0; i != n; ++i)
    for (std::size_t j = 0; j != n; ++j)
      le[i][j] = leq(s[i], s[j]);
  for (std::size_t i = 0; i != n; ++i) {
    check(le[i][i], "reflexivity");
    for (std::size_t j = 0; j != n; ++j) {
      check(!(le[i][j] && le[j][i]) || s[i] == s[j], "antisymmetry");
      for (std::size_t k = 0; k != n; ++k)
        check(!(le[i][j] && le[j][k]) || le[i][k], "transitivity");
    }
  }
  for (std::size_t i = 0; i != n; ++i)
    for (std::size_t j = i; j != n; ++j) {
      const auto& a = s[i];
      const auto& b = s[j];
      const auto lo = meet(a, b), hi = join(a, b);
      check(lo == meet(b, a) && hi == join(b, a), "commutativity");
      check(equivalent(meet(a, hi), a) && equivalent(join(a, lo), a), "absorption");
      check(leq(lo, a) && leq(lo, b) && leq(a, hi) && leq(b, hi), "bounds");
      for (std::size_t k = 0; k != n; ++k) {
        if (le[k][i] && le[k][j])
          check(leq(s[k], lo), "greatest lower bound");
        if (le[i][k] && le[j][k])
          check(leq(hi, s[k]), "least upper bound");
      }
    }
  for (const auto& a : s)
    check(meet(a, a) == a && join(a, a) == a, "idempotence");
  std::mt19937_64 rng(505);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (int t = 0; t != 300; ++t) {
    const auto& a = s[pick(rng)];
    const auto& b = s[pick(rng)];
    const auto& c = s[pick(rng)];
    check(meet(meet(a, b), c) == meet(a, meet(b, c)), "meet associativity");
    check(join(join(a, b), c) == join(a, join(b, c)), "join associativity");
  }

  const auto pool = pools::filter_pool();
  for (std::size_t level = 0; level <= 5; ++level)
    for (std::size_t a = 0; a != pool.size(); ++a)
      for (std::size_t b = a; b != pool.size(); ++b) {
        const auto w = hausdorff_witness(pool[a].second, pool[b].second, level, s);
        check(w.images == w.joins && w.above == w.joins,
              "three-way equivalence at n=" + std::to_string(level) + " for " + pool[a].first +
                  " / " + pool[b].first);
      }
}

bool prefix_free(const std::vector<std::string>& codes) {
  std::set<std::string> sorted(codes.begin(), codes.end());
  if (sorted.size() != codes.size())
    return false;
  // In lexicographic order a prefix immediately precedes some extension of it.
  for (auto it = sorted.begin(); std::next(it) != sorted.end(); ++it)
    if (std::next(it)->compare(0, it->size(), *it) == 0)
      return false;
  return true;
}

bool measures_sum_to_one(const std::vector<std::string>& codes) {
  std::size_t longest = 0;
  for (const auto& c : codes)
    longest = std::max(longest, c.size());
  if (longest >= 63)
    return false;
  unsigned long long total = 0;
  for (const auto& c : codes)
    total += 1ull << (longest - c.size());
  return total == 1ull << longest;
}

void cantor_encoding(Check& check) {
  const std::vector<std::pair<std::string, FilterChain>> chains = {
      {"mod-2^n", cyclic_power_chain(2)}, {"rn(C5,3)", rn_chain(Graph::cycle(5), 3)}};
  for (const auto& [name, chain] : chains) {
    const CosetTree t = build_tree(chain, 3);
    for (std::size_t k : t.branching) {
      std::vector<std::string> children;
      for (std::size_t i = 0; i != k; ++i)
        children.push_back(encode_F(std::vector<std::size_t>{k}, TreePath{i}));
      check(prefix_free(children) && measures_sum_to_one(children),
            name + ": child codes at branching " + std::to_string(k));
    }
    for (std::size_t n = 0; n <= 3; ++n) {
      std::vector<std::string> codes;
      for (const auto& p : level_paths(t, n))
        codes.push_back(encode_F(t, p));
      check(prefix_free(codes), name + ": level " + std::to_string(n) + " injective prefix code");
      check(measures_sum_to_one(codes), name + ": level " + std::to_string(n) + " measure");
      const auto r = verify_difference_axioms(t, n, 0, true);
      check(r.ok() && r.exhaustive, name + ": difference axioms at level " + std::to_string(n));
    }
    const std::string zero = encode_F(t, TreePath(3, 0));
    check(zero == std::string(zero.size(), '0'), name + ": zero path");
  }
}

void sl_family(Check& check) {
  std::vector<PrimeSet> subsets;
  for (unsigned mask = 0; mask != 8; ++mask) {
    PrimeSet s;
    for (std::size_t p : {2u, 3u, 5u})
      if (mask & (p == 2 ? 1u : p == 3 ? 2u : 4u))
        s.push_back(p);
    subsets.push_back(s);
  }
  for (const auto& s : subsets)
    check(primes_detected(gP_level(s, 1), {2, 3, 5}) == s, "detection on " + std::to_string(s.size()) + " primes");
  for (std::size_t i = 0; i != subsets.size(); ++i)
    for (std::size_t j = i + 1; j != subsets.size(); ++j)
      check(distinguishing_level(subsets[i], subsets[j]) == std::optional<std::size_t>(1),
            "distinguishing level");
  check(sl2_level(2, 1).group.order() == 6 && oracle::count_det_one(2) == 6, "|SL2(Z/2)| = 6");
  check(sl2_level(3, 1).group.order() == 24 && oracle::count_det_one(3) == 24, "|SL2(Z/3)| = 24");
}

void mekler_axioms(Check& check) {
  std::mt19937_64 rng(808);
  for (std::size_t p : {3, 5}) {
    const auto ctx = make_mekler_context(Graph::petersen(), p);
    const oracle::Rewriter rw(ctx->graph, long(p));
    const auto e = mekler_identity(ctx);
    for (int t = 0; t != 1000; ++t) {
      const auto a = oracle::random_element(ctx, rng), b = oracle::random_element(ctx, rng),
                 c = oracle::random_element(ctx, rng);
      const auto left = multiply(multiply(a, b), c);
      check(left == multiply(a, multiply(b, c)), "associativity");
      check(oracle::to_nil(left) ==
                rw.multiply(rw.multiply(oracle::to_nil(a), oracle::to_nil(b)), oracle::to_nil(c)),
            "product vs rewriting");
      check(power(a, static_cast<long long>(p)) == e, "exponent p");
      check(commutator_oracle(commutator_oracle(a, b), c) == e, "nil-2");
    }
  }
  const auto free2 = make_mekler_context(Graph(2), 3);
  check(is_isomorphic(ut3(3), rn_level(free2, 2).target), "ut3(3) vs level-2 quotient");
}

} // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria = {
      {"gamma2 round trip on C5/3, C5/5, Petersen/3", gamma2_round_trip},
      {"commutator formula vs oracle", commutator_formula_matches},
      {"class-size table and exhaustive class enumeration", class_size_table},
      {"centralizer kernels of v and v^2 agree", centralizer_power_invariance},
      {"lattice laws and Hausdorff three-way equivalence", lattice_and_hausdorff},
      {"Cantor encoding and difference axioms", cantor_encoding},
      {"SL2 family detection and distinguishing levels", sl_family},
      {"Mekler group axioms and ut3(3)", mekler_axioms},
  };
  int failed = 0;
  for (std::size_t k = 0; k != criteria.size(); ++k) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[k].second(check);
    } catch (const std::exception& e) {
      check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %zu: %s (%.2f s)\n", check.ok() ? "PASS" : "FAIL", k + 1,
                criteria[k].first.c_str(), secs);
    for (const auto& f : check.failures())
      std::printf("    %s\n", f.c_str());
    failed += !check.ok();
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
