// Coset trees of a descending chain S_0 >= S_1 >= ... and the encoding of
// the limit group as a difference operation on Cantor space.
//
// The node σ at level n is the coset g^(0)_σ(0) ··· g^(n-1)_σ(n-1) S_n, where
// the g^(m)_i represent the cosets of S_{m+1} inside S_m. Everything is
// computed in the finite quotients Q_n = F/S_n.

#ifndef PROFINITE_CANTOR_HPP_
#define PROFINITE_CANTOR_HPP_

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "error.hpp"
#include "filter.hpp"
#include "finite_group.hpp"
#include "lattice.hpp"
#include "word.hpp"

namespace profinite {

using TreePath = std::vector<std::size_t>;

struct CosetTree {
  std::size_t depth = 0;
  std::vector<std::size_t> branching;       // k_0 .. k_{depth-1}
  std::vector<std::vector<Word>> reps;      // per level, k_n words; reps[n][0] is empty
  std::vector<LatticeElement> levels;       // Q_0 .. Q_depth
  // rep_elems[n][i]: reps[n][i] in Q_{n+1}; digit_of[n]: element of the
  // kernel of Q_{n+1} -> Q_n to its digit.
  std::vector<std::vector<Elem>> rep_elems;
  std::vector<std::vector<std::size_t>> digit_of;
  // projection[n]: Q_{n+1} -> Q_n
  std::vector<std::vector<Elem>> projection;
};

namespace impl {

// Shortest words (breadth-first, generators in index order) for every
// element of a lattice element's target.
inline std::vector<Word> element_words(const LatticeElement& l) {
  const FiniteGroup& g = l.target;
  std::vector<Word> words(g.order());
  std::vector<char> seen(g.order(), 0);
  std::vector<Elem> queue{g.identity()};
  seen[g.identity()] = 1;
  for (std::size_t i = 0; i != queue.size(); ++i)
    for (std::size_t j = 0; j != l.support; ++j) {
      const Elem y = g.mul(queue[i], l.images[j]);
      if (!seen[y]) {
        seen[y] = 1;
        words[y] = words[queue[i]] * Word::generator(j);
        queue.push_back(y);
      }
    }
  return words;
}

inline std::vector<Elem> projection_map(const LatticeElement& fine, const LatticeElement& coarse) {
  const std::size_t k = std::max(fine.support, coarse.support);
  auto map = extend_homomorphism(fine.target, padded_images(fine, k), coarse.target,
                                 padded_images(coarse, k));
  if (!map)
    fail("cantor.NotStrictlyDescending", "chain levels are not nested");
  return *map;
}

} // namespace impl

// Representatives of level n are the kernel elements of Q_{n+1} -> Q_n in
// increasing index order, identity first, written as shortest words.
inline CosetTree build_tree(const FilterChain& r, std::size_t depth) {
  CosetTree t;
  t.depth = depth;
  t.levels.push_back(r.at(0));
  if (t.levels[0].target.order() != 1 && depth > 0)
    fail("cantor.NotStrictlyDescending", "level 0 must be the whole group");
  for (std::size_t n = 0; n != depth; ++n) {
    const LatticeElement fine = r.at(n + 1);
    const LatticeElement& coarse = t.levels[n];
    if (fine.target.order() % coarse.target.order() != 0)
      fail("cantor.NotStrictlyDescending", "level orders do not divide");
    auto proj = impl::projection_map(fine, coarse);
    const auto words = impl::element_words(fine);
    std::vector<Elem> kernel;
    for (Elem x = 0; x != fine.target.order(); ++x)
      if (proj[x] == coarse.target.identity())
        kernel.push_back(x);
    std::stable_partition(kernel.begin(), kernel.end(),
                          [&](Elem x) { return x == fine.target.identity(); });
    std::vector<std::size_t> digit(fine.target.order(), std::size_t(-1));
    std::vector<Word> reps;
    for (std::size_t i = 0; i != kernel.size(); ++i) {
      digit[kernel[i]] = i;
      reps.push_back(words[kernel[i]]);
    }
    t.branching.push_back(kernel.size());
    t.reps.push_back(std::move(reps));
    t.rep_elems.push_back(std::move(kernel));
    t.digit_of.push_back(std::move(digit));
    t.projection.push_back(std::move(proj));
    t.levels.push_back(fine);
  }
  return t;
}

inline void check_path(const CosetTree& t, const TreePath& sigma, std::size_t n) {
  if (n > t.depth)
    fail("cantor.DepthInsufficient", "level " + std::to_string(n) + " beyond tree depth " +
                                         std::to_string(t.depth));
  if (sigma.size() < n)
    fail("cantor.DepthInsufficient", "path shorter than level " + std::to_string(n));
  for (std::size_t i = 0; i != n; ++i)
    if (sigma[i] >= t.branching[i])
      fail("cantor.DigitOutOfRange", "digit " + std::to_string(sigma[i]) + " at level " +
                                         std::to_string(i) + " with k=" +
                                         std::to_string(t.branching[i]));
}

// The coset of σ↾n as an element of Q_n.
inline Elem coset_element(const CosetTree& t, const TreePath& sigma, std::size_t n) {
  check_path(t, sigma, n);
  const LatticeElement& q = t.levels[n];
  Elem x = q.target.identity();
  for (std::size_t m = 0; m != n; ++m)
    x = q.target.mul(x, evaluate(q, t.reps[m][sigma[m]]));
  return x;
}

// Digits of an element of Q_n.
inline TreePath path_of(const CosetTree& t, Elem y, std::size_t n) {
  TreePath sigma;
  std::vector<Elem> chain(n + 1);
  chain[n] = y;
  for (std::size_t m = n; m-- > 0;)
    chain[m] = t.projection[m][chain[m + 1]];
  for (std::size_t m = 0; m != n; ++m) {
    const FiniteGroup& q = t.levels[m + 1].target;
    Elem prefix = q.identity();
    for (std::size_t j = 0; j != m; ++j)
      prefix = q.mul(prefix, evaluate(t.levels[m + 1], t.reps[j][sigma[j]]));
    const Elem g = q.mul(q.inv(prefix), chain[m + 1]);
    sigma.push_back(t.digit_of[m][g]);
  }
  return sigma;
}

// Child 0 appends 0^(k-1), child i > 0 appends 0^(k-1-i)1.
inline std::string encode_F(const std::vector<std::size_t>& branching, const TreePath& sigma) {
  if (sigma.size() > branching.size())
    fail("cantor.DepthInsufficient", "path longer than the branching list");
  std::string bits;
  for (std::size_t n = 0; n != sigma.size(); ++n) {
    const std::size_t k = branching[n], i = sigma[n];
    if (i >= k)
      fail("cantor.DigitOutOfRange", "digit " + std::to_string(i) + " at level " +
                                         std::to_string(n) + " with k=" + std::to_string(k));
    if (i == 0) {
      bits.append(k - 1, '0');
    } else {
      bits.append(k - 1 - i, '0');
      bits.push_back('1');
    }
  }
  return bits;
}

inline std::string encode_F(const CosetTree& t, const TreePath& sigma) {
  return encode_F(t.branching, sigma);
}

// ρ(Z, W)↾n: the coset of z·w^-1 in Q_n.
inline TreePath rho(const CosetTree& t, const TreePath& z, const TreePath& w, std::size_t n) {
  const Elem a = coset_element(t, z, n);
  const Elem b = coset_element(t, w, n);
  const FiniteGroup& q = t.levels[n].target;
  return path_of(t, q.mul(a, q.inv(b)), n);
}

// All level-n paths in lexicographic order.
inline std::vector<TreePath> level_paths(const CosetTree& t, std::size_t n) {
  std::vector<TreePath> out{TreePath{}};
  for (std::size_t m = 0; m != n; ++m) {
    std::vector<TreePath> next;
    for (const auto& p : out)
      for (std::size_t i = 0; i != t.branching[m]; ++i) {
        next.push_back(p);
        next.back().push_back(i);
      }
    out = std::move(next);
  }
  return out;
}

struct DifferenceReport {
  std::size_t points = 0;
  bool exhaustive = false;
  std::size_t checks = 0;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

inline constexpr std::size_t kExhaustiveTripleBound = 100;

// ρ(a,a) = 0, ρ(a,0) = a, and associativity of a·b := ρ(a, ρ(0, b)) on the
// level-n points. Exhaustive triples for small levels; up to the
// tabulation bound the product table is handed to the table validator
// (identity, inverses, Light's associativity test); beyond, `samples`
// random triples.
inline DifferenceReport verify_difference_axioms(const CosetTree& t, std::size_t n,
                                                 std::size_t samples, bool force_exhaustive = false) {
  DifferenceReport rep;
  const auto points = level_paths(t, n);
  const std::size_t m = points.size();
  rep.points = m;
  std::map<TreePath, Elem> index;
  for (std::size_t i = 0; i != m; ++i)
    index.emplace(points[i], Elem(i));
  auto bad = [&](const std::string& what) {
    if (rep.violations.size() < 16)
      rep.violations.push_back(what);
  };
  // Decoding must invert coding on every point; after that ρ can be read
  // through the cached correspondence.
  const FiniteGroup& q = t.levels[n].target;
  std::vector<Elem> elem(m);
  std::vector<Elem> point_of(q.order(), kNoElem);
  for (Elem a = 0; a != m; ++a) {
    elem[a] = coset_element(t, points[a], n);
    if (path_of(t, elem[a], n) != points[a])
      bad("decoding does not invert coding at point " + std::to_string(a));
    point_of[elem[a]] = a;
  }
  if (!rep.ok() || q.order() != m) {
    bad("level points and quotient elements are not in bijection");
    return rep;
  }
  const Elem e = index.at(TreePath(n, 0));
  auto r = [&](Elem a, Elem b) { return point_of[q.mul(elem[a], q.inv(elem[b]))]; };

  std::vector<Elem> neg(m), table;
  for (Elem a = 0; a != m; ++a) {
    if (r(a, a) != e)
      bad("rho(a,a) != 0 at point " + std::to_string(a));
    if (r(a, e) != a)
      bad("rho(a,0) != a at point " + std::to_string(a));
    neg[a] = r(e, a);
    rep.checks += 2;
  }
  auto prod = [&](Elem a, Elem b) { return r(a, neg[b]); };

  if (m <= kExhaustiveTripleBound || (force_exhaustive && m <= kMaxTabulatedOrder)) {
    rep.exhaustive = true;
    table.resize(m * m);
    for (Elem a = 0; a != m; ++a)
      for (Elem b = 0; b != m; ++b)
        table[std::size_t(a) * m + b] = prod(a, b);
    if (m <= kExhaustiveTripleBound) {
      for (Elem a = 0; a != m; ++a)
        for (Elem b = 0; b != m; ++b)
          for (Elem c = 0; c != m; ++c) {
            ++rep.checks;
            const Elem ab = table[std::size_t(a) * m + b];
            const Elem bc = table[std::size_t(b) * m + c];
            if (table[std::size_t(ab) * m + c] != table[std::size_t(a) * m + bc])
              bad("associativity fails at (" + std::to_string(a) + "," + std::to_string(b) +
                  "," + std::to_string(c) + ")");
          }
    } else {
      try {
        FiniteGroup::from_table(m, table, e);
        rep.checks += m * m;
      } catch (const Error& err) {
        bad(err.what());
      }
    }
    return rep;
  }
  std::mt19937_64 rng(0x5eed0000u + n);
  std::uniform_int_distribution<Elem> pick(0, Elem(m - 1));
  for (std::size_t s = 0; s != samples; ++s) {
    const Elem a = pick(rng), b = pick(rng), c = pick(rng);
    ++rep.checks;
    if (prod(prod(a, b), c) != prod(a, prod(b, c)))
      bad("associativity fails at sampled triple");
  }
  return rep;
}

// π permutes level-0 digits and fixes 0. As a homeomorphism g of Cantor
// space it acts on ρ by (g·ρ)(u, v) = g ρ(g^-1 u, g^-1 v).
inline TreePath act_homeomorphism(const CosetTree& t, const std::vector<std::size_t>& pi,
                                  const TreePath& z, const TreePath& w, std::size_t n) {
  if (t.depth == 0 || pi.size() != t.branching[0])
    fail("cantor.InvalidArgument", "permutation must act on the level-0 digits");
  std::vector<std::size_t> inv(pi.size(), std::size_t(-1));
  for (std::size_t i = 0; i != pi.size(); ++i) {
    if (pi[i] >= pi.size() || inv[pi[i]] != std::size_t(-1))
      fail("cantor.InvalidArgument", "not a permutation");
    inv[pi[i]] = i;
  }
  if (pi[0] != 0)
    fail("cantor.PermutationMovesZero", "the permutation must fix digit 0");
  auto apply = [&](const std::vector<std::size_t>& perm, TreePath p) {
    if (!p.empty())
      p[0] = perm[p[0]];
    return p;
  };
  return apply(pi, rho(t, apply(inv, z), apply(inv, w), n));
}

} // namespace profinite

#endif
