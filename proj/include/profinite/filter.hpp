// Closed normal subgroups of the free profinite group, given as filters on
// the lattice generated by descending chains of lattice elements.

#ifndef PROFINITE_FILTER_HPP_
#define PROFINITE_FILTER_HPP_

#include <algorithm>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "finite_group.hpp"
#include "lattice.hpp"
#include "word.hpp"

namespace profinite {

// chain(0) >= chain(1) >= ... Three kinds:
//  - constant: every level is the same element (a principal filter);
//  - rule: levels produced on demand by a deterministic function and
//    memoized, optionally only below some level bound;
//  - truncated: a finite list, e.g. read from a file.
class FilterChain {
public:
  using Rule = std::function<LatticeElement(std::size_t)>;

  static FilterChain constant(LatticeElement l) {
    auto s = std::make_shared<State>();
    s->constant = true;
    s->levels.push_back(std::move(l));
    return FilterChain(std::move(s));
  }

  static FilterChain from_rule(Rule rule, std::optional<std::size_t> bound = std::nullopt) {
    auto s = std::make_shared<State>();
    s->rule = std::move(rule);
    s->bound = bound;
    return FilterChain(std::move(s));
  }

  // Fails with NotDescending unless chain(i+1) <= chain(i) throughout.
  static FilterChain truncated(std::vector<LatticeElement> levels) {
    for (std::size_t i = 1; i < levels.size(); ++i)
      if (!leq(levels[i], levels[i - 1]))
        fail("filter.NotDescending",
             "level " + std::to_string(i) + " is not below level " + std::to_string(i - 1));
    auto s = std::make_shared<State>();
    s->bound = levels.size();
    s->levels = std::move(levels);
    return FilterChain(std::move(s));
  }

  bool is_constant() const { return state_->constant; }
  bool is_truncated() const { return !state_->constant && !state_->rule; }

  // Number of levels that exist, if finite.
  std::optional<std::size_t> bound() const { return state_->bound; }

  bool has_level(std::size_t i) const { return !state_->bound || i < *state_->bound; }

  LatticeElement at(std::size_t i) const {
    State& s = *state_;
    std::lock_guard<std::mutex> lock(s.mu);
    if (s.constant)
      return s.levels.front();
    if (s.bound && i >= *s.bound)
      fail("filter.DepthInsufficient", "level " + std::to_string(i) + " not available (chain has " +
                                           std::to_string(*s.bound) + " levels)");
    while (s.levels.size() <= i)
      s.levels.push_back(s.rule(s.levels.size()));
    return s.levels[i];
  }

private:
  struct State {
    std::mutex mu;
    bool constant = false;
    std::optional<std::size_t> bound;
    Rule rule;
    std::vector<LatticeElement> levels;
  };

  explicit FilterChain(std::shared_ptr<State> s) : state_(std::move(s)) {}

  std::shared_ptr<State> state_;
};

// x0 -> 1 in Z/q^i at level i; other generators trivial.
inline FilterChain cyclic_power_chain(std::size_t q) {
  if (q < 2)
    fail("filter.InvalidArgument", "modulus must be at least 2");
  std::size_t levels = 1;
  for (std::size_t m = q; m <= kMaxTabulatedOrder; m *= q)
    ++levels;
  return FilterChain::from_rule(
      [q](std::size_t i) {
        std::size_t m = 1;
        for (std::size_t j = 0; j != i; ++j)
          m *= q;
        if (m == 1)
          return top_element();
        return canonicalize(cyclic_group(m), {1});
      },
      levels);
}

enum class Membership { Yes, NoAtDepth, Unknown };

inline std::string render(Membership m) {
  switch (m) {
  case Membership::Yes:
    return "yes";
  case Membership::NoAtDepth:
    return "no-at-depth";
  case Membership::Unknown:
    break;
  }
  return "unknown";
}

// Yes once some chain(i), i <= depth, lies below L. Unknown when the chain
// ends before `depth`.
inline Membership contains(const FilterChain& r, const LatticeElement& l, std::size_t depth) {
  if (r.is_constant())
    return leq(r.at(0), l) ? Membership::Yes : Membership::NoAtDepth;
  for (std::size_t i = 0; i <= depth; ++i) {
    if (!r.has_level(i))
      return Membership::Unknown;
    if (leq(r.at(i), l))
      return Membership::Yes;
  }
  return Membership::NoAtDepth;
}

inline FiniteGroup quotient_at(const FilterChain& r, std::size_t i) { return r.at(i).target; }

// Levels floor(depth/2) through depth all carry the same kernel.
inline bool is_principal_up_to(const FilterChain& r, std::size_t depth) {
  if (r.is_constant())
    return true;
  const LatticeElement first = r.at(depth / 2);
  for (std::size_t i = depth / 2 + 1; i <= depth; ++i)
    if (!(r.at(i) == first))
      return false;
  return true;
}

// Reinterprets an r-generator chain over k >= r generators; x_r..x_{k-1}
// already map to the identity, so each level is unchanged.
inline FilterChain extend_generators(const FilterChain& chain, std::size_t r, std::size_t k) {
  if (k < r)
    fail("filter.InvalidArgument", "cannot extend to fewer generators");
  auto check = [r](const LatticeElement& l, std::size_t i) {
    if (l.support > r)
      fail("filter.SupportTooLarge", "level " + std::to_string(i) + " has support " +
                                         std::to_string(l.support) + " > " + std::to_string(r));
    return l;
  };
  if (chain.is_constant())
    return FilterChain::constant(check(chain.at(0), 0));
  if (chain.is_truncated()) {
    std::vector<LatticeElement> levels;
    for (std::size_t i = 0; i != *chain.bound(); ++i)
      levels.push_back(check(chain.at(i), i));
    return FilterChain::truncated(std::move(levels));
  }
  return FilterChain::from_rule([chain, check](std::size_t i) { return check(chain.at(i), i); },
                                chain.bound());
}

// w lies in every chain(i), i <= depth.
inline bool theta_meet(const FilterChain& r, const Word& w, std::size_t depth) {
  const std::size_t top = r.is_constant() ? 0 : depth;
  for (std::size_t i = 0; i <= top; ++i) {
    const LatticeElement l = r.at(i);
    if (evaluate(l, w) != l.target.identity())
      return false;
  }
  return true;
}

namespace impl {

// R·N read at the deepest level d available (at most max_depth). A
// truncated chain generates the filter of its last level, so that level is
// final. Otherwise chain(d-1)·N = chain(d)·N is required as evidence that
// the joins have settled.
inline std::pair<LatticeElement, std::size_t> stable_join(const FilterChain& r,
                                                          const LatticeElement& nbhd,
                                                          std::size_t max_depth) {
  if (r.is_constant())
    return {join(r.at(0), nbhd), 0};
  std::size_t d = max_depth;
  if (r.bound()) {
    if (*r.bound() == 0)
      fail("filter.DepthInsufficient", "empty chain");
    d = std::min(d, *r.bound() - 1);
  }
  LatticeElement last = join(r.at(d), nbhd);
  if (r.is_truncated() || d == 0)
    return {last, d};
  if (!(join(r.at(d - 1), nbhd) == last))
    fail("filter.DepthInsufficient", "joins with the level-neighbourhood still change at depth " +
                                         std::to_string(d));
  return {last, d};
}

} // namespace impl

inline constexpr std::size_t kDefaultHausdorffDepth = 24;

// delta_H(R, S) <= 2^-n, decided as R·N = S·N for N = neighbourhood(n).
inline bool hausdorff_level(const FilterChain& r, const FilterChain& s, std::size_t n,
                            std::size_t max_depth = kDefaultHausdorffDepth) {
  const LatticeElement nbhd = neighbourhood(n);
  return impl::stable_join(r, nbhd, max_depth).first ==
         impl::stable_join(s, nbhd, max_depth).first;
}

// Three equivalent conditions for Hausdorff distance at most 2^-n, each
// computed independently:
//  - images: R and S have the same image in F/N;
//  - joins: R·N = S·N;
//  - above: R <= L iff S <= L for every L >= N (all of them, via the
//    normal subgroups of N's target), and for each sampled L >= N.
struct HausdorffWitness {
  bool images = false;
  bool joins = false;
  bool above = false;
  std::size_t lattice_above = 0; // elements L >= N examined
};

namespace impl {

inline std::vector<Elem> image_in(const LatticeElement& chain_level, const LatticeElement& nbhd) {
  std::vector<Elem> out;
  for (const auto& [x, y] : paired_image(nbhd, chain_level))
    if (y == chain_level.target.identity())
      out.push_back(x);
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace impl

inline HausdorffWitness hausdorff_witness(const FilterChain& r, const FilterChain& s,
                                          std::size_t n,
                                          const std::vector<LatticeElement>& sample,
                                          std::size_t max_depth = kDefaultHausdorffDepth) {
  const LatticeElement nbhd = neighbourhood(n);
  const auto [jr, dr] = impl::stable_join(r, nbhd, max_depth);
  const auto [js, ds] = impl::stable_join(s, nbhd, max_depth);
  HausdorffWitness w;
  w.joins = jr == js;
  w.images = impl::image_in(r.at(dr), nbhd) == impl::image_in(s.at(ds), nbhd);

  std::vector<LatticeElement> above;
  for (const auto& k : normal_subgroups(nbhd.target)) {
    const Quotient q = quotient(nbhd.target, k);
    std::vector<Elem> images(nbhd.support);
    for (std::size_t i = 0; i != nbhd.support; ++i)
      images[i] = q.projection[nbhd.images[i]];
    above.push_back(canonicalize(q.group, std::move(images)));
  }
  for (const auto& l : sample)
    if (leq(nbhd, l))
      above.push_back(l);
  w.above = true;
  for (const auto& l : above)
    if ((contains(r, l, dr) == Membership::Yes) != (contains(s, l, ds) == Membership::Yes))
      w.above = false;
  w.lattice_above = above.size();
  return w;
}

} // namespace profinite

#endif
