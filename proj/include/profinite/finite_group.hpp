// Explicit finite groups: dense multiplication tables, implicit direct
// products, subgroup and normal closures, quotients, homomorphism and
// isomorphism search.

#ifndef PROFINITE_FINITE_GROUP_HPP_
#define PROFINITE_FINITE_GROUP_HPP_

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"

namespace profinite {

using Elem = std::uint32_t;
inline constexpr Elem kNoElem = std::numeric_limits<Elem>::max();

// An immutable finite group in one of three forms:
//  - a dense table (`order`×`order`, row a holds a·b);
//  - a direct product of dense factors, elements being mixed-radix indices
//    with the first factor most significant;
//  - a Cayley graph: right multiplication by `rank` generators plus a
//    breadth-first spanning tree from the identity 0; a·b walks b's tree
//    path starting at a. Used for generated groups too large to tabulate.
// Copies share storage.
class FiniteGroup {
public:
  FiniteGroup() : FiniteGroup(from_table(1, {0}, 0)) {}

  static FiniteGroup from_table(std::size_t order, std::vector<Elem> table,
                                Elem identity);
  static FiniteGroup direct_product(const std::vector<FiniteGroup>& factors);
  // Trusted input from tabulate_generated.
  static FiniteGroup from_cayley(std::size_t rank, std::vector<Elem> right,
                                 std::vector<Elem> parent, std::vector<Elem> via);

  std::size_t order() const { return impl_->order; }
  Elem identity() const { return impl_->identity; }
  bool is_tabulated() const { return !impl_->table.empty(); }
  bool is_cayley() const { return !impl_->right.empty(); }
  const std::vector<Elem>& table() const { return impl_->table; }
  const std::vector<Elem>& cayley_right() const { return impl_->right; }
  const std::vector<FiniteGroup>& factors() const { return impl_->factors; }

  // Unchecked; see profinite::multiply for the range-checked form.
  Elem mul(Elem a, Elem b) const {
    const Impl& g = *impl_;
    if (!g.table.empty())
      return g.table[std::size_t(a) * g.order + b];
    if (!g.right.empty())
      return cayley_mul(g, a, b);
    Elem out = 0;
    for (std::size_t i = 0; i != g.factors.size(); ++i) {
      const std::size_t n = g.factors[i].order();
      const Elem ai = Elem((a / g.strides[i]) % n);
      const Elem bi = Elem((b / g.strides[i]) % n);
      out += Elem(g.factors[i].mul(ai, bi) * g.strides[i]);
    }
    return out;
  }
  Elem inv(Elem a) const { return impl_->inverse[a]; }

  // A generating set: greedy by element index for tables, the embedded
  // factor generators for products.
  const std::vector<Elem>& generators() const { return impl_->generators; }

  // Coordinate of `a` in factor i (products only).
  Elem component(Elem a, std::size_t i) const {
    return Elem((a / impl_->strides[i]) % impl_->factors[i].order());
  }
  Elem embed(std::span<const Elem> coords) const {
    Elem out = 0;
    for (std::size_t i = 0; i != coords.size(); ++i)
      out += Elem(coords[i] * impl_->strides[i]);
    return out;
  }

  friend bool operator==(const FiniteGroup& a, const FiniteGroup& b) {
    if (a.impl_ == b.impl_)
      return true;
    if (a.order() != b.order() || a.identity() != b.identity())
      return false;
    if (a.is_tabulated() != b.is_tabulated() || a.is_cayley() != b.is_cayley())
      return false;
    if (a.is_tabulated())
      return a.table() == b.table();
    if (a.is_cayley())
      return a.cayley_right() == b.cayley_right();
    return a.factors() == b.factors();
  }

private:
  struct Impl {
    std::size_t order = 1;
    Elem identity = 0;
    std::vector<Elem> table;
    std::vector<FiniteGroup> factors;
    std::vector<std::size_t> strides;
    std::vector<Elem> inverse;
    std::vector<Elem> generators;
    std::size_t rank = 0;
    std::vector<Elem> right, parent, via;
  };

  static Elem cayley_mul(const Impl& g, Elem a, Elem b) {
    Elem path[64];
    std::vector<Elem> long_path;
    std::size_t len = 0;
    for (Elem x = b; x != 0; x = g.parent[x]) {
      if (len < 64)
        path[len] = g.via[x];
      else
        long_path.push_back(g.via[x]);
      ++len;
    }
    Elem out = a;
    for (std::size_t i = len; i-- > 0;)
      out = g.right[std::size_t(out) * g.rank + (i < 64 ? path[i] : long_path[i - 64])];
    return out;
  }

  explicit FiniteGroup(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  std::shared_ptr<const Impl> impl_;
};

namespace impl {

inline std::vector<Elem> closure_list(const FiniteGroup& g, std::span<const Elem> gens,
                                      std::vector<char>& seen) {
  seen.assign(g.order(), 0);
  std::vector<Elem> out{g.identity()};
  seen[g.identity()] = 1;
  for (std::size_t i = 0; i != out.size(); ++i)
    for (Elem s : gens) {
      const Elem y = g.mul(out[i], s);
      if (!seen[y]) {
        seen[y] = 1;
        out.push_back(y);
      }
    }
  return out;
}

inline std::vector<Elem> greedy_generators(const FiniteGroup& g) {
  std::vector<Elem> gens;
  std::vector<char> seen;
  impl::closure_list(g, gens, seen);
  for (Elem x = 0; x != g.order(); ++x)
    if (!seen[x]) {
      gens.push_back(x);
      impl::closure_list(g, gens, seen);
    }
  return gens;
}

} // namespace impl

inline FiniteGroup FiniteGroup::from_table(std::size_t order, std::vector<Elem> table,
                                           Elem identity) {
  if (order == 0)
    fail("group.InvalidTable", "order must be positive");
  if (order > kMaxTabulatedOrder)
    fail("group.DeskScaleExceeded", "order " + std::to_string(order) +
                                        " exceeds the tabulation bound");
  if (table.size() != order * order)
    fail("group.InvalidTable", "table must have order^2 entries");
  if (identity >= order)
    fail("group.InvalidTable", "identity index out of range");
  for (Elem v : table)
    if (v >= order)
      fail("group.InvalidTable", "table entry out of range");
  auto at = [&](Elem a, Elem b) { return table[std::size_t(a) * order + b]; };
  for (Elem a = 0; a != order; ++a)
    if (at(identity, a) != a || at(a, identity) != a)
      fail("group.InvalidTable", "identity law fails at element " + std::to_string(a));

  auto impl = std::make_shared<Impl>();
  impl->order = order;
  impl->identity = identity;
  impl->inverse.assign(order, kNoElem);
  for (Elem a = 0; a != order; ++a) {
    for (Elem b = 0; b != order; ++b)
      if (at(a, b) == identity) {
        impl->inverse[a] = b;
        break;
      }
    const Elem b = impl->inverse[a];
    if (b == kNoElem || at(b, a) != identity)
      fail("group.InvalidTable", "element " + std::to_string(a) + " has no two-sided inverse");
  }
  impl->table = std::move(table);
  FiniteGroup g{std::shared_ptr<const Impl>(impl)};
  impl->generators = impl::greedy_generators(g);

  // Light's test: (x s) y = x (s y) for all x, y and s in a generating set
  // implies associativity of the whole table.
  const auto& t = impl->table;
  for (Elem s : impl->generators)
    for (Elem x = 0; x != order; ++x) {
      const Elem xs = t[std::size_t(x) * order + s];
      const Elem* row_xs = &t[std::size_t(xs) * order];
      const Elem* row_x = &t[std::size_t(x) * order];
      const Elem* row_s = &t[std::size_t(s) * order];
      for (Elem y = 0; y != order; ++y)
        if (row_xs[y] != row_x[row_s[y]])
          fail("group.InvalidTable", "associativity fails");
    }
  return g;
}

inline FiniteGroup FiniteGroup::direct_product(const std::vector<FiniteGroup>& factors) {
  std::vector<FiniteGroup> flat;
  for (const FiniteGroup& f : factors) {
    if (!f.factors().empty())
      flat.insert(flat.end(), f.factors().begin(), f.factors().end());
    else if (f.order() > 1)
      flat.push_back(f);
  }
  if (flat.empty())
    return FiniteGroup{};
  if (flat.size() == 1)
    return flat.front();

  auto impl = std::make_shared<Impl>();
  std::size_t order = 1;
  for (const FiniteGroup& f : flat) {
    if (order > kMaxProductOrder / f.order())
      fail("group.DeskScaleExceeded", "direct product exceeds the desk-scale bound");
    order *= f.order();
  }
  impl->order = order;
  impl->factors = flat;
  impl->strides.assign(flat.size(), 1);
  for (std::size_t i = flat.size() - 1; i-- > 0;)
    impl->strides[i] = impl->strides[i + 1] * flat[i + 1].order();
  std::vector<Elem> coords(flat.size());
  for (std::size_t i = 0; i != flat.size(); ++i)
    impl->identity += Elem(flat[i].identity() * impl->strides[i]);
  impl->inverse.resize(order);
  for (Elem a = 0; a != order; ++a) {
    Elem inv = 0;
    for (std::size_t i = 0; i != flat.size(); ++i) {
      const Elem ai = Elem((a / impl->strides[i]) % flat[i].order());
      inv += Elem(flat[i].inv(ai) * impl->strides[i]);
    }
    impl->inverse[a] = inv;
  }
  for (std::size_t i = 0; i != flat.size(); ++i)
    for (Elem s : flat[i].generators()) {
      Elem e = impl->identity - Elem(flat[i].identity() * impl->strides[i]);
      impl->generators.push_back(e + Elem(s * impl->strides[i]));
    }
  return FiniteGroup{std::shared_ptr<const Impl>(impl)};
}

inline FiniteGroup FiniteGroup::from_cayley(std::size_t rank, std::vector<Elem> right,
                                            std::vector<Elem> parent, std::vector<Elem> via) {
  auto impl = std::make_shared<Impl>();
  const std::size_t n = parent.size();
  impl->order = n;
  impl->identity = 0;
  impl->rank = rank;
  impl->right = std::move(right);
  impl->parent = std::move(parent);
  impl->via = std::move(via);
  for (std::size_t j = 0; j != rank; ++j) {
    const Elem s = impl->right[j];
    if (s != 0 && std::find(impl->generators.begin(), impl->generators.end(), s) ==
                      impl->generators.end())
      impl->generators.push_back(s);
  }
  // x = parent(x)·s_j, so x^-1 = s_j^-1 · parent(x)^-1.
  std::vector<Elem> gen_inverse(rank, 0);
  for (std::size_t j = 0; j != rank; ++j) {
    Elem y = 0;
    while (impl->right[std::size_t(y) * rank + j] != 0)
      y = impl->right[std::size_t(y) * rank + j];
    gen_inverse[j] = y;
  }
  impl->inverse.assign(n, 0);
  for (std::size_t x = 1; x != n; ++x)
    impl->inverse[x] =
        cayley_mul(*impl, gen_inverse[impl->via[x]], impl->inverse[impl->parent[x]]);
  return FiniteGroup{std::shared_ptr<const Impl>(impl)};
}

inline FiniteGroup trivial_group() { return FiniteGroup{}; }

inline FiniteGroup cyclic_group(std::size_t n) {
  std::vector<Elem> t(n * n);
  for (std::size_t a = 0; a != n; ++a)
    for (std::size_t b = 0; b != n; ++b)
      t[a * n + b] = Elem((a + b) % n);
  return FiniteGroup::from_table(n, std::move(t), 0);
}

inline void check_index(const FiniteGroup& g, Elem a) {
  if (a >= g.order())
    fail("group.IndexOutOfRange", "element " + std::to_string(a) + " not below order " +
                                      std::to_string(g.order()));
}

inline Elem multiply(const FiniteGroup& g, Elem a, Elem b) {
  check_index(g, a);
  check_index(g, b);
  return g.mul(a, b);
}

inline Elem power(const FiniteGroup& g, Elem a, long long e) {
  if (e < 0) {
    a = g.inv(a);
    e = -e;
  }
  Elem result = g.identity();
  while (e > 0) {
    if (e & 1)
      result = g.mul(result, a);
    a = g.mul(a, a);
    e >>= 1;
  }
  return result;
}

inline std::size_t element_order(const FiniteGroup& g, Elem a) {
  std::size_t k = 1;
  for (Elem x = a; x != g.identity(); x = g.mul(x, a))
    ++k;
  return k;
}

inline bool is_abelian(const FiniteGroup& g) {
  const auto& gens = g.generators();
  for (Elem a : gens)
    for (Elem b : gens)
      if (g.mul(a, b) != g.mul(b, a))
        return false;
  return true;
}

// Materializes any group as a dense table.
inline FiniteGroup tabulated(const FiniteGroup& g) {
  if (g.is_tabulated())
    return g;
  if (g.order() > kMaxTabulatedOrder)
    fail("group.DeskScaleExceeded", "order " + std::to_string(g.order()) +
                                        " exceeds the tabulation bound");
  const std::size_t n = g.order();
  std::vector<Elem> t(n * n);
  for (Elem a = 0; a != n; ++a)
    for (Elem b = 0; b != n; ++b)
      t[std::size_t(a) * n + b] = g.mul(a, b);
  return FiniteGroup::from_table(n, std::move(t), g.identity());
}

struct GeneratedSubgroup {
  FiniteGroup parent;
  std::vector<Elem> members; // sorted
  std::vector<Elem> generators;

  std::size_t size() const { return members.size(); }
  bool contains(Elem a) const {
    return std::binary_search(members.begin(), members.end(), a);
  }
};

inline GeneratedSubgroup subgroup_closure(const FiniteGroup& g, std::vector<Elem> gens) {
  for (Elem a : gens)
    check_index(g, a);
  std::vector<char> seen;
  std::vector<Elem> members = impl::closure_list(g, gens, seen);
  std::sort(members.begin(), members.end());
  return {g, std::move(members), std::move(gens)};
}

inline GeneratedSubgroup normal_closure(const FiniteGroup& g, std::vector<Elem> gens) {
  for (Elem a : gens)
    check_index(g, a);
  std::vector<char> seen;
  impl::closure_list(g, gens, seen);
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (Elem t : g.generators()) {
      const Elem c = g.mul(g.inv(t), g.mul(gens[i], t));
      if (!seen[c]) {
        gens.push_back(c);
        impl::closure_list(g, gens, seen);
      }
    }
  std::vector<Elem> members;
  for (Elem a = 0; a != g.order(); ++a)
    if (seen[a])
      members.push_back(a);
  return {g, std::move(members), std::move(gens)};
}

inline bool is_normal(const FiniteGroup& g, const GeneratedSubgroup& h) {
  for (Elem n : h.generators)
    for (Elem t : g.generators())
      if (!h.contains(g.mul(g.inv(t), g.mul(n, t))))
        return false;
  return true;
}

struct Quotient {
  FiniteGroup group;
  std::vector<Elem> projection; // element of the parent -> coset index
  std::vector<Elem> representatives; // least element of each coset
};

// Cosets are numbered by their least element, so coset i is represented
// by the i-th smallest coset minimum.
inline Quotient quotient(const FiniteGroup& g, const GeneratedSubgroup& n) {
  if (!is_normal(g, n))
    fail("group.NotNormal", "subgroup is not normal");
  const std::size_t order = g.order();
  Quotient q;
  q.projection.assign(order, kNoElem);
  for (Elem x = 0; x != order; ++x) {
    if (q.projection[x] != kNoElem)
      continue;
    const Elem id = Elem(q.representatives.size());
    q.representatives.push_back(x);
    for (Elem m : n.members)
      q.projection[g.mul(x, m)] = id;
  }
  const std::size_t k = q.representatives.size();
  std::vector<Elem> table(k * k);
  for (Elem a = 0; a != k; ++a)
    for (Elem b = 0; b != k; ++b)
      table[std::size_t(a) * k + b] =
          q.projection[g.mul(q.representatives[a], q.representatives[b])];
  q.group = FiniteGroup::from_table(k, std::move(table), q.projection[g.identity()]);
  return q;
}

// Extends gens[i] -> images[i] to a homomorphism on the subgroup the gens
// generate. Returns a map with kNoElem outside that subgroup, or nothing
// if the assignment violates a relation.
inline std::optional<std::vector<Elem>> extend_homomorphism(const FiniteGroup& src,
                                                            std::span<const Elem> gens,
                                                            const FiniteGroup& dst,
                                                            std::span<const Elem> images) {
  if (gens.size() != images.size())
    fail("group.InvalidArgument", "generator and image counts differ");
  std::vector<Elem> map(src.order(), kNoElem);
  std::vector<Elem> queue{src.identity()};
  map[src.identity()] = dst.identity();
  for (std::size_t i = 0; i != queue.size(); ++i) {
    const Elem x = queue[i];
    for (std::size_t j = 0; j != gens.size(); ++j) {
      const Elem y = src.mul(x, gens[j]);
      const Elem img = dst.mul(map[x], images[j]);
      if (map[y] == kNoElem) {
        map[y] = img;
        queue.push_back(y);
      } else if (map[y] != img) {
        return std::nullopt;
      }
    }
  }
  return map;
}

// The homomorphism src -> dst determined by gens -> images, if one exists.
// gens must generate src.
inline std::optional<std::vector<Elem>> find_homomorphism(const FiniteGroup& src,
                                                          std::span<const Elem> gens,
                                                          const FiniteGroup& dst,
                                                          std::span<const Elem> images) {
  for (Elem a : gens)
    check_index(src, a);
  for (Elem a : images)
    check_index(dst, a);
  auto map = extend_homomorphism(src, gens, dst, images);
  if (map && std::find(map->begin(), map->end(), kNoElem) != map->end())
    fail("group.InvalidArgument", "source generators do not generate the group");
  return map;
}

inline std::vector<Elem> conjugacy_class_representatives(const FiniteGroup& g) {
  std::vector<char> seen(g.order(), 0);
  std::vector<Elem> reps;
  for (Elem x = 0; x != g.order(); ++x) {
    if (seen[x])
      continue;
    reps.push_back(x);
    std::vector<Elem> orbit{x};
    seen[x] = 1;
    for (std::size_t i = 0; i != orbit.size(); ++i)
      for (Elem t : g.generators()) {
        const Elem c = g.mul(g.inv(t), g.mul(orbit[i], t));
        if (!seen[c]) {
          seen[c] = 1;
          orbit.push_back(c);
        }
      }
  }
  return reps;
}

// A short generating set: one element if cyclic, otherwise the first of a
// deterministic pseudo-random sample of pairs and triples that generates,
// falling back to the greedy set.
inline std::vector<Elem> small_generating_set(const FiniteGroup& g) {
  if (g.order() == 1)
    return {};
  std::vector<char> seen;
  for (Elem x = 0; x != g.order(); ++x)
    if (element_order(g, x) == g.order())
      return {x};
  std::mt19937 rng(20240611u);
  std::uniform_int_distribution<Elem> pick(0, Elem(g.order() - 1));
  for (std::size_t k = 2; k <= 3; ++k)
    for (int attempt = 0; attempt != 64; ++attempt) {
      std::vector<Elem> gens(k);
      for (Elem& s : gens)
        s = pick(rng);
      if (impl::closure_list(g, gens, seen).size() == g.order())
        return gens;
    }
  return g.generators();
}

namespace impl {

enum class SearchMode { Homomorphism, Epimorphism, Isomorphism };

inline std::vector<std::size_t> all_element_orders(const FiniteGroup& g) {
  std::vector<std::size_t> out(g.order());
  for (Elem x = 0; x != g.order(); ++x)
    out[x] = element_order(g, x);
  return out;
}

// Backtracking over generator images. The first image ranges over
// conjugacy-class representatives only (composing with an inner
// automorphism preserves every mode); each prefix of images is checked for
// consistency on the subgroup it generates.
inline std::optional<std::vector<Elem>> search_maps(const FiniteGroup& src,
                                                    const FiniteGroup& dst, SearchMode mode) {
  const std::vector<Elem> gens = small_generating_set(src);
  const auto src_orders = all_element_orders(src);
  const auto dst_orders = all_element_orders(dst);
  std::vector<char> is_rep(dst.order(), 0);
  for (Elem r : conjugacy_class_representatives(dst))
    is_rep[r] = 1;

  std::vector<std::vector<Elem>> candidates(gens.size());
  for (std::size_t j = 0; j != gens.size(); ++j) {
    const std::size_t o = src_orders[gens[j]];
    for (Elem y = 0; y != dst.order(); ++y) {
      const bool ok = mode == SearchMode::Isomorphism ? dst_orders[y] == o
                                                      : o % dst_orders[y] == 0;
      if (ok && (j != 0 || is_rep[y]))
        candidates[j].push_back(y);
    }
  }

  std::vector<Elem> images(gens.size());
  std::vector<char> hit;
  std::optional<std::vector<Elem>> found;
  std::function<bool(std::size_t)> go = [&](std::size_t j) -> bool {
    if (j == gens.size()) {
      auto map = extend_homomorphism(src, gens, dst, images);
      if (!map)
        return false;
      if (mode != SearchMode::Homomorphism) {
        std::vector<char> seen;
        if (impl::closure_list(dst, images, seen).size() != dst.order())
          return false;
      }
      found = std::move(map);
      return true;
    }
    for (Elem y : candidates[j]) {
      images[j] = y;
      auto prefix = std::span<const Elem>(gens).first(j + 1);
      auto partial = extend_homomorphism(src, prefix, dst, std::span<const Elem>(images).first(j + 1));
      if (!partial)
        continue;
      if (mode == SearchMode::Isomorphism) {
        hit.assign(dst.order(), 0);
        bool injective = true;
        for (Elem v : *partial)
          if (v != kNoElem) {
            if (hit[v]) {
              injective = false;
              break;
            }
            hit[v] = 1;
          }
        if (!injective)
          continue;
      }
      if (go(j + 1))
        return true;
    }
    return false;
  };
  go(0);
  return found;
}

} // namespace impl

inline std::optional<std::vector<Elem>> find_epimorphism(const FiniteGroup& src,
                                                         const FiniteGroup& dst) {
  if (src.order() % dst.order() != 0)
    return std::nullopt;
  return impl::search_maps(src, dst, impl::SearchMode::Epimorphism);
}

inline bool is_isomorphic(const FiniteGroup& a, const FiniteGroup& b) {
  if (a.order() != b.order())
    return false;
  if (a == b)
    return true;
  if (is_abelian(a) != is_abelian(b))
    return false;
  auto histogram = [](const FiniteGroup& g) {
    std::map<std::size_t, std::size_t> h;
    for (std::size_t o : impl::all_element_orders(g))
      ++h[o];
    return h;
  };
  if (histogram(a) != histogram(b))
    return false;
  return impl::search_maps(a, b, impl::SearchMode::Isomorphism).has_value();
}

// Every normal subgroup, ordered by size then members.
inline std::vector<GeneratedSubgroup> normal_subgroups(const FiniteGroup& g) {
  std::vector<GeneratedSubgroup> found;
  auto known = [&](const GeneratedSubgroup& h) {
    for (const auto& f : found)
      if (f.members == h.members)
        return true;
    return false;
  };
  std::vector<GeneratedSubgroup> minimal;
  for (Elem r : conjugacy_class_representatives(g)) {
    auto h = normal_closure(g, {r});
    if (!known(h)) {
      found.push_back(h);
      minimal.push_back(std::move(h));
    }
  }
  for (std::size_t i = 0; i < found.size(); ++i)
    for (const auto& m : minimal) {
      std::vector<Elem> gens = found[i].generators;
      gens.insert(gens.end(), m.generators.begin(), m.generators.end());
      auto h = normal_closure(g, gens);
      if (!known(h))
        found.push_back(std::move(h));
    }
  std::sort(found.begin(), found.end(), [](const auto& x, const auto& y) {
    return x.size() != y.size() ? x.size() < y.size() : x.members < y.members;
  });
  return found;
}

} // namespace profinite

#endif
