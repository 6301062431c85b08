// The lattice of open normal subgroups of the free profinite group on
// x0, x1, ... that contain almost every generator. An element is the kernel
// of an epimorphism onto a finite group, stored in a canonical form so that
// equal kernels are structurally equal.

#ifndef PROFINITE_LATTICE_HPP_
#define PROFINITE_LATTICE_HPP_

#include <algorithm>
#include <cstdint>
#include <mutex>
#include <numeric>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "error.hpp"
#include "finite_group.hpp"
#include "tabulate.hpp"
#include "word.hpp"

namespace profinite {

// x_i -> images[i] for i < support, x_i -> 1 beyond. Canonical form: the
// last image is not the identity, and the target is numbered breadth-first
// from the images (see tabulate_generated), which depends only on the
// kernel.
struct LatticeElement {
  std::size_t support = 0;
  FiniteGroup target;
  std::vector<Elem> images;

  Elem image(std::size_t i) const { return i < support ? images[i] : target.identity(); }

  friend bool operator==(const LatticeElement& a, const LatticeElement& b) {
    return a.support == b.support && a.images == b.images && a.target == b.target;
  }
};

// Canonical element for the epimorphism x_i -> gens[i] onto <gens>, for
// generators living in any group with the given multiplication.
template <class T, class Mul, class Hash = std::hash<T>>
LatticeElement lattice_element_from(const T& identity, std::vector<T> gens, Mul mul) {
  while (!gens.empty() && gens.back() == identity)
    gens.pop_back();
  auto tab = tabulate_generated<T, Mul, Hash>(identity, gens, mul);
  return {gens.size(), std::move(tab.group), std::move(tab.generator_index)};
}

inline LatticeElement canonicalize(const FiniteGroup& target, std::vector<Elem> images) {
  for (Elem a : images)
    check_index(target, a);
  std::vector<char> seen;
  if (impl::closure_list(target, images, seen).size() != target.order())
    fail("lattice.NotSurjective", "images do not generate the target");
  return lattice_element_from(target.identity(), std::move(images),
                              [&](Elem a, Elem b) { return target.mul(a, b); });
}

inline LatticeElement top_element() { return {}; }

inline Elem evaluate(const LatticeElement& l, const Word& w) {
  Elem out = l.target.identity();
  for (const Syllable& s : w.syllables())
    out = l.target.mul(out, power(l.target, l.image(s.gen), s.exp));
  return out;
}

namespace impl {

inline std::vector<Elem> padded_images(const LatticeElement& l, std::size_t m) {
  std::vector<Elem> out(m);
  for (std::size_t i = 0; i != m; ++i)
    out[i] = l.image(i);
  return out;
}

// All pairs (phi_L(w), phi_M(w)) for words w, as first/second coordinates.
inline std::vector<std::pair<Elem, Elem>> paired_image(const LatticeElement& l,
                                                       const LatticeElement& m) {
  const std::size_t k = std::max(l.support, m.support);
  const auto a = padded_images(l, k);
  const auto b = padded_images(m, k);
  const std::size_t n2 = m.target.order();
  std::vector<char> seen(l.target.order() * n2, 0);
  std::vector<std::pair<Elem, Elem>> out{{l.target.identity(), m.target.identity()}};
  seen[std::size_t(out[0].first) * n2 + out[0].second] = 1;
  for (std::size_t i = 0; i != out.size(); ++i)
    for (std::size_t j = 0; j != k; ++j) {
      const Elem x = l.target.mul(out[i].first, a[j]);
      const Elem y = m.target.mul(out[i].second, b[j]);
      char& s = seen[std::size_t(x) * n2 + y];
      if (!s) {
        s = 1;
        out.emplace_back(x, y);
      }
    }
  return out;
}

} // namespace impl

// ker L ⊆ ker M, i.e. M factors through L.
inline bool leq(const LatticeElement& l, const LatticeElement& m) {
  const std::size_t k = std::max(l.support, m.support);
  const auto src = impl::padded_images(l, k);
  const auto dst = impl::padded_images(m, k);
  return extend_homomorphism(l.target, src, m.target, dst).has_value();
}

inline bool equivalent(const LatticeElement& l, const LatticeElement& m) {
  return leq(l, m) && leq(m, l);
}

inline LatticeElement meet(const LatticeElement& l, const LatticeElement& m) {
  const std::size_t k = std::max(l.support, m.support);
  const auto a = impl::padded_images(l, k);
  const auto b = impl::padded_images(m, k);
  const std::uint64_t n2 = m.target.order();
  std::vector<std::uint64_t> gens(k);
  for (std::size_t j = 0; j != k; ++j)
    gens[j] = a[j] * n2 + b[j];
  auto mul = [&](std::uint64_t x, std::uint64_t y) {
    return std::uint64_t(l.target.mul(Elem(x / n2), Elem(y / n2))) * n2 +
           m.target.mul(Elem(x % n2), Elem(y % n2));
  };
  const std::uint64_t identity = std::uint64_t(l.target.identity()) * n2 + m.target.identity();
  return lattice_element_from(identity, std::move(gens), mul);
}

// ker L · ker M. The image of ker M in L's target is the set of first
// coordinates paired with the identity; factor it out.
inline LatticeElement join(const LatticeElement& l, const LatticeElement& m) {
  std::vector<Elem> kernel_image;
  for (const auto& [x, y] : impl::paired_image(l, m))
    if (y == m.target.identity() && x != l.target.identity())
      kernel_image.push_back(x);
  const auto n = normal_closure(l.target, std::move(kernel_image));
  const Quotient q = quotient(l.target, n);
  std::vector<Elem> images(l.support);
  for (std::size_t i = 0; i != l.support; ++i)
    images[i] = q.projection[l.images[i]];
  return canonicalize(q.group, std::move(images));
}

inline std::uint64_t fingerprint(const LatticeElement& l) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  mix(l.support);
  mix(l.target.order());
  for (Elem e : l.images)
    mix(e);
  for (Elem e : l.target.table())
    mix(e);
  for (Elem e : l.target.cayley_right())
    mix(e);
  return h;
}

// Enumeration without repetition of the lattice, plus the descending base
// of neighbourhoods built from it.
//
// Candidates are tuples of permutations: the tuple (p_0..p_{m-1}) of degree d
// stands for x_i -> p_i onto the group they generate. Every finite m-generated
// group occurs this way (regular representation). Stage s covers all (d, m)
// with max(d, m) = s, taken by increasing d, then m, then tuple in
// lexicographic order of permutations; candidates with an already listed
// kernel are skipped. Stage 1 yields the top element.
class LatticeEnumeration {
public:
  static LatticeEnumeration& instance() {
    static LatticeEnumeration e;
    return e;
  }

  LatticeElement at(std::size_t i) {
    std::lock_guard<std::mutex> lock(mu_);
    while (list_.size() <= i)
      advance();
    return list_[i];
  }

  // Index of the first occurrence of l's kernel, searching up to `limit`.
  std::optional<std::size_t> find(const LatticeElement& l, std::size_t limit) {
    for (std::size_t i = 0; i < limit; ++i)
      if (at(i) == l)
        return i;
    return std::nullopt;
  }

  // B(n): meet of enumerate(0..r(n)), r(n) least beyond r(n-1) giving a
  // strictly smaller kernel.
  LatticeElement base(std::size_t n) {
    while (true) {
      {
        std::lock_guard<std::mutex> lock(mu_);
        if (bases_.size() > n)
          return bases_[n];
      }
      extend_base();
    }
  }
  std::size_t base_index(std::size_t n) {
    base(n);
    std::lock_guard<std::mutex> lock(mu_);
    return base_index_[n];
  }

private:
  static constexpr std::size_t kMaxDegree = 16;

  LatticeEnumeration() { start_stage(1); }

  void extend_base() {
    LatticeElement prev;
    std::size_t i = 1;
    {
      std::lock_guard<std::mutex> lock(mu_);
      if (!bases_.empty()) {
        prev = bases_.back();
        i = base_index_.back() + 1;
      }
    }
    for (;; ++i) {
      LatticeElement next = meet(prev, at(i));
      if (!(next == prev)) {
        std::lock_guard<std::mutex> lock(mu_);
        bases_.push_back(std::move(next));
        base_index_.push_back(i);
        return;
      }
    }
  }

  using Perm = std::uint64_t; // 4 bits per point

  static Perm encode(const std::vector<std::uint8_t>& p) {
    Perm out = 0;
    for (std::size_t i = 0; i != p.size(); ++i)
      out |= Perm(p[i]) << (4 * i);
    return out;
  }

  const std::vector<Perm>& perms_of_degree(std::size_t d) {
    if (d > kMaxDegree)
      fail("lattice.DeskScaleExceeded", "enumeration beyond permutation degree 16");
    if (perms_.size() <= d)
      perms_.resize(d + 1);
    if (perms_[d].empty()) {
      std::vector<std::uint8_t> p(d);
      std::iota(p.begin(), p.end(), std::uint8_t(0));
      do
        perms_[d].push_back(encode(p));
      while (std::next_permutation(p.begin(), p.end()));
    }
    return perms_[d];
  }

  void start_stage(std::size_t s) {
    stage_ = s;
    pairs_.clear();
    for (std::size_t d = 1; d <= s; ++d)
      for (std::size_t m = 0; m <= s; ++m)
        if (std::max(d, m) == s)
          pairs_.emplace_back(d, m);
    pair_ = 0;
    tuple_.assign(pairs_[0].second, 0);
    fresh_pair_ = true;
  }

  // Moves to the next tuple; false when the current (d, m) is exhausted.
  bool next_tuple() {
    const std::size_t count = perms_of_degree(pairs_[pair_].first).size();
    for (std::size_t j = tuple_.size(); j-- > 0;) {
      if (++tuple_[j] < count)
        return true;
      tuple_[j] = 0;
    }
    return false;
  }

  void advance() {
    const std::size_t before = list_.size();
    while (list_.size() == before) {
      if (!fresh_pair_ && !next_tuple()) {
        if (++pair_ == pairs_.size()) {
          start_stage(stage_ + 1);
        } else {
          tuple_.assign(pairs_[pair_].second, 0);
          fresh_pair_ = true;
        }
        continue;
      }
      fresh_pair_ = false;
      consider();
    }
  }

  void consider() {
    const auto [d, m] = pairs_[pair_];
    if (m > 0 && tuple_.back() == 0)
      return; // trailing identity: listed at a smaller support
    const auto& perms = perms_of_degree(d);
    std::vector<Perm> gens(m);
    for (std::size_t j = 0; j != m; ++j)
      gens[j] = perms[tuple_[j]];
    auto compose = [d](Perm a, Perm b) {
      Perm out = 0;
      for (std::size_t i = 0; i != d; ++i) {
        const Perm ai = (a >> (4 * i)) & 0xF;
        out |= ((b >> (4 * ai)) & 0xF) << (4 * i);
      }
      return out;
    };
    LatticeElement l = lattice_element_from(perms[0], std::move(gens), compose);
    auto& bucket = seen_[fingerprint(l)];
    for (std::size_t idx : bucket)
      if (list_[idx] == l)
        return;
    bucket.push_back(list_.size());
    list_.push_back(std::move(l));
  }

  std::mutex mu_;
  std::vector<LatticeElement> list_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> seen_;
  std::vector<std::vector<Perm>> perms_;
  std::size_t stage_ = 0;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
  std::size_t pair_ = 0;
  std::vector<std::size_t> tuple_;
  bool fresh_pair_ = true;

  std::vector<LatticeElement> bases_;
  std::vector<std::size_t> base_index_;
};

inline LatticeElement enumerate(std::size_t i) { return LatticeEnumeration::instance().at(i); }

inline LatticeElement base_element(std::size_t n) {
  return LatticeEnumeration::instance().base(n);
}

// The neighbourhood of 1 used by the metric at level n: the top element at
// level 0, base_element(n - 1) above.
inline LatticeElement neighbourhood(std::size_t n) {
  return n == 0 ? top_element() : base_element(n - 1);
}

// A dyadic distance 2^-exponent, exactly zero, or only bounded above.
struct Dyadic {
  enum class Kind { Exact, Zero, AtMost } kind = Kind::Zero;
  std::size_t exponent = 0;

  friend bool operator==(const Dyadic&, const Dyadic&) = default;
};

inline std::string render(const Dyadic& d) {
  switch (d.kind) {
  case Dyadic::Kind::Zero:
    return "0";
  case Dyadic::Kind::Exact:
    return "1/2^" + std::to_string(d.exponent);
  case Dyadic::Kind::AtMost:
    break;
  }
  return "<=1/2^" + std::to_string(d.exponent);
}

// inf{2^-n : g h^-1 in neighbourhood(n)}, searched up to n = precision.
inline Dyadic delta(const Word& g, const Word& h, std::size_t precision) {
  const Word w = g * h.inverse();
  if (w.empty())
    return {Dyadic::Kind::Zero, 0};
  for (std::size_t n = 1; n <= precision; ++n)
    if (evaluate(neighbourhood(n), w) != neighbourhood(n).target.identity())
      return {Dyadic::Kind::Exact, n - 1};
  return {Dyadic::Kind::AtMost, precision};
}

} // namespace profinite

#endif
