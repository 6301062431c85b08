// Mekler's groups G(A): the free nil-2 exponent-p group on vertices of a
// graph A, modulo [x_r, x_s] = 1 for every edge. Elements are kept in the
// normal form c·v, v = x_0^a0 ... x_{n-1}^a(n-1), c a product of the
// central x_{r,s} = [x_r, x_s] over non-edges r < s.

#ifndef PROFINITE_MEKLER_HPP_
#define PROFINITE_MEKLER_HPP_

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "filter.hpp"
#include "fp_linear.hpp"
#include "lattice.hpp"

namespace profinite {

class Graph {
public:
  Graph() = default;
  explicit Graph(std::size_t n) : n_(n), adj_(n * n, 0) {}

  static Graph cycle(std::size_t n) {
    Graph g(n);
    for (std::size_t i = 0; i != n; ++i)
      g.add_edge(i, (i + 1) % n);
    return g;
  }

  // Outer 5-cycle 0..4, spokes i -- i+5, inner pentagram on 5..9.
  static Graph petersen() {
    Graph g(10);
    for (std::size_t i = 0; i != 5; ++i) {
      g.add_edge(i, (i + 1) % 5);
      g.add_edge(i, i + 5);
      g.add_edge(5 + i, 5 + (i + 2) % 5);
    }
    return g;
  }

  void add_edge(std::size_t r, std::size_t s) {
    if (r >= n_ || s >= n_)
      fail("mekler.IndexOutOfRange", "edge endpoint beyond vertex count");
    if (r == s)
      fail("mekler.InvalidGraph", "loops are not allowed");
    adj_[r * n_ + s] = adj_[s * n_ + r] = 1;
  }

  std::size_t size() const { return n_; }
  bool adjacent(std::size_t r, std::size_t s) const { return adj_[r * n_ + s] != 0; }

  std::vector<std::pair<std::size_t, std::size_t>> edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t r = 0; r != n_; ++r)
      for (std::size_t s = r + 1; s < n_; ++s)
        if (adjacent(r, s))
          out.emplace_back(r, s);
    return out;
  }

  friend bool operator==(const Graph&, const Graph&) = default;

private:
  std::size_t n_ = 0;
  std::vector<char> adj_;
};

struct NiceReport {
  enum class Failure { None, Triangle, Square, Unseparated } failure = Failure::None;
  std::vector<std::size_t> witness; // triangle, square in cycle order, or the pair x, y
  bool nice() const { return failure == Failure::None; }
};

// No triangles, no 4-cycles, and for distinct x, y some z other than y is
// adjacent to x but not to y.
inline NiceReport is_nice(const Graph& a) {
  const std::size_t n = a.size();
  for (std::size_t r = 0; r != n; ++r)
    for (std::size_t s = r + 1; s < n; ++s)
      for (std::size_t t = s + 1; t < n; ++t)
        if (a.adjacent(r, s) && a.adjacent(s, t) && a.adjacent(r, t))
          return {NiceReport::Failure::Triangle, {r, s, t}};
  for (std::size_t r = 0; r != n; ++r)
    for (std::size_t s = r + 1; s < n; ++s) {
      std::vector<std::size_t> common;
      for (std::size_t z = 0; z != n; ++z)
        if (z != r && z != s && a.adjacent(r, z) && a.adjacent(s, z))
          common.push_back(z);
      if (common.size() >= 2)
        return {NiceReport::Failure::Square, {r, common[0], s, common[1]}};
    }
  for (std::size_t x = 0; x != n; ++x)
    for (std::size_t y = 0; y != n; ++y) {
      if (x == y)
        continue;
      bool found = false;
      for (std::size_t z = 0; z != n && !found; ++z)
        found = z != y && a.adjacent(x, z) && !a.adjacent(y, z);
      if (!found)
        return {NiceReport::Failure::Unseparated, {x, y}};
    }
  return {};
}

inline bool is_prime(std::size_t p) {
  if (p < 2)
    return false;
  for (std::size_t d = 2; d * d <= p; ++d)
    if (p % d == 0)
      return false;
  return true;
}

// The graph, the prime and the indexing of non-edge pairs.
struct MeklerContext {
  Graph graph;
  std::uint32_t p = 3;
  std::vector<std::pair<std::size_t, std::size_t>> pairs; // non-edges r < s, lexicographic
  std::vector<std::size_t> pair_index;                     // r * n + s -> index, or npos

  static constexpr std::size_t npos = std::size_t(-1);

  std::size_t n() const { return graph.size(); }
  std::size_t index_of(std::size_t r, std::size_t s) const {
    return pair_index[r * graph.size() + s];
  }

  friend bool operator==(const MeklerContext& a, const MeklerContext& b) {
    return a.p == b.p && a.graph == b.graph;
  }
};

using MeklerContextPtr = std::shared_ptr<const MeklerContext>;

inline MeklerContextPtr make_mekler_context(Graph graph, std::size_t p) {
  if (p < 3 || !is_prime(p) || p > 65521)
    fail("mekler.BadPrime", "p must be an odd prime, got " + std::to_string(p));
  auto c = std::make_shared<MeklerContext>();
  const std::size_t n = graph.size();
  c->graph = std::move(graph);
  c->p = std::uint32_t(p);
  c->pair_index.assign(n * n, MeklerContext::npos);
  for (std::size_t r = 0; r != n; ++r)
    for (std::size_t s = r + 1; s < n; ++s)
      if (!c->graph.adjacent(r, s)) {
        c->pair_index[r * n + s] = c->pairs.size();
        c->pairs.emplace_back(r, s);
      }
  return c;
}

struct MeklerElement {
  MeklerContextPtr ctx;
  std::vector<std::uint32_t> alpha; // per vertex
  std::vector<std::uint32_t> beta;  // per non-edge pair

  friend bool operator==(const MeklerElement& u, const MeklerElement& w) {
    return u.alpha == w.alpha && u.beta == w.beta;
  }
};

struct MeklerElementHash {
  std::size_t operator()(const MeklerElement& u) const {
    std::uint64_t h = 1469598103934665603ull;
    for (auto v : u.alpha)
      h = (h ^ v) * 1099511628211ull;
    for (auto v : u.beta)
      h = (h ^ (v + 0x9e37u)) * 1099511628211ull;
    return std::size_t(h);
  }
};

inline MeklerElement mekler_identity(const MeklerContextPtr& ctx) {
  return {ctx, std::vector<std::uint32_t>(ctx->n(), 0),
          std::vector<std::uint32_t>(ctx->pairs.size(), 0)};
}

inline MeklerElement mekler_generator(const MeklerContextPtr& ctx, std::size_t i,
                                      long long e = 1) {
  if (i >= ctx->n())
    fail("mekler.IndexOutOfRange", "vertex x" + std::to_string(i) + " beyond the graph");
  MeklerElement u = mekler_identity(ctx);
  const long long p = ctx->p;
  u.alpha[i] = std::uint32_t(((e % p) + p) % p);
  return u;
}

// x_{r,s}^e for a non-edge r < s.
inline MeklerElement mekler_central(const MeklerContextPtr& ctx, std::size_t r, std::size_t s,
                                    long long e = 1) {
  if (r >= ctx->n() || s >= ctx->n())
    fail("mekler.IndexOutOfRange", "central generator index beyond the graph");
  if (r >= s)
    fail("mekler.InvalidArgument", "central generator needs r < s");
  const std::size_t k = ctx->index_of(r, s);
  if (k == MeklerContext::npos)
    fail("mekler.EdgeCentralGenerator", "c" + std::to_string(r) + "," + std::to_string(s) +
                                            " is trivial: {r,s} is an edge");
  MeklerElement u = mekler_identity(ctx);
  const long long p = ctx->p;
  u.beta[k] = std::uint32_t(((e % p) + p) % p);
  return u;
}

inline void check_same_context(const MeklerElement& u, const MeklerElement& w) {
  if (u.ctx != w.ctx && !(*u.ctx == *w.ctx))
    fail("mekler.MixedContext", "elements belong to different groups");
}

// Moving x_s^b (from w) left past x_r^a (from u), s < r, leaves
// [x_r^a, x_s^b] = x_{s,r}^{-ab} behind.
inline MeklerElement multiply(const MeklerElement& u, const MeklerElement& w) {
  check_same_context(u, w);
  const MeklerContext& c = *u.ctx;
  const std::uint64_t p = c.p;
  MeklerElement out{u.ctx, u.alpha, u.beta};
  for (std::size_t i = 0; i != out.alpha.size(); ++i)
    out.alpha[i] = std::uint32_t((out.alpha[i] + w.alpha[i]) % p);
  for (std::size_t k = 0; k != c.pairs.size(); ++k) {
    const auto [s, r] = c.pairs[k];
    const std::uint64_t correction = std::uint64_t(u.alpha[r]) * w.alpha[s] % p;
    out.beta[k] = std::uint32_t((out.beta[k] + w.beta[k] + p - correction) % p);
  }
  return out;
}

inline MeklerElement inverse(const MeklerElement& u) {
  const MeklerContext& c = *u.ctx;
  const std::uint64_t p = c.p;
  MeklerElement out = mekler_identity(u.ctx);
  for (std::size_t i = 0; i != u.alpha.size(); ++i)
    out.alpha[i] = std::uint32_t((p - u.alpha[i]) % p);
  for (std::size_t k = 0; k != c.pairs.size(); ++k) {
    const auto [s, r] = c.pairs[k];
    const std::uint64_t t = (u.beta[k] + std::uint64_t(u.alpha[s]) * u.alpha[r]) % p;
    out.beta[k] = std::uint32_t((p - t) % p);
  }
  return out;
}

inline MeklerElement power(const MeklerElement& u, long long e) {
  MeklerElement base = e < 0 ? inverse(u) : u;
  if (e < 0)
    e = -e;
  MeklerElement out = mekler_identity(u.ctx);
  for (; e > 0; e >>= 1) {
    if (e & 1)
      out = multiply(out, base);
    base = multiply(base, base);
  }
  return out;
}

// [u, w] read off the vertex exponents alone.
inline MeklerElement commutator_formula(const MeklerElement& u, const MeklerElement& w) {
  check_same_context(u, w);
  const MeklerContext& c = *u.ctx;
  const std::uint64_t p = c.p;
  MeklerElement out = mekler_identity(u.ctx);
  for (std::size_t k = 0; k != c.pairs.size(); ++k) {
    const auto [r, s] = c.pairs[k];
    const std::uint64_t plus = std::uint64_t(u.alpha[r]) * w.alpha[s] % p;
    const std::uint64_t minus = std::uint64_t(u.alpha[s]) * w.alpha[r] % p;
    out.beta[k] = std::uint32_t((plus + p - minus) % p);
  }
  return out;
}

// u^-1 w^-1 u w by direct multiplication.
inline MeklerElement commutator_oracle(const MeklerElement& u, const MeklerElement& w) {
  check_same_context(u, w);
  return multiply(multiply(inverse(u), inverse(w)), multiply(u, w));
}

inline MeklerElement project_to_level(const MeklerElement& u, std::size_t n) {
  MeklerElement out = u;
  for (std::size_t i = n; i < out.alpha.size(); ++i)
    out.alpha[i] = 0;
  for (std::size_t k = 0; k != out.beta.size(); ++k)
    if (u.ctx->pairs[k].second >= n)
      out.beta[k] = 0;
  return out;
}

inline bool is_central(const MeklerElement& v);

// Row (r, s) per non-edge: w commutes with v iff v_r w_s - v_s w_r = 0 for all.
inline FpMatrix centralizer_matrix(const MeklerElement& v) {
  const MeklerContext& c = *v.ctx;
  FpMatrix m(c.pairs.size(), c.n());
  for (std::size_t k = 0; k != c.pairs.size(); ++k) {
    const auto [r, s] = c.pairs[k];
    m.at(k, s) = v.alpha[r];
    m.at(k, r) = (c.p - v.alpha[s]) % c.p;
  }
  return m;
}

inline bool is_central(const MeklerElement& v) { return centralizer_matrix(v).is_zero(); }

inline void require_noncentral(const MeklerElement& v) {
  if (is_central(v))
    fail("mekler.CentralInput", "element is central");
}

// Vertex-exponent vectors of the centralizer, as a basis.
inline std::vector<FpRow> centralizer_kernel(const MeklerElement& v) {
  return kernel_basis(centralizer_matrix(v), v.ctx->p);
}

// Canonical key of the centralizer: the echelon form of its annihilator.
inline std::vector<FpRow> class_key(const MeklerElement& v) {
  return rref(centralizer_matrix(v), v.ctx->p);
}

// C(v) = C(w), by mutual containment of kernel bases.
inline bool same_class(const MeklerElement& v, const MeklerElement& w) {
  check_same_context(v, w);
  require_noncentral(v);
  require_noncentral(w);
  const FpMatrix mv = centralizer_matrix(v), mw = centralizer_matrix(w);
  const std::uint32_t p = v.ctx->p;
  for (const auto& x : kernel_basis(mv, p))
    if (!annihilates(mw, x, p))
      return false;
  for (const auto& x : kernel_basis(mw, p))
    if (!annihilates(mv, x, p))
      return false;
  return true;
}

struct CaseTag {
  enum class Kind { Case1, Case2, Case3, Case4 } kind = Kind::Case4;
  std::vector<std::size_t> witness; // r | r, s | l | empty

  friend bool operator==(const CaseTag&, const CaseTag&) = default;
};

inline std::string render(const CaseTag& t) {
  switch (t.kind) {
  case CaseTag::Kind::Case1:
    return "Case1(" + std::to_string(t.witness[0]) + ")";
  case CaseTag::Kind::Case2:
    return "Case2(" + std::to_string(t.witness[0]) + "," + std::to_string(t.witness[1]) + ")";
  case CaseTag::Kind::Case3:
    return "Case3(" + std::to_string(t.witness[0]) + ")";
  case CaseTag::Kind::Case4:
    break;
  }
  return "Case4";
}

// On the support D of the vertex exponents: a single vertex; two adjacent
// vertices; some l adjacent to every other member of D (l may lie in D,
// least such l); otherwise Case 4.
inline CaseTag case_classify(const MeklerElement& v) {
  require_noncentral(v);
  const Graph& a = v.ctx->graph;
  std::vector<std::size_t> d;
  for (std::size_t i = 0; i != v.alpha.size(); ++i)
    if (v.alpha[i] != 0)
      d.push_back(i);
  if (d.size() == 1)
    return {CaseTag::Kind::Case1, {d[0]}};
  if (d.size() == 2 && a.adjacent(d[0], d[1]))
    return {CaseTag::Kind::Case2, {d[0], d[1]}};
  for (std::size_t l = 0; l != a.size(); ++l) {
    bool all = true;
    for (std::size_t i : d)
      all = all && (i == l || a.adjacent(i, l));
    if (all)
      return {CaseTag::Kind::Case3, {l}};
  }
  return {CaseTag::Kind::Case4, {}};
}

inline std::size_t class_size(const MeklerElement& v) {
  const std::size_t p = v.ctx->p;
  switch (case_classify(v).kind) {
  case CaseTag::Kind::Case2:
    return (p - 1) * (p - 1);
  case CaseTag::Kind::Case3:
    return p * (p - 1);
  default:
    return p - 1;
  }
}

namespace impl {

inline std::size_t checked_power(std::size_t p, std::size_t n, std::size_t bound) {
  std::size_t out = 1;
  for (std::size_t i = 0; i != n; ++i) {
    if (out > bound / p)
      return bound + 1;
    out *= p;
  }
  return out;
}

inline MeklerElement alpha_element(const MeklerContextPtr& ctx, std::size_t code) {
  MeklerElement v = mekler_identity(ctx);
  for (std::size_t i = 0; i != ctx->n(); ++i) {
    v.alpha[i] = std::uint32_t(code % ctx->p);
    code /= ctx->p;
  }
  return v;
}

inline bool commute(const MeklerElement& u, const MeklerElement& w) {
  for (auto b : commutator_formula(u, w).beta)
    if (b != 0)
      return false;
  return true;
}

} // namespace impl

inline constexpr std::size_t kMaxAlphaCosets = 200000;

// Every non-central vertex-exponent vector, grouped by centralizer. Classes
// are listed by their least member code (vertex i carries weight p^i);
// members ascend.
inline std::vector<std::vector<std::size_t>> centralizer_classes(const MeklerContextPtr& ctx) {
  const std::size_t total = impl::checked_power(ctx->p, ctx->n(), kMaxAlphaCosets);
  if (total > kMaxAlphaCosets)
    fail("mekler.DeskScaleExceeded", "too many vertex-exponent vectors");
  std::map<std::vector<FpRow>, std::size_t> index;
  std::vector<std::vector<std::size_t>> classes;
  for (std::size_t code = 0; code != total; ++code) {
    auto key = class_key(impl::alpha_element(ctx, code));
    if (key.empty())
      continue;
    auto [it, inserted] = index.try_emplace(std::move(key), classes.size());
    if (inserted)
      classes.emplace_back();
    classes[it->second].push_back(code);
  }
  return classes;
}

struct Gamma2Result {
  // Classes of size p-1 with an R-neighbour, by least member code.
  std::vector<std::vector<std::size_t>> classes;
  std::vector<std::pair<std::size_t, std::size_t>> class_edges; // indices into classes
  // class index -> vertex i when the class is that of x_i.
  std::vector<std::optional<std::size_t>> vertex_of_class;
  Graph graph; // the interpreted graph, relabelled through vertex_of_class
  bool isomorphic = false; // the relabelling is a bijection and graph equals the input
};

inline Gamma2Result gamma2(const Graph& a, std::size_t p) {
  if (p < 3 || !is_prime(p))
    fail("mekler.BadPrime", "p must be an odd prime, got " + std::to_string(p));
  if (!is_nice(a).nice())
    fail("mekler.NotNice", "gamma2 needs a nice graph");
  const MeklerContextPtr ctx = make_mekler_context(a, p);
  const auto all = centralizer_classes(ctx);

  std::vector<std::size_t> class_of(impl::checked_power(p, a.size(), kMaxAlphaCosets),
                                    std::size_t(-1));
  for (std::size_t c = 0; c != all.size(); ++c)
    for (std::size_t code : all[c])
      class_of[code] = c;

  // [a] R [w]: distinct non-central classes with commuting members. The
  // candidates w are the span of a's centralizer basis.
  auto has_neighbour = [&](std::size_t c) {
    const MeklerElement v = impl::alpha_element(ctx, all[c].front());
    const auto basis = centralizer_kernel(v);
    const std::size_t count = impl::checked_power(p, basis.size(), kMaxAlphaCosets);
    for (std::size_t combo = 1; combo < count; ++combo) {
      std::size_t code = 0, weight = 1, rest = combo;
      std::vector<std::uint64_t> w(a.size(), 0);
      for (const auto& b : basis) {
        const std::uint64_t coef = rest % p;
        rest /= p;
        for (std::size_t i = 0; i != a.size(); ++i)
          w[i] = (w[i] + coef * b[i]) % p;
      }
      for (std::size_t i = 0; i != a.size(); ++i) {
        code += w[i] * weight;
        weight *= p;
      }
      const std::size_t d = class_of[code];
      if (d != std::size_t(-1) && d != c)
        return true;
    }
    return false;
  };

  Gamma2Result out;
  for (std::size_t c = 0; c != all.size(); ++c)
    if (all[c].size() == p - 1 && has_neighbour(c))
      out.classes.push_back(all[c]);

  for (std::size_t i = 0; i != out.classes.size(); ++i)
    for (std::size_t j = i + 1; j < out.classes.size(); ++j) {
      bool related = false;
      for (std::size_t x : out.classes[i])
        for (std::size_t y : out.classes[j])
          related = related ||
                    impl::commute(impl::alpha_element(ctx, x), impl::alpha_element(ctx, y));
      if (related)
        out.class_edges.emplace_back(i, j);
    }

  out.vertex_of_class.assign(out.classes.size(), std::nullopt);
  std::size_t weight = 1;
  for (std::size_t i = 0; i != a.size(); ++i, weight *= p)
    for (std::size_t c = 0; c != out.classes.size(); ++c)
      if (std::binary_search(out.classes[c].begin(), out.classes[c].end(), weight))
        out.vertex_of_class[c] = i;

  bool bijective = out.classes.size() == a.size();
  for (const auto& v : out.vertex_of_class)
    bijective = bijective && v.has_value();
  out.graph = Graph(bijective ? a.size() : 0);
  if (bijective)
    for (const auto& [i, j] : out.class_edges)
      out.graph.add_edge(*out.vertex_of_class[i], *out.vertex_of_class[j]);
  out.isomorphic = bijective && out.graph == a;
  return out;
}

// Order of G(A)/R_n: p^(n + non-edges below n).
inline std::size_t rn_level_order(const Graph& a, std::size_t p, std::size_t n,
                                  std::size_t bound) {
  const std::size_t m = std::min(n, a.size());
  std::size_t exponent = m;
  for (std::size_t r = 0; r != m; ++r)
    for (std::size_t s = r + 1; s < m; ++s)
      exponent += a.adjacent(r, s) ? 0 : 1;
  return impl::checked_power(p, exponent, bound);
}

// The epimorphism x_i -> x_i (i < n), x_i -> 1 (i >= n) onto G(A)/R_n.
inline LatticeElement rn_level(const MeklerContextPtr& ctx, std::size_t n) {
  const std::size_t order = rn_level_order(ctx->graph, ctx->p, n, kMaxTabulatedOrder);
  if (order > kMaxTabulatedOrder)
    fail("mekler.LevelTooLarge", "level " + std::to_string(n) + " quotient exceeds " +
                                     std::to_string(kMaxTabulatedOrder) + " elements");
  std::vector<MeklerElement> gens;
  for (std::size_t i = 0; i != std::min(n, ctx->n()); ++i)
    gens.push_back(mekler_generator(ctx, i));
  auto mul = [](const MeklerElement& u, const MeklerElement& w) { return multiply(u, w); };
  return lattice_element_from<MeklerElement, decltype(mul), MeklerElementHash>(
      mekler_identity(ctx), std::move(gens), mul);
}

inline FilterChain rn_chain(const Graph& a, std::size_t p) {
  const MeklerContextPtr ctx = make_mekler_context(a, p);
  std::optional<std::size_t> bound;
  for (std::size_t n = 0; n <= a.size(); ++n)
    if (rn_level_order(a, p, n, kMaxTabulatedOrder) > kMaxTabulatedOrder) {
      bound = n;
      break;
    }
  return FilterChain::from_rule([ctx](std::size_t n) { return rn_level(ctx, n); }, bound);
}

} // namespace profinite

#endif
