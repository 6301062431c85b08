// Finite levels of G_P = prod_{p in P} SL2(Z_p), recovery of P from a
// level-1 quotient, and the unitriangular group UT3(Z/p).

#ifndef PROFINITE_SL_FAMILY_HPP_
#define PROFINITE_SL_FAMILY_HPP_

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"
#include "finite_group.hpp"
#include "mekler.hpp"

namespace profinite {

using PrimeSet = std::vector<std::size_t>;

inline PrimeSet make_prime_set(std::vector<std::size_t> primes) {
  for (std::size_t p : primes)
    if (!is_prime(p))
      fail("slfam.NotPrime", std::to_string(p) + " is not prime");
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  return primes;
}

// 2x2 matrix (a b; c d), entries reduced mod the level modulus.
using Mat2 = std::array<std::uint32_t, 4>;

struct MatrixGroupLevel {
  std::size_t p = 2, k = 1, modulus = 2;
  FiniteGroup group;
  std::vector<Mat2> labels; // element index -> matrix
};

inline constexpr std::size_t kMaxMatrixGroupOrder = 2000;

namespace impl {

inline Mat2 mat_mul(const Mat2& x, const Mat2& y, std::uint64_t m) {
  return {std::uint32_t((std::uint64_t(x[0]) * y[0] + std::uint64_t(x[1]) * y[2]) % m),
          std::uint32_t((std::uint64_t(x[0]) * y[1] + std::uint64_t(x[1]) * y[3]) % m),
          std::uint32_t((std::uint64_t(x[2]) * y[0] + std::uint64_t(x[3]) * y[2]) % m),
          std::uint32_t((std::uint64_t(x[2]) * y[1] + std::uint64_t(x[3]) * y[3]) % m)};
}

// Tabulates a finite set of labels closed under `mul`; labels are sorted,
// so the identity need not be index 0.
template <class Label, class Mul>
FiniteGroup table_from_labels(const std::vector<Label>& labels, const Label& one, Mul mul) {
  std::map<Label, Elem> index;
  for (std::size_t i = 0; i != labels.size(); ++i)
    index.emplace(labels[i], Elem(i));
  const std::size_t n = labels.size();
  std::vector<Elem> table(n * n);
  for (std::size_t a = 0; a != n; ++a)
    for (std::size_t b = 0; b != n; ++b)
      table[a * n + b] = index.at(mul(labels[a], labels[b]));
  return FiniteGroup::from_table(n, std::move(table), index.at(one));
}

} // namespace impl

// SL2(Z/p^k) by listing determinant-1 matrices in lexicographic order.
inline MatrixGroupLevel sl2_level(std::size_t p, std::size_t k) {
  if (!is_prime(p))
    fail("slfam.NotPrime", std::to_string(p) + " is not prime");
  if (k == 0)
    fail("slfam.InvalidArgument", "level must be at least 1");
  std::size_t m = 1;
  for (std::size_t i = 0; i != k; ++i) {
    m *= p;
    if (m > 64)
      fail("slfam.DeskScaleExceeded", "SL2(Z/" + std::to_string(p) + "^" + std::to_string(k) +
                                          ") is beyond desk scale");
  }
  // |SL2(Z/p^k)| = p^(3k) (1 - p^-2)
  const std::size_t order = m * m * m / (p * p) * (p * p - 1);
  if (order > kMaxMatrixGroupOrder)
    fail("slfam.DeskScaleExceeded", "SL2(Z/" + std::to_string(m) + ") has order " +
                                        std::to_string(order));
  MatrixGroupLevel out{p, k, m, {}, {}};
  for (std::uint32_t a = 0; a != m; ++a)
    for (std::uint32_t b = 0; b != m; ++b)
      for (std::uint32_t c = 0; c != m; ++c)
        for (std::uint32_t d = 0; d != m; ++d)
          if ((std::uint64_t(a) * d + std::uint64_t(m - b) * c) % m == 1 % m)
            out.labels.push_back({a, b, c, d});
  out.group = impl::table_from_labels(out.labels, Mat2{1, 0, 0, 1},
                                      [m](const Mat2& x, const Mat2& y) {
                                        return impl::mat_mul(x, y, m);
                                      });
  return out;
}

// Entrywise reduction SL2(Z/p^k) -> SL2(Z/p^(k-1)) as an element map.
inline std::vector<Elem> reduction_map(const MatrixGroupLevel& fine,
                                       const MatrixGroupLevel& coarse) {
  if (fine.p != coarse.p || fine.k != coarse.k + 1)
    fail("slfam.InvalidArgument", "reduction goes from level k to level k-1 of one prime");
  std::map<Mat2, Elem> index;
  for (std::size_t i = 0; i != coarse.labels.size(); ++i)
    index.emplace(coarse.labels[i], Elem(i));
  std::vector<Elem> out;
  for (const Mat2& x : fine.labels) {
    Mat2 y = x;
    for (auto& v : y)
      v %= coarse.modulus;
    out.push_back(index.at(y));
  }
  return out;
}

inline FiniteGroup gP_level(const PrimeSet& primes, std::size_t k) {
  std::vector<FiniteGroup> factors;
  for (std::size_t p : make_prime_set(primes))
    factors.push_back(sl2_level(p, k).group);
  return FiniteGroup::direct_product(factors);
}

inline PrimeSet primes_detected(const FiniteGroup& g, const PrimeSet& candidates) {
  PrimeSet out;
  for (std::size_t p : make_prime_set(candidates))
    if (find_epimorphism(g, sl2_level(p, 1).group))
      out.push_back(p);
  return out;
}

// Least k at which the levels are not isomorphic; nullopt when P = Q.
inline std::optional<std::size_t> distinguishing_level(const PrimeSet& p, const PrimeSet& q) {
  if (make_prime_set(p) == make_prime_set(q))
    return std::nullopt;
  for (std::size_t k = 1;; ++k)
    if (!is_isomorphic(gP_level(p, k), gP_level(q, k)))
      return k;
}

// Upper unitriangular 3x3 matrices over Z/p, labelled (a, b, c) for
// (1 a c; 0 1 b; 0 0 1), in lexicographic order.
inline FiniteGroup ut3(std::size_t p) {
  if (!is_prime(p))
    fail("slfam.NotPrime", std::to_string(p) + " is not prime");
  if (p > 7)
    fail("slfam.DeskScaleExceeded", "ut3 is limited to p <= 7");
  using Label = std::array<std::uint32_t, 3>;
  std::vector<Label> labels;
  for (std::uint32_t a = 0; a != p; ++a)
    for (std::uint32_t b = 0; b != p; ++b)
      for (std::uint32_t c = 0; c != p; ++c)
        labels.push_back({a, b, c});
  const auto pp = std::uint32_t(p);
  return impl::table_from_labels(labels, Label{0, 0, 0}, [pp](const Label& x, const Label& y) {
    return Label{(x[0] + y[0]) % pp, (x[1] + y[1]) % pp, (x[2] + y[2] + x[0] * y[1]) % pp};
  });
}

} // namespace profinite

#endif
