// Dense linear algebra over the prime field F_p.

#ifndef PROFINITE_FP_LINEAR_HPP_
#define PROFINITE_FP_LINEAR_HPP_

#include <cstdint>
#include <vector>

#include "error.hpp"

namespace profinite {

using FpRow = std::vector<std::uint32_t>;

struct FpMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<std::uint32_t> data;

  FpMatrix() = default;
  FpMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0) {}
  std::uint32_t& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  std::uint32_t at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  bool is_zero() const {
    for (auto v : data)
      if (v != 0)
        return false;
    return true;
  }
};

inline std::uint32_t fp_inverse(std::uint32_t a, std::uint32_t p) {
  // a^(p-2) mod p
  std::uint64_t r = 1, b = a % p;
  for (std::uint32_t e = p - 2; e != 0; e >>= 1) {
    if (e & 1)
      r = r * b % p;
    b = b * b % p;
  }
  return std::uint32_t(r);
}

// Reduced row echelon form; zero rows are dropped. The result depends only
// on the row space, so it serves as a canonical key for it.
inline std::vector<FpRow> rref(FpMatrix m, std::uint32_t p) {
  std::vector<FpRow> out;
  std::size_t lead = 0;
  for (std::size_t c = 0; c != m.cols && lead != m.rows; ++c) {
    std::size_t piv = lead;
    while (piv != m.rows && m.at(piv, c) == 0)
      ++piv;
    if (piv == m.rows)
      continue;
    for (std::size_t j = 0; j != m.cols; ++j)
      std::swap(m.at(piv, j), m.at(lead, j));
    const std::uint64_t inv = fp_inverse(m.at(lead, c), p);
    for (std::size_t j = 0; j != m.cols; ++j)
      m.at(lead, j) = std::uint32_t(m.at(lead, j) * inv % p);
    for (std::size_t i = 0; i != m.rows; ++i) {
      const std::uint64_t f = m.at(i, c);
      if (i == lead || f == 0)
        continue;
      for (std::size_t j = 0; j != m.cols; ++j)
        m.at(i, j) = std::uint32_t((m.at(i, j) + (p - f) * m.at(lead, j)) % p);
    }
    ++lead;
  }
  for (std::size_t i = 0; i != lead; ++i)
    out.emplace_back(m.data.begin() + std::ptrdiff_t(i * m.cols),
                     m.data.begin() + std::ptrdiff_t((i + 1) * m.cols));
  return out;
}

// Basis of {x : M x = 0}.
inline std::vector<FpRow> kernel_basis(const FpMatrix& m, std::uint32_t p) {
  const auto r = rref(m, p);
  std::vector<std::size_t> pivot_col;
  std::vector<char> is_pivot(m.cols, 0);
  for (const auto& row : r) {
    std::size_t c = 0;
    while (row[c] == 0)
      ++c;
    pivot_col.push_back(c);
    is_pivot[c] = 1;
  }
  std::vector<FpRow> basis;
  for (std::size_t f = 0; f != m.cols; ++f) {
    if (is_pivot[f])
      continue;
    FpRow v(m.cols, 0);
    v[f] = 1;
    for (std::size_t i = 0; i != r.size(); ++i)
      v[pivot_col[i]] = (p - r[i][f]) % p;
    basis.push_back(std::move(v));
  }
  return basis;
}

inline bool annihilates(const FpMatrix& m, const FpRow& x, std::uint32_t p) {
  for (std::size_t i = 0; i != m.rows; ++i) {
    std::uint64_t acc = 0;
    for (std::size_t j = 0; j != m.cols; ++j)
      acc += std::uint64_t(m.at(i, j)) * x[j];
    if (acc % p != 0)
      return false;
  }
  return true;
}

} // namespace profinite

#endif
