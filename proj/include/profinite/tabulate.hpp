// Tabulating the group generated by a few elements of some ambient group.

#ifndef PROFINITE_TABULATE_HPP_
#define PROFINITE_TABULATE_HPP_

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "error.hpp"
#include "finite_group.hpp"

namespace profinite {

template <class T>
struct Tabulation {
  FiniteGroup group;
  std::vector<T> elements;          // index -> ambient element
  std::vector<Elem> generator_index; // index of each generator's image
  std::vector<Elem> parent;          // breadth-first tree; parent of 0 is kNoElem
  std::vector<std::size_t> via;      // generator applied to the parent
};

// Breadth-first enumeration of <gens> by right multiplication. The
// numbering depends only on the multiplication and the generator order:
// identity is 0, then elements in order of discovery. Fails with
// DeskScaleExceeded once more than `limit` elements appear.
template <class T, class Mul, class Hash = std::hash<T>>
Tabulation<T> tabulate_generated(const T& identity, const std::vector<T>& gens, Mul mul,
                                 std::size_t limit = kMaxGeneratedOrder) {
  Tabulation<T> tab;
  std::unordered_map<T, Elem, Hash> index;
  const std::size_t k = gens.size();
  std::vector<Elem> right; // right[x * k + j] = x * gens[j]
  tab.elements.push_back(identity);
  tab.parent.push_back(kNoElem);
  tab.via.push_back(0);
  index.emplace(identity, 0);
  for (std::size_t x = 0; x != tab.elements.size(); ++x)
    for (std::size_t j = 0; j != k; ++j) {
      T y = mul(tab.elements[x], gens[j]);
      auto [it, inserted] = index.try_emplace(std::move(y), Elem(tab.elements.size()));
      if (inserted) {
        if (tab.elements.size() >= limit)
          fail("group.DeskScaleExceeded",
               "generated group exceeds " + std::to_string(limit) + " elements");
        tab.elements.push_back(it->first);
        tab.parent.push_back(Elem(x));
        tab.via.push_back(j);
      }
      right.push_back(it->second);
    }
  const std::size_t n = tab.elements.size();
  for (const T& g : gens)
    tab.generator_index.push_back(index.at(g));

  if (n > kMaxTabulatedOrder) {
    tab.group = FiniteGroup::from_cayley(k, std::move(right), tab.parent,
                                         std::vector<Elem>(tab.via.begin(), tab.via.end()));
    return tab;
  }
  // Row x of the table: follow the breadth-first tree from x.
  std::vector<Elem> table(n * n);
  for (std::size_t x = 0; x != n; ++x) {
    Elem* row = &table[x * n];
    row[0] = Elem(x);
    for (std::size_t y = 1; y != n; ++y)
      row[y] = right[std::size_t(row[tab.parent[y]]) * k + tab.via[y]];
  }
  tab.group = FiniteGroup::from_table(n, std::move(table), 0);
  return tab;
}

} // namespace profinite

#endif
