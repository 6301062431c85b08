// Freely reduced words in the generators x0, x1, ... of the free group.

#ifndef PROFINITE_WORD_HPP_
#define PROFINITE_WORD_HPP_

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

namespace profinite {

struct Syllable {
  std::size_t gen = 0;
  long long exp = 0;

  friend bool operator==(const Syllable&, const Syllable&) = default;
};

// Invariant: exponents nonzero, adjacent syllables on distinct generators.
class Word {
public:
  Word() = default;
  explicit Word(std::vector<Syllable> syllables) {
    for (const Syllable& s : syllables)
      push(s);
  }
  static Word generator(std::size_t i, long long e = 1) { return Word({{i, e}}); }

  const std::vector<Syllable>& syllables() const { return syl_; }
  bool empty() const { return syl_.empty(); }
  std::size_t max_generator_bound() const {
    std::size_t m = 0;
    for (const Syllable& s : syl_)
      m = std::max(m, s.gen + 1);
    return m;
  }

  Word inverse() const {
    Word w;
    for (auto it = syl_.rbegin(); it != syl_.rend(); ++it)
      w.syl_.push_back({it->gen, -it->exp});
    return w;
  }

  friend Word operator*(Word a, const Word& b) {
    for (const Syllable& s : b.syl_)
      a.push(s);
    return a;
  }

  friend bool operator==(const Word&, const Word&) = default;

private:
  void push(Syllable s) {
    if (s.exp == 0)
      return;
    if (!syl_.empty() && syl_.back().gen == s.gen) {
      syl_.back().exp += s.exp;
      if (syl_.back().exp == 0)
        syl_.pop_back();
      return;
    }
    syl_.push_back(s);
  }

  std::vector<Syllable> syl_;
};

inline Word commutator(const Word& a, const Word& b) {
  return a.inverse() * b.inverse() * a * b;
}

inline Word power(const Word& w, long long e) {
  Word base = e < 0 ? w.inverse() : w;
  if (e < 0)
    e = -e;
  Word out;
  for (long long i = 0; i < e; ++i)
    out = out * base;
  return out;
}

// x0^2*x1^-1 style; the empty word is "e".
inline std::string render(const Word& w) {
  if (w.empty())
    return "e";
  std::string out;
  for (const Syllable& s : w.syllables()) {
    if (!out.empty())
      out += '*';
    out += 'x' + std::to_string(s.gen);
    if (s.exp != 1)
      out += '^' + std::to_string(s.exp);
  }
  return out;
}

} // namespace profinite

#endif
