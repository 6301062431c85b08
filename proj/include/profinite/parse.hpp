// Concrete syntax for free-group words and Mekler elements.
//
//   word    := "e" | "1" | factor ("*" factor)*
//   factor  := atom ("^" ["-"] INT)?
//   atom    := "x" INT | "[" word "," word "]" | "(" word ")"
//
//   element := "e" | term ("*" term)*
//   term    := "x" INT opt_exp | "c" INT "," INT opt_exp
//   opt_exp := "" | "^" ["-"] INT
//
// Whitespace between tokens is ignored.

#ifndef PROFINITE_PARSE_HPP_
#define PROFINITE_PARSE_HPP_

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "mekler.hpp"
#include "word.hpp"

namespace profinite {

class SyntaxError : public Error {
public:
  SyntaxError(std::size_t position, std::vector<std::string> expected)
      : Error("cli.SyntaxError", message(position, expected)), position_(position),
        expected_(std::move(expected)) {}

  std::size_t position() const { return position_; }
  const std::vector<std::string>& expected() const { return expected_; }

private:
  static std::string message(std::size_t pos, const std::vector<std::string>& expected) {
    std::string out = "at position " + std::to_string(pos) + ", expected ";
    for (std::size_t i = 0; i != expected.size(); ++i)
      out += (i ? " or " : "") + expected[i];
    return out;
  }

  std::size_t position_;
  std::vector<std::string> expected_;
};

namespace impl {

class Cursor {
public:
  explicit Cursor(std::string_view text) : text_(text) {}

  std::size_t pos() {
    skip();
    return pos_;
  }
  bool at_end() {
    skip();
    return pos_ == text_.size();
  }
  char peek() {
    skip();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  bool accept(char c) {
    if (peek() != c)
      return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!accept(c))
      throw SyntaxError(pos(), {std::string("'") + c + "'"});
  }
  unsigned long long natural() {
    skip();
    if (pos_ == text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      throw SyntaxError(pos_, {"INT"});
    unsigned long long v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      if (v > 1'000'000'000'000ull)
        throw SyntaxError(pos_, {"a smaller INT"});
      v = v * 10 + unsigned(text_[pos_++] - '0');
    }
    return v;
  }
  long long integer() {
    const bool negative = accept('-');
    const auto v = static_cast<long long>(natural());
    return negative ? -v : v;
  }
  void finish(std::vector<std::string> expected) {
    if (!at_end())
      throw SyntaxError(pos(), std::move(expected));
  }

private:
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

inline Word parse_word_body(Cursor& c);

inline Word parse_atom(Cursor& c) {
  if (c.accept('x'))
    return Word::generator(std::size_t(c.natural()));
  if (c.accept('[')) {
    const Word a = parse_word_body(c);
    c.expect(',');
    const Word b = parse_word_body(c);
    c.expect(']');
    return commutator(a, b);
  }
  if (c.accept('(')) {
    const Word a = parse_word_body(c);
    c.expect(')');
    return a;
  }
  throw SyntaxError(c.pos(), {"'x'", "'['", "'('"});
}

inline Word parse_factor(Cursor& c) {
  Word a = parse_atom(c);
  if (!c.accept('^'))
    return a;
  const long long e = c.integer();
  if (a.syllables().size() == 1) {
    long long exp = 0;
    if (__builtin_mul_overflow(a.syllables()[0].exp, e, &exp))
      fail("cli.ExponentTooLarge", "exponent overflows");
    return Word::generator(a.syllables()[0].gen, exp);
  }
  if (e > 4096 || e < -4096)
    fail("cli.ExponentTooLarge", "powers of compound words are limited to |e| <= 4096");
  return power(a, e);
}

inline Word parse_word_body(Cursor& c) {
  Word w = parse_factor(c);
  while (c.accept('*'))
    w = w * parse_factor(c);
  return w;
}

} // namespace impl

inline Word parse_word(std::string_view text) {
  impl::Cursor c(text);
  if (c.peek() == 'e' || c.peek() == '1') {
    c.accept(c.peek());
    c.finish({"end of input"});
    return {};
  }
  Word w = impl::parse_word_body(c);
  c.finish({"'*'", "end of input"});
  return w;
}

// Terms multiply left to right in the group, so any order is accepted and
// the result is the normal form of the product.
inline MeklerElement parse_element(std::string_view text, const MeklerContextPtr& ctx) {
  impl::Cursor c(text);
  MeklerElement out = mekler_identity(ctx);
  if (c.accept('e')) {
    c.finish({"end of input"});
    return out;
  }
  do {
    MeklerElement term;
    if (c.accept('x')) {
      const auto i = c.natural();
      const long long e = c.accept('^') ? c.integer() : 1;
      term = mekler_generator(ctx, std::size_t(i), e);
    } else if (c.accept('c')) {
      const auto r = c.natural();
      c.expect(',');
      const auto s = c.natural();
      const long long e = c.accept('^') ? c.integer() : 1;
      if (r >= s)
        throw SyntaxError(c.pos(), {"c r,s with r < s"});
      term = mekler_central(ctx, std::size_t(r), std::size_t(s), e);
    } else {
      throw SyntaxError(c.pos(), {"'x'", "'c'", "'e'"});
    }
    out = multiply(out, term);
  } while (c.accept('*'));
  c.finish({"'*'", "end of input"});
  return out;
}

// Central factors first, then vertex powers in index order; "e" if trivial.
inline std::string render(const MeklerElement& u) {
  std::string out;
  auto add = [&](const std::string& t, std::uint32_t e) {
    if (!out.empty())
      out += '*';
    out += t;
    if (e != 1)
      out += '^' + std::to_string(e);
  };
  for (std::size_t k = 0; k != u.beta.size(); ++k)
    if (u.beta[k] != 0)
      add("c" + std::to_string(u.ctx->pairs[k].first) + "," +
              std::to_string(u.ctx->pairs[k].second),
          u.beta[k]);
  for (std::size_t i = 0; i != u.alpha.size(); ++i)
    if (u.alpha[i] != 0)
      add("x" + std::to_string(i), u.alpha[i]);
  return out.empty() ? "e" : out;
}

} // namespace profinite

#endif
