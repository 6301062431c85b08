// Line-oriented text formats for groups, lattice elements, filter chains,
// graphs and coset-tree dumps. Readers are strict apart from trailing
// whitespace; writers emit exactly what the readers accept.

#ifndef PROFINITE_FORMAT_HPP_
#define PROFINITE_FORMAT_HPP_

#include <charconv>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cantor.hpp"
#include "error.hpp"
#include "filter.hpp"
#include "finite_group.hpp"
#include "lattice.hpp"
#include "mekler.hpp"

namespace profinite {

namespace impl {

class LineReader {
public:
  explicit LineReader(std::string_view text) {
    std::size_t start = 0;
    while (start < text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string_view::npos)
        end = text.size();
      std::string_view line = text.substr(start, end - start);
      while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r'))
        line.remove_suffix(1);
      lines_.emplace_back(line);
      start = end + 1;
    }
  }

  bool done() const { return next_ == lines_.size(); }
  std::size_t line_number() const { return next_; }

  [[noreturn]] void error(const std::string& msg) const {
    fail("format.ParseError", "line " + std::to_string(next_) + ": " + msg);
  }

  const std::string& peek() const {
    if (done())
      error("unexpected end of input");
    return lines_[next_];
  }

  // Next line split on single spaces.
  std::vector<std::string> tokens() {
    const std::string& line = peek();
    ++next_;
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= line.size()) {
      std::size_t end = line.find(' ', start);
      if (end == std::string::npos)
        end = line.size();
      out.push_back(line.substr(start, end - start));
      start = end + 1;
    }
    for (const auto& t : out)
      if (t.empty() && line.size() > 0)
        error("tokens must be separated by single spaces");
    if (line.empty())
      out.clear();
    return out;
  }

  std::size_t number(const std::string& t) const {
    std::size_t v = 0;
    const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size())
      error("expected a natural number, got '" + t + "'");
    return v;
  }

  // A token "<key><n>", e.g. "support=3".
  std::size_t keyed(const std::string& token, const std::string& key) const {
    if (token.rfind(key, 0) != 0)
      error("expected '" + key + "'");
    return number(token.substr(key.size()));
  }

  void expect_end() const {
    if (!done())
      error("trailing content");
  }

private:
  std::vector<std::string> lines_;
  std::size_t next_ = 0;
};

inline FiniteGroup read_group_block(LineReader& in) {
  auto head = in.tokens();
  if (head.size() != 2 || head[0] != "group")
    in.error("expected 'group <order>'");
  const std::size_t order = in.number(head[1]);
  if (order == 0 || order > kMaxTabulatedOrder)
    in.error("group order must be between 1 and " + std::to_string(kMaxTabulatedOrder));
  auto id = in.tokens();
  if (id.size() != 2 || id[0] != "identity")
    in.error("expected 'identity <index>'");
  const std::size_t identity = in.number(id[1]);
  std::vector<Elem> table;
  table.reserve(order * order);
  for (std::size_t a = 0; a != order; ++a) {
    auto row = in.tokens();
    if (row.size() != order)
      in.error("row " + std::to_string(a) + " must have " + std::to_string(order) + " entries");
    for (const auto& t : row)
      table.push_back(Elem(in.number(t)));
  }
  return FiniteGroup::from_table(order, std::move(table), Elem(identity));
}

inline LatticeElement read_lattice_block(LineReader& in) {
  auto head = in.tokens();
  if (head.size() != 2 || head[0] != "epi")
    in.error("expected 'epi support=<m>'");
  const std::size_t m = in.keyed(head[1], "support=");
  const FiniteGroup g = read_group_block(in);
  auto images = in.tokens();
  if (images.empty() || images[0] != "images" || images.size() != m + 1)
    in.error("expected 'images' followed by " + std::to_string(m) + " indices");
  std::vector<Elem> imgs;
  for (std::size_t i = 1; i != images.size(); ++i)
    imgs.push_back(Elem(in.number(images[i])));
  return canonicalize(g, std::move(imgs));
}

} // namespace impl

inline std::string write_group(const FiniteGroup& g0) {
  const FiniteGroup g = tabulated(g0);
  std::ostringstream out;
  out << "group " << g.order() << "\nidentity " << g.identity() << "\n";
  for (Elem a = 0; a != g.order(); ++a) {
    for (Elem b = 0; b != g.order(); ++b)
      out << (b ? " " : "") << g.mul(a, b);
    out << "\n";
  }
  return out.str();
}

inline FiniteGroup read_group(std::string_view text) {
  impl::LineReader in(text);
  FiniteGroup g = impl::read_group_block(in);
  in.expect_end();
  return g;
}

inline std::string write_lattice_element(const LatticeElement& l) {
  std::string out = "epi support=" + std::to_string(l.support) + "\n" + write_group(l.target) +
                    "images";
  for (Elem e : l.images)
    out += " " + std::to_string(e);
  return out + "\n";
}

// The result is canonicalized, so any epimorphism presentation is accepted.
inline LatticeElement read_lattice_element(std::string_view text) {
  impl::LineReader in(text);
  LatticeElement l = impl::read_lattice_block(in);
  in.expect_end();
  return l;
}

inline std::string write_filter(const std::vector<LatticeElement>& levels) {
  std::string out = "filter depth=" + std::to_string(levels.size()) + "\n";
  for (std::size_t i = 0; i != levels.size(); ++i)
    out += (i ? "---\n" : "") + write_lattice_element(levels[i]);
  return out;
}

inline std::string write_filter(const FilterChain& r, std::size_t depth) {
  std::vector<LatticeElement> levels;
  for (std::size_t i = 0; i != depth; ++i)
    levels.push_back(r.at(i));
  return write_filter(levels);
}

inline FilterChain read_filter(std::string_view text) {
  impl::LineReader in(text);
  auto head = in.tokens();
  if (head.size() != 2 || head[0] != "filter")
    in.error("expected 'filter depth=<d>'");
  const std::size_t d = in.keyed(head[1], "depth=");
  std::vector<LatticeElement> levels;
  for (std::size_t i = 0; i != d; ++i) {
    if (i) {
      auto sep = in.tokens();
      if (sep.size() != 1 || sep[0] != "---")
        in.error("expected '---' between levels");
    }
    levels.push_back(impl::read_lattice_block(in));
  }
  in.expect_end();
  return FilterChain::truncated(std::move(levels));
}

inline std::string write_graph(const Graph& a) {
  std::string out = "graph " + std::to_string(a.size()) + "\n";
  for (const auto& [r, s] : a.edges())
    out += "edge " + std::to_string(r) + " " + std::to_string(s) + "\n";
  return out;
}

inline Graph read_graph(std::string_view text) {
  impl::LineReader in(text);
  auto head = in.tokens();
  if (head.size() != 2 || head[0] != "graph")
    in.error("expected 'graph <n>'");
  Graph g(in.number(head[1]));
  std::pair<std::size_t, std::size_t> last{0, 0};
  bool first = true;
  while (!in.done()) {
    auto e = in.tokens();
    if (e.size() != 3 || e[0] != "edge")
      in.error("expected 'edge <r> <s>'");
    const std::pair<std::size_t, std::size_t> cur{in.number(e[1]), in.number(e[2])};
    if (cur.first >= cur.second)
      in.error("edges need r < s");
    if (cur.second >= g.size())
      in.error("edge endpoint beyond vertex count");
    if (!first && !(last < cur))
      in.error("edges must be strictly increasing");
    g.add_edge(cur.first, cur.second);
    last = cur;
    first = false;
  }
  return g;
}

inline std::string write_tree(const CosetTree& t) {
  std::string out = "tree depth=" + std::to_string(t.depth) + "\n";
  for (std::size_t n = 0; n != t.depth; ++n) {
    out += "level " + std::to_string(n) + " k=" + std::to_string(t.branching[n]) + "\n";
    for (std::size_t i = 0; i != t.reps[n].size(); ++i)
      out += "rep " + std::to_string(i) + " " + render(t.reps[n][i]) + "\n";
  }
  return out;
}

} // namespace profinite

#endif
