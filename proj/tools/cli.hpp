// The `profinite` command: module subcommands, run reports, exit codes.
//
// Every successful command prints a report:
//
//   # profinite report format-version=1
//   # command: <arguments>
//   # digest: fnv1a64:<hex digest of the lines below>
//   <body>
//   RESULT <key>=<value>
//
// Exit codes: 0 success, 1 domain error (diagnostic on stderr), 2 usage.

#ifndef PROFINITE_TOOLS_CLI_HPP_
#define PROFINITE_TOOLS_CLI_HPP_

#include <CLI11.hpp>

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <profinite/profinite.hpp>

namespace profinite::cli {

inline constexpr int kFormatVersion = 1;

struct Report {
  std::string body;     // newline-terminated lines
  std::string result;   // "<key>=<value>"
  std::string artifact; // file content for --out, if the command has one

  void line(const std::string& s) { body += s + "\n"; }
};

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s)
    h = (h ^ c) * 1099511628211ull;
  return h;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    fail("cli.IoError", "cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Write to a sibling temporary, then rename over the target.
inline void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      fail("cli.IoError", "cannot write " + tmp);
    out << content;
    out.flush();
    if (!out) {
      std::remove(tmp.c_str());
      fail("cli.IoError", "write to " + tmp + " failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::remove(tmp.c_str());
    fail("cli.IoError", "cannot rename " + tmp + " to " + path);
  }
}

inline std::vector<std::size_t> parse_list(const std::string& text, const std::string& what) {
  std::vector<std::size_t> out;
  if (text.empty())
    return out;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    const std::string tok = text.substr(start, end - start);
    std::size_t v = 0;
    const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || p != tok.data() + tok.size())
      fail("cli.SyntaxError", "bad " + what + " list '" + text + "'");
    out.push_back(v);
    if (end == text.size())
      break;
    start = end + 1;
  }
  return out;
}

inline std::string render_list(const std::vector<std::size_t>& v) {
  std::string out;
  for (std::size_t i = 0; i != v.size(); ++i)
    out += (i ? "," : "") + std::to_string(v[i]);
  return out.empty() ? "-" : out;
}

inline std::string yes_no(bool b) { return b ? "true" : "false"; }

inline void describe(Report& r, const std::string& name, const LatticeElement& l) {
  r.line(name + " support=" + std::to_string(l.support) + " order=" +
         std::to_string(l.target.order()));
}

// Commands producing a lattice element print it in full unless --out
// takes it.
// The file format holds dense tables only.
inline void attach_element(Report& r, const LatticeElement& l) {
  if (l.target.order() > kMaxTabulatedOrder) {
    r.line("table=omitted (order above " + std::to_string(kMaxTabulatedOrder) + ")");
    return;
  }
  r.artifact = write_lattice_element(l);
}

namespace cmd {

inline Report lattice_enum(std::size_t i) {
  Report r;
  const LatticeElement l = enumerate(i);
  describe(r, "L" + std::to_string(i), l);
  attach_element(r, l);
  r.result = "order=" + std::to_string(l.target.order());
  return r;
}

inline Report lattice_leq(std::size_t i, std::size_t j) {
  Report r;
  const bool v = leq(enumerate(i), enumerate(j));
  r.line(yes_no(v));
  r.result = "leq=" + yes_no(v);
  return r;
}

inline Report lattice_meet_join(bool is_meet, std::size_t i, std::size_t j) {
  Report r;
  const LatticeElement a = enumerate(i), b = enumerate(j);
  const LatticeElement m = is_meet ? meet(a, b) : join(a, b);
  describe(r, is_meet ? "meet" : "join", m);
  const auto idx = LatticeEnumeration::instance().find(m, 200);
  r.line("index=" + (idx ? std::to_string(*idx) : std::string("beyond-200")));
  attach_element(r, m);
  r.result = "order=" + std::to_string(m.target.order());
  return r;
}

inline Report lattice_base(std::size_t n) {
  Report r;
  const LatticeElement b = base_element(n);
  describe(r, "B" + std::to_string(n), b);
  r.line("last-index=" + std::to_string(LatticeEnumeration::instance().base_index(n)));
  attach_element(r, b);
  r.result = "order=" + std::to_string(b.target.order());
  return r;
}

inline Report lattice_delta(const std::string& g, const std::string& h, std::size_t precision) {
  Report r;
  const Word wg = parse_word(g), wh = parse_word(h);
  r.line("g=" + render(wg));
  r.line("h=" + render(wh));
  const Dyadic d = delta(wg, wh, precision);
  r.result = "delta=" + render(d);
  return r;
}

inline Report filter_quotient(const std::string& file, std::size_t level) {
  Report r;
  const FilterChain chain = read_filter(read_file(file));
  const FiniteGroup q = quotient_at(chain, level);
  r.line("level=" + std::to_string(level) + " order=" + std::to_string(q.order()) +
         " abelian=" + yes_no(is_abelian(q)));
  r.artifact = write_group(q);
  r.result = "order=" + std::to_string(q.order());
  return r;
}

inline Report filter_principal(const std::string& file, std::size_t depth) {
  Report r;
  const FilterChain chain = read_filter(read_file(file));
  const bool v = is_principal_up_to(chain, depth);
  r.result = "principal=" + yes_no(v);
  return r;
}

inline Report filter_hausdorff(const std::string& a, const std::string& b, std::size_t level) {
  Report r;
  const FilterChain fr = read_filter(read_file(a)), fs = read_filter(read_file(b));
  const bool v = hausdorff_level(fr, fs, level);
  r.line("neighbourhood order=" + std::to_string(neighbourhood(level).target.order()));
  r.result = "within=" + yes_no(v);
  return r;
}

inline MeklerContextPtr context(const std::string& graph_file, std::size_t p) {
  return make_mekler_context(read_graph(read_file(graph_file)), p);
}

inline Report mekler_nice(const std::string& graph_file) {
  Report r;
  const Graph g = read_graph(read_file(graph_file));
  const NiceReport n = is_nice(g);
  static const char* names[] = {"none", "triangle", "square", "unseparated"};
  std::string w;
  for (std::size_t v : n.witness)
    w += (w.empty() ? "" : ",") + std::to_string(v);
  r.line("vertices=" + std::to_string(g.size()) + " edges=" + std::to_string(g.edges().size()));
  if (!n.nice())
    r.line(std::string("violation=") + names[int(n.failure)] + " witness=" + w);
  r.result = "nice=" + yes_no(n.nice());
  return r;
}

inline Report mekler_binary(const std::string& op, const std::string& a, const std::string& b,
                            const MeklerContextPtr& ctx) {
  Report r;
  const MeklerElement u = parse_element(a, ctx), w = parse_element(b, ctx);
  const MeklerElement v = op == "mul" ? multiply(u, w) : commutator_formula(u, w);
  if (op == "comm" && !(v == commutator_oracle(u, w)))
    fail("mekler.InternalError", "commutator formula and direct product disagree");
  r.line("u=" + render(u));
  r.line("w=" + render(w));
  r.result = op + "=" + render(v);
  return r;
}

inline Report mekler_inv(const std::string& a, const MeklerContextPtr& ctx) {
  Report r;
  const MeklerElement u = parse_element(a, ctx);
  r.line("u=" + render(u));
  r.result = "inv=" + render(inverse(u));
  return r;
}

inline Report mekler_classify(const std::vector<std::string>& elts, const MeklerContextPtr& ctx) {
  Report r;
  for (const auto& text : elts) {
    const MeklerElement v = parse_element(text, ctx);
    r.line(render(v) + " " + render(case_classify(v)) + " size=" + std::to_string(class_size(v)));
  }
  r.result = "classified=" + std::to_string(elts.size());
  return r;
}

inline Report mekler_gamma2(const std::string& graph_file, std::size_t p) {
  Report r;
  const Graph a = read_graph(read_file(graph_file));
  const Gamma2Result g = gamma2(a, p);
  r.line("classes=" + std::to_string(g.classes.size()));
  for (std::size_t c = 0; c != g.classes.size(); ++c)
    r.line("class " + std::to_string(c) + " vertex=" +
           (g.vertex_of_class[c] ? std::to_string(*g.vertex_of_class[c]) : std::string("none")) +
           " size=" + std::to_string(g.classes[c].size()));
  for (const auto& [i, j] : g.class_edges)
    r.line("edge " + std::to_string(i) + " " + std::to_string(j));
  r.result = "isomorphic=" + yes_no(g.isomorphic);
  return r;
}

struct TreeSource {
  std::string filter_file;
  std::string branching;
};

inline Report cantor_tree(const std::string& file, std::size_t depth) {
  Report r;
  const CosetTree t = build_tree(read_filter(read_file(file)), depth);
  r.artifact = write_tree(t);
  r.result = "branching=" + render_list(t.branching);
  return r;
}

inline std::vector<std::size_t> branching_of(const TreeSource& src, std::size_t depth) {
  if (!src.branching.empty())
    return parse_list(src.branching, "branching");
  if (src.filter_file.empty())
    fail("cli.MissingInput", "give --branching or --filter");
  return build_tree(read_filter(read_file(src.filter_file)), depth).branching;
}

inline Report cantor_encode(const std::string& digits, const TreeSource& src) {
  Report r;
  const auto sigma = parse_list(digits, "digit");
  const auto k = branching_of(src, sigma.size());
  r.line("branching=" + render_list(k));
  const std::string bits = encode_F(k, sigma);
  r.result = "bits=" + (bits.empty() ? std::string("-") : bits);
  return r;
}

inline Report cantor_rho(const std::string& z, const std::string& w, std::size_t level,
                         const std::string& filter_file) {
  Report r;
  const CosetTree t = build_tree(read_filter(read_file(filter_file)), level);
  const TreePath y = rho(t, parse_list(z, "digit"), parse_list(w, "digit"), level);
  r.line("branching=" + render_list(t.branching));
  r.result = "rho=" + render_list(y);
  return r;
}

inline Report cantor_verify(std::size_t level, const std::string& filter_file, bool exhaustive,
                            std::size_t samples) {
  Report r;
  const CosetTree t = build_tree(read_filter(read_file(filter_file)), level);
  const DifferenceReport d = verify_difference_axioms(t, level, samples, exhaustive);
  r.line("points=" + std::to_string(d.points) + " checks=" + std::to_string(d.checks) +
         " mode=" + (d.exhaustive ? "exhaustive" : "sampled"));
  for (const auto& v : d.violations)
    r.line("violation " + v);
  r.result = "axioms=" + std::string(d.ok() ? "pass" : "fail");
  return r;
}

inline Report slfam_build(const std::string& primes, std::size_t level) {
  Report r;
  const PrimeSet p = make_prime_set(parse_list(primes, "prime"));
  const FiniteGroup g = gP_level(p, level);
  r.line("primes=" + render_list(p) + " level=" + std::to_string(level));
  r.artifact = write_group(g);
  r.result = "order=" + std::to_string(g.order());
  return r;
}

inline Report slfam_detect(const std::string& file, const std::string& candidates) {
  Report r;
  const FiniteGroup g = read_group(read_file(file));
  const PrimeSet found = primes_detected(g, parse_list(candidates, "prime"));
  r.line("order=" + std::to_string(g.order()));
  r.result = "primes=" + render_list(found);
  return r;
}

inline Report slfam_distinguish(const std::string& p, const std::string& q) {
  Report r;
  const auto level = distinguishing_level(parse_list(p, "prime"), parse_list(q, "prime"));
  r.result = "level=" + (level ? std::to_string(*level) : std::string("Equal"));
  return r;
}

inline Report slfam_ut3(std::size_t p) {
  Report r;
  const FiniteGroup g = ut3(p);
  std::size_t exponent = 1;
  for (Elem x = 0; x != g.order(); ++x)
    exponent = std::lcm(exponent, element_order(g, x));
  r.line("order=" + std::to_string(g.order()) + " exponent=" + std::to_string(exponent) +
         " abelian=" + yes_no(is_abelian(g)));
  r.artifact = write_group(g);
  r.result = "order=" + std::to_string(g.order());
  return r;
}

} // namespace cmd

inline std::string render_report(const std::vector<std::string>& args, const Report& r,
                                 bool include_artifact) {
  std::string command;
  for (const auto& a : args)
    command += (command.empty() ? "" : " ") + a;
  std::string body = r.body;
  if (include_artifact)
    body += r.artifact;
  body += "RESULT " + r.result + "\n";
  std::ostringstream head;
  head << "# profinite report format-version=" << kFormatVersion << "\n"
       << "# command: " << command << "\n"
       << "# digest: fnv1a64:" << std::hex << std::setw(16) << std::setfill('0')
       << fnv1a64(body) << "\n";
  return head.str() + body;
}

// args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-quotient computations for profinite groups", "profinite"};
  app.require_subcommand(1);
  app.fallthrough();
  int format_version = kFormatVersion;
  std::string out_file;
  app.add_option("--format-version", format_version, "Pin the report format revision");
  app.add_option("--out", out_file, "Write the artifact (or the report) to this file atomically");

  std::function<Report()> action;
  // Option storage; each leaf reads only its own.
  std::size_t i = 0, j = 0, n = 0, p = 3, precision = 8, samples = 2000;
  std::string a, b, file, file2, graph_file, list_a, list_b;
  std::vector<std::string> elts;
  bool exhaustive = false;
  cmd::TreeSource source;

  auto* lattice = app.add_subcommand("lattice", "The lattice of open normal subgroups");
  lattice->require_subcommand(1);
  auto* l_enum = lattice->add_subcommand("enum", "The i-th enumerated element");
  l_enum->add_option("i", i)->required();
  l_enum->callback([&] { action = [&] { return cmd::lattice_enum(i); }; });
  auto* l_leq = lattice->add_subcommand("leq", "Is ker L_i inside ker L_j");
  l_leq->add_option("i", i)->required();
  l_leq->add_option("j", j)->required();
  l_leq->callback([&] { action = [&] { return cmd::lattice_leq(i, j); }; });
  for (const char* name : {"meet", "join"}) {
    auto* s = lattice->add_subcommand(name, std::string(name) + " of L_i and L_j");
    s->add_option("i", i)->required();
    s->add_option("j", j)->required();
    const bool is_meet = std::string(name) == "meet";
    s->callback([&, is_meet] { action = [&, is_meet] { return cmd::lattice_meet_join(is_meet, i, j); }; });
  }
  auto* l_base = lattice->add_subcommand("base", "The n-th base neighbourhood element");
  l_base->add_option("n", n)->required();
  l_base->callback([&] { action = [&] { return cmd::lattice_base(n); }; });
  auto* l_delta = lattice->add_subcommand("delta", "Distance between two words");
  l_delta->add_option("first", a, "First word")->required();
  l_delta->add_option("second", b, "Second word")->required();
  l_delta->add_option("--precision", precision);
  l_delta->callback([&] { action = [&] { return cmd::lattice_delta(a, b, precision); }; });

  auto* filter = app.add_subcommand("filter", "Filter chains read from files");
  filter->require_subcommand(1);
  auto* f_quot = filter->add_subcommand("quotient", "Finite quotient at a level");
  f_quot->add_option("file", file)->required();
  f_quot->add_option("--level", n)->required();
  f_quot->callback([&] { action = [&] { return cmd::filter_quotient(file, n); }; });
  auto* f_princ = filter->add_subcommand("principal", "Stabilization up to a depth");
  f_princ->add_option("file", file)->required();
  f_princ->add_option("--depth", n)->required();
  f_princ->callback([&] { action = [&] { return cmd::filter_principal(file, n); }; });
  auto* f_haus = filter->add_subcommand("hausdorff", "Hausdorff distance at most 2^-n");
  f_haus->add_option("r", file)->required();
  f_haus->add_option("s", file2)->required();
  f_haus->add_option("--level", n)->required();
  f_haus->callback([&] { action = [&] { return cmd::filter_hausdorff(file, file2, n); }; });

  auto* mekler = app.add_subcommand("mekler", "Nil-2 exponent-p graph groups");
  mekler->require_subcommand(1);
  auto* m_nice = mekler->add_subcommand("nice", "Check niceness of a graph");
  m_nice->add_option("graph", graph_file)->required();
  m_nice->callback([&] { action = [&] { return cmd::mekler_nice(graph_file); }; });
  for (const char* name : {"mul", "comm"}) {
    auto* s = mekler->add_subcommand(name, std::string(name == std::string("mul") ? "Product" : "Commutator"));
    s->add_option("u", a)->required();
    s->add_option("w", b)->required();
    s->add_option("--graph", graph_file)->required();
    s->add_option("--p", p)->required();
    const std::string op = name;
    s->callback([&, op] {
      action = [&, op] { return cmd::mekler_binary(op, a, b, cmd::context(graph_file, p)); };
    });
  }
  auto* m_inv = mekler->add_subcommand("inv", "Inverse");
  m_inv->add_option("u", a)->required();
  m_inv->add_option("--graph", graph_file)->required();
  m_inv->add_option("--p", p)->required();
  m_inv->callback([&] { action = [&] { return cmd::mekler_inv(a, cmd::context(graph_file, p)); }; });
  auto* m_class = mekler->add_subcommand("classify", "Case tag and class size");
  m_class->add_option("elements", elts)->required();
  m_class->add_option("--graph", graph_file)->required();
  m_class->add_option("--p", p)->required();
  m_class->callback(
      [&] { action = [&] { return cmd::mekler_classify(elts, cmd::context(graph_file, p)); }; });
  auto* m_g2 = mekler->add_subcommand("gamma2", "Recover the graph from its group");
  m_g2->add_option("--graph", graph_file)->required();
  m_g2->add_option("--p", p)->required();
  m_g2->callback([&] { action = [&] { return cmd::mekler_gamma2(graph_file, p); }; });

  auto* cantor = app.add_subcommand("cantor", "Coset trees and the Cantor-space encoding");
  cantor->require_subcommand(1);
  auto* c_tree = cantor->add_subcommand("tree", "Branching and representatives");
  c_tree->add_option("filter", file)->required();
  c_tree->add_option("--depth", n)->required();
  c_tree->callback([&] { action = [&] { return cmd::cantor_tree(file, n); }; });
  auto* c_enc = cantor->add_subcommand("encode", "Binary encoding of a digit path");
  c_enc->add_option("digits", a)->required();
  auto* enc_b = c_enc->add_option("--branching", source.branching);
  c_enc->add_option("--filter", source.filter_file)->excludes(enc_b);
  c_enc->callback([&] { action = [&] { return cmd::cantor_encode(a, source); }; });
  auto* c_rho = cantor->add_subcommand("rho", "Group difference of two paths");
  c_rho->add_option("z", a)->required();
  c_rho->add_option("w", b)->required();
  c_rho->add_option("--level", n)->required();
  c_rho->add_option("--filter", file)->required();
  c_rho->callback([&] { action = [&] { return cmd::cantor_rho(a, b, n, file); }; });
  auto* c_ver = cantor->add_subcommand("verify", "Difference-operation axioms at a level");
  c_ver->add_option("--level", n)->required();
  c_ver->add_option("--filter", file)->required();
  c_ver->add_flag("--exhaustive", exhaustive);
  c_ver->add_option("--samples", samples);
  c_ver->callback([&] { action = [&] { return cmd::cantor_verify(n, file, exhaustive, samples); }; });

  auto* slfam = app.add_subcommand("slfam", "Products of SL2 levels");
  slfam->require_subcommand(1);
  auto* s_build = slfam->add_subcommand("build", "Level-k quotient of G_P");
  s_build->add_option("--primes", list_a)->required();
  s_build->add_option("--level", n)->required();
  s_build->callback([&] { action = [&] { return cmd::slfam_build(list_a, n); }; });
  auto* s_detect = slfam->add_subcommand("detect", "Primes p with an epimorphism onto SL2(Z/p)");
  s_detect->add_option("group", file)->required();
  s_detect->add_option("--candidates", list_a)->required();
  s_detect->callback([&] { action = [&] { return cmd::slfam_detect(file, list_a); }; });
  auto* s_dist = slfam->add_subcommand("distinguish", "Least level separating G_P and G_Q");
  s_dist->add_option("--p", list_a)->required();
  s_dist->add_option("--q", list_b)->required();
  s_dist->callback([&] { action = [&] { return cmd::slfam_distinguish(list_a, list_b); }; });
  auto* s_ut3 = slfam->add_subcommand("ut3", "Unitriangular 3x3 matrices over Z/p");
  s_ut3->add_option("--p", p)->required();
  s_ut3->callback([&] { action = [&] { return cmd::slfam_ut3(p); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  if (format_version != kFormatVersion) {
    err << "error: unsupported --format-version " << format_version << " (supported: "
        << kFormatVersion << ")\n";
    return 2;
  }
  if (!action) {
    err << app.help();
    return 2;
  }

  try {
    const Report r = action();
    const bool to_file = !out_file.empty();
    const std::string report = render_report(args, r, !to_file);
    if (to_file)
      write_file_atomic(out_file, r.artifact.empty() ? report : r.artifact);
    out << report;
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::bad_alloc&) {
    err << "error: cli.OutOfMemory: computation exceeded available memory\n";
    return 1;
  }
}

} // namespace profinite::cli

#endif
