// Command-line front end.
//
// Exit codes: 0 success or predicate true, 1 predicate false,
// 2 usage or parse error, 3 resource bound exceeded.

#include <CLI11.hpp>

#include <algorithm>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

#include "tg/conjugacy.hpp"
#include "tg/decision.hpp"
#include "tg/dsl.hpp"
#include "tg/errors.hpp"
#include "tg/kernels.hpp"
#include "tg/presentation.hpp"
#include "tg/quotient.hpp"
#include "tg/schreier.hpp"
#include "tg/spectrum.hpp"

namespace {

using namespace tg;

constexpr int kTrue = 0, kFalse = 1, kUsage = 2, kResource = 3;

Group load_group(const std::string& arg) {
  if (std::filesystem::exists(arg)) {
    auto f = load_group_file(arg);
    if (!f.group) throw ParseError("'" + arg + "' defines no group");
    return Group(*f.group);
  }
  return builtin(arg);
}

std::string join(const std::vector<std::size_t>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "]";
}

std::string join_spaced(const std::vector<std::uint64_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

struct Options {
  std::string group, word, word2;
  std::size_t bound = 4096;
  std::size_t level = 1, from = 0, kmax = 9, depth = 2, radius = 4;
  bool order = false, ranks = false, derived = false, suborbits = false, hausdorff = false;
  bool growth = false, diameter = false, substitution = false, closed_form = false;
  bool verify = false, mutations = false, sections = false;
  std::string dot, csv, name, file;
};

int cmd_eval(const Options& o) {
  Group g = load_group(o.group);
  Word w = g.parse(o.word);
  auto d = g.decompose(w);
  std::cout << "reduced: " << g.format(w) << "\n";
  std::cout << "root: " << d.root.to_string() << "\n";
  if (o.sections) {
    std::cout << "sections:";
    for (const auto& s : d.sections) std::cout << " " << g.format(s, d.next_layer);
    std::cout << "\n";
  }
  return kTrue;
}

int cmd_trivial(const Options& o) {
  Group g = load_group(o.group);
  Decider d(g);
  bool t = d.is_trivial(g.parse(o.word));
  std::cout << (t ? "trivial" : "nontrivial") << "\n";
  return t ? kTrue : kFalse;
}

int cmd_equal(const Options& o) {
  Group g = load_group(o.group);
  Decider d(g);
  bool e = d.equal(g.parse(o.word), g.parse(o.word2));
  std::cout << (e ? "equal" : "different") << "\n";
  return e ? kTrue : kFalse;
}

int cmd_order(const Options& o) {
  Group g = load_group(o.group);
  Decider d(g);
  Word w = g.parse(o.word);
  auto r = d.order(w, o.bound);
  if (r.finite()) {
    std::cout << r.order << "\n";
    return kTrue;
  }
  if (r.infinite()) {
    std::cout << "infinite";
    if (r.certificate) {
      const auto& c = *r.certificate;
      std::cout << " (section of " << g.format(c.h, c.h_layer) << "^" << c.power << " at "
                << vertex_to_string(c.vertex) << " is conjugate to " << g.format(c.h, c.h_layer)
                << (c.sign < 0 ? "^-1" : "") << ")";
    }
    std::cout << "\n";
    return kTrue;
  }
  std::cout << "unknown" << (r.note.empty() ? "" : ": " + r.note) << "\n";
  return kResource;
}

int cmd_conj(const Options& o) {
  Group g = load_group(o.group);
  GgConjugacy c(g);
  auto q = c.q_set(g.parse(o.word), g.parse(o.word2));
  std::cout << "Q = " << c.format(q) << "\n";
  std::cout << (q.empty() ? "not conjugate" : "conjugate") << "\n";
  return q.empty() ? kFalse : kTrue;
}

int cmd_quotient(const Options& o) {
  Group g = load_group(o.group);
  LevelQuotient q(g, o.level);
  const int p = q.perms().prime();
  bool any = o.ranks || o.derived || o.suborbits || o.hausdorff;
  if (o.order || !any) std::cout << "order: " << format_order(q.order(), p) << "\n";
  if (o.ranks) {
    std::cout << "lower central ranks: " << join(q.lower_central_ranks(o.kmax)) << "\n";
    std::cout << "nilpotency class: " << q.nilpotency_class() << "\n";
  }
  if (o.derived) {
    std::cout << "derived series:";
    for (const auto& x : q.derived_series(o.kmax)) std::cout << " " << format_order(x, p);
    std::cout << "\n";
  }
  if (o.suborbits) std::cout << "suborbits: " << join(q.suborbit_profile()) << "\n";
  if (o.hausdorff) std::cout << "hausdorff ratio: " << q.hausdorff_ratio() << "\n";
  return kTrue;
}

int cmd_schreier(const Options& o) {
  Group g = load_group(o.group);
  SchreierGraph gr = schreier_graph(g, o.level);
  std::cout << "vertices: " << gr.vertex_count() << "\n";
  if (!o.dot.empty()) {
    std::ofstream out(o.dot);
    if (!out) throw Error("cannot write '" + o.dot + "'");
    write_dot(out, gr);
  }
  if (o.growth || o.diameter) {
    auto gg = graph_growth(gr);
    if (o.diameter) std::cout << "diameter: " << gg.diameter << "\n";
    if (o.growth) std::cout << "growth: " << join_spaced(gg.series) << "\n";
  }
  if (o.substitution) {
    auto sub = substitutional_graph(substitution_system(g.name()), o.level);
    bool same = sub == gr;
    std::cout << "substitution graph " << (same ? "matches" : "differs from") << " the direct construction\n";
    return same ? kTrue : kFalse;
  }
  return kTrue;
}

int cmd_spectrum(const Options& o) {
  Group g = load_group(o.group);
  const std::size_t lo = o.from ? o.from : o.level;
  if (lo > o.level) throw ValidationError("--from exceeds --level");
  std::vector<SpectralReport> reports(o.level - lo + 1);
  std::vector<std::exception_ptr> errors(reports.size());
  // distinct levels are independent
#pragma omp parallel for schedule(dynamic) if (reports.size() > 1)
  for (std::size_t i = 0; i < reports.size(); ++i) {
    try {
      reports[i] = spectrum(g, lo + i, false);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  bool ok = true;
  for (const auto& r : reports) {
    std::cout << "level " << r.level << ":";
    if (r.eigenvalues.size() <= 16)
      for (double x : r.eigenvalues) std::cout << " " << x;
    else
      std::cout << " " << r.eigenvalues.size() << " eigenvalues in [" << r.eigenvalues.front() << ", "
                << r.eigenvalues.back() << "]";
    std::cout << "\n";
    if (o.closed_form) {
      if (r.reference.empty()) {
        std::cout << "  no closed form known for " << r.group << "\n";
      } else {
        std::cout << "  max deviation from the " << (r.exact_reference ? "closed form" : "reference set") << ": "
                  << r.max_deviation << "\n";
        ok = ok && r.max_deviation < kSpectrumTolerance;
      }
    }
  }
  if (!o.csv.empty()) {
    std::ofstream out(o.csv);
    if (!out) throw Error("cannot write '" + o.csv + "'");
    write_spectrum_csv(out, reports);
  }
  return ok ? kTrue : kFalse;
}

int cmd_present(const Options& o) {
  EndomorphicPresentation p;
  std::unique_ptr<Group> g;
  if (!o.file.empty()) {
    auto f = load_group_file(o.file);
    if (f.presentations.empty()) throw ParseError("'" + o.file + "' declares no presentation");
    auto it = f.presentations.begin();
    if (!o.name.empty()) {
      it = std::find_if(f.presentations.begin(), f.presentations.end(),
                        [&](const EndomorphicPresentation& x) { return x.name == o.name; });
      if (it == f.presentations.end()) throw ParseError("no presentation '" + o.name + "' in '" + o.file + "'");
    }
    p = *it;
    if (f.group && f.group->name == p.group) g = std::make_unique<Group>(*f.group);
  } else if (!o.name.empty()) {
    p = builtin_presentation(o.name);
  } else {
    throw ParseError("present needs --name or --file");
  }
  auto rels = expand_labeled(p, o.depth);
  for (const auto& r : rels) std::cout << r.origin << ": " << p.format(r.word) << "\n";
  if (!o.verify && !o.mutations) return kTrue;
  if (!g) g = std::make_unique<Group>(builtin(p.group));
  Decider d(*g);
  int code = kTrue;
  if (o.verify) {
    auto rep = verify(p, d, o.depth);
    if (rep.all_trivial) {
      std::cout << "all " << rep.total << " relators trivial in " << g->name() << "\n";
    } else {
      std::cout << "relator " << rep.failing->origin << " is nontrivial in " << g->name() << "\n";
      code = kFalse;
    }
  }
  if (o.mutations) {
    auto m = mutation_control(p, d, std::min<std::size_t>(o.depth, 2));
    std::cout << "mutations nontrivial: " << m.nontrivial << "/" << m.tested << "\n";
  }
  return code;
}

int cmd_ball(const Options& o) {
  Group g = load_group(o.group);
  auto b = ball(g, o.radius);
  std::cout << "sphere sizes: " << join(b.sphere_sizes) << "\n";
  std::cout << "ball size: " << b.elements.size() << "\n";
  return kTrue;
}

int cmd_torsion_growth(const Options& o) {
  Group g = load_group(o.group);
  std::cout << torsion_growth(g, o.radius) << "\n";
  return kTrue;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"computations in groups acting on rooted trees"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);

  Options o;
  auto group_arg = [&](CLI::App* c) {
    c->add_option("group", o.group, "builtin name or group file")->required();
  };
  auto word_arg = [&](CLI::App* c, std::string& w, const char* name) {
    c->add_option(name, w, "word, e.g. \"(ad)^4\" or \"a b' c^-1\"")->required();
  };

  auto* eval = app.add_subcommand("eval", "reduce a word and show its decomposition");
  group_arg(eval);
  word_arg(eval, o.word, "word");
  eval->add_flag("--sections", o.sections, "print first-level sections");

  auto* trivial = app.add_subcommand("trivial", "decide whether a word is trivial");
  group_arg(trivial);
  word_arg(trivial, o.word, "word");

  auto* equal = app.add_subcommand("equal", "decide whether two words are equal");
  group_arg(equal);
  word_arg(equal, o.word, "x");
  word_arg(equal, o.word2, "y");

  auto* order = app.add_subcommand("order", "order of an element");
  group_arg(order);
  word_arg(order, o.word, "word");
  order->add_option("--bound", o.bound, "recursion node cap")->capture_default_str();

  auto* conj = app.add_subcommand("conj", "conjugacy in the first Grigorchuk group");
  group_arg(conj);
  word_arg(conj, o.word, "x");
  word_arg(conj, o.word2, "y");

  auto* quotient = app.add_subcommand("quotient", "level quotient G/Stab(L_n)");
  group_arg(quotient);
  quotient->add_option("--level", o.level, "tree level")->required();
  quotient->add_flag("--order", o.order, "order (default)");
  quotient->add_flag("--ranks", o.ranks, "lower central ranks and nilpotency class");
  quotient->add_option("--kmax", o.kmax, "number of series terms")->capture_default_str();
  quotient->add_flag("--derived", o.derived, "derived series orders");
  quotient->add_flag("--suborbits", o.suborbits, "suborbit sizes of the basepoint stabilizer");
  quotient->add_flag("--hausdorff", o.hausdorff, "log-order ratio");

  auto* schreier = app.add_subcommand("schreier", "Schreier graph on a level");
  group_arg(schreier);
  schreier->add_option("--level", o.level, "tree level")->required();
  schreier->add_option("--dot", o.dot, "write DOT to PATH");
  schreier->add_flag("--growth", o.growth, "sphere sizes around the basepoint");
  schreier->add_flag("--diameter", o.diameter, "graph diameter");
  schreier->add_flag("--substitution", o.substitution, "compare with the substitution-rule expansion");

  auto* spectrum_cmd = app.add_subcommand("spectrum", "spectrum of the Hecke-Laplace operator");
  group_arg(spectrum_cmd);
  spectrum_cmd->add_option("--level", o.level, "tree level (last level with --from)")->required();
  spectrum_cmd->add_option("--from", o.from, "first level");
  spectrum_cmd->add_option("--csv", o.csv, "write CSV to PATH");
  spectrum_cmd->add_flag("--closed-form", o.closed_form, "compare with the known spectrum");

  auto* present = app.add_subcommand("present", "expand and verify an endomorphic presentation");
  present->add_option("--name", o.name, "builtin presentation, or one in --file");
  present->add_option("--file", o.file, "group file with presentations");
  present->add_option("--depth", o.depth, "substitution depth")->capture_default_str();
  present->add_flag("--verify", o.verify, "check triviality of every relator");
  present->add_flag("--mutations", o.mutations, "single-letter mutation control");

  auto* ball_cmd = app.add_subcommand("ball", "sphere sizes of the Cayley ball");
  group_arg(ball_cmd);
  ball_cmd->add_option("--radius", o.radius, "radius")->capture_default_str();

  auto* torsion = app.add_subcommand("torsion-growth", "largest element order in the ball");
  group_arg(torsion);
  torsion->add_option("--radius", o.radius, "radius")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }
  kernels::set_threads(threads);

  try {
    if (*eval) return cmd_eval(o);
    if (*trivial) return cmd_trivial(o);
    if (*equal) return cmd_equal(o);
    if (*order) return cmd_order(o);
    if (*conj) return cmd_conj(o);
    if (*quotient) return cmd_quotient(o);
    if (*schreier) return cmd_schreier(o);
    if (*spectrum_cmd) return cmd_spectrum(o);
    if (*present) return cmd_present(o);
    if (*ball_cmd) return cmd_ball(o);
    if (*torsion) return cmd_torsion_growth(o);
  } catch (const ResourceBound& e) {
    std::cerr << "tg: " << e.what() << "\n";
    return kResource;
  } catch (const Error& e) {
    std::cerr << "tg: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
