#include "tg/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "tg/errors.hpp"

namespace tg {

namespace {

std::string strip_position(const std::string& what) {
  // "line:col: message" -> "message"
  std::size_t i = 0;
  int colons = 0;
  while (i < what.size() && (std::isdigit(static_cast<unsigned char>(what[i])) || what[i] == ':')) {
    if (what[i] == ':') ++colons;
    ++i;
  }
  if (colons == 2 && i < what.size() && what[i] == ' ') return what.substr(i + 1);
  return what;
}

bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

/// Cursor over one line; columns are 1-based.
class Line {
 public:
  Line(std::string_view text, int number) : s_(text), line_(number) {}

  int number() const { return line_; }
  int column() const { return static_cast<int>(pos_) + 1; }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line_, column()); }
  [[noreturn]] void fail_at(const std::string& what, std::size_t pos) const {
    throw ParseError(what, line_, static_cast<int>(pos) + 1);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool done() {
    skip_ws();
    return pos_ >= s_.size();
  }
  bool peek(char c) {
    skip_ws();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }
  bool accept(std::string_view tok) {
    skip_ws();
    if (s_.substr(pos_, tok.size()) != tok) return false;
    pos_ += tok.size();
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  std::string name() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && is_name_char(s_[pos_])) ++pos_;
    if (start == pos_) fail("expected a name");
    return std::string(s_.substr(start, pos_ - start));
  }
  long long integer() {
    skip_ws();
    std::size_t start = pos_;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
    std::size_t digits = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (digits == pos_) fail_at("expected an integer", start);
    return std::stoll(std::string(s_.substr(start, pos_ - start)));
  }
  std::size_t position() {
    skip_ws();
    return pos_;
  }
  /// Remaining text, trimmed.
  std::string rest() {
    skip_ws();
    std::string r(s_.substr(pos_));
    pos_ = s_.size();
    while (!r.empty() && std::isspace(static_cast<unsigned char>(r.back()))) r.pop_back();
    return r;
  }
  /// Text up to the next top-level separator (not inside brackets), trimmed.
  std::string until(char sep) {
    skip_ws();
    int depth = 0;
    std::size_t start = pos_;
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == '(' || c == '[' || c == '{') ++depth;
      if (c == ')' || c == ']' || c == '}') --depth;
      if (depth == 0 && c == sep) break;
      ++pos_;
    }
    std::string r(s_.substr(start, pos_ - start));
    while (!r.empty() && std::isspace(static_cast<unsigned char>(r.back()))) r.pop_back();
    return r;
  }

 private:
  std::string_view s_;
  int line_;
  std::size_t pos_ = 0;
};

struct PendingLayer {
  LayerSpec spec;
  std::vector<int> lines;  // source line of each generator, for error reports
};

class FileParser {
 public:
  GroupFile run(std::string_view text) {
    int number = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      std::string_view raw = text.substr(start, end - start);
      ++number;
      if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
      Line l(raw, number);
      if (!l.done()) statement(l);
      start = end + 1;
    }
    if (!group_ && file_.presentations.empty()) throw ParseError("empty group file", number, 1);
    if (group_) file_.group = finish_group();
    for (const auto& p : file_.presentations)
      if (p.alphabet.empty()) throw ParseError("presentation '" + p.name + "' has no alphabet", number, 1);
    for (auto& p : file_.presentations)
      if (p.group.empty() && file_.group) p.group = file_.group->name;
    return std::move(file_);
  }

 private:
  void statement(Line& l) {
    std::size_t kw_pos = l.position();
    std::string kw = l.name();
    if (kw == "group") return group_line(l);
    if (kw == "presentation") return presentation_line(l);
    static const std::set<std::string> group_kw{"arity", "phase", "rooted", "recursive", "family", "generators", "prime"};
    static const std::set<std::string> pres_kw{"alphabet", "abbrev", "realize", "fixed", "relator", "substitution"};
    if (group_kw.count(kw)) {
      if (!group_) l.fail_at("'" + kw + "' before any 'group' line", kw_pos);
      if (kw == "arity") return arity_line(l);
      if (kw == "phase") return phase_line(l);
      if (kw == "rooted") return rooted_line(l);
      if (kw == "recursive") return recursive_line(l);
      if (kw == "family") return family_line(l);
      if (kw == "generators") return generators_line(l);
      return prime_line(l);
    }
    if (pres_kw.count(kw)) {
      if (file_.presentations.empty()) l.fail_at("'" + kw + "' before any 'presentation' line", kw_pos);
      auto& p = file_.presentations.back();
      if (kw == "alphabet") return alphabet_line(l, p);
      if (p.alphabet.empty()) l.fail_at("'" + kw + "' before the alphabet", kw_pos);
      if (kw == "abbrev") return abbrev_line(l, p);
      if (kw == "realize") return realize_line(l, p);
      if (kw == "fixed") return p.fixed.push_back(word(l, p)), void();
      if (kw == "relator") return p.iterated.push_back(word(l, p)), void();
      return substitution_line(l, p);
    }
    l.fail_at("unknown directive '" + kw + "'", kw_pos);
  }

  void end_of_line(Line& l) {
    if (!l.done()) l.fail("unexpected trailing text");
  }

  // ------------------------------------------------------------ group part

  void group_line(Line& l) {
    if (group_) l.fail("a file defines at most one group");
    group_ = GroupSpec{};
    group_->name = l.name();
    end_of_line(l);
  }

  void arity_line(Line& l) {
    if (arity_set_) l.fail("arity given twice");
    if (!layers_.empty()) l.fail("arity must precede the generators");
    arity_set_ = true;
    if (l.accept("seq")) {
      std::vector<int> seq;
      while (!l.done() && !l.peek('c')) seq.push_back(static_cast<int>(l.integer()));
      if (!l.accept("cycle")) l.fail("expected 'cycle <k>'");
      auto k = l.integer();
      if (seq.empty()) l.fail("empty arity sequence");
      if (k < 1 || k > static_cast<long long>(seq.size())) l.fail("cycle length out of range");
      std::vector<int> prefix(seq.begin(), seq.end() - k), cycle(seq.end() - k, seq.end());
      try {
        group_->shape = TreeShape(prefix, cycle);
      } catch (const ValidationError& e) {
        l.fail(e.what());
      }
    } else {
      auto m = l.integer();
      if (m < 2) l.fail("arity must be at least 2");
      group_->shape = TreeShape::regular(static_cast<int>(m));
    }
    end_of_line(l);
  }

  void phase_line(Line& l) {
    auto ph = l.integer();
    if (ph < 0 || ph >= group_->shape.phase_count()) l.fail("phase out of range for this tree");
    phase_ = static_cast<int>(ph);
    end_of_line(l);
  }

  PendingLayer& layer() {
    auto& pl = layers_[phase_];
    pl.spec.phase = phase_;
    return pl;
  }

  void check_new_name(Line& l, const std::string& n, std::size_t at) {
    for (const auto& g : layer().spec.gens)
      if (g.name == n) l.fail_at("generator '" + n + "' defined twice", at);
  }

  void rooted_line(Line& l) {
    std::size_t at = l.position();
    GenSpec g;
    g.name = l.name();
    check_new_name(l, g.name, at);
    l.expect('=');
    const int m = group_->shape.arity_of_phase(phase_);
    std::vector<std::vector<std::uint32_t>> cycles;
    std::set<int> used;
    if (!l.peek('(')) l.fail("expected cycle notation");
    while (l.accept('(')) {
      std::vector<std::uint32_t> c;
      while (!l.peek(')')) {
        std::size_t p = l.position();
        auto x = l.integer();
        if (x < 1 || x > m) l.fail_at("point " + std::to_string(x) + " outside 1.." + std::to_string(m), p);
        if (!used.insert(static_cast<int>(x)).second) l.fail_at("point repeated in cycle notation", p);
        c.push_back(static_cast<std::uint32_t>(x - 1));
        l.accept(',');
      }
      l.expect(')');
      if (c.size() >= 2) cycles.push_back(std::move(c));
    }
    g.root = Perm::from_cycles(static_cast<std::size_t>(m), cycles);
    end_of_line(l);
    layer().spec.gens.push_back(std::move(g));
    layer().lines.push_back(l.number());
  }

  void recursive_line(Line& l) {
    std::size_t at = l.position();
    GenSpec g;
    g.name = l.name();
    g.recursive = true;
    check_new_name(l, g.name, at);
    l.expect('=');
    l.expect('(');
    std::size_t tuple_at = l.position();
    while (true) {
      Entry e;
      if (l.peek('1')) {
        l.integer();
        e.gen.clear();
      } else {
        e.gen = l.name();
        if (l.accept('^')) {
          auto k = l.integer();
          if (k == 0) e.gen.clear();
          e.power = static_cast<int>(k);
        }
      }
      g.entries.push_back(std::move(e));
      if (l.accept(')')) break;
      l.expect(',');
    }
    const int m = group_->shape.arity_of_phase(phase_);
    if (static_cast<int>(g.entries.size()) != m)
      l.fail_at("arity mismatch: " + std::to_string(g.entries.size()) + " entries for arity " + std::to_string(m),
                tuple_at);
    if (!l.done()) g.root_name = l.name();
    end_of_line(l);
    layer().spec.gens.push_back(std::move(g));
    layer().lines.push_back(l.number());
  }

  void family_line(Line& l) {
    std::vector<std::string> names;
    while (!l.done()) names.push_back(l.name());
    if (names.empty()) l.fail("empty family");
    layer().spec.families.push_back(std::move(names));
    family_lines_[phase_].push_back(l.number());
  }

  void generators_line(Line& l) {
    if (!group_->generators.empty()) l.fail("generators given twice");
    while (!l.done()) group_->generators.push_back(l.name());
    if (group_->generators.empty()) l.fail("empty generating set");
    generators_line_ = l.number();
  }

  void prime_line(Line& l) {
    auto p = l.integer();
    if (p < 2) l.fail("prime must be at least 2");
    group_->prime = static_cast<int>(p);
    end_of_line(l);
  }

  GroupSpec finish_group() {
    GroupSpec g = std::move(*group_);
    const int phases = g.shape.phase_count();
    if (layers_.empty()) throw ParseError("group '" + g.name + "' has no generators", 1, 1);
    for (int ph = 0; ph < phases; ++ph) {
      if (!layers_.count(ph))
        throw ParseError("phase " + std::to_string(ph) + " of group '" + g.name + "' has no generators", 1, 1);
      g.layers.push_back(layers_[ph].spec);
      g.next_layer.push_back(static_cast<std::uint32_t>(g.shape.next_phase(ph)));
    }
    // every referenced symbol must exist on the right phase
    auto has = [&](int ph, const std::string& n) {
      const auto& gens = g.layers[static_cast<std::size_t>(ph)].gens;
      return std::any_of(gens.begin(), gens.end(), [&](const GenSpec& x) { return x.name == n; });
    };
    for (int ph = 0; ph < phases; ++ph) {
      const auto& ls = layers_[ph];
      const int next = g.shape.next_phase(ph);
      for (std::size_t i = 0; i < ls.spec.gens.size(); ++i) {
        const auto& gen = ls.spec.gens[i];
        for (const auto& e : gen.entries)
          if (!e.gen.empty() && !has(next, e.gen)) throw ParseError("unknown symbol '" + e.gen + "'", ls.lines[i], 1);
        if (!gen.root_name.empty()) {
          const auto& gens = ls.spec.gens;
          auto it = std::find_if(gens.begin(), gens.end(), [&](const GenSpec& x) { return x.name == gen.root_name; });
          if (it == gens.end()) throw ParseError("unknown symbol '" + gen.root_name + "'", ls.lines[i], 1);
          if (it->recursive) throw ParseError("'" + gen.root_name + "' is not a rooted generator", ls.lines[i], 1);
        }
      }
      for (std::size_t f = 0; f < ls.spec.families.size(); ++f)
        for (const auto& n : ls.spec.families[f])
          if (!has(ph, n)) throw ParseError("unknown symbol '" + n + "'", family_lines_[ph][f], 1);
    }
    for (const auto& n : g.generators)
      if (!has(0, n)) throw ParseError("unknown symbol '" + n + "'", generators_line_, 1);
    return g;
  }

  // ------------------------------------------------------------ presentation part

  void presentation_line(Line& l) {
    EndomorphicPresentation p;
    p.name = l.name();
    if (l.accept("over")) p.group = l.name();
    end_of_line(l);
    file_.presentations.push_back(std::move(p));
  }

  void alphabet_line(Line& l, EndomorphicPresentation& p) {
    if (!p.alphabet.empty()) l.fail("alphabet given twice");
    while (!l.done()) {
      std::size_t at = l.position();
      auto n = l.name();
      if (std::find(p.alphabet.begin(), p.alphabet.end(), n) != p.alphabet.end())
        l.fail_at("letter '" + n + "' repeated", at);
      p.alphabet.push_back(n);
    }
    if (p.alphabet.empty()) l.fail("empty alphabet");
  }

  FreeWord parse_word(Line& l, const EndomorphicPresentation& p, const std::string& text, std::size_t at) {
    if (text.empty()) l.fail_at("expected a word", at);
    try {
      return p.parse(text);
    } catch (const ParseError& e) {
      l.fail_at(strip_position(e.what()), at + static_cast<std::size_t>(std::max(e.column(), 1) - 1));
    }
  }

  FreeWord word(Line& l, const EndomorphicPresentation& p) {
    std::size_t at = l.position();
    return parse_word(l, p, l.rest(), at);
  }

  void abbrev_line(Line& l, EndomorphicPresentation& p) {
    std::size_t at = l.position();
    auto n = l.name();
    if (std::find(p.alphabet.begin(), p.alphabet.end(), n) != p.alphabet.end())
      l.fail_at("abbreviation '" + n + "' shadows a letter", at);
    l.expect('=');
    p.abbreviations[n] = word(l, p);
  }

  void realize_line(Line& l, EndomorphicPresentation& p) {
    std::size_t at = l.position();
    auto n = l.name();
    if (std::find(p.alphabet.begin(), p.alphabet.end(), n) == p.alphabet.end())
      l.fail_at("unknown symbol '" + n + "'", at);
    l.expect('=');
    auto text = l.rest();
    if (text.empty()) l.fail("expected a word");
    p.realization[n] = text;
  }

  void substitution_line(Line& l, EndomorphicPresentation& p) {
    Substitution s;
    s.name = l.name();
    for (std::uint32_t i = 0; i < p.alphabet.size(); ++i) s.images.push_back({Letter{i, false}});
    std::set<std::string> seen;
    while (!l.done()) {
      std::size_t at = l.position();
      auto x = l.name();
      auto it = std::find(p.alphabet.begin(), p.alphabet.end(), x);
      if (it == p.alphabet.end()) l.fail_at("unknown symbol '" + x + "'", at);
      if (!seen.insert(x).second) l.fail_at("letter '" + x + "' mapped twice", at);
      if (!l.accept("->")) l.fail("expected '->'");
      std::size_t wat = l.position();
      s.images[static_cast<std::size_t>(it - p.alphabet.begin())] = parse_word(l, p, l.until(','), wat);
      if (!l.accept(',')) break;
    }
    end_of_line(l);
    p.substitutions.push_back(std::move(s));
  }

  GroupFile file_;
  std::optional<GroupSpec> group_;
  bool arity_set_ = false;
  int phase_ = 0;
  std::map<int, PendingLayer> layers_;
  std::map<int, std::vector<int>> family_lines_;
  int generators_line_ = 0;
};

std::string entry_text(const Entry& e) {
  if (e.gen.empty()) return "1";
  if (e.power == 1) return e.gen;
  return e.gen + "^" + std::to_string(e.power);
}

}  // namespace

GroupFile parse_group_file(std::string_view text) { return FileParser().run(text); }

GroupSpec parse_group_definition(std::string_view text) {
  auto f = parse_group_file(text);
  if (!f.group) throw ParseError("file has no 'group' line", 1, 1);
  return std::move(*f.group);
}

GroupFile load_group_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_group_file(ss.str());
}

std::string print_group_spec(const GroupSpec& g) {
  std::ostringstream os;
  os << "group " << g.name << "\n";
  const auto& sh = g.shape;
  if (sh.is_regular()) {
    os << "arity " << sh.cycle()[0] << "\n";
  } else {
    os << "arity seq";
    for (int m : sh.prefix()) os << " " << m;
    for (int m : sh.cycle()) os << " " << m;
    os << " cycle " << sh.cycle().size() << "\n";
  }
  for (std::size_t k = 0; k < g.layers.size(); ++k) {
    const auto& l = g.layers[k];
    if (g.layers.size() > 1) os << "phase " << l.phase << "\n";
    for (const auto& gen : l.gens) {
      if (!gen.recursive) {
        os << "rooted " << gen.name << " = " << gen.root.to_string() << "\n";
        continue;
      }
      os << "recursive " << gen.name << " = (";
      for (std::size_t i = 0; i < gen.entries.size(); ++i) os << (i ? "," : "") << entry_text(gen.entries[i]);
      os << ")";
      if (!gen.root_name.empty()) os << " " << gen.root_name;
      os << "\n";
    }
    for (const auto& fam : l.families) {
      os << "family";
      for (const auto& n : fam) os << " " << n;
      os << "\n";
    }
  }
  if (!g.generators.empty()) {
    os << "generators";
    for (const auto& n : g.generators) os << " " << n;
    os << "\n";
  }
  if (g.prime) os << "prime " << g.prime << "\n";
  return os.str();
}

std::string print_presentation(const EndomorphicPresentation& p) {
  std::ostringstream os;
  os << "presentation " << p.name;
  if (!p.group.empty()) os << " over " << p.group;
  os << "\nalphabet";
  for (const auto& x : p.alphabet) os << " " << x;
  os << "\n";
  for (const auto& [n, w] : p.abbreviations) os << "abbrev " << n << " = " << p.format(w) << "\n";
  for (const auto& [n, w] : p.realization) os << "realize " << n << " = " << w << "\n";
  for (const auto& w : p.fixed) os << "fixed " << p.format(w) << "\n";
  for (const auto& w : p.iterated) os << "relator " << p.format(w) << "\n";
  for (const auto& s : p.substitutions) {
    os << "substitution " << s.name;
    bool first = true;
    for (std::uint32_t i = 0; i < s.images.size(); ++i) {
      if (s.images[i] == FreeWord{Letter{i, false}}) continue;
      os << (first ? " " : ", ") << p.alphabet[i] << " -> " << p.format(s.images[i]);
      first = false;
    }
    os << "\n";
  }
  return os.str();
}

std::string print_group_file(const GroupFile& f) {
  std::string out;
  if (f.group) out += print_group_spec(*f.group);
  for (const auto& p : f.presentations) {
    if (!out.empty()) out += "\n";
    out += print_presentation(p);
  }
  return out;
}

}  // namespace tg
