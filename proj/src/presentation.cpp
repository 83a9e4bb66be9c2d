#include "tg/presentation.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "tg/errors.hpp"

namespace tg {

std::size_t EndomorphicPresentation::letter(const std::string& n) const {
  auto it = std::find(alphabet.begin(), alphabet.end(), n);
  if (it == alphabet.end()) throw ParseError("'" + n + "' is not a letter of presentation " + name);
  return static_cast<std::size_t>(it - alphabet.begin());
}

FreeWord EndomorphicPresentation::parse(const std::string& text) const {
  return free_reduce(parse_free_word(text, alphabet, abbreviations));
}

std::string EndomorphicPresentation::format(const FreeWord& w) const { return format_free_word(w, alphabet); }

Substitution make_substitution(const EndomorphicPresentation& p, const std::string& name,
                               const std::map<std::string, std::string>& images) {
  Substitution s;
  s.name = name;
  for (std::uint32_t i = 0; i < p.alphabet.size(); ++i) s.images.push_back({Letter{i, false}});
  for (const auto& [x, text] : images) s.images[p.letter(x)] = p.parse(text);
  return s;
}

FreeWord apply(const Substitution& s, const FreeWord& w) {
  FreeWord out;
  for (const auto& x : w) {
    if (x.gen >= s.images.size()) throw ShapeMismatch("substitution " + s.name + " does not cover the alphabet");
    const FreeWord& img = s.images[x.gen];
    if (!x.inv) {
      out.insert(out.end(), img.begin(), img.end());
    } else {
      auto inv = free_inverse(img);
      out.insert(out.end(), inv.begin(), inv.end());
    }
  }
  return free_reduce(out);
}

Substitution compose(const Substitution& s, const Substitution& t) {
  Substitution r;
  r.name = t.name + "." + s.name;
  for (const auto& img : s.images) r.images.push_back(apply(t, img));
  return r;
}

std::vector<ExpandedRelator> expand_labeled(const EndomorphicPresentation& p, std::size_t depth) {
  std::vector<ExpandedRelator> out;
  std::set<FreeWord> seen;
  for (std::size_t i = 0; i < p.fixed.size(); ++i) {
    auto w = free_reduce(p.fixed[i]);
    if (seen.insert(w).second) out.push_back({w, "Q" + std::to_string(i + 1)});
  }
  std::vector<ExpandedRelator> frontier;
  for (std::size_t i = 0; i < p.iterated.size(); ++i) {
    auto w = free_reduce(p.iterated[i]);
    if (seen.insert(w).second) frontier.push_back({w, "R" + std::to_string(i + 1)});
  }
  for (std::size_t k = 0;; ++k) {
    out.insert(out.end(), frontier.begin(), frontier.end());
    if (k == depth || frontier.empty()) break;
    std::vector<ExpandedRelator> next;
    for (const auto& r : frontier)
      for (const auto& s : p.substitutions) {
        auto w = apply(s, r.word);
        if (seen.insert(w).second) next.push_back({std::move(w), s.name + "(" + r.origin + ")"});
      }
    frontier = std::move(next);
  }
  return out;
}

std::vector<FreeWord> expand(const EndomorphicPresentation& p, std::size_t depth) {
  std::vector<FreeWord> out;
  for (auto& r : expand_labeled(p, depth)) out.push_back(std::move(r.word));
  return out;
}

std::vector<Word> realize(const EndomorphicPresentation& p, const Group& g) {
  const auto& names = g.layer(0).named_names;
  std::vector<Word> out;
  for (const auto& x : p.alphabet) {
    auto it = p.realization.find(x);
    const std::string text = it == p.realization.end() ? x : it->second;
    FreeWord w;
    try {
      w = parse_free_word(text, names);
    } catch (const ParseError& e) {
      throw ShapeMismatch("alphabet mismatch: letter '" + x + "' of " + p.name + " has no image in " + g.name() +
                          " (" + e.what() + ")");
    }
    out.push_back(g.from_free(w));
  }
  return out;
}

Word realize(const FreeWord& w, const std::vector<Word>& letters, const Group& g) {
  std::vector<Word> inverses;
  inverses.reserve(letters.size());
  for (const auto& l : letters) inverses.push_back(g.inverse(l));
  Word out;
  for (const auto& x : w) {
    if (x.gen >= letters.size()) throw ShapeMismatch("letter outside the presentation alphabet");
    const Word& piece = x.inv ? inverses[x.gen] : letters[x.gen];
    out.insert(out.end(), piece.begin(), piece.end());
  }
  return g.reduce(out);
}

VerifyReport verify(const EndomorphicPresentation& p, Decider& d, std::size_t depth) {
  const Group& g = d.group();
  auto letters = realize(p, g);
  auto rels = expand_labeled(p, depth);
  VerifyReport rep;
  rep.total = rels.size();
  for (auto& r : rels) {
    ++rep.checked;
    if (!d.is_trivial(realize(r.word, letters, g))) {
      rep.all_trivial = false;
      rep.failing = std::move(r);
      break;
    }
  }
  return rep;
}

VerifyReport verify(const EndomorphicPresentation& p, const Group& g, std::size_t depth) {
  Decider d(g);
  return verify(p, d, depth);
}

MutationReport mutation_control(const EndomorphicPresentation& p, Decider& d, std::size_t depth,
                                std::size_t max_samples, std::uint64_t seed) {
  const Group& g = d.group();
  auto letters = realize(p, g);
  auto rels = expand(p, depth);
  const std::size_t alts = p.alphabet.size() - 1;
  MutationReport rep;
  if (alts == 0) return rep;
  std::vector<std::size_t> offset{0};
  for (const auto& r : rels) offset.push_back(offset.back() + r.size() * alts);
  const std::size_t total = offset.back();

  std::vector<std::size_t> picks;
  if (total <= max_samples) {
    picks.resize(total);
    for (std::size_t i = 0; i < total; ++i) picks[i] = i;
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> dist(0, total - 1);
    std::set<std::size_t> chosen;
    while (chosen.size() < max_samples) chosen.insert(dist(rng));
    picks.assign(chosen.begin(), chosen.end());
  }

  for (auto k : picks) {
    auto ri = static_cast<std::size_t>(std::upper_bound(offset.begin(), offset.end(), k) - offset.begin()) - 1;
    std::size_t rest = k - offset[ri];
    std::size_t pos = rest / alts;
    auto shift = static_cast<std::uint32_t>(rest % alts + 1);
    FreeWord w = rels[ri];
    w[pos].gen = static_cast<std::uint32_t>((w[pos].gen + shift) % p.alphabet.size());
    ++rep.tested;
    if (!d.is_trivial(realize(w, letters, g))) ++rep.nontrivial;
  }
  return rep;
}

// ---------------------------------------------------------------- built-in data

namespace {

EndomorphicPresentation make(const std::string& name, const std::string& group, std::vector<std::string> alphabet) {
  EndomorphicPresentation p;
  p.name = name;
  p.group = group;
  p.alphabet = std::move(alphabet);
  return p;
}

void add_iterated(EndomorphicPresentation& p, std::initializer_list<const char*> words) {
  for (const char* w : words) p.iterated.push_back(p.parse(w));
}

}  // namespace

EndomorphicPresentation builtin_presentation(const std::string& name) {
  if (name == "Lysionok") {
    auto p = make("Lysionok", "Gg", {"a", "c", "d"});
    add_iterated(p, {"a^2", "(ad)^4", "(adacac)^4"});
    p.substitutions.push_back(make_substitution(p, "phi", {{"a", "aca"}, {"c", "cd"}, {"d", "c"}}));
    return p;
  }
  if (name == "Gg") {
    auto p = make("Gg", "Gg", {"a", "c", "d"});
    add_iterated(p, {"a^2", "[d,d^a]", "[d^(ac),(d^(ac))^a]"});
    p.substitutions.push_back(make_substitution(p, "phi", {{"a", "aca"}, {"c", "cd"}, {"d", "c"}}));
    return p;
  }
  if (name == "Sg") {
    auto p = make("Sg", "Sg", {"a", "b", "c", "d"});
    add_iterated(p, {"a^2", "[b,c]", "[c,c^a]", "[c,d^a]", "[d,d^a]", "[c^(ab),(c^(ab))^a]", "[c^(ab),(d^(ab))^a]",
                     "[d^(ab),(d^(ab))^a]"});
    p.substitutions.push_back(
        make_substitution(p, "phi", {{"a", "aba"}, {"b", "d"}, {"c", "b"}, {"d", "c"}}));
    return p;
  }
  if (name == "FGg") {
    auto p = make("FGg", "FGg", {"a", "r"});
    p.realization["r"] = "t";
    add_iterated(p, {"a^3", "[r^{1+a^-1-1+a+1},a]", "[a^-1,r^{1+a+a^-1}][r^{a+1+a^-1},a]"});
    p.substitutions.push_back(make_substitution(p, "phi", {{"a", "r^(a^-1)"}, {"r", "r"}}));
    p.substitutions.push_back(make_substitution(p, "chi1", {{"r", "r^-1"}}));
    p.substitutions.push_back(make_substitution(p, "chi2", {{"a", "a^-1"}}));
    return p;
  }
  if (name == "GSg") {
    auto p = make("GSg", "GSg", {"a", "t", "u", "v"});
    p.realization["u"] = "t^a";
    p.realization["v"] = "t^(a^-1)";
    for (const char* w : {"a^3", "t^3", "u^-1 t^a", "v^-1 t^(a^-1)"}) p.fixed.push_back(p.parse(w));
    add_iterated(p, {"(tuv)^3", "[v,t][vt,u^-1 t v^-1 u]", "[t,u]^3[u,v]^3[t,v]^3"});
    p.substitutions.push_back(make_substitution(
        p, "phi", {{"t", "t"}, {"u", "u^-1 t v^-1 t u v t^-1"}, {"v", "t^-1 v u t v^-1 t u^-1"}}));
    p.substitutions.push_back(make_substitution(p, "chi", {{"t", "t^-1"}, {"u", "u^-1"}, {"v", "v^-1"}}));
    return p;
  }
  if (name == "BSV") {
    auto p = make("BSV", "BSV", {"tau", "lambda"});
    p.realization["lambda"] = "tau mu^-1";
    add_iterated(p, {"[lambda,lambda^tau]", "[lambda,lambda^(tau^3)]"});
    p.substitutions.push_back(
        make_substitution(p, "phi", {{"tau", "tau^2"}, {"lambda", "tau^2 lambda^-1 tau^2"}}));
    return p;
  }
  throw ValidationError("unknown presentation '" + name + "'");
}

std::vector<std::string> builtin_presentation_names() { return {"Lysionok", "Gg", "Sg", "FGg", "GSg", "BSV"}; }

std::vector<std::string> hnn_alphabet() { return {"a", "c", "d", "t"}; }

std::vector<FreeWord> hnn_presentation_relators() {
  const auto alpha = hnn_alphabet();
  std::vector<FreeWord> out;
  for (const char* w : {"a^2", "[d,d^a]", "[d^(ac),d^(aca)]", "a^t aca", "c^t cd", "d^t c"})
    out.push_back(free_reduce(parse_free_word(w, alpha)));
  return out;
}

}  // namespace tg
