#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tg/decision.hpp"
#include "tg/group.hpp"
#include "tg/word_io.hpp"

namespace tg {

/// Substitution S -> S*, extended multiplicatively to free words. Letters
/// without an explicit image map to themselves.
struct Substitution {
  std::string name;
  std::vector<FreeWord> images;  // indexed like the alphabet
  friend bool operator==(const Substitution&, const Substitution&) = default;
};

/// Endomorphic presentation <S | Q | Phi | R>.
struct EndomorphicPresentation {
  std::string name;
  std::string group;  // group the presentation describes (builtin name or file group)
  std::vector<std::string> alphabet;
  std::map<std::string, FreeWord> abbreviations;
  std::vector<FreeWord> fixed;     // Q
  std::vector<Substitution> substitutions;
  std::vector<FreeWord> iterated;  // R
  /// Letter -> word over the group's named generators; absent letters keep their name.
  std::map<std::string, std::string> realization;

  bool ascending() const { return fixed.empty(); }
  std::size_t letter(const std::string& name) const;
  FreeWord parse(const std::string& text) const;
  std::string format(const FreeWord& w) const;
  friend bool operator==(const EndomorphicPresentation&, const EndomorphicPresentation&) = default;
};

/// Substitution from textual images; letters missing from images are fixed.
Substitution make_substitution(const EndomorphicPresentation& p, const std::string& name,
                               const std::map<std::string, std::string>& images);

FreeWord apply(const Substitution& s, const FreeWord& w);
/// Composition: (compose(s, t))(w) = t(s(w)).
Substitution compose(const Substitution& s, const Substitution& t);

struct ExpandedRelator {
  FreeWord word;
  std::string origin;  // e.g. "phi(chi(R2))" or "Q1"
};

/// Q, then the images of R under every composition of at most depth
/// substitutions, breadth first, free-reduced and deduplicated.
std::vector<ExpandedRelator> expand_labeled(const EndomorphicPresentation& p, std::size_t depth);
std::vector<FreeWord> expand(const EndomorphicPresentation& p, std::size_t depth);

/// Images of the presentation letters in the group; throws ShapeMismatch on an alphabet mismatch.
std::vector<Word> realize(const EndomorphicPresentation& p, const Group& g);
Word realize(const FreeWord& w, const std::vector<Word>& letters, const Group& g);

struct VerifyReport {
  std::size_t checked = 0;
  std::size_t total = 0;
  bool all_trivial = true;
  std::optional<ExpandedRelator> failing;
};

VerifyReport verify(const EndomorphicPresentation& p, const Group& g, std::size_t depth);
VerifyReport verify(const EndomorphicPresentation& p, Decider& d, std::size_t depth);

struct MutationReport {
  std::size_t tested = 0;
  std::size_t nontrivial = 0;
  double fraction() const { return tested ? static_cast<double>(nontrivial) / static_cast<double>(tested) : 0.0; }
};

/// Replaces one letter of an expanded relator by a different letter with the same
/// exponent sign and counts how often the result is nontrivial. At most max_samples
/// mutations are drawn (all of them if fewer exist).
MutationReport mutation_control(const EndomorphicPresentation& p, Decider& d, std::size_t depth,
                                std::size_t max_samples = 400, std::uint64_t seed = 1);

/// Names: Lysionok, Gg, Sg, FGg, GSg, BSV.
EndomorphicPresentation builtin_presentation(const std::string& name);
std::vector<std::string> builtin_presentation_names();

/// Finite presentation of the HNN extension of Gg by the substitution phi,
/// over the alphabet a, c, d, t.
std::vector<std::string> hnn_alphabet();
std::vector<FreeWord> hnn_presentation_relators();

}  // namespace tg
