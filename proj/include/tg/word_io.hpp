#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace tg {

/// One letter of a free word: alphabet index plus inverse flag.
struct Letter {
  std::uint32_t gen = 0;
  bool inv = false;
  friend bool operator==(const Letter&, const Letter&) = default;
  friend bool operator<(const Letter& x, const Letter& y) {
    return x.gen != y.gen ? x.gen < y.gen : x.inv < y.inv;
  }
};

using FreeWord = std::vector<Letter>;

FreeWord free_inverse(const FreeWord& w);
/// Free cancellation only.
FreeWord free_reduce(const FreeWord& w);
FreeWord free_power(const FreeWord& w, long long k);
/// x^y = y^-1 x y.
FreeWord free_conjugate(const FreeWord& x, const FreeWord& y);
/// [x,y] = x^-1 y^-1 x y.
FreeWord free_commutator(const FreeWord& x, const FreeWord& y);

/// Parses a word over the given alphabet.
///
///   word   ::= item*
///   item   ::= atom ( '^' exp | '\'' )*
///   atom   ::= name | '1' | '(' word ')' | '[' word ( ',' word )+ ']'
///   exp    ::= int | '-' int | atom | '{' term ( ('+'|'-') term )* '}'
///   term   ::= int | word
///
/// Names are matched greedily against the alphabet and the abbreviations.
/// A braced exponent with several terms is a group-ring exponent, expanded
/// left to right as a product of conjugates; an integer term k contributes x^k.
/// Commutators are left-normed. Whitespace is ignored.
FreeWord parse_free_word(std::string_view text, const std::vector<std::string>& alphabet,
                         const std::map<std::string, FreeWord>& abbreviations = {});

/// Prints with run-length powers ("a^3", "t^-1"); names are space separated
/// when any alphabet name is longer than one character. "1" for the empty word.
std::string format_free_word(const FreeWord& w, const std::vector<std::string>& alphabet);

}  // namespace tg
