#include "tg/word_io.hpp"

#include <algorithm>
#include <cctype>

#include "tg/errors.hpp"

namespace tg {

FreeWord free_inverse(const FreeWord& w) {
  FreeWord r(w.rbegin(), w.rend());
  for (auto& l : r) l.inv = !l.inv;
  return r;
}

FreeWord free_reduce(const FreeWord& w) {
  FreeWord out;
  out.reserve(w.size());
  for (const auto& l : w) {
    if (!out.empty() && out.back().gen == l.gen && out.back().inv != l.inv)
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

FreeWord free_power(const FreeWord& w, long long k) {
  FreeWord base = k < 0 ? free_inverse(w) : w;
  FreeWord out;
  for (long long i = 0; i < (k < 0 ? -k : k); ++i) out.insert(out.end(), base.begin(), base.end());
  return out;
}

FreeWord free_conjugate(const FreeWord& x, const FreeWord& y) {
  FreeWord out = free_inverse(y);
  out.insert(out.end(), x.begin(), x.end());
  out.insert(out.end(), y.begin(), y.end());
  return out;
}

FreeWord free_commutator(const FreeWord& x, const FreeWord& y) {
  FreeWord out = free_inverse(x);
  FreeWord yi = free_inverse(y);
  out.insert(out.end(), yi.begin(), yi.end());
  out.insert(out.end(), x.begin(), x.end());
  out.insert(out.end(), y.begin(), y.end());
  return out;
}

namespace {

class Parser {
 public:
  Parser(std::string_view text, const std::vector<std::string>& alphabet,
         const std::map<std::string, FreeWord>& abbrev)
      : s_(text), alphabet_(alphabet), abbrev_(abbrev) {}

  FreeWord run() {
    FreeWord w = word();
    skip();
    if (pos_ != s_.size()) fail(std::string("unexpected '") + s_[pos_] + "'");
    return w;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, 1, static_cast<int>(pos_) + 1);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  // Longest alphabet or abbreviation name at the cursor.
  bool name(FreeWord& out) {
    skip();
    std::size_t best = 0;
    const FreeWord* hit = nullptr;
    FreeWord single;
    for (std::size_t i = 0; i < alphabet_.size(); ++i) {
      const auto& n = alphabet_[i];
      if (n.size() > best && s_.substr(pos_, n.size()) == n) {
        best = n.size();
        single = {Letter{static_cast<std::uint32_t>(i), false}};
        hit = &single;
      }
    }
    for (const auto& [n, w] : abbrev_) {
      if (n.size() > best && s_.substr(pos_, n.size()) == n) {
        best = n.size();
        hit = &w;
      }
    }
    if (!hit) return false;
    out = *hit;
    pos_ += best;
    return true;
  }

  bool integer(long long& v) {
    skip();
    std::size_t p = pos_;
    bool neg = false;
    if (p < s_.size() && s_[p] == '-') {
      neg = true;
      ++p;
      while (p < s_.size() && std::isspace(static_cast<unsigned char>(s_[p]))) ++p;
    }
    if (p >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[p]))) return false;
    long long x = 0;
    while (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) {
      x = x * 10 + (s_[p++] - '0');
      if (x > 1000000) fail("exponent too large");
    }
    pos_ = p;
    v = neg ? -x : x;
    return true;
  }

  bool atom(FreeWord& out) {
    skip();
    if (pos_ >= s_.size()) return false;
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      out = word();
      if (!peek(')')) fail("expected ')'");
      ++pos_;
      return true;
    }
    if (c == '[') {
      ++pos_;
      out = word();
      if (!peek(',')) fail("commutator needs at least two entries");
      while (peek(',')) {
        ++pos_;
        out = free_commutator(out, word());
      }
      if (!peek(']')) fail("expected ']'");
      ++pos_;
      return true;
    }
    if (name(out)) return true;
    if (c == '1' && (pos_ + 1 >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])))) {
      ++pos_;
      out.clear();
      return true;
    }
    return false;
  }

  FreeWord exponent(const FreeWord& x) {
    skip();
    long long k = 0;
    if (peek('{')) {
      ++pos_;
      FreeWord out;
      bool first = true;
      while (true) {
        bool neg = false;
        skip();
        if (!first || peek('-') || peek('+')) {
          if (peek('+')) {
            ++pos_;
          } else if (peek('-')) {
            ++pos_;
            neg = true;
          } else {
            fail("expected '+' or '-' in exponent");
          }
        }
        first = false;
        skip();
        FreeWord term;
        if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
          integer(k);
          term = free_power(x, neg ? -k : k);
        } else {
          FreeWord y = word();
          if (y.empty()) fail("empty exponent term");
          term = free_conjugate(x, y);
          if (neg) term = free_inverse(term);
        }
        out.insert(out.end(), term.begin(), term.end());
        if (peek('}')) {
          ++pos_;
          return out;
        }
        if (!peek('+') && !peek('-')) fail("expected '}'");
      }
    }
    if (integer(k)) return free_power(x, k);
    FreeWord y;
    if (atom(y)) return free_conjugate(x, y);
    fail("bad exponent");
  }

  FreeWord word() {
    FreeWord out;
    FreeWord a;
    while (atom(a)) {
      while (true) {
        if (peek('^')) {
          ++pos_;
          a = exponent(a);
        } else if (peek('\'')) {
          ++pos_;
          a = free_inverse(a);
        } else {
          break;
        }
      }
      out.insert(out.end(), a.begin(), a.end());
    }
    return out;
  }

  std::string_view s_;
  const std::vector<std::string>& alphabet_;
  const std::map<std::string, FreeWord>& abbrev_;
  std::size_t pos_ = 0;
};

}  // namespace

FreeWord parse_free_word(std::string_view text, const std::vector<std::string>& alphabet,
                         const std::map<std::string, FreeWord>& abbreviations) {
  return Parser(text, alphabet, abbreviations).run();
}

std::string format_free_word(const FreeWord& w, const std::vector<std::string>& alphabet) {
  if (w.empty()) return "1";
  bool spaced = std::any_of(alphabet.begin(), alphabet.end(), [](const std::string& n) { return n.size() > 1; });
  std::string out;
  for (std::size_t i = 0; i < w.size();) {
    std::size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    long long run = static_cast<long long>(j - i);
    if (spaced && !out.empty()) out += ' ';
    out += alphabet.at(w[i].gen);
    if (w[i].inv)
      out += "^-" + std::to_string(run);
    else if (run > 1)
      out += "^" + std::to_string(run);
    i = j;
  }
  return out;
}

}  // namespace tg
