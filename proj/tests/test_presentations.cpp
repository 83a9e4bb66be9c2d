#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "tg/errors.hpp"
#include "tg/presentation.hpp"

using namespace tg;

namespace {

const Group& gg() {
  static const Group g = builtin("Gg");
  return g;
}

FreeWord random_free(std::mt19937_64& rng, std::size_t letters, std::size_t len) {
  std::uniform_int_distribution<std::uint32_t> gen(0, static_cast<std::uint32_t>(letters - 1));
  std::bernoulli_distribution inv;
  FreeWord w;
  for (std::size_t i = 0; i < len; ++i) w.push_back({gen(rng), inv(rng)});
  return w;
}

Substitution random_substitution(std::mt19937_64& rng, std::size_t letters) {
  Substitution s;
  s.name = "s";
  for (std::size_t i = 0; i < letters; ++i) s.images.push_back(free_reduce(random_free(rng, letters, 4)));
  return s;
}

}  // namespace

TEST_CASE("expansion of the ascending Gg presentation") {
  auto p = builtin_presentation("Gg");
  CHECK(p.ascending());
  auto d0 = expand(p, 0);
  REQUIRE(d0.size() == 3);
  CHECK(d0[0] == p.parse("a^2"));
  CHECK(d0[1] == p.parse("[d,d^a]"));
  CHECK(d0[2] == p.parse("[d^(ac),(d^(ac))^a]"));
  CHECK(p.format(d0[0]) == "a^2");
}

TEST_CASE("expansion of the Lysionok presentation") {
  auto p = builtin_presentation("Lysionok");
  const Substitution& phi = p.substitutions.at(0);
  std::vector<FreeWord> want;
  for (const char* r : {"a^2", "(ad)^4", "(adacac)^4"}) want.push_back(p.parse(r));
  std::vector<FreeWord> expected = want;
  for (int i = 1; i <= 2; ++i)
    for (auto& w : want) {
      w = tg::apply(phi, w);
      expected.push_back(w);
    }
  auto got = expand(p, 2);
  std::sort(expected.begin(), expected.end());
  std::sort(got.begin(), got.end());
  CHECK(got == expected);
  CHECK(tg::apply(phi, p.parse("a")) == p.parse("aca"));
  CHECK(tg::apply(phi, p.parse("c")) == p.parse("cd"));
  CHECK(tg::apply(phi, p.parse("d")) == p.parse("c"));
}

TEST_CASE("fixed relators come first and are not iterated") {
  EndomorphicPresentation p;
  p.name = "P";
  p.group = "Gg";
  p.alphabet = {"a", "c", "d"};
  p.fixed.push_back(p.parse("a^2"));
  p.substitutions.push_back(make_substitution(p, "phi", {{"a", "aca"}}));
  CHECK_FALSE(p.ascending());
  CHECK(expand(p, 3) == std::vector<FreeWord>{p.parse("a^2")});
  p.iterated.push_back(p.parse("c^2"));
  auto labeled = expand_labeled(p, 1);
  REQUIRE(labeled.size() == 2);
  CHECK(labeled[0].origin == "Q1");
  CHECK(labeled[1].origin == "R1");  // c is fixed by phi, so its image is a duplicate
}

TEST_CASE("expansion is monotone in depth") {
  for (const auto& name : builtin_presentation_names()) {
    CAPTURE(name);
    auto p = builtin_presentation(name);
    for (std::size_t d = 0; d < 3; ++d) {
      auto small = expand(p, d), big = expand(p, d + 1);
      std::set<FreeWord> bs(big.begin(), big.end());
      for (const auto& w : small) CHECK(bs.count(w));
      CHECK(std::equal(small.begin(), small.end(), big.begin()));
    }
  }
}

TEST_CASE("substitution composition is associative") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 100; ++i) {
    auto r = random_substitution(rng, 3), s = random_substitution(rng, 3), t = random_substitution(rng, 3);
    CHECK(compose(compose(r, s), t).images == compose(r, compose(s, t)).images);
    FreeWord w = random_free(rng, 3, 10);
    CHECK(tg::apply(compose(r, s), w) == tg::apply(s, tg::apply(r, w)));
  }
}

TEST_CASE("verification") {
  auto ly = builtin_presentation("Lysionok");
  auto rep = verify(ly, gg(), 6);
  CHECK(rep.all_trivial);
  CHECK(rep.checked == rep.total);
  CHECK(rep.total == 21);

  for (const char* name : {"Gg", "Sg", "BSV"}) {
    CAPTURE(name);
    auto p = builtin_presentation(name);
    Group g = builtin(p.group);
    auto r = verify(p, g, 4);
    CHECK(r.all_trivial);
    CHECK_FALSE(r.failing);
  }

  // GSg: the fixed relators and the first two iterated relators
  auto gs = builtin_presentation("GSg");
  Group gsg = builtin("GSg");
  Decider d(gsg);
  auto letters = realize(gs, gsg);
  for (const auto& q : gs.fixed) CHECK(d.is_trivial(realize(q, letters, gsg)));
  CHECK(d.is_trivial(realize(gs.parse("(tuv)^3"), letters, gsg)));
  CHECK(d.is_trivial(realize(gs.iterated.at(1), letters, gsg)));

  // FGg up to one substitution
  auto fg = builtin_presentation("FGg");
  CHECK(verify(fg, builtin("FGg"), 1).all_trivial);
}

TEST_CASE("verification reports the first failing relator") {
  auto p = builtin_presentation("Gg");
  p.iterated.push_back(p.parse("ac"));
  auto r = verify(p, gg(), 2);
  CHECK_FALSE(r.all_trivial);
  REQUIRE(r.failing);
  CHECK(r.failing->origin == "R4");
  CHECK(r.failing->word == p.parse("ac"));
}

TEST_CASE("negative control") {
  for (const auto& name : builtin_presentation_names()) {
    CAPTURE(name);
    auto p = builtin_presentation(name);
    Group g = builtin(p.group);
    Decider d(g);
    auto m = mutation_control(p, d, 2);
    CHECK(m.tested > 0);
    CHECK(m.fraction() >= 0.95);
  }
}

TEST_CASE("alphabet mismatch") {
  EndomorphicPresentation p;
  p.name = "P";
  p.group = "Gg";
  p.alphabet = {"a", "z"};
  p.iterated.push_back(p.parse("z^2"));
  CHECK_THROWS_AS(realize(p, gg()), ShapeMismatch);
  CHECK_THROWS_AS(verify(p, gg(), 1), ShapeMismatch);
  CHECK_THROWS_AS(p.parse("q"), ParseError);
  CHECK_THROWS_AS(builtin_presentation("nope"), ValidationError);
}

TEST_CASE("HNN extension relators") {
  REQUIRE(hnn_alphabet() == std::vector<std::string>{"a", "c", "d", "t"});
  auto rels = hnn_presentation_relators();
  REQUIRE(rels.size() == 6);
  const std::uint32_t t = 3;
  auto p = builtin_presentation("Gg");
  const Substitution& phi = p.substitutions.at(0);
  Decider d(gg());
  std::vector<Word> letters{gg().parse("a"), gg().parse("c"), gg().parse("d")};
  std::size_t with_t = 0;
  for (const auto& r : rels) {
    // replace every t^-1 x t by phi(x) and check the result in Gg
    FreeWord out;
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (r[i].gen == t && r[i].inv && i + 2 < r.size() && r[i + 2].gen == t && !r[i + 2].inv) {
        FreeWord img = tg::apply(phi, FreeWord{r[i + 1]});
        out.insert(out.end(), img.begin(), img.end());
        i += 2;
        ++with_t;
        continue;
      }
      REQUIRE(r[i].gen != t);
      out.push_back(r[i]);
    }
    CHECK(d.is_trivial(realize(out, letters, gg())));
  }
  CHECK(with_t == 3);
  // without t, the first three are relators of the ascending presentation
  auto gp = expand(p, 1);
  std::set<FreeWord> gs(gp.begin(), gp.end());
  CHECK(gs.count(rels[0]));
  CHECK(gs.count(rels[1]));
  CHECK(gs.count(rels[2]));
}
