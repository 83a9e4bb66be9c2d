#include <doctest.h>

#include <random>

#include "properties.hpp"
#include "tg/conjugacy.hpp"
#include "tg/decision.hpp"
#include "tg/quotient.hpp"

using namespace tg;

namespace {

const Group& gg() {
  static const Group g = builtin("Gg");
  return g;
}

GgConjugacy& solver() {
  static GgConjugacy c(gg());
  return c;
}

bool conjugate_in(const std::vector<Perm>& elems, const Perm& x, const Perm& y) {
  for (const auto& f : elems)
    if (f.inverse() * x * f == y) return true;
  return false;
}

}  // namespace

TEST_CASE("coset bookkeeping") {
  GgConjugacy& cj = solver();
  CHECK(cj.k_level() == 3);
  CHECK(cj.coset_of({}) == 0);
  CHECK(cj.coset_word(0).empty());
  // K = <[a,b]>^G
  CHECK(cj.coset_of(gg().parse("[a,b]")) == 0);
  CHECK(cj.coset_of(gg().parse("[a,b]^(cad)")) == 0);
  CHECK(cj.coset_of(gg().parse("a")) != 0);

  // arithmetic agrees with products of words
  std::mt19937_64 rng(2);
  for (int i = 0; i < 200; ++i) {
    Word x = props::random_reduced(gg(), rng, 12), y = props::random_reduced(gg(), rng, 12);
    CHECK(cj.mul(cj.coset_of(x), cj.coset_of(y)) == cj.coset_of(gg().concat(x, y)));
    CHECK(cj.inv(cj.coset_of(x)) == cj.coset_of(gg().inverse(x)));
  }
  for (unsigned c = 0; c < GgConjugacy::kCosets; ++c) CHECK(cj.coset_of(cj.coset_word(c)) == c);
}

TEST_CASE("image of K reaches index 16 at n_K and stays there") {
  for (std::size_t n = 1; n <= 4; ++n) {
    LevelQuotient q(gg(), n);
    std::vector<Perm> ab{q.image(gg().parse("[a,b]"))};
    PermGroup k = q.perms().normal_closure(ab, q.perms().generators());
    BigInt index = q.order() / k.order();
    if (n < solver().k_level()) CHECK(index < 16);
    else CHECK(index == 16);
  }
}

TEST_CASE("q_set examples") {
  GgConjugacy& cj = solver();
  CHECK(cj.q_set({}, {}) == CosetSet::all());
  CHECK(cj.q_set({}, {}).size() == 16);
  CHECK(cj.q_set(gg().parse("b"), gg().parse("c")).empty());
  CHECK_FALSE(cj.are_conjugate(gg().parse("b"), gg().parse("c")));
  // independent check: b and c differ in the abelianisation of the level-3 quotient
  LevelQuotient q(gg(), 3);
  PermGroup dq = q.derived_subgroup();
  CHECK_FALSE(dq.contains(q.image(gg().parse("b")) * q.image(gg().parse("c")).inverse()));

  CHECK(cj.are_conjugate(gg().parse("a"), gg().parse("cac")));
  CHECK(cj.q_set(gg().parse("a"), gg().parse("a")).contains(0));
  CHECK(cj.are_conjugate(gg().parse("ab"), gg().parse("ba")));
}

TEST_CASE("random conjugate pairs contain their witness") {
  GgConjugacy& cj = solver();
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    Word g = props::random_reduced(gg(), rng, 8), f = props::random_reduced(gg(), rng, 6);
    Word h = gg().conjugate(g, f);
    CHECK(cj.q_set(g, h).contains(cj.coset_of(f)));
  }
}

TEST_CASE("symmetry") {
  GgConjugacy& cj = solver();
  std::mt19937_64 rng(9);
  for (int i = 0; i < 60; ++i) {
    Word g = props::random_reduced(gg(), rng, 8), f = props::random_reduced(gg(), rng, 6);
    Word h = i % 2 ? gg().conjugate(g, f) : props::random_reduced(gg(), rng, 8);
    CosetSet gh = cj.q_set(g, h), hg = cj.q_set(h, g);
    CHECK(gh.size() == hg.size());
    for (unsigned c = 0; c < GgConjugacy::kCosets; ++c)
      if (gh.contains(c)) CHECK(hg.contains(cj.inv(c)));
  }
}

TEST_CASE("consistency with a finite quotient") {
  GgConjugacy& cj = solver();
  LevelQuotient q(gg(), 4);
  auto elems = perm_closure(q.perms().generators(), q.degree(), 1u << 16);
  REQUIRE(elems.size() == 4096);
  std::mt19937_64 rng(12);
  int conj = 0;
  for (int i = 0; i < 80; ++i) {
    Word g = props::random_reduced(gg(), rng, 8);
    Word h = i % 2 ? gg().conjugate(g, props::random_reduced(gg(), rng, 6)) : props::random_reduced(gg(), rng, 8);
    bool c = cj.are_conjugate(g, h);
    conj += c;
    if (c) CHECK(conjugate_in(elems, q.image(g), q.image(h)));
  }
  CHECK(conj >= 40);
}

TEST_CASE("witnesses for short conjugators") {
  GgConjugacy& cj = solver();
  Decider d(gg());
  Ball b = ball(gg(), 5);
  std::mt19937_64 rng(21);
  for (int i = 0; i < 30; ++i) {
    Word g = props::random_reduced(gg(), rng, 6), f = props::random_reduced(gg(), rng, 4);
    Word h = gg().conjugate(g, f);
    CosetSet s = cj.q_set(g, h);
    // some conjugator in the ball lies in a reported coset
    bool found = false;
    for (const auto& z : b.elements)
      if (s.contains(cj.coset_of(z)) && d.equal(gg().conjugate(g, z), h)) found = true;
    CHECK(found);
  }
}
