#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "properties.hpp"
#include "tg/decision.hpp"
#include "tg/errors.hpp"

using namespace tg;

namespace {

const Group& gg() {
  static const Group g = builtin("Gg");
  return g;
}

bool trivial_on_level(const Group& g, const Word& w, std::size_t n) {
  auto perm = g.pool().level_permutation(g.eval(w), n);
  for (std::size_t i = 0; i < perm.size(); ++i)
    if (perm[i] != i) return false;
  return true;
}

}  // namespace

TEST_CASE("is_trivial and equal") {
  Decider d(gg());
  CHECK(d.is_trivial(gg().parse("(ad)^4")));
  CHECK(d.is_trivial(gg().parse("(adacac)^4")));
  CHECK_FALSE(d.is_trivial(gg().parse("abab")));
  CHECK_FALSE(trivial_on_level(gg(), gg().parse("abab"), 4));
  CHECK(d.is_trivial({}));
  CHECK(d.equal(gg().parse("bc"), gg().parse("d")));
  CHECK_FALSE(d.equal(gg().parse("a"), gg().parse("b")));
  Word g = gg().parse("abacadab");
  CHECK(d.equal(g, g));
  CHECK(is_trivial_automaton(gg(), gg().parse("(ad)^4")));
  CHECK_FALSE(is_trivial_automaton(gg(), gg().parse("(ad)^2")));
}

TEST_CASE("word problem in explicitly recursive groups") {
  Group bsv = builtin("BSV");
  Decider d(bsv);
  CHECK(d.is_trivial(bsv.parse("[tau mu^-1, (tau mu^-1)^tau]")));
  CHECK_FALSE(d.is_trivial(bsv.parse("tau mu")));
  CHECK_FALSE(d.is_trivial(bsv.parse("tau^5")));
}

TEST_CASE("order examples") {
  Decider d(gg());
  for (const char* s : {"a", "b", "c", "d"}) {
    auto r = d.order(gg().parse(s));
    REQUIRE(r.finite());
    CHECK(r.order == 2);
  }
  auto one = d.order({});
  REQUIRE(one.finite());
  CHECK(one.order == 1);
  auto ad = d.order(gg().parse("ad"));
  REQUIRE(ad.finite());
  CHECK(ad.order == 4);
  auto ab = d.order(gg().parse("ab"));
  REQUIRE(ab.finite());
  CHECK(ab.order == 16);
  // permutation order at deep levels agrees
  CHECK(Perm(gg().pool().level_permutation(gg().eval(gg().parse("ab")), 8)).order() == 16);
  CHECK(d.is_trivial(gg().power(gg().parse("ab"), 16)));
  CHECK_FALSE(d.is_trivial(gg().power(gg().parse("ab"), 8)));
}

TEST_CASE("infinite order certificate in BGg") {
  Group b = builtin("BGg");
  Decider d(b);
  Word x = b.parse("t a^-1");
  auto r = d.order(x);
  REQUIRE(r.infinite());
  REQUIRE(r.certificate);
  CHECK(r.certificate->power >= 2);
  CHECK(d.verify(x, *r.certificate));
  // a corrupted certificate is rejected
  InfiniteCertificate bad = *r.certificate;
  bad.power += 1;
  CHECK_FALSE(d.verify(x, bad));
}

TEST_CASE("order never claims infinity for torsion groups") {
  std::mt19937_64 rng(4);
  Decider d(gg());
  for (int i = 0; i < 300; ++i) {
    Word w = props::random_reduced(gg(), rng, 16);
    auto r = d.order(w);
    REQUIRE_FALSE(r.infinite());
    if (!r.finite()) continue;
    CHECK(d.is_trivial(gg().power(w, static_cast<long long>(r.order))));
    if (r.order > 1) CHECK_FALSE(d.is_trivial(gg().power(w, static_cast<long long>(r.order / 2))));
    CHECK((r.order & (r.order - 1)) == 0);
  }
}

TEST_CASE("balls") {
  CHECK(ball(gg(), 0).elements.size() == 1);
  CHECK(ball(gg(), 1).elements.size() == 5);
  Group dinf = builtin("Dinf");
  for (std::size_t n = 0; n <= 12; ++n) CHECK(ball(dinf, n).elements.size() == 2 * n + 1);

  // every representative is distinct and of length at most the radius
  Ball b = ball(gg(), 6);
  std::set<StateId> seen(b.states.begin(), b.states.end());
  CHECK(seen.size() == b.states.size());
  std::size_t total = 0;
  for (auto s : b.sphere_sizes) total += s;
  CHECK(total == b.elements.size());
  for (const auto& w : b.elements) CHECK(w.size() <= 6);

  // brute force over all words of length <= 3
  std::set<StateId> brute{gg().pool().identity()};
  const auto& gs = gg().generating_set();
  std::vector<Word> layer{{}};
  for (int len = 1; len <= 3; ++len) {
    std::vector<Word> next;
    for (const auto& w : layer)
      for (auto s : gs) {
        Word x = w;
        x.push_back(s);
        brute.insert(gg().eval(x));
        next.push_back(x);
      }
    layer = std::move(next);
  }
  CHECK(brute.size() == ball(gg(), 3).elements.size());
}

TEST_CASE("torsion growth") {
  CHECK(torsion_growth(gg(), 0) == 1);
  CHECK(torsion_growth(gg(), 1) == 2);
  // independent value: permutation orders at level 10 over the same ball
  Ball b = ball(gg(), 6);
  std::uint64_t best = 1;
  for (auto s : b.states) best = std::max(best, Perm(gg().pool().level_permutation(s, 10)).order());
  CHECK(torsion_growth(gg(), 6) == best);
}

TEST_CASE("eta weights") {
  auto w = eta_weights(3);
  CHECK(w.eta == doctest::Approx(0.810536).epsilon(1e-6));
  CHECK(std::abs(w.eta * w.eta * w.eta + w.eta * w.eta + w.eta - 2) < 1e-12);
  REQUIRE(w.tau.size() == 4);
  CHECK(std::abs(w.tau[1] + w.tau[2] - w.tau[3]) < 1e-12);
  CHECK(0 < w.tau[0]);
  CHECK(w.tau[0] < 1);
  for (int i = 1; i < 3; ++i) CHECK(w.tau[static_cast<std::size_t>(i)] < w.tau[static_cast<std::size_t>(i) + 1]);
  CHECK(w.tau[3] < 1);
  // the linear system behind the weights
  for (int i = 2; i <= 3; ++i)
    CHECK(std::abs(w.eta * (w.tau[0] + w.tau[static_cast<std::size_t>(i)]) - (w.tau[0] + w.tau[static_cast<std::size_t>(i) - 1])) <
          1e-12);
  CHECK(std::abs(w.eta * (w.tau[0] + w.tau[1]) - w.tau[3]) < 1e-12);
  auto w5 = eta_weights(5);
  CHECK(w5.eta > w.eta);
  CHECK(w5.eta < 1);
  CHECK_THROWS_AS(eta_weights(2), ValidationError);
}

TEST_CASE("soundness against level permutations") {
  std::mt19937_64 rng(8);
  Decider d(gg());
  std::vector<Word> words;
  for (int i = 0; i < 400; ++i) words.push_back(props::random_reduced(gg(), rng, 12));
  // conjugates of relators, so that trivial words show up too
  for (int i = 0; i < 100; ++i) {
    Word f = props::random_reduced(gg(), rng, 5);
    words.push_back(gg().conjugate(gg().parse(i % 2 ? "(ad)^4" : "(adacac)^4"), f));
  }
  std::size_t trivial = 0;
  for (const auto& w : words) {
    bool t = d.is_trivial(w);
    trivial += t;
    if (t)
      for (std::size_t n = 1; n <= 6; ++n) CHECK(trivial_on_level(gg(), w, n));
    // a generator left in the canonical portrait shows itself at most three levels below its vertex
    std::size_t len = std::max<std::size_t>(gg().reduce(w).size(), 1);
    std::size_t level = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(len)))) + 1 + 3;
    if (trivial_on_level(gg(), w, level)) CHECK(t);
  }
  CHECK(trivial >= 100);
}

TEST_CASE("level sections") {
  // F = (abadac)^4 lies in Stab(L_3) and |L_3(F)| = 16
  auto s = level_sections(gg(), gg().parse("(abadac)^4"), 3);
  REQUIRE(s);
  CHECK(s->size() == 8);
  CHECK(props::total_length(*s) == 16);
  CHECK_FALSE(level_sections(gg(), gg().parse("ab"), 1));
  auto zero = level_sections(gg(), gg().parse("ab"), 0);
  REQUIRE(zero);
  CHECK(zero->size() == 1);
}

TEST_CASE("shortening properties on Gg") {
  auto q = props::shortening_three_quarters(gg(), 3, 1000, 31);
  CHECK_MESSAGE(q.ok(), q.first);
  auto t = props::shortening_two_thirds(gg(), 3, 1000, 32);
  CHECK_MESSAGE(t.ok(), t.first);
  auto e = props::eta_shortening(gg(), 1000, 33);
  CHECK_MESSAGE(e.ok(), e.first);
  auto p = props::portrait_depth_bound(gg(), 1000, 34);
  CHECK_MESSAGE(p.ok(), p.first);
}

TEST_CASE("weighted norms with unit weights give word length") {
  std::vector<double> ones(gg().generating_set().size(), 1.0);
  auto norms = weighted_norms(gg(), ones, 5);
  Ball b = ball(gg(), 5);
  CHECK(norms.size() == b.elements.size());
  for (std::size_t i = 0; i < b.states.size(); ++i) CHECK(norms.at(b.states[i]) == doctest::Approx(b.elements[i].size()));
}
