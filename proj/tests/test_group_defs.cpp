#include <doctest.h>

#include <random>

#include "properties.hpp"
#include "tg/errors.hpp"
#include "tg/group.hpp"

using namespace tg;

namespace {

const Group& gg() {
  static const Group g = builtin("Gg");
  return g;
}

Perm swap2() { return Perm::from_cycles(2, {{0, 1}}); }

// Klein four group {1, b, c, d} with the three maps onto C_2 used by the first Grigorchuk group.
DefiningTriple klein_triple(std::vector<int> order) {
  DefiningTriple t;
  t.shape = TreeShape::regular(2);
  t.a_gens = {{swap2()}};
  t.b_names = {"1", "b", "c", "d"};
  t.b_table = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  t.b_gens = {1, 2, 3};
  const Perm e(2), a = swap2();
  // map k kills the k-th nontrivial element: 0 kills d, 1 kills c, 2 kills b
  const std::vector<std::vector<Perm>> maps = {{e, a, a, e}, {e, a, e, a}, {e, e, a, a}};
  for (int k : order) t.omega.push_back({maps[static_cast<std::size_t>(k)]});
  t.name = "klein";
  return t;
}

}  // namespace

TEST_CASE("builtin generators follow their recursions") {
  const Group& g = gg();
  StatePool& p = g.pool();
  CHECK(p.node(g.state("a")).root == swap2());
  CHECK(p.section(g.state("b"), parse_vertex("1")) == g.state("a"));
  CHECK(p.section(g.state("b"), parse_vertex("2")) == g.state("c"));
  CHECK(p.section(g.state("c"), parse_vertex("2")) == g.state("d"));
  CHECK(p.section(g.state("d"), parse_vertex("1")) == p.identity());
  CHECK(p.section(g.state("d"), parse_vertex("2")) == g.state("b"));

  Group f = builtin("FGg");
  CHECK(f.pool().section(f.state("t"), parse_vertex("3")) == f.state("t"));
  CHECK(f.pool().section(f.state("t"), parse_vertex("1")) == f.state("a"));
  CHECK(f.pool().section(f.state("t"), parse_vertex("2")) == f.pool().identity());

  Group s = builtin("GSg");
  CHECK(s.pool().section(s.state("t"), parse_vertex("2")) == s.pool().compose(s.state("a"), s.state("a")));

  Group g2 = builtin("G2");
  StateId b = g2.state("b");
  CHECK(g2.pool().section(b, parse_vertex("1")) == g2.state("a"));
  CHECK(g2.pool().section(b, parse_vertex("2")) == g2.pool().identity());
  CHECK(g2.pool().section(b, parse_vertex("4")) == b);

  CHECK_THROWS_AS(builtin("nope"), ValidationError);
  for (const auto& n : builtin_names()) CHECK_NOTHROW(builtin(n));
}

TEST_CASE("constructors reproduce the named groups") {
  Group g = grigorchuk_2group("012");
  for (const char* x : {"a", "b", "c", "d"}) CHECK(g.state(x) == gg().state(x));

  CHECK(from_ggs(3, {1, 0}).state("t") == builtin("FGg").state("t"));
  CHECK(from_ggs(3, {1, 1}).state("t") == builtin("BGg").state("t"));
  CHECK(from_ggs(3, {1, 2}).state("t") == builtin("GSg").state("t"));
  CHECK(gupta_sidki(3).generating_states().size() == builtin("GS3").generating_states().size());

  Group k = from_triple(klein_triple({0, 1, 2}));
  for (const char* x : {"b", "c", "d"}) CHECK(k.state(x) == gg().state(x));
  CHECK(k.is_spinal());
  CHECK(gg().prime() == 2);
}

TEST_CASE("shifted triple gives the section closure") {
  // b of the shifted sequence is the spine section of b
  Group shifted = from_triple(klein_triple({1, 2, 0}));
  StatePool& p = gg().pool();
  for (const char* x : {"b", "c", "d"})
    CHECK(shifted.state(x) == p.section(gg().state(x), parse_vertex("2")));

  Group pre = grigorchuk_2group("120", "0");
  Group tail = grigorchuk_2group("120");
  StatePool& q = pre.pool();
  for (const char* x : {"b", "c", "d"}) CHECK(q.section(pre.state(x), parse_vertex("2")) == tail.state(x));
}

TEST_CASE("validation") {
  DefiningTriple t = klein_triple({0, 1, 2});
  t.shape = TreeShape::regular(3);
  t.a_gens = {{Perm::from_cycles(3, {{0, 1}})}};
  t.omega = {{{Perm(3), Perm(3), Perm(3), Perm(3)}, {Perm(3), Perm(3), Perm(3), Perm(3)}}};
  CHECK_THROWS_AS(from_triple(t), ValidationError);

  DefiningTriple one_kernel = klein_triple({0, 0, 0});
  CHECK_THROWS_AS(from_triple(one_kernel), ValidationError);  // d lies in every kernel

  CHECK_THROWS_AS(from_ggs(3, {0, 0}), ValidationError);
  CHECK_THROWS_AS(from_ggs(4, {2, 0, 2}), ValidationError);
  CHECK_THROWS_AS(grigorchuk_2group("01"), ValidationError);
}

TEST_CASE("reduce") {
  const Group& g = gg();
  CHECK(g.reduce(g.parse("bb")).empty());
  CHECK(g.format(g.reduce(g.parse("bc"))) == "d");
  CHECK(g.reduce({}).empty());
  CHECK(g.format(g.parse("aa b a a")) == "b");
  CHECK(g.format(g.parse("abacad")) == "abacad");
  CHECK(g.format(g.parse("a b c d a")) == "1");
}

TEST_CASE("cyclic reduce") {
  const Group& g = gg();
  CHECK(g.format(g.cyclic_reduce(g.parse("aba"))) == "b");
  CHECK(g.format(g.cyclic_reduce(g.parse("b"))) == "b");
  CHECK(g.format(g.cyclic_reduce(g.parse("ab"))) == "ab");
  CHECK(g.format(g.cyclic_reduce(g.parse("bacab"))) == "c");
  std::mt19937_64 rng(3);
  for (int i = 0; i < 300; ++i) {
    Word w = props::random_reduced(g, rng, 30);
    Word c = g.cyclic_reduce(w);
    CHECK(c.size() <= w.size());
    CHECK(g.cyclic_reduce(c) == c);
  }
}

TEST_CASE("words: inverse, power, conjugate") {
  const Group& g = gg();
  Word x = g.parse("abad"), y = g.parse("ac");
  CHECK(g.reduce(g.concat(x, g.inverse(x))).empty());
  CHECK(g.conjugate(x, y) == g.reduce(g.concat(g.concat(g.inverse(y), x), y)));
  CHECK(g.power(g.parse("ad"), 4) == g.reduce(g.parse("adadadad")));
  CHECK(g.eval(g.power(g.parse("ad"), 4)) == g.pool().identity());
  CHECK_THROWS_AS(g.parse("ax"), ParseError);
}

TEST_CASE("GGS torsion criterion") {
  CHECK(is_ggs_torsion(3, {1, -1}));
  CHECK(is_ggs_torsion(5, {1, -1, 0, 0}));
  CHECK(is_ggs_torsion(7, {1, -1, 0, 0, 0, 0}));
  CHECK_FALSE(is_ggs_torsion(3, {1, 0}));
  CHECK_FALSE(is_ggs_torsion(3, {1, 1}));
  CHECK(is_ggs_torsion(3, {1, 2}));
  CHECK(is_ggs_torsion(4, {1, 0, 1}));  // second Grigorchuk group
  CHECK_FALSE(is_ggs_torsion(4, {1, 1, 1}));
  CHECK_THROWS_AS(is_ggs_torsion(6, {1, 0, 0, 0, 0}), ValidationError);
}

TEST_CASE("reduce is idempotent and confluent") {
  for (const char* name : {"Gg", "FGg", "GSg", "Sg", "G2"}) {
    CAPTURE(name);
    Group g = builtin(name);
    auto o = props::reduce_confluence(g, 1000, 17);
    CHECK_MESSAGE(o.ok(), o.first);
  }
}

TEST_CASE("section contraction on spinal groups") {
  for (const auto& name : builtin_names()) {
    Group g = builtin(name);
    if (!g.is_spinal()) continue;
    CAPTURE(name);
    auto o = props::section_contraction(g, 1000, 23);
    CHECK_MESSAGE(o.ok(), o.first);
  }
}

TEST_CASE("reduced words evaluate like their spelling") {
  const Group& g = gg();
  std::mt19937_64 rng(9);
  StatePool& p = g.pool();
  for (int i = 0; i < 300; ++i) {
    Word raw = props::random_word(g, rng, 25);
    StateId direct = p.identity();
    for (auto s : raw) direct = p.compose(direct, g.layer(0).symbols[s].state);
    CHECK(g.eval(g.reduce(raw)) == direct);
    CHECK(g.eval(g.from_free(g.spell(g.reduce(raw)))) == direct);
  }
}
