#include <doctest.h>

#include <random>
#include <set>

#include "properties.hpp"
#include "tg/errors.hpp"
#include "tg/group.hpp"
#include "tg/kernels.hpp"

using namespace tg;

namespace {

const Group& gg() {
  static const Group g = builtin("Gg");
  return g;
}

StateId st(const char* name) { return gg().state(name); }

}  // namespace

TEST_CASE("tree shape sizes and phases") {
  TreeShape reg = TreeShape::regular(3);
  CHECK(reg.level_size(0) == 1);
  CHECK(reg.level_size(4) == 81);
  TreeShape mixed({2}, {3, 2});
  CHECK(mixed.arity(0) == 2);
  CHECK(mixed.arity(1) == 3);
  CHECK(mixed.arity(2) == 2);
  CHECK(mixed.arity(3) == 3);
  CHECK(mixed.level_size(3) == 2 * 3 * 2);
  CHECK(mixed.shifted(1) == TreeShape({}, {3, 2}));
  CHECK(mixed.phase_of_level(3) == mixed.phase_of_level(1));
}

TEST_CASE("vertex indices are lexicographic with the first letter most significant") {
  TreeShape mixed({2}, {3, 2});
  for (std::size_t i = 0; i < mixed.level_size(3); ++i) {
    Vertex v = vertex_from_index(mixed, 3, i);
    CHECK(vertex_index(mixed, v) == i);
  }
  CHECK(parse_vertex("12") == Vertex{0, 1});
  CHECK(parse_vertex("1 2 1") == Vertex{0, 1, 0});
  CHECK(vertex_index(TreeShape::regular(2), parse_vertex("21")) == 2);
  CHECK_THROWS_AS(parse_vertex("1x"), ParseError);
}

TEST_CASE("act") {
  StatePool& p = gg().pool();
  CHECK(p.act(st("a"), parse_vertex("1")) == parse_vertex("2"));
  CHECK(p.act(p.identity(), parse_vertex("2121")) == parse_vertex("2121"));
  CHECK(p.act(st("b"), parse_vertex("12")) == parse_vertex("11"));
  CHECK(p.act(st("b"), parse_vertex("2")).size() == 1);
}

TEST_CASE("section") {
  StatePool& p = gg().pool();
  CHECK(p.section(st("b"), parse_vertex("1")) == st("a"));
  CHECK(p.section(st("b"), parse_vertex("2")) == st("c"));
  CHECK(p.section(p.identity(), parse_vertex("121")) == p.identity());
  CHECK(p.section(st("d"), parse_vertex("22")) == st("c"));
  CHECK(p.section(st("d"), {}) == st("d"));
  // section(f, uv) = section(section(f, u), v)
  StateId f = gg().eval(gg().parse("abacadacab"));
  CHECK(p.section(f, parse_vertex("211")) == p.section(p.section(f, parse_vertex("2")), parse_vertex("11")));
}

TEST_CASE("compose and invert") {
  StatePool& p = gg().pool();
  CHECK(p.compose(st("a"), st("a")) == p.identity());
  CHECK(p.invert(p.identity()) == p.identity());
  CHECK(p.compose(st("b"), st("c")) == st("d"));
  StateId f = gg().eval(gg().parse("abacadacabadac"));
  CHECK(p.compose(f, p.invert(f)) == p.identity());
  CHECK(p.power(gg().eval(gg().parse("ad")), 4) == p.identity());
  CHECK(p.power(gg().eval(gg().parse("ad")), 2) != p.identity());
}

TEST_CASE("decompose") {
  const Group& g = gg();
  auto d = g.decompose(g.parse("abacadacabadac"));
  CHECK(d.root == Perm::from_cycles(2, {{0, 1}}));
  REQUIRE(d.sections.size() == 2);
  CHECK(g.format(d.sections[0]) == "cabab");
  CHECK(g.format(d.sections[1]) == "ba");

  auto b = g.decompose(g.parse("b"));
  CHECK(b.root.is_identity());
  CHECK(g.format(b.sections[0]) == "a");
  CHECK(g.format(b.sections[1]) == "c");

  // the sections recombine to the state of the word
  StatePool& p = g.pool();
  StateId rebuilt = p.make(0, d.root, {g.eval(d.sections[0]), g.eval(d.sections[1])});
  CHECK(rebuilt == g.eval(g.parse("abacadacabadac")));
}

TEST_CASE("portraits") {
  StatePool& p = gg().pool();
  auto never = [](StateId) { return false; };
  auto id = p.portrait(p.identity(), 5, never);
  CHECK(id.nodes.size() == 1);
  CHECK(id.nodes[0].leaf);

  StateId f = gg().eval(gg().parse("abacadacabadac"));
  auto one = p.portrait(f, 1, never);
  REQUIRE(one.nodes.size() == 3);
  CHECK(one.nodes[0].perm == Perm::from_cycles(2, {{0, 1}}));
  CHECK(one.nodes[one.nodes[0].children[0]].payload == gg().eval(gg().parse("cabab")));
  CHECK(one.nodes[one.nodes[0].children[1]].payload == gg().eval(gg().parse("ba")));

  auto w = word_portrait(gg(), gg().parse("abacadacabadac"), 0);
  CHECK(w.depth() == canonical_portrait_depth(gg(), gg().parse("abacadacabadac")));
  CHECK(w.depth() <= 5);  // ceil(log2 14) + 1

  CHECK_THROWS_AS(p.portrait(f, 20, never, 8), ResourceBound);
}

TEST_CASE("reachable sections") {
  StatePool& p = gg().pool();
  auto id = p.reachable(p.identity(), 10);
  REQUIRE(id);
  CHECK(*id == std::vector<StateId>{p.identity()});

  auto r = p.reachable(st("b"), 100);
  REQUIRE(r);
  std::set<StateId> got(r->begin(), r->end());
  CHECK(got == std::set<StateId>{st("b"), st("a"), st("c"), st("d"), p.identity()});
  CHECK_FALSE(p.reachable(st("b"), 3));

  const Group bsv = builtin("BSV");
  auto t = bsv.pool().reachable(bsv.state("tau"), 100);
  REQUIRE(t);
  std::set<StateId> ts(t->begin(), t->end());
  CHECK(ts.count(bsv.state("tau")));
  CHECK(ts.count(bsv.pool().identity()));
  CHECK(ts.size() == 2);  // tau = (1, tau) a
}

TEST_CASE("hash-consing merges equal nodes only") {
  StatePool& p = gg().pool();
  const StateNode& b = p.node(st("b"));
  CHECK(p.make(b.phase, b.root, b.children) == st("b"));
  // same sections under a different root permutation is a different state
  StateId ab = p.make(0, Perm::from_cycles(2, {{0, 1}}), b.children);
  CHECK(ab != st("b"));
  CHECK(ab == p.compose(st("b"), st("a")));

  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    Word w = props::random_reduced(gg(), rng, 20);
    StateId f = gg().eval(w);
    const StateNode& n = p.node(f);
    StateId again = p.make(n.phase, n.root, n.children);
    REQUIRE(again == f);
    for (int k = 0; k < 4; ++k) {
      Vertex u = props::random_vertex(p.shape(), rng, 5);
      Vertex direct = u;
      for (auto s : w) direct = p.act(gg().layer(0).symbols[s].state, direct);
      CHECK(p.act(again, u) == direct);
    }
  }
}

TEST_CASE("level permutations agree with act") {
  StatePool& p = gg().pool();
  StateId f = gg().eval(gg().parse("abcadacab"));
  for (std::size_t n = 0; n <= 6; ++n) {
    auto perm = p.level_permutation(f, n);
    REQUIRE(perm.size() == p.shape().level_size(n));
    for (std::size_t i = 0; i < perm.size(); ++i)
      CHECK(perm[i] == vertex_index(p.shape(), p.act(f, vertex_from_index(p.shape(), n, i))));
    CHECK(kernels::level_permutation_serial(p, f, n) == perm);
    CHECK(kernels::level_permutation_parallel(p, f, n) == perm);
  }
}

TEST_CASE("prefix preservation") {
  std::mt19937_64 rng(5);
  StatePool& p = gg().pool();
  for (int i = 0; i < 500; ++i) {
    StateId f = gg().eval(props::random_reduced(gg(), rng, 24));
    Vertex u = props::random_vertex(p.shape(), rng, 6), v = props::random_vertex(p.shape(), rng, 6);
    auto common = [](const Vertex& x, const Vertex& y) {
      std::size_t k = 0;
      while (k < x.size() && k < y.size() && x[k] == y[k]) ++k;
      return k;
    };
    CHECK(common(u, v) == common(p.act(f, u), p.act(f, v)));
    Vertex pre(u.begin(), u.begin() + 3);
    Vertex img = p.act(f, u);
    CHECK(p.act(f, pre) == Vertex(img.begin(), img.begin() + 3));
  }
}

TEST_CASE("right action and section homomorphism laws") {
  for (const char* name : {"Gg", "FGg", "GSg", "BSV"}) {
    CAPTURE(name);
    Group g = builtin(name);
    auto ra = props::right_action_law(g, 1000, 1);
    CHECK_MESSAGE(ra.ok(), ra.first);
    auto sh = props::section_homomorphism(g, 1000, 2);
    CHECK_MESSAGE(sh.ok(), sh.first);
  }
}

TEST_CASE("states over a non-regular tree") {
  TreeShape shape({}, {2, 3});
  auto pool = pool_for(shape);
  StateId x = pool->rooted(0, Perm::from_cycles(2, {{0, 1}}));
  StateId y = pool->rooted(1, Perm::from_cycles(3, {{0, 1, 2}}));
  StateId z = pool->make(0, Perm(2), {y, pool->identity(1)});
  CHECK(pool->act(z, parse_vertex("11")) == parse_vertex("12"));
  CHECK(pool->act(z, parse_vertex("21")) == parse_vertex("21"));
  StateId xz = pool->compose(x, z);
  CHECK(pool->act(xz, parse_vertex("13")) == pool->act(z, pool->act(x, parse_vertex("13"))));
  CHECK(pool->power(z, 3) == pool->identity(0));
}
