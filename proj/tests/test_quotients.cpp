#include <doctest.h>

#include <cmath>

#include "tg/quotient.hpp"

using namespace tg;

namespace {

const Group& gg() {
  static const Group g = builtin("Gg");
  return g;
}

BigInt pow_big(unsigned base, unsigned e) {
  BigInt x = 1;
  for (unsigned i = 0; i < e; ++i) x *= base;
  return x;
}

// Elements of G_n that map every level-1 subtree to itself, by enumeration.
std::size_t first_level_stabilizer_size(const LevelQuotient& q) {
  auto elems = perm_closure(q.perms().generators(), q.degree(), 1u << 20);
  const std::size_t block = q.degree() / static_cast<std::size_t>(q.group().shape().arity(0));
  std::size_t n = 0;
  for (const auto& p : elems) {
    bool fixes = true;
    for (std::uint32_t x = 0; x < q.degree() && fixes; x += static_cast<std::uint32_t>(block))
      fixes = p[x] / block == x / block;
    n += fixes;
  }
  return n;
}

}  // namespace

TEST_CASE("small quotients") {
  CHECK(level_quotient(gg(), 1).order() == 2);
  LevelQuotient f3(builtin("FGg"), 3);
  CHECK(f3.degree() == 27);
  CHECK(f3.image(Word{}).is_identity());
  CHECK(level_quotient(gg(), 4).order() == pow_big(2, 12));
  CHECK(level_quotient(builtin("FGg"), 2).order() == 81);
  CHECK(format_order(level_quotient(gg(), 4).order(), 2) == "2^12");
  CHECK(format_order(BigInt(12), 2) == "12");
}

TEST_CASE("orders of the whole automorphism group") {
  CHECK(full_aut_order(TreeShape::regular(2), 3) == 128);
  CHECK(full_aut_order(TreeShape::regular(3), 2) == 6 * 6 * 6 * 6);
  CHECK(full_aut_order(TreeShape({}, {2, 3}), 2) == 2 * 6 * 6);
  CHECK(cyclic_wreath_order(TreeShape::regular(3), 2) == 81);
  CHECK(cyclic_wreath_order(TreeShape::regular(2), 3) == 128);
}

TEST_CASE("stabilizer chain against brute force for degree at most 27") {
  struct Case {
    const char* name;
    std::size_t max_level;
  };
  for (Case c : {Case{"Gg", 4}, Case{"G2", 2}, Case{"FGg", 3}, Case{"BGg", 3}, Case{"GSg", 3}, Case{"Sg", 4},
                 Case{"GS3", 3}}) {
    Group g = builtin(c.name);
    for (std::size_t n = 1; n <= c.max_level; ++n) {
      CAPTURE(c.name);
      CAPTURE(n);
      LevelQuotient q(g, n);
      CHECK(q.order() == q.brute_force_order());
      // the same generators through a plain Schreier-Sims chain
      PermGroup plain(q.perms().generators(), q.degree());
      CHECK(plain.order() == q.order());
    }
  }
}

TEST_CASE("orders divide along projections and split over the first level") {
  for (const char* name : {"Gg", "FGg", "BGg"}) {
    Group g = builtin(name);
    BigInt prev = 1;
    for (std::size_t n = 1; n <= 5; ++n) {
      LevelQuotient q(g, n);
      CHECK(q.order() % prev == 0);
      prev = q.order();
    }
    for (std::size_t n = 1; n <= (g.shape().arity(0) == 2 ? 4u : 3u); ++n) {
      LevelQuotient q(g, n);
      BigInt root = level_quotient(g, 1).order();
      CHECK(BigInt(first_level_stabilizer_size(q)) * root == q.order());
    }
  }
}

TEST_CASE("Hausdorff ratios") {
  CHECK(level_quotient(gg(), 1).hausdorff_ratio() == doctest::Approx(1.0));
  CHECK(level_quotient(gg(), 7).hausdorff_ratio() == doctest::Approx(82.0 / 127.0).epsilon(1e-12));
  LevelQuotient f4(builtin("FGg"), 4);
  // log_3 |G_4| / log_3 |C_3 wr C_3 wr C_3 wr C_3| = 28 / 40
  CHECK(f4.hausdorff_ratio() == doctest::Approx(28.0 / 40.0).epsilon(1e-12));
}

TEST_CASE("rigid stabilizers") {
  // computed inside G_n the index reaches 16 one level after K does
  for (std::size_t n = 4; n <= 6; ++n) {
    LevelQuotient q(gg(), n);
    CHECK(q.order() / q.rigid_level_stabilizer(1).order() == 16);
  }
  LevelQuotient q(gg(), 4);
  CHECK(q.rigid_stabilizer(parse_vertex("1212")).order() == 1);
  CHECK(q.rigid_stabilizer({}).order() == q.order());

  // G_3 is the whole of Aut(T) on three levels, where rigid and level stabilizers coincide
  LevelQuotient q3(gg(), 3);
  REQUIRE(q3.order() == full_aut_order(TreeShape::regular(2), 3));
  CHECK(q3.order() / q3.rigid_level_stabilizer(1).order() == 2);
  CHECK(q3.order() / q3.rigid_level_stabilizer(2).order() == 8);
}

TEST_CASE("lower central series") {
  LevelQuotient q5(gg(), 5);
  auto r5 = q5.lower_central_ranks(9);
  REQUIRE(r5.size() == 9);
  std::vector<std::size_t> head(r5.begin(), r5.begin() + 8);
  CHECK(head == std::vector<std::size_t>{3, 2, 2, 1, 2, 2, 1, 1});
  auto r6 = LevelQuotient(gg(), 6).lower_central_ranks(8);
  CHECK(r6 == head);
  for (std::size_t n = 3; n <= 5; ++n) CHECK(LevelQuotient(gg(), n).nilpotency_class() == (1u << (n - 1)));
  CHECK(level_quotient(gg(), 1).lower_central_ranks(2) == std::vector<std::size_t>{1, 0});
}

TEST_CASE("derived series") {
  for (std::size_t n = 3; n <= 5; ++n) {
    LevelQuotient q(gg(), n);
    CHECK(q.order() / q.derived_subgroup().order() == 8);
  }
  auto ab = level_quotient(gg(), 1).derived_series(3);
  REQUIRE(ab.size() == 2);
  CHECK(ab[1] == 1);
  LevelQuotient q5(gg(), 5);
  auto ds = q5.derived_series(6);
  CHECK(ds.front() == q5.order());
  CHECK(ds.back() == 1);
  for (std::size_t i = 1; i < ds.size(); ++i) CHECK(ds[i - 1] % ds[i] == 0);
}

TEST_CASE("suborbits") {
  CHECK(level_quotient(gg(), 1).suborbit_profile() == std::vector<std::size_t>{1, 1});
  for (std::size_t n = 1; n <= 7; ++n) {
    auto s = level_quotient(gg(), n).suborbit_profile();
    std::vector<std::size_t> want{1};
    for (std::size_t k = 0; k < n; ++k) want.push_back(std::size_t{1} << k);
    CHECK(s == want);
  }
  for (std::size_t n = 1; n <= 4; ++n) CHECK(level_quotient(builtin("FGg"), n).suborbit_profile().size() == 2 * n + 1);
}

TEST_CASE("pc representation is used for p-groups") {
  LevelQuotient q(gg(), 5);
  CHECK(q.perms().is_pc());
  CHECK(q.perms().prime() == 2);
  for (const auto& s : q.perms().strong_generators()) CHECK(q.perms().contains(s));
  CHECK_FALSE(q.perms().contains(Perm::from_cycles(32, {{0, 1}})));
  CHECK(log_big(BigInt(1) << 100) == doctest::Approx(100 * std::log(2.0)));
}
