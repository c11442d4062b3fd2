#include <doctest.h>

#include <random>

#include "support.hpp"
#include "twa/groupoid.hpp"

using namespace twa;
using namespace twa::testing;

TEST_CASE("builders produce groupoids of the expected shape") {
  auto pg = pair_groupoid(3);
  CHECK(pg.num_objects() == 3);
  CHECK(pg.num_arrows() == 9);
  int a = pg.index_of("(0,1)");
  CHECK(pg.src(a) == 1);
  CHECK(pg.rng(a) == 0);
  CHECK(pg.arrow_label(pg.inv(a)) == "(1,0)");
  CHECK(pg.mul(a, pg.index_of("(2,0)")) == -1);
  CHECK(pg.arrow_label(pg.mul(a, pg.index_of("(1,2)"))) == "(0,2)");
  auto t = transitive_groupoid(2, 2);
  CHECK(t.num_arrows() == 8);
  auto z3 = group_groupoid(3);
  CHECK(z3.num_objects() == 1);
  CHECK(z3.arrow_label(1) == "g1");
  auto u = disjoint_union(z3, pg);
  CHECK(u.num_arrows() == 12);
  CHECK(u.object_label(1) == "1.x0");
}

TEST_CASE("from_data rejects broken composition data") {
  std::vector<FiniteGroupoid::Arrow> arrows = {{"1", 0, 0}, {"g", 0, 0}};
  CHECK_NOTHROW(FiniteGroupoid::from_data({"p"}, arrows, {{0, 0, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}}));
  CHECK_THROWS_AS(FiniteGroupoid::from_data({"p"}, arrows, {{0, 0, 0}, {0, 1, 1}, {1, 0, 1}}), Error);
  CHECK_THROWS_AS(FiniteGroupoid::from_data({"p"}, arrows, {{0, 0, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 1}}), Error);
}

TEST_CASE("bisection counts agree with subset enumeration") {
  for (const auto& g : {pair_groupoid(2), pair_groupoid(3), transitive_groupoid(2, 2), group_groupoid(3)}) {
    auto bs = bisection_semigroup(g);
    CHECK(static_cast<int>(bs.bisections.size()) == oracle_bisection_count(g));
    CHECK(bs.wide());
    for (const auto& b : bs.bisections) CHECK(is_bisection(g, b));
  }
  CHECK(bisection_semigroup(pair_groupoid(2)).bisections.size() == 7);
}

TEST_CASE("generated bisection semigroups") {
  auto g = pair_groupoid(2);
  std::vector<Bisection> gens = {{g.index_of("(0,1)"), g.index_of("(1,0)")}};
  auto bs = bisection_semigroup(g, gens, false);
  CHECK(bs.bisections.size() == 2);
  CHECK(bs.covers);
  CHECK_FALSE(bs.intersection_closed);
  // Closing under intersections adds the empty bisection.
  auto closed = bisection_semigroup(g, gens);
  CHECK(closed.bisections.size() == 3);
  CHECK(closed.wide());
  CHECK_THROWS(bisection_semigroup(g, std::vector<Bisection>{{g.index_of("(0,0)"), g.index_of("(1,0)")}}));
}

TEST_CASE("cocycle counts match the raw enumeration") {
  for (const auto& gc : cocycle_groupoids()) {
    auto all = enumerate_normalized_cocycles(gc.g, gc.den);
    CHECK_MESSAGE(static_cast<std::int64_t>(all.size()) == oracle_cocycle_count(gc.g, gc.den), gc.name);
    for (const auto& tau : all) CHECK(verify_cocycle(gc.g, tau).empty());
  }
  // Frozen from the enumeration above.
  CHECK(enumerate_normalized_cocycles(group_groupoid(2), 4).size() == 4);
  CHECK(enumerate_normalized_cocycles(group_groupoid(3), 3).size() == 9);
  CHECK(enumerate_normalized_cocycles(pair_groupoid(2), 4).size() == 4);
  CHECK(enumerate_normalized_cocycles(pair_groupoid(3), 2).size() == 16);
  CHECK(enumerate_normalized_cocycles(transitive_groupoid(2, 2), 2).size() == 32);
}

TEST_CASE("coboundaries of cocycles are cocycles") {
  std::mt19937_64 rng(4);
  auto g = transitive_groupoid(2, 2);
  for (const auto& tau : enumerate_normalized_cocycles(g, 2)) {
    std::vector<CircleScalar> c(g.num_arrows());
    for (int a = 0; a < g.num_arrows(); ++a)
      c[a] = g.is_unit(a) ? CircleScalar::one() : CircleScalar(static_cast<std::int64_t>(rng() % 6), 6);
    CHECK(verify_cocycle(g, coboundary_transform(g, tau, c)).empty());
  }
  TwoCocycle bad = TwoCocycle::trivial(g);
  bad.at(g.unit(0), g.unit(0)) = CircleScalar(1, 2);
  CHECK(contains_rule(verify_cocycle(g, bad), "normalization"));
}

TEST_CASE("twist multiplication is associative with inverses") {
  auto g = pair_groupoid(3);
  auto all = enumerate_normalized_cocycles(g, 2);
  const TwoCocycle& tau = all.back();
  for (int a = 0; a < g.num_arrows(); ++a) {
    TwistElement x{CircleScalar(1, 5), a};
    TwistElement xi = twist_inverse(g, tau, x);
    CHECK(twist_multiply(g, tau, x, xi) == TwistElement{CircleScalar::one(), g.unit(g.rng(a))});
    for (int b = 0; b < g.num_arrows(); ++b)
      for (int c = 0; c < g.num_arrows(); ++c) {
        if (!g.composable(a, b) || !g.composable(b, c)) continue;
        TwistElement y{CircleScalar(1, 3), b}, z{CircleScalar(2, 7), c};
        CHECK(twist_multiply(g, tau, twist_multiply(g, tau, x, y), z) ==
              twist_multiply(g, tau, x, twist_multiply(g, tau, y, z)));
      }
  }
  CHECK_THROWS_AS(twist_multiply(g, tau, {CircleScalar::one(), g.index_of("(0,1)")},
                                 {CircleScalar::one(), g.index_of("(0,1)")}),
                  Error);
}

TEST_CASE("cocycle actions carry tau on ranges of products") {
  for (const auto& gc : cocycle_groupoids()) {
    auto bs = bisection_semigroup(gc.g);
    for (const auto& tau : enumerate_normalized_cocycles(gc.g, gc.den)) {
      TwistedAction a = action_from_cocycle(gc.g, tau, bs);
      CHECK(verify_twisted_action(a).ok());
      CHECK(check_sieben(a).holds);
      for (int s = 0; s < a.size(); ++s)
        for (int t = 0; t < a.size(); ++t)
          for (int x : bs.bisections[s])
            for (int y : bs.bisections[t])
              if (gc.g.composable(x, y)) CHECK(a.w(s, t)(gc.g.rng(gc.g.mul(x, y))) == tau.at(x, y));
      auto iso = germ_recovers_groupoid(gc.g, tau, bs);
      CHECK(iso.isomorphic);
      CHECK(iso.twist_matches);
      CHECK(iso.germ_count == gc.g.num_arrows());
    }
  }
}

TEST_CASE("section bundles") {
  auto g = transitive_groupoid(2, 2);
  auto bs = bisection_semigroup(g);
  for (const auto& tau : enumerate_normalized_cocycles(g, 2)) {
    SemiAbelianBundle b = section_bundle(g, tau, bs);
    CHECK(verify_fell_bundle(b).empty());
    BundleClass c = classify_bundle(b);
    CHECK(c.saturated);
    CHECK(c.semi_abelian);
    // The section bundle and the bundle of the cocycle action give the same action.
    CHECK(extract_action(b, canonical_unit_family(b)) == action_from_cocycle(g, tau, bs));
  }
}

TEST_CASE("carriers must be closed") {
  auto g = pair_groupoid(2);
  auto bs = bisection_semigroup(g);
  std::vector<Bisection> carriers = bs.bisections;
  // Dropping (0,1) from the swap bisection alone breaks inverse closure.
  int swap = bs.index_of({g.index_of("(0,1)"), g.index_of("(1,0)")});
  carriers[swap] = {g.index_of("(1,0)")};
  CHECK_THROWS_AS(section_bundle(g, TwoCocycle::trivial(g), bs, carriers), Error);
  std::mt19937_64 rng(1);
  int nonsaturated = 0;
  for (int k = 0; k < 20; ++k) {
    auto c = random_closed_carriers(g, bs, rng, 0.3);
    SemiAbelianBundle b = section_bundle(g, TwoCocycle::trivial(g), bs, c);
    CHECK(verify_fell_bundle(b).empty());
    nonsaturated += !classify_bundle(b).saturated;
  }
  CHECK(nonsaturated > 0);
}

TEST_CASE("non-covering semigroups are refused") {
  auto g = pair_groupoid(2);
  std::vector<Bisection> gens = {{g.index_of("(0,0)")}};
  auto bs = bisection_semigroup(g, gens);
  CHECK_THROWS_AS(section_bundle(g, TwoCocycle::trivial(g), bs), Error);
}
