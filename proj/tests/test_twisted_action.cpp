#include <doctest.h>

#include <random>

#include "support.hpp"
#include "twa/twisted_action.hpp"

using namespace twa;
using namespace twa::testing;

TEST_CASE("untwisted actions of I_k are valid") {
  for (int k = 1; k <= 3; ++k) {
    TwistedAction a = untwisted_action(symmetric_inverse_monoid_maps(k));
    CHECK(a.num_points() == k);
    CHECK(verify_twisted_action(a).ok());
    CHECK(verify_consequences(a).empty());
    CHECK(check_sieben(a).holds);
    // Germs of I_k acting on k points: one per ordered pair of points.
    GermGroupoid g = germ_groupoid(a);
    CHECK(g.size() == k * k);
    CHECK(g.inconsistencies().empty());
  }
}

TEST_CASE("Busby-Smith action of Z/2") {
  TwistedAction a = busby_smith_z2();
  CHECK(verify_twisted_action(a).ok());
  CHECK(verify_consequences(a).empty());
  CHECK(check_sieben(a).holds);
  GermGroupoid g = germ_groupoid(a);
  REQUIRE(g.size() == 2);
  int gg = g.is_unit(0) ? 1 : 0;
  CHECK(g.cocycle(gg, gg) == CircleScalar(1, 2));
  CHECK(g.inverse(gg) == gg);
  auto c = g.compose(gg, gg);
  REQUIRE(c);
  CHECK(g.is_unit(*c));
}

TEST_CASE("structural defects are reported before axioms") {
  TwistedAction a = untwisted_action(symmetric_inverse_monoid_maps(2));
  int s = -1;
  for (int t = 0; t < a.size(); ++t)
    if (!a.S().is_idempotent(t)) s = t;
  a.theta[s] = PartialBijection(a.num_points());
  auto r = verify_twisted_action(a);
  CHECK_FALSE(r.structural.empty());
  CHECK(r.axioms.empty());
}

TEST_CASE("idempotent normalization is enforced") {
  TwistedAction a = untwisted_action(symmetric_inverse_monoid_maps(2));
  int e = a.S().idempotents().back();
  REQUIRE(!a.U(e).empty());
  a.w(e, e)(a.U(e).front()) = CircleScalar(1, 2);
  auto r = verify_twisted_action(a);
  CHECK(contains_rule(r.axioms, "omega(e,f)=1"));
}

TEST_CASE("gauge transforms preserve validity and are undone by their conjugate") {
  std::mt19937_64 rng(3);
  for (const auto& na : sub_i3_actions(4, 20)) {
    Gauge chi = random_gauge(na.action, rng, 6);
    TwistedAction b = gauge_transform(na.action, chi);
    CHECK(verify_twisted_action(b).ok());
    CHECK(verify_consequences(b).empty());
    CHECK(gauge_transform(b, conjugate(chi)) == na.action);
  }
  TwistedAction a = busby_smith_z2();
  Gauge bad = trivial_gauge(a);
  bad[0](0) = CircleScalar(1, 3);
  CHECK_THROWS_AS(gauge_transform(a, bad), Error);
}

TEST_CASE("siebenize fixes gauged actions") {
  std::mt19937_64 rng(8);
  int had_defect = 0;
  for (const auto& na : sub_i3_actions(9, 25)) {
    TwistedAction b = gauge_transform(na.action, random_gauge(na.action, rng, 4));
    had_defect += !check_sieben(b).holds;
    Siebenization s = siebenize(b);
    CHECK(check_sieben(s.action).holds);
    CHECK(verify_twisted_action(s.action).ok());
    CHECK(gauge_transform(b, s.chi) == s.action);
  }
  CHECK(had_defect > 0);
}

TEST_CASE("single omega mutations on Z/2 bisections") {
  // omega({g},{g}) is unconstrained by the axioms on Z/2: every value is a cocycle.
  auto g = group_groupoid(2);
  BisectionSemigroup bs = bisection_semigroup(g);
  TwistedAction a = action_from_cocycle(g, TwoCocycle::trivial(g), bs);
  int s = bs.index_of({1}), e = bs.index_of({0});
  TwistedAction m = a;
  m.w(s, s)(0) = CircleScalar(1, 3);
  CHECK(verify_twisted_action(m).ok());
  // Changing omega at an idempotent pair is always caught.
  TwistedAction n = a;
  n.w(e, s)(0) = CircleScalar(1, 3);
  CHECK_FALSE(verify_twisted_action(n).ok());
}

TEST_CASE("germ groupoid laws") {
  auto pg = transitive_groupoid(2, 2);
  TwoCocycle tau = enumerate_normalized_cocycles(pg, 2).back();
  TwistedAction a = cocycle_action(pg, tau);
  GermGroupoid g = germ_groupoid(a);
  CHECK(g.size() == 8);
  for (int x = 0; x < g.size(); ++x) {
    CHECK(g.compose(x, g.inverse(x)) == g.unit(g.range(x)));
    CHECK(g.compose(g.unit(g.range(x)), x) == x);
    for (int y = 0; y < g.size(); ++y) {
      auto xy = g.compose(x, y);
      CHECK(xy.has_value() == (g.source(x) == g.range(y)));
      for (int z = 0; z < g.size() && xy; ++z) {
        auto yz = g.compose(y, z);
        if (!yz) continue;
        CHECK(g.compose(*xy, z) == g.compose(x, *yz));
        // The germ twist is a cocycle.
        CHECK(g.cocycle(x, y) * g.cocycle(*xy, z) == g.cocycle(y, z) * g.cocycle(x, *yz));
      }
    }
  }
}

TEST_CASE("axiom four search on a tiny shape") {
  TwistedAction shape = busby_smith_z2();
  auto r = search_axiom_four_independence(shape, 4, 1000, 1);
  CHECK(r.exhaustive);
  CHECK(r.candidates == 4);
  CHECK(r.satisfying_first_three == 4);
  CHECK(r.counterexamples.empty());
  auto big = search_axiom_four_independence(untwisted_action(symmetric_inverse_monoid_maps(2)), 3, 200, 2);
  CHECK(big.candidates <= 200);
  for (const auto& c : big.counterexamples) CHECK_FALSE(verify_twisted_action(c).ok());
}

TEST_CASE("diff_actions reports changed fields") {
  TwistedAction a = busby_smith_z2(), b = busby_smith_z2(CircleScalar(1, 4));
  CHECK(diff_actions(a, a).empty());
  CHECK_FALSE(diff_actions(a, b).empty());
}
