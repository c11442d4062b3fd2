#include <doctest.h>

#include <random>

#include "support.hpp"
#include "twa/inverse_semigroup.hpp"

using namespace twa;
using namespace twa::testing;

TEST_CASE("symmetric inverse monoid sizes") {
  // sum over r of C(k,r)^2 r!
  const int expected[] = {0, 2, 7, 34, 209};
  for (int k = 1; k <= 4; ++k) {
    auto s = symmetric_inverse_monoid(k);
    CHECK(s.size() == expected[k]);
    CHECK(static_cast<int>(s.idempotents().size()) == (1 << k));
  }
  CHECK_THROWS(symmetric_inverse_monoid_maps(5));
}

TEST_CASE("library diagnosis agrees with the brute-force oracle") {
  CHECK(oracle_is_inverse_semigroup(symmetric_inverse_monoid(3).table()));
  CHECK(oracle_is_inverse_semigroup(five_element_semigroup().table()));
  std::mt19937_64 rng(5);
  int agree = 0;
  for (int k = 0; k < 3000; ++k) {
    int n = 1 + static_cast<int>(rng() % 4);
    CayleyTable t(n, std::vector<int>(n));
    for (auto& row : t)
      for (int& x : row) x = static_cast<int>(rng() % n);
    bool lib = !diagnose_inverse_semigroup(t, true).has_value();
    CHECK(lib == oracle_is_inverse_semigroup(t));
    agree += lib;
  }
  CHECK(agree > 0);
}

TEST_CASE("diagnostics name the failing law") {
  auto d = diagnose_inverse_semigroup({{1, 2, 0}, {2, 0, 1}, {1, 1, 1}});
  REQUIRE(d);
  CHECK(d->kind == IsgFailure::NonAssociative);
  auto& w = d->witness;
  CayleyTable t = {{1, 2, 0}, {2, 0, 1}, {1, 1, 1}};
  CHECK(t[t[w[0]][w[1]]][w[2]] != t[w[0]][t[w[1]][w[2]]]);
  // Left-zero band: associative, idempotents do not commute.
  auto band = diagnose_inverse_semigroup({{0, 0}, {1, 1}});
  REQUIRE(band);
  CHECK(band->kind != IsgFailure::NonAssociative);
  auto bad = diagnose_inverse_semigroup({{0, 3}, {1, 1}});
  REQUIRE(bad);
  CHECK(bad->kind == IsgFailure::BadEntry);
  CHECK_THROWS_AS(InverseSemigroup::from_table({{0, 0}, {1, 1}}), Error);
}

TEST_CASE("five element semigroup") {
  auto s = five_element_semigroup();
  int a = s.index_of("s"), as = s.index_of("s*"), z = s.index_of("0");
  CHECK(s.star(a) == as);
  CHECK(s.mul(a, a) == z);
  CHECK(s.source(a) == s.index_of("s*s"));
  CHECK(s.range(a) == s.index_of("ss*"));
  CHECK(s.idempotents().size() == 3);
  CHECK(s.leq(z, a));
  CHECK_FALSE(s.leq(a, z));
  CHECK_THROWS_AS(s.index_of("t"), InputError);
}

TEST_CASE("natural order is a partial order matching e t") {
  auto s = symmetric_inverse_monoid(3);
  int n = s.size();
  for (int a = 0; a < n; ++a) {
    CHECK(s.leq(a, a));
    for (int b = 0; b < n; ++b) {
      bool oracle = false;
      for (int e : s.idempotents()) oracle = oracle || s.mul(e, b) == a;
      CHECK(s.leq(a, b) == oracle);
      if (s.leq(a, b) && s.leq(b, a)) CHECK(a == b);
      for (int c = 0; c < n; ++c)
        if (s.leq(a, b) && s.leq(b, c)) CHECK(s.leq(a, c));
    }
  }
}

TEST_CASE("products follow composition of partial maps") {
  auto pm = symmetric_inverse_monoid_maps(3);
  const auto& s = *pm.semigroup;
  for (int a = 0; a < s.size(); ++a) {
    CHECK(pm.maps[s.star(a)] == pm.maps[a].inverse());
    for (int b = 0; b < s.size(); ++b) CHECK(pm.maps[s.mul(a, b)] == compose(pm.maps[a], pm.maps[b]));
  }
}

TEST_CASE("generated sub-semigroups are closed") {
  auto full = symmetric_inverse_monoid_maps(3);
  auto sub = generated_partial_maps({full.maps[10], full.maps[20]});
  CHECK(oracle_is_inverse_semigroup(sub.semigroup->table()));
  for (const auto& m : sub.maps) CHECK(std::find(sub.maps.begin(), sub.maps.end(), m.inverse()) != sub.maps.end());
}

TEST_CASE("homomorphism checks") {
  auto s = symmetric_inverse_monoid_maps(2).semigroup;
  IsgHomomorphism id{s, s, {}};
  for (int a = 0; a < s->size(); ++a) id.map.push_back(a);
  CHECK_FALSE(homomorphism_failure(id));
  CHECK(is_surjective(id));
  CHECK(is_essentially_injective(id));
  // Everything to the zero map: multiplicative, but not essentially injective.
  int zero = 0;
  for (int a = 0; a < s->size(); ++a)
    if (s->mul(a, a) == a && s->mul(a, 0) == a && s->mul(0, a) == a) zero = a;
  IsgHomomorphism collapse{s, s, std::vector<int>(s->size(), zero)};
  CHECK_FALSE(homomorphism_failure(collapse));
  CHECK_FALSE(is_surjective(collapse));
  CHECK_FALSE(is_essentially_injective(collapse));
  IsgHomomorphism broken = id;
  std::swap(broken.map[1], broken.map[2]);
  CHECK(homomorphism_failure(broken).has_value());
}

TEST_CASE("cyclic groups") {
  auto g = cyclic_group(3);
  CHECK(g.size() == 3);
  CHECK(g.idempotents().size() == 1);
  CHECK(g.label(1) == "g1");
  CHECK(cyclic_group(2).label(1) == "g");
}
