#include <doctest.h>

#include "support.hpp"
#include "twa/io.hpp"

using namespace twa;
using namespace twa::testing;

namespace {

Json busby_smith() {
  return Json::parse(R"({
    "semigroup": {"elements": ["1", "g"], "table": [[0, 1], [1, 0]]},
    "points": ["p"],
    "U": {"1": ["p"]},
    "theta": {"g": {"p": "p"}},
    "omega": {"g,g": {"p": "1/2"}}
  })");
}

bool same_action(const TwistedAction& a, const TwistedAction& b) {
  return a.S().table() == b.S().table() && a.point_labels == b.point_labels &&
         action_to_json(a) == action_to_json(b);
}

}  // namespace

TEST_CASE("action defaults") {
  TwistedAction a = parse_action(busby_smith());
  int g = a.S().index_of("g");
  CHECK(a.U(g) == std::vector<int>{0});
  CHECK(a.w(g, g)(0) == CircleScalar(1, 2));
  CHECK(a.w(0, g)(0).is_one());
  CHECK(verify_twisted_action(a).ok());
}

TEST_CASE("action round trip") {
  for (const auto& na : sub_i3_actions(3, 20)) {
    TwistedAction back = parse_action(action_to_json(na.action));
    CHECK(same_action(na.action, back));
  }
  TwistedAction a = parse_action(busby_smith());
  CHECK(same_action(a, parse_action(action_to_json(a))));
}

TEST_CASE("groupoid round trip") {
  for (const auto& gc : cocycle_groupoids())
    for (const auto& tau : enumerate_normalized_cocycles(gc.g, gc.den)) {
      GroupoidDocument d = parse_groupoid(groupoid_to_json(gc.g, tau));
      CHECK(d.groupoid.num_arrows() == gc.g.num_arrows());
      CHECK(groupoid_to_json(d.groupoid, d.tau) == groupoid_to_json(gc.g, tau));
    }
}

TEST_CASE("malformed documents are input errors") {
  Json j = busby_smith();
  j["semigroup"]["table"] = Json::array({Json::array({0, 1})});
  CHECK_THROWS_AS(parse_action(j), InputError);

  j = busby_smith();
  j.erase("theta");
  CHECK_THROWS_AS(parse_action(j), InputError);

  j = busby_smith();
  j["U"] = Json::object();
  CHECK_THROWS_AS(parse_action(j), InputError);

  j = busby_smith();
  j["omega"]["g,h"] = {{"p", "1/2"}};
  CHECK_THROWS_AS(parse_action(j), InputError);

  j = busby_smith();
  j["points"] = "p";
  CHECK_THROWS_AS(parse_action(j), InputError);

  CHECK_THROWS_AS(parse_matrix(Json::parse("[[1, 2], [3]]")), InputError);
  CHECK_THROWS_AS(parse_matrix(Json::parse("[]")), InputError);
}

TEST_CASE("pair keys whose labels contain commas") {
  Json j = Json::parse(R"({
    "semigroup": {"elements": ["1", "a,b"], "table": [[0, 1], [1, 0]]},
    "points": ["p"],
    "U": {"1": ["p"]},
    "theta": {"a,b": {"p": "p"}},
    "omega": {"a,b,a,b": {"p": "1/2"}}
  })");
  TwistedAction a = parse_action(j);
  CHECK(a.w(1, 1)(0) == CircleScalar(1, 2));
  // "a,b,1" splits as ("a,b", "1") only.
  j["omega"] = {{"a,b,1", {{"p", "0"}}}};
  CHECK_NOTHROW(parse_action(j));
  // With elements "a", "b,a" and "a,b" the key "a,b,a" is ambiguous.
  Json k = Json::parse(R"({
    "semigroup": {"elements": ["1", "a", "a,b", "b,a", "0"],
                  "table": [[0,1,2,3,4],[1,1,4,4,4],[2,4,2,4,4],[3,4,4,3,4],[4,4,4,4,4]]},
    "points": [],
    "U": {"1": [], "a": [], "a,b": [], "b,a": [], "0": []},
    "omega": {"a,a": {}}
  })");
  CHECK_NOTHROW(parse_action(k));
  k["omega"] = {{"a,b,a", Json::object()}};
  CHECK_THROWS_AS(parse_action(k), InputError);
}

TEST_CASE("matrices") {
  Matrix m = parse_matrix(Json::parse("[[1, [0, 1]], [[2, -1], 0.5]]"));
  CHECK(m(0, 1) == Complex(0, 1));
  CHECK(m(1, 0) == Complex(2, -1));
  CHECK(parse_matrix(matrix_to_json(m)) == m);
}

TEST_CASE("digest") {
  CHECK(fnv1a64_hex("") == "cbf29ce484222325");
  CHECK(fnv1a64_hex("a") == "af63dc4c8601ec8c");
}
