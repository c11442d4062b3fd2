#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "twa/common.hpp"
#include "twa/groupoid.hpp"
#include "twa/inverse_semigroup.hpp"
#include "twa/tro.hpp"
#include "twa/twisted_action.hpp"

namespace twa {

using Json = nlohmann::ordered_json;

// All parsers throw InputError on malformed documents; structural problems
// of well-formed data surface as twa::Error from the constructors.

// {"elements": [...], "table": [[...]]}; "elements" is optional.
InverseSemigroup parse_semigroup(const Json& j);
Json semigroup_to_json(const InverseSemigroup& s);

// {"semigroup": ..., "points": [...], "U": {"s": [x]}, "theta": {"s": {"x": "y"}},
//  "omega": {"s,t": {"y": "p/q"}}}. U defaults to U(ss*) for non-idempotents,
// theta to the identity on idempotents, omega entries to 1.
TwistedAction parse_action(const Json& j);
Json action_to_json(const TwistedAction& a);

struct GroupoidDocument {
  FiniteGroupoid groupoid;
  TwoCocycle tau;
  std::optional<std::vector<Bisection>> generators;
  bool close_intersections = true;
  // (bisection, carrier) overrides for section bundles.
  std::vector<std::pair<Bisection, Bisection>> carriers;
};

// {"objects": [...], "arrows": [{"id", "src", "rng"}], "comp": [["a","b","ab"]],
//  "tau": {"a,b": "p/q"}, "bisections": [["a", ...]], "intersections": bool,
//  "carriers": [{"bisection": [...], "carrier": [...]}]}
GroupoidDocument parse_groupoid(const Json& j);
Json groupoid_to_json(const FiniteGroupoid& g, const TwoCocycle& tau);
BisectionSemigroup document_bisections(const GroupoidDocument& d);
// Carrier per element of s, from the overrides (full bisection otherwise).
std::optional<std::vector<Bisection>> document_carriers(const GroupoidDocument& d, const BisectionSemigroup& s);

// Rows of [re, im] pairs or plain reals.
Matrix parse_matrix(const Json& j);
Json matrix_to_json(const Matrix& m);

Json violations_to_json(const std::vector<Violation>& v);
std::string fnv1a64_hex(std::string_view data);

}  // namespace twa
