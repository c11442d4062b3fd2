#pragma once

// Corpus generators and brute-force oracles shared by the unit tests and the
// acceptance runner. The oracles deliberately avoid the library's own search
// code: they enumerate raw assignments and subsets.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "twa/fell_bundle.hpp"
#include "twa/groupoid.hpp"
#include "twa/inverse_semigroup.hpp"
#include "twa/twisted_action.hpp"

namespace twa::testing {

struct NamedAction {
  std::string name;
  TwistedAction action;
};

// Untwisted actions of semigroups generated by 1-3 random partial bijections
// of three points, without duplicate Cayley tables.
inline std::vector<NamedAction> sub_i3_actions(std::uint64_t seed, int count) {
  PartialMapSemigroup full = symmetric_inverse_monoid_maps(3);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(full.maps.size()) - 1), ngen(1, 3);
  std::set<std::pair<CayleyTable, std::vector<std::string>>> seen;
  std::vector<NamedAction> out;
  for (int attempt = 0; attempt < 50 * count && static_cast<int>(out.size()) < count; ++attempt) {
    std::vector<PartialBijection> gens;
    std::string name = "sub-I3<";
    for (int k = ngen(rng); k > 0; --k) {
      gens.push_back(full.maps[pick(rng)]);
      name += partial_map_label(gens.back());
    }
    if (std::all_of(gens.begin(), gens.end(), [](const PartialBijection& p) { return p.empty(); })) continue;
    PartialMapSemigroup sub = generated_partial_maps(gens);
    TwistedAction a = untwisted_action(sub);
    if (!seen.insert({a.S().table(), a.point_labels}).second) continue;
    out.push_back({name + ">", std::move(a)});
  }
  return out;
}

struct GroupoidCase {
  std::string name;
  FiniteGroupoid g;
  int den;  // angle grid for the cocycle enumeration
};

inline std::vector<GroupoidCase> cocycle_groupoids() {
  return {{"Z/2", group_groupoid(2), 4},
          {"Z/3", group_groupoid(3), 3},
          {"pair(2)", pair_groupoid(2), 4},
          {"pair(3)", pair_groupoid(3), 2},
          {"transitive(2,Z/2)", transitive_groupoid(2, 2), 2}};
}

// Random gauge: 1 on idempotents, angles k/den elsewhere.
inline Gauge random_gauge(const TwistedAction& a, std::mt19937_64& rng, int den) {
  Gauge chi = trivial_gauge(a);
  std::uniform_int_distribution<int> d(0, den - 1);
  for (int s = 0; s < a.size(); ++s) {
    if (a.S().is_idempotent(s)) continue;
    for (int x : a.U(s)) chi[s](x) = CircleScalar(d(rng), den);
  }
  return chi;
}

// ---- oracles ----

// Associativity, then existence and uniqueness of inverses by direct search.
inline bool oracle_is_inverse_semigroup(const CayleyTable& t) {
  int n = static_cast<int>(t.size());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (t[t[a][b]][c] != t[a][t[b][c]]) return false;
  for (int a = 0; a < n; ++a) {
    int count = 0;
    for (int x = 0; x < n; ++x)
      if (t[t[a][x]][a] == a && t[t[x][a]][x] == x) ++count;
    if (count != 1) return false;
  }
  return true;
}

// Number of normalized cocycles with values k/den, by raw enumeration of all
// assignments on composable pairs of non-units.
inline std::int64_t oracle_cocycle_count(const FiniteGroupoid& g, int den) {
  int n = g.num_arrows();
  std::vector<std::pair<int, int>> vars;
  std::map<std::pair<int, int>, int> var_of;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (g.composable(a, b) && !g.is_unit(a) && !g.is_unit(b)) {
        var_of[{a, b}] = static_cast<int>(vars.size());
        vars.emplace_back(a, b);
      }
  std::vector<std::array<int, 3>> triples;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (g.composable(a, b) && g.composable(b, c)) triples.push_back({a, b, c});
  std::vector<int> val(vars.size(), 0);
  auto tau = [&](int a, int b) {
    auto it = var_of.find({a, b});
    return it == var_of.end() ? 0 : val[it->second];
  };
  std::int64_t count = 0;
  while (true) {
    bool ok = true;
    for (const auto& [a, b, c] : triples) {
      int lhs = tau(a, b) + tau(g.mul(a, b), c), rhs = tau(b, c) + tau(a, g.mul(b, c));
      if ((lhs - rhs) % den != 0) {
        ok = false;
        break;
      }
    }
    if (ok) ++count;
    std::size_t i = 0;
    while (i < val.size() && ++val[i] == den) val[i++] = 0;
    if (i == val.size()) break;
  }
  return count;
}

// Subsets of arrows on which source and range are injective.
inline int oracle_bisection_count(const FiniteGroupoid& g) {
  int n = g.num_arrows(), count = 0;
  for (std::uint32_t m = 0; m < (1u << n); ++m) {
    std::set<int> src, rng;
    bool ok = true;
    for (int a = 0; a < n && ok; ++a)
      if (m & (1u << a)) ok = src.insert(g.src(a)).second && rng.insert(g.rng(a)).second;
    count += ok;
  }
  return count;
}

// Random carriers C_s inside the bisections of s: each arrow is dropped with
// probability `drop`, then arrows are removed until the family is closed
// under products, inverses and the order.
inline std::vector<Bisection> random_closed_carriers(const FiniteGroupoid& g, const BisectionSemigroup& bs,
                                                     std::mt19937_64& rng, double drop) {
  const auto& S = *bs.semigroup;
  int n = S.size();
  std::vector<std::set<int>> c(n);
  std::bernoulli_distribution remove(drop);
  for (int s = 0; s < n; ++s)
    for (int a : bs.bisections[s])
      if (!remove(rng)) c[s].insert(a);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int s = 0; s < n; ++s) {
      for (auto it = c[s].begin(); it != c[s].end();) {
        int a = *it;
        bool bad = !c[S.star(s)].count(g.inv(a));
        for (int t = 0; t < n && !bad; ++t) {
          if (S.leq(s, t) && !c[t].count(a)) bad = true;
          for (int b : c[t])
            if (!bad && g.composable(a, b) && !c[S.mul(s, t)].count(g.mul(a, b))) bad = true;
          for (int b : c[t])
            if (!bad && g.composable(b, a) && !c[S.mul(t, s)].count(g.mul(b, a))) bad = true;
        }
        if (bad) {
          it = c[s].erase(it);
          changed = true;
        } else {
          ++it;
        }
      }
    }
  }
  std::vector<Bisection> out(n);
  for (int s = 0; s < n; ++s) out[s].assign(c[s].begin(), c[s].end());
  return out;
}

inline TwistedAction cocycle_action(const FiniteGroupoid& g, const TwoCocycle& tau) {
  return action_from_cocycle(g, tau, bisection_semigroup(g));
}

}  // namespace twa::testing
