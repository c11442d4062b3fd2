#include "twa/groupoid.hpp"

#include <map>
#include <set>

namespace twa {

FiniteGroupoid FiniteGroupoid::from_data(std::vector<std::string> objects, std::vector<Arrow> arrows,
                                         const std::vector<std::array<int, 3>>& comp) {
  FiniteGroupoid g;
  g.objects_ = std::move(objects);
  g.arrows_ = std::move(arrows);
  int n = g.num_arrows(), m = g.num_objects();
  for (const Arrow& a : g.arrows_)
    if (a.src < 0 || a.src >= m || a.rng < 0 || a.rng >= m)
      throw Error("BadComposition", "arrow " + a.label + " has an unknown endpoint");
  g.comp_.assign(static_cast<std::size_t>(n) * n, -1);
  for (const auto& [a, b, c] : comp) {
    if (a < 0 || a >= n || b < 0 || b >= n || c < 0 || c >= n) throw Error("BadComposition", "arrow index out of range");
    if (!g.composable(a, b))
      throw Error("BadComposition", g.arrow_label(a) + "·" + g.arrow_label(b) + " is not composable");
    if (g.src(c) != g.src(b) || g.rng(c) != g.rng(a))
      throw Error("BadComposition", g.arrow_label(a) + "·" + g.arrow_label(b) + " has the wrong endpoints");
    int& slot = g.comp_[static_cast<std::size_t>(a) * n + b];
    if (slot >= 0 && slot != c) throw Error("BadComposition", "two values for " + g.arrow_label(a) + "·" + g.arrow_label(b));
    slot = c;
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (g.composable(a, b) && g.mul(a, b) < 0)
        throw Error("BadComposition", "missing product " + g.arrow_label(a) + "·" + g.arrow_label(b));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (!g.composable(a, b)) continue;
      for (int c = 0; c < n; ++c)
        if (g.composable(b, c) && g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c)))
          throw Error("NonAssociative", g.arrow_label(a) + "," + g.arrow_label(b) + "," + g.arrow_label(c));
    }
  g.unit_.assign(m, -1);
  for (int x = 0; x < m; ++x) {
    for (int u = 0; u < n && g.unit_[x] < 0; ++u) {
      if (g.src(u) != x || g.rng(u) != x) continue;
      bool neutral = true;
      for (int a = 0; a < n && neutral; ++a) {
        if (g.rng(a) == x && g.mul(u, a) != a) neutral = false;
        if (g.src(a) == x && g.mul(a, u) != a) neutral = false;
      }
      if (neutral) g.unit_[x] = u;
    }
    if (g.unit_[x] < 0) throw Error("BadUnit", "no unit at object " + g.objects_[x]);
  }
  g.inv_.assign(n, -1);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b)
      if (g.composable(a, b) && g.composable(b, a) && g.mul(a, b) == g.unit_[g.rng(a)] &&
          g.mul(b, a) == g.unit_[g.src(a)]) {
        g.inv_[a] = b;
        break;
      }
    if (g.inv_[a] < 0) throw Error("BadInverse", "arrow " + g.arrow_label(a) + " has no inverse");
  }
  return g;
}

int FiniteGroupoid::index_of(const std::string& label) const {
  for (int a = 0; a < num_arrows(); ++a)
    if (arrows_[a].label == label) return a;
  throw InputError("unknown arrow '" + label + "'");
}

FiniteGroupoid transitive_groupoid(int n, int k) {
  if (n < 1 || k < 1) throw InputError("transitive groupoid needs n, k >= 1");
  std::vector<std::string> objects;
  for (int i = 0; i < n; ++i) objects.push_back("x" + std::to_string(i));
  auto id = [&](int i, int j, int a) { return (i * n + j) * k + a; };
  std::vector<FiniteGroupoid::Arrow> arrows;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < k; ++a) {
        std::string label = "(" + std::to_string(i) + "," + std::to_string(j);
        if (k > 1) label += "," + std::to_string(a);
        arrows.push_back({label + ")", j, i});
      }
  std::vector<std::array<int, 3>> comp;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l)
        for (int a = 0; a < k; ++a)
          for (int b = 0; b < k; ++b) comp.push_back({id(i, j, a), id(j, l, b), id(i, l, (a + b) % k)});
  return FiniteGroupoid::from_data(objects, arrows, comp);
}

FiniteGroupoid pair_groupoid(int n) { return transitive_groupoid(n, 1); }

FiniteGroupoid group_groupoid(int n) {
  if (n < 1) throw InputError("group order must be positive");
  std::vector<FiniteGroupoid::Arrow> arrows;
  for (int a = 0; a < n; ++a) arrows.push_back({a == 0 ? "1" : (n == 2 ? "g" : "g" + std::to_string(a)), 0, 0});
  std::vector<std::array<int, 3>> comp;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) comp.push_back({a, b, (a + b) % n});
  return FiniteGroupoid::from_data({"p"}, arrows, comp);
}

FiniteGroupoid disjoint_union(const FiniteGroupoid& g, const FiniteGroupoid& h) {
  std::vector<std::string> objects;
  for (const auto& o : g.object_labels()) objects.push_back("0." + o);
  for (const auto& o : h.object_labels()) objects.push_back("1." + o);
  std::vector<FiniteGroupoid::Arrow> arrows;
  int n = g.num_arrows(), m = g.num_objects();
  for (int a = 0; a < n; ++a) arrows.push_back({"0." + g.arrow_label(a), g.src(a), g.rng(a)});
  for (int a = 0; a < h.num_arrows(); ++a) arrows.push_back({"1." + h.arrow_label(a), h.src(a) + m, h.rng(a) + m});
  std::vector<std::array<int, 3>> comp;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (g.composable(a, b)) comp.push_back({a, b, g.mul(a, b)});
  for (int a = 0; a < h.num_arrows(); ++a)
    for (int b = 0; b < h.num_arrows(); ++b)
      if (h.composable(a, b)) comp.push_back({a + n, b + n, h.mul(a, b) + n});
  return FiniteGroupoid::from_data(objects, arrows, comp);
}

TwoCocycle TwoCocycle::trivial(const FiniteGroupoid& g) {
  TwoCocycle t;
  t.arrows = g.num_arrows();
  t.values.assign(static_cast<std::size_t>(t.arrows) * t.arrows, CircleScalar::one());
  return t;
}

std::vector<Violation> verify_cocycle(const FiniteGroupoid& g, const TwoCocycle& tau) {
  std::vector<Violation> v;
  int n = g.num_arrows();
  if (tau.arrows != n || tau.values.size() != static_cast<std::size_t>(n) * n)
    throw Error("MissingPair", "cocycle size does not match the groupoid");
  for (int a = 0; a < n; ++a) {
    if (!tau.at(a, g.unit(g.src(a))).is_one() || !tau.at(g.unit(g.rng(a)), a).is_one())
      v.push_back({"normalization", g.arrow_label(a), ""});
    for (int b = 0; b < n; ++b) {
      if (!g.composable(a, b)) continue;
      int ab = g.mul(a, b);
      for (int c = 0; c < n; ++c) {
        if (!g.composable(b, c)) continue;
        int bc = g.mul(b, c);
        CircleScalar lhs = tau.at(a, b) * tau.at(ab, c), rhs = tau.at(b, c) * tau.at(a, bc);
        if (lhs != rhs)
          v.push_back({"cocycle identity", g.arrow_label(a) + "," + g.arrow_label(b) + "," + g.arrow_label(c),
                       lhs.str() + " != " + rhs.str()});
      }
    }
  }
  return v;
}

TwoCocycle coboundary_transform(const FiniteGroupoid& g, const TwoCocycle& tau, const std::vector<CircleScalar>& c) {
  int n = g.num_arrows();
  if (static_cast<int>(c.size()) != n) throw Error("CarrierMismatch", "one scalar per arrow required");
  for (int x = 0; x < g.num_objects(); ++x)
    if (!c[g.unit(x)].is_one()) throw Error("GaugeNotUnitAtIdempotent", "scalar at unit " + g.arrow_label(g.unit(x)));
  TwoCocycle out = tau;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (g.composable(a, b)) out.at(a, b) = c[a] * c[b] * c[g.mul(a, b)].conj() * tau.at(a, b);
  return out;
}

std::vector<TwoCocycle> enumerate_normalized_cocycles(const FiniteGroupoid& g, int den, std::int64_t max_assignments) {
  if (den < 1) throw InputError("angle grid denominator must be positive");
  int n = g.num_arrows();
  // Free variables: composable pairs with no unit; the rest are pinned to 1.
  std::vector<std::pair<int, int>> vars;
  std::vector<int> var_of(static_cast<std::size_t>(n) * n, -1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (g.composable(a, b) && !g.is_unit(a) && !g.is_unit(b)) {
        var_of[static_cast<std::size_t>(a) * n + b] = static_cast<int>(vars.size());
        vars.emplace_back(a, b);
      }
  // Each triple is checked once its last variable is assigned.
  std::vector<std::vector<std::array<int, 3>>> due(vars.size() + 1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (!g.composable(a, b)) continue;
      for (int c = 0; c < n; ++c) {
        if (!g.composable(b, c)) continue;
        int last = std::max({var_of[a * n + b], var_of[g.mul(a, b) * n + c], var_of[b * n + c], var_of[a * n + g.mul(b, c)]});
        due[last + 1].push_back({a, b, c});
      }
    }
  TwoCocycle tau = TwoCocycle::trivial(g);
  std::vector<TwoCocycle> out;
  std::int64_t visited = 0;
  auto consistent = [&](int slot) {
    for (const auto& [a, b, c] : due[slot])
      if (tau.at(a, b) * tau.at(g.mul(a, b), c) != tau.at(b, c) * tau.at(a, g.mul(b, c))) return false;
    return true;
  };
  if (!consistent(0)) return out;
  std::vector<int> choice(vars.size(), 0);
  int k = 0;
  int nv = static_cast<int>(vars.size());
  if (nv == 0) {
    out.push_back(tau);
    return out;
  }
  // Iterative backtracking over the grid values of each variable.
  choice[0] = -1;
  while (k >= 0) {
    if (++choice[k] >= den) {
      tau.at(vars[k].first, vars[k].second) = CircleScalar::one();
      --k;
      continue;
    }
    if (++visited > max_assignments) throw Error("TooLarge", "cocycle enumeration exceeds the assignment budget");
    tau.at(vars[k].first, vars[k].second) = CircleScalar(choice[k], den);
    if (!consistent(k + 1)) continue;
    if (k + 1 == nv) {
      out.push_back(tau);
      continue;
    }
    ++k;
    choice[k] = -1;
  }
  return out;
}

TwistElement twist_multiply(const FiniteGroupoid& g, const TwoCocycle& tau, const TwistElement& a,
                            const TwistElement& b) {
  if (!g.composable(a.arrow, b.arrow))
    throw Error("NotComposable", g.arrow_label(a.arrow) + "·" + g.arrow_label(b.arrow));
  return {a.lambda * b.lambda * tau.at(a.arrow, b.arrow), g.mul(a.arrow, b.arrow)};
}

TwistElement twist_inverse(const FiniteGroupoid& g, const TwoCocycle& tau, const TwistElement& a) {
  int ai = g.inv(a.arrow);
  return {(a.lambda * tau.at(ai, a.arrow)).conj(), ai};
}

bool is_bisection(const FiniteGroupoid& g, const Bisection& b) {
  std::set<int> srcs, rngs;
  for (int a : b) {
    if (a < 0 || a >= g.num_arrows()) return false;
    if (!srcs.insert(g.src(a)).second || !rngs.insert(g.rng(a)).second) return false;
  }
  return std::is_sorted(b.begin(), b.end());
}

std::string bisection_label(const FiniteGroupoid& g, const Bisection& b) {
  std::string s = "{";
  for (std::size_t i = 0; i < b.size(); ++i) s += (i ? "," : "") + g.arrow_label(b[i]);
  return s + "}";
}

int BisectionSemigroup::index_of(const Bisection& b) const {
  auto it = std::find(bisections.begin(), bisections.end(), b);
  return it == bisections.end() ? -1 : static_cast<int>(it - bisections.begin());
}

namespace {

Bisection bisection_product(const FiniteGroupoid& g, const Bisection& s, const Bisection& t) {
  Bisection out;
  for (int a : s)
    for (int b : t)
      if (g.composable(a, b)) out.push_back(g.mul(a, b));
  std::sort(out.begin(), out.end());
  return out;
}

Bisection bisection_inverse(const FiniteGroupoid& g, const Bisection& s) {
  Bisection out;
  for (int a : s) out.push_back(g.inv(a));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

BisectionSemigroup bisection_semigroup(const FiniteGroupoid& g, const std::optional<std::vector<Bisection>>& gens,
                                       bool close_intersections) {
  int n = g.num_arrows();
  std::set<Bisection> found;
  if (!gens) {
    if (n > 12) throw Error("TooManyArrows", std::to_string(n) + " arrows; pass generators instead");
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      Bisection b;
      for (int a = 0; a < n; ++a)
        if (mask & (1u << a)) b.push_back(a);
      if (is_bisection(g, b)) found.insert(b);
    }
  } else {
    std::vector<Bisection> frontier;
    for (Bisection b : *gens) {
      std::sort(b.begin(), b.end());
      if (!is_bisection(g, b)) throw Error("NotABisection", bisection_label(g, b));
      if (found.insert(b).second) frontier.push_back(b);
    }
    while (!frontier.empty()) {
      std::vector<Bisection> next;
      std::vector<Bisection> all(found.begin(), found.end());
      auto add = [&](Bisection b) {
        if (found.insert(b).second) next.push_back(std::move(b));
      };
      for (const Bisection& f : frontier) {
        add(bisection_inverse(g, f));
        for (const Bisection& h : all) {
          add(bisection_product(g, f, h));
          add(bisection_product(g, h, f));
          if (close_intersections) {
            Bisection i;
            std::set_intersection(f.begin(), f.end(), h.begin(), h.end(), std::back_inserter(i));
            add(i);
          }
        }
      }
      frontier = std::move(next);
    }
  }
  BisectionSemigroup out;
  out.bisections.assign(found.begin(), found.end());
  std::stable_sort(out.bisections.begin(), out.bisections.end(),
                   [](const Bisection& a, const Bisection& b) { return a.size() < b.size(); });
  std::map<Bisection, int> index;
  for (int i = 0; i < static_cast<int>(out.bisections.size()); ++i) index[out.bisections[i]] = i;
  int m = static_cast<int>(out.bisections.size());
  CayleyTable table(m, std::vector<int>(m));
  std::vector<std::string> labels;
  for (int i = 0; i < m; ++i) {
    labels.push_back(bisection_label(g, out.bisections[i]));
    for (int j = 0; j < m; ++j) table[i][j] = index.at(bisection_product(g, out.bisections[i], out.bisections[j]));
  }
  out.semigroup = std::make_shared<const InverseSemigroup>(InverseSemigroup::from_table(table, labels));
  std::set<int> covered;
  for (const auto& b : out.bisections) covered.insert(b.begin(), b.end());
  out.covers = static_cast<int>(covered.size()) == n;
  out.intersection_closed = true;
  for (int i = 0; i < m && out.intersection_closed; ++i)
    for (int j = 0; j < m; ++j) {
      Bisection x;
      std::set_intersection(out.bisections[i].begin(), out.bisections[i].end(), out.bisections[j].begin(),
                            out.bisections[j].end(), std::back_inserter(x));
      if (!index.count(x)) {
        out.intersection_closed = false;
        break;
      }
    }
  return out;
}

SectionRealization::SectionRealization(std::shared_ptr<const FiniteGroupoid> g, TwoCocycle tau, BisectionSemigroup s,
                                       std::optional<std::vector<Bisection>> carriers)
    : g_(std::move(g)), tau_(std::move(tau)), s_(std::move(s)) {
  if (tau_.arrows != g_->num_arrows()) throw Error("MissingPair", "cocycle size does not match the groupoid");
  if (!s_.covers) throw Error("NotWide", "bisections do not cover every arrow");
  int n = s_.semigroup->size();
  if (!carriers) {
    carriers_ = s_.bisections;
    return;
  }
  if (static_cast<int>(carriers->size()) != n) throw Error("NotClosed", "one carrier per semigroup element required");
  carriers_ = std::move(*carriers);
  const auto& S = *s_.semigroup;
  for (int i = 0; i < n; ++i) {
    std::sort(carriers_[i].begin(), carriers_[i].end());
    if (!std::includes(s_.bisections[i].begin(), s_.bisections[i].end(), carriers_[i].begin(), carriers_[i].end()))
      throw Error("NotClosed", "carrier of " + S.label(i) + " leaves its bisection");
  }
  for (int i = 0; i < n; ++i) {
    for (int a : carriers_[i])
      if (!std::binary_search(carriers_[S.star(i)].begin(), carriers_[S.star(i)].end(), g_->inv(a)))
        throw Error("NotClosed", "carrier of " + S.label(S.star(i)) + " misses an inverse");
    for (int j = 0; j < n; ++j) {
      const Bisection& cij = carriers_[S.mul(i, j)];
      for (int a : carriers_[i])
        for (int b : carriers_[j])
          if (g_->composable(a, b) && !std::binary_search(cij.begin(), cij.end(), g_->mul(a, b)))
            throw Error("NotClosed", "carrier of " + S.label(S.mul(i, j)) + " misses a product");
      if (S.leq(i, j) && !std::includes(carriers_[j].begin(), carriers_[j].end(), carriers_[i].begin(), carriers_[i].end()))
        throw Error("NotClosed", "carrier of " + S.label(i) + " is not inside that of " + S.label(j));
    }
  }
}

int SectionRealization::index_in(int s, int arrow) const {
  const Bisection& c = carriers_[s];
  auto it = std::lower_bound(c.begin(), c.end(), arrow);
  if (it == c.end() || *it != arrow) throw Error("NotClosed", "arrow outside carrier");
  return static_cast<int>(it - c.begin());
}

std::optional<PointTerm> SectionRealization::product(int s, int p, int t, int q) const {
  int a = carriers_[s][p], b = carriers_[t][q];
  if (!g_->composable(a, b)) return std::nullopt;
  return PointTerm{index_in(s_.semigroup->mul(s, t), g_->mul(a, b)), tau_.at(a, b)};
}

PointTerm SectionRealization::adjoint(int s, int p) const {
  int a = carriers_[s][p], ai = g_->inv(a);
  return PointTerm{index_in(s_.semigroup->star(s), ai), tau_.at(ai, a).conj()};
}

PointTerm SectionRealization::include(int t, int s, int p) const {
  return PointTerm{index_in(t, carriers_[s][p]), CircleScalar::one()};
}

SemiAbelianBundle section_bundle(const FiniteGroupoid& g, const TwoCocycle& tau, const BisectionSemigroup& s,
                                 std::optional<std::vector<Bisection>> carriers) {
  return SemiAbelianBundle(
      std::make_shared<SectionRealization>(std::make_shared<const FiniteGroupoid>(g), tau, s, std::move(carriers)));
}

TwistedAction action_from_cocycle(const FiniteGroupoid& g, const TwoCocycle& tau, const BisectionSemigroup& s) {
  const auto& S = *s.semigroup;
  int n = S.size(), m = g.num_objects();
  TwistedAction a;
  a.semigroup = s.semigroup;
  a.point_labels = g.object_labels();
  std::vector<int> covered;
  for (int i = 0; i < n; ++i) {
    std::vector<int> r;
    std::vector<std::pair<int, int>> pairs;
    for (int arrow : s.bisections[i]) {
      r.push_back(g.rng(arrow));
      pairs.emplace_back(g.src(arrow), g.rng(arrow));
    }
    a.ideal.push_back(make_point_set(r));
    a.theta.push_back(PartialBijection::from_pairs(m, pairs));
    if (S.is_idempotent(i)) covered.insert(covered.end(), r.begin(), r.end());
  }
  if (static_cast<int>(make_point_set(covered).size()) != m)
    throw Error("NotWide", "idempotent bisections miss an object");
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      std::vector<std::pair<int, CircleScalar>> vals;
      for (int x : s.bisections[i])
        for (int y : s.bisections[j])
          if (g.composable(x, y)) vals.emplace_back(g.rng(x), tau.at(x, y));
      std::sort(vals.begin(), vals.end());
      PointSet carrier;
      std::vector<CircleScalar> w;
      for (const auto& [p, c] : vals) {
        carrier.push_back(p);
        w.push_back(c);
      }
      a.omega.emplace_back(std::move(carrier), std::move(w));
    }
  }
  return a;
}

GermIsomorphism germ_recovers_groupoid(const FiniteGroupoid& g, const TwoCocycle& tau, const BisectionSemigroup& s) {
  GermIsomorphism r;
  TwistedAction a = action_from_cocycle(g, tau, s);
  GermGroupoid gg = germ_groupoid(a);
  r.germ_count = gg.size();
  r.arrow_count = g.num_arrows();
  std::vector<int> hit(g.num_arrows(), -1);
  for (int k = 0; k < gg.size(); ++k) {
    const auto& germ = gg.germ(k);
    int arrow = -1;
    for (int x : s.bisections[germ.rep])
      if (g.src(x) == germ.x) arrow = x;
    if (arrow < 0) {
      r.counterexample = "germ " + std::to_string(k) + " has no arrow";
      return r;
    }
    if (hit[arrow] >= 0) {
      r.counterexample = "NotSeparating: germs " + std::to_string(hit[arrow]) + " and " + std::to_string(k) +
                         " both map to " + g.arrow_label(arrow);
      return r;
    }
    if (g.rng(arrow) != gg.range(k)) {
      r.counterexample = "range mismatch at " + g.arrow_label(arrow);
      return r;
    }
    hit[arrow] = k;
    r.germ_to_arrow.push_back(arrow);
  }
  for (int arrow = 0; arrow < g.num_arrows(); ++arrow)
    if (hit[arrow] < 0) {
      r.counterexample = "arrow " + g.arrow_label(arrow) + " is not a germ";
      return r;
    }
  r.twist_matches = true;
  for (int k = 0; k < gg.size(); ++k) {
    for (int l = 0; l < gg.size(); ++l) {
      auto kl = gg.compose(k, l);
      int x = r.germ_to_arrow[k], y = r.germ_to_arrow[l];
      if (kl.has_value() != g.composable(x, y) || (kl && r.germ_to_arrow[*kl] != g.mul(x, y))) {
        r.counterexample = "composition differs at " + g.arrow_label(x) + "·" + g.arrow_label(y);
        return r;
      }
      if (kl && gg.cocycle(k, l) != tau.at(x, y)) r.twist_matches = false;
    }
  }
  r.isomorphic = true;
  return r;
}

}  // namespace twa
