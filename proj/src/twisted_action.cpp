#include "twa/twisted_action.hpp"

#include <cmath>
#include <map>
#include <random>
#include <set>

namespace twa {

namespace {

std::string pt(const TwistedAction& a, int x) {
  return x >= 0 && x < a.num_points() ? a.point_labels[x] : "#" + std::to_string(x);
}

std::string el(const TwistedAction& a, int s) { return a.S().label(s); }

std::string angle_of(const std::optional<CircleScalar>& z) { return z ? z->str() : "undefined"; }

CircleFunction ones(const PointSet& u) { return CircleFunction::constant(u, CircleScalar::one()); }

}  // namespace

std::vector<Violation> ActionReport::all() const {
  std::vector<Violation> out = structural;
  out.insert(out.end(), axioms.begin(), axioms.end());
  return out;
}

TwistedAction untwisted_action(const PartialMapSemigroup& maps) {
  const InverseSemigroup& S = *maps.semigroup;
  int k = maps.maps.empty() ? 0 : maps.maps.front().universe();
  std::vector<int> covered;
  for (int e : S.idempotents())
    for (int x : maps.maps[e].domain()) covered.push_back(x);
  covered = make_point_set(covered);
  std::vector<int> relabel(k, -1);
  for (std::size_t i = 0; i < covered.size(); ++i) relabel[covered[i]] = static_cast<int>(i);
  int n = static_cast<int>(covered.size());

  TwistedAction a;
  a.semigroup = maps.semigroup;
  for (int x : covered) a.point_labels.push_back("x" + std::to_string(x));
  for (int s = 0; s < S.size(); ++s) {
    std::vector<std::pair<int, int>> pairs;
    for (int x = 0; x < k; ++x) {
      if (auto y = maps.maps[s].apply(x)) {
        // Every point in the domain of some map also lies in the domain of its
        // source idempotent, so it was kept.
        pairs.emplace_back(relabel[x], relabel[*y]);
      }
    }
    a.theta.push_back(PartialBijection::from_pairs(n, pairs));
    a.ideal.push_back(a.theta.back().range());
  }
  for (int s = 0; s < S.size(); ++s)
    for (int t = 0; t < S.size(); ++t) a.omega.push_back(ones(a.ideal[S.mul(s, t)]));
  return a;
}

TwistedAction trivial_action(std::shared_ptr<const InverseSemigroup> s, int points) {
  TwistedAction a;
  a.semigroup = std::move(s);
  PointSet all;
  for (int x = 0; x < points; ++x) {
    all.push_back(x);
    a.point_labels.push_back("x" + std::to_string(x));
  }
  int n = a.S().size();
  a.ideal.assign(n, all);
  a.theta.assign(n, PartialBijection::identity_on(points, all));
  a.omega.assign(static_cast<std::size_t>(n) * n, ones(all));
  return a;
}

TwistedAction busby_smith_z2(CircleScalar angle) {
  TwistedAction a = trivial_action(std::make_shared<const InverseSemigroup>(cyclic_group(2)), 1);
  a.point_labels = {"p"};
  a.w(1, 1) = CircleFunction::constant({0}, angle);
  return a;
}

std::vector<std::string> diff_actions(const TwistedAction& a, const TwistedAction& b) {
  std::vector<std::string> out;
  if (a.semigroup->table() != b.semigroup->table()) out.push_back("semigroup tables differ");
  if (a.point_labels != b.point_labels) out.push_back("point sets differ");
  if (!out.empty() || a.size() != static_cast<int>(a.ideal.size()) || b.size() != static_cast<int>(b.ideal.size()))
    return out;
  for (int s = 0; s < a.size(); ++s) {
    if (a.ideal[s] != b.ideal[s]) out.push_back("U(" + el(a, s) + ") differs");
    if (!(a.theta[s] == b.theta[s])) out.push_back("theta(" + el(a, s) + ") differs");
  }
  for (int s = 0; s < a.size(); ++s) {
    for (int t = 0; t < a.size(); ++t) {
      const auto& f = a.w(s, t);
      const auto& g = b.w(s, t);
      if (f == g) continue;
      std::string d = "omega(" + el(a, s) + "," + el(a, t) + ") differs:";
      for (int x : unite(f.carrier(), g.carrier()))
        if (f.at(x) != g.at(x)) d += " " + pt(a, x) + ":" + angle_of(f.at(x)) + " vs " + angle_of(g.at(x));
      out.push_back(d);
    }
  }
  return out;
}

std::vector<Violation> structural_violations(const TwistedAction& a) {
  std::vector<Violation> v;
  int n = a.size();
  int np = a.num_points();
  if (static_cast<int>(a.ideal.size()) != n || static_cast<int>(a.theta.size()) != n ||
      a.omega.size() != static_cast<std::size_t>(n) * n) {
    v.push_back({"shape", "", "ideal/theta/omega sizes do not match the semigroup"});
    return v;
  }
  const auto& S = a.S();
  for (int s = 0; s < n; ++s) {
    for (int x : a.U(s))
      if (x < 0 || x >= np) v.push_back({"points", "U(" + el(a, s) + ")", "point index out of range"});
    if (a.theta[s].universe() != np) {
      v.push_back({"points", "theta(" + el(a, s) + ")", "defined on the wrong point set"});
      continue;
    }
    if (a.U(s) != a.U(S.range(s))) v.push_back({"U(s)=U(ss*)", "s=" + el(a, s), ""});
    if (a.theta[s].domain() != a.U(S.source(s))) v.push_back({"dom theta_s=U(s*s)", "s=" + el(a, s), ""});
    if (a.theta[s].range() != a.U(S.range(s))) v.push_back({"ran theta_s=U(ss*)", "s=" + el(a, s), ""});
    if (S.is_idempotent(s) && !(a.theta[s] == PartialBijection::identity_on(np, a.U(s))))
      v.push_back({"theta_e=id", "e=" + el(a, s), ""});
  }
  PointSet cover;
  for (int e : S.idempotents()) cover = unite(cover, a.U(e));
  if (static_cast<int>(cover.size()) != np) v.push_back({"cover", "", "idempotent ideals do not cover X"});
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t)
      if (a.w(s, t).carrier() != a.U(S.mul(s, t)))
        v.push_back({"carrier omega(s,t)=U(st)", "s=" + el(a, s) + ",t=" + el(a, t), ""});
  return v;
}

namespace {

// The cocycle axiom for a fixed r. The left side evaluates omega(s,t) at
// theta_r^{-1}(y): beta_r is applied after multiplying by omega(s,t) on the
// domain side, so the point must be carried back along theta_r.
void axiom_two_for(const TwistedAction& a, int r, std::vector<Violation>& out, bool stop_at_first) {
  const auto& S = a.S();
  int n = a.size();
  for (int s = 0; s < n; ++s) {
    int rs = S.mul(r, s);
    for (int t = 0; t < n; ++t) {
      int st = S.mul(s, t);
      PointSet dom = intersect(a.U(S.source(r)), a.U(st));
      for (int x : dom) {
        int y = *a.theta[r].apply(x);
        auto l1 = a.w(s, t).at(x), l2 = a.w(r, st).at(y), r1 = a.w(r, s).at(y), r2 = a.w(rs, t).at(y);
        if (!(l1 && l2 && r1 && r2) || *l1 * *l2 != *r1 * *r2) {
          std::string lhs = l1 && l2 ? (*l1 * *l2).str() : "undefined";
          std::string rhs = r1 && r2 ? (*r1 * *r2).str() : "undefined";
          out.push_back({"cocycle",
                         "r=" + el(a, r) + ",s=" + el(a, s) + ",t=" + el(a, t) + ",y=" + pt(a, y),
                         "lhs=" + lhs + " rhs=" + rhs});
          if (stop_at_first) return;
        }
      }
    }
  }
}

void check_one(const TwistedAction& a, const CircleFunction& f, const std::string& rule, const std::string& where,
               std::vector<Violation>& out) {
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!f.values()[i].is_one()) {
      out.push_back({rule, where + ",x=" + pt(a, f.carrier()[i]), "value=" + f.values()[i].str()});
      return;
    }
  }
}

void axiom_three(const TwistedAction& a, std::vector<Violation>& out) {
  const auto& S = a.S();
  for (int e : S.idempotents())
    for (int f : S.idempotents())
      check_one(a, a.w(e, f), "omega(e,f)=1", "e=" + el(a, e) + ",f=" + el(a, f), out);
  for (int r = 0; r < a.size(); ++r) {
    check_one(a, a.w(r, S.source(r)), "omega(r,r*r)=1", "r=" + el(a, r), out);
    check_one(a, a.w(S.range(r), r), "omega(rr*,r)=1", "r=" + el(a, r), out);
  }
}

void axiom_four(const TwistedAction& a, std::vector<Violation>& out, bool stop_at_first) {
  const auto& S = a.S();
  for (int s = 0; s < a.size(); ++s) {
    int ss = S.star(s);
    for (int e : S.idempotents()) {
      int se = S.mul(ss, e);
      for (int x : a.U(S.mul(ss, e, s))) {
        auto l1 = a.w(ss, e).at(x), l2 = a.w(se, s).at(x), r = a.w(ss, s).at(x);
        if (!(l1 && l2 && r) || *l1 * *l2 != *r) {
          out.push_back({"omega(s*,e)omega(s*e,s)=omega(s*,s)", "s=" + el(a, s) + ",e=" + el(a, e) + ",x=" + pt(a, x),
                         "lhs=" + (l1 && l2 ? (*l1 * *l2).str() : std::string("undefined")) +
                             " rhs=" + angle_of(r)});
          if (stop_at_first) return;
        }
      }
    }
  }
}

}  // namespace

ActionReport verify_twisted_action(const TwistedAction& a, int threads) {
  ActionReport rep;
  rep.structural = structural_violations(a);
  if (!rep.structural.empty()) return rep;
  const auto& S = a.S();
  int n = a.size();
  for (int r = 0; r < n; ++r) {
    for (int s = 0; s < n; ++s) {
      if (!(compose(a.theta[r], a.theta[s]) == a.theta[S.mul(r, s)]))
        rep.axioms.push_back({"theta_r theta_s=theta_rs", "r=" + el(a, r) + ",s=" + el(a, s), ""});
    }
  }
  std::vector<std::vector<Violation>> per_r(n);
  parallel_for(n, threads, [&](int r) { axiom_two_for(a, r, per_r[r], false); });
  for (auto& v : per_r) rep.axioms.insert(rep.axioms.end(), v.begin(), v.end());
  axiom_three(a, rep.axioms);
  axiom_four(a, rep.axioms, false);
  return rep;
}

std::vector<Violation> verify_consequences(const TwistedAction& a) {
  std::vector<Violation> v;
  const auto& S = a.S();
  int n = a.size();
  int np = a.num_points();
  auto pair = [&](int r, int s) { return "r=" + el(a, r) + ",s=" + el(a, s); };
  for (int s = 0; s < n; ++s) {
    if (a.U(s) != a.U(S.range(s))) v.push_back({"U(s)=U(ss*)", "s=" + el(a, s), ""});
    if (S.is_idempotent(s) && !(a.theta[s] == PartialBijection::identity_on(np, a.U(s))))
      v.push_back({"theta_e=id", "e=" + el(a, s), ""});
    if (!(a.theta[S.star(s)] == a.theta[s].inverse()))
      v.push_back({"theta_s*=theta_s^-1", "s=" + el(a, s), ""});
    // (viii): beta_s(omega(s*,s)) = omega(s,s*).
    if (!(pullback(a.theta[s].inverse(), a.w(S.star(s), s)) == a.w(s, S.star(s))))
      v.push_back({"beta_s(omega(s*,s))=omega(s,s*)", "s=" + el(a, s), ""});
  }
  for (int r = 0; r < n; ++r) {
    for (int s = 0; s < n; ++s) {
      int rs = S.mul(r, s);
      if (a.theta[r].image(intersect(a.U(S.star(r)), a.U(s))) != a.U(rs))
        v.push_back({"theta_r(U(r*)U(s))=U(rs)", pair(r, s), ""});
      if (S.leq(r, s) && !is_subset(a.U(r), a.U(s))) v.push_back({"U(r)<=U(s)", pair(r, s), ""});
      PointSet both = intersect(a.U(r), a.U(s));
      if (both != a.U(S.mul(r, S.star(r), s)) || both != a.U(S.mul(s, S.star(s), r)))
        v.push_back({"U(r)U(s)=U(rr*s)=U(ss*r)", pair(r, s), ""});
      if (a.U(rs) != a.U(S.mul(r, s, S.star(s)))) v.push_back({"U(rs)=U(rss*)", pair(r, s), ""});
      if (S.leq(s, r)) {
        int t = r;
        if (!(a.theta[t].restrict_to(a.U(S.source(s))) == a.theta[s]))
          v.push_back({"theta_t|U(s*s)=theta_s", "s=" + el(a, s) + ",t=" + el(a, t), ""});
        // (xii) with s <= t.
        int ts = S.star(t);
        CircleFunction rhs = multiply(a.w(ts, S.range(s)), a.w(S.star(s), s));
        if (!(a.w(ts, s) == rhs))
          v.push_back({"omega(t*,s)=omega(t*,ss*)omega(s*,s)", "s=" + el(a, s) + ",t=" + el(a, t), ""});
      }
    }
  }
  // (ix): conj(omega(s,t)(theta_r^-1 y)) omega(r,s)(y) = omega(r,st)(y) conj(omega(rs,t)(y)).
  for (int r = 0; r < n; ++r) {
    for (int s = 0; s < n; ++s) {
      int rs = S.mul(r, s);
      for (int t = 0; t < n; ++t) {
        int st = S.mul(s, t);
        for (int x : intersect(a.U(S.star(r)), a.U(st))) {
          int y = *a.theta[r].apply(x);
          auto a1 = a.w(s, t).at(x), a2 = a.w(r, s).at(y), b1 = a.w(r, st).at(y), b2 = a.w(rs, t).at(y);
          if (!(a1 && a2 && b1 && b2) || a1->conj() * *a2 != *b1 * b2->conj()) {
            v.push_back({"starred cocycle", "r=" + el(a, r) + ",s=" + el(a, s) + ",t=" + el(a, t) + ",y=" + pt(a, y), ""});
          }
        }
      }
    }
  }
  for (int s = 0; s < n; ++s) {
    for (int e : S.idempotents()) {
      if (!(a.w(s, e) == a.w(s, S.mul(S.source(s), e))))
        v.push_back({"omega(s,e)=omega(s,s*se)", "s=" + el(a, s) + ",e=" + el(a, e), ""});
      if (!(a.w(e, s) == a.w(S.mul(e, S.range(s)), s)))
        v.push_back({"omega(e,s)=omega(ess*,s)", "s=" + el(a, s) + ",e=" + el(a, e), ""});
      if (S.leq(S.source(s), e) && !is_identically_one(a.w(s, e)))
        v.push_back({"omega(r,e)=1 for e>=r*r", "r=" + el(a, s) + ",e=" + el(a, e), ""});
      if (S.leq(S.range(s), e) && !is_identically_one(a.w(e, s)))
        v.push_back({"omega(f,s)=1 for f>=ss*", "s=" + el(a, s) + ",f=" + el(a, e), ""});
      // omega(e,s*) omega(es*,s) = omega(s*,s) on U(es*s), from (ii), (iii) alone.
      int ss = S.star(s);
      for (int x : a.U(S.mul(e, ss, s))) {
        auto l1 = a.w(e, ss).at(x), l2 = a.w(S.mul(e, ss), s).at(x), r = a.w(ss, s).at(x);
        if (!(l1 && l2 && r) || *l1 * *l2 != *r)
          v.push_back({"omega(e,s*)omega(es*,s)=omega(s*,s)", "s=" + el(a, s) + ",e=" + el(a, e) + ",x=" + pt(a, x), ""});
      }
    }
  }
  // (xiii): r <= s <= t.
  for (int t = 0; t < n; ++t) {
    for (int s = 0; s < n; ++s) {
      if (!S.leq(s, t)) continue;
      for (int r = 0; r < n; ++r) {
        if (!S.leq(r, s)) continue;
        int rr = S.source(r);
        for (int x : a.U(r)) {
          auto l = a.w(t, rr).at(x), p = a.w(t, S.source(s)).at(x), q = a.w(s, rr).at(x);
          if (!(l && p && q) || *l != *p * *q)
            v.push_back({"omega(t,r*r)=omega(t,s*s)omega(s,r*r)",
                         "r=" + el(a, r) + ",s=" + el(a, s) + ",t=" + el(a, t) + ",x=" + pt(a, x), ""});
        }
      }
    }
  }
  return v;
}

SiebenResult check_sieben(const TwistedAction& a) {
  SiebenResult res;
  const auto& S = a.S();
  for (int s = 0; s < a.size(); ++s) {
    for (int e : S.idempotents()) {
      check_one(a, a.w(s, e), "omega(s,e)=1", "s=" + el(a, s) + ",e=" + el(a, e), res.counterexamples);
      check_one(a, a.w(e, s), "omega(e,s)=1", "e=" + el(a, e) + ",s=" + el(a, s), res.counterexamples);
    }
  }
  res.holds = res.counterexamples.empty();
  return res;
}

Gauge trivial_gauge(const TwistedAction& a) {
  Gauge chi;
  for (int s = 0; s < a.size(); ++s) chi.push_back(ones(a.U(s)));
  return chi;
}

Gauge conjugate(const Gauge& chi) {
  Gauge out;
  for (const auto& f : chi) out.push_back(conjugate(f));
  return out;
}

TwistedAction gauge_transform(const TwistedAction& a, const Gauge& chi) {
  const auto& S = a.S();
  int n = a.size();
  if (static_cast<int>(chi.size()) != n) throw Error("CarrierMismatch", "gauge has the wrong number of entries");
  for (int s = 0; s < n; ++s) {
    if (chi[s].carrier() != a.U(s)) throw Error("CarrierMismatch", "gauge at " + el(a, s) + " is not carried by U(s)");
    if (S.is_idempotent(s) && !is_identically_one(chi[s]))
      throw Error("GaugeNotUnitAtIdempotent", "gauge at idempotent " + el(a, s) + " is not 1");
  }
  TwistedAction out = a;
  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t) {
      int st = S.mul(s, t);
      const CircleFunction& w = a.w(s, t);
      std::vector<CircleScalar> vals;
      for (int y : w.carrier()) {
        auto x = a.theta[s].preimage(y);
        auto ct = x ? chi[t].at(*x) : std::nullopt;
        if (!ct) throw Error("CarrierMismatch", "theta_s^-1(y) is outside U(t) at s=" + el(a, s) + ",t=" + el(a, t));
        vals.push_back(chi[s](y) * *ct * chi[st](y).conj() * w(y));
      }
      out.w(s, t) = CircleFunction(w.carrier(), std::move(vals));
    }
  }
  return out;
}

Siebenization siebenize(const TwistedAction& a) {
  GermGroupoid g = germ_groupoid(a);
  if (!g.inconsistencies().empty())
    throw Error("InternalInconsistency", "germ transitions depend on the witnessing idempotent");
  Gauge chi;
  for (int s = 0; s < a.size(); ++s) {
    std::vector<CircleScalar> vals;
    for (int y : a.U(s)) {
      auto x = a.theta[s].preimage(y);
      if (!x) throw Error("InternalInconsistency", "U(s) is not the range of theta_s");
      vals.push_back(g.transition(s, *x).conj());
    }
    chi.emplace_back(a.U(s), std::move(vals));
    if (a.S().is_idempotent(s) && !is_identically_one(chi.back()))
      throw Error("InternalInconsistency", "nontrivial gauge forced at an idempotent");
  }
  TwistedAction out = gauge_transform(a, chi);
  if (!check_sieben(out).holds) throw Error("InternalInconsistency", "gauged action still violates Sieben's condition");
  return {std::move(chi), std::move(out)};
}

std::optional<int> GermGroupoid::compose(int g, int h) const {
  int c = compose_[static_cast<std::size_t>(g) * size() + h];
  if (c < 0) return std::nullopt;
  return c;
}

std::optional<int> GermGroupoid::find(int t, int x) const {
  if (t < 0 || t >= semigroup_size_ || x < 0 || x >= num_objects_) return std::nullopt;
  int c = class_of_[static_cast<std::size_t>(t) * num_objects_ + x];
  if (c < 0) return std::nullopt;
  return c;
}

CircleScalar GermGroupoid::transition(int t, int x) const {
  if (!find(t, x)) throw InputError("no germ at the given representative");
  return transition_[static_cast<std::size_t>(t) * num_objects_ + x];
}

CircleScalar GermGroupoid::cocycle(int g, int h) const {
  if (!compose(g, h)) throw Error("NotComposable", "germs are not composable");
  return cocycle_[static_cast<std::size_t>(g) * size() + h];
}

GermGroupoid germ_groupoid(const TwistedAction& a) {
  if (auto sv = structural_violations(a); !sv.empty())
    throw Error("StructuralViolation", sv.front().rule + " " + sv.front().where);
  const auto& S = a.S();
  int n = a.size();
  int np = a.num_points();
  GermGroupoid G;
  G.num_objects_ = np;
  G.semigroup_size_ = n;
  G.class_of_.assign(static_cast<std::size_t>(n) * np, -1);
  G.transition_.assign(static_cast<std::size_t>(n) * np, CircleScalar::one());
  G.unit_.assign(np, -1);

  // The meet f_x of all idempotents whose ideal contains x. Two
  // representatives (t,x), (t',x) are germ-equal iff t f_x = t' f_x, and
  // t f_x is the smallest representative of the germ in the natural order.
  std::vector<int> meet(np, -1);
  for (int x = 0; x < np; ++x) {
    for (int e : S.idempotents())
      if (has_point(a.U(e), x)) meet[x] = meet[x] < 0 ? e : S.mul(meet[x], e);
  }
  for (int x = 0; x < np; ++x) {
    std::set<int> keys;
    for (int t = 0; t < n; ++t)
      if (a.theta[t].apply(x)) keys.insert(S.mul(t, meet[x]));
    std::map<int, int> germ_of_key;
    for (int k : keys) {
      germ_of_key[k] = G.size();
      G.germs_.push_back({k, x});
    }
    for (int t = 0; t < n; ++t) {
      auto y = a.theta[t].apply(x);
      if (!y) continue;
      int k = S.mul(t, meet[x]);
      std::size_t idx = static_cast<std::size_t>(t) * np + x;
      G.class_of_[idx] = germ_of_key.at(k);
      // Coordinate at t times omega(t,f)(y) conj(omega(k,f)(y)) is the coordinate at k.
      auto w1 = a.w(t, meet[x]).at(*y), w2 = a.w(k, meet[x]).at(*y);
      if (!w1 || !w2) throw Error("InternalInconsistency", "omega undefined on a germ transition");
      G.transition_[idx] = *w1 * w2->conj();
      for (int e : S.idempotents()) {
        if (!has_point(a.U(e), x) || S.mul(t, e) != S.mul(k, e)) continue;
        auto v1 = a.w(t, e).at(*y), v2 = a.w(k, e).at(*y);
        if (!v1 || !v2 || *v1 * v2->conj() != G.transition_[idx]) {
          G.inconsistencies_.push_back({"transition consistency",
                                        "t=" + el(a, t) + ",k=" + el(a, k) + ",e=" + el(a, e) + ",x=" + pt(a, x),
                                        "via meet=" + G.transition_[idx].str()});
        }
      }
    }
    G.unit_[x] = germ_of_key.at(meet[x]);
  }

  int m = G.size();
  G.range_.resize(m);
  G.inverse_.resize(m);
  G.involution_.resize(m);
  for (int g = 0; g < m; ++g) {
    auto [k, x] = G.germs_[g];
    int y = *a.theta[k].apply(x);
    G.range_[g] = y;
    int ks = S.star(k);
    G.inverse_[g] = *G.find(ks, y);
    // (1 delta_k)* = conj(omega(k*,k)(x)) delta_k*, a coordinate at (k*, y).
    G.involution_[g] = a.w(ks, k)(x).conj() * G.transition(ks, y);
  }
  G.compose_.assign(static_cast<std::size_t>(m) * m, -1);
  G.cocycle_.assign(static_cast<std::size_t>(m) * m, CircleScalar::one());
  for (int g = 0; g < m; ++g) {
    for (int h = 0; h < m; ++h) {
      if (G.source(g) != G.range(h)) continue;
      int s = G.germs_[g].rep, t = G.germs_[h].rep, x = G.germs_[h].x;
      int st = S.mul(s, t);
      auto c = G.find(st, x);
      if (!c) throw Error("InternalInconsistency", "product germ missing");
      std::size_t idx = static_cast<std::size_t>(g) * m + h;
      G.compose_[idx] = *c;
      int z = *a.theta[st].apply(x);
      G.cocycle_[idx] = a.w(s, t)(z) * G.transition(st, x);
    }
  }
  return G;
}

AxiomFourSearch search_axiom_four_independence(const TwistedAction& shape, int angle_den,
                                               std::int64_t max_candidates, std::uint64_t seed) {
  AxiomFourSearch res;
  const auto& S = shape.S();
  int n = shape.size();
  // Slots not pinned to 1 by the normalization axiom.
  struct Slot {
    int s, t, pos;
  };
  std::vector<Slot> slots;
  TwistedAction cand = shape;
  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t) {
      cand.w(s, t) = ones(shape.w(s, t).carrier());
      bool pinned = (S.is_idempotent(s) && S.is_idempotent(t)) || t == S.source(s) || s == S.range(t);
      if (pinned) continue;
      for (int p = 0; p < static_cast<int>(shape.w(s, t).size()); ++p) slots.push_back({s, t, p});
    }
  }
  double space = std::pow(static_cast<double>(angle_den), static_cast<double>(slots.size()));
  res.exhaustive = space <= static_cast<double>(max_candidates);
  std::int64_t total = res.exhaustive ? static_cast<std::int64_t>(space) : max_candidates;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, angle_den - 1);
  std::vector<int> digits(slots.size(), 0);
  auto assign = [&](std::size_t i, int d) {
    auto& f = cand.w(slots[i].s, slots[i].t);
    std::vector<CircleScalar> vals = f.values();
    vals[slots[i].pos] = CircleScalar(d, angle_den);
    f = CircleFunction(f.carrier(), std::move(vals));
  };
  for (std::int64_t c = 0; c < total; ++c) {
    if (res.exhaustive) {
      std::int64_t code = c;
      for (std::size_t i = 0; i < slots.size(); ++i) {
        digits[i] = static_cast<int>(code % angle_den);
        code /= angle_den;
        assign(i, digits[i]);
      }
    } else {
      for (std::size_t i = 0; i < slots.size(); ++i) assign(i, pick(rng));
    }
    ++res.candidates;
    std::vector<Violation> v;
    for (int r = 0; r < n && v.empty(); ++r) axiom_two_for(cand, r, v, true);
    if (!v.empty()) continue;
    ++res.satisfying_first_three;
    axiom_four(cand, v, true);
    if (!v.empty() && res.counterexamples.size() < 4) res.counterexamples.push_back(cand);
  }
  return res;
}

}  // namespace twa
