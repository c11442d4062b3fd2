// Acceptance runner: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"
#include "twa/fell_bundle.hpp"
#include "twa/groupoid.hpp"
#include "twa/refinement.hpp"
#include "twa/rep_algebra.hpp"
#include "twa/tro.hpp"
#include "twa/twisted_action.hpp"

using namespace twa;
using namespace twa::testing;

namespace {

constexpr double kEps = 1e-9;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct CocycleCase {
  std::string name;
  const FiniteGroupoid* g;
  TwoCocycle tau;
};

struct Corpus {
  std::vector<GroupoidCase> groupoids;
  std::vector<CocycleCase> cocycles;
  std::vector<NamedAction> actions;
};

Corpus build_corpus() {
  Corpus c;
  c.groupoids = cocycle_groupoids();
  c.groupoids.push_back({"Z/4", group_groupoid(4), 2});
  c.groupoids.push_back({"Z/2+pair(2)", disjoint_union(group_groupoid(2), pair_groupoid(2)), 2});
  for (const auto& gc : c.groupoids)
    for (const auto& tau : enumerate_normalized_cocycles(gc.g, gc.den))
      c.cocycles.push_back({gc.name + " #" + std::to_string(c.cocycles.size()), &gc.g, tau});
  c.actions = sub_i3_actions(11, 60);
  for (const auto& cc : c.cocycles) c.actions.push_back({"cocycle " + cc.name, cocycle_action(*cc.g, cc.tau)});
  std::mt19937_64 rng(23);
  std::size_t base = c.actions.size();
  for (std::size_t i = 0; i < base; ++i) {
    const TwistedAction& a = c.actions[i].action;
    c.actions.push_back({"gauged " + c.actions[i].name, gauge_transform(a, random_gauge(a, rng, 8))});
  }
  return c;
}

Outcome criterion1(const Corpus& c) {
  auto t0 = std::chrono::steady_clock::now();
  int checked = 0;
  for (const auto& na : c.actions) {
    if (!verify_twisted_action(na.action).ok()) return {false, "corpus action invalid: " + na.name};
    BundleVerifyOptions opt;
    opt.eps = kEps;
    opt.seed = static_cast<std::uint64_t>(checked);
    auto v = verify_fell_bundle(build_bundle(na.action), opt);
    if (!v.empty()) return {false, na.name + ": " + v.front().rule + " at " + v.front().where};
    ++checked;
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::ostringstream os;
  os << checked << " actions, 0 violations, " << secs << " s";
  return {checked >= 200 && secs < 60.0, os.str()};
}

Outcome criterion2(const Corpus& c) {
  for (const auto& na : c.actions) {
    RoundTrip r = roundtrip_check(na.action);
    if (!r.exact) return {false, na.name + ": " + (r.diff.empty() ? std::string("not exact") : r.diff.front())};
  }
  return {true, std::to_string(c.actions.size()) + " exact round trips"};
}

Outcome criterion3(const Corpus& c) {
  for (const auto& na : c.actions)
    if (!verify_consequences(na.action).empty()) return {false, "consequence fails on " + na.name};
  struct Slot {
    int action, s, t, pos;
  };
  std::vector<Slot> slots;
  for (int i = 0; i < static_cast<int>(c.actions.size()); ++i) {
    const TwistedAction& a = c.actions[i].action;
    for (int s = 0; s < a.size(); ++s)
      for (int t = 0; t < a.size(); ++t)
        for (int p = 0; p < static_cast<int>(a.w(s, t).size()); ++p) slots.push_back({i, s, t, p});
  }
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<std::size_t> pick(0, slots.size() - 1);
  std::uniform_int_distribution<int> shift(1, 7);
  int detected = 0, total = 1000;
  for (int k = 0; k < total; ++k) {
    const Slot& sl = slots[pick(rng)];
    TwistedAction m = c.actions[sl.action].action;
    CircleFunction& w = m.w(sl.s, sl.t);
    w(w.carrier()[sl.pos]) *= CircleScalar(shift(rng), 8);
    if (!verify_twisted_action(m).ok() || !verify_consequences(m).empty()) ++detected;
  }
  double rate = static_cast<double>(detected) / total;
  std::ostringstream os;
  os << "consequences clean on " << c.actions.size() << " actions; mutations detected " << detected << "/" << total;
  return {rate >= 0.99, os.str()};
}

Outcome criterion4(const Corpus& c) {
  const std::vector<std::pair<std::string, std::int64_t>> frozen = {
      {"Z/2", 4}, {"Z/3", 9}, {"pair(2)", 4}, {"pair(3)", 16}, {"transitive(2,Z/2)", 32}};
  std::ostringstream os;
  for (const auto& [name, expected] : frozen) {
    const GroupoidCase* gc = nullptr;
    for (const auto& x : c.groupoids)
      if (x.name == name) gc = &x;
    auto all = enumerate_normalized_cocycles(gc->g, gc->den);
    if (static_cast<std::int64_t>(all.size()) != expected) return {false, name + ": cocycle count " + std::to_string(all.size())};
    BisectionSemigroup bs = bisection_semigroup(gc->g);
    for (const auto& tau : all) {
      TwistedAction a = action_from_cocycle(gc->g, tau, bs);
      const auto& S = a.S();
      for (int s = 0; s < S.size(); ++s)
        for (int t = 0; t < S.size(); ++t)
          for (int x : bs.bisections[s])
            for (int y : bs.bisections[t])
              if (gc->g.composable(x, y) && a.w(s, t)(gc->g.rng(gc->g.mul(x, y))) != tau.at(x, y))
                return {false, name + ": omega differs from tau"};
      GermIsomorphism iso = germ_recovers_groupoid(gc->g, tau, bs);
      if (!iso.isomorphic || !iso.twist_matches || iso.germ_count != iso.arrow_count)
        return {false, name + ": germ groupoid " + iso.counterexample};
    }
    os << name << ":" << expected << " ";
  }
  return {true, os.str() + "cocycles, all recovered"};
}

Outcome criterion5(const Corpus& c) {
  int coherent = 0;
  for (const auto& cc : c.cocycles) {
    if (!check_sieben(cocycle_action(*cc.g, cc.tau)).holds) return {false, "coherent-section action " + cc.name};
    ++coherent;
  }
  int fixed = 0, nonsieben = 0;
  for (const auto& na : c.actions) {
    if (!check_sieben(na.action).holds) ++nonsieben;
    Siebenization s = siebenize(na.action);
    if (!verify_twisted_action(s.action).ok() || !check_sieben(s.action).holds) return {false, "siebenize " + na.name};
    ++fixed;
  }
  return {true, std::to_string(coherent) + " coherent actions; siebenized " + std::to_string(fixed) + " (" +
                    std::to_string(nonsieben) + " started without the condition)"};
}

Outcome criterion6(const Corpus& c) {
  int reps = 0;
  bool minus_identity = false;
  for (const auto& cc : c.cocycles) {
    BisectionSemigroup bs = bisection_semigroup(*cc.g);
    TwistedAction a = action_from_cocycle(*cc.g, cc.tau, bs);
    CovariantRep r = regular_covariant_rep(*cc.g, cc.tau, bs);
    if (!verify_covariant(r, a, kEps).empty()) return {false, cc.name + ": covariant rep fails"};
    BundleRep pi = to_bundle_rep(r, a, kEps);
    if (!verify_representation(pi, build_bundle(a), kEps).empty()) return {false, cc.name + ": bundle rep fails"};
    CovariantRep back = to_covariant(pi, a, kEps);
    if (!approx_equal(back, r, kEps) || !approx_equal(to_bundle_rep(back, a, kEps), pi, kEps))
      return {false, cc.name + ": conversions do not compose to the identity"};
    if (cc.g->num_arrows() == 2 && cc.g->num_objects() == 1 && cc.tau.at(1, 1) == CircleScalar(1, 2)) {
      int g = -1;
      for (int s = 0; s < a.size(); ++s)
        if (bs.bisections[s] == Bisection{1}) g = s;
      minus_identity = approx_equal(r.v[g] * r.v[g], -Matrix::Identity(r.dim, r.dim), kEps);
    }
    ++reps;
  }
  return {minus_identity, std::to_string(reps) + " regular representations; v_g^2 = -I: " + (minus_identity ? "yes" : "no")};
}

// Direct sum of full rectangular blocks, rotated by random unitaries.
struct RandomTro {
  MatrixTRO m;
  Matrix left, right;
  std::vector<std::array<int, 4>> blocks;  // row0, col0, p, q
};

Matrix random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  Eigen::HouseholderQR<Matrix> qr(a);
  return qr.householderQ();
}

RandomTro random_tro(std::mt19937_64& rng, bool square_blocks) {
  std::uniform_int_distribution<int> dim(2, 8);
  int n = dim(rng);
  RandomTro r{MatrixTRO(), random_unitary(n, rng), random_unitary(n, rng), {}};
  int row = 0, col = 0;
  std::uniform_int_distribution<int> size(1, 3);
  while (true) {
    int p = size(rng), q = square_blocks ? p : size(rng);
    if (row + p > n || col + q > n) break;
    r.blocks.push_back({row, col, p, q});
    row += p;
    col += q;
  }
  if (r.blocks.empty()) r.blocks.push_back({0, 0, 1, 1});
  std::vector<Matrix> basis;
  for (const auto& [r0, c0, p, q] : r.blocks)
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < q; ++j) basis.push_back(r.left * matrix_unit(n, r0 + i, c0 + j) * r.right);
  r.m = MatrixTRO::from_basis(n, basis);
  return r;
}

Matrix random_element(const MatrixTRO& m, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix x = Matrix::Zero(m.dim(), m.dim());
  for (const Matrix& b : m.span().basis()) x += Complex(g(rng), g(rng)) * b;
  return x;
}

Outcome criterion7() {
  std::mt19937_64 rng(47);
  std::uniform_int_distribution<int> kind(0, 4);
  int associated = 0;
  for (int k = 0; k < 1000; ++k) {
    RandomTro t = random_tro(rng, kind(rng) < 3);
    int n = t.m.dim();
    Matrix u;
    switch (kind(rng)) {
      case 0: u = polar_isometry(random_element(t.m, rng)); break;
      case 1: u = random_element(t.m, rng); break;
      case 2: u = random_unitary(n, rng); break;
      case 3: {
        // Partial isometry on a random subset of the blocks.
        u = Matrix::Zero(n, n);
        for (const auto& [r0, c0, p, q] : t.blocks)
          if (rng() & 1)
            for (int i = 0; i < std::min(p, q); ++i) u += t.left * matrix_unit(n, r0 + i, c0 + i) * t.right;
        break;
      }
      default: u = polar_isometry(random_element(t.m, rng)) * random_unitary(n, rng); break;
    }
    AssociationReport rep = check_association(u, t.m, kEps);
    if (!rep.implications_hold()) return {false, "association implications fail at pair " + std::to_string(k)};
    associated += rep.associated();
  }
  Span column = Span::of(2, {matrix_unit(2, 0, 0), matrix_unit(2, 1, 0)});
  if (is_regular(MatrixTRO::from_span(column), 32, 1, kEps).regular) return {false, "column TRO reported regular"};
  for (int k = 0; k < 50; ++k) {
    // span{E_(i, sigma i)} rotated: both corners are commutative.
    std::uniform_int_distribution<int> dim(2, 8);
    int n = dim(rng);
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    Matrix l = random_unitary(n, rng), r = random_unitary(n, rng);
    std::vector<Matrix> basis;
    for (int i = 0; i < n; ++i)
      if (rng() % 3) basis.push_back(l * matrix_unit(n, i, perm[i]) * r);
    if (basis.empty()) basis.push_back(l * matrix_unit(n, 0, perm[0]) * r);
    if (!is_locally_regular(MatrixTRO::from_basis(n, basis), 16, static_cast<std::uint64_t>(k), kEps))
      return {false, "commutative-corner TRO not locally regular"};
  }
  int witnesses = 0;
  for (int k = 0; k < 100; ++k) {
    RandomTro t = random_tro(rng, true);
    RegularityResult res = is_regular(t.m, 16, static_cast<std::uint64_t>(k), kEps);
    if (!res.regular || !res.witness) return {false, "square-block TRO not found regular"};
    AssociationReport a = check_association(*res.witness, t.m, kEps);
    if (!a.associated() || !a.strict() || !a.partial_isometry || !verify_corner_isomorphism(*res.witness, t.m, kEps))
      return {false, "regular witness does not verify"};
    ++witnesses;
  }
  return {true, "1000 pairs (" + std::to_string(associated) + " associated), column TRO non-regular, 50 corner TROs, " +
                    std::to_string(witnesses) + " witnesses strictly associated"};
}

Outcome criterion8(const Corpus& c) {
  std::mt19937_64 rng(59);
  std::vector<std::pair<std::string, SemiAbelianBundle>> bundles;
  {
    auto u = disjoint_union(group_groupoid(1), pair_groupoid(2));
    std::vector<Bisection> gens = {{0, 1, 4}, {0, 2, 3}};
    BisectionSemigroup bs = bisection_semigroup(u, gens, false);
    std::vector<Bisection> carriers = bs.bisections;
    carriers[bs.index_of({0, 2, 3})] = {2, 3};
    bundles.emplace_back("union", section_bundle(u, TwoCocycle::trivial(u), bs, carriers));
  }
  for (const auto& cc : c.cocycles) {
    BisectionSemigroup bs = bisection_semigroup(*cc.g);
    for (int trial = 0; trial < 3; ++trial) {
      auto carriers = random_closed_carriers(*cc.g, bs, rng, 0.2);
      SemiAbelianBundle b = section_bundle(*cc.g, cc.tau, bs, carriers);
      BundleClass cls = classify_bundle(b);
      if (!cls.saturated && cls.semi_abelian) {
        bundles.emplace_back(cc.name + " carriers " + std::to_string(trial), b);
        break;
      }
    }
  }
  int checked = 0;
  for (const auto& [name, a] : bundles) {
    if (!verify_fell_bundle(a).empty()) return {false, name + ": generated bundle invalid"};
    Refinement r = saturated_refinement(a);
    if (!classify_bundle(r.bundle).saturated) return {false, name + ": refinement not saturated"};
    auto v = verify_refinement(r.morphism, r.bundle, a);
    if (!v.empty()) return {false, name + ": " + v.front().rule};
    GermMap gm = germ_preservation_check(r.morphism, r.bundle, a);
    if (!gm.isomorphic || gm.refined_count != gm.target_count) return {false, name + ": germs " + gm.counterexample};
    AlgebraPreservation ap = algebra_preservation_check(r.morphism, r.bundle, a);
    if (!ap.ok()) return {false, name + ": germ algebras differ"};
    ++checked;
  }
  auto pg = pair_groupoid(2);
  SemiAbelianBundle pb = section_bundle(pg, TwoCocycle::trivial(pg), bisection_semigroup(pg));
  Refinement pr = saturated_refinement(pb);
  AlgebraPreservation pp = algebra_preservation_check(pr.morphism, pr.bundle, pb);
  bool pair_ok = pp.ok() && pp.refined_blocks == std::vector<int>{2} && pp.target_blocks == std::vector<int>{2};
  return {checked >= 20 && pair_ok, std::to_string(checked) + " non-saturated bundles refined; pair groupoid [2]/[2]: " +
                                        (pair_ok ? "yes" : "no")};
}

Outcome criterion9() {
  struct Case {
    std::string name;
    StarAlgebra a;
    std::vector<int> expected;
  };
  auto z2 = group_groupoid(2);
  auto pg = pair_groupoid(2);
  TwoCocycle tw = TwoCocycle::trivial(z2);
  tw.at(1, 1) = CircleScalar(1, 2);
  std::vector<Case> cases = {{"Z/2", convolution_algebra(z2, TwoCocycle::trivial(z2)), {1, 1}},
                             {"pair(2)", convolution_algebra(pg, TwoCocycle::trivial(pg)), {2}},
                             {"twisted Z/2", convolution_algebra(z2, tw), {1, 1}}};
  std::ostringstream os;
  for (const auto& cs : cases) {
    auto t0 = std::chrono::steady_clock::now();
    auto blocks = block_decompose(cs.a, 0, kEps);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (blocks != cs.expected || secs >= 1.0) return {false, cs.name + " gave unexpected blocks or took too long"};
    os << cs.name << " ok ";
  }
  return {true, os.str()};
}

}  // namespace

int main() {
  Corpus corpus = build_corpus();
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"axiom soundness of the bundle construction", [&] { return criterion1(corpus); }},
      {"exact round trip", [&] { return criterion2(corpus); }},
      {"derived identities and mutation detection", [&] { return criterion3(corpus); }},
      {"cocycle correspondence", [&] { return criterion4(corpus); }},
      {"Sieben condition and siebenization", [&] { return criterion5(corpus); }},
      {"representation correspondence", [&] { return criterion6(corpus); }},
      {"TRO suite", [] { return criterion7(); }},
      {"refinement preservation", [&] { return criterion8(corpus); }},
      {"block structure", [] { return criterion9(); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s criterion %zu: %s (%s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
