#include "twa/refinement.hpp"

#include <map>
#include <set>

namespace twa {

BundleMorphism identity_morphism(const SemiAbelianBundle& a) {
  BundleMorphism m;
  auto s = a.realization().semigroup_ptr();
  m.phi = {s, s, {}};
  for (int i = 0; i < a.size(); ++i) {
    m.phi.map.push_back(i);
    std::vector<PointTerm> f;
    for (int p = 0; p < a.carrier_size(i); ++p) f.push_back({p, CircleScalar::one()});
    m.psi.push_back(std::move(f));
  }
  return m;
}

namespace {

bool same(const std::optional<PointTerm>& a, const std::optional<PointTerm>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || (a->index == b->index && a->coeff == b->coeff);
}

std::string term(const std::optional<PointTerm>& t) {
  return t ? t->coeff.str() + "@" + std::to_string(t->index) : std::string("0");
}

}  // namespace

std::vector<Violation> verify_morphism(const BundleMorphism& m, const SemiAbelianBundle& b, const SemiAbelianBundle& a) {
  std::vector<Violation> v;
  const auto& T = b.S();
  const auto& RB = b.realization();
  const auto& RA = a.realization();
  int n = T.size();
  if (static_cast<int>(m.phi.map.size()) != n || static_cast<int>(m.psi.size()) != n) {
    v.push_back({"shape", "", "phi and psi need one entry per element of T"});
    return v;
  }
  if (auto f = homomorphism_failure(m.phi)) {
    v.push_back({"phi homomorphism", T.label((*f)[0]) + "," + T.label((*f)[1]), ""});
    return v;
  }
  for (int t = 0; t < n; ++t) {
    if (static_cast<int>(m.psi[t].size()) != b.carrier_size(t)) {
      v.push_back({"shape", "t=" + T.label(t), "psi needs one image per carrier point"});
      return v;
    }
    for (const PointTerm& x : m.psi[t])
      if (x.index < 0 || x.index >= a.carrier_size(m.phi.map[t])) {
        v.push_back({"shape", "t=" + T.label(t), "psi image outside the target carrier"});
        return v;
      }
  }
  auto psi = [&](int t, const std::optional<PointTerm>& x) -> std::optional<PointTerm> {
    if (!x) return x;
    const PointTerm& y = m.psi[t][x->index];
    return PointTerm{y.index, y.coeff * x->coeff};
  };
  for (int t = 0; t < n; ++t) {
    int s = m.phi.map[t];
    for (int p = 0; p < b.carrier_size(t); ++p) {
      const PointTerm& ip = m.psi[t][p];
      PointTerm adj = RB.adjoint(t, p);
      auto lhs = psi(T.star(t), adj);
      PointTerm aa = RA.adjoint(s, ip.index);
      std::optional<PointTerm> rhs = PointTerm{aa.index, aa.coeff * ip.coeff.conj()};
      if (!same(lhs, rhs)) v.push_back({"psi(a*) = psi(a)*", "t=" + T.label(t), term(lhs) + " vs " + term(rhs)});
      for (int u = 0; u < n; ++u) {
        int tu = T.mul(t, u);
        for (int q = 0; q < b.carrier_size(u); ++q) {
          auto l = psi(tu, RB.product(t, p, u, q));
          const PointTerm& iq = m.psi[u][q];
          std::optional<PointTerm> r;
          if (auto pq = RA.product(s, ip.index, m.phi.map[u], iq.index))
            r = PointTerm{pq->index, pq->coeff * ip.coeff * iq.coeff};
          if (!same(l, r))
            v.push_back({"psi(ab) = psi(a)psi(b)", "t=" + T.label(t) + ",u=" + T.label(u), term(l) + " vs " + term(r)});
        }
        if (T.leq(t, u)) {
          PointTerm j = RB.include(u, t, p);
          auto l = psi(u, PointTerm(j));
          PointTerm ja = RA.include(m.phi.map[u], s, ip.index);
          std::optional<PointTerm> r = PointTerm{ja.index, ja.coeff * ip.coeff};
          if (!same(l, r))
            v.push_back({"psi j = j psi", "t=" + T.label(t) + ",u=" + T.label(u), term(l) + " vs " + term(r)});
        }
      }
    }
  }
  return v;
}

std::vector<Violation> verify_refinement(const BundleMorphism& m, const SemiAbelianBundle& b,
                                         const SemiAbelianBundle& a) {
  std::vector<Violation> v = verify_morphism(m, b, a);
  if (!v.empty()) return v;
  const auto& T = b.S();
  const auto& S = a.S();
  if (!is_surjective(m.phi)) v.push_back({"NotSurjective", "", ""});
  if (!is_essentially_injective(m.phi)) v.push_back({"NotEssentiallyInjective", "", ""});
  std::vector<std::set<int>> covered(S.size());
  for (int t = 0; t < T.size(); ++t) {
    std::set<int> img;
    for (const PointTerm& x : m.psi[t]) img.insert(x.index);
    if (img.size() != m.psi[t].size()) v.push_back({"FiberNotInjective", "t=" + T.label(t), ""});
    covered[m.phi.map[t]].insert(img.begin(), img.end());
    if (!T.is_idempotent(t)) continue;
    int e = m.phi.map[t];
    for (int i : img)
      for (int x = 0; x < a.carrier_size(e); ++x)
        for (auto r : {a.realization().product(e, x, e, i), a.realization().product(e, i, e, x)})
          if (r && !img.count(r->index)) {
            v.push_back({"ImageNotIdeal", "t=" + T.label(t), ""});
            goto next;
          }
  next:;
  }
  for (int s = 0; s < S.size(); ++s)
    if (static_cast<int>(covered[s].size()) != a.carrier_size(s))
      v.push_back({"SpanDeficit", "s=" + S.label(s),
                   std::to_string(a.carrier_size(s) - covered[s].size()) + " carrier points not reached"});
  return v;
}

SubCarrierRealization::SubCarrierRealization(std::shared_ptr<const BundleRealization> base,
                                             std::shared_ptr<const InverseSemigroup> t, std::vector<Element> elements)
    : base_(std::move(base)), t_(std::move(t)), elements_(std::move(elements)) {
  if (static_cast<int>(elements_.size()) != t_->size()) throw InputError("one element description per element of T");
}

int SubCarrierRealization::index_in(int t, int point) const {
  const auto& pts = elements_[t].points;
  auto it = std::lower_bound(pts.begin(), pts.end(), point);
  if (it == pts.end() || *it != point) throw Error("NotClosed", "point outside the sub-carrier");
  return static_cast<int>(it - pts.begin());
}

std::optional<PointTerm> SubCarrierRealization::product(int s, int p, int t, int q) const {
  auto r = base_->product(elements_[s].s, elements_[s].points[p], elements_[t].s, elements_[t].points[q]);
  if (!r) return r;
  return PointTerm{index_in(t_->mul(s, t), r->index), r->coeff};
}

PointTerm SubCarrierRealization::adjoint(int s, int p) const {
  PointTerm r = base_->adjoint(elements_[s].s, elements_[s].points[p]);
  return {index_in(t_->star(s), r.index), r.coeff};
}

PointTerm SubCarrierRealization::include(int t, int s, int p) const {
  PointTerm r = base_->include(elements_[t].s, elements_[s].s, elements_[s].points[p]);
  return {index_in(t, r.index), r.coeff};
}

Refinement sub_carrier_refinement(const SemiAbelianBundle& a, const std::vector<std::vector<bool>>& allowed,
                                  int max_elements) {
  const auto& S = a.S();
  const auto& R = a.realization();
  int n = S.size();
  if (static_cast<int>(allowed.size()) != n) throw InputError("one allowed-point mask per fiber");
  using Mask = std::uint64_t;
  std::vector<std::pair<int, Mask>> elems;
  std::map<std::pair<int, Mask>, int> index;
  std::vector<std::vector<int>> allowed_pts(n);
  for (int s = 0; s < n; ++s) {
    if (static_cast<int>(allowed[s].size()) != a.carrier_size(s)) throw InputError("mask size differs from carrier");
    for (int p = 0; p < a.carrier_size(s); ++p)
      if (allowed[s][p]) allowed_pts[s].push_back(p);
    if (allowed_pts[s].size() > 20) throw Error("TooLarge", "carrier of " + S.label(s) + " too large to refine");
  }
  std::int64_t total = 0;
  for (int s = 0; s < n; ++s) total += std::int64_t{1} << allowed_pts[s].size();
  if (total > max_elements) throw Error("TooLarge", "refinement would have " + std::to_string(total) + " elements");
  for (int s = 0; s < n; ++s) {
    int k = static_cast<int>(allowed_pts[s].size());
    // Order subsets by size so small sub-carriers come first.
    std::vector<Mask> subs;
    for (Mask sub = 0; sub < (Mask{1} << k); ++sub) {
      Mask m = 0;
      for (int i = 0; i < k; ++i)
        if (sub & (Mask{1} << i)) m |= Mask{1} << allowed_pts[s][i];
      subs.push_back(m);
    }
    std::stable_sort(subs.begin(), subs.end(),
                     [](Mask x, Mask y) { return __builtin_popcountll(x) < __builtin_popcountll(y); });
    for (Mask m : subs) {
      index[{s, m}] = static_cast<int>(elems.size());
      elems.emplace_back(s, m);
    }
  }
  int nt = static_cast<int>(elems.size());
  auto lookup = [&](int s, Mask m) {
    auto it = index.find({s, m});
    if (it == index.end()) throw Error("NotClosed", "allowed points are not closed under the bundle operations");
    return it->second;
  };
  CayleyTable table(nt, std::vector<int>(nt));
  for (int i = 0; i < nt; ++i) {
    auto [s, v] = elems[i];
    for (int j = 0; j < nt; ++j) {
      auto [t, w] = elems[j];
      Mask hit = 0;
      for (int p = 0; p < a.carrier_size(s); ++p) {
        if (!(v & (Mask{1} << p))) continue;
        for (int q = 0; q < a.carrier_size(t); ++q)
          if (w & (Mask{1} << q))
            if (auto r = R.product(s, p, t, q)) hit |= Mask{1} << r->index;
      }
      table[i][j] = lookup(S.mul(s, t), hit);
    }
  }
  std::vector<std::string> labels;
  std::vector<SubCarrierRealization::Element> desc;
  for (auto [s, m] : elems) {
    SubCarrierRealization::Element e{s, {}};
    std::string l = S.label(s) + "|{";
    for (int p = 0; p < a.carrier_size(s); ++p)
      if (m & (Mask{1} << p)) {
        l += (e.points.empty() ? "" : ",") + R.carrier_label(s, p);
        e.points.push_back(p);
      }
    labels.push_back(l + "}");
    desc.push_back(std::move(e));
  }
  auto t = std::make_shared<const InverseSemigroup>(InverseSemigroup::from_table(table, labels));
  auto real = std::make_shared<SubCarrierRealization>(a.realization_ptr(), t, desc);
  Refinement out{SemiAbelianBundle(real), {}, std::nullopt};
  out.morphism.phi = {t, R.semigroup_ptr(), {}};
  for (int i = 0; i < nt; ++i) {
    out.morphism.phi.map.push_back(desc[i].s);
    std::vector<PointTerm> f;
    for (int p : desc[i].points) f.push_back({p, CircleScalar::one()});
    out.morphism.psi.push_back(std::move(f));
  }
  out.witness = classify_bundle(out.bundle).witness;
  return out;
}

Refinement saturated_refinement(const SemiAbelianBundle& a, int max_elements) {
  std::vector<std::vector<bool>> all;
  for (int s = 0; s < a.size(); ++s) all.emplace_back(a.carrier_size(s), true);
  return sub_carrier_refinement(a, all, max_elements);
}

BundleGerms bundle_germs(const SemiAbelianBundle& b) {
  BundleGerms g;
  const auto& S = b.S();
  const auto& R = b.realization();
  int n = S.size();
  int nodes = 0;
  for (int s = 0; s < n; ++s) {
    g.offset.push_back(nodes);
    nodes += b.carrier_size(s);
  }
  std::vector<std::pair<int, int>> where(nodes);
  for (int s = 0; s < n; ++s)
    for (int p = 0; p < b.carrier_size(s); ++p) where[g.node(s, p)] = {s, p};
  // delta_u = c delta_w along each inclusion edge u -> w.
  std::vector<std::vector<std::pair<int, CircleScalar>>> adj(nodes);
  for (int t = 0; t < n; ++t)
    for (int s = 0; s < n; ++s) {
      if (s == t || !S.leq(s, t)) continue;
      for (int p = 0; p < b.carrier_size(s); ++p) {
        PointTerm j = R.include(t, s, p);
        int u = g.node(s, p), w = g.node(t, j.index);
        adj[u].emplace_back(w, j.coeff);
        adj[w].emplace_back(u, j.coeff.conj());
      }
    }
  g.class_of.assign(nodes, -1);
  g.scale.assign(nodes, CircleScalar::one());
  for (int start = 0; start < nodes; ++start) {
    if (g.class_of[start] >= 0) continue;
    int k = static_cast<int>(g.rep.size());
    g.rep.push_back(start);
    g.rep_point.push_back(where[start]);
    g.class_of[start] = k;
    std::vector<int> stack{start};
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (const auto& [w, c] : adj[u]) {
        CircleScalar lw = g.scale[u] * c.conj();
        if (g.class_of[w] < 0) {
          g.class_of[w] = k;
          g.scale[w] = lw;
          stack.push_back(w);
        } else if (g.scale[w] != lw) {
          g.inconsistencies.push_back({"germ coordinates", S.label(where[w].first), "loop scalar is not one"});
        }
      }
    }
  }
  int m = g.size();
  for (int k = 0; k < m; ++k) {
    auto [s, p] = g.rep_point[k];
    g.range.push_back(R.base_point(s, p));
    g.source.push_back(b.source_point(s, p));
    g.labels.push_back("[" + S.label(s) + "," + R.carrier_label(s, p) + "]");
    PointTerm a = R.adjoint(s, p);
    int w = g.node(S.star(s), a.index);
    g.inverse.push_back(g.class_of[w]);
    g.involution.push_back(a.coeff * g.scale[w]);
  }
  g.compose.assign(static_cast<std::size_t>(m) * m, -1);
  g.cocycle.assign(static_cast<std::size_t>(m) * m, CircleScalar::one());
  std::vector<bool> seen(static_cast<std::size_t>(m) * m, false);
  // Every pair of members gives the same product in class coordinates.
  for (int u = 0; u < nodes; ++u) {
    auto [s, p] = where[u];
    int k = g.class_of[u];
    for (int w = 0; w < nodes; ++w) {
      auto [t, q] = where[w];
      int l = g.class_of[w];
      std::size_t kl = static_cast<std::size_t>(k) * m + l;
      int cls = -1;
      CircleScalar c;
      if (auto r = R.product(s, p, t, q)) {
        int x = g.node(S.mul(s, t), r->index);
        cls = g.class_of[x];
        c = r->coeff * g.scale[x] * (g.scale[u] * g.scale[w]).conj();
      }
      if (!seen[kl]) {
        seen[kl] = true;
        g.compose[kl] = cls;
        g.cocycle[kl] = c;
      } else if (g.compose[kl] != cls || (cls >= 0 && g.cocycle[kl] != c)) {
        g.inconsistencies.push_back({"germ product", g.labels[k] + "," + g.labels[l], "depends on representatives"});
      }
    }
  }
  for (int k = 0; k < m; ++k)
    for (int l = 0; l < m; ++l)
      if ((g.compose[static_cast<std::size_t>(k) * m + l] >= 0) != (g.source[k] == g.range[l]))
        g.inconsistencies.push_back({"germ composability", g.labels[k] + "," + g.labels[l], ""});
  return g;
}

StarAlgebra bundle_germ_algebra(const BundleGerms& g) {
  StarAlgebra a;
  int m = g.size();
  a.labels = g.labels;
  a.products.resize(static_cast<std::size_t>(m) * m);
  for (int k = 0; k < m; ++k) {
    a.star.push_back({{g.inverse[k], g.involution[k].value()}});
    for (int l = 0; l < m; ++l) {
      std::size_t kl = static_cast<std::size_t>(k) * m + l;
      if (g.compose[kl] >= 0) a.products[kl] = {{g.compose[kl], g.cocycle[kl].value()}};
    }
  }
  return a;
}

GermMap germ_preservation_check(const BundleMorphism& m, const SemiAbelianBundle& b, const SemiAbelianBundle& a) {
  GermMap out;
  BundleGerms gb = bundle_germs(b), ga = bundle_germs(a);
  out.refined_count = gb.size();
  out.target_count = ga.size();
  if (!gb.inconsistencies.empty() || !ga.inconsistencies.empty()) {
    out.counterexample = "germ coordinates are inconsistent";
    return out;
  }
  out.map.assign(gb.size(), -1);
  out.scale.assign(gb.size(), CircleScalar::one());
  const auto& T = b.S();
  for (int t = 0; t < T.size(); ++t) {
    int s = m.phi.map[t];
    for (int p = 0; p < b.carrier_size(t); ++p) {
      int u = gb.node(t, p), k = gb.class_of[u];
      const PointTerm& img = m.psi[t][p];
      int x = ga.node(s, img.index);
      int target = ga.class_of[x];
      CircleScalar mu = img.coeff * ga.scale[x] * gb.scale[u].conj();
      if (out.map[k] < 0) {
        out.map[k] = target;
        out.scale[k] = mu;
      } else if (out.map[k] != target || out.scale[k] != mu) {
        out.counterexample = "germ " + gb.labels[k] + " has two images";
        return out;
      }
    }
  }
  std::vector<int> hit(ga.size(), -1);
  for (int k = 0; k < gb.size(); ++k) {
    int x = out.map[k];
    if (hit[x] >= 0) {
      out.counterexample = "germs " + gb.labels[hit[x]] + " and " + gb.labels[k] + " collide";
      return out;
    }
    hit[x] = k;
    if (b.realization().point_label(gb.range[k]) != a.realization().point_label(ga.range[x]) ||
        b.realization().point_label(gb.source[k]) != a.realization().point_label(ga.source[x])) {
      out.counterexample = "germ " + gb.labels[k] + " changes its endpoints";
      return out;
    }
  }
  for (int x = 0; x < ga.size(); ++x)
    if (hit[x] < 0) {
      out.counterexample = "germ " + ga.labels[x] + " of the target is not reached";
      return out;
    }
  int nb = gb.size(), na = ga.size();
  for (int k = 0; k < nb; ++k) {
    int ik = gb.inverse[k];
    if (out.map[ik] != ga.inverse[out.map[k]] ||
        gb.involution[k] * out.scale[ik] != out.scale[k].conj() * ga.involution[out.map[k]]) {
      out.counterexample = "involution differs at " + gb.labels[k];
      return out;
    }
    for (int l = 0; l < nb; ++l) {
      int kl = gb.compose[static_cast<std::size_t>(k) * nb + l];
      std::size_t xy = static_cast<std::size_t>(out.map[k]) * na + out.map[l];
      int mapped = kl >= 0 ? out.map[kl] : -1;
      if (mapped != ga.compose[xy]) {
        out.counterexample = "composition differs at " + gb.labels[k] + "," + gb.labels[l];
        return out;
      }
      if (kl >= 0 && gb.cocycle[static_cast<std::size_t>(k) * nb + l] * out.scale[kl] !=
                         out.scale[k] * out.scale[l] * ga.cocycle[xy]) {
        out.counterexample = "line coordinates differ at " + gb.labels[k] + "," + gb.labels[l];
        return out;
      }
    }
  }
  out.isomorphic = true;
  return out;
}

AlgebraPreservation algebra_preservation_check(const BundleMorphism& m, const SemiAbelianBundle& b,
                                               const SemiAbelianBundle& a, std::uint64_t seed, double eps) {
  AlgebraPreservation r;
  StarAlgebra ab = bundle_germ_algebra(bundle_germs(b)), aa = bundle_germ_algebra(bundle_germs(a));
  r.refined_dim = ab.dim();
  r.target_dim = aa.dim();
  r.refined_blocks = block_decompose(ab, seed, eps);
  r.target_blocks = block_decompose(aa, seed, eps);
  GermMap gm = germ_preservation_check(m, b, a);
  if (!gm.isomorphic) {
    r.transport.push_back({"germ map", "", gm.counterexample});
    return r;
  }
  std::vector<Complex> scale;
  for (const auto& c : gm.scale) scale.push_back(c.value());
  r.transport = check_basis_isomorphism(ab, aa, gm.map, scale, eps);
  return r;
}

BundleRep concrete_representation(const SemiAbelianBundle& b) {
  BundleGerms g = bundle_germs(b);
  StarAlgebra alg = bundle_germ_algebra(g);
  BundleRep rep;
  rep.dim = alg.dim();
  std::vector<Matrix> left;
  for (int k = 0; k < alg.dim(); ++k) left.push_back(alg.left_regular(alg.basis(k)));
  for (int s = 0; s < b.size(); ++s) {
    std::vector<Matrix> f;
    for (int p = 0; p < b.carrier_size(s); ++p) {
      int u = g.node(s, p);
      f.push_back(g.scale[u].value() * left[g.class_of[u]]);
    }
    rep.pi.push_back(std::move(f));
  }
  return rep;
}

MatrixTRO fiber_tro(const BundleRep& rep, int s, double eps) { return MatrixTRO::from_basis(rep.dim, rep.pi.at(s), eps); }

}  // namespace twa
