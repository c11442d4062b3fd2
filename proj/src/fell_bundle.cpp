#include "twa/fell_bundle.hpp"

#include <random>
#include <set>

namespace twa {

namespace {

std::string fib(const SemiAbelianBundle& b, int s) { return b.S().label(s); }

std::string term_str(const std::optional<PointTerm>& t) {
  if (!t) return "0";
  return t->coeff.str() + "@" + std::to_string(t->index);
}

bool same(const std::optional<PointTerm>& a, const std::optional<PointTerm>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || (a->index == b->index && a->coeff == b->coeff);
}

std::optional<PointTerm> times(const std::optional<PointTerm>& a, const CircleScalar& c) {
  if (!a) return a;
  return PointTerm{a->index, a->coeff * c};
}

}  // namespace

SemiAbelianBundle::SemiAbelianBundle(std::shared_ptr<const BundleRealization> impl) : impl_(std::move(impl)) {
  if (!impl_) throw InputError("bundle without realization");
}

FiberElement SemiAbelianBundle::zero(int s) const { return {s, std::vector<Complex>(carrier_size(s), 0.0)}; }

FiberElement SemiAbelianBundle::point_mass(int s, int p, Complex c) const {
  FiberElement e = zero(s);
  e.coeffs.at(p) = c;
  return e;
}

FiberElement SemiAbelianBundle::multiply(const FiberElement& a, const FiberElement& b) const {
  FiberElement out = zero(S().mul(a.fiber, b.fiber));
  for (std::size_t p = 0; p < a.coeffs.size(); ++p) {
    if (a.coeffs[p] == 0.0) continue;
    for (std::size_t q = 0; q < b.coeffs.size(); ++q) {
      if (b.coeffs[q] == 0.0) continue;
      if (auto t = impl_->product(a.fiber, static_cast<int>(p), b.fiber, static_cast<int>(q)))
        out.coeffs.at(t->index) += a.coeffs[p] * b.coeffs[q] * t->coeff.value();
    }
  }
  return out;
}

FiberElement SemiAbelianBundle::adjoint(const FiberElement& a) const {
  FiberElement out = zero(S().star(a.fiber));
  for (std::size_t p = 0; p < a.coeffs.size(); ++p) {
    PointTerm t = impl_->adjoint(a.fiber, static_cast<int>(p));
    out.coeffs.at(t.index) += std::conj(a.coeffs[p]) * t.coeff.value();
  }
  return out;
}

FiberElement SemiAbelianBundle::include(int t, const FiberElement& a) const {
  if (!S().leq(a.fiber, t)) throw InputError("inclusion requires s <= t");
  FiberElement out = zero(t);
  for (std::size_t p = 0; p < a.coeffs.size(); ++p) {
    PointTerm r = impl_->include(t, a.fiber, static_cast<int>(p));
    out.coeffs.at(r.index) += a.coeffs[p] * r.coeff.value();
  }
  return out;
}

MonomialElement SemiAbelianBundle::multiply(const MonomialElement& a, const MonomialElement& b) const {
  MonomialElement out{S().mul(a.fiber, b.fiber), {}};
  for (const auto& [p, cp] : a.terms) {
    for (const auto& [q, cq] : b.terms) {
      auto t = impl_->product(a.fiber, p, b.fiber, q);
      if (!t) continue;
      if (!out.terms.emplace(t->index, cp * cq * t->coeff).second)
        throw Error("NotMonomial", "two products land on one carrier point");
    }
  }
  return out;
}

MonomialElement SemiAbelianBundle::adjoint(const MonomialElement& a) const {
  MonomialElement out{S().star(a.fiber), {}};
  for (const auto& [p, c] : a.terms) {
    PointTerm t = impl_->adjoint(a.fiber, p);
    if (!out.terms.emplace(t.index, c.conj() * t.coeff).second)
      throw Error("NotMonomial", "adjoint is not injective on carrier points");
  }
  return out;
}

MonomialElement SemiAbelianBundle::include(int t, const MonomialElement& a) const {
  MonomialElement out{t, {}};
  for (const auto& [p, c] : a.terms) {
    PointTerm r = impl_->include(t, a.fiber, p);
    if (!out.terms.emplace(r.index, c * r.coeff).second)
      throw Error("NotMonomial", "inclusion is not injective on carrier points");
  }
  return out;
}

FiberElement SemiAbelianBundle::to_fiber(const MonomialElement& a) const {
  FiberElement out = zero(a.fiber);
  for (const auto& [p, c] : a.terms) out.coeffs.at(p) = c.value();
  return out;
}

CircleScalar SemiAbelianBundle::unit_coefficient(int e, int p) const {
  auto t = impl_->product(e, p, e, p);
  if (!t || t->index != p) throw Error("NotSemiAbelian", "idempotent fiber point mass is not a projection multiple");
  return t->coeff.conj();
}

MonomialElement SemiAbelianBundle::unit(int e) const {
  MonomialElement u{e, {}};
  for (int p = 0; p < carrier_size(e); ++p) u.terms[p] = unit_coefficient(e, p);
  return u;
}

int SemiAbelianBundle::source_point(int s, int p) const {
  PointTerm t = impl_->adjoint(s, p);
  return impl_->base_point(S().star(s), t.index);
}

double sup_norm(const FiberElement& a) {
  double m = 0.0;
  for (const Complex& c : a.coeffs) m = std::max(m, std::abs(c));
  return m;
}

ActionRealization::ActionRealization(std::shared_ptr<const TwistedAction> action) : action_(std::move(action)) {
  if (auto sv = structural_violations(*action_); !sv.empty())
    throw Error("StructuralViolation", sv.front().rule + " " + sv.front().where);
}

int ActionRealization::index_in(int s, int y) const {
  int i = position_of(action_->U(s), y);
  if (i < 0) throw Error("StructuralViolation", "point outside the expected carrier");
  return i;
}

std::string ActionRealization::carrier_label(int s, int p) const { return action_->point_labels[action_->U(s)[p]]; }

std::optional<PointTerm> ActionRealization::product(int s, int p, int t, int q) const {
  const auto& a = *action_;
  int y = a.U(s)[p];
  auto x = a.theta[s].preimage(y);
  if (!x || *x != a.U(t)[q]) return std::nullopt;
  int st = a.S().mul(s, t);
  return PointTerm{index_in(st, y), a.w(s, t)(y)};
}

PointTerm ActionRealization::adjoint(int s, int p) const {
  const auto& a = *action_;
  int x = *a.theta[s].preimage(a.U(s)[p]);
  int ss = a.S().star(s);
  return PointTerm{index_in(ss, x), a.w(ss, s)(x).conj()};
}

PointTerm ActionRealization::include(int t, int s, int p) const {
  const auto& a = *action_;
  int y = a.U(s)[p];
  return PointTerm{index_in(t, y), a.w(t, a.S().source(s))(y).conj()};
}

SemiAbelianBundle build_bundle(std::shared_ptr<const TwistedAction> a) {
  return SemiAbelianBundle(std::make_shared<ActionRealization>(std::move(a)));
}

SemiAbelianBundle build_bundle(const TwistedAction& a) { return build_bundle(std::make_shared<const TwistedAction>(a)); }

namespace {

FiberElement random_element(const SemiAbelianBundle& b, int s, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  FiberElement e = b.zero(s);
  for (auto& c : e.coeffs) c = Complex(g(rng), g(rng));
  return e;
}

bool close(const FiberElement& a, const FiberElement& b, double eps) {
  if (a.fiber != b.fiber || a.coeffs.size() != b.coeffs.size()) return false;
  double scale = std::max({1.0, sup_norm(a), sup_norm(b)});
  for (std::size_t i = 0; i < a.coeffs.size(); ++i)
    if (std::abs(a.coeffs[i] - b.coeffs[i]) > eps * scale) return false;
  return true;
}

FiberElement lin(Complex alpha, const FiberElement& a, const FiberElement& b) {
  FiberElement out = a;
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] = alpha * a.coeffs[i] + b.coeffs[i];
  return out;
}

void check_associativity(const SemiAbelianBundle& b, int s, int t, int u, std::vector<Violation>& v) {
  const auto& R = b.realization();
  const auto& S = b.S();
  int st = S.mul(s, t), tu = S.mul(t, u);
  for (int p = 0; p < b.carrier_size(s); ++p) {
    for (int q = 0; q < b.carrier_size(t); ++q) {
      auto pq = R.product(s, p, t, q);
      for (int r = 0; r < b.carrier_size(u); ++r) {
        std::optional<PointTerm> left, right;
        if (pq) left = times(R.product(st, pq->index, u, r), pq->coeff);
        if (auto qr = R.product(t, q, u, r)) right = times(R.product(s, p, tu, qr->index), qr->coeff);
        if (!same(left, right)) {
          v.push_back({"associativity",
                       "s=" + fib(b, s) + ",t=" + fib(b, t) + ",u=" + fib(b, u) + ",points=" + std::to_string(p) + "," +
                           std::to_string(q) + "," + std::to_string(r),
                       "(ab)c=" + term_str(left) + " a(bc)=" + term_str(right)});
          return;
        }
      }
    }
  }
}

}  // namespace

std::vector<Violation> verify_fell_bundle(const SemiAbelianBundle& b, const BundleVerifyOptions& opt) {
  std::vector<Violation> v;
  const auto& R = b.realization();
  const auto& S = b.S();
  int n = S.size();
  double eps = opt.eps;

  // Products, adjoints and inclusions land in the right carriers.
  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t) {
      int st = S.mul(s, t);
      for (int p = 0; p < b.carrier_size(s); ++p)
        for (int q = 0; q < b.carrier_size(t); ++q)
          if (auto r = R.product(s, p, t, q); r && (r->index < 0 || r->index >= b.carrier_size(st)))
            v.push_back({"product fiber", "s=" + fib(b, s) + ",t=" + fib(b, t), "index out of carrier"});
    }
  }
  if (!v.empty()) return v;

  // Associativity, exactly on point masses.
  std::int64_t triples = static_cast<std::int64_t>(n) * n * n;
  std::mt19937_64 rng(opt.seed);
  if (triples <= opt.max_triples) {
    for (int s = 0; s < n; ++s)
      for (int t = 0; t < n; ++t)
        for (int u = 0; u < n; ++u) check_associativity(b, s, t, u, v);
  } else {
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (std::int64_t k = 0; k < opt.max_triples; ++k) check_associativity(b, pick(rng), pick(rng), pick(rng), v);
  }

  // Involution on point masses: involutive, anti-multiplicative, bijective.
  for (int s = 0; s < n; ++s) {
    int ss = S.star(s);
    std::set<int> hit;
    for (int p = 0; p < b.carrier_size(s); ++p) {
      PointTerm a = R.adjoint(s, p);
      hit.insert(a.index);
      PointTerm aa = R.adjoint(ss, a.index);
      if (aa.index != p || !(a.coeff.conj() * aa.coeff).is_one())
        v.push_back({"involutive", "s=" + fib(b, s) + ",point=" + std::to_string(p), ""});
    }
    if (static_cast<int>(hit.size()) != b.carrier_size(s) || b.carrier_size(s) != b.carrier_size(ss))
      v.push_back({"involution bijective", "s=" + fib(b, s), ""});
  }
  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t) {
      for (int p = 0; p < b.carrier_size(s); ++p) {
        for (int q = 0; q < b.carrier_size(t); ++q) {
          std::optional<PointTerm> lhs;
          if (auto pq = R.product(s, p, t, q)) {
            PointTerm a = R.adjoint(S.mul(s, t), pq->index);
            lhs = PointTerm{a.index, pq->coeff.conj() * a.coeff};
          }
          PointTerm bq = R.adjoint(t, q), ap = R.adjoint(s, p);
          auto rhs = times(R.product(S.star(t), bq.index, S.star(s), ap.index), bq.coeff * ap.coeff);
          if (!same(lhs, rhs))
            v.push_back({"(ab)*=b*a*", "s=" + fib(b, s) + ",t=" + fib(b, t),
                         "lhs=" + term_str(lhs) + " rhs=" + term_str(rhs)});
        }
      }
    }
  }

  // Positivity on point masses: delta_p* delta_p is the positive point function 1.
  for (int s = 0; s < n; ++s) {
    int ss = S.star(s), src = S.source(s);
    for (int p = 0; p < b.carrier_size(s); ++p) {
      PointTerm a = R.adjoint(s, p);
      auto pp = times(R.product(ss, a.index, s, p), a.coeff);
      bool ok = pp.has_value();
      if (ok) {
        auto k = R.product(src, pp->index, src, pp->index);
        ok = k && k->index == pp->index && (pp->coeff * k->coeff).is_one();
      }
      if (!ok) v.push_back({"a*a positive", "s=" + fib(b, s) + ",point=" + std::to_string(p), term_str(pp)});
    }
  }

  // Functoriality of inclusions and their compatibility with involution.
  for (int t = 0; t < n; ++t) {
    for (int s = 0; s < n; ++s) {
      if (!S.leq(s, t)) continue;
      std::set<int> hit;
      for (int p = 0; p < b.carrier_size(s); ++p) {
        PointTerm j = R.include(t, s, p);
        hit.insert(j.index);
        if (s == t && (j.index != p || !j.coeff.is_one()))
          v.push_back({"j_ss=id", "s=" + fib(b, s), ""});
        PointTerm lhs = R.adjoint(t, j.index);
        lhs.coeff *= j.coeff.conj();
        PointTerm a = R.adjoint(s, p);
        PointTerm rhs = R.include(S.star(t), S.star(s), a.index);
        rhs.coeff *= a.coeff;
        if (!same(lhs, rhs)) v.push_back({"j(a)*=j(a*)", "s=" + fib(b, s) + ",t=" + fib(b, t), ""});
      }
      if (static_cast<int>(hit.size()) != b.carrier_size(s))
        v.push_back({"inclusion injective", "s=" + fib(b, s) + ",t=" + fib(b, t), ""});
      for (int r = 0; r < n; ++r) {
        if (!S.leq(r, s)) continue;
        for (int p = 0; p < b.carrier_size(r); ++p) {
          PointTerm direct = R.include(t, r, p);
          PointTerm step = R.include(s, r, p);
          PointTerm two = R.include(t, s, step.index);
          two.coeff *= step.coeff;
          if (!same(direct, two))
            v.push_back({"j_tr=j_ts j_sr", "r=" + fib(b, r) + ",s=" + fib(b, s) + ",t=" + fib(b, t), ""});
        }
      }
    }
  }

  // Inclusions commute with products: j_{t,s}(a) c = j_{tu,su}(a c) and c j_{t,s}(a) = j_{ut,us}(c a).
  for (int t = 0; t < n; ++t) {
    for (int s = 0; s < n; ++s) {
      if (!S.leq(s, t)) continue;
      for (int u = 0; u < n; ++u) {
        int su = S.mul(s, u), tu = S.mul(t, u), us = S.mul(u, s), ut = S.mul(u, t);
        for (int p = 0; p < b.carrier_size(s); ++p) {
          PointTerm j = R.include(t, s, p);
          for (int q = 0; q < b.carrier_size(u); ++q) {
            auto lhs = times(R.product(t, j.index, u, q), j.coeff);
            std::optional<PointTerm> rhs;
            if (auto pq = R.product(s, p, u, q)) {
              PointTerm k = R.include(tu, su, pq->index);
              rhs = PointTerm{k.index, k.coeff * pq->coeff};
            }
            if (!same(lhs, rhs))
              v.push_back({"j(a)c=j(ac)", "s=" + fib(b, s) + ",t=" + fib(b, t) + ",u=" + fib(b, u),
                           "lhs=" + term_str(lhs) + " rhs=" + term_str(rhs)});
            auto lhs2 = times(R.product(u, q, t, j.index), j.coeff);
            std::optional<PointTerm> rhs2;
            if (auto qp = R.product(u, q, s, p)) {
              PointTerm k = R.include(ut, us, qp->index);
              rhs2 = PointTerm{k.index, k.coeff * qp->coeff};
            }
            if (!same(lhs2, rhs2))
              v.push_back({"c j(a)=j(ca)", "s=" + fib(b, s) + ",t=" + fib(b, t) + ",u=" + fib(b, u),
                           "lhs=" + term_str(lhs2) + " rhs=" + term_str(rhs2)});
          }
        }
      }
    }
  }

  // Dense random elements: bilinearity, conjugate-linearity, norms.
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::normal_distribution<double> g;
  for (int k = 0; k < opt.random_samples * n; ++k) {
    int s = pick(rng), t = pick(rng);
    FiberElement a = random_element(b, s, rng), a2 = random_element(b, s, rng), c = random_element(b, t, rng);
    Complex alpha(g(rng), g(rng));
    std::string where = "s=" + fib(b, s) + ",t=" + fib(b, t) + ",sample=" + std::to_string(k);
    FiberElement ac = b.multiply(a, c);
    if (!close(b.multiply(lin(alpha, a, a2), c), lin(alpha, ac, b.multiply(a2, c)), eps))
      v.push_back({"bilinearity", where, ""});
    if (sup_norm(ac) > sup_norm(a) * sup_norm(c) * (1 + eps) + eps)
      v.push_back({"norm submultiplicative", where, ""});
    FiberElement lhs = b.adjoint(lin(alpha, a, a2));
    FiberElement rhs = lin(std::conj(alpha), b.adjoint(a), b.adjoint(a2));
    if (!close(lhs, rhs, eps)) v.push_back({"conjugate-linear", where, ""});
    if (std::abs(sup_norm(b.adjoint(a)) - sup_norm(a)) > eps * std::max(1.0, sup_norm(a)))
      v.push_back({"isometric involution", where, ""});
    if (!close(b.adjoint(b.adjoint(a)), a, eps)) v.push_back({"involutive", where, ""});
    if (!close(b.adjoint(ac), b.multiply(b.adjoint(c), b.adjoint(a)), eps)) v.push_back({"(ab)*=b*a*", where, ""});
    FiberElement aa = b.multiply(b.adjoint(a), a);
    double na = sup_norm(a);
    if (std::abs(sup_norm(aa) - na * na) > eps * std::max(1.0, na * na)) v.push_back({"C*-identity", where, ""});
    int e = aa.fiber;
    for (int p = 0; p < b.carrier_size(e); ++p) {
      Complex value = aa.coeffs[p] * std::conj(b.unit_coefficient(e, p).value());
      if (std::abs(value.imag()) > eps * std::max(1.0, na * na) || value.real() < -eps * std::max(1.0, na * na))
        v.push_back({"a*a positive", where, "value at point " + std::to_string(p)});
    }
  }
  return v;
}

UnitFamily canonical_unit_family(const SemiAbelianBundle& b) {
  UnitFamily u;
  for (int s = 0; s < b.size(); ++s) {
    if (b.S().is_idempotent(s)) {
      u.push_back(b.unit(s));
      continue;
    }
    MonomialElement m{s, {}};
    for (int p = 0; p < b.carrier_size(s); ++p) m.terms[p] = CircleScalar::one();
    u.push_back(std::move(m));
  }
  return u;
}

UnitFamily gauged_family(const SemiAbelianBundle& b, const Gauge& chi) {
  const auto* ar = dynamic_cast<const ActionRealization*>(&b.realization());
  if (!ar) throw InputError("gauged families need a bundle built from an action");
  const auto& a = ar->action();
  if (static_cast<int>(chi.size()) != b.size()) throw Error("CarrierMismatch", "gauge size");
  UnitFamily u;
  for (int s = 0; s < b.size(); ++s) {
    if (chi[s].carrier() != a.U(s)) throw Error("CarrierMismatch", "gauge carrier at " + b.S().label(s));
    if (b.S().is_idempotent(s) && !is_identically_one(chi[s]))
      throw Error("GaugeNotUnitAtIdempotent", "gauge at " + b.S().label(s));
    MonomialElement m{s, {}};
    for (int p = 0; p < b.carrier_size(s); ++p) m.terms[p] = chi[s].values()[p];
    u.push_back(std::move(m));
  }
  return u;
}

BundleClass classify_bundle(const SemiAbelianBundle& b) {
  BundleClass c;
  const auto& R = b.realization();
  const auto& S = b.S();
  int n = S.size();
  // hits[s][t]: carrier points of A_st reached by products of point masses.
  auto product_hits = [&](int s, int t) {
    std::set<int> hit;
    for (int p = 0; p < b.carrier_size(s); ++p)
      for (int q = 0; q < b.carrier_size(t); ++q)
        if (auto r = R.product(s, p, t, q)) hit.insert(r->index);
    return hit;
  };
  c.saturated = true;
  for (int s = 0; s < n && c.saturated; ++s) {
    for (int t = 0; t < n; ++t) {
      if (static_cast<int>(product_hits(s, t).size()) != b.carrier_size(S.mul(s, t))) {
        c.saturated = false;
        c.notes.push_back("A_s A_t misses part of A_st at s=" + S.label(s) + ", t=" + S.label(t));
        break;
      }
    }
  }
  c.semi_abelian = true;
  for (int e : S.idempotents()) {
    for (int p = 0; p < b.carrier_size(e) && c.semi_abelian; ++p) {
      for (int q = 0; q < b.carrier_size(e); ++q) {
        auto pq = R.product(e, p, e, q), qp = R.product(e, q, e, p);
        if (!same(pq, qp)) {
          c.semi_abelian = false;
          c.notes.push_back("idempotent fiber " + S.label(e) + " is not commutative");
          break;
        }
      }
    }
  }
  UnitFamily u = canonical_unit_family(b);
  c.regular.assign(n, true);
  for (int s = 0; s < n; ++s) {
    // u_s J_s = A_s and I_s u_s = A_s with J_s = A_s* A_s, I_s = A_s A_s*.
    int ss = S.star(s);
    std::set<int> right, left;
    for (int j : product_hits(ss, s))
      for (int p = 0; p < b.carrier_size(s); ++p)
        if (auto r = R.product(s, p, S.source(s), j)) right.insert(r->index);
    for (int i : product_hits(s, ss))
      for (int p = 0; p < b.carrier_size(s); ++p)
        if (auto r = R.product(S.range(s), i, s, p)) left.insert(r->index);
    int full = b.carrier_size(s);
    c.regular[s] = static_cast<int>(right.size()) == full && static_cast<int>(left.size()) == full;
  }
  if (std::all_of(c.regular.begin(), c.regular.end(), [](bool r) { return r; })) c.witness = u;
  return c;
}

TwistedAction extract_action(const SemiAbelianBundle& b, const UnitFamily& u) {
  const auto& S = b.S();
  int n = S.size();
  if (static_cast<int>(u.size()) != n) throw Error("BadMultiplierFamily", "one multiplier per element required");
  for (int s = 0; s < n; ++s) {
    if (u[s].fiber != s || static_cast<int>(u[s].terms.size()) != b.carrier_size(s))
      throw Error("BadMultiplierFamily", "u_" + S.label(s) + " must be unimodular on the whole carrier");
    for (const auto& [p, c] : u[s].terms)
      if (p < 0 || p >= b.carrier_size(s)) throw Error("BadMultiplierFamily", "carrier index out of range");
    if (S.is_idempotent(s) && !(u[s] == b.unit(s)))
      throw Error("BadMultiplierFamily", "u_e must be the unit of A_e at e=" + S.label(s));
  }
  BundleClass cls = classify_bundle(b);
  if (!cls.saturated) throw Error("NotSaturated", cls.notes.empty() ? "" : cls.notes.front());
  if (!cls.semi_abelian) throw Error("NotSemiAbelian", cls.notes.empty() ? "" : cls.notes.back());

  const auto& R = b.realization();
  TwistedAction a;
  a.semigroup = R.semigroup_ptr();
  int np = R.num_points();
  for (int x = 0; x < np; ++x) a.point_labels.push_back(R.point_label(x));
  auto base_set = [&](int s) {
    std::vector<int> pts;
    for (int p = 0; p < b.carrier_size(s); ++p) pts.push_back(R.base_point(s, p));
    PointSet out = make_point_set(pts);
    if (out.size() != pts.size()) throw Error("NotMonomial", "fiber " + S.label(s) + " has two points over one base point");
    return out;
  };
  for (int s = 0; s < n; ++s) a.ideal.push_back(base_set(s));
  for (int s = 0; s < n; ++s) {
    int src = S.source(s), rng = S.range(s);
    std::vector<std::pair<int, int>> pairs;
    MonomialElement ustar = b.adjoint(u[s]);
    for (int q = 0; q < b.carrier_size(src); ++q) {
      MonomialElement m = b.multiply(b.multiply(u[s], MonomialElement{src, {{q, CircleScalar::one()}}}), ustar);
      if (m.fiber != rng || m.terms.size() != 1) throw Error("BadMultiplierFamily", "conjugation by u_s is not a point map");
      pairs.emplace_back(R.base_point(src, q), R.base_point(rng, m.terms.begin()->first));
    }
    a.theta.push_back(PartialBijection::from_pairs(np, pairs));
  }
  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t) {
      int st = S.mul(s, t);
      MonomialElement m = b.multiply(b.multiply(u[s], u[t]), b.adjoint(u[st]));
      int e = m.fiber;
      std::vector<std::pair<int, CircleScalar>> vals;
      for (const auto& [p, c] : m.terms) vals.emplace_back(R.base_point(e, p), c * b.unit_coefficient(e, p).conj());
      std::sort(vals.begin(), vals.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
      PointSet carrier;
      std::vector<CircleScalar> w;
      for (auto& [x, c] : vals) {
        carrier.push_back(x);
        w.push_back(c);
      }
      if (carrier != a.ideal[st]) throw Error("BadMultiplierFamily", "u_s u_t u_st* is not unimodular on U(st)");
      a.omega.emplace_back(std::move(carrier), std::move(w));
    }
  }
  return a;
}

RoundTrip roundtrip_check(const TwistedAction& a) {
  SemiAbelianBundle b = build_bundle(a);
  TwistedAction e = extract_action(b, canonical_unit_family(b));
  RoundTrip r;
  r.diff = diff_actions(a, e);
  r.exact = r.diff.empty();
  return r;
}

}  // namespace twa
