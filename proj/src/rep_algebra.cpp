#include "twa/rep_algebra.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <cmath>
#include <random>

namespace twa {

Vector StarAlgebra::basis(int i) const {
  Vector v = Vector::Zero(dim());
  v(i) = 1.0;
  return v;
}

Vector StarAlgebra::multiply(const Vector& a, const Vector& b) const {
  Vector out = Vector::Zero(dim());
  for (int i = 0; i < dim(); ++i) {
    if (a(i) == 0.0) continue;
    for (int j = 0; j < dim(); ++j) {
      if (b(j) == 0.0) continue;
      for (const auto& [k, c] : product(i, j)) out(k) += a(i) * b(j) * c;
    }
  }
  return out;
}

Vector StarAlgebra::adjoint(const Vector& a) const {
  Vector out = Vector::Zero(dim());
  for (int i = 0; i < dim(); ++i)
    for (const auto& [k, c] : star[i]) out(k) += std::conj(a(i)) * c;
  return out;
}

Matrix StarAlgebra::left_regular(const Vector& a) const {
  Matrix m(dim(), dim());
  for (int j = 0; j < dim(); ++j) m.col(j) = multiply(a, basis(j));
  return m;
}

namespace {

bool close(const Vector& a, const Vector& b, double eps) {
  double scale = std::max({1.0, a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()});
  return (a - b).cwiseAbs().maxCoeff() <= eps * scale;
}

}  // namespace

std::vector<Violation> verify_star_algebra(const StarAlgebra& a, double eps) {
  std::vector<Violation> v;
  int n = a.dim();
  if (n == 0) return v;
  std::vector<Vector> e(n);
  for (int i = 0; i < n; ++i) e[i] = a.basis(i);
  for (int i = 0; i < n; ++i) {
    if (!close(a.adjoint(a.adjoint(e[i])), e[i], eps)) v.push_back({"involutive", a.labels[i], ""});
    for (int j = 0; j < n; ++j) {
      Vector ij = a.multiply(e[i], e[j]);
      if (!close(a.adjoint(ij), a.multiply(a.adjoint(e[j]), a.adjoint(e[i])), eps))
        v.push_back({"anti-multiplicative", a.labels[i] + "," + a.labels[j], ""});
      for (int k = 0; k < n; ++k)
        if (!close(a.multiply(ij, e[k]), a.multiply(e[i], a.multiply(e[j], e[k])), eps))
          v.push_back({"associativity", a.labels[i] + "," + a.labels[j] + "," + a.labels[k], ""});
    }
  }
  return v;
}

StarAlgebra convolution_algebra(const FiniteGroupoid& g, const TwoCocycle& tau) {
  StarAlgebra a;
  int n = g.num_arrows();
  for (int i = 0; i < n; ++i) a.labels.push_back(g.arrow_label(i));
  a.products.resize(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    int ii = g.inv(i);
    a.star.push_back({{ii, tau.at(ii, i).conj().value()}});
    for (int j = 0; j < n; ++j)
      if (g.composable(i, j)) a.products[static_cast<std::size_t>(i) * n + j] = {{g.mul(i, j), tau.at(i, j).value()}};
  }
  return a;
}

StarAlgebra germ_algebra(const TwistedAction& act) {
  GermGroupoid gg = germ_groupoid(act);
  StarAlgebra a;
  int n = gg.size();
  for (int k = 0; k < n; ++k)
    a.labels.push_back("[" + act.S().label(gg.germ(k).rep) + "," + act.point_labels[gg.germ(k).x] + "]");
  a.products.resize(static_cast<std::size_t>(n) * n);
  for (int k = 0; k < n; ++k) {
    a.star.push_back({{gg.inverse(k), gg.involution(k).value()}});
    for (int l = 0; l < n; ++l)
      if (auto kl = gg.compose(k, l)) a.products[static_cast<std::size_t>(k) * n + l] = {{*kl, gg.cocycle(k, l).value()}};
  }
  return a;
}

std::vector<Violation> check_basis_isomorphism(const StarAlgebra& a, const StarAlgebra& b, const std::vector<int>& map,
                                               const std::vector<Complex>& scale, double eps) {
  std::vector<Violation> v;
  int n = a.dim();
  if (n != b.dim() || static_cast<int>(map.size()) != n || static_cast<int>(scale.size()) != n) {
    v.push_back({"dimension", "", std::to_string(a.dim()) + " vs " + std::to_string(b.dim())});
    return v;
  }
  std::vector<bool> hit(n, false);
  for (int i = 0; i < n; ++i) {
    if (map[i] < 0 || map[i] >= n || hit[map[i]] || std::abs(scale[i]) < eps) {
      v.push_back({"bijective", a.labels[i], ""});
      return v;
    }
    hit[map[i]] = true;
  }
  auto phi = [&](const Vector& x) {
    Vector y = Vector::Zero(n);
    for (int i = 0; i < n; ++i) y(map[i]) += scale[i] * x(i);
    return y;
  };
  for (int i = 0; i < n; ++i) {
    Vector ei = a.basis(i), fi = phi(ei);
    if (!close(phi(a.adjoint(ei)), b.adjoint(fi), eps)) v.push_back({"*-preserving", a.labels[i], ""});
    for (int j = 0; j < n; ++j) {
      Vector ej = a.basis(j);
      if (!close(phi(a.multiply(ei, ej)), b.multiply(fi, phi(ej)), eps))
        v.push_back({"multiplicative", a.labels[i] + "," + a.labels[j], ""});
    }
  }
  return v;
}

std::vector<int> block_decompose(const StarAlgebra& a, std::uint64_t seed, double eps) {
  int n = a.dim();
  if (n == 0) return {};
  // Center: kernel of z -> (z e_j - e_j z)_j.
  Matrix k(static_cast<Eigen::Index>(n) * n, n);
  for (int i = 0; i < n; ++i) {
    Vector ei = a.basis(i);
    for (int j = 0; j < n; ++j) {
      Vector ej = a.basis(j);
      k.block(static_cast<Eigen::Index>(j) * n, i, n, 1) = a.multiply(ei, ej) - a.multiply(ej, ei);
    }
  }
  Eigen::FullPivLU<Matrix> lu(k);
  lu.setThreshold(std::max(eps, 1e-12));
  Matrix center = lu.kernel();
  if (lu.rank() == 0) center = Matrix::Identity(n, n);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Vector z = Vector::Zero(n);
  for (Eigen::Index c = 0; c < center.cols(); ++c) z += Complex(g(rng), g(rng)) * center.col(c);
  Vector h = z + a.adjoint(z);
  Eigen::ComplexEigenSolver<Matrix> es(a.left_regular(h), false);
  std::vector<double> ev;
  double scale = 1.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    ev.push_back(es.eigenvalues()(i).real());
    scale = std::max(scale, std::abs(es.eigenvalues()(i)));
  }
  std::sort(ev.begin(), ev.end());
  double tol = 1e-6 * scale;
  std::vector<int> blocks;
  for (std::size_t i = 0; i < ev.size();) {
    std::size_t j = i + 1;
    while (j < ev.size() && ev[j] - ev[j - 1] <= tol) ++j;
    int m = static_cast<int>(j - i);
    int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(m))));
    if (r * r != m)
      throw Error("NotSemisimpleDetected", "eigenvalue multiplicity " + std::to_string(m) + " is not a square");
    blocks.push_back(r);
    i = j;
  }
  std::sort(blocks.begin(), blocks.end());
  return blocks;
}

CovariantRep regular_covariant_rep(const FiniteGroupoid& g, const TwoCocycle& tau, const BisectionSemigroup& s) {
  CovariantRep r;
  int d = g.num_arrows();
  r.dim = d;
  for (int x = 0; x < g.num_objects(); ++x) {
    Matrix m = Matrix::Zero(d, d);
    for (int a = 0; a < d; ++a)
      if (g.rng(a) == x) m(a, a) = 1.0;
    r.rho.push_back(m);
  }
  for (const Bisection& b : s.bisections) {
    Matrix m = Matrix::Zero(d, d);
    for (int alpha : b)
      for (int beta = 0; beta < d; ++beta)
        if (g.composable(alpha, beta)) m(g.mul(alpha, beta), beta) += tau.at(alpha, beta).value();
    r.v.push_back(m);
  }
  return r;
}

namespace {

Matrix rho_of(const CovariantRep& r, const PointSet& carrier, const std::vector<CircleScalar>& values) {
  Matrix m = Matrix::Zero(r.dim, r.dim);
  for (std::size_t i = 0; i < carrier.size(); ++i) m += values[i].value() * r.rho[carrier[i]];
  return m;
}

Matrix rho_one(const CovariantRep& r, const PointSet& carrier) {
  return rho_of(r, carrier, std::vector<CircleScalar>(carrier.size()));
}

}  // namespace

std::vector<Violation> verify_covariant(const CovariantRep& r, const TwistedAction& a, double eps) {
  std::vector<Violation> v;
  const auto& S = a.S();
  if (static_cast<int>(r.rho.size()) != a.num_points() || static_cast<int>(r.v.size()) != S.size()) {
    v.push_back({"shape", "", "rho needs one matrix per point and v one per element"});
    return v;
  }
  for (const auto& m : r.rho)
    if (m.rows() != r.dim || m.cols() != r.dim) v.push_back({"shape", "", "rho dimension"});
  for (const auto& m : r.v)
    if (m.rows() != r.dim || m.cols() != r.dim) v.push_back({"shape", "", "v dimension"});
  if (!v.empty()) return v;
  for (int x = 0; x < a.num_points(); ++x) {
    if (!approx_equal(r.rho[x].adjoint(), r.rho[x], eps)) v.push_back({"rho *-homomorphism", a.point_labels[x], ""});
    for (int y = 0; y < a.num_points(); ++y) {
      Matrix expect = x == y ? r.rho[x] : Matrix::Zero(r.dim, r.dim);
      if (!approx_equal(r.rho[x] * r.rho[y], expect, eps))
        v.push_back({"rho *-homomorphism", a.point_labels[x] + "," + a.point_labels[y], ""});
    }
  }
  for (int s = 0; s < S.size(); ++s) {
    const Matrix& vs = r.v[s];
    for (int x : a.U(S.source(s))) {
      int y = *a.theta[s].apply(x);
      if (!approx_equal(vs * r.rho[x] * vs.adjoint(), r.rho[y], eps))
        v.push_back({"rho(beta_s(b)) = v_s rho(b) v_s*", "s=" + S.label(s) + ",x=" + a.point_labels[x], ""});
    }
    if (!approx_equal(vs.adjoint() * vs, rho_one(r, a.U(S.source(s))), eps))
      v.push_back({"v_s* v_s = rho(1_{s*s})", "s=" + S.label(s), ""});
    if (!approx_equal(vs * vs.adjoint(), rho_one(r, a.U(S.range(s))), eps))
      v.push_back({"v_s v_s* = rho(1_{ss*})", "s=" + S.label(s), ""});
    for (int t = 0; t < S.size(); ++t) {
      const CircleFunction& w = a.w(s, t);
      if (!approx_equal(rho_of(r, w.carrier(), w.values()), vs * r.v[t] * r.v[S.mul(s, t)].adjoint(), eps))
        v.push_back({"rho(omega(s,t)) = v_s v_t v_st*", "s=" + S.label(s) + ",t=" + S.label(t), ""});
    }
  }
  return v;
}

std::vector<Violation> verify_representation(const BundleRep& pi, const SemiAbelianBundle& b, double eps) {
  std::vector<Violation> v;
  const auto& R = b.realization();
  const auto& S = b.S();
  int n = S.size();
  if (static_cast<int>(pi.pi.size()) != n) {
    v.push_back({"shape", "", "one family of matrices per fiber required"});
    return v;
  }
  for (int s = 0; s < n; ++s) {
    if (static_cast<int>(pi.pi[s].size()) != b.carrier_size(s)) {
      v.push_back({"shape", "s=" + S.label(s), "one matrix per carrier point required"});
      return v;
    }
    for (const auto& m : pi.pi[s])
      if (m.rows() != pi.dim || m.cols() != pi.dim) {
        v.push_back({"shape", "s=" + S.label(s), "matrix dimension"});
        return v;
      }
  }
  Matrix zero = Matrix::Zero(pi.dim, pi.dim);
  for (int s = 0; s < n; ++s) {
    for (int p = 0; p < b.carrier_size(s); ++p) {
      const Matrix& a = pi.pi[s][p];
      PointTerm adj = R.adjoint(s, p);
      if (!approx_equal(a.adjoint(), adj.coeff.value() * pi.pi[S.star(s)][adj.index], eps))
        v.push_back({"pi(a)* = pi(a*)", "s=" + S.label(s) + ",point=" + std::to_string(p), ""});
      for (int t = 0; t < n; ++t) {
        if (S.leq(s, t)) {
          PointTerm j = R.include(t, s, p);
          if (!approx_equal(j.coeff.value() * pi.pi[t][j.index], a, eps))
            v.push_back({"pi(j(a)) = pi(a)", "s=" + S.label(s) + ",t=" + S.label(t) + ",point=" + std::to_string(p), ""});
        }
        int st = S.mul(s, t);
        for (int q = 0; q < b.carrier_size(t); ++q) {
          auto pq = R.product(s, p, t, q);
          const Matrix& expect = pq ? Matrix(pq->coeff.value() * pi.pi[st][pq->index]) : zero;
          if (!approx_equal(a * pi.pi[t][q], expect, eps))
            v.push_back({"pi(a)pi(b) = pi(ab)", "s=" + S.label(s) + ",t=" + S.label(t), ""});
        }
      }
    }
  }
  return v;
}

BundleRep to_bundle_rep(const CovariantRep& r, const TwistedAction& a, double eps) {
  if (auto bad = verify_covariant(r, a, eps); !bad.empty())
    throw Error("VerificationFailed", bad.front().rule + " at " + bad.front().where);
  BundleRep out;
  out.dim = r.dim;
  for (int s = 0; s < a.size(); ++s) {
    std::vector<Matrix> f;
    for (int y : a.U(s)) f.push_back(r.rho[y] * r.v[s]);
    out.pi.push_back(std::move(f));
  }
  return out;
}

CovariantRep to_covariant(const BundleRep& pi, const TwistedAction& a, double eps) {
  SemiAbelianBundle b = build_bundle(a);
  if (auto bad = verify_representation(pi, b, eps); !bad.empty())
    throw Error("VerificationFailed", bad.front().rule + " at " + bad.front().where);
  const auto& S = a.S();
  CovariantRep r;
  r.dim = pi.dim;
  r.rho.assign(a.num_points(), Matrix::Zero(pi.dim, pi.dim));
  std::vector<bool> done(a.num_points(), false);
  // Inclusions between idempotent fibers carry coefficient one, so any fiber
  // containing x gives the same rho.
  for (int e : S.idempotents()) {
    for (int p = 0; p < b.carrier_size(e); ++p) {
      int x = a.U(e)[p];
      if (done[x]) continue;
      r.rho[x] = b.unit_coefficient(e, p).value() * pi.pi[e][p];
      done[x] = true;
    }
  }
  for (int s = 0; s < S.size(); ++s) {
    Matrix m = Matrix::Zero(pi.dim, pi.dim);
    for (const Matrix& x : pi.pi[s]) m += x;
    r.v.push_back(m);
  }
  return r;
}

bool approx_equal(const CovariantRep& a, const CovariantRep& b, double eps) {
  if (a.dim != b.dim || a.rho.size() != b.rho.size() || a.v.size() != b.v.size()) return false;
  for (std::size_t i = 0; i < a.rho.size(); ++i)
    if (!approx_equal(a.rho[i], b.rho[i], eps)) return false;
  for (std::size_t i = 0; i < a.v.size(); ++i)
    if (!approx_equal(a.v[i], b.v[i], eps)) return false;
  return true;
}

bool approx_equal(const BundleRep& a, const BundleRep& b, double eps) {
  if (a.dim != b.dim || a.pi.size() != b.pi.size()) return false;
  for (std::size_t s = 0; s < a.pi.size(); ++s) {
    if (a.pi[s].size() != b.pi[s].size()) return false;
    for (std::size_t p = 0; p < a.pi[s].size(); ++p)
      if (!approx_equal(a.pi[s][p], b.pi[s][p], eps)) return false;
  }
  return true;
}

}  // namespace twa
