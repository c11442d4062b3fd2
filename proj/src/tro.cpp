#include "twa/tro.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <random>

namespace twa {

namespace {

Eigen::VectorXcd vec(const Matrix& m) { return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size()); }

Matrix unvec(const Eigen::VectorXcd& v, int n) { return Eigen::Map<const Matrix>(v.data(), n, n); }

void require_dim(int a, int b, const char* where) {
  if (a != b) throw Error("DimensionMismatch", std::string(where) + ": " + std::to_string(a) + " vs " + std::to_string(b));
}

Matrix random_element(const Span& s, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix m = Matrix::Zero(s.dim(), s.dim());
  for (const Matrix& b : s.basis()) m += std::complex<double>(g(rng), g(rng)) * b;
  return m;
}

}  // namespace

Span Span::of(int dim, const std::vector<Matrix>& gens, double eps) {
  Span s;
  s.dim_ = dim;
  int n2 = dim * dim;
  if (gens.empty() || n2 == 0) {
    s.columns_ = Matrix::Zero(n2, 0);
    return s;
  }
  Matrix a(n2, static_cast<Eigen::Index>(gens.size()));
  for (std::size_t i = 0; i < gens.size(); ++i) {
    require_dim(static_cast<int>(gens[i].rows()), dim, "span generator");
    require_dim(static_cast<int>(gens[i].cols()), dim, "span generator");
    a.col(static_cast<Eigen::Index>(i)) = vec(gens[i]);
  }
  Eigen::ColPivHouseholderQR<Matrix> qr(a);
  qr.setThreshold(eps);
  int r = static_cast<int>(qr.rank());
  if (qr.maxPivot() == 0.0) r = 0;
  Matrix q = qr.householderQ() * Matrix::Identity(n2, r);
  s.columns_ = q;
  for (int i = 0; i < r; ++i) s.basis_.push_back(unvec(q.col(i), dim));
  return s;
}

double Span::residual(const Matrix& m) const {
  Eigen::VectorXcd v = vec(m);
  if (columns_.cols() == 0) return v.norm();
  return (v - columns_ * (columns_.adjoint() * v)).norm();
}

bool Span::contains(const Matrix& m, double eps) const {
  require_dim(static_cast<int>(m.rows()), dim_, "span membership");
  return residual(m) <= eps * std::max(1.0, m.norm());
}

bool Span::contains(const Span& other, double eps) const {
  return std::all_of(other.basis_.begin(), other.basis_.end(), [&](const Matrix& m) { return contains(m, eps); });
}

bool Span::equals(const Span& other, double eps) const {
  return dim_ == other.dim_ && size() == other.size() && contains(other, eps);
}

Span span_product(const Span& a, const Span& b, ProductMode mode, double eps) {
  require_dim(a.dim(), b.dim(), "span product");
  std::vector<Matrix> gens;
  gens.reserve(a.basis().size() * b.basis().size());
  for (const Matrix& x : a.basis()) {
    for (const Matrix& y : b.basis()) {
      switch (mode) {
        case ProductMode::AB: gens.push_back(x * y); break;
        case ProductMode::ABstar: gens.push_back(x * y.adjoint()); break;
        case ProductMode::AstarB: gens.push_back(x.adjoint() * y); break;
      }
    }
  }
  return Span::of(a.dim(), gens, eps);
}

Span left_multiply(const Span& a, const Matrix& m, double eps) {
  std::vector<Matrix> gens;
  for (const Matrix& x : a.basis()) gens.push_back(x * m);
  return Span::of(a.dim(), gens, eps);
}

Span right_multiply(const Matrix& m, const Span& a, double eps) {
  std::vector<Matrix> gens;
  for (const Matrix& x : a.basis()) gens.push_back(m * x);
  return Span::of(a.dim(), gens, eps);
}

bool MatrixTRO::is_tro(const Span& s, double eps) {
  Span left = span_product(s, s, ProductMode::ABstar, eps);
  return s.contains(span_product(left, s, ProductMode::AB, eps), eps);
}

MatrixTRO MatrixTRO::from_span(Span s, double eps) {
  MatrixTRO t;
  t.left_ = span_product(s, s, ProductMode::ABstar, eps);
  t.right_ = span_product(s, s, ProductMode::AstarB, eps);
  if (!s.contains(span_product(t.left_, s, ProductMode::AB, eps), eps))
    throw Error("NotATRO", "span is not closed under x y* z");
  t.span_ = std::move(s);
  return t;
}

MatrixTRO MatrixTRO::from_basis(int dim, const std::vector<Matrix>& gens, double eps) {
  return from_span(Span::of(dim, gens, eps), eps);
}

Matrix range_projection(const Span& a, double eps) {
  int n = a.dim();
  if (a.size() == 0) return Matrix::Zero(n, n);
  Matrix cols(n, n * a.size());
  for (int i = 0; i < a.size(); ++i) cols.middleCols(i * n, n) = a.basis()[i];
  Eigen::JacobiSVD<Matrix> svd(cols, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  int r = 0;
  while (r < sv.size() && sv(r) > eps * sv(0)) ++r;
  Matrix u = svd.matrixU().leftCols(r);
  return u * u.adjoint();
}

bool approx_equal(const Matrix& a, const Matrix& b, double eps) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return (a - b).cwiseAbs().maxCoeff() <= eps * std::max(1.0, std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()));
}

Matrix matrix_unit(int n, int i, int j) {
  Matrix m = Matrix::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

bool AssociationReport::implications_hold() const {
  if (a && b && !(c && d)) return false;
  if (a && c && !b) return false;
  // The mirror of the previous case yields (a); (c) then follows from (a) and (b).
  if (b && d && !(a && c)) return false;
  return true;
}

AssociationReport check_association(const Matrix& u, const MatrixTRO& m, double eps) {
  require_dim(static_cast<int>(u.rows()), m.dim(), "association");
  require_dim(static_cast<int>(u.cols()), m.dim(), "association");
  const Span& M = m.span();
  std::vector<Matrix> ga, gb, gc, gd;
  Matrix uu = u * u.adjoint(), uau = u.adjoint() * u;
  for (const Matrix& x : M.basis()) {
    ga.push_back(x.adjoint() * u);
    gb.push_back(u * x.adjoint());
    gc.push_back(uu * x);
    gd.push_back(x * uau);
  }
  AssociationReport r;
  r.a = Span::of(m.dim(), ga, eps).equals(m.right_algebra(), eps);
  r.b = Span::of(m.dim(), gb, eps).equals(m.left_algebra(), eps);
  r.c = Span::of(m.dim(), gc, eps).equals(M, eps);
  r.d = Span::of(m.dim(), gd, eps).equals(M, eps);
  r.strict_right = approx_equal(uau, range_projection(m.right_algebra(), eps), 1e3 * eps);
  r.strict_left = approx_equal(uu, range_projection(m.left_algebra(), eps), 1e3 * eps);
  r.partial_isometry = approx_equal(uu * u, u, 1e3 * eps);
  return r;
}

Matrix polar_isometry(const Matrix& m, double eps) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int r = 0;
  while (r < sv.size() && sv(0) > 0 && sv(r) > eps * sv(0)) ++r;
  return svd.matrixU().leftCols(r) * svd.matrixV().leftCols(r).adjoint();
}

Matrix strict_correction(const Matrix& u, const MatrixTRO& m, double eps) {
  return u * range_projection(m.right_algebra(), eps);
}

bool verify_corner_isomorphism(const Matrix& u, const MatrixTRO& m, double eps) {
  const Span& left = m.left_algebra();
  const Span& right = m.right_algebra();
  std::vector<Matrix> images;
  double tol = 1e3 * eps;
  for (const Matrix& a : left.basis()) {
    Matrix ia = u.adjoint() * a * u;
    if (!right.contains(ia, tol)) return false;
    if (!approx_equal((u.adjoint() * a.adjoint() * u), ia.adjoint(), tol)) return false;
    for (const Matrix& b : left.basis())
      if (!approx_equal(u.adjoint() * a * b * u, ia * (u.adjoint() * b * u), tol)) return false;
    images.push_back(ia);
  }
  // Injective and onto: the image has full dimension and fills M*M.
  Span img = Span::of(m.dim(), images, eps);
  return img.size() == left.size() && img.equals(right, tol);
}

RegularityResult is_regular(const MatrixTRO& m, int trials, std::uint64_t seed, double eps) {
  RegularityResult res;
  const Span& M = m.span();
  if (M.size() == 0) {
    res.regular = true;
    res.witness = Matrix::Zero(m.dim(), m.dim());
    return res;
  }
  if (m.right_algebra().size() < M.size() || m.left_algebra().size() < M.size()) {
    res.obstruction = "min(dim M*M = " + std::to_string(m.right_algebra().size()) + ", dim MM* = " +
                      std::to_string(m.left_algebra().size()) + ") < dim M = " + std::to_string(M.size());
  }
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    Matrix x = random_element(M, rng);
    RegularityTrial tr{right_multiply(x, m.right_algebra(), eps).size(), left_multiply(m.left_algebra(), x, eps).size()};
    res.log.push_back(tr);
    if (tr.left_rank != M.size() || tr.right_rank != M.size()) continue;
    Matrix w = strict_correction(polar_isometry(x, eps), m, eps);
    AssociationReport rep = check_association(w, m, eps);
    if (rep.associated() && rep.partial_isometry) {
      res.regular = true;
      res.witness = w;
      return res;
    }
  }
  return res;
}

bool is_ideal(const MatrixTRO& n, const MatrixTRO& m, double eps) {
  if (!m.span().contains(n.span(), eps)) throw Error("NotSubspace", "N is not contained in M");
  Span nmm = span_product(n.span(), m.right_algebra(), ProductMode::AB, eps);
  Span mmn = span_product(m.left_algebra(), n.span(), ProductMode::AB, eps);
  return n.span().contains(nmm, eps) && n.span().contains(mmn, eps);
}

MatrixTRO principal_ideal(const MatrixTRO& m, const Matrix& x, double eps) {
  std::vector<Matrix> gens;
  for (const Matrix& a : m.left_algebra().basis())
    for (const Matrix& b : m.right_algebra().basis()) gens.push_back(a * x * b);
  return MatrixTRO::from_basis(m.dim(), gens, eps);
}

bool is_locally_regular(const MatrixTRO& m, int trials, std::uint64_t seed, double eps) {
  std::vector<Matrix> regular_parts;
  std::uint64_t k = 0;
  for (const Matrix& x : m.span().basis()) {
    MatrixTRO ideal = principal_ideal(m, x, eps);
    if (is_regular(ideal, trials, seed + k++, eps).regular)
      for (const Matrix& b : ideal.span().basis()) regular_parts.push_back(b);
  }
  return Span::of(m.dim(), regular_parts, eps).equals(m.span(), eps);
}

}  // namespace twa
