#include <doctest.h>

#include <complex>
#include <random>

#include <Eigen/QR>

#include "twa/tro.hpp"

using namespace twa;
using Complex = std::complex<double>;

namespace {

Matrix E(int n, int i, int j) { return matrix_unit(n, i, j); }

Matrix random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  Eigen::HouseholderQR<Matrix> qr(a);
  return qr.householderQ();
}

}  // namespace

TEST_CASE("spans are rank revealing") {
  Span s = Span::of(2, {E(2, 0, 0), E(2, 0, 0) * 2.0, E(2, 0, 0) + E(2, 1, 1)});
  CHECK(s.size() == 2);
  CHECK(s.contains(E(2, 1, 1)));
  CHECK_FALSE(s.contains(E(2, 0, 1)));
  CHECK(s.equals(Span::of(2, {E(2, 0, 0), E(2, 1, 1)})));
  CHECK(Span::of(2, {Matrix::Zero(2, 2)}).size() == 0);
  CHECK_THROWS(Span::of(2, {E(3, 0, 0)}));
}

TEST_CASE("column TRO on C^2") {
  auto m = MatrixTRO::from_basis(2, {E(2, 0, 0), E(2, 1, 0)});
  CHECK(m.span().size() == 2);
  // M*M = span{E11}, MM* = M_2.
  CHECK(m.right_algebra().size() == 1);
  CHECK(m.left_algebra().size() == 4);
  auto r = is_regular(m, 32, 7);
  CHECK_FALSE(r.regular);
  CHECK(r.obstruction.has_value());
  CHECK_FALSE(is_locally_regular(m, 32, 7));
}

TEST_CASE("one-dimensional corner is regular") {
  auto m = MatrixTRO::from_basis(2, {E(2, 0, 1)});
  auto r = is_regular(m, 8, 1);
  REQUIRE(r.regular);
  REQUIRE(r.witness);
  auto a = check_association(*r.witness, m);
  CHECK(a.associated());
  CHECK(a.strict());
  CHECK(a.partial_isometry);
  CHECK(verify_corner_isomorphism(*r.witness, m));
  CHECK(is_locally_regular(m, 8, 1));
}

TEST_CASE("non-TRO spans are rejected") {
  Matrix x(2, 2);
  x << 1, 1, 0, 1;
  Span s = Span::of(2, {x});
  CHECK_FALSE(MatrixTRO::is_tro(s));
  CHECK_THROWS_AS(MatrixTRO::from_span(s), Error);
  CHECK(MatrixTRO::is_tro(Span::of(2, {E(2, 0, 1), E(2, 1, 0)})));
}

TEST_CASE("full matrix algebra: identity is strictly associated") {
  std::vector<Matrix> basis;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) basis.push_back(E(3, i, j));
  auto m = MatrixTRO::from_basis(3, basis);
  auto a = check_association(Matrix::Identity(3, 3), m);
  CHECK(a.associated());
  CHECK(a.strict());
  // A rank-one projection is associated to nothing here.
  auto p = check_association(E(3, 0, 0), m);
  CHECK_FALSE(p.a);
  CHECK(p.implications_hold());
}

TEST_CASE("strict correction turns associated into strictly associated") {
  // M = span{E11, E12, E21, E22} in M_3; u = I is associated but u*u != 1_{M*M}.
  auto m = MatrixTRO::from_basis(3, {E(3, 0, 0), E(3, 0, 1), E(3, 1, 0), E(3, 1, 1)});
  Matrix u = Matrix::Identity(3, 3);
  auto before = check_association(u, m);
  CHECK(before.a);
  CHECK(before.b);
  CHECK_FALSE(before.strict());
  auto after = check_association(strict_correction(u, m), m);
  CHECK(after.associated());
  CHECK(after.strict());
}

TEST_CASE("association implications on random pairs") {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> g;
  int associated = 0;
  for (int k = 0; k < 150; ++k) {
    int n = 2 + static_cast<int>(rng() % 5);
    int p = 1 + static_cast<int>(rng() % (n - 1));
    Matrix l = random_unitary(n, rng), r = random_unitary(n, rng);
    std::vector<Matrix> basis;
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) basis.push_back(l * E(n, i, j) * r);
    auto m = MatrixTRO::from_basis(n, basis);
    Matrix x = Matrix::Zero(n, n);
    for (const auto& b : m.span().basis()) x += Complex(g(rng), g(rng)) * b;
    Matrix u = (k % 3 == 0) ? x : (k % 3 == 1 ? polar_isometry(x) : random_unitary(n, rng));
    auto a = check_association(u, m);
    CHECK(a.implications_hold());
    associated += a.associated();
    if (k % 3 == 1) CHECK(a.associated());
  }
  CHECK(associated >= 50);
}

TEST_CASE("polar isometry is a partial isometry with the right range") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  Matrix x = Matrix::Zero(4, 4);
  Eigen::VectorXcd a(4), b(4);
  for (int i = 0; i < 4; ++i) {
    a(i) = Complex(g(rng), g(rng));
    b(i) = Complex(g(rng), g(rng));
  }
  x = a * b.adjoint();
  Matrix v = polar_isometry(x);
  CHECK(approx_equal(v * v.adjoint() * v, v));
  // v* x is the positive part, hence self-adjoint.
  Matrix p = v.adjoint() * x;
  CHECK(approx_equal(p, p.adjoint(), 1e-8));
  CHECK(approx_equal(v * p, x, 1e-8));
}

TEST_CASE("ideals and local regularity of a direct sum") {
  // M = M_2 (+) column block: the M_2 summand is a regular ideal, the column is not.
  std::vector<Matrix> full, sum;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) full.push_back(E(5, i, j));
  sum = full;
  sum.push_back(E(5, 2, 2));
  sum.push_back(E(5, 3, 2));
  auto m = MatrixTRO::from_basis(5, sum);
  auto n = MatrixTRO::from_basis(5, full);
  CHECK(is_ideal(n, m));
  CHECK_FALSE(is_regular(m, 16, 3).regular);
  CHECK(is_regular(n, 16, 3).regular);
  CHECK_FALSE(is_locally_regular(m, 16, 3));
  auto pi = principal_ideal(m, E(5, 0, 1));
  CHECK(pi.span().equals(n.span()));
}

TEST_CASE("commutative corners give local regularity") {
  std::mt19937_64 rng(19);
  for (int k = 0; k < 20; ++k) {
    int n = 2 + static_cast<int>(rng() % 6);
    Matrix l = random_unitary(n, rng), r = random_unitary(n, rng);
    std::vector<Matrix> basis;
    for (int i = 0; i < n; ++i)
      if (i == 0 || rng() % 2) basis.push_back(l * E(n, i, (i + k) % n) * r);
    auto m = MatrixTRO::from_basis(n, basis);
    CHECK(is_locally_regular(m, 8, static_cast<std::uint64_t>(k)));
  }
}
