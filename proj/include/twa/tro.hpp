#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "twa/common.hpp"

namespace twa {

using Matrix = Eigen::MatrixXcd;

// Linear span of n x n complex matrices, kept as a Frobenius-orthonormal basis.
class Span {
 public:
  Span() = default;
  // Rank is decided relative to the largest singular value of the stacked
  // generators.
  static Span of(int dim, const std::vector<Matrix>& gens, double eps = kDefaultTolerance);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(basis_.size()); }
  const std::vector<Matrix>& basis() const { return basis_; }
  double residual(const Matrix& m) const;
  bool contains(const Matrix& m, double eps = kDefaultTolerance) const;
  bool contains(const Span& other, double eps = kDefaultTolerance) const;
  bool equals(const Span& other, double eps = kDefaultTolerance) const;

 private:
  int dim_ = 0;
  std::vector<Matrix> basis_;
  Matrix columns_;  // n^2 x size, orthonormal
};

enum class ProductMode { AB, ABstar, AstarB };

// Span of all pairwise products a b, a b*, or a* b. Throws DimensionMismatch.
Span span_product(const Span& a, const Span& b, ProductMode mode, double eps = kDefaultTolerance);
// Span of {x m : x in a} or {m x : x in a} for a single matrix.
Span left_multiply(const Span& a, const Matrix& m, double eps = kDefaultTolerance);
Span right_multiply(const Matrix& m, const Span& a, double eps = kDefaultTolerance);

// Subspace closed under x y* z. Throws NotATRO.
class MatrixTRO {
 public:
  static MatrixTRO from_basis(int dim, const std::vector<Matrix>& gens, double eps = kDefaultTolerance);
  static MatrixTRO from_span(Span s, double eps = kDefaultTolerance);
  static bool is_tro(const Span& s, double eps = kDefaultTolerance);

  int dim() const { return span_.dim(); }
  const Span& span() const { return span_; }
  const Span& left_algebra() const { return left_; }    // M M*
  const Span& right_algebra() const { return right_; }  // M* M

 private:
  Span span_, left_, right_;
};

// Orthogonal projection onto the joint range of the matrices in `a`; for a
// *-algebra this is its unit.
Matrix range_projection(const Span& a, double eps = kDefaultTolerance);

struct AssociationReport {
  bool a = false;  // M* u = M* M
  bool b = false;  // u M* = M M*
  bool c = false;  // u u* M = M
  bool d = false;  // M u* u = M
  bool strict_right = false;  // u* u = 1_{M*M}
  bool strict_left = false;   // u u* = 1_{MM*}
  bool partial_isometry = false;
  bool associated() const { return a && b && c && d; }
  bool strict() const { return strict_left && strict_right; }
  // The implications (a)&(b) => (c),(d); (a)&(c) => (b); (b)&(d) => (c).
  bool implications_hold() const;
};

AssociationReport check_association(const Matrix& u, const MatrixTRO& m, double eps = kDefaultTolerance);

// Partial isometry of the polar decomposition m = v |m|.
Matrix polar_isometry(const Matrix& m, double eps = kDefaultTolerance);
// u p with p the unit of M*M; turns an associated partial isometry into a
// strictly associated one.
Matrix strict_correction(const Matrix& u, const MatrixTRO& m, double eps = kDefaultTolerance);
// a -> u* a u maps M M* onto M* M as a *-isomorphism.
bool verify_corner_isomorphism(const Matrix& u, const MatrixTRO& m, double eps = kDefaultTolerance);

struct RegularityTrial {
  int left_rank;   // dim(m M*M)
  int right_rank;  // dim(M M* m)
};

struct RegularityResult {
  bool regular = false;
  std::optional<Matrix> witness;  // strictly associated partial isometry
  std::vector<RegularityTrial> log;
  // Set when dim M*M or dim MM* is below dim M, which rules out every trial.
  std::optional<std::string> obstruction;
};

RegularityResult is_regular(const MatrixTRO& m, int trials, std::uint64_t seed, double eps = kDefaultTolerance);

// N is an ideal of M when N M* M and M M* N lie in N. Throws NotSubspace
// unless N is contained in M.
bool is_ideal(const MatrixTRO& n, const MatrixTRO& m, double eps = kDefaultTolerance);
// M M* x M* M.
MatrixTRO principal_ideal(const MatrixTRO& m, const Matrix& x, double eps = kDefaultTolerance);
bool is_locally_regular(const MatrixTRO& m, int trials, std::uint64_t seed, double eps = kDefaultTolerance);

Matrix matrix_unit(int n, int i, int j);
bool approx_equal(const Matrix& a, const Matrix& b, double eps = kDefaultTolerance);

}  // namespace twa
