#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "twa/common.hpp"
#include "twa/fell_bundle.hpp"
#include "twa/groupoid.hpp"
#include "twa/tro.hpp"
#include "twa/twisted_action.hpp"

namespace twa {

using Vector = Eigen::VectorXcd;

// Finite-dimensional *-algebra given by structure constants on a basis.
// e_i e_j = sum of (k, c) terms; e_i* = sum of (k, c) terms.
struct StarAlgebra {
  using Terms = std::vector<std::pair<int, Complex>>;

  std::vector<std::string> labels;
  std::vector<Terms> products;  // row-major over (i, j)
  std::vector<Terms> star;

  int dim() const { return static_cast<int>(labels.size()); }
  const Terms& product(int i, int j) const { return products[static_cast<std::size_t>(i) * dim() + j]; }
  Vector basis(int i) const;
  Vector multiply(const Vector& a, const Vector& b) const;
  Vector adjoint(const Vector& a) const;
  // Matrix of x -> a x.
  Matrix left_regular(const Vector& a) const;
};

// Associativity, involutivity and anti-multiplicativity on basis elements.
std::vector<Violation> verify_star_algebra(const StarAlgebra& a, double eps = kDefaultTolerance);

// delta_a delta_b = tau(a,b) delta_ab, delta_g* = conj(tau(g^-1,g)) delta_{g^-1}.
StarAlgebra convolution_algebra(const FiniteGroupoid& g, const TwoCocycle& tau);
// Basis: germs in the chosen representative coordinates.
StarAlgebra germ_algebra(const TwistedAction& a);

// Checks that e_i -> scale[i] f_{map[i]} is a *-isomorphism A -> B.
std::vector<Violation> check_basis_isomorphism(const StarAlgebra& a, const StarAlgebra& b, const std::vector<int>& map,
                                               const std::vector<Complex>& scale, double eps = kDefaultTolerance);

// Sizes of the simple summands, ascending. Throws NotSemisimpleDetected when
// an eigenvalue multiplicity of the central probe is not a square.
std::vector<int> block_decompose(const StarAlgebra& a, std::uint64_t seed = 0, double eps = kDefaultTolerance);

struct CovariantRep {
  int dim = 0;
  std::vector<Matrix> rho;  // rho(point mass at x), x in X
  std::vector<Matrix> v;    // v_s
};

// Left regular representation on the arrows of g.
CovariantRep regular_covariant_rep(const FiniteGroupoid& g, const TwoCocycle& tau, const BisectionSemigroup& s);
std::vector<Violation> verify_covariant(const CovariantRep& r, const TwistedAction& a, double eps = kDefaultTolerance);

struct BundleRep {
  int dim = 0;
  std::vector<std::vector<Matrix>> pi;  // pi[s][p]: image of the point mass p of A_s
};

std::vector<Violation> verify_representation(const BundleRep& pi, const SemiAbelianBundle& b,
                                             double eps = kDefaultTolerance);
// pi(a delta_s) = rho(a) v_s on the bundle of the action. Throws
// VerificationFailed when the input does not verify.
BundleRep to_bundle_rep(const CovariantRep& r, const TwistedAction& a, double eps = kDefaultTolerance);
// rho from idempotent fibers, v_s = pi(1_{ss*} delta_s).
CovariantRep to_covariant(const BundleRep& pi, const TwistedAction& a, double eps = kDefaultTolerance);

bool approx_equal(const CovariantRep& a, const CovariantRep& b, double eps = kDefaultTolerance);
bool approx_equal(const BundleRep& a, const BundleRep& b, double eps = kDefaultTolerance);

}  // namespace twa
