#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "twa/common.hpp"
#include "twa/fell_bundle.hpp"
#include "twa/inverse_semigroup.hpp"
#include "twa/rep_algebra.hpp"
#include "twa/tro.hpp"

namespace twa {

// phi: T -> S and, per fiber of B, the image of each carrier point mass as a
// circle multiple of a point mass of A_{phi(t)}.
struct BundleMorphism {
  IsgHomomorphism phi;
  std::vector<std::vector<PointTerm>> psi;
};

BundleMorphism identity_morphism(const SemiAbelianBundle& a);

// Multiplicativity, *-preservation and the inclusion square on point masses.
std::vector<Violation> verify_morphism(const BundleMorphism& m, const SemiAbelianBundle& b, const SemiAbelianBundle& a);
// verify_morphism plus surjectivity, essential injectivity, fiberwise
// injectivity, the span condition and the ideal property of idempotent images.
std::vector<Violation> verify_refinement(const BundleMorphism& m, const SemiAbelianBundle& b,
                                         const SemiAbelianBundle& a);

// Fibers (s, V) for V a subset of the carrier of A_s; B_(s,V) is spanned by
// the point masses in V.
class SubCarrierRealization final : public BundleRealization {
 public:
  struct Element {
    int s;
    std::vector<int> points;  // sorted carrier indices of A_s
  };

  SubCarrierRealization(std::shared_ptr<const BundleRealization> base, std::shared_ptr<const InverseSemigroup> t,
                        std::vector<Element> elements);
  std::string_view tag() const override { return "subcarrier"; }
  const InverseSemigroup& semigroup() const override { return *t_; }
  std::shared_ptr<const InverseSemigroup> semigroup_ptr() const override { return t_; }
  int num_points() const override { return base_->num_points(); }
  std::string point_label(int x) const override { return base_->point_label(x); }
  int carrier_size(int t) const override { return static_cast<int>(elements_[t].points.size()); }
  int base_point(int t, int p) const override { return base_->base_point(elements_[t].s, elements_[t].points[p]); }
  std::string carrier_label(int t, int p) const override {
    return base_->carrier_label(elements_[t].s, elements_[t].points[p]);
  }
  std::optional<PointTerm> product(int s, int p, int t, int q) const override;
  PointTerm adjoint(int s, int p) const override;
  PointTerm include(int t, int s, int p) const override;

  const Element& element(int t) const { return elements_[t]; }

 private:
  int index_in(int t, int point) const;
  std::shared_ptr<const BundleRealization> base_;
  std::shared_ptr<const InverseSemigroup> t_;
  std::vector<Element> elements_;
};

struct Refinement {
  SemiAbelianBundle bundle;
  BundleMorphism morphism;
  // Regularity witness of the refined bundle, when every fiber is regular.
  std::optional<UnitFamily> witness;
};

// T = {(s, V) : V a subset of the allowed carrier points of A_s}. The allowed
// points must be closed under products and adjoints. Throws TooLarge past
// max_elements.
Refinement sub_carrier_refinement(const SemiAbelianBundle& a, const std::vector<std::vector<bool>>& allowed,
                                  int max_elements = 1024);
Refinement saturated_refinement(const SemiAbelianBundle& a, int max_elements = 1024);

// Germ groupoid of a monomial bundle: point masses (s,p) identified along
// inclusions. delta_(s,p) = scale * delta_rep in the quotient.
struct BundleGerms {
  std::vector<int> offset;         // node id of (s,p) = offset[s] + p
  std::vector<int> class_of;       // per node
  std::vector<CircleScalar> scale; // per node
  std::vector<int> rep;            // per class, node id
  std::vector<std::pair<int, int>> rep_point;  // per class, (s, p)
  std::vector<int> range, source;  // per class, base points
  std::vector<int> compose;        // k * size + l -> class or -1
  std::vector<CircleScalar> cocycle;
  std::vector<int> inverse;
  std::vector<CircleScalar> involution;
  std::vector<std::string> labels;
  std::vector<Violation> inconsistencies;

  int size() const { return static_cast<int>(rep.size()); }
  int node(int s, int p) const { return offset[s] + p; }
};

BundleGerms bundle_germs(const SemiAbelianBundle& b);
StarAlgebra bundle_germ_algebra(const BundleGerms& g);

struct GermMap {
  bool isomorphic = false;
  int refined_count = 0;
  int target_count = 0;
  std::vector<int> map;              // germ of B -> germ of A
  std::vector<CircleScalar> scale;   // Psi(delta_K) = scale * delta_{map K}
  std::string counterexample;
};
GermMap germ_preservation_check(const BundleMorphism& m, const SemiAbelianBundle& b, const SemiAbelianBundle& a);

struct AlgebraPreservation {
  int refined_dim = 0;
  int target_dim = 0;
  std::vector<int> refined_blocks, target_blocks;
  std::vector<Violation> transport;
  bool ok() const {
    return refined_dim == target_dim && refined_blocks == target_blocks && transport.empty();
  }
};
AlgebraPreservation algebra_preservation_check(const BundleMorphism& m, const SemiAbelianBundle& b,
                                               const SemiAbelianBundle& a, std::uint64_t seed = 0,
                                               double eps = kDefaultTolerance);

// Left regular representation of the germ algebra, applied to point masses.
BundleRep concrete_representation(const SemiAbelianBundle& b);
// Span of the images of the point masses of A_s.
MatrixTRO fiber_tro(const BundleRep& rep, int s, double eps = kDefaultTolerance);

}  // namespace twa
