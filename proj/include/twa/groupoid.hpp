#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "twa/comm_model.hpp"
#include "twa/common.hpp"
#include "twa/fell_bundle.hpp"
#include "twa/inverse_semigroup.hpp"
#include "twa/twisted_action.hpp"

namespace twa {

// Finite discrete groupoid. An arrow a goes from src(a) to rng(a); the
// product a·b is defined when src(a) == rng(b).
class FiniteGroupoid {
 public:
  struct Arrow {
    std::string label;
    int src = 0;
    int rng = 0;
  };

  // `comp` lists every composable pair as (a, b, a·b). Throws Error with codes
  // BadComposition, NonAssociative, BadUnit, BadInverse.
  static FiniteGroupoid from_data(std::vector<std::string> objects, std::vector<Arrow> arrows,
                                  const std::vector<std::array<int, 3>>& comp);

  int num_objects() const { return static_cast<int>(objects_.size()); }
  int num_arrows() const { return static_cast<int>(arrows_.size()); }
  const std::string& object_label(int x) const { return objects_[x]; }
  const std::vector<std::string>& object_labels() const { return objects_; }
  const std::string& arrow_label(int a) const { return arrows_[a].label; }
  const Arrow& arrow(int a) const { return arrows_[a]; }
  int src(int a) const { return arrows_[a].src; }
  int rng(int a) const { return arrows_[a].rng; }
  bool composable(int a, int b) const { return src(a) == rng(b); }
  // a·b, or -1 when not composable.
  int mul(int a, int b) const { return comp_[static_cast<std::size_t>(a) * num_arrows() + b]; }
  int inv(int a) const { return inv_[a]; }
  int unit(int x) const { return unit_[x]; }
  bool is_unit(int a) const { return unit_[src(a)] == a; }
  int index_of(const std::string& label) const;

 private:
  std::vector<std::string> objects_;
  std::vector<Arrow> arrows_;
  std::vector<int> comp_;
  std::vector<int> inv_, unit_;
};

// Pair groupoid on n points; arrow "(i,j)" goes from j to i.
FiniteGroupoid pair_groupoid(int n);
// Cyclic group of order n as a one-object groupoid, labelled like cyclic_group.
FiniteGroupoid group_groupoid(int n);
// Transitive groupoid on n objects with isotropy Z/k: arrows (i,j,a) from j
// to i, composed by adding a.
FiniteGroupoid transitive_groupoid(int n, int k);
FiniteGroupoid disjoint_union(const FiniteGroupoid& g, const FiniteGroupoid& h);

// Normalized 2-cocycle, stored densely; entries at non-composable pairs are
// ignored.
struct TwoCocycle {
  int arrows = 0;
  std::vector<CircleScalar> values;

  static TwoCocycle trivial(const FiniteGroupoid& g);
  const CircleScalar& at(int a, int b) const { return values[static_cast<std::size_t>(a) * arrows + b]; }
  CircleScalar& at(int a, int b) { return values[static_cast<std::size_t>(a) * arrows + b]; }
  friend bool operator==(const TwoCocycle&, const TwoCocycle&) = default;
};

std::vector<Violation> verify_cocycle(const FiniteGroupoid& g, const TwoCocycle& tau);
// tau'(a,b) = c(a) c(b) conj(c(ab)) tau(a,b); c must be 1 on units.
TwoCocycle coboundary_transform(const FiniteGroupoid& g, const TwoCocycle& tau, const std::vector<CircleScalar>& c);
// All normalized cocycles with values in the angle grid {k/den}. Throws
// TooLarge beyond `max_assignments` raw assignments.
std::vector<TwoCocycle> enumerate_normalized_cocycles(const FiniteGroupoid& g, int den,
                                                      std::int64_t max_assignments = 1 << 22);

// Element of the twist: lambda times the canonical coordinate at `arrow`.
struct TwistElement {
  CircleScalar lambda;
  int arrow = 0;
  friend bool operator==(const TwistElement&, const TwistElement&) = default;
};
// Throws NotComposable.
TwistElement twist_multiply(const FiniteGroupoid& g, const TwoCocycle& tau, const TwistElement& a,
                            const TwistElement& b);
TwistElement twist_inverse(const FiniteGroupoid& g, const TwoCocycle& tau, const TwistElement& a);

using Bisection = std::vector<int>;  // sorted arrow indices
bool is_bisection(const FiniteGroupoid& g, const Bisection& b);
std::string bisection_label(const FiniteGroupoid& g, const Bisection& b);

struct BisectionSemigroup {
  std::shared_ptr<const InverseSemigroup> semigroup;
  std::vector<Bisection> bisections;  // indexed like semigroup elements
  bool covers = false;                // union of bisections is every arrow
  bool intersection_closed = false;
  bool wide() const { return covers && intersection_closed; }
  int index_of(const Bisection& b) const;
};

// Closure of the generators under products, inverses and (optionally)
// intersections; without generators, every bisection (at most 12 arrows).
// Throws TooManyArrows, NotABisection.
BisectionSemigroup bisection_semigroup(const FiniteGroupoid& g, const std::optional<std::vector<Bisection>>& gens = {},
                                       bool close_intersections = true);

// Fibers are functions on sub-bisections C_s of s (all of s by default). With
// explicit carriers, they must be closed under products, inverses and the
// order. Throws NotWide when S misses an arrow, NotClosed for bad carriers.
class SectionRealization final : public BundleRealization {
 public:
  SectionRealization(std::shared_ptr<const FiniteGroupoid> g, TwoCocycle tau, BisectionSemigroup s,
                     std::optional<std::vector<Bisection>> carriers = {});
  std::string_view tag() const override { return "section"; }
  const InverseSemigroup& semigroup() const override { return *s_.semigroup; }
  std::shared_ptr<const InverseSemigroup> semigroup_ptr() const override { return s_.semigroup; }
  int num_points() const override { return g_->num_objects(); }
  std::string point_label(int x) const override { return g_->object_label(x); }
  int carrier_size(int s) const override { return static_cast<int>(carriers_[s].size()); }
  int base_point(int s, int p) const override { return g_->rng(carriers_[s][p]); }
  std::string carrier_label(int s, int p) const override { return g_->arrow_label(carriers_[s][p]); }
  std::optional<PointTerm> product(int s, int p, int t, int q) const override;
  PointTerm adjoint(int s, int p) const override;
  PointTerm include(int t, int s, int p) const override;

  const FiniteGroupoid& groupoid() const { return *g_; }
  const TwoCocycle& cocycle() const { return tau_; }
  const BisectionSemigroup& bisections() const { return s_; }
  const Bisection& carrier(int s) const { return carriers_[s]; }
  int arrow_at(int s, int p) const { return carriers_[s][p]; }

 private:
  int index_in(int s, int arrow) const;
  std::shared_ptr<const FiniteGroupoid> g_;
  TwoCocycle tau_;
  BisectionSemigroup s_;
  std::vector<Bisection> carriers_;
};

SemiAbelianBundle section_bundle(const FiniteGroupoid& g, const TwoCocycle& tau, const BisectionSemigroup& s,
                                 std::optional<std::vector<Bisection>> carriers = {});

// X = objects, theta_s(src a) = rng a and omega(s,t)(rng(ab)) = tau(a,b).
// Throws NotWide when the idempotent bisections miss an object.
TwistedAction action_from_cocycle(const FiniteGroupoid& g, const TwoCocycle& tau, const BisectionSemigroup& s);

struct GermIsomorphism {
  bool isomorphic = false;
  std::vector<int> germ_to_arrow;  // indexed by germ
  int germ_count = 0;
  int arrow_count = 0;
  // The germ twist equals tau under the map, exactly.
  bool twist_matches = false;
  std::string counterexample;
};

// The canonical map germ [t,x] -> the arrow of t with source x.
GermIsomorphism germ_recovers_groupoid(const FiniteGroupoid& g, const TwoCocycle& tau, const BisectionSemigroup& s);

}  // namespace twa
