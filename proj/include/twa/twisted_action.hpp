#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "twa/comm_model.hpp"
#include "twa/common.hpp"
#include "twa/inverse_semigroup.hpp"

namespace twa {

// Twisted action of a finite inverse semigroup on functions over X = {0..n-1}.
// beta_s(a) = a∘theta_s^{-1}; omega(s,t) is a circle function on U(st).
struct TwistedAction {
  std::shared_ptr<const InverseSemigroup> semigroup;
  std::vector<std::string> point_labels;
  std::vector<PointSet> ideal;            // U(s), equal to U(ss*)
  std::vector<PartialBijection> theta;    // dom U(s*s), ran U(ss*)
  std::vector<CircleFunction> omega;      // row-major over (s, t)

  const InverseSemigroup& S() const { return *semigroup; }
  int num_points() const { return static_cast<int>(point_labels.size()); }
  int size() const { return semigroup->size(); }
  const CircleFunction& w(int s, int t) const { return omega[static_cast<std::size_t>(s) * size() + t]; }
  CircleFunction& w(int s, int t) { return omega[static_cast<std::size_t>(s) * size() + t]; }
  const PointSet& U(int s) const { return ideal[s]; }

  friend bool operator==(const TwistedAction& a, const TwistedAction& b) {
    return a.semigroup->table() == b.semigroup->table() && a.point_labels == b.point_labels &&
           a.ideal == b.ideal && a.theta == b.theta && a.omega == b.omega;
  }
};

// Untwisted action of a semigroup of partial maps on its k points; the
// point set is cut down to the union of idempotent domains when needed.
TwistedAction untwisted_action(const PartialMapSemigroup& maps);
// Every ideal is all of X, every theta the identity and omega = 1.
TwistedAction trivial_action(std::shared_ptr<const InverseSemigroup> s, int points);
// Group Z/2 on a single point with omega(g,g) = angle.
TwistedAction busby_smith_z2(CircleScalar angle = CircleScalar(1, 2));

// Field-by-field differences, empty when equal.
std::vector<std::string> diff_actions(const TwistedAction& a, const TwistedAction& b);

std::vector<Violation> structural_violations(const TwistedAction& a);

struct ActionReport {
  std::vector<Violation> structural;
  std::vector<Violation> axioms;
  bool ok() const { return structural.empty() && axioms.empty(); }
  std::vector<Violation> all() const;
};

// The four axioms in pointwise form. Axioms are skipped when the structure is
// broken, since they would only echo the structural problem.
ActionReport verify_twisted_action(const TwistedAction& a, int threads = 1);
// The derived identities; on a valid action the list is empty.
std::vector<Violation> verify_consequences(const TwistedAction& a);

struct SiebenResult {
  bool holds = true;
  std::vector<Violation> counterexamples;
};
SiebenResult check_sieben(const TwistedAction& a);

// chi[s] is a circle function on U(s).
using Gauge = std::vector<CircleFunction>;

Gauge trivial_gauge(const TwistedAction& a);
Gauge conjugate(const Gauge& chi);
// omega'(s,t)(y) = chi_s(y) chi_t(theta_s^{-1} y) conj(chi_st(y)) omega(s,t)(y).
TwistedAction gauge_transform(const TwistedAction& a, const Gauge& chi);

class GermGroupoid;

struct Siebenization {
  Gauge chi;
  TwistedAction action;
};
Siebenization siebenize(const TwistedAction& a);

// Germs [t,x], x in U(t*t), with the line coordinates of the associated
// twist expressed relative to one chosen representative per germ.
class GermGroupoid {
 public:
  struct Germ {
    int rep;  // chosen representative element
    int x;    // source point
  };

  int num_objects() const { return num_objects_; }
  int size() const { return static_cast<int>(germs_.size()); }
  const Germ& germ(int g) const { return germs_[g]; }
  int source(int g) const { return germs_[g].x; }
  int range(int g) const { return range_[g]; }
  int unit(int x) const { return unit_[x]; }
  bool is_unit(int g) const { return unit_[source(g)] == g; }
  int inverse(int g) const { return inverse_[g]; }
  // g∘h, defined when source(g) == range(h).
  std::optional<int> compose(int g, int h) const;
  // Germ of (t, x), if x lies in U(t*t).
  std::optional<int> find(int t, int x) const;
  // Scalar turning a coordinate at representative (t,x) into the chosen one.
  CircleScalar transition(int t, int x) const;
  // delta_g delta_h = cocycle(g,h) delta_{gh} in chosen coordinates.
  CircleScalar cocycle(int g, int h) const;
  // (delta_g)* = involution(g) delta_{g^-1}.
  CircleScalar involution(int g) const { return involution_[g]; }
  // Pairs of representatives whose transition depends on the witnessing
  // idempotent; empty for a valid action.
  const std::vector<Violation>& inconsistencies() const { return inconsistencies_; }

  friend GermGroupoid germ_groupoid(const TwistedAction& a);

 private:
  int num_objects_ = 0;
  int semigroup_size_ = 0;
  std::vector<Germ> germs_;
  std::vector<int> range_, inverse_, unit_;
  std::vector<int> class_of_;               // (t, x) -> germ or -1
  std::vector<CircleScalar> transition_;    // (t, x) -> scalar
  std::vector<int> compose_;                // g*size + h -> germ or -1
  std::vector<CircleScalar> cocycle_;
  std::vector<CircleScalar> involution_;
  std::vector<Violation> inconsistencies_;
};

GermGroupoid germ_groupoid(const TwistedAction& a);

// Search over omega values in the given angle grid for data that satisfies
// the first three axioms but not the fourth, keeping theta and U of `shape` fixed.
// Exhaustive when the grid is small enough, otherwise random.
struct AxiomFourSearch {
  std::int64_t candidates = 0;
  std::int64_t satisfying_first_three = 0;
  std::vector<TwistedAction> counterexamples;
  bool exhaustive = false;
};
AxiomFourSearch search_axiom_four_independence(const TwistedAction& shape, int angle_den,
                                               std::int64_t max_candidates, std::uint64_t seed);

}  // namespace twa
