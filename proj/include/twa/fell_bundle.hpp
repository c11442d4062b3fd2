#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "twa/comm_model.hpp"
#include "twa/common.hpp"
#include "twa/inverse_semigroup.hpp"
#include "twa/twisted_action.hpp"

namespace twa {

// A circle multiple of one carrier point mass.
struct PointTerm {
  int index;
  CircleScalar coeff;
};

// Operations of a monomial Fell bundle on point masses. Each fiber A_s is
// spanned by point masses over a finite carrier; products, adjoints and
// inclusions send point masses to circle multiples of point masses (or 0).
class BundleRealization {
 public:
  virtual ~BundleRealization() = default;
  virtual std::string_view tag() const = 0;
  virtual const InverseSemigroup& semigroup() const = 0;
  virtual std::shared_ptr<const InverseSemigroup> semigroup_ptr() const = 0;
  // The base space: idempotent fibers are carried by subsets of these points.
  virtual int num_points() const = 0;
  virtual std::string point_label(int x) const = 0;
  virtual int carrier_size(int s) const = 0;
  // Base point over which carrier point p of A_s sits (range side).
  virtual int base_point(int s, int p) const = 0;
  virtual std::string carrier_label(int s, int p) const = 0;
  virtual std::optional<PointTerm> product(int s, int p, int t, int q) const = 0;
  virtual PointTerm adjoint(int s, int p) const = 0;
  // j_{t,s} for s <= t.
  virtual PointTerm include(int t, int s, int p) const = 0;
};

struct FiberElement {
  int fiber = 0;
  std::vector<Complex> coeffs;
};

// Exact sparse element whose coefficients are circle scalars.
struct MonomialElement {
  int fiber = 0;
  std::map<int, CircleScalar> terms;
  friend bool operator==(const MonomialElement&, const MonomialElement&) = default;
};

class SemiAbelianBundle {
 public:
  explicit SemiAbelianBundle(std::shared_ptr<const BundleRealization> impl);

  const BundleRealization& realization() const { return *impl_; }
  std::shared_ptr<const BundleRealization> realization_ptr() const { return impl_; }
  std::string_view tag() const { return impl_->tag(); }
  const InverseSemigroup& S() const { return impl_->semigroup(); }
  int size() const { return S().size(); }
  int carrier_size(int s) const { return impl_->carrier_size(s); }
  int num_points() const { return impl_->num_points(); }

  FiberElement zero(int s) const;
  FiberElement point_mass(int s, int p, Complex c = 1.0) const;
  FiberElement multiply(const FiberElement& a, const FiberElement& b) const;
  FiberElement adjoint(const FiberElement& a) const;
  FiberElement include(int t, const FiberElement& a) const;

  // Exact versions; throw when two terms land on the same carrier point.
  MonomialElement multiply(const MonomialElement& a, const MonomialElement& b) const;
  MonomialElement adjoint(const MonomialElement& a) const;
  MonomialElement include(int t, const MonomialElement& a) const;
  FiberElement to_fiber(const MonomialElement& a) const;

  // delta_p delta_p = kappa delta_p for p in an idempotent fiber; the unit of
  // A_e has coefficient conj(kappa) at p.
  CircleScalar unit_coefficient(int e, int p) const;
  MonomialElement unit(int e) const;
  // Source point of carrier point p of A_s, read off from delta_p* delta_p.
  int source_point(int s, int p) const;

 private:
  std::shared_ptr<const BundleRealization> impl_;
};

double sup_norm(const FiberElement& a);

// Operations of the bundle attached to a twisted action: A_s = functions on
// U(s) times delta_s.
class ActionRealization final : public BundleRealization {
 public:
  explicit ActionRealization(std::shared_ptr<const TwistedAction> action);
  std::string_view tag() const override { return "action"; }
  const InverseSemigroup& semigroup() const override { return action_->S(); }
  std::shared_ptr<const InverseSemigroup> semigroup_ptr() const override { return action_->semigroup; }
  int num_points() const override { return action_->num_points(); }
  std::string point_label(int x) const override { return action_->point_labels[x]; }
  int carrier_size(int s) const override { return static_cast<int>(action_->U(s).size()); }
  int base_point(int s, int p) const override { return action_->U(s)[p]; }
  std::string carrier_label(int s, int p) const override;
  std::optional<PointTerm> product(int s, int p, int t, int q) const override;
  PointTerm adjoint(int s, int p) const override;
  PointTerm include(int t, int s, int p) const override;
  const TwistedAction& action() const { return *action_; }

 private:
  int index_in(int s, int y) const;
  std::shared_ptr<const TwistedAction> action_;
};

SemiAbelianBundle build_bundle(std::shared_ptr<const TwistedAction> a);
SemiAbelianBundle build_bundle(const TwistedAction& a);

struct BundleVerifyOptions {
  int random_samples = 4;
  std::uint64_t seed = 0;
  double eps = kDefaultTolerance;
  // Cap on the (s,t,u) triples checked exhaustively for associativity; the
  // rest are sampled.
  std::int64_t max_triples = 2'000'000;
};

std::vector<Violation> verify_fell_bundle(const SemiAbelianBundle& b, const BundleVerifyOptions& opt = {});

// Unitary multiplier family: u_s as a unit-modulus element on all of C_s.
using UnitFamily = std::vector<MonomialElement>;

struct BundleClass {
  bool saturated = false;
  bool semi_abelian = false;
  std::vector<bool> regular;  // per fiber
  std::optional<UnitFamily> witness;
  std::vector<std::string> notes;
};

BundleClass classify_bundle(const SemiAbelianBundle& b);
// Coordinate 1 on every carrier point, and the unit on idempotent fibers.
UnitFamily canonical_unit_family(const SemiAbelianBundle& b);
// chi_s times the canonical family, for bundles built from an action.
UnitFamily gauged_family(const SemiAbelianBundle& b, const Gauge& chi);
// theta_s from u_s (.) u_s*, omega(s,t) from u_s u_t u_st*.
TwistedAction extract_action(const SemiAbelianBundle& b, const UnitFamily& u);

struct RoundTrip {
  bool exact = false;
  std::vector<std::string> diff;
};
RoundTrip roundtrip_check(const TwistedAction& a);

}  // namespace twa
