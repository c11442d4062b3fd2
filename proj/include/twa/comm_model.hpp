#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "twa/common.hpp"

namespace twa {

using Complex = std::complex<double>;

// exp(2*pi*i * num/den), stored as a reduced angle in [0, 1).
class CircleScalar {
 public:
  constexpr CircleScalar() = default;
  CircleScalar(std::int64_t num, std::int64_t den);

  static CircleScalar one() { return {}; }
  // Accepts "p/q", "p" (integer turns) and ignores surrounding spaces.
  static CircleScalar parse(std::string_view text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_one() const { return num_ == 0; }
  std::string str() const;
  Complex value() const;

  CircleScalar operator*(const CircleScalar& o) const;
  CircleScalar& operator*=(const CircleScalar& o) { return *this = *this * o; }
  CircleScalar conj() const { return CircleScalar(-num_, den_); }
  CircleScalar pow(std::int64_t k) const;

  friend bool operator==(const CircleScalar&, const CircleScalar&) = default;
  friend auto operator<=>(const CircleScalar&, const CircleScalar&) = default;

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline CircleScalar conj(const CircleScalar& z) { return z.conj(); }

// Injective partial map on the points {0..n-1}.
class PartialBijection {
 public:
  PartialBijection() = default;
  explicit PartialBijection(int n) : fwd_(n, -1), bwd_(n, -1) {}

  static PartialBijection identity_on(int n, const PointSet& u);
  // Throws InputError when the pairs are not injective or out of range.
  static PartialBijection from_pairs(int n, const std::vector<std::pair<int, int>>& pairs);

  int universe() const { return static_cast<int>(fwd_.size()); }
  std::optional<int> apply(int x) const;
  std::optional<int> preimage(int y) const;
  PointSet domain() const;
  PointSet range() const;
  bool empty() const;

  PartialBijection inverse() const;
  PartialBijection restrict_to(const PointSet& u) const;
  // Pointwise image of a set; points outside the domain are dropped.
  PointSet image(const PointSet& u) const;

  // The raw forward table, -1 meaning undefined.
  const std::vector<int>& table() const { return fwd_; }

  friend bool operator==(const PartialBijection&, const PartialBijection&) = default;

 private:
  std::vector<int> fwd_;
  std::vector<int> bwd_;
};

// g∘f: apply f first.
PartialBijection compose(const PartialBijection& g, const PartialBijection& f);
// f and g agree where both are defined and their union is still injective.
bool union_compatible(const PartialBijection& f, const PartialBijection& g);

// A function on a finite carrier. Values outside the carrier are zero; values
// on the carrier may be zero too (the carrier is not the exact support).
template <class V>
class FunctionOn {
 public:
  FunctionOn() = default;
  FunctionOn(PointSet carrier, std::vector<V> values);
  static FunctionOn constant(const PointSet& carrier, const V& v) {
    return FunctionOn(carrier, std::vector<V>(carrier.size(), v));
  }

  const PointSet& carrier() const { return carrier_; }
  const std::vector<V>& values() const { return values_; }
  std::size_t size() const { return carrier_.size(); }
  std::optional<V> at(int x) const;
  // Value at x; throws CarrierMismatch when x is outside the carrier.
  const V& operator()(int x) const;
  V& operator()(int x);

  friend bool operator==(const FunctionOn&, const FunctionOn&) = default;

 private:
  PointSet carrier_;
  std::vector<V> values_;
};

using CFunction = FunctionOn<Complex>;
using CircleFunction = FunctionOn<CircleScalar>;

// Pointwise product on the intersection of carriers.
template <class V>
FunctionOn<V> multiply(const FunctionOn<V>& f, const FunctionOn<V>& g);
template <class V>
FunctionOn<V> conjugate(const FunctionOn<V>& f);
// f∘theta, carried by theta^{-1}(carrier(f)).
template <class V>
FunctionOn<V> pullback(const PartialBijection& theta, const FunctionOn<V>& f);
template <class V>
FunctionOn<V> restrict_to(const FunctionOn<V>& f, const PointSet& u);

CFunction scale(const CFunction& f, const CircleScalar& z);
CircleFunction scale(const CircleFunction& f, const CircleScalar& z);
// Requires equal carriers.
CFunction add(const CFunction& f, const CFunction& g);
CFunction to_complex(const CircleFunction& f);
bool approx_equal(const CFunction& f, const CFunction& g, double eps = kDefaultTolerance);
bool is_identically_one(const CircleFunction& f);

}  // namespace twa
