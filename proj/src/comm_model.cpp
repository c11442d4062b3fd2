#include "twa/comm_model.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace twa {

CircleScalar::CircleScalar(std::int64_t num, std::int64_t den) {
  if (den == 0) throw InputError("circle scalar with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  num %= den;
  if (num < 0) num += den;
  std::int64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

CircleScalar CircleScalar::parse(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  auto to_int = [&](std::string_view s) -> std::int64_t {
    s = trim(s);
    if (s.empty()) throw InputError("empty angle component in '" + std::string(text) + "'");
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
      v = std::stoll(std::string(s), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size()) throw InputError("bad angle '" + std::string(text) + "'");
    return v;
  };
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return CircleScalar(to_int(text), 1);
  return CircleScalar(to_int(text.substr(0, slash)), to_int(text.substr(slash + 1)));
}

std::string CircleScalar::str() const {
  if (num_ == 0) return "0";
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Complex CircleScalar::value() const {
  // Exact values at quarter turns keep products of real and imaginary units clean.
  if (den_ == 1) return {1.0, 0.0};
  if (den_ == 2) return {-1.0, 0.0};
  if (den_ == 4) return num_ == 1 ? Complex{0.0, 1.0} : Complex{0.0, -1.0};
  double a = 2.0 * std::numbers::pi * static_cast<double>(num_) / static_cast<double>(den_);
  return {std::cos(a), std::sin(a)};
}

CircleScalar CircleScalar::operator*(const CircleScalar& o) const {
  std::int64_t l = std::lcm(den_, o.den_);
  return CircleScalar(num_ * (l / den_) + o.num_ * (l / o.den_), l);
}

CircleScalar CircleScalar::pow(std::int64_t k) const {
  std::int64_t m = k % den_;
  return CircleScalar(num_ * m, den_);
}

PartialBijection PartialBijection::identity_on(int n, const PointSet& u) {
  PartialBijection p(n);
  for (int x : u) {
    if (x < 0 || x >= n) throw InputError("point out of range in identity_on");
    p.fwd_[x] = x;
    p.bwd_[x] = x;
  }
  return p;
}

PartialBijection PartialBijection::from_pairs(int n, const std::vector<std::pair<int, int>>& pairs) {
  PartialBijection p(n);
  for (auto [x, y] : pairs) {
    if (x < 0 || x >= n || y < 0 || y >= n) throw InputError("partial bijection point out of range");
    if (p.fwd_[x] != -1 && p.fwd_[x] != y) throw InputError("partial map assigns two images to one point");
    if (p.bwd_[y] != -1 && p.bwd_[y] != x) throw InputError("partial map is not injective");
    p.fwd_[x] = y;
    p.bwd_[y] = x;
  }
  return p;
}

std::optional<int> PartialBijection::apply(int x) const {
  if (x < 0 || x >= universe() || fwd_[x] < 0) return std::nullopt;
  return fwd_[x];
}

std::optional<int> PartialBijection::preimage(int y) const {
  if (y < 0 || y >= universe() || bwd_[y] < 0) return std::nullopt;
  return bwd_[y];
}

PointSet PartialBijection::domain() const {
  PointSet d;
  for (int x = 0; x < universe(); ++x)
    if (fwd_[x] >= 0) d.push_back(x);
  return d;
}

PointSet PartialBijection::range() const {
  PointSet r;
  for (int y = 0; y < universe(); ++y)
    if (bwd_[y] >= 0) r.push_back(y);
  return r;
}

bool PartialBijection::empty() const {
  return std::all_of(fwd_.begin(), fwd_.end(), [](int y) { return y < 0; });
}

PartialBijection PartialBijection::inverse() const {
  PartialBijection p;
  p.fwd_ = bwd_;
  p.bwd_ = fwd_;
  return p;
}

PartialBijection PartialBijection::restrict_to(const PointSet& u) const {
  PartialBijection p(universe());
  for (int x : u) {
    if (auto y = apply(x)) {
      p.fwd_[x] = *y;
      p.bwd_[*y] = x;
    }
  }
  return p;
}

PointSet PartialBijection::image(const PointSet& u) const {
  std::vector<int> out;
  for (int x : u)
    if (auto y = apply(x)) out.push_back(*y);
  return make_point_set(std::move(out));
}

PartialBijection compose(const PartialBijection& g, const PartialBijection& f) {
  if (g.universe() != f.universe()) throw InputError("composing partial bijections on different sets");
  std::vector<std::pair<int, int>> pairs;
  for (int x = 0; x < f.universe(); ++x) {
    if (auto y = f.apply(x))
      if (auto z = g.apply(*y)) pairs.emplace_back(x, *z);
  }
  return PartialBijection::from_pairs(f.universe(), pairs);
}

bool union_compatible(const PartialBijection& f, const PartialBijection& g) {
  if (f.universe() != g.universe()) return false;
  for (int x = 0; x < f.universe(); ++x) {
    auto a = f.apply(x), b = g.apply(x);
    if (a && b && *a != *b) return false;
    auto c = f.preimage(x), d = g.preimage(x);
    if (c && d && *c != *d) return false;
  }
  return true;
}

template <class V>
FunctionOn<V>::FunctionOn(PointSet carrier, std::vector<V> values)
    : carrier_(std::move(carrier)), values_(std::move(values)) {
  if (carrier_.size() != values_.size()) throw Error("CarrierMismatch", "value count differs from carrier size");
  if (!std::is_sorted(carrier_.begin(), carrier_.end()) ||
      std::adjacent_find(carrier_.begin(), carrier_.end()) != carrier_.end())
    throw Error("CarrierMismatch", "carrier must be sorted and duplicate-free");
}

template <class V>
std::optional<V> FunctionOn<V>::at(int x) const {
  int p = position_of(carrier_, x);
  if (p < 0) return std::nullopt;
  return values_[p];
}

template <class V>
const V& FunctionOn<V>::operator()(int x) const {
  int p = position_of(carrier_, x);
  if (p < 0) throw Error("CarrierMismatch", "point " + std::to_string(x) + " outside carrier");
  return values_[p];
}

template <class V>
V& FunctionOn<V>::operator()(int x) {
  int p = position_of(carrier_, x);
  if (p < 0) throw Error("CarrierMismatch", "point " + std::to_string(x) + " outside carrier");
  return values_[p];
}

template <class V>
FunctionOn<V> multiply(const FunctionOn<V>& f, const FunctionOn<V>& g) {
  PointSet c = intersect(f.carrier(), g.carrier());
  std::vector<V> vals;
  vals.reserve(c.size());
  for (int x : c) vals.push_back(f(x) * g(x));
  return FunctionOn<V>(std::move(c), std::move(vals));
}

template <class V>
FunctionOn<V> conjugate(const FunctionOn<V>& f) {
  using std::conj;
  std::vector<V> vals;
  vals.reserve(f.size());
  for (const V& v : f.values()) vals.push_back(conj(v));
  return FunctionOn<V>(f.carrier(), std::move(vals));
}

template <class V>
FunctionOn<V> pullback(const PartialBijection& theta, const FunctionOn<V>& f) {
  std::vector<std::pair<int, V>> pts;
  for (int y : f.carrier())
    if (auto x = theta.preimage(y)) pts.emplace_back(*x, f(y));
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  PointSet c;
  std::vector<V> vals;
  for (auto& [x, v] : pts) {
    c.push_back(x);
    vals.push_back(v);
  }
  return FunctionOn<V>(std::move(c), std::move(vals));
}

template <class V>
FunctionOn<V> restrict_to(const FunctionOn<V>& f, const PointSet& u) {
  PointSet c = intersect(f.carrier(), u);
  std::vector<V> vals;
  for (int x : c) vals.push_back(f(x));
  return FunctionOn<V>(std::move(c), std::move(vals));
}

template class FunctionOn<Complex>;
template class FunctionOn<CircleScalar>;
template CFunction multiply(const CFunction&, const CFunction&);
template CircleFunction multiply(const CircleFunction&, const CircleFunction&);
template CFunction conjugate(const CFunction&);
template CircleFunction conjugate(const CircleFunction&);
template CFunction pullback(const PartialBijection&, const CFunction&);
template CircleFunction pullback(const PartialBijection&, const CircleFunction&);
template CFunction restrict_to(const CFunction&, const PointSet&);
template CircleFunction restrict_to(const CircleFunction&, const PointSet&);

CFunction scale(const CFunction& f, const CircleScalar& z) {
  std::vector<Complex> vals;
  for (const Complex& v : f.values()) vals.push_back(v * z.value());
  return CFunction(f.carrier(), std::move(vals));
}

CircleFunction scale(const CircleFunction& f, const CircleScalar& z) {
  std::vector<CircleScalar> vals;
  for (const CircleScalar& v : f.values()) vals.push_back(v * z);
  return CircleFunction(f.carrier(), std::move(vals));
}

CFunction add(const CFunction& f, const CFunction& g) {
  if (f.carrier() != g.carrier()) throw Error("CarrierMismatch", "add requires equal carriers");
  std::vector<Complex> vals(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) vals[i] = f.values()[i] + g.values()[i];
  return CFunction(f.carrier(), std::move(vals));
}

CFunction to_complex(const CircleFunction& f) {
  std::vector<Complex> vals;
  for (const CircleScalar& v : f.values()) vals.push_back(v.value());
  return CFunction(f.carrier(), std::move(vals));
}

bool approx_equal(const CFunction& f, const CFunction& g, double eps) {
  if (f.carrier() != g.carrier()) return false;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (std::abs(f.values()[i] - g.values()[i]) > eps) return false;
  return true;
}

bool is_identically_one(const CircleFunction& f) {
  return std::all_of(f.values().begin(), f.values().end(), [](const CircleScalar& z) { return z.is_one(); });
}

}  // namespace twa
