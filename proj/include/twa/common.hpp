#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace twa {

inline constexpr double kDefaultTolerance = 1e-9;

class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

// Raised for malformed user input (files, flags); the CLI maps it to exit code 2.
class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error("InputError", what) {}
};

// One failed instance of a law. `rule` names the law, `where` locates the
// instance (elements, fibers, points), `detail` carries the offending values.
struct Violation {
  std::string rule;
  std::string where;
  std::string detail;
};

inline bool contains_rule(const std::vector<Violation>& vs, const std::string& rule) {
  return std::any_of(vs.begin(), vs.end(), [&](const Violation& v) { return v.rule == rule; });
}

// Sorted, duplicate-free list of point indices.
using PointSet = std::vector<int>;

PointSet make_point_set(std::vector<int> pts);
PointSet intersect(const PointSet& a, const PointSet& b);
PointSet unite(const PointSet& a, const PointSet& b);
bool is_subset(const PointSet& a, const PointSet& b);
bool has_point(const PointSet& a, int x);
// Position of x inside a, or -1.
int position_of(const PointSet& a, int x);

// Run fn(i) for i in [0, n) on up to `threads` workers. fn must not share
// mutable state across indices.
template <class Fn>
void parallel_for(int n, int threads, Fn&& fn);

}  // namespace twa

#include "twa/detail/parallel.hpp"
