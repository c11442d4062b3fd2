#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "twa/comm_model.hpp"
#include "twa/common.hpp"

namespace twa {

using CayleyTable = std::vector<std::vector<int>>;

enum class IsgFailure { BadEntry, NonAssociative, NoInverse, IdempotentsDontCommute, InverseNotUnique };

struct IsgDiagnostic {
  IsgFailure kind;
  std::vector<int> witness;  // (a,b,c), (a), (e,f) or (row, col) depending on kind
  std::string name() const;
  std::string message() const;
};

// First violated law of an inverse semigroup table, or nullopt. With
// `exhaustive`, uniqueness of inverses is also checked by direct search.
std::optional<IsgDiagnostic> diagnose_inverse_semigroup(const CayleyTable& table, bool exhaustive = false,
                                                        int threads = 1);

class InverseSemigroup {
 public:
  // Throws Error with the diagnostic name as code when the table is not an
  // inverse semigroup.
  static InverseSemigroup from_table(CayleyTable table, std::vector<std::string> labels = {},
                                     bool exhaustive = false, int threads = 1);

  int size() const { return static_cast<int>(table_.size()); }
  int mul(int a, int b) const { return table_[a][b]; }
  int mul(int a, int b, int c) const { return table_[table_[a][b]][c]; }
  int star(int a) const { return inv_[a]; }
  bool is_idempotent(int a) const { return table_[a][a] == a; }
  const std::vector<int>& idempotents() const { return idem_; }
  // Natural order: a <= b iff a = b a* a.
  bool leq(int a, int b) const { return a == mul(b, inv_[a], a); }
  // s*s and ss*.
  int source(int s) const { return table_[inv_[s]][s]; }
  int range(int s) const { return table_[s][inv_[s]]; }

  const CayleyTable& table() const { return table_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(int a) const { return labels_[a]; }
  // Throws InputError for unknown labels.
  int index_of(std::string_view label) const;

 private:
  CayleyTable table_;
  std::vector<int> inv_;
  std::vector<int> idem_;
  std::vector<std::string> labels_;
};

bool natural_leq(const InverseSemigroup& s, int a, int b);

// Inverse semigroup of partial injections, with the maps kept alongside.
// Products follow composition order: (a*b) applies b first.
struct PartialMapSemigroup {
  std::shared_ptr<const InverseSemigroup> semigroup;
  std::vector<PartialBijection> maps;
};

// All partial injections on k points (1 <= k <= 4), ordered by rank then
// lexicographically. Throws TooLarge for k outside that range.
PartialMapSemigroup symmetric_inverse_monoid_maps(int k);
InverseSemigroup symmetric_inverse_monoid(int k);
// Closure of the given maps under composition and inversion.
PartialMapSemigroup generated_partial_maps(const std::vector<PartialBijection>& gens);
std::string partial_map_label(const PartialBijection& p);

// s, s*, s*s, ss*, 0 with s^2 = 0.
InverseSemigroup five_element_semigroup();
InverseSemigroup cyclic_group(int n);

struct IsgHomomorphism {
  std::shared_ptr<const InverseSemigroup> source;
  std::shared_ptr<const InverseSemigroup> target;
  std::vector<int> map;
};

// First pair (a,b) breaking multiplicativity, or nullopt.
std::optional<std::array<int, 2>> homomorphism_failure(const IsgHomomorphism& phi);
bool is_surjective(const IsgHomomorphism& phi);
bool is_essentially_injective(const IsgHomomorphism& phi);

}  // namespace twa
