#include "twa/inverse_semigroup.hpp"

#include <atomic>
#include <map>
#include <mutex>
#include <set>

namespace twa {

std::string IsgDiagnostic::name() const {
  switch (kind) {
    case IsgFailure::BadEntry: return "BadEntry";
    case IsgFailure::NonAssociative: return "NonAssociative";
    case IsgFailure::NoInverse: return "NoInverse";
    case IsgFailure::IdempotentsDontCommute: return "IdempotentsDontCommute";
    case IsgFailure::InverseNotUnique: return "InverseNotUnique";
  }
  return "Unknown";
}

std::string IsgDiagnostic::message() const {
  std::string w;
  for (std::size_t i = 0; i < witness.size(); ++i) w += (i ? "," : "") + std::to_string(witness[i]);
  return name() + "(" + w + ")";
}

namespace {

std::optional<IsgDiagnostic> check_associative(const CayleyTable& t, int threads) {
  int n = static_cast<int>(t.size());
  std::mutex m;
  std::optional<std::array<int, 3>> first;
  parallel_for(n, threads, [&](int a) {
    for (int b = 0; b < n; ++b) {
      int ab = t[a][b];
      for (int c = 0; c < n; ++c) {
        if (t[ab][c] != t[a][t[b][c]]) {
          std::lock_guard lock(m);
          std::array<int, 3> w{a, b, c};
          if (!first || w < *first) first = w;
          return;
        }
      }
    }
  });
  if (!first) return std::nullopt;
  return IsgDiagnostic{IsgFailure::NonAssociative, {(*first)[0], (*first)[1], (*first)[2]}};
}

}  // namespace

std::optional<IsgDiagnostic> diagnose_inverse_semigroup(const CayleyTable& t, bool exhaustive, int threads) {
  int n = static_cast<int>(t.size());
  for (int a = 0; a < n; ++a) {
    if (static_cast<int>(t[a].size()) != n) return IsgDiagnostic{IsgFailure::BadEntry, {a, -1}};
    for (int b = 0; b < n; ++b)
      if (t[a][b] < 0 || t[a][b] >= n) return IsgDiagnostic{IsgFailure::BadEntry, {a, b}};
  }
  if (auto d = check_associative(t, threads)) return d;
  for (int a = 0; a < n; ++a) {
    bool found = false;
    for (int b = 0; b < n && !found; ++b) found = t[t[a][b]][a] == a && t[t[b][a]][b] == b;
    if (!found) return IsgDiagnostic{IsgFailure::NoInverse, {a}};
  }
  std::vector<int> idem;
  for (int a = 0; a < n; ++a)
    if (t[a][a] == a) idem.push_back(a);
  for (std::size_t i = 0; i < idem.size(); ++i)
    for (std::size_t j = i + 1; j < idem.size(); ++j)
      if (t[idem[i]][idem[j]] != t[idem[j]][idem[i]])
        return IsgDiagnostic{IsgFailure::IdempotentsDontCommute, {idem[i], idem[j]}};
  if (exhaustive) {
    for (int a = 0; a < n; ++a) {
      int count = 0;
      for (int b = 0; b < n; ++b) count += t[t[a][b]][a] == a && t[t[b][a]][b] == b;
      if (count != 1) return IsgDiagnostic{IsgFailure::InverseNotUnique, {a}};
    }
  }
  return std::nullopt;
}

InverseSemigroup InverseSemigroup::from_table(CayleyTable table, std::vector<std::string> labels,
                                              bool exhaustive, int threads) {
  if (auto d = diagnose_inverse_semigroup(table, exhaustive, threads)) throw Error(d->name(), d->message());
  InverseSemigroup s;
  int n = static_cast<int>(table.size());
  s.table_ = std::move(table);
  s.inv_.assign(n, -1);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (s.mul(a, b, a) == a && s.mul(b, a, b) == b) {
        s.inv_[a] = b;
        break;
      }
    }
    if (s.is_idempotent(a)) s.idem_.push_back(a);
  }
  if (labels.empty()) {
    for (int a = 0; a < n; ++a) labels.push_back("e" + std::to_string(a));
  }
  if (static_cast<int>(labels.size()) != n) throw InputError("label count differs from table size");
  std::set<std::string> seen(labels.begin(), labels.end());
  if (static_cast<int>(seen.size()) != n) throw InputError("duplicate element labels");
  s.labels_ = std::move(labels);
  return s;
}

int InverseSemigroup::index_of(std::string_view label) const {
  for (int a = 0; a < size(); ++a)
    if (labels_[a] == label) return a;
  throw InputError("unknown semigroup element '" + std::string(label) + "'");
}

bool natural_leq(const InverseSemigroup& s, int a, int b) { return s.leq(a, b); }

std::string partial_map_label(const PartialBijection& p) {
  std::string out = "[";
  for (int x = 0; x < p.universe(); ++x) {
    auto y = p.apply(x);
    out += y ? std::to_string(*y) : "-";
  }
  return out + "]";
}

namespace {

PartialMapSemigroup table_from_maps(std::vector<PartialBijection> maps) {
  std::map<std::vector<int>, int> index;
  for (int i = 0; i < static_cast<int>(maps.size()); ++i) index[maps[i].table()] = i;
  int n = static_cast<int>(maps.size());
  CayleyTable t(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t[a][b] = index.at(compose(maps[a], maps[b]).table());
  std::vector<std::string> labels;
  for (const auto& m : maps) labels.push_back(partial_map_label(m));
  auto s = std::make_shared<const InverseSemigroup>(InverseSemigroup::from_table(std::move(t), std::move(labels)));
  return {s, std::move(maps)};
}

void sort_maps(std::vector<PartialBijection>& maps) {
  std::sort(maps.begin(), maps.end(), [](const PartialBijection& a, const PartialBijection& b) {
    auto ra = a.domain().size(), rb = b.domain().size();
    if (ra != rb) return ra < rb;
    return a.table() < b.table();
  });
}

}  // namespace

PartialMapSemigroup symmetric_inverse_monoid_maps(int k) {
  if (k < 1 || k > 4) throw Error("TooLarge", "symmetric inverse monoid needs 1 <= k <= 4, got " + std::to_string(k));
  std::vector<PartialBijection> maps;
  std::vector<int> img(k, -1);
  // Each point maps to -1 or an unused target.
  std::vector<bool> used(k, false);
  auto rec = [&](auto&& self, int x) -> void {
    if (x == k) {
      std::vector<std::pair<int, int>> pairs;
      for (int i = 0; i < k; ++i)
        if (img[i] >= 0) pairs.emplace_back(i, img[i]);
      maps.push_back(PartialBijection::from_pairs(k, pairs));
      return;
    }
    img[x] = -1;
    self(self, x + 1);
    for (int y = 0; y < k; ++y) {
      if (used[y]) continue;
      used[y] = true;
      img[x] = y;
      self(self, x + 1);
      used[y] = false;
    }
    img[x] = -1;
  };
  rec(rec, 0);
  sort_maps(maps);
  return table_from_maps(std::move(maps));
}

InverseSemigroup symmetric_inverse_monoid(int k) { return *symmetric_inverse_monoid_maps(k).semigroup; }

PartialMapSemigroup generated_partial_maps(const std::vector<PartialBijection>& gens) {
  if (gens.empty()) throw InputError("no generators");
  std::set<std::vector<int>> seen;
  std::vector<PartialBijection> maps;
  auto add = [&](const PartialBijection& p) {
    if (seen.insert(p.table()).second) maps.push_back(p);
  };
  for (const auto& g : gens) {
    add(g);
    add(g.inverse());
  }
  for (std::size_t i = 0; i < maps.size(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      PartialBijection a = maps[i], b = maps[j];
      add(compose(a, b));
      add(compose(b, a));
    }
  }
  sort_maps(maps);
  return table_from_maps(std::move(maps));
}

InverseSemigroup five_element_semigroup() {
  // 0:s 1:s* 2:s*s 3:ss* 4:0
  CayleyTable t = {
      {4, 3, 0, 4, 4},
      {2, 4, 4, 1, 4},
      {4, 1, 2, 4, 4},
      {0, 4, 4, 3, 4},
      {4, 4, 4, 4, 4},
  };
  return InverseSemigroup::from_table(t, {"s", "s*", "s*s", "ss*", "0"});
}

InverseSemigroup cyclic_group(int n) {
  if (n < 1) throw InputError("cyclic group order must be positive");
  CayleyTable t(n, std::vector<int>(n));
  std::vector<std::string> labels;
  for (int a = 0; a < n; ++a) {
    labels.push_back(a == 0 ? "1" : (n == 2 ? "g" : "g" + std::to_string(a)));
    for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  }
  return InverseSemigroup::from_table(t, labels);
}

std::optional<std::array<int, 2>> homomorphism_failure(const IsgHomomorphism& phi) {
  const auto& s = *phi.source;
  const auto& t = *phi.target;
  if (static_cast<int>(phi.map.size()) != s.size()) return std::array<int, 2>{-1, -1};
  for (int v : phi.map)
    if (v < 0 || v >= t.size()) return std::array<int, 2>{-1, -1};
  for (int a = 0; a < s.size(); ++a)
    for (int b = 0; b < s.size(); ++b)
      if (phi.map[s.mul(a, b)] != t.mul(phi.map[a], phi.map[b])) return std::array<int, 2>{a, b};
  return std::nullopt;
}

bool is_surjective(const IsgHomomorphism& phi) {
  std::vector<bool> hit(phi.target->size(), false);
  for (int v : phi.map) hit[v] = true;
  return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

bool is_essentially_injective(const IsgHomomorphism& phi) {
  for (int a = 0; a < phi.source->size(); ++a)
    if (phi.target->is_idempotent(phi.map[a]) && !phi.source->is_idempotent(a)) return false;
  return true;
}

}  // namespace twa
