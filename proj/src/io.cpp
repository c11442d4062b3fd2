#include "twa/io.hpp"

#include <map>
#include <set>

namespace twa {

namespace {

const Json& need(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw InputError(where + ": missing \"" + key + "\"");
  return j.at(key);
}

const Json& need_array(const Json& j, const char* key, const std::string& where) {
  const Json& v = need(j, key, where);
  if (!v.is_array()) throw InputError(where + ": \"" + key + "\" must be an array");
  return v;
}

std::string as_string(const Json& j, const std::string& where) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw InputError(where + ": expected a string");
}

template <class F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string(what) + ": " + e.what());
  }
}

std::map<std::string, int> index_labels(const std::vector<std::string>& labels, const std::string& what) {
  std::map<std::string, int> m;
  for (int i = 0; i < static_cast<int>(labels.size()); ++i)
    if (!m.emplace(labels[i], i).second) throw InputError("duplicate " + what + " '" + labels[i] + "'");
  return m;
}

int lookup(const std::map<std::string, int>& m, const std::string& key, const std::string& what) {
  auto it = m.find(key);
  if (it == m.end()) throw InputError("unknown " + what + " '" + key + "'");
  return it->second;
}

// Splits "a,b" where labels may themselves contain commas; exactly one split
// must name two known labels.
std::pair<int, int> split_pair(const std::string& key, const std::map<std::string, int>& m, const std::string& what) {
  std::optional<std::pair<int, int>> found;
  for (std::size_t pos = key.find(','); pos != std::string::npos; pos = key.find(',', pos + 1)) {
    auto a = m.find(key.substr(0, pos)), b = m.find(key.substr(pos + 1));
    if (a == m.end() || b == m.end()) continue;
    if (found) throw InputError("ambiguous " + what + " pair key '" + key + "'");
    found = std::make_pair(a->second, b->second);
  }
  if (!found) throw InputError("cannot read " + what + " pair key '" + key + "'");
  return *found;
}

CircleScalar parse_scalar(const Json& j, const std::string& where) {
  try {
    if (j.is_number_integer()) return CircleScalar(0, 1);
    return CircleScalar::parse(as_string(j, where));
  } catch (const InputError&) {
    throw;
  } catch (const Error& e) {
    throw InputError(where + ": " + e.what());
  }
}

}  // namespace

InverseSemigroup parse_semigroup(const Json& j) {
  return guarded("semigroup", [&] {
    const Json& t = need(j, "table", "semigroup");
    if (!t.is_array()) throw InputError("semigroup: table must be an array of rows");
    CayleyTable table;
    for (const Json& row : t) {
      if (!row.is_array() || row.size() != t.size()) throw InputError("semigroup: table must be square");
      std::vector<int> r;
      for (const Json& x : row) {
        if (!x.is_number_integer()) throw InputError("semigroup: entries must be integers");
        r.push_back(x.get<int>());
      }
      table.push_back(std::move(r));
    }
    std::vector<std::string> labels;
    if (j.contains("elements")) {
      for (const Json& x : j.at("elements")) labels.push_back(as_string(x, "semigroup elements"));
      if (labels.size() != table.size()) throw InputError("semigroup: element count differs from table size");
      index_labels(labels, "element");
    }
    for (const auto& row : table)
      for (int x : row)
        if (x < 0 || x >= static_cast<int>(table.size()))
          throw Error("BadEntry", "table entry " + std::to_string(x) + " out of range");
    return InverseSemigroup::from_table(table, labels);
  });
}

Json semigroup_to_json(const InverseSemigroup& s) {
  Json j;
  j["elements"] = s.labels();
  j["table"] = s.table();
  return j;
}

TwistedAction parse_action(const Json& j) {
  return guarded("action", [&] {
    TwistedAction a;
    a.semigroup = std::make_shared<const InverseSemigroup>(parse_semigroup(need(j, "semigroup", "action")));
    const InverseSemigroup& S = *a.semigroup;
    int n = S.size();
    for (const Json& x : need_array(j, "points", "action")) a.point_labels.push_back(as_string(x, "points"));
    auto pts = index_labels(a.point_labels, "point");
    auto els = index_labels(S.labels(), "element");
    int np = a.num_points();
    std::vector<std::optional<PointSet>> u(n);
    if (j.contains("U")) {
      for (const auto& [key, val] : j.at("U").items()) {
        std::vector<int> v;
        for (const Json& x : val) v.push_back(lookup(pts, as_string(x, "U"), "point"));
        u[lookup(els, key, "element")] = make_point_set(v);
      }
    }
    for (int s = 0; s < n; ++s) {
      if (u[s]) continue;
      if (S.is_idempotent(s)) throw InputError("U missing for idempotent '" + S.label(s) + "'");
      if (!u[S.range(s)]) throw InputError("U missing for '" + S.label(S.range(s)) + "'");
      u[s] = u[S.range(s)];
    }
    for (auto& x : u) a.ideal.push_back(*x);
    a.theta.assign(n, PartialBijection(np));
    std::vector<bool> given(n, false);
    if (j.contains("theta")) {
      for (const auto& [key, val] : j.at("theta").items()) {
        int s = lookup(els, key, "element");
        std::vector<std::pair<int, int>> pairs;
        for (const auto& [x, y] : val.items())
          pairs.emplace_back(lookup(pts, x, "point"), lookup(pts, as_string(y, "theta"), "point"));
        a.theta[s] = PartialBijection::from_pairs(np, pairs);
        given[s] = true;
      }
    }
    for (int s = 0; s < n; ++s) {
      if (given[s]) continue;
      if (!S.is_idempotent(s)) throw InputError("theta missing for '" + S.label(s) + "'");
      a.theta[s] = PartialBijection::identity_on(np, a.ideal[s]);
    }
    for (int s = 0; s < n; ++s)
      for (int t = 0; t < n; ++t) a.omega.push_back(CircleFunction::constant(a.ideal[S.mul(s, t)], CircleScalar::one()));
    if (j.contains("omega")) {
      for (const auto& [key, val] : j.at("omega").items()) {
        auto [s, t] = split_pair(key, els, "element");
        CircleFunction& w = a.w(s, t);
        for (const auto& [y, z] : val.items()) {
          int p = lookup(pts, y, "point");
          if (!has_point(w.carrier(), p))
            throw InputError("omega(" + key + ") given at '" + y + "' outside U(" + S.label(S.mul(s, t)) + ")");
          w(p) = parse_scalar(z, "omega(" + key + ")");
        }
      }
    }
    return a;
  });
}

Json action_to_json(const TwistedAction& a) {
  const auto& S = a.S();
  Json j;
  j["semigroup"] = semigroup_to_json(S);
  j["points"] = a.point_labels;
  Json u = Json::object(), theta = Json::object(), omega = Json::object();
  for (int s = 0; s < a.size(); ++s) {
    Json pts = Json::array();
    for (int x : a.U(s)) pts.push_back(a.point_labels[x]);
    u[S.label(s)] = pts;
    Json m = Json::object();
    for (int x : a.theta[s].domain()) m[a.point_labels[x]] = a.point_labels[*a.theta[s].apply(x)];
    theta[S.label(s)] = m;
    for (int t = 0; t < a.size(); ++t) {
      const CircleFunction& w = a.w(s, t);
      Json vals = Json::object();
      for (std::size_t i = 0; i < w.size(); ++i)
        if (!w.values()[i].is_one()) vals[a.point_labels[w.carrier()[i]]] = w.values()[i].str();
      if (!vals.empty()) omega[S.label(s) + "," + S.label(t)] = vals;
    }
  }
  j["U"] = u;
  j["theta"] = theta;
  j["omega"] = omega;
  return j;
}

GroupoidDocument parse_groupoid(const Json& j) {
  return guarded("groupoid", [&] {
    std::vector<std::string> objects;
    for (const Json& x : need_array(j, "objects", "groupoid")) objects.push_back(as_string(x, "objects"));
    auto obj = index_labels(objects, "object");
    std::vector<FiniteGroupoid::Arrow> arrows;
    std::vector<std::string> arrow_labels;
    for (const Json& a : need_array(j, "arrows", "groupoid")) {
      std::string id = as_string(need(a, "id", "arrow"), "arrow id");
      arrows.push_back({id, lookup(obj, as_string(need(a, "src", "arrow " + id), "src"), "object"),
                        lookup(obj, as_string(need(a, "rng", "arrow " + id), "rng"), "object")});
      arrow_labels.push_back(id);
    }
    auto arr = index_labels(arrow_labels, "arrow");
    std::vector<std::array<int, 3>> comp;
    for (const Json& c : need_array(j, "comp", "groupoid")) {
      if (!c.is_array() || c.size() != 3) throw InputError("comp entries must be [a, b, ab]");
      comp.push_back({lookup(arr, as_string(c[0], "comp"), "arrow"), lookup(arr, as_string(c[1], "comp"), "arrow"),
                      lookup(arr, as_string(c[2], "comp"), "arrow")});
    }
    GroupoidDocument d{FiniteGroupoid::from_data(objects, arrows, comp), {}, std::nullopt, true, {}};
    d.tau = TwoCocycle::trivial(d.groupoid);
    if (j.contains("tau")) {
      for (const auto& [key, val] : j.at("tau").items()) {
        auto [a, b] = split_pair(key, arr, "arrow");
        if (!d.groupoid.composable(a, b)) throw InputError("tau given at non-composable pair '" + key + "'");
        d.tau.at(a, b) = parse_scalar(val, "tau(" + key + ")");
      }
    }
    auto read_set = [&](const Json& list) {
      Bisection b;
      for (const Json& x : list) b.push_back(lookup(arr, as_string(x, "bisection"), "arrow"));
      std::sort(b.begin(), b.end());
      return b;
    };
    if (j.contains("bisections")) {
      d.generators.emplace();
      for (const Json& b : j.at("bisections")) d.generators->push_back(read_set(b));
    }
    if (j.contains("intersections")) d.close_intersections = j.at("intersections").get<bool>();
    if (j.contains("carriers"))
      for (const Json& c : j.at("carriers"))
        d.carriers.emplace_back(read_set(need(c, "bisection", "carrier")), read_set(need(c, "carrier", "carrier")));
    return d;
  });
}

Json groupoid_to_json(const FiniteGroupoid& g, const TwoCocycle& tau) {
  Json j;
  j["objects"] = g.object_labels();
  Json arrows = Json::array(), comp = Json::array(), t = Json::object();
  for (int a = 0; a < g.num_arrows(); ++a)
    arrows.push_back({{"id", g.arrow_label(a)}, {"src", g.object_label(g.src(a))}, {"rng", g.object_label(g.rng(a))}});
  for (int a = 0; a < g.num_arrows(); ++a)
    for (int b = 0; b < g.num_arrows(); ++b)
      if (g.composable(a, b)) {
        comp.push_back({g.arrow_label(a), g.arrow_label(b), g.arrow_label(g.mul(a, b))});
        if (!tau.at(a, b).is_one()) t[g.arrow_label(a) + "," + g.arrow_label(b)] = tau.at(a, b).str();
      }
  j["arrows"] = arrows;
  j["comp"] = comp;
  j["tau"] = t;
  return j;
}

BisectionSemigroup document_bisections(const GroupoidDocument& d) {
  return bisection_semigroup(d.groupoid, d.generators, d.close_intersections);
}

std::optional<std::vector<Bisection>> document_carriers(const GroupoidDocument& d, const BisectionSemigroup& s) {
  if (d.carriers.empty()) return std::nullopt;
  std::vector<Bisection> out = s.bisections;
  for (const auto& [b, c] : d.carriers) {
    int i = s.index_of(b);
    if (i < 0) throw InputError("carrier given for " + bisection_label(d.groupoid, b) + ", which is not in the semigroup");
    out[i] = c;
  }
  return out;
}

Matrix parse_matrix(const Json& j) {
  return guarded("matrix", [&] {
    if (!j.is_array() || j.empty()) throw InputError("matrix must be a non-empty array of rows");
    Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (!j[r].is_array() || static_cast<Eigen::Index>(j[r].size()) != cols) throw InputError("ragged matrix");
      for (Eigen::Index c = 0; c < cols; ++c) {
        const Json& x = j[r][c];
        if (x.is_number()) {
          m(r, c) = x.get<double>();
        } else if (x.is_array() && x.size() == 2) {
          m(r, c) = std::complex<double>(x[0].get<double>(), x[1].get<double>());
        } else {
          throw InputError("matrix entries must be numbers or [re, im]");
        }
      }
    }
    return m;
  });
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

Json violations_to_json(const std::vector<Violation>& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back({{"rule", x.rule}, {"where", x.where}, {"detail", x.detail}});
  return out;
}

std::string fnv1a64_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace twa
