#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "twa/fell_bundle.hpp"
#include "twa/groupoid.hpp"
#include "twa/inverse_semigroup.hpp"
#include "twa/io.hpp"
#include "twa/refinement.hpp"
#include "twa/rep_algebra.hpp"
#include "twa/tro.hpp"
#include "twa/twisted_action.hpp"

using namespace twa;

namespace {

struct Settings {
  double tolerance = kDefaultTolerance;
  std::uint64_t seed = 0;
  bool pretty = false;
  int trials = 16;
  int threads = 1;
  bool timings = false;
  int den = 2;
  std::int64_t max = 100000;
  int limit = 8;
  bool exhaustive = false;
};

struct Outcome {
  std::vector<Violation> violations;
  Json result = Json::object();
};

class Timer {
 public:
  explicit Timer(Json& sink) : sink_(sink) {}
  template <class F>
  auto operator()(const std::string& name, F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    auto out = f();
    sink_[name] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return out;
  }

 private:
  Json& sink_;
};

struct Input {
  std::string raw;
  Json doc;
};

Input read_input(const std::string& path) {
  Input in;
  if (path == "-") {
    in.raw.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot open " + path);
    in.raw.assign(std::istreambuf_iterator<char>(f), {});
  }
  try {
    in.doc = Json::parse(in.raw);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
  return in;
}

bool is_groupoid_doc(const Json& j) { return j.is_object() && j.contains("objects"); }

// A bundle together with whichever document it came from.
struct BundleSource {
  std::optional<TwistedAction> action;
  std::optional<GroupoidDocument> groupoid;
  std::optional<BisectionSemigroup> bisections;
  std::optional<SemiAbelianBundle> bundle;
};

BundleSource load_bundle(const Json& doc) {
  BundleSource src;
  if (is_groupoid_doc(doc)) {
    src.groupoid = parse_groupoid(doc);
    src.bisections = document_bisections(*src.groupoid);
    src.bundle = section_bundle(src.groupoid->groupoid, src.groupoid->tau, *src.bisections,
                                document_carriers(*src.groupoid, *src.bisections));
  } else {
    src.action = parse_action(doc);
    src.bundle = build_bundle(*src.action);
  }
  return src;
}

// The twisted action attached to a document: as given, or built from the cocycle.
TwistedAction load_action(const Json& doc) {
  if (!is_groupoid_doc(doc)) return parse_action(doc);
  GroupoidDocument d = parse_groupoid(doc);
  return action_from_cocycle(d.groupoid, d.tau, document_bisections(d));
}

std::string join_labels(const std::vector<std::string>& labels, const std::vector<int>& idx) {
  std::string s;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) s += ",";
    s += idx[i] >= 0 && idx[i] < static_cast<int>(labels.size()) ? labels[idx[i]] : std::to_string(idx[i]);
  }
  return s;
}

Json fiber_listing(const SemiAbelianBundle& b) {
  Json fibers = Json::array();
  for (int s = 0; s < b.size(); ++s) {
    Json carrier = Json::array();
    for (int p = 0; p < b.carrier_size(s); ++p) carrier.push_back(b.realization().carrier_label(s, p));
    fibers.push_back({{"element", b.S().label(s)}, {"carrier", carrier}});
  }
  return fibers;
}

// ---- isg ----

Outcome isg_verify(const Json& doc, const Settings& cfg) {
  Outcome out;
  CayleyTable table;
  std::vector<std::string> labels;
  try {
    const Json& t = doc.at("table");
    for (const Json& row : t) {
      if (!row.is_array() || row.size() != t.size()) throw InputError("table must be square");
      table.push_back(row.get<std::vector<int>>());
    }
    if (doc.contains("elements")) labels = doc.at("elements").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("semigroup: ") + e.what());
  }
  if (labels.empty())
    for (std::size_t i = 0; i < table.size(); ++i) labels.push_back(std::to_string(i));
  if (labels.size() != table.size()) throw InputError("element count differs from table size");
  out.result["size"] = table.size();
  if (auto d = diagnose_inverse_semigroup(table, cfg.exhaustive, cfg.threads)) {
    out.violations.push_back({d->name(), join_labels(labels, d->witness), d->message()});
    return out;
  }
  InverseSemigroup s = InverseSemigroup::from_table(table, labels);
  Json idem = Json::array(), inv = Json::object();
  for (int e : s.idempotents()) idem.push_back(s.label(e));
  for (int a = 0; a < s.size(); ++a) inv[s.label(a)] = s.label(s.star(a));
  out.result["idempotents"] = idem;
  out.result["inverse"] = inv;
  return out;
}

// ---- tro ----

struct TroDoc {
  int dim = 0;
  std::vector<Matrix> basis;
  std::optional<Matrix> u;
};

TroDoc parse_tro(const Json& doc) {
  TroDoc t;
  const Json* basis = &doc;
  if (doc.is_object()) {
    if (!doc.contains("basis")) throw InputError("tro: missing \"basis\"");
    basis = &doc.at("basis");
    if (doc.contains("u")) t.u = parse_matrix(doc.at("u"));
  }
  if (!basis->is_array() || basis->empty()) throw InputError("tro: basis must be a non-empty list of matrices");
  for (const Json& m : *basis) t.basis.push_back(parse_matrix(m));
  t.dim = static_cast<int>(t.basis[0].rows());
  for (const Matrix& m : t.basis)
    if (m.rows() != t.dim || m.cols() != t.dim) throw InputError("tro: basis matrices must be square of equal size");
  if (t.u && (t.u->rows() != t.dim || t.u->cols() != t.dim)) throw InputError("tro: u has the wrong size");
  return t;
}

Json tro_summary(const MatrixTRO& m) {
  return {{"matrix_size", m.dim()},
          {"dimension", m.span().size()},
          {"left_algebra_dimension", m.left_algebra().size()},
          {"right_algebra_dimension", m.right_algebra().size()}};
}

Json association_json(const AssociationReport& r) {
  return {{"a", r.a},
          {"b", r.b},
          {"c", r.c},
          {"d", r.d},
          {"associated", r.associated()},
          {"partial_isometry", r.partial_isometry},
          {"strict", r.strict()},
          {"implications_hold", r.implications_hold()}};
}

Outcome tro_command(const std::string& action, const Json& doc, const Settings& cfg) {
  Outcome out;
  TroDoc t = parse_tro(doc);
  Span span = Span::of(t.dim, t.basis, cfg.tolerance);
  if (!MatrixTRO::is_tro(span, cfg.tolerance)) {
    out.result["dimension"] = span.size();
    out.violations.push_back({"TRO closure", "", "x y* z leaves the span"});
    return out;
  }
  MatrixTRO m = MatrixTRO::from_span(span, cfg.tolerance);
  out.result = tro_summary(m);
  if (action == "verify") return out;
  if (action == "regular") {
    RegularityResult r = is_regular(m, cfg.trials, cfg.seed, cfg.tolerance);
    out.result["regular"] = r.regular;
    out.result["trials"] = r.log.size();
    if (r.obstruction) out.result["obstruction"] = *r.obstruction;
    if (r.witness) {
      out.result["witness"] = matrix_to_json(*r.witness);
      AssociationReport a = check_association(*r.witness, m, cfg.tolerance);
      out.result["witness_association"] = association_json(a);
      if (!a.associated() || !a.strict() || !a.partial_isometry)
        out.violations.push_back({"witness strictly associated", "", "witness fails the association checks"});
      if (!verify_corner_isomorphism(*r.witness, m, cfg.tolerance))
        out.violations.push_back({"corner isomorphism", "", "a -> u* a u is not a *-isomorphism MM* -> M*M"});
    }
    return out;
  }
  if (action == "associate") {
    if (!t.u) throw InputError("tro associate: missing \"u\"");
    AssociationReport a = check_association(*t.u, m, cfg.tolerance);
    out.result["association"] = association_json(a);
    if (!a.implications_hold()) out.violations.push_back({"association implications", "", "an implication fails"});
    if (a.associated()) {
      Matrix c = strict_correction(*t.u, m, cfg.tolerance);
      AssociationReport ac = check_association(c, m, cfg.tolerance);
      out.result["corrected"] = matrix_to_json(c);
      out.result["corrected_association"] = association_json(ac);
      if (!ac.strict()) out.violations.push_back({"strict correction", "", "u p is not strictly associated"});
    }
    return out;
  }
  out.result["locally_regular"] = is_locally_regular(m, cfg.trials, cfg.seed, cfg.tolerance);
  return out;
}

// ---- action ----

Json germs_json(const TwistedAction& a, const GermGroupoid& g) {
  Json list = Json::array();
  for (int k = 0; k < g.size(); ++k) {
    auto name = [&](int h) {
      return "[" + a.S().label(g.germ(h).rep) + "," + a.point_labels[g.germ(h).x] + "]";
    };
    Json e = {{"germ", name(k)},
              {"source", a.point_labels[g.source(k)]},
              {"range", a.point_labels[g.range(k)]},
              {"inverse", name(g.inverse(k))}};
    if (!g.involution(k).is_one()) e["involution"] = g.involution(k).str();
    Json cocycle = Json::object();
    for (int l = 0; l < g.size(); ++l)
      if (g.compose(k, l) && !g.cocycle(k, l).is_one()) cocycle[name(l)] = g.cocycle(k, l).str();
    if (!cocycle.empty()) e["cocycle"] = cocycle;
    list.push_back(e);
  }
  return list;
}

Outcome action_command(const std::string& action, const Json& doc, const Settings& cfg) {
  Outcome out;
  TwistedAction a = load_action(doc);
  out.result["elements"] = a.size();
  out.result["points"] = a.num_points();
  if (action == "search-iv") {
    AxiomFourSearch r = search_axiom_four_independence(a, cfg.den, cfg.max, cfg.seed);
    out.result["exhaustive"] = r.exhaustive;
    out.result["candidates"] = r.candidates;
    out.result["satisfying_first_three"] = r.satisfying_first_three;
    out.result["counterexamples"] = r.counterexamples.size();
    Json ex = Json::array();
    for (std::size_t i = 0; i < r.counterexamples.size() && static_cast<int>(i) < cfg.limit; ++i)
      ex.push_back(action_to_json(r.counterexamples[i]));
    out.result["examples"] = ex;
    return out;
  }
  ActionReport report = verify_twisted_action(a, cfg.threads);
  out.violations = report.all();
  if (action == "verify" || !report.ok()) return out;
  if (action == "consequences") {
    out.violations = verify_consequences(a);
  } else if (action == "sieben") {
    SiebenResult s = check_sieben(a);
    out.result["holds"] = s.holds;
    out.violations = s.counterexamples;
  } else if (action == "siebenize") {
    Siebenization s = siebenize(a);
    Json chi = Json::object();
    for (int t = 0; t < a.size(); ++t) {
      Json vals = Json::object();
      for (std::size_t i = 0; i < s.chi[t].size(); ++i)
        if (!s.chi[t].values()[i].is_one()) vals[a.point_labels[s.chi[t].carrier()[i]]] = s.chi[t].values()[i].str();
      if (!vals.empty()) chi[a.S().label(t)] = vals;
    }
    out.result["gauge"] = chi;
    out.result["action"] = action_to_json(s.action);
    out.violations = verify_twisted_action(s.action, cfg.threads).all();
    for (auto& v : check_sieben(s.action).counterexamples) out.violations.push_back(v);
  } else if (action == "germs") {
    GermGroupoid g = germ_groupoid(a);
    out.result["germs"] = g.size();
    out.result["objects"] = g.num_objects();
    out.result["groupoid"] = germs_json(a, g);
    out.violations = g.inconsistencies();
  }
  return out;
}

// ---- bundle ----

Outcome bundle_command(const std::string& action, const Json& doc, const Settings& cfg, Timer& time) {
  Outcome out;
  BundleSource src = time("build", [&] { return load_bundle(doc); });
  const SemiAbelianBundle& b = *src.bundle;
  out.result["realization"] = std::string(b.tag());
  out.result["elements"] = b.size();
  if (action == "build") {
    out.result["data"] = src.action ? action_to_json(*src.action) : groupoid_to_json(src.groupoid->groupoid, src.groupoid->tau);
    out.result["fibers"] = fiber_listing(b);
  } else if (action == "verify") {
    BundleVerifyOptions opt;
    opt.random_samples = cfg.trials;
    opt.seed = cfg.seed;
    opt.eps = cfg.tolerance;
    out.violations = time("verify", [&] { return verify_fell_bundle(b, opt); });
  } else if (action == "classify") {
    BundleClass c = classify_bundle(b);
    out.result["saturated"] = c.saturated;
    out.result["semi_abelian"] = c.semi_abelian;
    Json reg = Json::object();
    for (int s = 0; s < b.size(); ++s) reg[b.S().label(s)] = static_cast<bool>(c.regular[s]);
    out.result["regular"] = reg;
    out.result["has_witness"] = c.witness.has_value();
    out.result["notes"] = c.notes;
  } else if (action == "extract") {
    TwistedAction a = extract_action(b, canonical_unit_family(b));
    out.result["action"] = action_to_json(a);
    out.violations = verify_twisted_action(a, cfg.threads).all();
  } else if (action == "roundtrip") {
    TwistedAction a = src.action ? *src.action : load_action(doc);
    RoundTrip r = roundtrip_check(a);
    out.result["exact"] = r.exact;
    out.result["diff"] = r.diff;
    if (!r.exact) out.violations.push_back({"exact round trip", "", r.diff.empty() ? "" : r.diff.front()});
  }
  return out;
}

// ---- groupoid ----

Json cocycle_json(const FiniteGroupoid& g, const TwoCocycle& tau) {
  Json j = Json::object();
  for (int a = 0; a < g.num_arrows(); ++a)
    for (int b = 0; b < g.num_arrows(); ++b)
      if (g.composable(a, b) && !tau.at(a, b).is_one()) j[g.arrow_label(a) + "," + g.arrow_label(b)] = tau.at(a, b).str();
  return j;
}

Outcome groupoid_command(const std::string& action, const Json& doc, const Settings& cfg) {
  Outcome out;
  GroupoidDocument d = parse_groupoid(doc);
  const FiniteGroupoid& g = d.groupoid;
  out.result["objects"] = g.num_objects();
  out.result["arrows"] = g.num_arrows();
  out.violations = verify_cocycle(g, d.tau);
  if (action == "verify" || !out.violations.empty()) return out;
  if (action == "bisections") {
    BisectionSemigroup s = document_bisections(d);
    Json list = Json::array();
    for (const Bisection& b : s.bisections) list.push_back(bisection_label(g, b));
    out.result["count"] = s.bisections.size();
    out.result["covers"] = s.covers;
    out.result["intersection_closed"] = s.intersection_closed;
    out.result["bisections"] = list;
  } else if (action == "cocycle") {
    std::vector<TwoCocycle> all = enumerate_normalized_cocycles(g, cfg.den, cfg.max);
    out.result["denominator"] = cfg.den;
    out.result["count"] = all.size();
    Json list = Json::array();
    for (std::size_t i = 0; i < all.size(); ++i) {
      for (auto& v : verify_cocycle(g, all[i])) out.violations.push_back(v);
      if (static_cast<int>(i) < cfg.limit) list.push_back(cocycle_json(g, all[i]));
    }
    out.result["cocycles"] = list;
  } else if (action == "to-action") {
    TwistedAction a = action_from_cocycle(g, d.tau, document_bisections(d));
    out.result["action"] = action_to_json(a);
    out.violations = verify_twisted_action(a, cfg.threads).all();
  } else if (action == "roundtrip") {
    BisectionSemigroup s = document_bisections(d);
    GermIsomorphism iso = germ_recovers_groupoid(g, d.tau, s);
    out.result["wide"] = s.wide();
    out.result["isomorphic"] = iso.isomorphic;
    out.result["germ_count"] = iso.germ_count;
    out.result["arrow_count"] = iso.arrow_count;
    out.result["twist_matches"] = iso.twist_matches;
    if (!iso.isomorphic) out.violations.push_back({"germ groupoid", "", iso.counterexample});
    else if (!iso.twist_matches) out.violations.push_back({"germ twist", "", "germ cocycle differs from tau"});
  }
  return out;
}

// ---- algebra ----

Json algebra_json(const StarAlgebra& a) {
  Json products = Json::array();
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j)
      for (const auto& [k, c] : a.product(i, j))
        products.push_back({a.labels[i], a.labels[j], a.labels[k], {c.real(), c.imag()}});
  return {{"basis", a.labels}, {"products", products}};
}

Outcome algebra_command(const std::string& action, const Json& doc, const Settings& cfg, Timer& time) {
  Outcome out;
  StarAlgebra alg;
  if (action == "germ" || !is_groupoid_doc(doc)) {
    alg = germ_algebra(load_action(doc));
  } else {
    GroupoidDocument d = parse_groupoid(doc);
    alg = convolution_algebra(d.groupoid, d.tau);
  }
  out.result["dimension"] = alg.dim();
  out.violations = verify_star_algebra(alg, cfg.tolerance);
  if (action == "build") {
    out.result["algebra"] = algebra_json(alg);
  } else if (action == "germ") {
    out.result["algebra"] = algebra_json(alg);
    if (is_groupoid_doc(doc)) {
      GroupoidDocument d = parse_groupoid(doc);
      GermIsomorphism iso = germ_recovers_groupoid(d.groupoid, d.tau, document_bisections(d));
      out.result["matches_convolution"] = iso.isomorphic && iso.twist_matches;
      if (!iso.isomorphic || !iso.twist_matches) {
        out.violations.push_back({"germ algebra", "", "germ twist differs from the groupoid twist"});
      } else {
        for (auto& v : check_basis_isomorphism(alg, convolution_algebra(d.groupoid, d.tau), iso.germ_to_arrow,
                                               std::vector<Complex>(alg.dim(), 1.0), cfg.tolerance))
          out.violations.push_back(v);
      }
    }
  } else if (action == "blocks") {
    out.result["blocks"] = time("blocks", [&] { return block_decompose(alg, cfg.seed, cfg.tolerance); });
  }
  return out;
}

// ---- rep ----

std::vector<Matrix> parse_matrix_list(const Json& j, const std::string& what) {
  if (!j.is_array()) throw InputError(what + " must be a list of matrices");
  std::vector<Matrix> out;
  for (const Json& m : j) out.push_back(parse_matrix(m));
  return out;
}

Json matrix_list_json(const std::vector<Matrix>& ms) {
  Json j = Json::array();
  for (const Matrix& m : ms) j.push_back(matrix_to_json(m));
  return j;
}

Outcome rep_command(const std::string& action, const Json& doc, const Settings& cfg) {
  Outcome out;
  const Json& gdoc = doc.contains("groupoid") ? doc.at("groupoid") : doc;
  if (!is_groupoid_doc(gdoc)) throw InputError("rep: expected a groupoid document");
  GroupoidDocument d = parse_groupoid(gdoc);
  BisectionSemigroup s = document_bisections(d);
  TwistedAction a = action_from_cocycle(d.groupoid, d.tau, s);
  CovariantRep r;
  if (doc.contains("covariant")) {
    const Json& c = doc.at("covariant");
    r.rho = parse_matrix_list(c.at("rho"), "rho");
    r.v = parse_matrix_list(c.at("v"), "v");
    if (static_cast<int>(r.rho.size()) != a.num_points() || static_cast<int>(r.v.size()) != a.size())
      throw InputError("covariant: need one rho per object and one v per bisection");
    r.dim = static_cast<int>(r.rho[0].rows());
  } else {
    r = regular_covariant_rep(d.groupoid, d.tau, s);
  }
  out.result["dimension"] = r.dim;
  out.result["bisections"] = a.size();
  out.violations = verify_covariant(r, a, cfg.tolerance);
  if (action == "regular") {
    Json v = Json::object();
    for (int t = 0; t < a.size(); ++t) v[a.S().label(t)] = matrix_to_json(r.v[t]);
    out.result["rho"] = matrix_list_json(r.rho);
    out.result["v"] = v;
  } else if (action == "verify" && out.violations.empty()) {
    BundleRep pi = to_bundle_rep(r, a, cfg.tolerance);
    out.violations = verify_representation(pi, build_bundle(a), cfg.tolerance);
  } else if (action == "convert" && out.violations.empty()) {
    BundleRep pi = to_bundle_rep(r, a, cfg.tolerance);
    CovariantRep back = to_covariant(pi, a, cfg.tolerance);
    BundleRep again = to_bundle_rep(back, a, cfg.tolerance);
    bool id_cov = approx_equal(back, r, cfg.tolerance), id_bundle = approx_equal(again, pi, cfg.tolerance);
    out.result["covariant_identity"] = id_cov;
    out.result["bundle_identity"] = id_bundle;
    if (!id_cov) out.violations.push_back({"covariant round trip", "", "to_covariant(to_bundle_rep(r)) != r"});
    if (!id_bundle) out.violations.push_back({"bundle round trip", "", "to_bundle_rep(to_covariant(pi)) != pi"});
    Json squares = Json::object();
    for (int t = 0; t < a.size(); ++t) {
      Matrix sq = r.v[t] * r.v[t];
      if (sq.isApprox(-Matrix::Identity(r.dim, r.dim), cfg.tolerance)) squares[a.S().label(t)] = "-I";
    }
    out.result["v_squared_minus_identity"] = squares;
  }
  return out;
}

// ---- refine ----

Outcome refine_command(const std::string& action, const Json& doc, const Settings& cfg, Timer& time) {
  Outcome out;
  BundleSource src = load_bundle(doc);
  const SemiAbelianBundle& a = *src.bundle;
  Refinement r = time("refine", [&] { return saturated_refinement(a); });
  out.result["target_elements"] = a.size();
  out.result["refined_elements"] = r.bundle.size();
  if (action == "saturate") {
    BundleClass c = classify_bundle(r.bundle);
    out.result["saturated"] = c.saturated;
    out.result["regular"] = r.witness.has_value();
    Json phi = Json::object();
    for (int t = 0; t < r.bundle.size(); ++t) phi[r.bundle.S().label(t)] = a.S().label(r.morphism.phi.map[t]);
    out.result["phi"] = phi;
    if (!c.saturated) out.violations.push_back({"refinement saturated", "", "refined bundle is not saturated"});
  } else if (action == "verify") {
    out.violations = time("verify", [&] { return verify_refinement(r.morphism, r.bundle, a); });
  } else if (action == "germ-check") {
    GermMap m = germ_preservation_check(r.morphism, r.bundle, a);
    out.result["isomorphic"] = m.isomorphic;
    out.result["refined_germs"] = m.refined_count;
    out.result["target_germs"] = m.target_count;
    if (!m.isomorphic) out.violations.push_back({"germ preservation", "", m.counterexample});
  } else if (action == "algebra-check") {
    AlgebraPreservation p = time("algebra", [&] { return algebra_preservation_check(r.morphism, r.bundle, a, cfg.seed, cfg.tolerance); });
    out.result["refined_dimension"] = p.refined_dim;
    out.result["target_dimension"] = p.target_dim;
    out.result["refined_blocks"] = p.refined_blocks;
    out.result["target_blocks"] = p.target_blocks;
    out.violations = p.transport;
    if (p.refined_dim != p.target_dim) out.violations.push_back({"algebra dimension", "", "dimensions differ"});
    if (p.refined_blocks != p.target_blocks) out.violations.push_back({"block profile", "", "block profiles differ"});
  }
  return out;
}

// ---- reporting ----

std::string cell(const Json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

void print_pretty(const Json& report, std::ostream& os) {
  os << report["command"].get<std::string>() << ": " << report["status"].get<std::string>() << "\n";
  if (report.contains("error")) os << "  error: " << report["error"].get<std::string>() << "\n";
  if (report.contains("input_digest")) os << "  input " << report["input_digest"].get<std::string>() << ", seed " << report["seed"] << "\n";
  if (report.contains("result"))
    for (const auto& [k, v] : report["result"].items()) os << "  " << k << ": " << cell(v) << "\n";
  if (report.contains("violations") && !report["violations"].empty()) {
    std::size_t w1 = 4, w2 = 5;
    for (const auto& v : report["violations"]) {
      w1 = std::max(w1, v["rule"].get<std::string>().size());
      w2 = std::max(w2, v["where"].get<std::string>().size());
    }
    auto pad = [](const std::string& s, std::size_t w) { return s + std::string(w - s.size(), ' '); };
    os << "  " << pad("rule", w1) << " | " << pad("where", w2) << " | detail\n";
    for (const auto& v : report["violations"])
      os << "  " << pad(v["rule"].get<std::string>(), w1) << " | " << pad(v["where"].get<std::string>(), w2) << " | "
         << v["detail"].get<std::string>() << "\n";
  }
  if (report.contains("timings"))
    for (const auto& [k, v] : report["timings"].items()) os << "  time " << k << ": " << v.get<double>() << " ms\n";
}

void emit(const Json& report, const Settings& cfg) {
  if (cfg.pretty) print_pretty(report, std::cout);
  else std::cout << report.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  Settings cfg;
  if (const char* env = std::getenv("TWA_TOLERANCE")) {
    try {
      cfg.tolerance = std::stod(env);
    } catch (const std::exception&) {
      std::cerr << "TWA_TOLERANCE is not a number: " << env << "\n";
      return 2;
    }
  }

  CLI::App app{"Finite twisted actions, Fell bundles and groupoid twists"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--tolerance", cfg.tolerance, "Numerical tolerance (default 1e-9 or $TWA_TOLERANCE)")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "Root seed for randomized checks");
  auto* json_flag = app.add_flag("--json", "JSON report (default)");
  app.add_flag("--pretty", cfg.pretty, "Human-readable report")->excludes(json_flag);
  app.add_option("--trials", cfg.trials, "Random trials / samples")->check(CLI::PositiveNumber);
  app.add_option("--threads", cfg.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--timings", cfg.timings, "Include timings in the report");
  app.add_option("--den", cfg.den, "Angle denominator for cocycle enumeration and search")->check(CLI::PositiveNumber);
  app.add_option("--max", cfg.max, "Cap on enumerated candidates");
  app.add_option("--limit", cfg.limit, "Number of listed items in reports");
  app.add_flag("--exhaustive", cfg.exhaustive, "Exhaustive checks where available");

  std::string file;
  std::string group, action;
  const std::vector<std::pair<std::string, std::vector<std::string>>> commands = {
      {"isg", {"verify"}},
      {"tro", {"verify", "regular", "associate", "local"}},
      {"action", {"verify", "consequences", "sieben", "siebenize", "germs", "search-iv"}},
      {"bundle", {"build", "verify", "classify", "extract", "roundtrip"}},
      {"groupoid", {"verify", "bisections", "cocycle", "to-action", "roundtrip"}},
      {"algebra", {"build", "germ", "blocks"}},
      {"rep", {"regular", "verify", "convert"}},
      {"refine", {"saturate", "verify", "germ-check", "algebra-check"}},
  };
  for (const auto& [g, actions] : commands) {
    auto* sub = app.add_subcommand(g, g + " commands");
    sub->require_subcommand(1);
    for (const auto& act : actions) {
      auto* leaf = sub->add_subcommand(act);
      leaf->add_option("file", file, "Input JSON file, or - for stdin")->required();
      leaf->callback([&group, &action, g = g, act = act] {
        group = g;
        action = act;
      });
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 2;
  }

  Json report;
  report["command"] = group + " " + action;
  Json timings = Json::object();
  Timer time(timings);
  try {
    Input in = read_input(file);
    report["input_digest"] = "fnv1a64:" + fnv1a64_hex(in.raw);
    report["seed"] = cfg.seed;
    report["tolerance"] = cfg.tolerance;
    auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      if (group == "isg") out = isg_verify(in.doc, cfg);
      else if (group == "tro") out = tro_command(action, in.doc, cfg);
      else if (group == "action") out = action_command(action, in.doc, cfg);
      else if (group == "bundle") out = bundle_command(action, in.doc, cfg, time);
      else if (group == "groupoid") out = groupoid_command(action, in.doc, cfg);
      else if (group == "algebra") out = algebra_command(action, in.doc, cfg, time);
      else if (group == "rep") out = rep_command(action, in.doc, cfg);
      else out = refine_command(action, in.doc, cfg, time);
    } catch (const InputError&) {
      throw;
    } catch (const nlohmann::json::exception& e) {
      throw InputError(e.what());
    } catch (const Error& e) {
      out.violations = {{e.code(), report["command"].get<std::string>(), e.what()}};
    }
    timings["total"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    report["status"] = out.violations.empty() ? "pass" : "fail";
    report["violations"] = violations_to_json(out.violations);
    report["result"] = out.result;
    if (cfg.timings) report["timings"] = timings;
    emit(report, cfg);
    return out.violations.empty() ? 0 : 1;
  } catch (const InputError& e) {
    report["status"] = "error";
    report["error"] = e.what();
    emit(report, cfg);
    std::cerr << e.what() << "\n";
    return 2;
  }
}
