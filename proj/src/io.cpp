#include "symconv/io.hpp"

#include "symconv/error.hpp"

#include <cmath>
#include <fstream>
#include <limits>

namespace symconv {

namespace {

[[noreturn]] void bad(const std::string& m) { throw Error(ErrorCode::ConfigError, m); }

Rational rational_of(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_number()) return parse_rational(j.dump());
  bad("expected a rational, got " + j.dump());
}

QVector qvector_of(const Json& j) {
  if (!j.is_array()) bad("expected an array, got " + j.dump());
  QVector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = rational_of(j[i]);
  return v;
}

Json qmatrix_json(const QMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(to_json(m.row(i)));
  return rows;
}

QMatrix qmatrix_of(const Json& j) {
  if (!j.is_array() || j.empty()) bad("expected a nonempty matrix");
  std::vector<QVector> rows;
  for (const auto& r : j) rows.push_back(qvector_of(r));
  for (const auto& r : rows)
    if (r.size() != rows.front().size()) bad("ragged matrix");
  return QMatrix::from_rows(rows, rows.front().size());
}

Json num(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }
double num_of(const Json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!j.is_number()) bad("expected a number");
  return j.get<double>();
}

Json index_list(const std::vector<std::size_t>& v) { return Json(v); }

Json mat_json(const Mat& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json r = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) r.push_back(num(m(i, k)));
    rows.push_back(r);
  }
  return rows;
}

Json signature_json(const Signature& s) { return Json{{"plus", s.n_plus}, {"zero", s.n_zero}, {"minus", s.n_minus}}; }

Json check_json(const CheckResult& c) {
  Json j;
  j["name"] = c.name;
  j["pass"] = c.pass;
  j["skipped"] = c.skipped;
  j["count"] = c.count;
  j["failures"] = c.failures;
  j["worst_slack"] = num(c.worst_slack);
  Json m = Json::object();
  for (const auto& [k, v] : c.metrics) m[k] = num(v);
  j["metrics"] = m;
  j["notes"] = c.notes;
  Json w = Json::array();
  for (const auto& x : c.witnesses) {
    Json p = Json::array();
    for (double v : x.point) p.push_back(num(v));
    w.push_back(Json{{"point", p}, {"slack", num(x.slack)}, {"note", x.note}});
  }
  j["witnesses"] = w;
  return j;
}

std::vector<double> doubles_of(const Json& j) {
  std::vector<double> out;
  for (const auto& x : j) out.push_back(num_of(x));
  return out;
}

CheckResult check_of(const Json& j) {
  CheckResult c;
  c.name = j.at("name").get<std::string>();
  c.pass = j.at("pass").get<bool>();
  c.skipped = j.at("skipped").get<bool>();
  c.count = j.at("count").get<std::size_t>();
  c.failures = j.at("failures").get<std::size_t>();
  c.worst_slack = num_of(j.at("worst_slack"));
  for (const auto& [k, v] : j.at("metrics").items()) c.metrics[k] = num_of(v);
  c.notes = j.at("notes").get<std::vector<std::string>>();
  for (const auto& w : j.at("witnesses"))
    c.witnesses.push_back(Witness{doubles_of(w.at("point")), num_of(w.at("slack")), w.at("note").get<std::string>()});
  return c;
}

}  // namespace

Json to_json(const QVector& v) {
  Json a = Json::array();
  for (std::size_t i = 0; i < v.size(); ++i) a.push_back(to_string(v[i]));
  return a;
}

Json to_json(const SymmetricPairDatum& d) {
  Json j;
  Json roots = Json::array();
  for (const auto& r : d.roots()) roots.push_back(to_json(r));
  j["roots"] = roots;
  j["gram"] = qmatrix_json(d.gram());
  j["sigma"] = qmatrix_json(d.sigma_on_a());
  Json m = Json::array();
  for (const auto& x : d.mult_table()) {
    Json e{{"dim", x.dim}};
    if (x.plus) e["plus"] = *x.plus;
    if (x.minus) e["minus"] = *x.minus;
    m.push_back(e);
  }
  j["multiplicities"] = m;
  return j;
}

SymmetricPairDatum datum_from_json(const Json& j) {
  for (const char* k : {"roots", "gram", "sigma", "multiplicities"})
    if (!j.contains(k)) bad(std::string("datum lacks field ") + k);
  std::vector<RootVector> roots;
  for (const auto& r : j.at("roots")) roots.push_back(qvector_of(r));
  std::vector<Multiplicity> mult;
  for (const auto& m : j.at("multiplicities")) {
    Multiplicity x;
    if (m.is_number_integer()) {
      x.dim = m.get<int>();
    } else {
      x.dim = m.at("dim").get<int>();
      if (m.contains("plus")) x.plus = m.at("plus").get<int>();
      if (m.contains("minus")) x.minus = m.at("minus").get<int>();
    }
    mult.push_back(x);
  }
  return SymmetricPairDatum::build(std::move(roots), qmatrix_of(j.at("gram")), qmatrix_of(j.at("sigma")), std::move(mult));
}

Json to_json(const PolyhedralSet& s) {
  Json j;
  j["dim"] = s.dim();
  Json v = Json::array(), g = Json::array(), eq = Json::array(), in = Json::array();
  for (const auto& x : s.vertices()) v.push_back(to_json(x));
  for (const auto& x : s.cone().generators) g.push_back(to_json(x));
  for (const auto& x : s.hrep().equalities) eq.push_back(Json{{"a", to_json(x.a)}, {"b", to_string(x.b)}});
  for (const auto& x : s.hrep().inequalities) in.push_back(Json{{"a", to_json(x.a)}, {"b", to_string(x.b)}});
  j["vertices"] = v;
  j["generators"] = g;
  j["equalities"] = eq;
  j["inequalities"] = in;
  return j;
}

Json to_json(const PositiveSystem& P) {
  return Json{{"chamber", to_json(P.chamber_vector())},
              {"positive", index_list(P.positive())},
              {"sigma_part", index_list(P.sigma_part())},
              {"sigmatheta_part", index_list(P.sigmatheta_part())},
              {"h_extreme", is_h_extreme(P)},
              {"q_extreme", is_q_extreme(P)}};
}

Json to_json(const ExtremizeResult& r) {
  Json chain = Json::array();
  for (const auto& P : r.chain) chain.push_back(to_json(P));
  return Json{{"result", to_json(r.result)},
              {"trace", index_list(r.trace)},
              {"chain", chain},
              {"postconditions", extremize_postconditions_hold(r.chain.front(), r.result)}};
}

Json to_json(const HessianReport& r) {
  Json j;
  j["w"] = r.w;
  j["w_name"] = r.w_name;
  j["posdef_predicted"] = r.prediction.posdef;
  j["condition_a"] = r.prediction.condition_a;
  j["condition_b"] = r.prediction.condition_b;
  j["posdef_numeric"] = r.posdef_numeric;
  j["signature"] = signature_json(r.signature);
  j["analytic_signature"] = signature_json(r.analytic_signature);
  j["kernel_dim"] = r.kernel_dim;
  j["predicted_kernel_dim"] = r.prediction.kernel_dim;
  j["transversal_dim"] = r.prediction.transversal_dim;
  j["max_rel_error"] = num(r.max_rel_error);
  j["offdiag_numeric"] = num(r.offdiag_numeric);
  j["offdiag_analytic"] = num(r.offdiag_analytic);
  Json orbits = Json::array();
  for (const auto& o : r.prediction.orbits) {
    Json e;
    e["root"] = o.root;
    e["orbit"] = index_list(o.orbit);
    e["case"] = case_tag(o.kind);
    e["alpha_X"] = to_string(o.alpha_X);
    e["alpha_w_inv_log_a"] = to_string(o.alpha_wlog);
    e["formula"] = o.formula;
    Json ev = Json::array();
    for (double x : o.eigenvalues) ev.push_back(num(x));
    e["eigenvalues"] = ev;
    e["posdef"] = o.posdef;
    orbits.push_back(e);
  }
  j["orbits"] = orbits;
  Json ae = Json::array();
  for (double x : r.analytic_eigenvalues) ae.push_back(num(x));
  j["analytic_eigenvalues"] = ae;
  j["analytic_form"] = mat_json(r.analytic_form);
  j["numeric_form"] = mat_json(r.numeric_form);
  return j;
}

Json to_json(const Report& r) {
  if (r.empty()) return Json::object();
  Json j;
  j["preset"] = r.preset;
  j["seed"] = r.seed;
  j["pass"] = r.pass();
  j["a_log"] = r.a_log;
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back(check_json(c));
  j["checks"] = checks;
  j["omega"] = Json{{"vertices", r.omega_vertices}, {"generators", r.omega_generators}};
  j["aq_basis"] = r.aq_basis;
  j["sample_count"] = r.samples.size();
  // compact rows: radius index, slack, a-coordinates
  Json s = Json::array();
  for (const auto& x : r.samples) {
    Json row{x.radius_index, num(x.slack)};
    for (double v : x.y) row.push_back(num(v));
    s.push_back(row);
  }
  j["samples"] = s;
  if (r.runtime) j["runtime_s"] = *r.runtime;
  return j;
}

Report report_from_json(const Json& j) {
  Report r;
  if (!j.is_object()) bad("report must be a JSON object");
  if (j.empty()) return r;
  try {
    r.preset = j.at("preset").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.a_log = doubles_of(j.at("a_log"));
    for (const auto& c : j.at("checks")) r.checks.push_back(check_of(c));
    for (const auto& v : j.at("omega").at("vertices")) r.omega_vertices.push_back(doubles_of(v));
    for (const auto& v : j.at("omega").at("generators")) r.omega_generators.push_back(doubles_of(v));
    for (const auto& v : j.at("aq_basis")) r.aq_basis.push_back(doubles_of(v));
    const Json rows = j.contains("samples") ? j.at("samples") : Json::array();
    for (const auto& row : rows) {
      SampleRecord s;
      s.radius_index = row.at(0).get<std::size_t>();
      s.slack = num_of(row.at(1));
      for (std::size_t k = 2; k < row.size(); ++k) s.y.push_back(num_of(row[k]));
      r.samples.push_back(std::move(s));
    }
    if (j.contains("runtime_s")) r.runtime = j.at("runtime_s").get<double>();
  } catch (const nlohmann::json::exception& e) {
    bad(std::string("malformed report: ") + e.what());
  }
  return r;
}

VerificationConfig config_from_json(const Json& j, VerificationConfig c) {
  if (!j.is_object()) bad("config must be a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "preset") c.preset = v.get<std::string>();
      else if (key == "chamber") c.chamber = qvector_of(v);
      else if (key == "a_log" || key == "a-log") c.a_log = qvector_of(v);
      else if (key == "samples") c.samples = v.get<std::size_t>();
      else if (key == "radius" || key == "radii") c.radii = v.is_array() ? v.get<std::vector<double>>() : std::vector<double>{v.get<double>()};
      else if (key == "tol") c.tol = v.get<double>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "checks") {
        c.checks.clear();
        for (const auto& x : v) c.checks.insert(parse_check(x.get<std::string>()));
      } else if (key == "max_witnesses") c.max_witnesses = v.get<std::size_t>();
      else if (key == "vertex_bound") c.vertex_bound = v.get<double>();
      else if (key == "angle_bound") c.angle_bound = v.get<double>();
      else if (key == "hessian_x") c.hessian_X = v.get<std::size_t>();
      else if (key == "pattern_x") c.pattern_X = v.get<std::size_t>();
      else if (key == "timing") c.timing = v.get<bool>();
      else if (key == "sampling") {
        c.sampling.std_k = v.value("std_k", c.sampling.std_k);
        c.sampling.std_p = v.value("std_p", c.sampling.std_p);
        std::string mode = v.value("mode", std::string("exponential"));
        if (mode == "exponential") c.sampling.mode = SamplingMode::Exponential;
        else if (mode == "cartan") c.sampling.mode = SamplingMode::Cartan;
        else bad("unknown sampling mode " + mode);
      } else if (key == "out" || key == "format" || key == "datum" || key == "x") {
        // consumed by the CLI
      } else {
        bad("unknown config key " + key);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    bad(std::string("malformed config: ") + e.what());
  }
  return c;
}

Json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::IoError, "cannot open " + path);
  try {
    return Json::parse(f);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, path + ": " + e.what());
  }
}

}  // namespace symconv
