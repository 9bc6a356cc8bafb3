#include "asymptopt/json_io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace asymptopt {

namespace {

void dump_impl(const Json& j, std::string& out, int indent, int depth) {
  const std::string pad(static_cast<size_t>(indent) * depth, ' ');
  const std::string pad_in(static_cast<size_t>(indent) * (depth + 1), ' ');
  switch (j.type()) {
    case Json::value_t::null:
      out += "null";
      break;
    case Json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      break;
    case Json::value_t::number_integer:
      out += std::to_string(j.get<long long>());
      break;
    case Json::value_t::number_unsigned:
      out += std::to_string(j.get<unsigned long long>());
      break;
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (std::isfinite(v))
        out += format_double(v);
      else
        out += "null";  // callers route non-finite values via json_number
      break;
    }
    case Json::value_t::string:
      out += Json(j.get<std::string>()).dump();
      break;
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        break;
      }
      out += "[\n";
      bool first = true;
      for (const auto& el : j) {
        if (!first) out += ",\n";
        out += pad_in;
        dump_impl(el, out, indent, depth + 1);
        first = false;
      }
      out += "\n" + pad + "]";
      break;
    }
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        break;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        out += pad_in + Json(it.key()).dump() + ": ";
        dump_impl(it.value(), out, indent, depth + 1);
        first = false;
      }
      out += "\n" + pad + "}";
      break;
    }
    default:
      out += "null";
      break;
  }
}

void require_keys(const Json& j, const std::string& where,
                  const std::set<std::string>& allowed) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw ParseError("unknown key \"" + it.key() + "\" in " + where);
}

double number_at(const Json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ParseError("missing \"" + key + "\" in " + where);
  if (!j[key].is_number()) throw ParseError("\"" + key + "\" in " + where + " must be a number");
  return j[key].get<double>();
}

int int_at(const Json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ParseError("missing \"" + key + "\" in " + where);
  if (!j[key].is_number_integer() && !j[key].is_number_unsigned())
    throw ParseError("\"" + key + "\" in " + where + " must be an integer");
  return j[key].get<int>();
}

Matrix matrix_from_json(const Json& j, const std::string& where, int expected_cols) {
  if (!j.is_array()) throw ParseError(where + " must be an array of rows");
  const int rows = static_cast<int>(j.size());
  Matrix M(rows, expected_cols);
  for (int r = 0; r < rows; ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != expected_cols)
      throw ParseError("row " + std::to_string(r) + " of " + where + " must have length " +
                       std::to_string(expected_cols));
    for (int c = 0; c < expected_cols; ++c) {
      if (!j[r][c].is_number())
        throw ParseError(where + " entries must be numbers");
      M(r, c) = j[r][c].get<double>();
    }
  }
  return M;
}

Vector vector_from_json(const Json& j, const std::string& where, int expected_len) {
  if (!j.is_array() || static_cast<int>(j.size()) != expected_len)
    throw ParseError(where + " must be an array of length " + std::to_string(expected_len));
  Vector v(expected_len);
  for (int i = 0; i < expected_len; ++i) {
    if (!j[i].is_number()) throw ParseError(where + " entries must be numbers");
    v[i] = j[i].get<double>();
  }
  return v;
}

Json vector_to_json(const Vector& v) {
  Json arr = Json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(json_number(v[i]));
  return arr;
}

Json point_list_to_json(const std::vector<Vector>& pts) {
  Json arr = Json::array();
  for (const Vector& p : pts) arr.push_back(vector_to_json(p));
  return arr;
}

Polyhedron polyhedron_from_json(const Json& j, int n, const std::string& where) {
  require_keys(j, where, {"A", "b", "E", "c"});
  Matrix A(0, n), E(0, n);
  Vector b(0), c(0);
  if (j.contains("A")) A = matrix_from_json(j["A"], where + ".A", n);
  if (j.contains("E")) E = matrix_from_json(j["E"], where + ".E", n);
  if (j.contains("b"))
    b = vector_from_json(j["b"], where + ".b", static_cast<int>(A.rows()));
  else if (A.rows() > 0)
    throw ParseError("missing \"b\" for a nonempty A block in " + where);
  if (j.contains("c"))
    c = vector_from_json(j["c"], where + ".c", static_cast<int>(E.rows()));
  else if (E.rows() > 0)
    throw ParseError("missing \"c\" for a nonempty E block in " + where);
  try {
    return Polyhedron(std::move(A), std::move(b), std::move(E), std::move(c));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string(e.what()) + " in " + where);
  }
}

PolyhedralCone cone_from_json(const Json& j, int n, const std::string& where) {
  require_keys(j, where, {"A", "E"});
  Matrix A(0, n), E(0, n);
  if (j.contains("A")) A = matrix_from_json(j["A"], where + ".A", n);
  if (j.contains("E")) E = matrix_from_json(j["E"], where + ".E", n);
  try {
    return PolyhedralCone(std::move(A), std::move(E));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string(e.what()) + " in " + where);
  }
}

}  // namespace

std::string dump_json(const Json& j, int indent) {
  std::string out;
  dump_impl(j, out, indent, 0);
  out += "\n";
  return out;
}

Json json_number(double v) {
  if (std::isfinite(v)) return Json(v);
  if (std::isnan(v)) return Json("nan");
  return Json(v > 0 ? "inf" : "-inf");
}

Json polynomial_to_json(const Polynomial& p) {
  Json terms = Json::array();
  for (const auto& [e, c] : p.terms()) {
    Json t;
    t["exponents"] = e;
    t["coeff"] = json_number(c);
    terms.push_back(std::move(t));
  }
  Json j;
  j["n"] = p.n();
  j["terms"] = std::move(terms);
  return j;
}

Polynomial polynomial_from_json(const Json& j, int expected_n) {
  const std::string where = "polynomial";
  require_keys(j, where, {"n", "terms"});
  const int n = int_at(j, "n", where);
  if (n < 1) throw ParseError("polynomial variable count must be >= 1");
  if (expected_n > 0 && n != expected_n)
    throw ParseError("polynomial \"n\" disagrees with the problem dimension");
  if (!j.contains("terms") || !j["terms"].is_array())
    throw ParseError("missing \"terms\" array in " + where);
  Polynomial p = Polynomial::zero(n);
  std::set<Exponents> seen;
  for (const auto& t : j["terms"]) {
    require_keys(t, where + ".terms[]", {"exponents", "coeff"});
    if (!t.contains("exponents") || !t["exponents"].is_array() ||
        static_cast<int>(t["exponents"].size()) != n)
      throw ParseError("term exponents must be an array of length " + std::to_string(n));
    Exponents e(n);
    for (int i = 0; i < n; ++i) {
      if (!t["exponents"][i].is_number_integer() && !t["exponents"][i].is_number_unsigned())
        throw ParseError("exponents must be non-negative integers");
      e[i] = t["exponents"][i].get<int>();
      if (e[i] < 0) throw ParseError("exponents must be non-negative integers");
    }
    if (!seen.insert(e).second) throw ParseError("duplicate exponent vector in " + where);
    const double coeff = number_at(t, "coeff", where + ".terms[]");
    p = p + Polynomial::term(n, e, coeff);
  }
  return p;
}

ProblemFile parse_problem_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  const std::string where = "problem";
  require_keys(j, where,
               {"n", "objective", "ambient_degree", "constraints", "asymptotic_cone_override",
                "convexity_assertion", "seed", "tolerances"});
  ProblemFile pf;
  pf.n = int_at(j, "n", where);
  if (pf.n < 1) throw ParseError("\"n\" must be >= 1");
  pf.ambient_degree = int_at(j, "ambient_degree", where);
  if (pf.ambient_degree < 1) throw ParseError("\"ambient_degree\" must be >= 1");
  if (!j.contains("objective")) throw ParseError("missing \"objective\"");
  pf.objective = polynomial_from_json(j["objective"], pf.n);
  if (pf.objective.degree() < 1)
    throw ParseError("the objective must have degree >= 1 (zero polynomial rejected)");
  if (pf.objective.degree() > pf.ambient_degree)
    throw ParseError("objective degree exceeds \"ambient_degree\"");

  if (j.contains("constraints"))
    pf.constraints = polyhedron_from_json(j["constraints"], pf.n, "constraints");
  else
    pf.constraints = Polyhedron::free_space(pf.n);
  if (pf.constraints.is_empty()) throw ParseError("empty constraint set");

  if (j.contains("asymptotic_cone_override"))
    pf.cone_override =
        cone_from_json(j["asymptotic_cone_override"], pf.n, "asymptotic_cone_override");

  if (j.contains("convexity_assertion")) {
    const std::string a = j["convexity_assertion"].is_string()
                              ? j["convexity_assertion"].get<std::string>()
                              : std::string();
    if (a == "none")
      pf.assertion = ConvexityAssertion::kNone;
    else if (a == "pseudoconvex")
      pf.assertion = ConvexityAssertion::kPseudoconvex;
    else if (a == "convex")
      pf.assertion = ConvexityAssertion::kConvex;
    else
      throw ParseError("\"convexity_assertion\" must be none, pseudoconvex or convex");
  }

  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer() && !j["seed"].is_number_unsigned())
      throw ParseError("\"seed\" must be an integer");
    pf.seed = j["seed"].get<std::uint64_t>();
  }

  if (j.contains("tolerances")) {
    const Json& t = j["tolerances"];
    require_keys(t, "tolerances",
                 {"tol_mu", "tol_feas", "tol_proj", "tol_opt", "strict_tol", "isolation_tol",
                  "dedupe_witness", "dedupe_point"});
    auto maybe = [&](const char* key, double& slot) {
      if (t.contains(key)) {
        const double v = number_at(t, key, "tolerances");
        if (!(v > 0)) throw ParseError(std::string("\"") + key + "\" must be positive");
        slot = v;
      }
    };
    maybe("tol_mu", pf.tol.tol_mu);
    maybe("tol_feas", pf.tol.tol_feas);
    maybe("tol_proj", pf.tol.tol_proj);
    maybe("tol_opt", pf.tol.tol_opt);
    maybe("strict_tol", pf.tol.strict_tol);
    maybe("isolation_tol", pf.tol.isolation_tol);
    maybe("dedupe_witness", pf.tol.dedupe_witness);
    maybe("dedupe_point", pf.tol.dedupe_point);
  }
  return pf;
}

ProblemFile parse_problem_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open problem file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_problem_text(ss.str());
}

Json tolerances_to_json(const Tolerances& tol) {
  Json j;
  j["tol_mu"] = json_number(tol.tol_mu);
  j["tol_feas"] = json_number(tol.tol_feas);
  j["tol_proj"] = json_number(tol.tol_proj);
  j["tol_opt"] = json_number(tol.tol_opt);
  j["strict_tol"] = json_number(tol.strict_tol);
  j["isolation_tol"] = json_number(tol.isolation_tol);
  j["dedupe_witness"] = json_number(tol.dedupe_witness);
  j["dedupe_point"] = json_number(tol.dedupe_point);
  return j;
}

Json verdict_to_json(const RegularityVerdict& verdict) {
  Json j;
  j["status"] = to_string(verdict.status);
  j["mu"] = json_number(verdict.mu);
  j["witnesses"] = point_list_to_json(verdict.witnesses);
  j["tol"] = json_number(verdict.tol);
  return j;
}

Json solution_set_to_json(const AsymptoticSolutionSet& set) {
  Json j;
  switch (set.kind) {
    case AsymptoticSolutionSet::Kind::kOrigin:
      j["kind"] = "origin";
      break;
    case AsymptoticSolutionSet::Kind::kRays:
      j["kind"] = "rays";
      break;
    case AsymptoticSolutionSet::Kind::kEmpty:
      j["kind"] = "empty";
      break;
  }
  j["rays"] = point_list_to_json(set.rays);
  return j;
}

Json solve_report_to_json(const SolveReport& report) {
  Json j;
  j["status"] = to_string(report.status);
  j["value"] = json_number(report.value);
  j["minimizers"] = point_list_to_json(report.minimizers);
  j["kkt_residual"] = json_number(report.kkt_residual);
  j["iterations"] = report.iterations;
  Json trace = Json::array();
  for (double r : report.box_trace) trace.push_back(json_number(r));
  j["box_trace"] = std::move(trace);
  j["heuristic"] = report.heuristic;
  j["verdict"] = verdict_to_json(report.verdict);
  if (report.certificate) {
    Json c;
    c["ray"] = vector_to_json(report.certificate->ray);
    c["anchor"] = vector_to_json(report.certificate->anchor);
    c["t0"] = json_number(report.certificate->t0);
    Json table = Json::array();
    for (const auto& [t, v] : report.certificate->table) {
      Json row;
      row["t"] = json_number(t);
      row["value"] = json_number(v);
      table.push_back(std::move(row));
    }
    c["table"] = std::move(table);
    j["certificate"] = std::move(c);
  } else {
    j["certificate"] = nullptr;
  }
  return j;
}

Json eaves_report_to_json(const EavesReport& report, const ConvexityProbeResult& probe,
                          ConvexityAssertion assertion) {
  Json j;
  j["condition_a_holds"] = report.condition_a_holds;
  Json rays = Json::array();
  for (const EavesRayRecord& r : report.records) {
    Json rec;
    rec["v"] = vector_to_json(r.v);
    rec["found_x"] = r.found_x ? vector_to_json(*r.found_x) : Json(nullptr);
    rec["inner_product"] = json_number(r.inner_product);
    rec["met"] = r.met;
    rec["undetermined"] = r.undetermined;
    rays.push_back(std::move(rec));
  }
  j["rays"] = std::move(rays);
  switch (assertion) {
    case ConvexityAssertion::kNone: j["assertion"] = "none"; break;
    case ConvexityAssertion::kPseudoconvex: j["assertion"] = "pseudoconvex"; break;
    case ConvexityAssertion::kConvex: j["assertion"] = "convex"; break;
  }
  Json pj;
  pj["psd_fraction"] = json_number(probe.psd_fraction);
  pj["worst_eigenvalue"] = json_number(probe.worst_eigenvalue);
  pj["samples"] = probe.samples;
  pj["counterexample"] =
      probe.counterexample ? vector_to_json(*probe.counterexample) : Json(nullptr);
  j["convexity_probe"] = std::move(pj);
  j["conclusion"] = report.conclusion;
  return j;
}

Json stability_report_to_json(const StabilityReport& report) {
  Json j;
  j["H_hat"] = report.H_hat ? json_number(*report.H_hat) : Json(nullptr);
  j["ell_hat"] = report.ell_hat ? json_number(*report.ell_hat) : Json(nullptr);
  j["L_hat"] = json_number(report.L_hat);
  j["usable_scales"] = report.usable_scales;
  j["insufficient_data"] = report.insufficient_data;
  j["anomalous_exponent"] = report.anomalous_exponent;
  j["caveat"] = report.caveat;
  Json cells = Json::array();
  for (const StabilityCell& c : report.cells) {
    Json cj;
    cj["direction_id"] = c.direction_id;
    cj["epsilon"] = json_number(c.epsilon);
    cj["value_gap"] = json_number(c.value_gap);
    cj["excess"] = json_number(c.excess);
    cj["status"] = to_string(c.status);
    cells.push_back(std::move(cj));
  }
  j["cells"] = std::move(cells);
  return j;
}

Json lipschitz_result_to_json(const LipschitzResult& result) {
  Json j;
  j["L_hat"] = json_number(result.L_hat);
  j["violations"] = result.violations;
  Json cells = Json::array();
  for (const StabilityCell& c : result.cells) {
    Json cj;
    cj["direction_id"] = c.direction_id;
    cj["epsilon"] = json_number(c.epsilon);
    cj["value_gap"] = json_number(c.value_gap);
    cj["gap_over_eps"] = json_number(c.epsilon > 0 ? c.value_gap / c.epsilon : 0.0);
    cj["status"] = to_string(c.status);
    cells.push_back(std::move(cj));
  }
  j["cells"] = std::move(cells);
  Json gk = Json::array();
  for (const GkDetection& g : result.gk) {
    Json gj;
    gj["k"] = g.k;
    gj["unbounded_detected"] = g.unbounded_detected;
    gk.push_back(std::move(gj));
  }
  j["gk_family"] = std::move(gk);
  return j;
}

Json kkt_enum_to_json(const KktEnumResult& result) {
  Json j;
  Json pts = Json::array();
  for (const KKTPoint& p : result.points) {
    Json pj;
    pj["x"] = vector_to_json(p.x);
    pj["alpha"] = p.alpha;
    pj["lambda"] = vector_to_json(p.lambda);
    pj["residual"] = json_number(p.residual);
    pj["min_jacobian_sv"] = json_number(p.min_jacobian_sv);
    pj["is_origin"] = p.is_origin;
    pts.push_back(std::move(pj));
  }
  j["points"] = std::move(pts);
  Json s;
  s["faces"] = result.stats.faces;
  s["starts"] = result.stats.starts;
  s["converged"] = result.stats.converged;
  s["raw_accepted"] = result.stats.raw_accepted;
  s["deduped"] = result.stats.deduped;
  s["full_rank_A"] = result.stats.full_rank_A;
  j["stats"] = std::move(s);
  return j;
}

Json genericity_to_json(const GenericityResult& result) {
  Json j;
  j["regular_fraction"] = json_number(result.regular_fraction);
  j["finite_kkt_fraction"] = json_number(result.finite_kkt_fraction);
  j["trials"] = static_cast<int>(result.trials.size());
  return j;
}

std::string stability_cells_csv(const std::vector<StabilityCell>& cells) {
  std::string out = "direction_id,epsilon,value_gap,excess,status\n";
  for (const StabilityCell& c : cells) {
    out += std::to_string(c.direction_id) + "," + format_double(c.epsilon) + "," +
           format_double(c.value_gap) + "," + format_double(c.excess) + "," +
           to_string(c.status) + "\n";
  }
  return out;
}

std::string genericity_csv(const GenericityResult& result) {
  std::string out = "trial,regular,finite,mu\n";
  for (const GenericityTrial& t : result.trials) {
    out += std::to_string(t.index) + "," + (t.regular ? "1" : "0") + "," +
           (t.finite ? "1" : "0") + "," + format_double(t.mu) + "\n";
  }
  return out;
}

}  // namespace asymptopt
