#ifndef ASYMPTOPT_JSON_IO_HPP
#define ASYMPTOPT_JSON_IO_HPP

#include <json.hpp>
#include <optional>
#include <string>

#include "asymptopt/kkt.hpp"
#include "asymptopt/regularity.hpp"
#include "asymptopt/solver.hpp"
#include "asymptopt/stability.hpp"

namespace asymptopt {

// Insertion-ordered documents so reports serialize field-for-field.
using Json = nlohmann::ordered_json;

// Fixed-format serialization: every float rendered with 17 significant
// digits, so identical runs give identical bytes.
std::string dump_json(const Json& j, int indent = 2);

// Doubles enter documents through this helper; non-finite values become the
// strings "inf" / "-inf" / "nan" (JSON has no number form for them).
Json json_number(double v);

struct ProblemFile {
  int n = 0;
  int ambient_degree = 0;
  Polynomial objective{1};
  Polyhedron constraints = Polyhedron::free_space(1);
  std::optional<PolyhedralCone> cone_override;
  ConvexityAssertion assertion = ConvexityAssertion::kNone;
  std::uint64_t seed = 0;
  Tolerances tol;
};

// Strict parse: unknown keys are rejected with a message naming the key,
// dimensions are cross-checked, and the constraint set must be nonempty.
ProblemFile parse_problem_text(const std::string& text);
ProblemFile parse_problem_file(const std::string& path);

Json polynomial_to_json(const Polynomial& p);
Polynomial polynomial_from_json(const Json& j, int expected_n = -1);

Json tolerances_to_json(const Tolerances& tol);

Json verdict_to_json(const RegularityVerdict& verdict);
Json solution_set_to_json(const AsymptoticSolutionSet& set);
Json solve_report_to_json(const SolveReport& report);
Json eaves_report_to_json(const EavesReport& report, const ConvexityProbeResult& probe,
                          ConvexityAssertion assertion);
Json stability_report_to_json(const StabilityReport& report);
Json lipschitz_result_to_json(const LipschitzResult& result);
Json kkt_enum_to_json(const KktEnumResult& result);
Json genericity_to_json(const GenericityResult& result);

// CSV renderings for the sweep commands (17-significant-digit floats).
std::string stability_cells_csv(const std::vector<StabilityCell>& cells);
std::string genericity_csv(const GenericityResult& result);

}  // namespace asymptopt

#endif
