#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "asymptopt/json_io.hpp"

using namespace asymptopt;

namespace {

struct CommonArgs {
  std::string problem_path;
  std::optional<double> tol_mu;
  std::optional<double> tol_feas;
  std::optional<int> starts;
  std::optional<double> box_init;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::string out_dir;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_problem = true) {
  if (needs_problem)
    cmd->add_option("problem", args.problem_path, "problem JSON file")->required();
  cmd->add_option("--tol-mu", args.tol_mu, "regularity tolerance band");
  cmd->add_option("--tol-feas", args.tol_feas, "feasibility tolerance");
  cmd->add_option("--starts", args.starts, "multistart count / KKT start factor");
  cmd->add_option("--box-init", args.box_init, "initial search box radius");
  cmd->add_option("--seed", args.seed, "seed override");
  cmd->add_option("--trials", args.trials, "Monte-Carlo trial count");
  cmd->add_option("--out", args.out_dir, "directory for content-addressed report files");
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open problem file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Resolved {
  ProblemFile pf;
  std::string raw;  // original bytes, for content addressing
};

Resolved load_problem(const CommonArgs& args) {
  Resolved r;
  r.raw = slurp(args.problem_path);
  r.pf = parse_problem_text(r.raw);
  if (args.tol_mu) r.pf.tol.tol_mu = *args.tol_mu;
  if (args.tol_feas) r.pf.tol.tol_feas = *args.tol_feas;
  if (args.seed) r.pf.seed = *args.seed;
  return r;
}

SolveOptions make_solve_options(const ProblemFile& pf, const CommonArgs& args) {
  SolveOptions opts;
  opts.ambient_degree = pf.ambient_degree;
  opts.cone_override = pf.cone_override;
  opts.seed = pf.seed;
  opts.tol = pf.tol;
  if (args.starts) opts.starts = *args.starts;
  if (args.box_init) opts.box_init = *args.box_init;
  return opts;
}

Json report_shell(const std::string& command, std::uint64_t seed, const Tolerances& tol) {
  Json j;
  j["command"] = command;
  j["seed"] = seed;
  j["tolerances"] = tolerances_to_json(tol);
  return j;
}

// Reports are content-addressed by the input bytes plus the resolved
// command line, so distinct runs never collide.
void emit(const Json& report, const std::string& command, const std::string& content_key,
          const std::string& out_dir, const std::string& csv = "") {
  const std::string text = dump_json(report);
  std::fputs(text.c_str(), stdout);
  if (out_dir.empty()) return;
  std::filesystem::create_directories(out_dir);
  const std::string tag = to_hex(fnv1a64(content_key));
  const std::filesystem::path base = std::filesystem::path(out_dir) / (command + "-" + tag);
  std::ofstream(base.string() + ".json", std::ios::binary) << text;
  if (!csv.empty()) std::ofstream(base.string() + ".csv", std::ios::binary) << csv;
}

std::string content_key(const std::string& command, const Resolved& r,
                        const CommonArgs& args) {
  std::string key = command + "\n" + r.raw + "\nseed=" + std::to_string(r.pf.seed);
  if (args.starts) key += "\nstarts=" + std::to_string(*args.starts);
  if (args.box_init) key += "\nbox=" + format_double(*args.box_init);
  if (args.trials) key += "\ntrials=" + std::to_string(*args.trials);
  return key;
}

int run_analyze(const CommonArgs& args) {
  const Resolved r = load_problem(args);
  MinOnSphereOptions sphere;
  sphere.seed = r.pf.seed ^ 0x5eedu;
  const AsymptoticProblem ap =
      r.pf.cone_override
          ? make_asymptotic_problem(*r.pf.cone_override, r.pf.objective, r.pf.ambient_degree)
          : make_asymptotic_problem(r.pf.constraints, r.pf.objective, r.pf.ambient_degree);
  const RegularityVerdict verdict = classify(ap, r.pf.tol.tol_mu, sphere);

  Json report = report_shell("analyze", r.pf.seed, r.pf.tol);
  report["verdict"] = verdict_to_json(verdict);
  if (verdict.status != RegStatus::kIndeterminate)
    report["asymptotic_solution_set"] = solution_set_to_json(asymptotic_solution_set(ap, verdict));
  else
    report["asymptotic_solution_set"] = nullptr;
  emit(report, "analyze", content_key("analyze", r, args), args.out_dir);
  return 0;
}

int run_solve(const CommonArgs& args) {
  const Resolved r = load_problem(args);
  const SolveReport sr = solve(r.pf.constraints, r.pf.objective, make_solve_options(r.pf, args));
  Json report = report_shell("solve", r.pf.seed, r.pf.tol);
  report["report"] = solve_report_to_json(sr);
  emit(report, "solve", content_key("solve", r, args), args.out_dir);
  if (sr.status == SolveStatus::kUnboundedBelow) return 2;
  if (sr.status == SolveStatus::kInconclusive) return 3;
  return 0;
}

int run_eaves(const CommonArgs& args) {
  const Resolved r = load_problem(args);
  MinOnSphereOptions sphere;
  sphere.seed = r.pf.seed ^ 0x5eedu;
  const AsymptoticProblem ap =
      r.pf.cone_override
          ? make_asymptotic_problem(*r.pf.cone_override, r.pf.objective, r.pf.ambient_degree)
          : make_asymptotic_problem(r.pf.constraints, r.pf.objective, r.pf.ambient_degree);
  const RegularityVerdict verdict = classify(ap, r.pf.tol.tol_mu, sphere);
  if (verdict.status != RegStatus::kNonRegular) {
    std::cerr << "eaves: the problem is " << to_string(verdict.status)
              << "; the Eaves check applies to NonRegular problems only\n";
    return 1;
  }
  EavesOptions eopts;
  eopts.strict_tol = r.pf.tol.strict_tol;
  eopts.seed = r.pf.seed;
  eopts.assertion = r.pf.assertion;
  if (args.starts) eopts.starts = *args.starts;
  if (args.box_init) eopts.box_init = *args.box_init;
  EavesReport er = eaves_check(r.pf.constraints, r.pf.objective, verdict, eopts);
  const ConvexityProbeResult probe =
      convexity_probe(r.pf.constraints, r.pf.objective, 200, r.pf.seed ^ 0xface);
  if (r.pf.assertion == ConvexityAssertion::kConvex && probe.counterexample)
    er.conclusion =
        "condition (a) " + std::string(er.condition_a_holds ? "holds" : "fails") +
        ", but the convexity assertion is contradicted by a Hessian counterexample; "
        "no existence conclusion is drawn";

  Json report = report_shell("eaves", r.pf.seed, r.pf.tol);
  report["verdict"] = verdict_to_json(verdict);
  report["eaves"] = eaves_report_to_json(er, probe, r.pf.assertion);
  emit(report, "eaves", content_key("eaves", r, args), args.out_dir);
  return 0;
}

struct SweepArgs {
  int directions = 4;
  double scale_first = 0.5;
  double scale_factor = 0.5;
  int scale_count = 9;
};

void add_sweep(CLI::App* cmd, SweepArgs& sweep) {
  cmd->add_option("--directions", sweep.directions, "random perturbation directions");
  cmd->add_option("--scale-first", sweep.scale_first, "largest perturbation scale");
  cmd->add_option("--scale-factor", sweep.scale_factor, "scale shrink factor in (0,1)");
  cmd->add_option("--scale-count", sweep.scale_count, "number of scales");
}

int run_perturb(const CommonArgs& args, const SweepArgs& sweep) {
  const Resolved r = load_problem(args);
  const PerturbationPlan plan = make_perturbation_plan(
      r.pf.objective, r.pf.ambient_degree, sweep.directions,
      geometric_scales(sweep.scale_first, sweep.scale_factor, sweep.scale_count), r.pf.seed);
  const StabilityReport sr =
      holder_experiment(r.pf.constraints, r.pf.objective, plan, make_solve_options(r.pf, args));
  Json report = report_shell("perturb", r.pf.seed, r.pf.tol);
  report["holder"] = stability_report_to_json(sr);
  emit(report, "perturb", content_key("perturb", r, args), args.out_dir,
       stability_cells_csv(sr.cells));
  return 0;
}

int run_value_lipschitz(const CommonArgs& args, const SweepArgs& sweep) {
  const Resolved r = load_problem(args);
  const PerturbationPlan plan = make_perturbation_plan(
      r.pf.objective, r.pf.ambient_degree, sweep.directions,
      geometric_scales(sweep.scale_first, sweep.scale_factor, sweep.scale_count), r.pf.seed);
  const LipschitzResult lr = value_lipschitz_experiment(r.pf.constraints, r.pf.objective, plan,
                                                        make_solve_options(r.pf, args));
  Json report = report_shell("value-lipschitz", r.pf.seed, r.pf.tol);
  report["lipschitz"] = lipschitz_result_to_json(lr);
  emit(report, "value-lipschitz", content_key("value-lipschitz", r, args), args.out_dir,
       stability_cells_csv(lr.cells));
  return 0;
}

int run_kkt_enum(const CommonArgs& args) {
  const Resolved r = load_problem(args);
  const PolyhedralCone cone =
      r.pf.cone_override ? *r.pf.cone_override : recession_cone(r.pf.constraints);
  const Polynomial leading = r.pf.objective.homogeneous_component(r.pf.ambient_degree);
  const HomogeneousForm form = HomogeneousForm::from_polynomial(leading, r.pf.ambient_degree);
  KktEnumOptions kopts;
  kopts.seed = r.pf.seed;
  if (args.starts) kopts.starts_factor = *args.starts;
  const KktEnumResult kr = enumerate_kkt(cone, form, kopts);
  const FinitenessResult fin = finiteness_probe(cone, form, kopts, r.pf.tol.isolation_tol);

  Json report = report_shell("kkt-enum", r.pf.seed, r.pf.tol);
  report["kkt"] = kkt_enum_to_json(kr);
  Json fj;
  fj["finite"] = fin.finite;
  fj["points"] = fin.points;
  fj["min_isolation_sv"] = json_number(fin.min_isolation_sv);
  report["finiteness"] = std::move(fj);
  emit(report, "kkt-enum", content_key("kkt-enum", r, args), args.out_dir);
  return 0;
}

int run_genericity(const CommonArgs& args, bool free_space, int n_flag, int d_flag) {
  Polyhedron K = Polyhedron::free_space(1);
  int d = d_flag;
  std::uint64_t seed = args.seed.value_or(0);
  Tolerances tol;
  std::string key;
  if (!args.problem_path.empty()) {
    const Resolved r = load_problem(args);
    K = r.pf.constraints;
    d = r.pf.ambient_degree;
    seed = r.pf.seed;
    tol = r.pf.tol;
    key = content_key("genericity", r, args);
  } else {
    if (!free_space || n_flag < 1 || d_flag < 1)
      throw ParseError("genericity needs a problem file, or --free with --n and --d");
    K = Polyhedron::free_space(n_flag);
    key = "genericity\nfree n=" + std::to_string(n_flag) + " d=" + std::to_string(d_flag) +
          "\nseed=" + std::to_string(seed) +
          "\ntrials=" + std::to_string(args.trials.value_or(1000));
  }
  if (args.tol_mu) tol.tol_mu = *args.tol_mu;
  KktEnumOptions kopts;
  if (args.starts) kopts.starts_factor = *args.starts;
  const GenericityResult gr = genericity_mc(K, d, args.trials.value_or(1000), seed, kopts);

  Json report = report_shell("genericity", seed, tol);
  report["genericity"] = genericity_to_json(gr);
  emit(report, "genericity", key, args.out_dir, genericity_csv(gr));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"asymptotic regularity analysis for polynomial optimization over polyhedra"};
  app.require_subcommand(1);

  CommonArgs analyze_args, solve_args, eaves_args, perturb_args, lip_args, kkt_args, gen_args;
  SweepArgs perturb_sweep, lip_sweep;
  bool gen_free = false;
  int gen_n = 0, gen_d = 0;

  add_common(app.add_subcommand("analyze", "classify the problem as regular or not"),
             analyze_args);
  add_common(app.add_subcommand("solve", "global minimization driven by the verdict"),
             solve_args);
  add_common(app.add_subcommand("eaves", "Eaves condition (a) check for non-regular problems"),
             eaves_args);
  CLI::App* perturb = app.add_subcommand("perturb", "upper-Hoelder stability experiment");
  add_common(perturb, perturb_args);
  add_sweep(perturb, perturb_sweep);
  CLI::App* lip = app.add_subcommand("value-lipschitz", "optimal-value Lipschitz experiment");
  add_common(lip, lip_args);
  add_sweep(lip, lip_sweep);
  add_common(app.add_subcommand("kkt-enum", "pseudo-face KKT enumeration of the leading form"),
             kkt_args);
  CLI::App* gen = app.add_subcommand("genericity", "Monte-Carlo regularity fractions");
  gen->add_option("problem", gen_args.problem_path, "problem JSON file (optional)");
  gen->add_flag("--free", gen_free, "use K = R^n instead of a problem file");
  gen->add_option("--n", gen_n, "dimension for --free");
  gen->add_option("--d", gen_d, "degree for --free");
  gen->add_option("--tol-mu", gen_args.tol_mu, "regularity tolerance band");
  gen->add_option("--starts", gen_args.starts, "KKT start factor");
  gen->add_option("--seed", gen_args.seed, "seed");
  gen->add_option("--trials", gen_args.trials, "trial count");
  gen->add_option("--out", gen_args.out_dir, "directory for report files");

  try {
    app.parse(argc, argv);
    if (app.got_subcommand("analyze")) return run_analyze(analyze_args);
    if (app.got_subcommand("solve")) return run_solve(solve_args);
    if (app.got_subcommand("eaves")) return run_eaves(eaves_args);
    if (app.got_subcommand("perturb")) return run_perturb(perturb_args, perturb_sweep);
    if (app.got_subcommand("value-lipschitz")) return run_value_lipschitz(lip_args, lip_sweep);
    if (app.got_subcommand("kkt-enum")) return run_kkt_enum(kkt_args);
    if (app.got_subcommand("genericity"))
      return run_genericity(gen_args, gen_free, gen_n, gen_d);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const CapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
  return 1;
}
