#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>

#include <CLI11.hpp>

#include "cssel/errors.hpp"
#include "cssel/experiments.hpp"
#include "cssel/factorization.hpp"
#include "cssel/grothendieck.hpp"
#include "cssel/matcore.hpp"
#include "cssel/pietsch.hpp"
#include "cssel/select.hpp"
#include "matrix_io.hpp"
#include "report.hpp"

namespace cssel::cli {

namespace {

struct RunConfig {
  std::string input;
  std::string format = "auto";
  std::string output;
  std::uint64_t seed = 0;
  int emd_iterations = 5000;
  double rel_tol = 0.05;
  bool standardize_input = false;
  double kt_norm = 15.0;
  double bt_kappa = std::sqrt(3.0);
  std::optional<double> threshold;
  Index oracle_cap = 20;
  int threads = 1;
  std::string step_mode = "adaptive";
  bool early_shortcut = false;
  bool timings = false;
  // Subcommand specific.
  std::optional<double> alpha;
  std::string kind = "inf2";
  double delta = 0.5;
  int trials = 500;
  std::string model = "both";
  bool in_regime = false;
};

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

Json indices(const ColumnSubset& c) {
  Json out = Json::array();
  for (Index j : c.indices()) out.push_back(j);
  return out;
}

Json vector_json(const Vector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json factorization_json(const Factorization& f) {
  return Json{{"alpha", f.alpha},
              {"alpha_effective", f.alpha_effective},
              {"factor_norm", f.factor_norm},
              {"eta", f.eta},
              {"rescaled", f.rescaled},
              {"reconstruction_residual", f.reconstruction_residual},
              {"solver_iterations", f.solver_iterations},
              {"weights", vector_json(f.weights)}};
}

Json outcome_json(const FactorizeOutcome& out) {
  Json j{{"succeeded", out.succeeded()},
         {"eta", out.eta},
         {"eta_lower_bound", out.eta_lower_bound},
         {"solver_iterations", out.solver_iterations},
         {"probe_lower_bound", out.probe.value}};
  j["factorization"] = out.factorization ? factorization_json(*out.factorization) : Json(nullptr);
  return j;
}

Json bracket_json(const NormBracket& br, double constant, double rel_tol) {
  Json j{{"lower", br.alpha_lo},
         {"upper", br.alpha_hi},
         {"ratio", br.ratio()},
         {"constant", constant},
         {"ratio_bound", constant * (1.0 + rel_tol)},
         {"converged", br.converged},
         {"steps", br.steps},
         {"witness", vector_json(br.lower_witness)}};
  j["factorization"] = br.best ? factorization_json(*br.best) : Json(nullptr);
  return j;
}

Json experiment_json(const ExperimentResult& r) {
  return Json{{"check", r.check},
              {"model", to_string(r.model)},
              {"delta", r.delta},
              {"trials", r.trials},
              {"empirical_mean", r.empirical_mean},
              {"std_error", r.std_error},
              {"theoretical_bound", r.theoretical_bound},
              {"applicable", r.applicable},
              {"pass", r.pass}};
}

FactorizeOptions factorize_options(const RunConfig& cfg) {
  FactorizeOptions opts;
  opts.emd_iterations = cfg.emd_iterations;
  opts.step_mode = cfg.step_mode == "fixed" ? StepMode::fixed_horizon : StepMode::adaptive;
  return opts;
}

BracketOptions bracket_options(const RunConfig& cfg) {
  BracketOptions opts;
  opts.rel_tol = cfg.rel_tol;
  opts.factorize = factorize_options(cfg);
  return opts;
}

Json base_config(const std::string& command, const RunConfig& cfg, MatrixFormat format) {
  Json j{{"input", cfg.input},
         {"format", format == MatrixFormat::csv ? "csv" : "matrix-market"},
         {"standardize_input", cfg.standardize_input}};
  if (command == "kt" || command == "bt") {
    j["seed"] = cfg.seed;
    j["emd_iterations"] = cfg.emd_iterations;
    j["step_mode"] = cfg.step_mode;
    j["threads"] = cfg.threads;
    j["early_shortcut"] = cfg.early_shortcut;
    const double kt = command == "kt" && cfg.threshold ? *cfg.threshold : cfg.kt_norm;
    const double bt = command == "bt" && cfg.threshold ? *cfg.threshold : cfg.bt_kappa;
    j["thresholds"] = Json{{"kt_norm", kt}, {"bt_kappa", bt}};
  } else if (command == "pietsch" || command == "grothendieck") {
    j["emd_iterations"] = cfg.emd_iterations;
    j["step_mode"] = cfg.step_mode;
    j["alpha"] = cfg.alpha ? Json(*cfg.alpha) : Json(nullptr);
    j["rel_tol"] = cfg.rel_tol;
  } else if (command == "norm") {
    j["kind"] = cfg.kind;
    j["emd_iterations"] = cfg.emd_iterations;
    j["step_mode"] = cfg.step_mode;
    j["rel_tol"] = cfg.rel_tol;
  } else if (command == "experiment") {
    j["kind"] = cfg.kind;
    j["seed"] = cfg.seed;
    j["delta"] = cfg.delta;
    j["trials"] = cfg.trials;
    j["model"] = cfg.model;
    j["oracle_cap"] = cfg.oracle_cap;
    if (cfg.kind == "inf1") j["in_regime"] = cfg.in_regime;
  } else if (command == "oracle") {
    j["kind"] = cfg.kind;
    j["oracle_cap"] = cfg.oracle_cap;
  }
  return j;
}

Json run_selection(const std::string& command, const Matrix& a, const RunConfig& cfg) {
  SelectConfig sc;
  sc.emd_iterations = cfg.emd_iterations;
  sc.step_mode = cfg.step_mode == "fixed" ? StepMode::fixed_horizon : StepMode::adaptive;
  sc.threads = cfg.threads;
  sc.early_shortcut = cfg.early_shortcut;
  sc.kt_norm = command == "kt" && cfg.threshold ? *cfg.threshold : cfg.kt_norm;
  sc.bt_kappa = command == "bt" && cfg.threshold ? *cfg.threshold : cfg.bt_kappa;
  const bool kt = command == "kt";
  const SelectionReport rep = kt ? kt_select(a, cfg.seed, sc) : bt_select(a, cfg.seed, sc);

  // Re-measure the accepted subset independently of the solver state.
  const Matrix a_tau = column_submatrix(a, rep.tau);
  const double measured = kt ? spectral_norm(a_tau) : condition_number(a_tau);
  const double threshold = kt ? sc.kt_norm : sc.bt_kappa;

  Json rounds = Json::array();
  for (const RoundLog& r : rep.rounds) {
    rounds.push_back(Json{{"s", r.s},
                          {"attempt_budget", r.attempt_budget},
                          {"attempts_used", r.attempts_used},
                          {"accepted", r.accepted},
                          {"candidate_size", r.candidate_size},
                          {"metric", r.metric}});
  }
  Json candidates = Json::array();
  for (const Candidate& c : rep.candidates) {
    candidates.push_back(Json{{"s", c.s},
                              {"attempt", c.attempt},
                              {"sigma", indices(c.sigma)},
                              {"tau", indices(c.tau)},
                              {"alpha", c.alpha},
                              {"alpha_effective", c.alpha_effective},
                              {"factor_norm", c.factor_norm},
                              {"eta", c.eta},
                              {"metric", c.metric},
                              {"accepted", c.accepted}});
  }
  Json j{{"tau", indices(rep.tau)},
         {"tau_size", rep.tau.size()},
         {"threshold", threshold},
         {"within_threshold", measured <= threshold},
         {"attempts", rep.attempts},
         {"rounds", rounds},
         {"candidates", candidates},
         {"stable_rank", rep.stable_rank},
         {"cardinality_ratio", rep.cardinality_ratio},
         {"shortcut", rep.shortcut}};
  j[kt ? "norm_of_tau" : "kappa_of_tau"] = measured;
  return j;
}

Json run_factorization(const std::string& command, const Matrix& m, const RunConfig& cfg) {
  const bool pietsch = command == "pietsch";
  if (cfg.alpha) {
    const FactorizeOutcome out = pietsch ? pietsch_factorize(m, *cfg.alpha, factorize_options(cfg))
                                         : groth_factorize(m, *cfg.alpha, factorize_options(cfg));
    return outcome_json(out);
  }
  const BracketOptions opts = bracket_options(cfg);
  const NormBracket br = pietsch ? pietsch_optimal_alpha(m, opts) : groth_optimal_alpha(m, opts);
  return bracket_json(br, pietsch ? kPietschConstant : kGrothendieckUpper, cfg.rel_tol);
}

Json run_norm(const Matrix& m, const RunConfig& cfg) {
  const BracketOptions opts = bracket_options(cfg);
  const bool inf2 = cfg.kind == "inf2";
  const NormBracket br = inf2 ? pietsch_optimal_alpha(m, opts) : groth_optimal_alpha(m, opts);
  Json j = bracket_json(br, inf2 ? kPietschConstant : kGrothendieckUpper, cfg.rel_tol);
  j["kind"] = cfg.kind;
  return j;
}

Json run_experiment(const Matrix& m, const RunConfig& cfg) {
  ExperimentConfig ec;
  ec.trials = cfg.trials;
  ec.oracle_cap = cfg.oracle_cap;
  const bool want_fixed = cfg.model != "independent";
  const bool want_independent = cfg.model != "fixed";

  Json checks = Json::array();
  Json j{{"kind", cfg.kind}};
  if (cfg.kind == "inf2") {
    const Inf2ReductionReport rep = check_inf2_reduction(m, cfg.delta, cfg.seed, ec);
    if (want_independent) checks.push_back(experiment_json(rep.independent));
    if (want_fixed) {
      checks.push_back(experiment_json(rep.fixed_size));
      checks.push_back(experiment_json(rep.sqrt_s_bound));
    }
  } else {
    const Inf1ReductionReport rep = check_inf1_reduction(m, cfg.delta, cfg.in_regime, cfg.seed, ec);
    if (want_fixed) {
      checks.push_back(experiment_json(rep.fixed_size));
      checks.push_back(experiment_json(rep.poissonization));
    }
    if (want_independent) {
      j["independent_mean"] = rep.independent_mean;
      j["independent_std_error"] = rep.independent_std_error;
      j["bound_shape"] = rep.bound_shape;
      j["fitted_constant"] = rep.fitted_constant;
    }
  }
  bool pass = true;
  for (const Json& c : checks) pass = pass && c["pass"].get<bool>();
  j["checks"] = checks;
  j["pass"] = pass;
  return j;
}

Json run_oracle(const Matrix& m, const RunConfig& cfg) {
  const SignedNorm r = cfg.kind == "inf2" ? norm_inf2_exact(m, cfg.oracle_cap) : norm_inf1_exact(m, cfg.oracle_cap);
  return Json{{"kind", cfg.kind}, {"value", r.value}, {"witness", vector_json(r.witness)}};
}

Json error_json(const std::string& command, const std::string& type, const std::string& message, int code) {
  return Json{{"command", command}, {"error", Json{{"type", type}, {"message", message}}}, {"exit_code", code}};
}

void emit(const Json& j, const RunConfig& cfg, std::ostream& out) {
  if (cfg.output.empty() || cfg.output == "-") {
    out << render_json(j);
  } else {
    write_report(j, cfg.output);
  }
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Column subset selection with certified norm and conditioning bounds", "cssel"};
  app.require_subcommand(1);

  const auto common = [&cfg](CLI::App* sub) {
    sub->add_option("matrix", cfg.input, "Input matrix (CSV or Matrix Market)")->required();
    sub->add_option("--format", cfg.format, "Input format")->check(CLI::IsMember({"auto", "csv", "mm"}));
    sub->add_option("-o,--output", cfg.output, "Write the JSON report here instead of standard output");
    sub->add_flag("--standardize", cfg.standardize_input, "Scale every column to unit norm first");
    sub->add_flag("--timings", cfg.timings, "Include wall-clock timings (breaks byte-identical output)");
  };
  const auto solver = [&cfg](CLI::App* sub) {
    sub->add_option("--iters", cfg.emd_iterations, "Mirror descent iteration budget")->check(CLI::PositiveNumber);
    sub->add_option("--step-mode", cfg.step_mode, "Mirror descent step rule")
        ->check(CLI::IsMember({"adaptive", "fixed"}));
  };
  const auto rel_tol = [&cfg](CLI::App* sub) {
    sub->add_option("--rel-tol", cfg.rel_tol, "Relative tolerance of the alpha bisection")
        ->check(CLI::Range(0.0, 1.0));
  };
  const auto kind = [&cfg](CLI::App* sub) {
    sub->add_option("--kind", cfg.kind, "Norm: inf2 = (inf,2), inf1 = (inf,1)")->check(CLI::IsMember({"inf2", "inf1"}));
  };

  std::vector<CLI::App*> subs;
  for (const char* name : {"kt", "bt"}) {
    CLI::App* sub = app.add_subcommand(name, std::string(name) == "kt" ? "Select columns with ||A_tau|| <= 15"
                                                                       : "Select columns with kappa(A_tau) <= sqrt 3");
    common(sub);
    solver(sub);
    sub->add_option("--seed", cfg.seed, "Random seed");
    sub->add_option("--threads", cfg.threads, "Attempts evaluated concurrently")->check(CLI::PositiveNumber);
    sub->add_option("--threshold", cfg.threshold, "Override the acceptance threshold")->check(CLI::PositiveNumber);
    sub->add_flag("--shortcut", cfg.early_shortcut, "Return all columns when A itself meets the threshold");
    subs.push_back(sub);
  }
  for (const char* name : {"pietsch", "grothendieck"}) {
    CLI::App* sub = app.add_subcommand(
        name, std::string(name) == "pietsch" ? "Pietsch factorization B = T D" : "Grothendieck factorization G = D T D");
    common(sub);
    solver(sub);
    rel_tol(sub);
    sub->add_option("--alpha", cfg.alpha, "Factorize at this alpha instead of bracketing the norm")
        ->check(CLI::PositiveNumber);
    subs.push_back(sub);
  }
  {
    CLI::App* sub = app.add_subcommand("norm", "Certified bracket of ||B||_{inf->2} or ||G||_{inf->1}");
    common(sub);
    solver(sub);
    rel_tol(sub);
    kind(sub);
    subs.push_back(sub);
  }
  {
    CLI::App* sub = app.add_subcommand("experiment", "Monte Carlo check of random-submatrix norm bounds");
    common(sub);
    kind(sub);
    sub->add_option("--seed", cfg.seed, "Random seed");
    sub->add_option("--delta", cfg.delta, "Sampling fraction")->check(CLI::Range(0.0, 1.0));
    sub->add_option("--trials", cfg.trials, "Trials per sampling model")->check(CLI::Range(100, 1000000));
    sub->add_option("--model", cfg.model, "Sampling models to report")
        ->check(CLI::IsMember({"both", "fixed", "independent"}));
    sub->add_option("--oracle-cap", cfg.oracle_cap, "Largest dimension for exact enumeration")
        ->check(CLI::Range(1, 30));
    sub->add_flag("--in-regime", cfg.in_regime, "Declare s within the small-sample regime of the s/9 bound");
    subs.push_back(sub);
  }
  {
    CLI::App* sub = app.add_subcommand("oracle", "Exact norm by sign enumeration");
    common(sub);
    kind(sub);
    sub->add_option("--oracle-cap", cfg.oracle_cap, "Largest dimension for exact enumeration")
        ->check(CLI::Range(1, 30));
    subs.push_back(sub);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream text;
    const int code = app.exit(e, text, text);
    if (code == 0) {
      out << text.str();
      return kExitOk;
    }
    err << text.str();
    return kExitUsage;
  }

  std::string command;
  for (CLI::App* sub : subs) {
    if (sub->parsed()) command = sub->get_name();
  }

  try {
    const MatrixFormat format = cfg.format == "auto" ? format_from_path(cfg.input)
                                : cfg.format == "mm" ? MatrixFormat::matrix_market
                                                     : MatrixFormat::csv;
    const auto load_start = Clock::now();
    Matrix m = load_matrix(cfg.input, format);
    if (cfg.standardize_input) m = standardize(m);
    const double load_ms = elapsed_ms(load_start);

    const auto run_start = Clock::now();
    Json result;
    if (command == "kt" || command == "bt") {
      result = run_selection(command, m, cfg);
    } else if (command == "pietsch" || command == "grothendieck") {
      result = run_factorization(command, m, cfg);
    } else if (command == "norm") {
      result = run_norm(m, cfg);
    } else if (command == "experiment") {
      result = run_experiment(m, cfg);
    } else {
      result = run_oracle(m, cfg);
    }
    const double run_ms = elapsed_ms(run_start);

    Json report{{"command", command},
                {"config", base_config(command, cfg, format)},
                {"input_shape", Json::array({m.rows(), m.cols()})},
                {"result", result},
                {"timings_ms", Json::object()}};
    if (cfg.timings) report["timings_ms"] = Json{{"load", load_ms}, {"run", run_ms}};
    emit(report, cfg, out);
    return kExitOk;
  } catch (const ParseError& e) {
    err << "cssel " << command << ": " << e.what() << "\n";
    Json j = error_json(command, "parse", e.what(), kExitDomain);
    j["error"]["kind"] = to_string(e.kind());
    if (e.line() > 0) j["error"]["line"] = e.line();
    if (e.column() > 0) j["error"]["column"] = e.column();
    out << render_json(j);
    return kExitDomain;
  } catch (const DomainError& e) {
    err << "cssel " << command << ": " << e.what() << "\n";
    out << render_json(error_json(command, "domain", e.what(), kExitDomain));
    return kExitDomain;
  } catch (const SolverError& e) {
    err << "cssel " << command << ": " << e.what() << "\n";
    out << render_json(error_json(command, "solver", e.what(), kExitSolver));
    return kExitSolver;
  } catch (const Error& e) {
    // I/O failures while writing the report.
    err << "cssel " << command << ": " << e.what() << "\n";
    return kExitDomain;
  }
}

}  // namespace cssel::cli
