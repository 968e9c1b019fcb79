// Acceptance suite: one PASS/FAIL line per criterion, with the measured
// runtime next to its budget. Budgets are reported, never enforced.
//
// Usage: acceptance [cssel-executable] [--only N,M,...]

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "commands.hpp"
#include "cssel/emd.hpp"
#include "cssel/experiments.hpp"
#include "cssel/grothendieck.hpp"
#include "cssel/matcore.hpp"
#include "cssel/pietsch.hpp"
#include "cssel/rng.hpp"
#include "cssel/select.hpp"

using namespace cssel;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

// Reference values computed with Eigen's dense decompositions rather than the
// library's own eigen routine.
double dense_max_eigenvalue(const Matrix& h) {
  return Eigen::SelfAdjointEigenSolver<Matrix>(h, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
}

double dense_spectral_norm(const Matrix& a) {
  if (a.cols() == 0) return 0.0;
  return Eigen::JacobiSVD<Matrix>(a).singularValues()(0);
}

double dense_condition(const Matrix& a) {
  if (a.cols() > a.rows()) return INFINITY;
  const Vector sv = Eigen::JacobiSVD<Matrix>(a).singularValues();
  return sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
}

Matrix random_standardized(Index m, Index n, Rng& rng) { return standardize(gaussian_matrix(m, n, rng)); }

Matrix random_symmetric(Index n, Rng& rng) {
  const Matrix g = gaussian_matrix(n, n, rng);
  return (g + g.transpose()) / 2.0;
}

Vector random_weights(Index s, Rng& rng) {
  Vector d(s);
  for (Index j = 0; j < s; ++j) d(j) = 0.05 + rng.uniform();
  return d / d.norm();
}

std::string fmt(double x, int digits = 4) {
  std::ostringstream out;
  out.precision(digits);
  out << x;
  return out.str();
}

// 1. Certified brackets against the exact norms.
Outcome factorization_contracts() {
  Outcome out;
  Rng rng(1001);
  BracketOptions opts;
  opts.rel_tol = 0.05;
  double worst_p = 0.0, worst_g = 0.0;
  int bad = 0;
  for (int k = 0; k < 50; ++k) {
    const Index s = 2 + k % 11;  // 2..12
    const Matrix b = gaussian_matrix(8, s, rng);
    const double exact2 = norm_inf2_exact(b).value;
    const NormBracket p = pietsch_optimal_alpha(b, opts);
    const bool p_ok = p.alpha_lo <= exact2 * (1 + 1e-12) && exact2 <= p.alpha_hi * (1 + 1e-12) &&
                      p.alpha_hi <= kPietschConstant * 1.05 * exact2;
    worst_p = std::max(worst_p, p.alpha_hi / exact2);

    const Matrix g = random_symmetric(s, rng);
    const double exact1 = norm_inf1_exact(g).value;
    const NormBracket q = groth_optimal_alpha(g, opts);
    const bool g_ok = q.alpha_lo <= exact1 * (1 + 1e-12) && exact1 <= q.alpha_hi * (1 + 1e-12) &&
                      q.alpha_hi <= 1.783 * 1.05 * exact1;
    worst_g = std::max(worst_g, q.alpha_hi / exact1);
    bad += (p_ok ? 0 : 1) + (g_ok ? 0 : 1);
  }
  out.pass = bad == 0;
  out.detail = "100 brackets, " + std::to_string(bad) + " violations; worst hi/exact pietsch " + fmt(worst_p) +
               " (limit " + fmt(kPietschConstant * 1.05) + "), grothendieck " + fmt(worst_g) + " (limit " +
               fmt(1.783 * 1.05) + ")";
  return out;
}

// 2. Semidefiniteness of the assembled matrix <=> factor-norm bound.
Outcome equivalence_suite() {
  Outcome out;
  Rng rng(1002);
  const double tol = 1e-8;
  int mismatches = 0, feasible = 0;
  for (int k = 0; k < 100; ++k) {
    const Index m = 2 + rng.below(7), s = 2 + rng.below(9);
    const Matrix b = gaussian_matrix(m, s, rng);
    const Vector d = random_weights(s, rng);
    const Matrix t = b * d.cwiseInverse().asDiagonal();
    const double tn = dense_spectral_norm(t);
    const double alpha = tn * (k % 2 == 0 ? 1.0 + 0.2 * rng.uniform() + 1e-6 : 1.0 - 0.2 * rng.uniform() - 1e-6);
    const Vector f = d.array().square().matrix();
    const double lam = pietsch_objective(b, alpha, f).value;
    const bool psd = lam <= tol * alpha * alpha;
    const bool bounded = tn <= alpha * (1 + tol);
    mismatches += psd == bounded ? 0 : 1;
    feasible += bounded ? 1 : 0;
  }
  for (int k = 0; k < 100; ++k) {
    const Index s = 2 + rng.below(9);
    const Matrix g = random_symmetric(s, rng);
    const Vector d = random_weights(s, rng);
    const Matrix dinv = d.cwiseInverse().asDiagonal();
    const double tn = dense_spectral_norm(dinv * g * dinv);
    const double alpha = tn * (k % 2 == 0 ? 1.0 + 0.2 * rng.uniform() + 1e-6 : 1.0 - 0.2 * rng.uniform() - 1e-6);
    const Vector f = d.array().square().matrix();
    const double lam = dense_max_eigenvalue(groth_block_matrix(g, alpha, f));
    const bool psd = lam <= tol * alpha;
    const bool bounded = tn <= alpha * (1 + tol);
    mismatches += psd == bounded ? 0 : 1;
    feasible += bounded ? 1 : 0;
  }
  out.pass = mismatches == 0;
  out.detail = "200 instances (" + std::to_string(feasible) + " within the bound), " + std::to_string(mismatches) +
               " disagreements";
  return out;
}

// 3. Fixed-horizon EMD gap on linear objectives.
Outcome emd_efficiency() {
  Outcome out;
  Rng rng(1003);
  int runs = 0, bad = 0;
  double worst = 0.0;
  for (Index s : {2, 8, 32}) {
    for (int horizon : {100, 1000}) {
      for (int rep = 0; rep < 10; ++rep) {
        Vector c(s);
        for (Index j = 0; j < s; ++j) c(j) = 2.0 * rng.uniform() - 1.0;
        const double lipschitz = c.lpNorm<Eigen::Infinity>();
        EmdOptions opts;
        opts.iterations = horizon;
        opts.step_mode = StepMode::fixed_horizon;
        const EmdRun run = emd_minimize([&c](const Vector& f) { return SubgradientSample{c.dot(f), c}; }, s, opts);
        const double gap = run.best_value - c.minCoeff();
        const double bound = std::sqrt(2.0 * lipschitz * lipschitz * std::log(static_cast<double>(s)) / horizon);
        worst = std::max(worst, gap / bound);
        bad += gap <= bound ? 0 : 1;
        ++runs;
      }
    }
  }
  out.pass = bad == 0;
  out.detail = std::to_string(runs) + " runs, " + std::to_string(bad) + " above bound; worst gap/bound " + fmt(worst);
  return out;
}

struct SelectionStats {
  int runs = 0;
  int metric_violations = 0;
  int cardinality_hits = 0;  // |tau| >= st.rank / 2
  int duplicate_pairs = 0;
  long candidates = 0;
  long small_candidates = 0;  // |tau| < ceil(s/2)
  double seconds = 0.0;
};

SelectionStats kt_stats, bt_identity_stats, bt_random_stats;
bool kt_done = false, bt_done = false;

void record_candidates(const SelectionReport& r, SelectionStats& st) {
  for (const Candidate& c : r.candidates) {
    ++st.candidates;
    if (c.tau.size() < (c.s + 1) / 2) ++st.small_candidates;
  }
}

// 4. Kashin-Tzafriri selection.
Outcome kt_guarantee() {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  SelectionStats& st = kt_stats;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(Rng::derive_seed(4004, seed));
    const Matrix a = random_standardized(32, 64, rng);
    const SelectionReport r = kt_select(a, seed);
    const double norm = dense_spectral_norm(column_submatrix(a, r.tau));
    st.metric_violations += norm <= 15.0 ? 0 : 1;
    st.cardinality_hits += static_cast<double>(r.tau.size()) >= stable_rank(a) / 2.0 ? 1 : 0;
    record_candidates(r, st);
    ++st.runs;
  }
  st.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  kt_done = true;
  out.pass = st.metric_violations == 0 && st.cardinality_hits >= 60;
  out.detail = "norm <= 15 in " + std::to_string(st.runs - st.metric_violations) + "/100 (need 100); |tau| >= st.rank/2 in " +
               std::to_string(st.cardinality_hits) + "/100 (need 60)";
  return out;
}

// 5. Bourgain-Tzafriri selection.
Outcome bt_guarantee() {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  Matrix twin(8, 16);
  twin << Matrix::Identity(8, 8), Matrix::Identity(8, 8);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const SelectionReport r = bt_select(twin, seed);
    bt_identity_stats.metric_violations += dense_condition(column_submatrix(twin, r.tau)) <= std::sqrt(3.0) * (1 + 1e-10) ? 0 : 1;
    for (Index j : r.tau.indices()) bt_identity_stats.duplicate_pairs += j < 8 && r.tau.contains(j + 8) ? 1 : 0;
    record_candidates(r, bt_identity_stats);
    ++bt_identity_stats.runs;
  }
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(Rng::derive_seed(5005, seed));
    const Matrix a = random_standardized(16, 48, rng);
    const SelectionReport r = bt_select(a, seed);
    bt_random_stats.metric_violations += dense_condition(column_submatrix(a, r.tau)) <= std::sqrt(3.0) * (1 + 1e-10) ? 0 : 1;
    bt_random_stats.cardinality_hits += static_cast<double>(r.tau.size()) >= stable_rank(a) / 2.0 ? 1 : 0;
    record_candidates(r, bt_random_stats);
    ++bt_random_stats.runs;
  }
  bt_identity_stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  bt_done = true;
  const int violations = bt_identity_stats.metric_violations + bt_random_stats.metric_violations;
  out.pass = violations == 0 && bt_identity_stats.duplicate_pairs == 0;
  out.detail = "kappa <= sqrt3 in " + std::to_string(200 - violations) + "/200; duplicate pairs " +
               std::to_string(bt_identity_stats.duplicate_pairs) + "; |tau| >= st.rank/2 (random, descriptive) " +
               std::to_string(bt_random_stats.cardinality_hits) + "/100";
  return out;
}

// 6. Pruning keeps at least half of every sample.
Outcome pruning_cardinality() {
  Outcome out;
  if (!kt_done || !bt_done) {
    out.pass = false;
    out.detail = "requires criteria 4 and 5 in the same invocation";
    return out;
  }
  const long total = kt_stats.candidates + bt_identity_stats.candidates + bt_random_stats.candidates;
  const long small = kt_stats.small_candidates + bt_identity_stats.small_candidates + bt_random_stats.small_candidates;
  out.pass = small == 0 && total > 0;
  out.detail = std::to_string(total) + " candidates, " + std::to_string(small) + " below ceil(s/2)";
  return out;
}

// 7. Random-submatrix norm bounds by Monte Carlo.
Outcome sampling_bounds() {
  Outcome out;
  Rng rng(1007);
  ExperimentConfig cfg;
  cfg.trials = 500;
  int checks = 0, failed = 0, regime = 0;
  std::string failures;
  auto tally = [&](const ExperimentResult& r, const std::string& where) {
    ++checks;
    if (r.applicable && r.check == "inf2_sqrt_s_bound") ++regime;
    if (!r.pass) {
      ++failed;
      failures += " " + r.check + "@" + where;
    }
  };
  // (inf,2): moderately and highly coherent 16-column matrices.
  for (Index m : {8, 16, 64}) {
    const Matrix a = random_standardized(m, 16, rng);
    for (double delta : {0.25, 0.5}) {
      const Inf2ReductionReport r = check_inf2_reduction(a, delta, rng.next(), cfg);
      const std::string where = "m=" + std::to_string(m) + ",d=" + fmt(delta, 2);
      tally(r.independent, where);
      tally(r.fixed_size, where);
      tally(r.sqrt_s_bound, where);
    }
  }
  // (inf,1): the s/9 bound needs s well below st.rank and small coherence;
  // nearly orthogonal columns give s / st.rank <= 0.52.
  for (Index m : {2048, 4096}) {
    const Matrix a = random_standardized(m, 16, rng);
    for (double delta : {0.25, 0.5}) {
      const Inf1ReductionReport r = check_inf1_reduction(a, delta, true, rng.next(), cfg);
      const std::string where = "m=" + std::to_string(m) + ",d=" + fmt(delta, 2);
      tally(r.fixed_size, where);
      tally(r.poissonization, where);
    }
  }
  out.pass = failed == 0 && regime > 0;
  out.detail = std::to_string(checks) + " checks (" + std::to_string(regime) + " 7sqrt(s) in regime), " +
               std::to_string(failed) + " failed" + failures;
  return out;
}

// 8. Branch formula vs the assembled block matrix.
Outcome block_identity() {
  Outcome out;
  Rng rng(1008);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Index s = 1 + k % 10;
    const Matrix g = random_symmetric(s, rng);
    Vector f(s);
    for (Index j = 0; j < s; ++j) f(j) = rng.uniform();
    f /= f.sum();
    const double alpha = 0.1 + 4.0 * rng.uniform();
    const double diff =
        std::abs(groth_objective(g, alpha, f).value - dense_max_eigenvalue(groth_block_matrix(g, alpha, f)));
    worst = std::max(worst, diff);
  }
  out.pass = worst <= 1e-9;
  out.detail = "100 instances, max |difference| " + fmt(worst, 3);
  return out;
}

std::string cli_path;

std::string capture_process(const std::string& command) {
  std::string text;
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(command.c_str(), "r"), pclose);
  if (!pipe) return text;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe.get())) > 0) text.append(buf.data(), n);
  return text;
}

// 9. Byte-identical reports for identical invocations.
Outcome determinism() {
  Outcome out;
  const std::string dir = CSSEL_FIXTURE_DIR;
  const std::vector<std::vector<std::string>> invocations = {
      {"kt", "--seed", "7", dir + "/standardized_32x64.csv"},
      {"bt", "--seed", "7", dir + "/double_identity_8x16.csv"},
      {"norm", "--kind", "inf2", dir + "/gaussian_5x8.csv"},
      {"grothendieck", "--alpha", "2", dir + "/swap_2.csv"},
      {"experiment", "--kind", "inf2", "--seed", "3", "--trials", "100", dir + "/standardized_10x16.csv"},
  };
  int compared = 0, differ = 0;
  for (const auto& args : invocations) {
    std::ostringstream a, b, err;
    cli::run_command(args, a, err);
    cli::run_command(args, b, err);
    ++compared;
    differ += a.str() == b.str() && !a.str().empty() ? 0 : 1;
    if (!cli_path.empty()) {
      std::string cmd = cli_path;
      for (const std::string& s : args) cmd += " '" + s + "'";
      const std::string first = capture_process(cmd);
      const std::string second = capture_process(cmd);
      ++compared;
      differ += first == second && first == a.str() ? 0 : 1;
    }
  }
  out.pass = differ == 0;
  out.detail = std::to_string(compared) + " repeated invocations" + (cli_path.empty() ? " (in-process only)" : "") +
               ", " + std::to_string(differ) + " differed";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc) {
      std::stringstream list(argv[++i]);
      std::string item;
      while (std::getline(list, item, ',')) only.insert(std::stoi(item));
    } else {
      cli_path = arg;
    }
  }

  const std::vector<Criterion> criteria = {
      {1, "factorization contracts", 60, factorization_contracts},
      {2, "equivalence suite", 10, equivalence_suite},
      {3, "EMD efficiency", 5, emd_efficiency},
      {4, "KT guarantee", 300, kt_guarantee},
      {5, "BT guarantee", 300, bt_guarantee},
      {6, "pruning cardinality", 0, pruning_cardinality},
      {7, "random-submatrix bounds", 120, sampling_bounds},
      {8, "block/branch identity", 5, block_identity},
      {9, "determinism", 0, determinism},
  };

  int failed = 0;
  for (const Criterion& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string timing = fmt(secs, 3) + " s";
    if (c.budget_s > 0) timing += secs <= c.budget_s ? " (budget " + fmt(c.budget_s, 3) + " s)" : " (over " + fmt(c.budget_s, 3) + " s budget)";
    std::cout << (o.pass ? "PASS" : "FAIL") << "  [" << c.id << "] " << c.name << ": " << o.detail << "; " << timing
              << std::endl;
    failed += o.pass ? 0 : 1;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
