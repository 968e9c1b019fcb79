#include "cssel/select.hpp"

#include <cmath>
#include <functional>
#include <future>
#include <set>
#include <string>

#include "cssel/errors.hpp"
#include "cssel/factorization.hpp"
#include "cssel/grothendieck.hpp"
#include "cssel/matcore.hpp"
#include "cssel/pietsch.hpp"

namespace cssel {

namespace {

FactorizeOptions factorize_options(const SelectConfig& config) {
  FactorizeOptions opts;
  opts.emd_iterations = config.emd_iterations;
  opts.step_mode = config.step_mode;
  opts.eig_tol = config.eig_tol;
  return opts;
}

void check_size(const Matrix& a, Index s, const char* what) {
  if (s < 1 || s > a.cols()) {
    throw DomainError(std::string(what) + ": sample size " + std::to_string(s) + " outside [1, " +
                      std::to_string(a.cols()) + "]");
  }
}

// Keeps the positions j of sigma with d_jj^2 <= 2/s.
Candidate prune(const ColumnSubset& sigma, Index s, const Factorization& fact) {
  const double threshold = 2.0 / static_cast<double>(s);
  std::vector<Index> keep;
  for (Index j = 0; j < fact.weights.size(); ++j) {
    if (fact.weights(j) * fact.weights(j) <= threshold) keep.push_back(j);
  }
  Candidate c;
  c.s = s;
  c.sigma = sigma;
  c.tau = sigma.select(keep);
  c.alpha = fact.alpha;
  c.alpha_effective = fact.alpha_effective;
  c.factor_norm = fact.factor_norm;
  c.eta = fact.eta;
  return c;
}

using Reducer = std::function<std::optional<Candidate>(const Matrix&, Index, Rng&, const SelectConfig&)>;
using Metric = std::function<double(const Matrix&)>;

void require_standardized_input(const Matrix& a, const char* what) {
  require_finite(a, what);
  if (a.cols() < 1) throw DomainError(std::string(what) + ": matrix has no columns");
  for (Index j = 0; j < a.cols(); ++j) {
    const double nrm = a.col(j).norm();
    if (!(std::abs(nrm - 1.0) <= kStandardizedTolerance)) {
      throw DomainError(std::string(what) + ": column " + std::to_string(j) + " has norm " + std::to_string(nrm) +
                        "; standardize the input first");
    }
  }
}

// Shared doubling loop: rounds over s = 4, 8, ..., n with ceil(8 log2 s)
// attempts each; the first attempt (by index) meeting the threshold wins the
// round, and a round without an accepted candidate ends the search.
SelectionReport run_selection(const Matrix& a, std::uint64_t seed, const SelectConfig& config, const Reducer& reduce,
                              const Metric& metric, double threshold, const char* what) {
  require_standardized_input(a, what);
  const Index n = a.cols();

  SelectionReport report;
  report.seed = seed;
  report.stable_rank = stable_rank(a);

  if (config.early_shortcut) {
    const double whole = metric(a);
    if (whole <= threshold) {
      report.tau = ColumnSubset::all(n);
      report.accepted_metric = whole;
      report.shortcut = true;
      report.cardinality_ratio = static_cast<double>(n) / report.stable_rank;
      return report;
    }
  }

  report.tau = ColumnSubset({0}, n);
  report.accepted_metric = metric(column_submatrix(a, report.tau));

  auto evaluate = [&](Index s, int attempt) {
    Rng rng(Rng::derive_seed(Rng::derive_seed(seed, static_cast<std::uint64_t>(s)), static_cast<std::uint64_t>(attempt)));
    std::optional<Candidate> c = reduce(a, s, rng, config);
    if (c) {
      c->attempt = attempt;
      c->metric = metric(column_submatrix(a, c->tau));
      c->accepted = c->metric <= threshold;
    }
    return c;
  };

  const int threads = std::max(1, config.threads);
  for (Index s : size_schedule(n)) {
    RoundLog round;
    round.s = s;
    round.attempt_budget = attempts_for(s);

    int next = 0;
    while (next < round.attempt_budget && !round.accepted) {
      const int batch = std::min(threads, round.attempt_budget - next);
      std::vector<std::optional<Candidate>> results(static_cast<std::size_t>(batch));
      if (batch == 1) {
        results[0] = evaluate(s, next);
      } else {
        std::vector<std::future<std::optional<Candidate>>> futures;
        for (int k = 0; k < batch; ++k) futures.push_back(std::async(std::launch::async, evaluate, s, next + k));
        for (int k = 0; k < batch; ++k) results[static_cast<std::size_t>(k)] = futures[static_cast<std::size_t>(k)].get();
      }
      for (auto& c : results) {
        ++round.attempts_used;
        ++report.attempts;
        ++next;
        if (!c) continue;
        const bool accepted = c->accepted;
        if (accepted) {
          round.accepted = true;
          round.candidate_size = c->tau.size();
          round.metric = c->metric;
          report.tau = c->tau;
          report.accepted_metric = c->metric;
        }
        report.candidates.push_back(std::move(*c));
        if (accepted) break;
      }
    }
    report.rounds.push_back(round);
    if (!round.accepted) break;
  }
  report.cardinality_ratio = static_cast<double>(report.tau.size()) / report.stable_rank;
  return report;
}

}  // namespace

ColumnSubset random_subset(Index n, Index s, Rng& rng) {
  if (s < 0 || s > n) {
    throw DomainError("random_subset: cannot draw " + std::to_string(s) + " of " + std::to_string(n) + " indices");
  }
  // Floyd's algorithm: every s-subset is equally likely.
  std::set<Index> picked;
  for (Index j = n - s; j < n; ++j) {
    const Index t = rng.below(j + 1);
    if (!picked.insert(t).second) picked.insert(j);
  }
  return ColumnSubset(std::vector<Index>(picked.begin(), picked.end()), n);
}

int attempts_for(Index s) {
  if (s < 2) return 1;
  return std::max(1, static_cast<int>(std::ceil(8.0 * std::log2(static_cast<double>(s)) - 1e-9)));
}

std::vector<Index> size_schedule(Index n) {
  std::vector<Index> sizes;
  if (n < 1) return sizes;
  if (n < 4) return {n};
  for (Index s = 4;; s *= 2) {
    sizes.push_back(std::min(s, n));
    if (s >= n) break;
  }
  return sizes;
}

std::optional<Candidate> norm_reduce(const Matrix& a, Index s, Rng& rng, const SelectConfig& config) {
  check_size(a, s, "norm_reduce");
  const ColumnSubset sigma = random_subset(a.cols(), s, rng);
  const Matrix b = column_submatrix(a, sigma);
  const double alpha = 8.0 * kPietschConstant * std::sqrt(static_cast<double>(s));
  const FactorizeOutcome out = pietsch_factorize(b, alpha, factorize_options(config));
  if (!out.factorization) return std::nullopt;
  return prune(sigma, s, *out.factorization);
}

std::optional<Candidate> cond_reduce(const Matrix& a, Index s, Rng& rng, const SelectConfig& config) {
  check_size(a, s, "cond_reduce");
  const ColumnSubset sigma = random_subset(a.cols(), s, rng);
  const Matrix g = hollow_gram(column_submatrix(a, sigma));
  const double alpha = static_cast<double>(s) / 4.0;
  const FactorizeOutcome out = groth_factorize(g, alpha, factorize_options(config));
  if (!out.factorization) return std::nullopt;
  return prune(sigma, s, *out.factorization);
}

SelectionReport kt_select(const Matrix& a, std::uint64_t seed, const SelectConfig& config) {
  return run_selection(a, seed, config, norm_reduce, [](const Matrix& m) { return spectral_norm(m); }, config.kt_norm,
                       "kt_select");
}

SelectionReport bt_select(const Matrix& a, std::uint64_t seed, const SelectConfig& config) {
  return run_selection(a, seed, config, cond_reduce, [](const Matrix& m) { return condition_number(m); },
                       config.bt_kappa, "bt_select");
}

}  // namespace cssel
