#include "cssel/experiments.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "cssel/errors.hpp"
#include "cssel/matcore.hpp"

namespace cssel {

namespace {

struct Moments {
  double mean = 0.0;
  double std_error = 0.0;
};

Moments moments(const std::vector<double>& xs) {
  Moments m;
  const auto n = static_cast<double>(xs.size());
  if (xs.empty()) return m;
  // Centering on the first sample keeps the mean exact for constant samples.
  double shift = 0.0;
  for (double x : xs) shift += x - xs.front();
  m.mean = xs.front() + shift / n;
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    m.std_error = std::sqrt(ss / (n - 1.0) / n);
  }
  return m;
}

void validate(const Matrix& a, double delta, const ExperimentConfig& config, const char* what,
              bool require_standardized) {
  require_finite(a, what);
  if (!(delta >= 0.0 && delta <= 1.0)) throw DomainError(std::string(what) + ": delta must lie in [0, 1]");
  if (config.trials < 100) throw DomainError(std::string(what) + ": at least 100 trials are required");
  if (a.cols() > config.oracle_cap) {
    throw DomainError(std::string(what) + ": " + std::to_string(a.cols()) + " columns exceed the oracle cap of " +
                      std::to_string(config.oracle_cap));
  }
  if (require_standardized && !is_standardized(a)) throw DomainError(std::string(what) + ": matrix must be standardized");
}

ExperimentResult make_result(std::string check, SamplingModel model, double delta, int trials, Moments m,
                             double bound, bool applicable) {
  ExperimentResult r;
  r.check = std::move(check);
  r.model = model;
  r.delta = delta;
  r.trials = trials;
  r.empirical_mean = m.mean;
  r.std_error = m.std_error;
  r.theoretical_bound = bound;
  r.applicable = applicable;
  r.pass = !applicable || m.mean <= bound + 3.0 * m.std_error;
  return r;
}

// Trial t of a model draws from its own stream so results do not depend on
// evaluation order.
template <class Norm>
std::vector<double> sample_norms(SamplingModel model, Index n, double delta, std::uint64_t seed, int trials,
                                 Norm norm) {
  const Rng master(Rng::derive_seed(seed, model == SamplingModel::fixed_size ? 1 : 2));
  std::vector<double> values(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    Rng rng = master.split(static_cast<std::uint64_t>(t));
    values[static_cast<std::size_t>(t)] = norm(sample_projector(model, n, delta, rng));
  }
  return values;
}

double column_norm_sum(const Matrix& h) {
  double total = 0.0;
  for (Index j = 0; j < h.cols(); ++j) total += h.col(j).norm();
  return total;
}

}  // namespace

const char* to_string(SamplingModel model) {
  return model == SamplingModel::fixed_size ? "P_delta" : "R_delta";
}

ColumnSubset sample_projector(SamplingModel model, Index n, double delta, Rng& rng) {
  if (!(delta >= 0.0 && delta <= 1.0)) throw DomainError("sample_projector: delta must lie in [0, 1]");
  if (n < 0) throw DomainError("sample_projector: negative dimension");
  std::vector<Index> idx;
  if (model == SamplingModel::fixed_size) {
    const auto s = static_cast<Index>(std::floor(delta * static_cast<double>(n)));
    // Partial Fisher-Yates; the chosen prefix is then sorted.
    std::vector<Index> perm(static_cast<std::size_t>(n));
    for (Index j = 0; j < n; ++j) perm[static_cast<std::size_t>(j)] = j;
    for (Index k = 0; k < s; ++k) {
      const Index pick = k + rng.below(n - k);
      std::swap(perm[static_cast<std::size_t>(k)], perm[static_cast<std::size_t>(pick)]);
    }
    idx.assign(perm.begin(), perm.begin() + s);
  } else {
    for (Index j = 0; j < n; ++j) {
      if (rng.bernoulli(delta)) idx.push_back(j);
    }
  }
  return ColumnSubset::from_unsorted(std::move(idx), n);
}

Inf2ReductionReport check_inf2_reduction(const Matrix& a, double delta, std::uint64_t seed,
                                         const ExperimentConfig& config) {
  validate(a, delta, config, "check_inf2_reduction", false);
  const Index n = a.cols();
  const auto norm = [&a](const ColumnSubset& tau) { return norm_inf2_exact(column_submatrix(a, tau)).value; };

  const Moments r = moments(sample_norms(SamplingModel::independent, n, delta, seed, config.trials, norm));
  const Moments p = moments(sample_norms(SamplingModel::fixed_size, n, delta, seed, config.trials, norm));

  const double full = norm_inf2_exact(a, config.oracle_cap).value;
  const double sum_bound = std::sqrt(2.0 * delta * (1.0 - delta)) * a.norm() + delta * full;

  Inf2ReductionReport report;
  report.independent = make_result("inf2_random_reduction", SamplingModel::independent, delta, config.trials, r,
                                   sum_bound, true);

  Moments poisson = p;
  poisson.std_error = p.std_error + 2.0 * r.std_error;
  report.fixed_size = make_result("inf2_poissonization", SamplingModel::fixed_size, delta, config.trials, poisson,
                                  2.0 * r.mean, true);

  const auto s = static_cast<Index>(std::floor(delta * static_cast<double>(n)));
  // The 7 sqrt(s) bound is stated for standardized A with s <= ceil(2 st.rank).
  const bool regime = is_standardized(a) && a.norm() > 0.0 &&
                      static_cast<double>(s) <= std::ceil(2.0 * stable_rank(a));
  report.sqrt_s_bound = make_result("inf2_sqrt_s_bound", SamplingModel::fixed_size, delta, config.trials, p,
                                    7.0 * std::sqrt(static_cast<double>(s)), regime);
  return report;
}

Inf1ReductionReport check_inf1_reduction(const Matrix& a, double delta, bool in_regime, std::uint64_t seed,
                                         const ExperimentConfig& config) {
  validate(a, delta, config, "check_inf1_reduction", true);
  const Index n = a.cols();
  const Matrix h = hollow_gram(a);
  const auto norm = [&h](const ColumnSubset& tau) { return norm_inf1_exact(principal_submatrix(h, tau)).value; };

  const Moments r = moments(sample_norms(SamplingModel::independent, n, delta, seed, config.trials, norm));
  const Moments p = moments(sample_norms(SamplingModel::fixed_size, n, delta, seed, config.trials, norm));
  const auto s = static_cast<Index>(std::floor(delta * static_cast<double>(n)));

  Inf1ReductionReport report;
  report.fixed_size = make_result("inf1_s_over_9", SamplingModel::fixed_size, delta, config.trials, p,
                                  static_cast<double>(s) / 9.0, in_regime);
  Moments poisson = p;
  poisson.std_error = p.std_error + 2.0 * r.std_error;
  report.poissonization = make_result("inf1_poissonization", SamplingModel::fixed_size, delta, config.trials,
                                      poisson, 2.0 * r.mean, true);
  report.independent_mean = r.mean;
  report.independent_std_error = r.std_error;
  // H is symmetric with zero diagonal, so the diagonal term vanishes and the
  // two column-norm terms coincide.
  report.bound_shape = delta * delta * norm_inf1_exact(h, config.oracle_cap).value +
                       2.0 * std::pow(delta, 1.5) * column_norm_sum(h);
  report.fitted_constant = report.bound_shape > 0.0 ? r.mean / report.bound_shape : 0.0;
  return report;
}

}  // namespace cssel
