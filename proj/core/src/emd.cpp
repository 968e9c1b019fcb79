#include "cssel/emd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cssel/errors.hpp"

namespace cssel {

namespace {

Vector weights_from_log(const Vector& log_weights) {
  Vector f = (log_weights.array() - log_weights.maxCoeff()).exp().matrix();
  return f / f.sum();
}

void check_sample(const SubgradientSample& sample, Index s) {
  if (!std::isfinite(sample.value)) {
    throw SolverError("emd_minimize: objective returned a non-finite value");
  }
  if (sample.subgradient.size() != s) {
    throw SolverError("emd_minimize: subgradient has dimension " + std::to_string(sample.subgradient.size()) +
                      ", expected " + std::to_string(s));
  }
  if (!sample.subgradient.allFinite()) throw SolverError("emd_minimize: subgradient is not finite");
}

}  // namespace

Vector uniform_simplex_point(Index s) {
  if (s < 1) throw DomainError("uniform_simplex_point: dimension must be positive");
  return Vector::Constant(s, 1.0 / static_cast<double>(s));
}

bool is_simplex_point(const Vector& f, double tol) {
  if (f.size() < 1 || !f.allFinite()) return false;
  if ((f.array() < 0.0).any()) return false;
  return std::abs(f.sum() - 1.0) <= tol;
}

double emd_step_size(StepMode mode, Index s, int t, int horizon, double theta_inf_norm) {
  if (s < 2 || !(theta_inf_norm > 0.0)) return 0.0;
  const double steps = mode == StepMode::fixed_horizon ? horizon : t;
  return std::sqrt(2.0 * std::log(static_cast<double>(s)) / (steps * theta_inf_norm * theta_inf_norm));
}

Vector emd_step(const Vector& f, const Vector& theta, double beta) {
  if (f.size() != theta.size()) throw DomainError("emd_step: dimension mismatch");
  Vector log_weights(f.size());
  for (Index j = 0; j < f.size(); ++j) {
    log_weights(j) = f(j) > 0.0 ? std::log(f(j)) - beta * theta(j) : -std::numeric_limits<double>::infinity();
  }
  return weights_from_log(log_weights);
}

EmdRun emd_minimize(const SimplexObjective& objective, Index s, const EmdOptions& options) {
  if (s < 1) throw DomainError("emd_minimize: dimension must be positive");
  if (options.iterations < 1) throw DomainError("emd_minimize: iteration count must be positive");

  EmdRun run;
  run.step_mode = options.step_mode;

  Vector log_weights = Vector::Zero(s);
  Vector f = uniform_simplex_point(s);
  run.best_value = std::numeric_limits<double>::infinity();

  Vector weighted_theta = Vector::Zero(s);
  double weighted_offset = 0.0;
  double weight_total = 0.0;

  for (int t = 1; t <= options.iterations; ++t) {
    const SubgradientSample sample = objective(f);
    check_sample(sample, s);
    run.iterations = t;
    if (options.record_trace) run.trace.push_back(sample.value);
    if (sample.value < run.best_value) {
      run.best_value = sample.value;
      run.best_point = f;
    }
    if (options.stop_below && run.best_value <= *options.stop_below) {
      run.stopped_early = true;
      break;
    }
    // The simplex is a single point when s = 1.
    if (s == 1) {
      run.lower_bound = sample.value;
      break;
    }

    const double theta_inf = sample.subgradient.lpNorm<Eigen::Infinity>();
    if (theta_inf == 0.0) {
      run.stationary = true;
      run.lower_bound = std::max(run.lower_bound, sample.value);
      break;
    }
    const double beta = emd_step_size(options.step_mode, s, t, options.iterations, theta_inf);

    weighted_theta += beta * sample.subgradient;
    weighted_offset += beta * (sample.value - sample.subgradient.dot(f));
    weight_total += beta;
    run.lower_bound = std::max(run.lower_bound, (weighted_theta.minCoeff() + weighted_offset) / weight_total);
    if (options.stop_if_bound_above && run.lower_bound > *options.stop_if_bound_above) {
      run.certified_above = true;
      break;
    }

    log_weights -= beta * sample.subgradient;
    log_weights.array() -= log_weights.maxCoeff();
    f = weights_from_log(log_weights);
  }
  return run;
}

}  // namespace cssel
