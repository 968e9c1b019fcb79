#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "cssel/types.hpp"

namespace cssel {

/// Objective value J(f) with one subgradient theta in dJ(f).
struct SubgradientSample {
  double value = 0.0;
  Vector subgradient;
};

using SimplexObjective = std::function<SubgradientSample(const Vector& f)>;

/// fixed_horizon: beta = sqrt(2 log s / (T |theta|_inf^2)).
/// adaptive:      beta = sqrt(2 log s / (t |theta|_inf^2)) at iteration t.
enum class StepMode { fixed_horizon, adaptive };

struct EmdOptions {
  int iterations = 5000;
  StepMode step_mode = StepMode::adaptive;
  /// Stop as soon as the best recorded value is <= this threshold.
  std::optional<double> stop_below;
  /// Stop as soon as the certified lower bound exceeds this threshold.
  std::optional<double> stop_if_bound_above;
  bool record_trace = false;
};

struct EmdRun {
  int iterations = 0;  // objective evaluations performed
  StepMode step_mode = StepMode::adaptive;
  double best_value = 0.0;
  Vector best_point;
  std::vector<double> trace;  // per-iterate values when requested
  bool stopped_early = false;
  bool stationary = false;  // a zero subgradient ended the run
  /// Certified lower bound on min J over the simplex: the step-weighted
  /// average of the linear minorants J(f_t) + <theta_t, f - f_t>, minimized
  /// at a vertex. -inf until a step has been taken.
  double lower_bound = -std::numeric_limits<double>::infinity();
  bool certified_above = false;  // stop_if_bound_above ended the run
};

/// Uniform point e / s of the simplex.
Vector uniform_simplex_point(Index s);

/// True when every weight is >= 0 and the weights sum to 1 within tol.
bool is_simplex_point(const Vector& f, double tol = 1e-12);

/// Step size for iteration `t` (1-based) of a run with horizon `horizon`.
double emd_step_size(StepMode mode, Index s, int t, int horizon, double theta_inf_norm);

/// One entropic update h = f * exp(-beta theta) / <f, exp(-beta theta)>,
/// evaluated in log space.
Vector emd_step(const Vector& f, const Vector& theta, double beta);

/// Entropic mirror descent over the probability simplex in dimension s,
/// starting from the uniform point and returning the best iterate seen.
EmdRun emd_minimize(const SimplexObjective& objective, Index s, const EmdOptions& options);

}  // namespace cssel
