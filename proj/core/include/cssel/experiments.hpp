#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "cssel/rng.hpp"
#include "cssel/types.hpp"

namespace cssel {

/// P_delta: exactly floor(delta n) coordinates. R_delta: each coordinate
/// independently with probability delta.
enum class SamplingModel { fixed_size, independent };

const char* to_string(SamplingModel model);

ColumnSubset sample_projector(SamplingModel model, Index n, double delta, Rng& rng);

/// Monte Carlo mean of a random norm compared against a bound.
/// pass = empirical_mean <= theoretical_bound + 3 std_error.
struct ExperimentResult {
  std::string check;
  SamplingModel model = SamplingModel::independent;
  double delta = 0.0;
  int trials = 0;
  double empirical_mean = 0.0;
  double std_error = 0.0;
  double theoretical_bound = 0.0;
  bool applicable = true;  // false: the bound's regime does not hold; informational only
  bool pass = true;
};

struct Inf2ReductionReport {
  ExperimentResult independent;     // E||A R_delta||_{inf->2} vs sqrt(2 d (1-d)) ||A||_F + d ||A||_{inf->2}
  ExperimentResult fixed_size;      // E||A P_delta||_{inf->2} vs 2 E||A R_delta||_{inf->2}
  ExperimentResult sqrt_s_bound;    // E||A P_delta||_{inf->2} vs 7 sqrt(s), s <= ceil(2 st.rank)
};

struct Inf1ReductionReport {
  ExperimentResult fixed_size;      // E||P H P||_{inf->1} vs s/9 in the caller-declared regime
  ExperimentResult poissonization;  // E||P H P||_{inf->1} vs 2 E||R H R||_{inf->1}
  double independent_mean = 0.0;
  double independent_std_error = 0.0;
  /// delta^2 ||H||_{inf->1} + 2 delta^{3/2} ||H||_col (the bracket of the
  /// random principal submatrix bound, without its unspecified constant).
  double bound_shape = 0.0;
  /// independent_mean / bound_shape, or 0 when bound_shape is 0.
  double fitted_constant = 0.0;
};

struct ExperimentConfig {
  int trials = 500;
  Index oracle_cap = 20;
};

/// Requires n <= oracle_cap and trials >= 100. The 7 sqrt(s) check applies
/// only to standardized A.
Inf2ReductionReport check_inf2_reduction(const Matrix& a, double delta, std::uint64_t seed,
                                         const ExperimentConfig& config = {});

/// Requires a standardized A. `in_regime` declares that s = floor(delta n)
/// lies in the small-sample regime where the s/9 bound is claimed; otherwise
/// that result is informational.
Inf1ReductionReport check_inf1_reduction(const Matrix& a, double delta, bool in_regime, std::uint64_t seed,
                                         const ExperimentConfig& config = {});

}  // namespace cssel
