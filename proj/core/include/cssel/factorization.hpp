#pragma once

#include <limits>
#include <optional>

#include "cssel/emd.hpp"
#include "cssel/matcore.hpp"
#include "cssel/types.hpp"

namespace cssel {

/// sqrt(pi/2): Pietsch constant for the real field.
inline constexpr double kPietschConstant = 1.2533141373155002512;
/// pi / (2 log(1 + sqrt 2)): upper bound on the real Grothendieck constant.
inline constexpr double kGrothendieckUpper = 1.7822139781913691;
/// Weights below this are treated as exact zeros when inverting D.
inline constexpr double kZeroWeight = 1e-10;

enum class FactorizationKind { pietsch, grothendieck };

/// B = T D (Pietsch) or G = D T D (Grothendieck), with D = diag(weights),
/// sum(weights^2) = 1 and ||T|| <= alpha_effective.
struct Factorization {
  FactorizationKind kind = FactorizationKind::pietsch;
  Vector weights;  // diagonal of D
  Matrix factor;   // T
  double alpha = 0.0;            // requested bound
  double alpha_effective = 0.0;  // certified bound on ||T||
  double factor_norm = 0.0;      // measured ||T||
  double eta = 0.0;              // best objective value reached by the solver
  double reconstruction_residual = 0.0;
  int solver_iterations = 0;
  bool rescaled = false;  // eta > 0 forced the (alpha F + eta I) correction

  /// F = D^2 as a simplex point.
  Vector squared_weights() const { return weights.array().square().matrix(); }
};

struct FactorizeOptions {
  int emd_iterations = 5000;
  StepMode step_mode = StepMode::adaptive;
  /// Solves ending with eta above this cap are reported as infeasible.
  double eta_cap = std::numeric_limits<double>::infinity();
  double eig_tol = kEigenTolerance;
};

/// Outcome of one fixed-alpha factorization attempt. `factorization` is empty
/// when the solver's best value exceeded `eta_cap`; `eta` is reported either way.
struct FactorizeOutcome {
  std::optional<Factorization> factorization;
  double eta = 0.0;
  /// Certified lower bound on min J over the simplex; > 0 proves that no
  /// factorization with bound alpha exists.
  double eta_lower_bound = -std::numeric_limits<double>::infinity();
  int solver_iterations = 0;
  SignedNorm probe;  // best sign-vector lower bound met during the solve

  bool succeeded() const { return factorization.has_value(); }
};

struct BracketOptions {
  double rel_tol = 0.05;
  FactorizeOptions factorize;
  int max_steps = 40;
  /// Stop once alpha_hi <= stop_ratio * alpha_lo. Unset: the factorization
  /// constant times (1 + rel_tol).
  std::optional<double> stop_ratio;
};

/// Certified two-sided estimate of an NP-hard operator norm:
/// alpha_lo = ||M x|| for an explicit sign vector, alpha_hi = ||T|| of an
/// explicit factorization.
struct NormBracket {
  double alpha_lo = 0.0;
  double alpha_hi = 0.0;
  std::optional<Factorization> best;
  Vector lower_witness;
  bool converged = false;
  int steps = 0;  // fixed-alpha solves performed

  double ratio() const;
};

}  // namespace cssel
