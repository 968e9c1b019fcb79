#pragma once

#include <functional>

#include "cssel/factorization.hpp"

namespace cssel::detail {

struct BracketProblem {
  double constant = 1.0;      // approximation constant of the factorization
  SignedNorm initial_lower;   // certified lower bound with its witness
  double upper_seed = 1.0;    // alpha at which a factorization is known to exist
  std::function<FactorizeOutcome(double alpha)> factorize;
  std::function<SignedNorm(const Vector& signs)> improve;     // single-flip ascent
  std::function<Vector(const Factorization& fact)> factor_probe;  // extra sign pattern from T
};

/// Geometric bisection on alpha shared by the Pietsch and Grothendieck
/// brackets. Feasibility at alpha means a factorization was returned with
/// alpha_effective <= alpha (1 + rel_tol); the returned bounds never depend on
/// infeasibility verdicts.
NormBracket bracket_search(const BracketProblem& problem, const BracketOptions& options);

}  // namespace cssel::detail
