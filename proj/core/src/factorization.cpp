#include "cssel/factorization.hpp"

#include <cmath>

#include "bracket_search.hpp"
#include "cssel/errors.hpp"

namespace cssel {

double NormBracket::ratio() const {
  if (alpha_lo == 0.0) return alpha_hi == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return alpha_hi / alpha_lo;
}

namespace detail {

NormBracket bracket_search(const BracketProblem& problem, const BracketOptions& options) {
  if (!(options.rel_tol > 0.0 && options.rel_tol < 1.0)) throw DomainError("bracket search: rel_tol must lie in (0, 1)");
  if (options.max_steps < 1) throw DomainError("bracket search: max_steps must be positive");
  if (options.stop_ratio && !(*options.stop_ratio >= 1.0)) throw DomainError("bracket search: stop_ratio must be >= 1");

  NormBracket br;
  br.alpha_lo = problem.initial_lower.value;
  br.lower_witness = problem.initial_lower.witness;
  br.alpha_hi = std::numeric_limits<double>::infinity();

  const double target = options.stop_ratio.value_or(problem.constant * (1.0 + options.rel_tol));

  auto raise_lower = [&](const SignedNorm& probe) {
    if (probe.witness.size() == 0) return;
    SignedNorm improved = problem.improve(probe.witness);
    if (improved.value > br.alpha_lo) {
      br.alpha_lo = improved.value;
      br.lower_witness = std::move(improved.witness);
    }
  };

  // Returns the feasibility verdict at alpha; records both certified bounds.
  auto attempt = [&](double alpha) {
    ++br.steps;
    FactorizeOutcome out = problem.factorize(alpha);
    if (out.probe.value > br.alpha_lo) raise_lower(out.probe);
    if (!out.factorization) return false;
    Factorization& fact = *out.factorization;
    raise_lower(SignedNorm{0.0, problem.factor_probe(fact)});
    const bool feasible = fact.alpha_effective <= alpha * (1.0 + options.rel_tol);
    if (fact.factor_norm < br.alpha_hi) {
      br.alpha_hi = fact.factor_norm;
      br.best = std::move(fact);
    }
    return feasible;
  };

  double a_lo = br.alpha_lo;
  double a_hi = std::max(problem.upper_seed, a_lo * (1.0 + options.rel_tol));
  bool feasible = attempt(a_hi);
  while (!feasible && br.steps < options.max_steps) {
    a_lo = a_hi;
    a_hi *= 2.0;
    feasible = attempt(a_hi);
  }
  if (!feasible) return br;

  while (true) {
    a_lo = std::max(a_lo, br.alpha_lo);
    a_hi = std::min(a_hi, br.alpha_hi);
    if (br.alpha_hi <= target * br.alpha_lo) {
      br.converged = true;
      break;
    }
    if (a_hi <= a_lo * (1.0 + 0.25 * options.rel_tol)) {
      br.converged = true;
      break;
    }
    if (br.steps >= options.max_steps) break;
    const double mid = std::sqrt(a_lo * a_hi);
    if (attempt(mid)) {
      a_hi = mid;
    } else {
      a_lo = mid;
    }
  }
  return br;
}

}  // namespace detail
}  // namespace cssel
