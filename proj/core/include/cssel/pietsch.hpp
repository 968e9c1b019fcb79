#pragma once

#include "cssel/factorization.hpp"

namespace cssel {

/// J(f) = lambda_max(B^T B - alpha^2 diag f) with subgradient -alpha^2 |u|^2.
///
/// The Gram matrix is formed once at construction. Every evaluation also
/// probes the sign pattern of the top eigenvector as an (inf,2) lower bound;
/// the best probe is available through `best_probe()`.
class PietschObjective {
 public:
  PietschObjective(const Matrix& b, double alpha, double eig_tol = kEigenTolerance);

  SubgradientSample operator()(const Vector& f);

  const Matrix& matrix() const { return *b_; }
  const Matrix& gram() const { return gram_; }
  double alpha() const { return alpha_; }
  const SignedNorm& best_probe() const { return probe_; }

 private:
  const Matrix* b_;
  Matrix gram_;
  double alpha_;
  double eig_tol_;
  SignedNorm probe_;
  Matrix work_;
};

SubgradientSample pietsch_objective(const Matrix& b, double alpha, const Vector& f);

/// Builds B = T D from a simplex point f whose objective value is eta.
/// eta <= 0: D = f^{1/2}, T = B D^+, alpha_effective = alpha.
/// eta > 0:  F~ = (alpha^2 F + eta I) / (alpha^2 + eta s), D = F~^{1/2},
///           T = B D^{-1}, alpha_effective = sqrt(alpha^2 + eta s).
Factorization pietsch_from_weights(const Matrix& b, double alpha, const Vector& f, double eta);

/// Runs EMD on the Pietsch objective (stopping at value <= 0) and constructs
/// the factorization from the best iterate.
FactorizeOutcome pietsch_factorize(const Matrix& b, double alpha, const FactorizeOptions& options = {});

/// Bisects alpha to bracket ||B||_{inf->2}; stops once
/// alpha_hi / alpha_lo <= sqrt(pi/2) (1 + rel_tol) or the interval collapses.
NormBracket pietsch_optimal_alpha(const Matrix& b, const BracketOptions& options = {});

}  // namespace cssel
