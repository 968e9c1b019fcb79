#pragma once

#include "cssel/factorization.hpp"

namespace cssel {

/// J(f) = lambda_max [[-alpha F, G], [G, -alpha F]] for symmetric G.
///
/// Evaluated through the congruence with diag(G - alpha F, -G - alpha F):
/// the value is the larger of the two branch maxima and the subgradient is
/// -alpha |w|^2 for the top eigenvector w of the attaining branch.
class GrothendieckObjective {
 public:
  GrothendieckObjective(const Matrix& g, double alpha, double eig_tol = kEigenTolerance);

  SubgradientSample operator()(const Vector& f);

  const Matrix& matrix() const { return *g_; }
  double alpha() const { return alpha_; }
  const SignedNorm& best_probe() const { return probe_; }

 private:
  const Matrix* g_;
  double alpha_;
  double eig_tol_;
  SignedNorm probe_;
  Matrix plus_;
  Matrix minus_;
};

SubgradientSample groth_objective(const Matrix& g, double alpha, const Vector& f);

/// [[-alpha diag f, G], [G, -alpha diag f]] assembled explicitly.
Matrix groth_block_matrix(const Matrix& g, double alpha, const Vector& f);

/// Builds G = D T D from a simplex point f whose objective value is eta.
/// eta <= 0: D = f^{1/2}, T = D^+ G D^+, alpha_effective = alpha.
/// eta > 0:  F~ = (alpha F + eta I) / (alpha + eta s), D = F~^{1/2},
///           T = D^{-1} G D^{-1}, alpha_effective = alpha + eta s.
Factorization groth_from_weights(const Matrix& g, double alpha, const Vector& f, double eta);

FactorizeOutcome groth_factorize(const Matrix& g, double alpha, const FactorizeOptions& options = {});

/// Bisects alpha to bracket ||G||_{inf->1}; stops once
/// alpha_hi / alpha_lo <= pi / (2 log(1 + sqrt 2)) (1 + rel_tol) or the
/// interval collapses.
NormBracket groth_optimal_alpha(const Matrix& g, const BracketOptions& options = {});

}  // namespace cssel
