#include "cssel/grothendieck.hpp"

#include <cmath>
#include <string>

#include "bracket_search.hpp"
#include "eig_unchecked.hpp"
#include "cssel/errors.hpp"

namespace cssel {

GrothendieckObjective::GrothendieckObjective(const Matrix& g, double alpha, double eig_tol)
    : g_(&g), alpha_(alpha), eig_tol_(eig_tol) {
  require_finite(g, "groth_objective");
  require_symmetric(g, "groth_objective");
  if (!(alpha >= 0.0)) throw DomainError("groth_objective: alpha must be nonnegative");
}

SubgradientSample GrothendieckObjective::operator()(const Vector& f) {
  const Matrix& g = *g_;
  if (f.size() != g.rows()) {
    throw DomainError("groth_objective: weight vector has dimension " + std::to_string(f.size()) +
                      ", expected " + std::to_string(g.rows()));
  }
  if (!f.allFinite()) throw DomainError("groth_objective: weight vector is not finite");
  plus_ = g;
  plus_.diagonal() -= alpha_ * f;
  minus_ = -g;
  minus_.diagonal() -= alpha_ * f;
  EigPair top = detail::max_eig_pair_unchecked(plus_, eig_tol_);
  EigPair other = detail::max_eig_pair_unchecked(minus_, eig_tol_);
  if (other.value > top.value) top = std::move(other);

  Vector signs = sign_vector(top.vector);
  const double probe = inf1_probe(g, signs);
  if (probe > probe_.value) {
    probe_.value = probe;
    probe_.witness = std::move(signs);
  }
  return SubgradientSample{top.value, -alpha_ * top.vector.array().square().matrix()};
}

SubgradientSample groth_objective(const Matrix& g, double alpha, const Vector& f) {
  GrothendieckObjective objective(g, alpha);
  return objective(f);
}

Matrix groth_block_matrix(const Matrix& g, double alpha, const Vector& f) {
  const Index s = g.rows();
  Matrix block = Matrix::Zero(2 * s, 2 * s);
  block.topRightCorner(s, s) = g;
  block.bottomLeftCorner(s, s) = g;
  block.diagonal().head(s) = -alpha * f;
  block.diagonal().tail(s) = -alpha * f;
  return block;
}

Factorization groth_from_weights(const Matrix& g, double alpha, const Vector& f, double eta) {
  const Index s = g.rows();
  if (f.size() != s) throw DomainError("groth_from_weights: weight dimension mismatch");
  if (!is_simplex_point(f, 1e-9)) throw DomainError("groth_from_weights: weights are not a simplex point");
  if (!(alpha > 0.0)) throw DomainError("groth_from_weights: alpha must be positive");

  Factorization fact;
  fact.kind = FactorizationKind::grothendieck;
  fact.alpha = alpha;
  fact.eta = eta;

  Vector weights_sq = f / f.sum();
  double bound = alpha;
  if (eta > 0.0) {
    // Adding eta I to both diagonal blocks: alpha F + eta I = (alpha + eta s) F~.
    const double scale = alpha + eta * static_cast<double>(s);
    weights_sq = ((alpha * weights_sq).array() + eta).matrix() / scale;
    bound = scale;
    fact.rescaled = true;
  }

  const double g_fro = g.norm();
  Vector d = weights_sq.array().sqrt().matrix();
  for (Index j = 0; j < s; ++j) {
    if (weights_sq(j) >= kZeroWeight) continue;
    const double row = g.row(j).norm();
    if (row > 1e-6 * g_fro) {
      throw SolverError("groth_factorize: weight of index " + std::to_string(j) +
                        " vanished but row " + std::to_string(j) + " has norm " + std::to_string(row));
    }
    d(j) = 0.0;
  }
  d /= d.norm();

  Vector d_pinv = Vector::Zero(s);
  for (Index j = 0; j < s; ++j) {
    if (d(j) > 0.0) d_pinv(j) = 1.0 / d(j);
  }
  Matrix t = d_pinv.asDiagonal() * g * d_pinv.asDiagonal();
  t = 0.5 * (t + t.transpose());

  fact.weights = std::move(d);
  fact.factor = std::move(t);
  fact.reconstruction_residual = (g - fact.weights.asDiagonal() * fact.factor * fact.weights.asDiagonal()).norm();
  fact.factor_norm = spectral_norm(fact.factor);
  fact.alpha_effective = std::max(bound, fact.factor_norm);
  return fact;
}

FactorizeOutcome groth_factorize(const Matrix& g, double alpha, const FactorizeOptions& options) {
  require_finite(g, "groth_factorize");
  require_symmetric(g, "groth_factorize");
  if (g.rows() == 0) throw DomainError("groth_factorize: empty matrix");
  if (!(alpha > 0.0)) throw DomainError("groth_factorize: alpha must be positive");

  GrothendieckObjective objective(g, alpha, options.eig_tol);
  EmdOptions emd;
  emd.iterations = options.emd_iterations;
  emd.step_mode = options.step_mode;
  emd.stop_below = 0.0;
  const EmdRun run = emd_minimize(std::ref(objective), g.rows(), emd);

  FactorizeOutcome out;
  out.eta = run.best_value;
  out.solver_iterations = run.iterations;
  out.eta_lower_bound = run.lower_bound;
  out.probe = objective.best_probe();
  if (run.best_value > options.eta_cap) return out;
  out.factorization = groth_from_weights(g, alpha, run.best_point, run.best_value);
  out.factorization->solver_iterations = run.iterations;
  return out;
}

NormBracket groth_optimal_alpha(const Matrix& g, const BracketOptions& options) {
  require_finite(g, "groth_optimal_alpha");
  require_symmetric(g, "groth_optimal_alpha");
  const Index s = g.rows();
  if (s == 0) throw DomainError("groth_optimal_alpha: empty matrix");

  detail::BracketProblem problem;
  problem.constant = kGrothendieckUpper;
  problem.improve = [&g](const Vector& x) { return improve_inf1_probe(g, x); };

  const EigPair up = max_eig_pair(g);
  const EigPair down = max_eig_pair(Matrix(-g));
  SignedNorm best = problem.improve(Vector::Ones(s));
  for (const EigPair* pair : {&up, &down}) {
    SignedNorm candidate = problem.improve(sign_vector(pair->vector));
    if (candidate.value > best.value) best = std::move(candidate);
  }
  problem.initial_lower = std::move(best);

  const double spec = std::max(std::abs(up.value), std::abs(down.value));
  problem.upper_seed = spec > 0.0 ? static_cast<double>(s) * spec * kGrothendieckUpper : 1.0;
  problem.factorize = [&g, &options](double alpha) { return groth_factorize(g, alpha, options.factorize); };
  problem.factor_probe = [](const Factorization& fact) {
    const EigPair up_t = max_eig_pair(fact.factor);
    const EigPair down_t = max_eig_pair(Matrix(-fact.factor));
    return sign_vector(up_t.value >= down_t.value ? up_t.vector : down_t.vector);
  };
  return detail::bracket_search(problem, options);
}

}  // namespace cssel
