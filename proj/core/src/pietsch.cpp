#include "cssel/pietsch.hpp"

#include <cmath>
#include <string>

#include "bracket_search.hpp"
#include "eig_unchecked.hpp"
#include "cssel/errors.hpp"

namespace cssel {

PietschObjective::PietschObjective(const Matrix& b, double alpha, double eig_tol)
    : b_(&b), alpha_(alpha), eig_tol_(eig_tol) {
  require_finite(b, "pietsch_objective");
  if (!(alpha >= 0.0)) throw DomainError("pietsch_objective: alpha must be nonnegative");
  const Matrix gram = b.transpose() * b;
  gram_ = 0.5 * (gram + gram.transpose());
}

SubgradientSample PietschObjective::operator()(const Vector& f) {
  if (f.size() != gram_.rows()) {
    throw DomainError("pietsch_objective: weight vector has dimension " + std::to_string(f.size()) +
                      ", expected " + std::to_string(gram_.rows()));
  }
  if (!f.allFinite()) throw DomainError("pietsch_objective: weight vector is not finite");
  const double a2 = alpha_ * alpha_;
  work_ = gram_;
  work_.diagonal() -= a2 * f;
  const EigPair top = detail::max_eig_pair_unchecked(work_, eig_tol_);

  Vector signs = sign_vector(top.vector);
  const double probe = inf2_probe(*b_, signs);
  if (probe > probe_.value) {
    probe_.value = probe;
    probe_.witness = std::move(signs);
  }
  return SubgradientSample{top.value, -a2 * top.vector.array().square().matrix()};
}

SubgradientSample pietsch_objective(const Matrix& b, double alpha, const Vector& f) {
  PietschObjective objective(b, alpha);
  return objective(f);
}

Factorization pietsch_from_weights(const Matrix& b, double alpha, const Vector& f, double eta) {
  const Index s = b.cols();
  if (f.size() != s) throw DomainError("pietsch_from_weights: weight dimension mismatch");
  if (!is_simplex_point(f, 1e-9)) throw DomainError("pietsch_from_weights: weights are not a simplex point");
  if (!(alpha > 0.0)) throw DomainError("pietsch_from_weights: alpha must be positive");

  Factorization fact;
  fact.kind = FactorizationKind::pietsch;
  fact.alpha = alpha;
  fact.eta = eta;

  const double a2 = alpha * alpha;
  Vector weights_sq = f / f.sum();
  double bound = alpha;
  if (eta > 0.0) {
    const double scale = a2 + eta * static_cast<double>(s);
    weights_sq = ((a2 * weights_sq).array() + eta).matrix() / scale;
    bound = std::sqrt(scale);
    fact.rescaled = true;
  }

  const double b_fro = b.norm();
  Vector d = weights_sq.array().sqrt().matrix();
  for (Index j = 0; j < s; ++j) {
    if (weights_sq(j) >= kZeroWeight) continue;
    const double col = b.col(j).norm();
    if (col > 1e-6 * b_fro) {
      throw SolverError("pietsch_factorize: weight of column " + std::to_string(j) +
                        " vanished but the column has norm " + std::to_string(col));
    }
    d(j) = 0.0;
  }
  d /= d.norm();

  Matrix t = Matrix::Zero(b.rows(), s);
  for (Index j = 0; j < s; ++j) {
    if (d(j) > 0.0) t.col(j) = b.col(j) / d(j);
  }
  fact.weights = std::move(d);
  fact.factor = std::move(t);
  fact.reconstruction_residual = (b - fact.factor * fact.weights.asDiagonal()).norm();
  fact.factor_norm = spectral_norm(fact.factor);
  fact.alpha_effective = std::max(bound, fact.factor_norm);
  return fact;
}

FactorizeOutcome pietsch_factorize(const Matrix& b, double alpha, const FactorizeOptions& options) {
  require_finite(b, "pietsch_factorize");
  if (b.cols() == 0 || b.norm() == 0.0) throw DomainError("pietsch_factorize: matrix must be nonzero");
  if (!(alpha > 0.0)) throw DomainError("pietsch_factorize: alpha must be positive");

  PietschObjective objective(b, alpha, options.eig_tol);
  EmdOptions emd;
  emd.iterations = options.emd_iterations;
  emd.step_mode = options.step_mode;
  emd.stop_below = 0.0;
  const EmdRun run = emd_minimize(std::ref(objective), b.cols(), emd);

  FactorizeOutcome out;
  out.eta = run.best_value;
  out.solver_iterations = run.iterations;
  out.eta_lower_bound = run.lower_bound;
  out.probe = objective.best_probe();
  if (run.best_value > options.eta_cap) return out;
  out.factorization = pietsch_from_weights(b, alpha, run.best_point, run.best_value);
  out.factorization->solver_iterations = run.iterations;
  return out;
}

NormBracket pietsch_optimal_alpha(const Matrix& b, const BracketOptions& options) {
  require_finite(b, "pietsch_optimal_alpha");
  if (b.cols() == 0 || b.norm() == 0.0) throw DomainError("pietsch_optimal_alpha: matrix must be nonzero");

  const Index s = b.cols();
  const Matrix gram = b.transpose() * b;
  const EigPair top = max_eig_pair(0.5 * (gram + gram.transpose()));

  detail::BracketProblem problem;
  problem.constant = kPietschConstant;
  problem.improve = [&b](const Vector& x) { return improve_inf2_probe(b, x); };
  SignedNorm from_top = problem.improve(sign_vector(top.vector));
  SignedNorm from_ones = problem.improve(Vector::Ones(s));
  problem.initial_lower = from_top.value >= from_ones.value ? from_top : from_ones;
  problem.upper_seed = std::sqrt(static_cast<double>(s)) * std::sqrt(std::max(top.value, 0.0)) * kPietschConstant;
  problem.factorize = [&b, &options](double alpha) { return pietsch_factorize(b, alpha, options.factorize); };
  problem.factor_probe = [](const Factorization& fact) {
    const Matrix tt = fact.factor.transpose() * fact.factor;
    return sign_vector(max_eig_pair(0.5 * (tt + tt.transpose())).vector);
  };
  return detail::bracket_search(problem, options);
}

}  // namespace cssel
