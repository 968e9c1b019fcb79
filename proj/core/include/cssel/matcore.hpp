#pragma once

#include <string_view>

#include "cssel/types.hpp"

namespace cssel {

/// Default relative residual tolerance for the symmetric eigen solve.
inline constexpr double kEigenTolerance = 1e-10;
/// Absolute tolerance on max |H - H^T| before a matrix counts as asymmetric.
inline constexpr double kSymmetryTolerance = 1e-10;
/// Columns must have unit 2-norm within this tolerance to count as standardized.
inline constexpr double kStandardizedTolerance = 1e-8;
/// Largest column count accepted by the sign-enumeration oracles.
inline constexpr Index kSignEnumerationCap = 22;

/// Algebraically largest eigenvalue of a symmetric matrix with a unit
/// eigenvector and its residual ||H v - value v||_2.
struct EigPair {
  double value = 0.0;
  Vector vector;
  double residual = 0.0;
};

/// Value of an (inf,2) or (inf,1) norm together with an attaining sign vector.
struct SignedNorm {
  double value = 0.0;
  Vector witness;
};

void require_finite(const Matrix& a, std::string_view what);
double symmetry_defect(const Matrix& h);
void require_symmetric(const Matrix& h, std::string_view what);
bool is_standardized(const Matrix& a, double tol = kStandardizedTolerance);

double frobenius_norm(const Matrix& a);

/// Largest singular value, from the top eigenvalue of the smaller Gram matrix.
double spectral_norm(const Matrix& a, double tol = kEigenTolerance);

/// ||A||_F^2 / ||A||^2. Throws DomainError for the zero matrix.
double stable_rank(const Matrix& a);

/// sigma_max / sigma_min of A restricted to unit vectors in R^n. Returns +inf
/// when sigma_min <= tol * sigma_max, including the wide case n > m.
double condition_number(const Matrix& a, double tol = 1e-12);

/// H = A^T A - I for a standardized A; symmetric with an exactly zero diagonal.
Matrix hollow_gram(const Matrix& a);

Matrix column_submatrix(const Matrix& a, const ColumnSubset& tau);
Matrix principal_submatrix(const Matrix& h, const ColumnSubset& tau);

/// Scales every column to unit 2-norm. Throws DomainError naming the first
/// column whose norm is at most 1e-12.
Matrix standardize(const Matrix& a);

/// Top eigenpair of a symmetric matrix. Rejects asymmetric input and throws
/// SolverError if the residual exceeds tol * max(1, ||H||_F).
EigPair max_eig_pair(const Matrix& h, double tol = kEigenTolerance);

/// max ||B x||_2 over x in {-1,+1}^s by Gray-code enumeration.
SignedNorm norm_inf2_exact(const Matrix& b, Index cap = kSignEnumerationCap);

/// max ||G x||_1 over x in {-1,+1}^s by Gray-code enumeration.
SignedNorm norm_inf1_exact(const Matrix& g, Index cap = kSignEnumerationCap);

// Sign-vector probes. Any sign vector x certifies ||B||_{inf->2} >= ||Bx||_2
// and ||G||_{inf->1} >= ||Gx||_1; the improvers run single-flip ascent.

/// Entrywise sign with sign(0) = +1.
Vector sign_vector(const Vector& u);
double inf2_probe(const Matrix& b, const Vector& signs);
double inf1_probe(const Matrix& g, const Vector& signs);
SignedNorm improve_inf2_probe(const Matrix& b, Vector signs);
SignedNorm improve_inf1_probe(const Matrix& g, Vector signs);

}  // namespace cssel
