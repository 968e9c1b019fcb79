#include "cssel/matcore.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "cssel/errors.hpp"
#include "eig_unchecked.hpp"

namespace cssel {

void require_finite(const Matrix& a, std::string_view what) {
  if (!a.allFinite()) throw DomainError(std::string(what) + ": matrix has non-finite entries");
}

double symmetry_defect(const Matrix& h) {
  if (h.rows() != h.cols()) return std::numeric_limits<double>::infinity();
  if (h.size() == 0) return 0.0;
  return (h - h.transpose()).cwiseAbs().maxCoeff();
}

void require_symmetric(const Matrix& h, std::string_view what) {
  if (h.rows() != h.cols()) {
    throw DomainError(std::string(what) + ": matrix is " + std::to_string(h.rows()) + "x" +
                      std::to_string(h.cols()) + ", expected square");
  }
  const double defect = symmetry_defect(h);
  if (!(defect <= kSymmetryTolerance)) {
    throw DomainError(std::string(what) + ": matrix is not symmetric (max |H - H^T| = " +
                      std::to_string(defect) + ")");
  }
}

bool is_standardized(const Matrix& a, double tol) {
  for (Index j = 0; j < a.cols(); ++j) {
    if (!(std::abs(a.col(j).norm() - 1.0) <= tol)) return false;
  }
  return true;
}

double frobenius_norm(const Matrix& a) {
  return a.norm();
}

double spectral_norm(const Matrix& a, double tol) {
  if (a.size() == 0) return 0.0;
  const Matrix gram = a.rows() < a.cols() ? Matrix(a * a.transpose()) : Matrix(a.transpose() * a);
  // Symmetrize away the rounding differences between (i,j) and (j,i).
  const Matrix sym = 0.5 * (gram + gram.transpose());
  const EigPair top = max_eig_pair(sym, tol);
  return std::sqrt(std::max(top.value, 0.0));
}

double stable_rank(const Matrix& a) {
  require_finite(a, "stable_rank");
  const double fro = frobenius_norm(a);
  if (fro == 0.0) throw DomainError("stable_rank: zero matrix has no stable rank");
  const double spec = spectral_norm(a);
  return (fro * fro) / (spec * spec);
}

double condition_number(const Matrix& a, double tol) {
  if (a.cols() == 0) throw DomainError("condition_number: matrix has no columns");
  require_finite(a, "condition_number");
  if (a.cols() > a.rows()) return std::numeric_limits<double>::infinity();
  const Eigen::JacobiSVD<Matrix> svd(a);
  const Vector& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  if (smax == 0.0 || smin <= tol * smax) return std::numeric_limits<double>::infinity();
  return smax / smin;
}

Matrix hollow_gram(const Matrix& a) {
  require_finite(a, "hollow_gram");
  for (Index j = 0; j < a.cols(); ++j) {
    const double nrm = a.col(j).norm();
    if (!(std::abs(nrm - 1.0) <= kStandardizedTolerance)) {
      throw DomainError("hollow_gram: column " + std::to_string(j) + " has norm " + std::to_string(nrm) +
                        ", expected a standardized matrix");
    }
  }
  const Matrix gram = a.transpose() * a;
  Matrix h = 0.5 * (gram + gram.transpose());
  h.diagonal().setZero();
  return h;
}

Matrix column_submatrix(const Matrix& a, const ColumnSubset& tau) {
  if (tau.ambient() != a.cols()) {
    throw DomainError("column_submatrix: subset indexes " + std::to_string(tau.ambient()) +
                      " columns, matrix has " + std::to_string(a.cols()));
  }
  Matrix out(a.rows(), tau.size());
  for (Index k = 0; k < tau.size(); ++k) out.col(k) = a.col(tau[k]);
  return out;
}

Matrix principal_submatrix(const Matrix& h, const ColumnSubset& tau) {
  if (h.rows() != h.cols()) throw DomainError("principal_submatrix: matrix is not square");
  if (tau.ambient() != h.cols()) {
    throw DomainError("principal_submatrix: subset indexes " + std::to_string(tau.ambient()) +
                      " columns, matrix has " + std::to_string(h.cols()));
  }
  Matrix out(tau.size(), tau.size());
  for (Index c = 0; c < tau.size(); ++c)
    for (Index r = 0; r < tau.size(); ++r) out(r, c) = h(tau[r], tau[c]);
  return out;
}

Matrix standardize(const Matrix& a) {
  require_finite(a, "standardize");
  Matrix out = a;
  for (Index j = 0; j < a.cols(); ++j) {
    const double nrm = a.col(j).norm();
    if (!(nrm > 1e-12)) throw DomainError("standardize: column " + std::to_string(j) + " is zero");
    out.col(j) /= nrm;
  }
  return out;
}

namespace {

struct RootEstimate {
  double value;
  double upper;  // certified: no eigenvalue of the block exceeds it
};

// Largest eigenvalue of the unreduced tridiagonal block [first, last) of
// (diag, sub). Laguerre's method on det(T - xI) started above the spectrum
// decreases monotonically to the top root; a point the Sturm signs place
// below the root falls back to bisection.
RootEstimate block_top_root(const Vector& diag, const Vector& sub, Index first, Index last, double tol,
                            double pivmin) {
  const Index m = last - first;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (Index i = first; i < last; ++i) {
    const double radius = (i > first ? std::abs(sub(i - 1)) : 0.0) + (i + 1 < last ? std::abs(sub(i)) : 0.0);
    lo = std::max(lo, diag(i));
    hi = std::max(hi, diag(i) + radius);
  }
  if (m == 1) return {diag(first), diag(first)};

  const double degree = static_cast<double>(m);
  hi += 2.0 * tol;  // Gershgorin bounds can be attained; start strictly above
  double x = hi;
  bool probed = false;
  for (int it = 0; it < 100 && hi - lo > tol; ++it) {
    // q_i: pivots of T - xI; g = sum 1/(x - lambda), h = sum 1/(x - lambda)^2.
    Index negative = 0;
    bool last_zero = false;
    double q = diag(first) - x;
    if (std::abs(q) < pivmin) {
      q = -pivmin;
      last_zero = m == 1;
    } else if (q < 0.0) {
      ++negative;
    }
    double dq = -1.0;
    double ddq = 0.0;
    double g = dq / q;
    double h = g * g;
    for (Index i = first + 1; i < last; ++i) {
      const double e2 = sub(i - 1) * sub(i - 1);
      const double r = 1.0 / q;
      ddq = e2 * r * r * (ddq - 2.0 * dq * dq * r);
      dq = -1.0 + e2 * dq * r * r;
      q = diag(i) - x - e2 * r;
      if (std::abs(q) < pivmin) {
        q = -pivmin;
        last_zero = i + 1 == last;
      } else if (q < 0.0) {
        ++negative;
      }
      const double ratio = dq / q;
      g += ratio;
      h += ratio * ratio - ddq / q;
    }
    // Only the final pivot vanished and the others are negative: x is the top root.
    if (last_zero && negative == m - 1) return {x, x + tol};
    const bool above_all = negative == m;

    if (!above_all) {
      // Usually a Laguerre step landing on the root within rounding: probe
      // just above it before resorting to bisection.
      lo = std::max(lo, x);
      x = !probed && lo + tol < hi ? lo + tol : 0.5 * (lo + hi);
      probed = true;
      continue;
    }
    if (!std::isfinite(g) || !std::isfinite(h) || !(g > 0.0)) {
      hi = x;
      x = 0.5 * (lo + hi);
      continue;
    }
    hi = x;
    const double disc = std::max(0.0, (degree - 1.0) * (degree * h - g * g));
    const double step = degree / (g + std::sqrt(disc));
    if (step <= 2.0 * tol) return {x - step, x};
    x -= step;
    if (!(x > lo)) x = 0.5 * (lo + hi);
  }
  return {0.5 * (lo + hi), hi};
}

// Householder reduction Q^T H Q = T of a symmetric matrix. Reflector k acts on
// entries k+1.. and is stored (leading 1 implicit) in column k of `packed`
// below the subdiagonal, with coefficient beta(k).
struct Tridiagonal {
  Matrix packed;
  Vector diag;
  Vector sub;
  Vector beta;
  Vector p;
};

void tridiagonalize(const Matrix& h, Tridiagonal& t) {
  const Index n = h.rows();
  t.packed = h;
  t.diag.resize(n);
  t.sub.resize(n - 1);
  t.beta.setZero(n);
  t.p.resize(n);
  Matrix& a = t.packed;

  for (Index k = 0; k + 2 < n; ++k) {
    const Index m = n - k - 1;
    double* v = &a(k + 1, k);
    double sigma = 0.0;
    for (Index i = 1; i < m; ++i) sigma += v[i] * v[i];
    const double x0 = v[0];
    if (sigma == 0.0) {
      t.sub(k) = x0;
      continue;
    }
    const double mu = std::sqrt(x0 * x0 + sigma);
    const double v0 = x0 <= 0.0 ? x0 - mu : -sigma / (x0 + mu);
    const double beta = 2.0 * v0 * v0 / (sigma + v0 * v0);
    for (Index i = 1; i < m; ++i) v[i] /= v0;
    v[0] = 1.0;
    t.beta(k) = beta;
    t.sub(k) = mu;

    // p = beta A22 v, w = p - (beta p.v / 2) v, A22 -= v w^T + w v^T, on
    // the lower triangle of A22 only.
    double* p = t.p.data();
    for (Index j = 0; j < m; ++j) p[j] = 0.0;
    for (Index i = 0; i < m; ++i) {
      const double* col = &a(k + 1, k + 1 + i);
      const double vi = beta * v[i];
      double acc = col[i] * vi;
      for (Index j = i + 1; j < m; ++j) {
        p[j] += col[j] * vi;
        acc += col[j] * beta * v[j];
      }
      p[i] += acc;
    }
    double pv = 0.0;
    for (Index j = 0; j < m; ++j) pv += p[j] * v[j];
    const double c = 0.5 * beta * pv;
    for (Index j = 0; j < m; ++j) p[j] -= c * v[j];
    for (Index i = 0; i < m; ++i) {
      double* col = &a(k + 1, k + 1 + i);
      const double vi = v[i];
      const double wi = p[i];
      for (Index j = i; j < m; ++j) col[j] -= v[j] * wi + p[j] * vi;
    }
  }
  for (Index i = 0; i < n; ++i) t.diag(i) = a(i, i);
  t.sub(n - 2) = a(n - 1, n - 2);
}

// y <- Q y for the Q of tridiagonalize.
void apply_q(const Tridiagonal& t, Vector& y) {
  const Index n = y.size();
  for (Index k = n - 3; k >= 0; --k) {
    const double beta = t.beta(k);
    if (beta == 0.0) continue;
    const Index m = n - k - 1;
    const double* v = &t.packed(k + 1, k);
    double* seg = y.data() + k + 1;
    double dot = seg[0];
    for (Index i = 1; i < m; ++i) dot += v[i] * seg[i];
    dot *= beta;
    seg[0] -= dot;
    for (Index i = 1; i < m; ++i) seg[i] -= dot * v[i];
  }
}

// Top eigenpair through Householder tridiagonalization, a Laguerre/bisection
// root search per unreduced block and inverse iteration shifted just above the
// root (the shifted matrix is positive definite, so a tridiagonal Cholesky
// suffices).
EigPair top_pair_tridiagonal(const Matrix& h) {
  const Index n = h.rows();
  thread_local Tridiagonal tri;
  tridiagonalize(h, tri);
  const Vector& diag = tri.diag;
  Vector& sub = tri.sub;

  const double eps = std::numeric_limits<double>::epsilon();
  const double scale = std::max({diag.cwiseAbs().maxCoeff(), sub.cwiseAbs().maxCoeff(),
                                 std::numeric_limits<double>::min()});
  const double tol = 4.0 * eps * scale;
  const double pivmin = std::numeric_limits<double>::min() * std::max(1.0, scale * scale);

  RootEstimate top{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  double upper = -std::numeric_limits<double>::infinity();
  Index first = 0;
  for (Index i = 0; i < n; ++i) {
    const bool split = i + 1 == n || std::abs(sub(i)) <= eps * (std::abs(diag(i)) + std::abs(diag(i + 1)));
    if (!split) continue;
    if (i + 1 < n) sub(i) = 0.0;
    const RootEstimate block = block_top_root(diag, sub, first, i + 1, tol, pivmin);
    if (block.value > top.value) top = block;
    upper = std::max(upper, block.upper);
    first = i + 1;
  }
  const double lambda = top.value;
  const double shift = upper + 64.0 * eps * scale;

  // Cholesky of shift*I - T: l_i on the diagonal, m_i below it.
  thread_local Vector l;
  thread_local Vector m;
  l.resize(n);
  m.resize(n - 1);
  const double floor_pivot = eps * eps * scale;
  double pivot = shift - diag(0);
  l(0) = std::sqrt(std::max(pivot, floor_pivot));
  for (Index i = 0; i + 1 < n; ++i) {
    m(i) = -sub(i) / l(i);
    pivot = shift - diag(i + 1) - m(i) * m(i);
    l(i + 1) = std::sqrt(std::max(pivot, floor_pivot));
  }

  EigPair out;
  out.value = lambda;
  Vector& y = out.vector;
  y.resize(n);
  for (Index i = 0; i < n; ++i) y(i) = 1.0 + 0.1 * static_cast<double>((i * 7919) % 13);
  y.normalize();
  for (int it = 0; it < 3; ++it) {
    // Forward solve L z = y, then L^T y = z.
    y(0) /= l(0);
    for (Index i = 1; i < n; ++i) y(i) = (y(i) - m(i - 1) * y(i - 1)) / l(i);
    y(n - 1) /= l(n - 1);
    for (Index i = n - 2; i >= 0; --i) y(i) = (y(i) - m(i) * y(i + 1)) / l(i);
    y.normalize();
  }

  apply_q(tri, y);
  y.normalize();
  return out;
}

void finish_pair(const Matrix& h, EigPair& pair) {
  Index arg = 0;
  pair.vector.cwiseAbs().maxCoeff(&arg);
  if (pair.vector(arg) < 0.0) pair.vector = -pair.vector;
  pair.residual = (h * pair.vector - pair.value * pair.vector).norm();
}

}  // namespace

EigPair max_eig_pair(const Matrix& h, double tol) {
  if (!(tol > 0.0)) throw DomainError("max_eig_pair: tolerance must be positive");
  if (h.rows() == 0) throw DomainError("max_eig_pair: empty matrix");
  require_finite(h, "max_eig_pair");
  require_symmetric(h, "max_eig_pair");
  return detail::max_eig_pair_unchecked(h, tol);
}

EigPair detail::max_eig_pair_unchecked(const Matrix& h, double tol) {
  const Index n = h.rows();
  const double limit = tol * std::max(1.0, h.norm());

  EigPair out;
  if (n == 1) {
    out.value = h(0, 0);
    out.vector = Vector::Ones(1);
  } else {
    out = top_pair_tridiagonal(h);
  }
  finish_pair(h, out);
  if (out.residual <= limit && out.vector.allFinite()) return out;

  // Fallback: full dense decomposition.
  const Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success) throw SolverError("max_eig_pair: eigen solver did not converge");
  out.value = solver.eigenvalues()(n - 1);
  out.vector = solver.eigenvectors().col(n - 1).normalized();
  finish_pair(h, out);
  if (!(out.residual <= limit)) {
    throw SolverError("max_eig_pair: residual " + std::to_string(out.residual) + " exceeds tolerance");
  }
  return out;
}

namespace {

// Enumerates x in {-1,+1}^s with x_0 = +1 (the norms are even in x) along a
// Gray code, keeping y = M x up to date with one column update per step.
template <class Score>
SignedNorm enumerate_signs(const Matrix& m, Index cap, const char* what, Score score) {
  require_finite(m, what);
  const Index s = m.cols();
  if (s > cap) {
    throw DomainError(std::string(what) + ": " + std::to_string(s) + " columns exceed the enumeration cap of " +
                      std::to_string(cap));
  }
  SignedNorm best;
  if (s == 0) return best;

  Vector x = Vector::Ones(s);
  Vector y = m * x;
  double best_score = score(y);
  best.witness = x;

  const std::uint64_t steps = std::uint64_t{1} << (s - 1);
  for (std::uint64_t k = 1; k < steps; ++k) {
    const Index c = std::countr_zero(k) + 1;
    y.noalias() -= (2.0 * x(c)) * m.col(c);
    x(c) = -x(c);
    if ((k & 4095) == 0) y.noalias() = m * x;  // resync accumulated rounding
    const double sc = score(y);
    if (sc > best_score) {
      best_score = sc;
      best.witness = x;
    }
  }
  return best;
}

}  // namespace

SignedNorm norm_inf2_exact(const Matrix& b, Index cap) {
  SignedNorm out = enumerate_signs(b, cap, "norm_inf2_exact", [](const Vector& y) { return y.squaredNorm(); });
  if (out.witness.size() > 0) out.value = (b * out.witness).norm();
  return out;
}

SignedNorm norm_inf1_exact(const Matrix& g, Index cap) {
  SignedNorm out = enumerate_signs(g, cap, "norm_inf1_exact", [](const Vector& y) { return y.lpNorm<1>(); });
  if (out.witness.size() > 0) out.value = (g * out.witness).lpNorm<1>();
  return out;
}

Vector sign_vector(const Vector& u) {
  Vector x(u.size());
  for (Index j = 0; j < u.size(); ++j) x(j) = u(j) < 0.0 ? -1.0 : 1.0;
  return x;
}

double inf2_probe(const Matrix& b, const Vector& signs) {
  return (b * signs).norm();
}

double inf1_probe(const Matrix& g, const Vector& signs) {
  return (g * signs).lpNorm<1>();
}

SignedNorm improve_inf2_probe(const Matrix& b, Vector signs) {
  const Index s = b.cols();
  const Vector col_sq = b.colwise().squaredNorm().transpose();
  Vector y = b * signs;
  // Flipping x_j changes ||y||^2 by 4 (||b_j||^2 - x_j <b_j, y>).
  for (Index pass = 0; pass < 4 * s + 4; ++pass) {
    bool improved = false;
    for (Index j = 0; j < s; ++j) {
      const double gain = col_sq(j) - signs(j) * b.col(j).dot(y);
      if (gain > 1e-12 * std::max(1.0, y.squaredNorm())) {
        y.noalias() -= (2.0 * signs(j)) * b.col(j);
        signs(j) = -signs(j);
        improved = true;
      }
    }
    if (!improved) break;
  }
  SignedNorm out;
  out.value = inf2_probe(b, signs);
  out.witness = std::move(signs);
  return out;
}

SignedNorm improve_inf1_probe(const Matrix& g, Vector signs) {
  const Index s = g.cols();
  Vector y = g * signs;
  double current = y.lpNorm<1>();
  for (Index pass = 0; pass < 4 * s + 4; ++pass) {
    bool improved = false;
    for (Index j = 0; j < s; ++j) {
      const Vector trial = y - (2.0 * signs(j)) * g.col(j);
      const double value = trial.lpNorm<1>();
      if (value > current * (1.0 + 1e-12)) {
        y = trial;
        current = value;
        signs(j) = -signs(j);
        improved = true;
      }
    }
    if (!improved) break;
  }
  SignedNorm out;
  out.value = inf1_probe(g, signs);
  out.witness = std::move(signs);
  return out;
}

}  // namespace cssel
