#include <doctest.h>

#include <cmath>
#include <limits>

#include "../oracles.hpp"
#include "cssel/errors.hpp"
#include "cssel/matcore.hpp"

using namespace cssel;

TEST_CASE("frobenius and spectral norms on small closed forms") {
  CHECK(frobenius_norm(Matrix::Identity(2, 2)) == doctest::Approx(std::sqrt(2.0)));
  CHECK(frobenius_norm(Matrix::Zero(3, 3)) == 0.0);
  CHECK(frobenius_norm(oracle::double_identity(2)) == doctest::Approx(2.0));

  CHECK(spectral_norm(Matrix::Identity(2, 2)) == doctest::Approx(1.0));
  Matrix d = Matrix::Zero(2, 2);
  d.diagonal() << 3.0, 1.0;
  CHECK(spectral_norm(d) == doctest::Approx(3.0));
  CHECK(spectral_norm(oracle::double_identity(2)) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("stable rank") {
  CHECK(stable_rank(Matrix::Identity(5, 5)) == doctest::Approx(5.0));
  CHECK(stable_rank(oracle::double_identity(2)) == doctest::Approx(2.0));
  Matrix twins(3, 2);
  twins << 1, 1, 0, 0, 0, 0;
  CHECK(stable_rank(twins) == doctest::Approx(1.0));
  CHECK_THROWS_AS(stable_rank(Matrix::Zero(2, 2)), DomainError);
}

TEST_CASE("stable rank never exceeds the numerical rank") {
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const Index m = 3 + rng.below(6), n = 2 + rng.below(8), r = 1 + rng.below(std::min(m, n));
    // Rank-r product with unit columns.
    Matrix a = gaussian_matrix(m, r, rng) * gaussian_matrix(r, n, rng);
    a = standardize(a);
    CHECK(stable_rank(a) <= static_cast<double>(oracle::numerical_rank(a)) + 1e-9);
    CHECK(stable_rank(a) >= 1.0 - 1e-12);
  }
}

TEST_CASE("condition number") {
  Rng rng(3);
  const Eigen::HouseholderQR<Matrix> qr(gaussian_matrix(6, 3, rng));
  const Matrix q = qr.householderQ() * Matrix::Identity(6, 3);
  CHECK(condition_number(q) == doctest::Approx(1.0));

  Matrix dup(3, 2);
  dup << 1, 1, 0, 0, 0, 0;
  CHECK(condition_number(dup) == std::numeric_limits<double>::infinity());

  Matrix d = Matrix::Zero(2, 2);
  d.diagonal() << std::sqrt(1.5), std::sqrt(0.5);
  CHECK(condition_number(d) == doctest::Approx(std::sqrt(3.0)));

  CHECK(condition_number(oracle::double_identity(3)) == std::numeric_limits<double>::infinity());
}

TEST_CASE("hollow gram") {
  CHECK(hollow_gram(Matrix::Identity(3, 3)).isZero());

  const Matrix h = hollow_gram(oracle::double_identity(2));
  Matrix expected = Matrix::Zero(4, 4);
  expected(0, 2) = expected(2, 0) = expected(1, 3) = expected(3, 1) = 1.0;
  CHECK(h.isApprox(expected));

  Matrix row(1, 2);
  row << 1, 1;
  Matrix swap(2, 2);
  swap << 0, 1, 1, 0;
  CHECK(hollow_gram(row).isApprox(swap));

  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 1) = 0.5;
  try {
    hollow_gram(bad);
    FAIL("expected a domain error");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("column 1") != std::string::npos);
  }
}

TEST_CASE("submatrices") {
  const Matrix a = oracle::double_identity(2);
  const Matrix sub = column_submatrix(a, ColumnSubset({0, 2}, 4));
  CHECK(sub.rows() == 2);
  CHECK(sub.cols() == 2);
  CHECK(sub.col(0) == a.col(0));
  CHECK(sub.col(1) == a.col(2));
  CHECK(column_submatrix(a, ColumnSubset::all(4)) == a);
  CHECK(column_submatrix(a, ColumnSubset({}, 4)).cols() == 0);

  Matrix h(4, 4);
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 4; ++j) h(i, j) = static_cast<double>(10 * i + j);
  const Matrix p = principal_submatrix(h, ColumnSubset({1, 3}, 4));
  Matrix expected(2, 2);
  expected << 11, 13, 31, 33;
  CHECK(p == expected);
}

TEST_CASE("principal submatrix of the hollow gram equals the hollow gram of the column submatrix") {
  Rng rng(5);
  const Matrix a = oracle::random_standardized(6, 9, rng);
  const ColumnSubset tau({0, 3, 4, 8}, 9);
  CHECK(principal_submatrix(hollow_gram(a), tau).isApprox(hollow_gram(column_submatrix(a, tau)), 1e-12));
  const Matrix h = hollow_gram(a);
  CHECK(symmetry_defect(h) <= 1e-12);
  CHECK(h.diagonal().isZero());
}

TEST_CASE("standardize") {
  Rng rng(2);
  const Matrix a = oracle::random_standardized(4, 3, rng);
  CHECK(standardize(a).isApprox(a, 1e-15));
  Matrix d = Matrix::Zero(2, 2);
  d.diagonal() << 2.0, 5.0;
  CHECK(standardize(d).isApprox(Matrix::Identity(2, 2)));
  const Matrix ones = standardize(Matrix::Ones(4, 1));
  CHECK(ones.isApprox(Matrix::Constant(4, 1, 0.5)));
  Matrix zero_col = Matrix::Identity(3, 3);
  zero_col.col(2).setZero();
  CHECK_THROWS_WITH_AS(standardize(zero_col), doctest::Contains("column 2"), DomainError);
}

TEST_CASE("max_eig_pair closed forms") {
  Matrix d = Matrix::Zero(2, 2);
  d.diagonal() << 3.0, 1.0;
  EigPair p = max_eig_pair(d);
  CHECK(p.value == doctest::Approx(3.0));
  CHECK(std::abs(p.vector(0)) == doctest::Approx(1.0));

  Matrix swap(2, 2);
  swap << 0, 1, 1, 0;
  p = max_eig_pair(swap);
  CHECK(p.value == doctest::Approx(1.0));
  CHECK(std::abs(p.vector(0)) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(p.vector(0) * p.vector(1) > 0.0);

  Matrix asym = Matrix::Identity(2, 2);
  asym(0, 1) = 1e-6;
  CHECK_THROWS_AS(max_eig_pair(asym), DomainError);
}

TEST_CASE("max_eig_pair agrees with the Jacobi oracle up to 50x50") {
  Rng rng(2024);
  for (Index n : {1, 2, 3, 5, 8, 13, 21, 34, 50}) {
    for (int trial = 0; trial < 4; ++trial) {
      const Matrix h = oracle::random_symmetric(n, rng);
      const EigPair p = max_eig_pair(h);
      CAPTURE(n);
      CHECK(std::abs(p.value - oracle::jacobi_max_eigenvalue(h)) <= 1e-8);
      CHECK(std::abs(p.vector.norm() - 1.0) <= 1e-12);
      CHECK(p.residual <= kEigenTolerance * std::max(1.0, h.norm()));
      CHECK(p.value >= p.vector.dot(h * p.vector) - p.residual - 1e-14 * std::max(1.0, h.norm()));
    }
  }
}

TEST_CASE("max_eig_pair on degenerate spectra") {
  Rng rng(9);
  // Repeated top eigenvalue, rank-one, zero, block-diagonal and negative definite cases.
  const Matrix q = Eigen::HouseholderQR<Matrix>(gaussian_matrix(7, 7, rng)).householderQ();
  Vector spectrum(7);
  spectrum << 2, 2, 2, 1, 0, -1, -3;
  const Matrix repeated = q * spectrum.asDiagonal() * q.transpose();
  const Vector u = gaussian_matrix(6, 1, rng);
  Matrix blocks = Matrix::Zero(6, 6);
  blocks.topLeftCorner(3, 3) = oracle::random_symmetric(3, rng);
  blocks.bottomRightCorner(3, 3) = oracle::random_symmetric(3, rng);
  const Matrix cases[] = {
      (repeated + repeated.transpose()) / 2.0, u * u.transpose(), Matrix::Zero(5, 5), blocks,
      -Matrix::Identity(4, 4) - u.head(4) * u.head(4).transpose(), Matrix::Constant(6, 6, 1.0)};
  for (const Matrix& h : cases) {
    const EigPair p = max_eig_pair(h);
    CHECK(std::abs(p.value - oracle::jacobi_max_eigenvalue(h)) <= 1e-8 * std::max(1.0, h.norm()));
    CHECK(p.residual <= kEigenTolerance * std::max(1.0, h.norm()));
  }
}

TEST_CASE("exact sign-enumeration norms") {
  CHECK(norm_inf2_exact(Matrix::Identity(2, 2)).value == doctest::Approx(std::sqrt(2.0)));
  Matrix row(1, 2);
  row << 1, 1;
  const SignedNorm r = norm_inf2_exact(row);
  CHECK(r.value == doctest::Approx(2.0));
  CHECK(std::abs(r.witness.sum()) == doctest::Approx(2.0));

  Matrix swap(2, 2);
  swap << 0, 1, 1, 0;
  const SignedNorm g = norm_inf1_exact(swap);
  CHECK(g.value == doctest::Approx(2.0));
  CHECK(norm_inf1_exact(Matrix::Identity(3, 3)).value == doctest::Approx(3.0));

  CHECK_THROWS_AS(norm_inf2_exact(Matrix::Zero(2, 23)), DomainError);
  CHECK_THROWS_AS(norm_inf1_exact(Matrix::Zero(6, 6), 5), DomainError);
}

TEST_CASE("exact norms match brute force and the (inf,1)-(inf,2) identity") {
  Rng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const Index m = 2 + rng.below(6), s = 1 + rng.below(9);
    const Matrix b = gaussian_matrix(m, s, rng);
    const SignedNorm n2 = norm_inf2_exact(b);
    CHECK(n2.value == doctest::Approx(oracle::brute_inf2(b)).epsilon(1e-12));
    CHECK((b * n2.witness).norm() == doctest::Approx(n2.value).epsilon(1e-12));
    CHECK(norm_inf1_exact(b.transpose() * b).value == doctest::Approx(n2.value * n2.value).epsilon(1e-8));
    CHECK(n2.value <= std::sqrt(static_cast<double>(s)) * spectral_norm(b) * (1 + 1e-12));

    const Matrix g = oracle::random_symmetric(s, rng);
    const SignedNorm n1 = norm_inf1_exact(g);
    CHECK(n1.value == doctest::Approx(oracle::brute_inf1(g)).epsilon(1e-12));
    CHECK(n1.value <= static_cast<double>(s) * spectral_norm(g) * (1 + 1e-12));
    CHECK(n1.value >= spectral_norm(g) * (1 - 1e-12));
  }
}

TEST_CASE("sign probes never exceed the exact norm") {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix b = gaussian_matrix(4, 7, rng);
    const Vector start = sign_vector(gaussian_matrix(7, 1, rng));
    const SignedNorm improved = improve_inf2_probe(b, start);
    CHECK(improved.value >= inf2_probe(b, start) - 1e-12);
    CHECK(improved.value <= norm_inf2_exact(b).value + 1e-12);
    const Matrix g = oracle::random_symmetric(7, rng);
    const SignedNorm gi = improve_inf1_probe(g, start);
    CHECK(gi.value >= inf1_probe(g, start) - 1e-12);
    CHECK(gi.value <= norm_inf1_exact(g).value + 1e-12);
  }
}
