#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "cssel/emd.hpp"
#include "cssel/rng.hpp"
#include "cssel/types.hpp"

namespace cssel {

struct SelectConfig {
  int emd_iterations = 5000;
  StepMode step_mode = StepMode::adaptive;
  double kt_norm = 15.0;               // accept tau when ||A_tau|| <= kt_norm
  double bt_kappa = std::sqrt(3.0);    // accept tau when kappa(A_tau) <= bt_kappa
  bool early_shortcut = false;         // return all columns when ||A|| is already small
  int threads = 1;
  double eig_tol = 1e-10;
};

/// One pruned candidate produced by norm_reduce / cond_reduce.
struct Candidate {
  Index s = 0;
  int attempt = 0;
  ColumnSubset sigma;
  ColumnSubset tau;
  double alpha = 0.0;
  double alpha_effective = 0.0;
  double factor_norm = 0.0;
  double eta = 0.0;
  double metric = 0.0;  // ||A_tau|| (KT) or kappa(A_tau) (BT), set by the outer loop
  bool accepted = false;
};

struct RoundLog {
  Index s = 0;
  int attempt_budget = 0;
  int attempts_used = 0;
  bool accepted = false;
  Index candidate_size = 0;  // size of the accepted candidate, 0 when none
  double metric = 0.0;
};

struct SelectionReport {
  ColumnSubset tau;
  double accepted_metric = 0.0;
  int attempts = 0;
  std::vector<RoundLog> rounds;
  std::vector<Candidate> candidates;
  std::uint64_t seed = 0;
  double stable_rank = 0.0;
  double cardinality_ratio = 0.0;  // |tau| / st.rank(A)
  bool shortcut = false;
};

/// Uniformly random s-subset of {0, ..., n-1}, sorted.
ColumnSubset random_subset(Index n, Index s, Rng& rng);

/// ceil(8 log2 s), at least 1.
int attempts_for(Index s);

/// Outer-loop sizes 4, 8, 16, ... capped at n (just {n} when n < 4).
std::vector<Index> size_schedule(Index n);

/// Draws sigma, Pietsch-factorizes A_sigma with alpha = 8 K_P sqrt(s) and keeps
/// the columns with d_jj^2 <= 2/s. Empty when the factorization was refused.
std::optional<Candidate> norm_reduce(const Matrix& a, Index s, Rng& rng, const SelectConfig& config = {});

/// Draws sigma, Grothendieck-factorizes the hollow Gram of A_sigma with
/// alpha = s/4 and keeps the columns with d_jj^2 <= 2/s.
std::optional<Candidate> cond_reduce(const Matrix& a, Index s, Rng& rng, const SelectConfig& config = {});

/// Randomized column selection with ||A_tau|| <= config.kt_norm.
SelectionReport kt_select(const Matrix& a, std::uint64_t seed, const SelectConfig& config = {});

/// Randomized column selection with kappa(A_tau) <= config.bt_kappa.
SelectionReport bt_select(const Matrix& a, std::uint64_t seed, const SelectConfig& config = {});

}  // namespace cssel
