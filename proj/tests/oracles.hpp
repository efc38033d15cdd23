#pragma once

// Brute-force reference implementations. They share no code with the library
// beyond its data types.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lcc/dataset.hpp"
#include "lcc/lp.hpp"
#include "lcc/rng.hpp"

namespace oracle {

/// Minimum objective over all vertices of a small LP with finite variable
/// bounds; nullopt if no vertex is feasible. Enumerates every choice of d
/// active constraints among the rows and the 2d bound planes.
std::optional<double> vertex_enumeration(const lcc::LpProblem& lp, double tol = 1e-7);

/// Random LP with a known interior point, so it is feasible.
lcc::LpProblem random_feasible_lp(lcc::Rng& rng, std::size_t d, std::size_t r);

/// Mean over all (positive, negative) pairs of 1[s+ > s-] + 0.5 * 1[s+ == s-].
double pairwise_auc(std::span<const double> scores, std::span<const lcc::Label> labels);

/// Exact two-sided rank-sum p-value by counting subset sums of doubled
/// midranks (dynamic programming over the pooled sample).
double rank_sum_exact_dp(std::span<const double> a, std::span<const double> b);

/// Coarse-to-fine grid search for the minimum of the 1-D SVM objective.
double svm_1d_grid_min(std::span<const double> values, std::span<const lcc::Label> labels, double lambda);

/// m rows of n standard-normal features, labels split as evenly as possible,
/// class +1 shifted by `shift` along every axis.
lcc::Dataset random_dataset(lcc::Rng& rng, std::size_t m, std::size_t n, double shift);

}  // namespace oracle
