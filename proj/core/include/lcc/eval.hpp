#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "lcc/dataset.hpp"

namespace lcc {

struct Split {
  std::vector<std::size_t> train;  // row indices into the source dataset
  std::vector<std::size_t> test;
};

/// Per class, floor(fraction * m_c) shuffled rows go to train and the rest to
/// test. Throws DataError if any class would end up with an empty side.
Split stratified_split(const Dataset& data, double train_fraction, std::uint64_t seed);

/// Per class, rows are shuffled then dealt round-robin into k folds.
/// Throws DataError if a class has fewer than k rows.
std::vector<std::vector<std::size_t>> stratified_kfold(const Dataset& data, std::size_t k, std::uint64_t seed);

struct RocResult {
  double auc = 0.5;
  /// (false-positive rate, true-positive rate) from (0,0) to (1,1); tied
  /// scores form a single diagonal step.
  std::vector<std::pair<double, double>> curve;
};

/// Positive class is +1. AUC uses midranks, so ties count one half.
RocResult roc_auc(std::span<const double> scores, std::span<const Label> labels);

double trapezoid_area(const std::vector<std::pair<double, double>>& curve);

double accuracy(std::span<const Label> predicted, std::span<const Label> truth);

/// Midranks (1-based) of `values`.
std::vector<double> midranks(std::span<const double> values);

/// Two-sided Wilcoxon-Mann-Whitney rank-sum p-value.
/// Exact permutation distribution of the rank sum when |a| + |b| <= 12,
/// otherwise `rank_sum_normal_p`.
double rank_sum_test(std::span<const double> a, std::span<const double> b);

/// Normal approximation with tie-corrected variance and continuity correction 0.5.
double rank_sum_normal_p(std::span<const double> a, std::span<const double> b);

/// Exact two-sided p by enumerating every assignment of the pooled midranks.
double rank_sum_exact_p(std::span<const double> a, std::span<const double> b);

inline constexpr std::size_t kExactRankSumLimit = 12;

}  // namespace lcc
