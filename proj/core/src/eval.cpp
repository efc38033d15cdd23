#include "lcc/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "lcc/error.hpp"
#include "lcc/rng.hpp"

namespace lcc {

namespace {

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> rows_by_class(const Dataset& data) {
  std::pair<std::vector<std::size_t>, std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < data.size(); ++i)
    (data.labels[i] == Label::Negative ? out.first : out.second).push_back(i);
  return out;
}

}  // namespace

Split stratified_split(const Dataset& data, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw DataError("train fraction must lie in (0, 1)");
  auto [neg, pos] = rows_by_class(data);
  Rng rng(seed);
  Split split;
  for (auto* rows : {&neg, &pos}) {
    const auto n_train = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(rows->size())));
    if (n_train == 0 || n_train == rows->size()) {
      throw DataError("stratified split of a class with " + std::to_string(rows->size()) +
                      " rows leaves an empty train or test side");
    }
    rng.shuffle(rows->begin(), rows->end());
    split.train.insert(split.train.end(), rows->begin(), rows->begin() + static_cast<std::ptrdiff_t>(n_train));
    split.test.insert(split.test.end(), rows->begin() + static_cast<std::ptrdiff_t>(n_train), rows->end());
  }
  return split;
}

std::vector<std::vector<std::size_t>> stratified_kfold(const Dataset& data, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw DataError("k-fold needs k >= 2");
  auto [neg, pos] = rows_by_class(data);
  if (neg.size() < k || pos.size() < k) {
    throw DataError("each class needs at least k = " + std::to_string(k) + " rows for stratified k-fold");
  }
  Rng rng(seed);
  std::vector<std::vector<std::size_t>> folds(k);
  for (auto* rows : {&neg, &pos}) {
    rng.shuffle(rows->begin(), rows->end());
    for (std::size_t j = 0; j < rows->size(); ++j) folds[j % k].push_back((*rows)[j]);
  }
  return folds;
}

std::vector<double> midranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

RocResult roc_auc(std::span<const double> scores, std::span<const Label> labels) {
  if (scores.size() != labels.size()) throw DataError("roc_auc: scores and labels differ in length");
  for (double s : scores)
    if (std::isnan(s)) throw DataError("roc_auc: NaN score");
  const auto n_pos = static_cast<double>(std::count(labels.begin(), labels.end(), Label::Positive));
  const auto n_neg = static_cast<double>(labels.size()) - n_pos;
  if (n_pos == 0.0 || n_neg == 0.0) throw DataError("roc_auc: both classes must be present");

  RocResult out;
  const auto ranks = midranks(scores);
  double pos_rank_sum = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == Label::Positive) pos_rank_sum += ranks[i];
  out.auc = (pos_rank_sum - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg);

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  out.curve.emplace_back(0.0, 0.0);
  double tp = 0.0;
  double fp = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double s = scores[order[i]];
    for (; i < order.size() && scores[order[i]] == s; ++i) (labels[order[i]] == Label::Positive ? tp : fp) += 1.0;
    out.curve.emplace_back(fp / n_neg, tp / n_pos);
  }
  return out;
}

double trapezoid_area(const std::vector<std::pair<double, double>>& curve) {
  double area = 0.0;
  for (std::size_t i = 1; i < curve.size(); ++i)
    area += (curve[i].first - curve[i - 1].first) * 0.5 * (curve[i].second + curve[i - 1].second);
  return area;
}

double accuracy(std::span<const Label> predicted, std::span<const Label> truth) {
  if (predicted.size() != truth.size() || truth.empty()) throw DataError("accuracy: size mismatch or empty input");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += predicted[i] == truth[i];
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

namespace {

struct RankSumSetup {
  std::vector<double> ranks;  // pooled midranks, a first
  double observed = 0.0;      // rank sum of a
  double expected = 0.0;
};

RankSumSetup pool(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw DataError("rank_sum_test: both samples must be nonempty");
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  RankSumSetup s;
  s.ranks = midranks(pooled);
  s.observed = std::accumulate(s.ranks.begin(), s.ranks.begin() + static_cast<std::ptrdiff_t>(a.size()), 0.0);
  s.expected = static_cast<double>(a.size()) * static_cast<double>(pooled.size() + 1) / 2.0;
  return s;
}

}  // namespace

double rank_sum_normal_p(std::span<const double> a, std::span<const double> b) {
  const RankSumSetup s = pool(a, b);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double n = na + nb;

  std::vector<double> sorted(s.ranks);
  std::sort(sorted.begin(), sorted.end());
  double tie_term = 0.0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    i = j;
  }
  const double variance = na * nb / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
  if (!(variance > 0.0)) return 1.0;
  const double z = std::max(0.0, std::abs(s.observed - s.expected) - 0.5) / std::sqrt(variance);
  return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

double rank_sum_exact_p(std::span<const double> a, std::span<const double> b) {
  const RankSumSetup s = pool(a, b);
  const std::size_t n = s.ranks.size();
  const std::size_t na = a.size();
  if (n > 30) throw DataError("rank_sum_exact_p: sample too large for enumeration");
  const double observed_dev = std::abs(s.observed - s.expected);

  // Enumerate subsets of size na through a selection mask.
  std::vector<bool> pick(n, false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(na), true);
  double extreme = 0.0;
  double total = 0.0;
  do {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (pick[i]) sum += s.ranks[i];
    total += 1.0;
    if (std::abs(sum - s.expected) >= observed_dev - 1e-9) extreme += 1.0;
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return extreme / total;
}

double rank_sum_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() + b.size() <= kExactRankSumLimit) return rank_sum_exact_p(a, b);
  return rank_sum_normal_p(a, b);
}

}  // namespace lcc
