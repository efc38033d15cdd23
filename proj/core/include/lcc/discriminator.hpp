#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "lcc/dataset.hpp"
#include "lcc/lcc.hpp"

namespace lcc {

enum class DiscriminatorKind { Dist, OneNN, OneSV };

/// Accepts "dist", "1nn", "1sv".
DiscriminatorKind parse_discriminator(std::string_view name);
std::string_view discriminator_name(DiscriminatorKind kind);

struct Svm1d {
  double w = 0.0;
  double r = 0.0;
  double objective = 0.0;
};

/// lambda * w^2 + (1/m) * sum_i max(0, 1 - y_i (w v_i + r))
double svm_1d_objective(std::span<const double> values, std::span<const Label> labels, double lambda, double w,
                        double r);

/// Exact minimizer of `svm_1d_objective`.
///
/// The optimal w is unique (the objective is strictly convex in w) and some
/// optimum lies on a kink line y_k (w v_k + r) = 1. Each kink line restricts the
/// objective to a convex piecewise-quadratic function of w, minimized exactly
/// by a sweep over its sorted breakpoints. The intercept is then the midpoint
/// of the optimal interval of r for that w. Identical values give w = 0 and
/// r = +1/-1 toward the majority class (0 when balanced).
Svm1d solve_svm_1d(std::span<const double> values, std::span<const Label> labels, double lambda);

/// Maps a projected scalar to a label.
///
///   dist  - threshold rule at `threshold`
///   1nn   - label of the nearest training value; equal distances resolve to
///           the lower training index
///   1sv   - values are scaled by s = h / (c_pos_hat - c_neg_hat), then
///           sign(w * s * v + r) from an exact 1-D SVM with lambda = 1; 0 -> +1
struct Discriminator {
  DiscriminatorKind kind = DiscriminatorKind::Dist;
  double threshold = 0.0;

  // 1nn: training values sorted ascending, ties by training index.
  std::vector<double> nn_values;
  std::vector<Label> nn_labels;
  std::vector<std::size_t> nn_index;

  double h = 10.0;
  double scale = 1.0;
  double weight = 0.0;
  double intercept = 0.0;

  Label discriminate(double value) const;
  /// Continuous counterpart of `discriminate`, larger means more positive.
  /// 1nn uses distance to the nearest -1 minus distance to the nearest +1.
  double score(double value) const;
};

inline constexpr double kDefaultSvmScale = 10.0;

Discriminator fit_discriminator(DiscriminatorKind kind, std::span<const double> projected,
                                std::span<const Label> labels, double c_neg_hat, double c_pos_hat,
                                double h = kDefaultSvmScale);

/// Projects `train` through the model and fits on the projected values.
Discriminator fit_discriminator(DiscriminatorKind kind, const LccModel& model, const Dataset& train,
                                double h = kDefaultSvmScale);

}  // namespace lcc
