#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "lcc/dataset.hpp"

namespace lcc {

/// Regularized two-class LDA. Decision: sign(x . weight - threshold), 0 -> +1.
struct LdaModel {
  Eigen::VectorXd weight;
  double threshold = 0.0;
  double lambda_reg = 0.5;

  double score(const Eigen::VectorXd& x) const;
  Label predict(const Eigen::VectorXd& x) const { return score(x) >= 0.0 ? Label::Positive : Label::Negative; }
};

/// mu_1, Sigma_1 describe class -1 and mu_2, Sigma_2 class +1 (sample
/// covariances). Every covariance is shrunk toward the identity as
/// lambda_reg * Sigma + (1 - lambda_reg) * I before inversion:
///
///   weight    = R(Sigma_1 + Sigma_2)^-1 (mu_2 - mu_1)
///   threshold = mu_2' R(Sigma_2)^-1 mu_2 / 2 - mu_1' R(Sigma_1)^-1 mu_1 / 2
///
/// Throws NumericError if a regularized matrix is singular (only possible at
/// lambda_reg = 1).
LdaModel train_lda(const Dataset& train, double lambda_reg = 0.5);

/// Linear soft-margin SVM. Decision: sign(x . weight + intercept), 0 -> +1.
struct SvmModel {
  Eigen::VectorXd weight;
  double intercept = 0.0;
  double lambda = 1.0;
  /// Objective of the running average at the end of each epoch (before the
  /// final refit). The average restarts at epoch epochs / 2.
  std::vector<double> epoch_objectives;

  double score(const Eigen::VectorXd& x) const;
  Label predict(const Eigen::VectorXd& x) const { return score(x) >= 0.0 ? Label::Positive : Label::Negative; }
};

/// lambda ||w||^2 + (1/m) sum_i max(0, 1 - y_i (x_i . w + r))
double svm_objective(const Dataset& data, const Eigen::VectorXd& weight, double intercept, double lambda);

/// Stochastic subgradient descent with step 1 / (2 lambda t) over `epochs`
/// seeded passes, averaging the iterates of the second half of the epochs.
/// The scale and intercept along the averaged direction are then refit with
/// the exact 1-D solver, which never raises the objective.
SvmModel train_linear_svm(const Dataset& train, double lambda = 1.0, std::size_t epochs = 50,
                          std::uint64_t seed = 42);

}  // namespace lcc
