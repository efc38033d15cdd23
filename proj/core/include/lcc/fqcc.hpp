#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "lcc/dataset.hpp"
#include "lcc/lcc.hpp"

namespace lcc {

struct FqccOptions {
  std::size_t restarts = 8;
  std::size_t iterations = 400;  // per restart
  double initial_step = 0.5;     // step k is initial_step / sqrt(k + 1)
  std::uint64_t seed = 42;
};

/// Quadratic centralization model. beta is oriented so c_neg_hat <= c_pos_hat.
struct FqccModel {
  Eigen::VectorXd beta;
  double c_neg_hat = 0.0;
  double c_pos_hat = 0.0;
  double threshold = 0.0;
  double lambda = 2.0;
  double sigma = -0.01;
  double objective_achieved = 0.0;

  double transform(const Eigen::VectorXd& x) const;
  double score(const Eigen::VectorXd& x) const { return transform(x) - threshold; }
  /// Nearest projected center; ties go to -1.
  Label predict(const Eigen::VectorXd& x) const;
  std::vector<Label> predict_rows(const Eigen::MatrixXd& x) const;
};

/// -|C_-1.beta - C_1.beta| + lambda * sum_i max(sigma, y_i (|x_i.beta - C_1.beta| - |x_i.beta - C_-1.beta|))
///
/// The per-instance slacks are eliminated at their optimal values, so this is
/// the soft-margin quadratic objective as a function of beta alone.
double fqcc_objective(const Dataset& train, const ClassCenters& centers, const Eigen::VectorXd& beta,
                      const LccParams& params);

/// Projected normalized subgradient descent on `fqcc_objective` over the box
/// [-1,1]^n. Restart 0 starts from clip(C_1 - C_-1); the rest start uniformly
/// in the box. Returns the best iterate seen across restarts.
FqccModel train_fqcc(const Dataset& train, const LccParams& params = {}, const FqccOptions& options = {});

/// Best beta seen during a single descent from `start`.
Eigen::VectorXd descend_fqcc(const Dataset& train, const ClassCenters& centers, const Eigen::VectorXd& start,
                             const LccParams& params, const FqccOptions& options);

}  // namespace lcc
