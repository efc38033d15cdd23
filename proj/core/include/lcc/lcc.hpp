#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "lcc/dataset.hpp"
#include "lcc/lp.hpp"

namespace lcc {

struct ClassCenters {
  Eigen::VectorXd negative;
  Eigen::VectorXd positive;
};

/// Per-class mean feature rows. Throws DataError if a class is absent.
ClassCenters class_centers(const Dataset& train);

/// lambda weighs slack penalties against center separation; sigma < 0 is the
/// required gap between projected centers and the per-instance margin.
struct LccParams {
  double lambda = 2.0;
  double sigma = -0.01;

  void validate() const;
};

/// Linear decision on a projected value: -1 below the threshold, +1 otherwise.
inline Label threshold_rule(double value, double threshold) {
  return value < threshold ? Label::Negative : Label::Positive;
}

/// Builds the centralization LP over (beta in [-1,1]^n, eps in [sigma, inf)^m):
///
///   min  (C_-1 - C_1) . beta + lambda * sum_i eps_i
///   s.t. y_i (l - x_i) . beta - eps_i <= 0      for each instance i
///        (C_-1 - C_1) . beta          <= sigma
///
/// with l = (C_-1 + C_1) / 2. Variables are ordered beta first, then eps.
LpProblem assemble_lcc_lp(const Dataset& train, const LccParams& params);

/// LP dual of the centralization problem with eps eliminated. Over
/// (u in [0, lambda]^m, v >= 0, p >= 0, q >= 0):
///
///   min  sigma * (sum_i u_i + v) + sum_j (p_j + q_j)
///   s.t. sum_i u_i a_ij + v g_j - p_j + q_j = -g_j     for each feature j
///
/// where a_i = y_i (l - x_i) and g = C_-1 - C_1. It has n rows instead of
/// m + 1, and the multipliers of those rows form an optimal beta. It is
/// unbounded exactly when the primal LP is infeasible.
LpProblem assemble_lcc_dual_lp(const Dataset& train, const LccParams& params);

/// Which LP train_lcc hands to the simplex solver. Both give an optimal beta of
/// the same problem; the dual is far cheaper when m >> n.
enum class LccRoute { Dual, Primal };

/// y_i (l - x_i) . beta for every training instance: the smallest slack each
/// instance constraint admits for the given beta.
Eigen::VectorXd instance_violations(const Dataset& train, const ClassCenters& centers,
                                    const Eigen::VectorXd& beta);

struct LccModel {
  Eigen::VectorXd beta;
  Eigen::VectorXd center_neg;  // feature-space class centers
  Eigen::VectorXd center_pos;
  double c_neg_hat = 0.0;      // projected centers
  double c_pos_hat = 0.0;
  double threshold = 0.0;      // (c_neg_hat + c_pos_hat) / 2
  double lambda = 2.0;
  double sigma = -0.01;
  Eigen::VectorXd epsilons;    // per-instance slacks from training
  double objective = 0.0;
  std::size_t lp_iterations = 0;

  std::size_t dims() const { return static_cast<std::size_t>(beta.size()); }

  /// x . beta; throws DataError on dimension mismatch.
  double transform(const Eigen::VectorXd& x) const;
  Eigen::VectorXd transform_rows(const Eigen::MatrixXd& x) const;
  /// Signed distance to the threshold.
  double score(const Eigen::VectorXd& x) const { return transform(x) - threshold; }
  Label predict(const Eigen::VectorXd& x) const { return threshold_rule(transform(x), threshold); }
  std::vector<Label> predict_rows(const Eigen::MatrixXd& x) const;
};

/// Solves the centralization LP. Slacks are eps_i = max(sigma, a_i . beta) and
/// `objective` is the primal objective at the returned beta. Throws
/// NumericError when the LP is infeasible, i.e. the centers coincide or
/// |sigma| exceeds ||C_1 - C_-1||_1.
LccModel train_lcc(const Dataset& train, const LccParams& params = {}, LccRoute route = LccRoute::Dual);

/// Same model with beta scaled by c > 0 and projected centers recomputed.
LccModel rescaled(const LccModel& model, double c);

/// Index of the instance with the largest misclassification impact
/// lambda * (eps_i - sigma).
std::size_t worst_outlier(const LccModel& model);

}  // namespace lcc
