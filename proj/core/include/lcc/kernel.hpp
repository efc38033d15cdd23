#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "lcc/dataset.hpp"
#include "lcc/lcc.hpp"
#include "lcc/lp.hpp"

namespace lcc {

enum class KernelKind { Linear, Rbf };

KernelKind parse_kernel(std::string_view name);
std::string_view kernel_name(KernelKind kind);

struct KernelSpec {
  KernelKind kind = KernelKind::Rbf;
  double rbf_width = 1.0;  // exp(-||x - z||^2 / (2 rbf_width^2))

  void validate() const;
};

double kernel_eval(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& z);

/// K[i][j] = k(x_i, x_j) over the rows of `x`.
Eigen::MatrixXd gram(const KernelSpec& spec, const Eigen::MatrixXd& x);
Eigen::MatrixXd gram(const KernelSpec& spec, const Dataset& data);

/// K[i][j] = k(a_i, b_j).
Eigen::MatrixXd cross_gram(const KernelSpec& spec, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// Median of the Euclidean distances over all unordered row pairs.
double median_pairwise_distance(const Eigen::MatrixXd& x);

/// The centralization LP with beta = sum_i alpha_i x_i, written over
/// (alpha in [-1,1]^m, eps in [sigma, inf)^m) using only kernel values.
LpProblem assemble_klcc_lp(const Eigen::MatrixXd& gram, std::span<const Label> labels, const LccParams& params);

struct KernelLccModel {
  Eigen::VectorXd alphas;
  Eigen::MatrixXd training;  // rows the alphas refer to
  KernelSpec kernel;
  double c_neg_hat = 0.0;
  double c_pos_hat = 0.0;
  double threshold = 0.0;
  double lambda = 2.0;
  double sigma = -0.01;
  Eigen::VectorXd epsilons;
  double objective = 0.0;
  std::size_t lp_iterations = 0;

  std::size_t dims() const { return static_cast<std::size_t>(training.cols()); }

  /// sum_i alpha_i k(x, x_i)
  double transform(const Eigen::VectorXd& x) const;
  Eigen::VectorXd transform_rows(const Eigen::MatrixXd& x) const;
  double score(const Eigen::VectorXd& x) const { return transform(x) - threshold; }
  Label predict(const Eigen::VectorXd& x) const { return threshold_rule(transform(x), threshold); }
  std::vector<Label> predict_rows(const Eigen::MatrixXd& x) const;
};

KernelLccModel train_klcc(const Dataset& train, const KernelSpec& spec, const LccParams& params = {});

}  // namespace lcc
