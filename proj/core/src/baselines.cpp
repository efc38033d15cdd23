#include "lcc/baselines.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "lcc/discriminator.hpp"
#include "lcc/error.hpp"
#include "lcc/lcc.hpp"
#include "lcc/rng.hpp"

namespace lcc {

namespace {

Eigen::MatrixXd class_covariance(const Dataset& data, Label y, const Eigen::VectorXd& mean) {
  const auto n = static_cast<Eigen::Index>(data.dims());
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(n, n);
  std::size_t count = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.labels[i] != y) continue;
    const Eigen::VectorXd d = data.row(i) - mean;
    cov.noalias() += d * d.transpose();
    ++count;
  }
  if (count > 1) cov /= static_cast<double>(count - 1);
  return cov;
}

Eigen::MatrixXd regularize(const Eigen::MatrixXd& s, double lambda_reg) {
  return lambda_reg * s + (1.0 - lambda_reg) * Eigen::MatrixXd::Identity(s.rows(), s.cols());
}

Eigen::VectorXd solve_spd(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const char* what) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
  const double top = std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
  if (!(eig.eigenvalues().minCoeff() > 1e-12 * top)) {
    throw NumericError(std::string("LDA: regularized ") + what +
                       " is singular; use lambda_reg < 1 to shrink toward the identity");
  }
  return eig.eigenvectors() *
         (eig.eigenvectors().transpose() * b).cwiseQuotient(eig.eigenvalues());
}

}  // namespace

double LdaModel::score(const Eigen::VectorXd& x) const {
  if (x.size() != weight.size()) throw DataError("LDA: instance dimension mismatch");
  return x.dot(weight) - threshold;
}

LdaModel train_lda(const Dataset& train, double lambda_reg) {
  require_both_classes(train, "train_lda");
  if (train.dims() == 0) throw DataError("train_lda: need at least one feature");
  if (!(lambda_reg >= 0.0 && lambda_reg <= 1.0)) throw DataError("train_lda: lambda_reg must lie in [0, 1]");

  const ClassCenters mu = class_centers(train);
  const Eigen::MatrixXd cov_neg = class_covariance(train, Label::Negative, mu.negative);
  const Eigen::MatrixXd cov_pos = class_covariance(train, Label::Positive, mu.positive);

  LdaModel model;
  model.lambda_reg = lambda_reg;
  model.weight = solve_spd(regularize(cov_neg + cov_pos, lambda_reg), mu.positive - mu.negative, "pooled covariance");
  const Eigen::VectorXd a = solve_spd(regularize(cov_pos, lambda_reg), mu.positive, "class +1 covariance");
  const Eigen::VectorXd b = solve_spd(regularize(cov_neg, lambda_reg), mu.negative, "class -1 covariance");
  model.threshold = 0.5 * mu.positive.dot(a) - 0.5 * mu.negative.dot(b);
  if (!model.weight.allFinite() || !std::isfinite(model.threshold)) throw NumericError("LDA produced non-finite parameters");
  return model;
}

double SvmModel::score(const Eigen::VectorXd& x) const {
  if (x.size() != weight.size()) throw DataError("SVM: instance dimension mismatch");
  return x.dot(weight) + intercept;
}

double svm_objective(const Dataset& data, const Eigen::VectorXd& weight, double intercept, double lambda) {
  const Eigen::VectorXd margins = data.features * weight;
  double hinge = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    hinge += std::max(0.0, 1.0 - sign_of(data.labels[i]) * (margins(static_cast<Eigen::Index>(i)) + intercept));
  }
  return lambda * weight.squaredNorm() + hinge / static_cast<double>(data.size());
}

SvmModel train_linear_svm(const Dataset& train, double lambda, std::size_t epochs, std::uint64_t seed) {
  require_both_classes(train, "train_linear_svm");
  if (epochs == 0) throw DataError("train_linear_svm: epochs must be positive");
  if (!(lambda > 0.0)) throw DataError("train_linear_svm: lambda must be positive");

  const auto n = static_cast<Eigen::Index>(train.dims());
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  double r = 0.0;
  Eigen::VectorXd w_avg = Eigen::VectorXd::Zero(n);
  double r_avg = 0.0;

  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);

  SvmModel model;
  model.lambda = lambda;
  std::size_t t = 0;
  std::size_t averaged = 0;
  const std::size_t tail_start = epochs / 2;
  for (std::size_t e = 0; e < epochs; ++e) {
    if (e == tail_start) averaged = 0;
    rng.shuffle(order.begin(), order.end());
    for (std::size_t i : order) {
      ++t;
      const double eta = 1.0 / (2.0 * lambda * static_cast<double>(t));
      const auto x = train.features.row(static_cast<Eigen::Index>(i)).transpose();
      const double y = sign_of(train.labels[i]);
      const bool violated = y * (x.dot(w) + r) < 1.0;
      w *= 1.0 - 2.0 * lambda * eta;
      if (violated) {
        w.noalias() += eta * y * x;
        r += eta * y;
      }
      const double k = static_cast<double>(++averaged);
      w_avg += (w - w_avg) / k;
      r_avg += (r - r_avg) / k;
    }
    model.epoch_objectives.push_back(svm_objective(train, w_avg, r_avg, lambda));
  }
  model.weight = w_avg;
  model.intercept = r_avg;

  // Exact scale and intercept along the averaged direction.
  const double norm = w_avg.norm();
  if (norm > 0.0) {
    const Eigen::VectorXd u = w_avg / norm;
    const Eigen::VectorXd projected = train.features * u;
    const Svm1d line = solve_svm_1d(std::span<const double>(projected.data(), train.size()), train.labels, lambda);
    if (line.objective < svm_objective(train, w_avg, r_avg, lambda)) {
      model.weight = line.w * u;
      model.intercept = line.r;
    }
  }
  return model;
}

}  // namespace lcc
