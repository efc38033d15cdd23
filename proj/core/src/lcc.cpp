#include "lcc/lcc.hpp"

#include <cmath>
#include <sstream>

#include "lcc/error.hpp"

namespace lcc {

ClassCenters class_centers(const Dataset& train) {
  require_both_classes(train, "class_centers");
  const auto n = static_cast<Eigen::Index>(train.dims());
  ClassCenters c{Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
  std::size_t neg = 0;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < train.size(); ++i) {
    const auto row = train.features.row(static_cast<Eigen::Index>(i)).transpose();
    if (train.labels[i] == Label::Negative) {
      c.negative += row;
      ++neg;
    } else {
      c.positive += row;
      ++pos;
    }
  }
  c.negative /= static_cast<double>(neg);
  c.positive /= static_cast<double>(pos);
  return c;
}

void LccParams::validate() const {
  if (!(sigma < 0.0) || !std::isfinite(sigma)) throw DataError("sigma must be finite and < 0");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DataError("lambda must be finite and > 0");
}

Eigen::VectorXd instance_violations(const Dataset& train, const ClassCenters& centers,
                                    const Eigen::VectorXd& beta) {
  const Eigen::VectorXd mid = 0.5 * (centers.negative + centers.positive);
  const double mid_hat = mid.dot(beta);
  const Eigen::VectorXd projected = train.features * beta;
  Eigen::VectorXd out(projected.size());
  for (Eigen::Index i = 0; i < projected.size(); ++i)
    out(i) = sign_of(train.labels[static_cast<std::size_t>(i)]) * (mid_hat - projected(i));
  return out;
}

LpProblem assemble_lcc_lp(const Dataset& train, const LccParams& params) {
  params.validate();
  const ClassCenters centers = class_centers(train);
  const auto m = static_cast<Eigen::Index>(train.size());
  const auto n = static_cast<Eigen::Index>(train.dims());
  const Eigen::VectorXd gap = centers.negative - centers.positive;
  const Eigen::VectorXd mid = 0.5 * (centers.negative + centers.positive);

  LpProblem lp;
  lp.objective.resize(n + m);
  lp.objective.head(n) = gap;
  lp.objective.tail(m).setConstant(params.lambda);

  lp.constraints = Eigen::MatrixXd::Zero(m + 1, n + m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double y = sign_of(train.labels[static_cast<std::size_t>(i)]);
    lp.constraints.row(i).head(n) = y * (mid - train.features.row(i).transpose()).transpose();
    lp.constraints(i, n + i) = -1.0;
  }
  lp.constraints.row(m).head(n) = gap.transpose();
  lp.relations.assign(static_cast<std::size_t>(m + 1), Relation::LessEqual);
  lp.rhs = Eigen::VectorXd::Zero(m + 1);
  lp.rhs(m) = params.sigma;

  lp.lower.resize(n + m);
  lp.upper.resize(n + m);
  lp.lower.head(n).setConstant(-1.0);
  lp.upper.head(n).setConstant(1.0);
  lp.lower.tail(m).setConstant(params.sigma);
  lp.upper.tail(m).setConstant(kInf);
  return lp;
}

double LccModel::transform(const Eigen::VectorXd& x) const {
  if (x.size() != beta.size()) {
    throw DataError("instance has " + std::to_string(x.size()) + " features, model expects " +
                    std::to_string(beta.size()));
  }
  return x.dot(beta);
}

Eigen::VectorXd LccModel::transform_rows(const Eigen::MatrixXd& x) const {
  if (x.cols() != beta.size()) {
    throw DataError("data has " + std::to_string(x.cols()) + " features, model expects " +
                    std::to_string(beta.size()));
  }
  return x * beta;
}

std::vector<Label> LccModel::predict_rows(const Eigen::MatrixXd& x) const {
  const Eigen::VectorXd v = transform_rows(x);
  std::vector<Label> out(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i)] = threshold_rule(v(i), threshold);
  return out;
}

LpProblem assemble_lcc_dual_lp(const Dataset& train, const LccParams& params) {
  params.validate();
  const ClassCenters centers = class_centers(train);
  const auto m = static_cast<Eigen::Index>(train.size());
  const auto n = static_cast<Eigen::Index>(train.dims());
  const Eigen::VectorXd gap = centers.negative - centers.positive;
  const Eigen::VectorXd mid = 0.5 * (centers.negative + centers.positive);

  // Columns: u (m), v (1), p (n), q (n).
  const Eigen::Index d = m + 1 + 2 * n;
  LpProblem lp;
  lp.objective = Eigen::VectorXd::Zero(d);
  lp.objective.head(m + 1).setConstant(params.sigma);
  lp.objective.tail(2 * n).setConstant(1.0);
  lp.constraints = Eigen::MatrixXd::Zero(n, d);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double y = sign_of(train.labels[static_cast<std::size_t>(i)]);
    lp.constraints.col(i) = y * (mid - train.features.row(i).transpose());
  }
  lp.constraints.col(m) = gap;
  lp.constraints.block(0, m + 1, n, n) = -Eigen::MatrixXd::Identity(n, n);
  lp.constraints.block(0, m + 1 + n, n, n) = Eigen::MatrixXd::Identity(n, n);
  lp.relations.assign(static_cast<std::size_t>(n), Relation::Equal);
  lp.rhs = -gap;
  lp.lower = Eigen::VectorXd::Zero(d);
  lp.upper = Eigen::VectorXd::Constant(d, kInf);
  lp.upper.head(m).setConstant(params.lambda);
  return lp;
}

namespace {

[[noreturn]] void throw_infeasible(const ClassCenters& centers, const LccParams& params) {
  const double gap_l1 = (centers.positive - centers.negative).lpNorm<1>();
  std::ostringstream msg;
  msg << "centralization LP is infeasible: classes have (near-)identical centers or |sigma| exceeds "
      << "||C_1 - C_-1||_1 (|sigma| = " << -params.sigma << ", ||C_1 - C_-1||_1 = " << gap_l1 << ")";
  throw NumericError(msg.str());
}

}  // namespace

LccModel train_lcc(const Dataset& train, const LccParams& params, LccRoute route) {
  const ClassCenters centers = class_centers(train);
  const auto n = static_cast<Eigen::Index>(train.dims());

  Eigen::VectorXd beta;
  std::size_t iterations = 0;
  if (route == LccRoute::Dual) {
    const LpSolution sol = solve(assemble_lcc_dual_lp(train, params));
    if (sol.status != LpStatus::Optimal) throw_infeasible(centers, params);
    beta = sol.duals;
    iterations = sol.iterations;
  } else {
    const LpSolution sol = solve(assemble_lcc_lp(train, params));
    if (sol.status != LpStatus::Optimal) throw_infeasible(centers, params);
    beta = sol.x.head(n);
    iterations = sol.iterations;
  }

  LccModel model;
  model.beta = beta.cwiseMax(-1.0).cwiseMin(1.0);
  model.epsilons = instance_violations(train, centers, model.beta).cwiseMax(params.sigma);
  model.center_neg = centers.negative;
  model.center_pos = centers.positive;
  model.c_neg_hat = centers.negative.dot(model.beta);
  model.c_pos_hat = centers.positive.dot(model.beta);
  model.threshold = (model.c_neg_hat + model.c_pos_hat) / 2.0;
  model.lambda = params.lambda;
  model.sigma = params.sigma;
  model.objective = (model.c_neg_hat - model.c_pos_hat) + params.lambda * model.epsilons.sum();
  model.lp_iterations = iterations;
  return model;
}

LccModel rescaled(const LccModel& model, double c) {
  if (!(c > 0.0)) throw DataError("rescale factor must be positive");
  LccModel out = model;
  out.beta = c * model.beta;
  out.c_neg_hat = model.center_neg.dot(out.beta);
  out.c_pos_hat = model.center_pos.dot(out.beta);
  out.threshold = (out.c_neg_hat + out.c_pos_hat) / 2.0;
  return out;
}

std::size_t worst_outlier(const LccModel& model) {
  if (model.epsilons.size() == 0) throw DataError("model carries no training slacks");
  Eigen::Index best = 0;
  (model.lambda * (model.epsilons.array() - model.sigma)).maxCoeff(&best);
  return static_cast<std::size_t>(best);
}

}  // namespace lcc
