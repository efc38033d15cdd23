#include "lcc/fqcc.hpp"

#include <cmath>

#include "lcc/error.hpp"
#include "lcc/rng.hpp"

namespace lcc {

namespace {

double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// Differences to each center, precomputed once per training call.
struct FqccTerms {
  Eigen::MatrixXd to_pos;  // x_i - C_1
  Eigen::MatrixXd to_neg;  // x_i - C_-1
  Eigen::VectorXd gap;     // C_-1 - C_1
  Eigen::VectorXd y;

  FqccTerms(const Dataset& train, const ClassCenters& c)
      : to_pos(train.features.rowwise() - c.positive.transpose()),
        to_neg(train.features.rowwise() - c.negative.transpose()),
        gap(c.negative - c.positive),
        y(static_cast<Eigen::Index>(train.size())) {
    for (std::size_t i = 0; i < train.size(); ++i) y(static_cast<Eigen::Index>(i)) = sign_of(train.labels[i]);
  }

  double value(const Eigen::VectorXd& beta, const LccParams& p) const {
    const Eigen::ArrayXd a = (to_pos * beta).array().abs();
    const Eigen::ArrayXd b = (to_neg * beta).array().abs();
    const Eigen::ArrayXd eps = (y.array() * (a - b)).max(p.sigma);
    return -std::abs(gap.dot(beta)) + p.lambda * eps.sum();
  }

  Eigen::VectorXd subgradient(const Eigen::VectorXd& beta, const LccParams& p) const {
    const Eigen::VectorXd a = to_pos * beta;
    const Eigen::VectorXd b = to_neg * beta;
    Eigen::VectorXd weights_pos = Eigen::VectorXd::Zero(a.size());
    Eigen::VectorXd weights_neg = Eigen::VectorXd::Zero(a.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      if (y(i) * (std::abs(a(i)) - std::abs(b(i))) > p.sigma) {
        weights_pos(i) = p.lambda * y(i) * sgn(a(i));
        weights_neg(i) = -p.lambda * y(i) * sgn(b(i));
      }
    }
    Eigen::VectorXd g = to_pos.transpose() * weights_pos + to_neg.transpose() * weights_neg;
    g -= sgn(gap.dot(beta)) * gap;
    return g;
  }
};

Eigen::VectorXd clip_box(const Eigen::VectorXd& v) { return v.cwiseMax(-1.0).cwiseMin(1.0); }

Eigen::VectorXd descend(const FqccTerms& terms, Eigen::VectorXd beta, const LccParams& params,
                        const FqccOptions& options, double& best_value) {
  Eigen::VectorXd best = beta;
  best_value = terms.value(beta, params);
  for (std::size_t k = 0; k < options.iterations; ++k) {
    const Eigen::VectorXd g = terms.subgradient(beta, params);
    const double norm = g.norm();
    if (!(norm > 0.0)) break;
    const double step = options.initial_step / std::sqrt(static_cast<double>(k) + 1.0);
    beta = clip_box(beta - (step / norm) * g);
    const double v = terms.value(beta, params);
    if (v < best_value) {
      best_value = v;
      best = beta;
    }
  }
  return best;
}

}  // namespace

double fqcc_objective(const Dataset& train, const ClassCenters& centers, const Eigen::VectorXd& beta,
                      const LccParams& params) {
  return FqccTerms(train, centers).value(beta, params);
}

Eigen::VectorXd descend_fqcc(const Dataset& train, const ClassCenters& centers, const Eigen::VectorXd& start,
                             const LccParams& params, const FqccOptions& options) {
  double value = 0.0;
  return descend(FqccTerms(train, centers), clip_box(start), params, options, value);
}

double FqccModel::transform(const Eigen::VectorXd& x) const {
  if (x.size() != beta.size()) {
    throw DataError("instance has " + std::to_string(x.size()) + " features, model expects " +
                    std::to_string(beta.size()));
  }
  return x.dot(beta);
}

Label FqccModel::predict(const Eigen::VectorXd& x) const {
  const double v = transform(x);
  return std::abs(v - c_neg_hat) <= std::abs(v - c_pos_hat) ? Label::Negative : Label::Positive;
}

std::vector<Label> FqccModel::predict_rows(const Eigen::MatrixXd& x) const {
  std::vector<Label> out;
  out.reserve(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index i = 0; i < x.rows(); ++i) out.push_back(predict(x.row(i).transpose()));
  return out;
}

FqccModel train_fqcc(const Dataset& train, const LccParams& params, const FqccOptions& options) {
  params.validate();
  if (options.restarts == 0) throw DataError("train_fqcc: restarts must be positive");
  const ClassCenters centers = class_centers(train);
  const FqccTerms terms(train, centers);
  const auto n = static_cast<Eigen::Index>(train.dims());

  Rng rng(options.seed);
  Eigen::VectorXd best;
  double best_value = kInf;
  for (std::size_t r = 0; r < options.restarts; ++r) {
    Eigen::VectorXd start(n);
    if (r == 0) {
      start = clip_box(centers.positive - centers.negative);
    } else {
      for (Eigen::Index j = 0; j < n; ++j) start(j) = rng.uniform(-1.0, 1.0);
    }
    double value = 0.0;
    Eigen::VectorXd beta = descend(terms, start, params, options, value);
    if (value < best_value) {
      best_value = value;
      best = std::move(beta);
    }
  }

  FqccModel model;
  model.beta = best;
  if (centers.negative.dot(model.beta) > centers.positive.dot(model.beta)) model.beta = -model.beta;
  model.c_neg_hat = centers.negative.dot(model.beta);
  model.c_pos_hat = centers.positive.dot(model.beta);
  model.threshold = (model.c_neg_hat + model.c_pos_hat) / 2.0;
  model.lambda = params.lambda;
  model.sigma = params.sigma;
  model.objective_achieved = best_value;
  return model;
}

}  // namespace lcc
