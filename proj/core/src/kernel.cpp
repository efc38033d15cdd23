#include "lcc/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "lcc/error.hpp"

namespace lcc {

KernelKind parse_kernel(std::string_view name) {
  if (name == "linear") return KernelKind::Linear;
  if (name == "rbf") return KernelKind::Rbf;
  throw DataError("unknown kernel '" + std::string(name) + "' (expected linear, rbf)");
}

std::string_view kernel_name(KernelKind kind) { return kind == KernelKind::Linear ? "linear" : "rbf"; }

void KernelSpec::validate() const {
  if (kind == KernelKind::Rbf && !(rbf_width > 0.0 && std::isfinite(rbf_width))) {
    throw DataError("rbf_width must be finite and > 0");
  }
}

double kernel_eval(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& z) {
  if (x.size() != z.size()) {
    throw DataError("kernel arguments differ in dimension (" + std::to_string(x.size()) + " vs " +
                    std::to_string(z.size()) + ")");
  }
  if (spec.kind == KernelKind::Linear) return x.dot(z);
  return std::exp(-(x - z).squaredNorm() / (2.0 * spec.rbf_width * spec.rbf_width));
}

Eigen::MatrixXd cross_gram(const KernelSpec& spec, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  spec.validate();
  if (a.cols() != b.cols()) {
    throw DataError("kernel arguments differ in dimension (" + std::to_string(a.cols()) + " vs " +
                    std::to_string(b.cols()) + ")");
  }
  Eigen::MatrixXd k = a * b.transpose();
  if (spec.kind == KernelKind::Linear) return k;
  const Eigen::VectorXd na = a.rowwise().squaredNorm();
  const Eigen::VectorXd nb = b.rowwise().squaredNorm();
  const double denom = 2.0 * spec.rbf_width * spec.rbf_width;
  for (Eigen::Index j = 0; j < k.cols(); ++j)
    for (Eigen::Index i = 0; i < k.rows(); ++i)
      k(i, j) = std::exp(-std::max(0.0, na(i) + nb(j) - 2.0 * k(i, j)) / denom);
  return k;
}

Eigen::MatrixXd gram(const KernelSpec& spec, const Eigen::MatrixXd& x) {
  spec.validate();
  const auto m = x.rows();
  Eigen::MatrixXd k(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      k(i, j) = kernel_eval(spec, x.row(i).transpose(), x.row(j).transpose());
      k(j, i) = k(i, j);
    }
  }
  return k;
}

Eigen::MatrixXd gram(const KernelSpec& spec, const Dataset& data) { return gram(spec, data.features); }

double median_pairwise_distance(const Eigen::MatrixXd& x) {
  const auto m = x.rows();
  if (m < 2) throw DataError("median_pairwise_distance needs at least two rows");
  std::vector<double> d;
  d.reserve(static_cast<std::size_t>(m * (m - 1) / 2));
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = i + 1; j < m; ++j) d.push_back((x.row(i) - x.row(j)).norm());
  const auto mid = d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2);
  std::nth_element(d.begin(), mid, d.end());
  if (d.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(d.begin(), mid);
  return 0.5 * (lower + upper);
}

namespace {

// Per-class column means of the Gram matrix: Ĉ_c = alpha . kbar_c.
std::pair<Eigen::VectorXd, Eigen::VectorXd> class_kernel_means(const Eigen::MatrixXd& k,
                                                                std::span<const Label> labels) {
  const auto m = k.rows();
  Eigen::VectorXd neg = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd pos = Eigen::VectorXd::Zero(m);
  double n_neg = 0.0;
  double n_pos = 0.0;
  for (Eigen::Index j = 0; j < m; ++j) {
    if (labels[static_cast<std::size_t>(j)] == Label::Negative) {
      neg += k.row(j).transpose();
      n_neg += 1.0;
    } else {
      pos += k.row(j).transpose();
      n_pos += 1.0;
    }
  }
  if (n_neg == 0.0 || n_pos == 0.0) throw DataError("kernel LCC: both classes (-1 and +1) must be present");
  return {neg / n_neg, pos / n_pos};
}

}  // namespace

LpProblem assemble_klcc_lp(const Eigen::MatrixXd& k, std::span<const Label> labels, const LccParams& params) {
  params.validate();
  const auto m = k.rows();
  if (k.cols() != m || static_cast<std::size_t>(m) != labels.size()) {
    throw DataError("Gram matrix must be square and match the label count");
  }
  const auto [kneg, kpos] = class_kernel_means(k, labels);
  const Eigen::VectorXd gap = kneg - kpos;
  const Eigen::VectorXd mid = 0.5 * (kneg + kpos);

  LpProblem lp;
  lp.objective.resize(2 * m);
  lp.objective.head(m) = gap;
  lp.objective.tail(m).setConstant(params.lambda);
  lp.constraints = Eigen::MatrixXd::Zero(m + 1, 2 * m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const double y = sign_of(labels[static_cast<std::size_t>(j)]);
    lp.constraints.row(j).head(m) = y * (mid - k.row(j).transpose()).transpose();
    lp.constraints(j, m + j) = -1.0;
  }
  lp.constraints.row(m).head(m) = gap.transpose();
  lp.relations.assign(static_cast<std::size_t>(m + 1), Relation::LessEqual);
  lp.rhs = Eigen::VectorXd::Zero(m + 1);
  lp.rhs(m) = params.sigma;
  lp.lower.resize(2 * m);
  lp.upper.resize(2 * m);
  lp.lower.head(m).setConstant(-1.0);
  lp.upper.head(m).setConstant(1.0);
  lp.lower.tail(m).setConstant(params.sigma);
  lp.upper.tail(m).setConstant(kInf);
  return lp;
}

double KernelLccModel::transform(const Eigen::VectorXd& x) const {
  if (x.size() != training.cols()) {
    throw DataError("instance has " + std::to_string(x.size()) + " features, model expects " +
                    std::to_string(training.cols()));
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < training.rows(); ++i) {
    if (alphas(i) != 0.0) sum += alphas(i) * kernel_eval(kernel, x, training.row(i).transpose());
  }
  return sum;
}

Eigen::VectorXd KernelLccModel::transform_rows(const Eigen::MatrixXd& x) const {
  if (x.cols() != training.cols()) {
    throw DataError("data has " + std::to_string(x.cols()) + " features, model expects " +
                    std::to_string(training.cols()));
  }
  return cross_gram(kernel, x, training) * alphas;
}

std::vector<Label> KernelLccModel::predict_rows(const Eigen::MatrixXd& x) const {
  const Eigen::VectorXd v = transform_rows(x);
  std::vector<Label> out(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i)] = threshold_rule(v(i), threshold);
  return out;
}

KernelLccModel train_klcc(const Dataset& train, const KernelSpec& spec, const LccParams& params) {
  spec.validate();
  require_both_classes(train, "train_klcc");
  const Eigen::MatrixXd k = gram(spec, train);
  const LpProblem lp = assemble_klcc_lp(k, train.labels, params);
  const LpSolution sol = solve(lp);
  if (sol.status != LpStatus::Optimal) {
    std::ostringstream msg;
    msg << "kernel centralization LP is " << to_string(sol.status)
        << ": kernelized class centers (near-)coincide or |sigma| = " << -params.sigma << " is too large";
    throw NumericError(msg.str());
  }
  const auto m = static_cast<Eigen::Index>(train.size());
  const auto [kneg, kpos] = class_kernel_means(k, train.labels);

  KernelLccModel model;
  model.alphas = sol.x.head(m).cwiseMax(-1.0).cwiseMin(1.0);
  model.epsilons = sol.x.tail(m).cwiseMax(params.sigma);
  model.training = train.features;
  model.kernel = spec;
  model.c_neg_hat = kneg.dot(model.alphas);
  model.c_pos_hat = kpos.dot(model.alphas);
  model.threshold = (model.c_neg_hat + model.c_pos_hat) / 2.0;
  model.lambda = params.lambda;
  model.sigma = params.sigma;
  model.objective = sol.objective_value;
  model.lp_iterations = sol.iterations;
  return model;
}

}  // namespace lcc
