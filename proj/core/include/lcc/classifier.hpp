#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "lcc/baselines.hpp"
#include "lcc/dataset.hpp"
#include "lcc/discriminator.hpp"
#include "lcc/fqcc.hpp"
#include "lcc/kernel.hpp"
#include "lcc/lcc.hpp"

namespace lcc {

enum class Method { Lcc, Fqcc, Klcc, Lda, Svm };

/// Accepts "lcc", "fqcc", "klcc", "lda", "svm".
Method parse_method(std::string_view name);
std::string_view method_name(Method method);
/// Comma-separated list, e.g. "lcc,lda,svm".
std::vector<Method> parse_methods(std::string_view list);

struct MethodSettings {
  LccParams lcc;                         // lcc, fqcc, klcc
  FqccOptions fqcc;
  KernelKind kernel = KernelKind::Rbf;
  std::optional<double> rbf_width;       // unset: median pairwise training distance
  DiscriminatorKind discriminator = DiscriminatorKind::Dist;  // lcc, klcc
  double svm_scale_h = kDefaultSvmScale;
  double lda_lambda = 0.5;
  double svm_lambda = 1.0;
  std::size_t svm_epochs = 50;
};

using ModelVariant = std::variant<LccModel, FqccModel, KernelLccModel, LdaModel, SvmModel>;

/// Any trained classifier behind one scoring interface. Scores grow toward
/// class +1 and are what ROC analysis consumes.
struct TrainedModel {
  Method method = Method::Lcc;
  ModelVariant model;
  /// Set for lcc and klcc; applied to the projected value.
  std::optional<Discriminator> discriminator;

  std::size_t dims() const;
  Eigen::VectorXd scores(const Eigen::MatrixXd& x) const;
  std::vector<Label> predict(const Eigen::MatrixXd& x) const;
};

/// `seed` drives the stochastic trainers (fqcc restarts, svm sampling).
TrainedModel train_method(Method method, const Dataset& train, const MethodSettings& settings,
                          std::uint64_t seed = 42);

}  // namespace lcc
