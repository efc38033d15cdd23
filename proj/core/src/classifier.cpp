#include "lcc/classifier.hpp"

#include <string>

#include "lcc/error.hpp"

namespace lcc {

Method parse_method(std::string_view name) {
  if (name == "lcc") return Method::Lcc;
  if (name == "fqcc") return Method::Fqcc;
  if (name == "klcc") return Method::Klcc;
  if (name == "lda") return Method::Lda;
  if (name == "svm") return Method::Svm;
  throw DataError("unknown method '" + std::string(name) + "' (expected lcc, fqcc, klcc, lda, svm)");
}

std::string_view method_name(Method method) {
  switch (method) {
    case Method::Lcc: return "lcc";
    case Method::Fqcc: return "fqcc";
    case Method::Klcc: return "klcc";
    case Method::Lda: return "lda";
    case Method::Svm: return "svm";
  }
  return "unknown";
}

std::vector<Method> parse_methods(std::string_view list) {
  std::vector<Method> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const auto comma = list.find(',', start);
    const auto token = list.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    if (!token.empty()) out.push_back(parse_method(token));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw DataError("method list is empty");
  return out;
}

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Eigen::VectorXd projected_values(const ModelVariant& model, const Eigen::MatrixXd& x) {
  return std::visit(Overloaded{
                        [&](const LccModel& m) -> Eigen::VectorXd { return m.transform_rows(x); },
                        [&](const KernelLccModel& m) -> Eigen::VectorXd { return m.transform_rows(x); },
                        [&](const FqccModel& m) -> Eigen::VectorXd { return x * m.beta; },
                        [&](const LdaModel& m) -> Eigen::VectorXd {
                          return (x * m.weight).array() - m.threshold;
                        },
                        [&](const SvmModel& m) -> Eigen::VectorXd {
                          return (x * m.weight).array() + m.intercept;
                        },
                    },
                    model);
}

}  // namespace

std::size_t TrainedModel::dims() const {
  return std::visit(Overloaded{
                        [](const LccModel& m) { return m.dims(); },
                        [](const KernelLccModel& m) { return m.dims(); },
                        [](const FqccModel& m) { return static_cast<std::size_t>(m.beta.size()); },
                        [](const LdaModel& m) { return static_cast<std::size_t>(m.weight.size()); },
                        [](const SvmModel& m) { return static_cast<std::size_t>(m.weight.size()); },
                    },
                    model);
}

Eigen::VectorXd TrainedModel::scores(const Eigen::MatrixXd& x) const {
  if (static_cast<std::size_t>(x.cols()) != dims()) {
    throw DataError("model expects " + std::to_string(dims()) + " features, got " + std::to_string(x.cols()));
  }
  Eigen::VectorXd values = projected_values(model, x);
  if (discriminator) {
    for (Eigen::Index i = 0; i < values.size(); ++i) values(i) = discriminator->score(values(i));
  } else if (const auto* fq = std::get_if<FqccModel>(&model)) {
    values.array() -= fq->threshold;
  }
  return values;
}

std::vector<Label> TrainedModel::predict(const Eigen::MatrixXd& x) const {
  if (static_cast<std::size_t>(x.cols()) != dims()) {
    throw DataError("model expects " + std::to_string(dims()) + " features, got " + std::to_string(x.cols()));
  }
  if (const auto* fq = std::get_if<FqccModel>(&model)) return fq->predict_rows(x);
  const Eigen::VectorXd values = projected_values(model, x);
  std::vector<Label> out;
  out.reserve(static_cast<std::size_t>(values.size()));
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    out.push_back(discriminator ? discriminator->discriminate(values(i))
                                : (values(i) >= 0.0 ? Label::Positive : Label::Negative));
  }
  return out;
}

TrainedModel train_method(Method method, const Dataset& train, const MethodSettings& settings, std::uint64_t seed) {
  TrainedModel out;
  out.method = method;
  switch (method) {
    case Method::Lcc: {
      LccModel m = train_lcc(train, settings.lcc);
      out.discriminator = fit_discriminator(settings.discriminator, m, train, settings.svm_scale_h);
      out.model = std::move(m);
      break;
    }
    case Method::Fqcc: {
      FqccOptions options = settings.fqcc;
      options.seed = seed;
      out.model = train_fqcc(train, settings.lcc, options);
      break;
    }
    case Method::Klcc: {
      KernelSpec spec;
      spec.kind = settings.kernel;
      if (spec.kind == KernelKind::Rbf) {
        spec.rbf_width = settings.rbf_width ? *settings.rbf_width : median_pairwise_distance(train.features);
        if (!(spec.rbf_width > 0.0)) throw DataError("rbf width must be positive (median distance is zero?)");
      }
      KernelLccModel m = train_klcc(train, spec, settings.lcc);
      const Eigen::VectorXd projected = m.transform_rows(train.features);
      out.discriminator =
          fit_discriminator(settings.discriminator,
                            std::span<const double>(projected.data(), static_cast<std::size_t>(projected.size())),
                            train.labels, m.c_neg_hat, m.c_pos_hat, settings.svm_scale_h);
      out.model = std::move(m);
      break;
    }
    case Method::Lda:
      out.model = train_lda(train, settings.lda_lambda);
      break;
    case Method::Svm:
      out.model = train_linear_svm(train, settings.svm_lambda, settings.svm_epochs, seed);
      break;
  }
  return out;
}

}  // namespace lcc
