#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lcc/benchmark.hpp"
#include "lcc/classifier.hpp"
#include "lcc/error.hpp"
#include "lcc/eval.hpp"
#include "lcc/generators.hpp"
#include "lcc/model_io.hpp"

namespace lcc::cli {

namespace {

namespace fs = std::filesystem;

class UsageError : public Error {
 public:
  using Error::Error;
};

struct SourceFlags {
  std::string data;
  std::string gen;
  std::size_t label_column = 0;
  bool header = false;
};

struct ModelFlags {
  std::string method = "lcc";
  double lambda = 2.0;
  double sigma = -0.01;
  std::string kernel = "rbf";
  std::string rbf_width = "median";
  std::string discriminator = "dist";
  double lda_lambda = 0.5;
  double svm_lambda = 1.0;
  std::size_t svm_epochs = 50;
};

void add_source_flags(CLI::App& app, SourceFlags& f) {
  auto* data = app.add_option("--data", f.data, "CSV dataset (label column plus numeric features)");
  auto* gen = app.add_option("--gen", f.gen, "generator spec name[:m=..][:noise=..][:seed=..]");
  data->excludes(gen);
  app.add_option("--label-column", f.label_column, "0-based label column in the CSV")->capture_default_str();
  app.add_flag("--header", f.header, "CSV has a header line");
}

void add_model_flags(CLI::App& app, ModelFlags& f, bool single_method) {
  if (single_method) {
    app.add_option("--method", f.method, "lcc, fqcc, klcc, lda or svm")->capture_default_str();
  }
  app.add_option("--lambda", f.lambda, "slack weight of lcc, fqcc, klcc")->capture_default_str();
  app.add_option("--sigma", f.sigma, "margin (< 0) of lcc, fqcc, klcc")->capture_default_str();
  app.add_option("--kernel", f.kernel, "klcc kernel: linear or rbf")->capture_default_str();
  app.add_option("--rbf-width", f.rbf_width, "positive width, 'median' or 'cv'")->capture_default_str();
  app.add_option("--discriminator", f.discriminator, "dist, 1nn or 1sv (lcc, klcc)")->capture_default_str();
  app.add_option("--lda-lambda", f.lda_lambda, "LDA shrinkage in [0, 1]")->capture_default_str();
  app.add_option("--svm-lambda", f.svm_lambda, "linear SVM regularization")->capture_default_str();
  app.add_option("--svm-epochs", f.svm_epochs, "linear SVM passes over the data")->capture_default_str();
}

MethodSettings settings_from(const ModelFlags& f) {
  MethodSettings s;
  s.lcc.lambda = f.lambda;
  s.lcc.sigma = f.sigma;
  s.lcc.validate();
  s.kernel = parse_kernel(f.kernel);
  s.discriminator = parse_discriminator(f.discriminator);
  s.lda_lambda = f.lda_lambda;
  s.svm_lambda = f.svm_lambda;
  s.svm_epochs = f.svm_epochs;
  if (f.rbf_width != "median" && f.rbf_width != "cv") {
    std::size_t used = 0;
    double w = 0.0;
    try {
      w = std::stod(f.rbf_width, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != f.rbf_width.size() || !(w > 0.0) || !std::isfinite(w)) {
      throw UsageError("--rbf-width must be a positive number, 'median' or 'cv'");
    }
    s.rbf_width = w;
  }
  return s;
}

NamedDataset load_source(const SourceFlags& f, std::uint64_t seed) {
  if (f.data.empty() == f.gen.empty()) throw UsageError("exactly one of --data or --gen is required");
  if (!f.gen.empty()) return {f.gen, generate(parse_generator_spec(f.gen), seed)};
  return {fs::path(f.data).stem().string(), load_csv(f.data, CsvOptions{f.label_column, f.header})};
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

template <class F>
void with_output(const std::string& path, std::ostream& fallback, F&& write) {
  if (path.empty()) {
    write(fallback);
  } else {
    auto file = open_output(path);
    write(file);
  }
}

// ---- train ----------------------------------------------------------------

struct TrainFlags {
  SourceFlags source;
  ModelFlags model;
  std::uint64_t seed = 42;
  bool no_normalize = false;
  std::string out;
  std::string dump_lp;
};

void describe_slacks(std::ostream& out, const Eigen::VectorXd& eps, double sigma) {
  const auto at_sigma = (eps.array() <= sigma + 1e-9).count();
  const auto misclassified = (eps.array() > 0.0).count();
  out << "epsilon min " << eps.minCoeff() << " mean " << eps.mean() << " max " << eps.maxCoeff() << '\n';
  out << "epsilon at sigma " << at_sigma << " of " << eps.size() << ", positive " << misclassified << '\n';
}

int cmd_train(const TrainFlags& f, std::ostream& out) {
  if (f.out.empty()) throw UsageError("--out <model file> is required");
  const Method method = parse_method(f.model.method);
  MethodSettings settings = settings_from(f.model);
  const NamedDataset named = load_source(f.source, f.seed);
  require_both_classes(named.data, "training data");

  ModelFile file;
  file.preprocessing.input_dims = named.data.dims();
  PrunedDataset pruned = drop_zero_variance(named.data);
  file.preprocessing.kept_columns = pruned.kept_columns;
  Dataset train = std::move(pruned.data);
  if (!f.no_normalize) {
    file.preprocessing.normalizer = fit_normalizer(train);
    train = apply_normalizer(*file.preprocessing.normalizer, train);
  }
  if (method == Method::Klcc && settings.kernel == KernelKind::Rbf && f.model.rbf_width == "cv") {
    settings.rbf_width = select_rbf_width(train, settings, kRbfWidthMultipliers, 3, f.seed);
  }

  if (!f.dump_lp.empty()) {
    auto lp_out = open_output(f.dump_lp);
    if (method == Method::Lcc) {
      write_lp(lp_out, assemble_lcc_lp(train, settings.lcc));
    } else if (method == Method::Klcc) {
      KernelSpec spec{settings.kernel, settings.rbf_width.value_or(median_pairwise_distance(train.features))};
      write_lp(lp_out, assemble_klcc_lp(gram(spec, train), train.labels, settings.lcc));
    } else {
      throw UsageError("--dump-lp applies to lcc and klcc only");
    }
  }

  file.model = train_method(method, train, settings, f.seed);
  save_model(f.out, file);

  const Eigen::VectorXd scores = file.model.scores(train.features);
  out << std::setprecision(10);
  out << "method " << method_name(method) << '\n';
  out << "instances " << train.size() << " features " << train.dims() << " (kept " << train.dims() << " of "
      << named.data.dims() << ")\n";
  out << "train accuracy " << accuracy(file.model.predict(train.features), train.labels) << '\n';
  out << "train auc "
      << roc_auc(std::span<const double>(scores.data(), static_cast<std::size_t>(scores.size())), train.labels).auc
      << '\n';
  if (const auto* m = std::get_if<LccModel>(&file.model.model)) {
    out << "objective " << m->objective << '\n';
    out << "centers c_neg_hat " << m->c_neg_hat << " c_pos_hat " << m->c_pos_hat << " gap "
        << m->c_pos_hat - m->c_neg_hat << '\n';
    describe_slacks(out, m->epsilons, m->sigma);
    out << "lp iterations " << m->lp_iterations << '\n';
  } else if (const auto* k = std::get_if<KernelLccModel>(&file.model.model)) {
    out << "kernel " << kernel_name(k->kernel.kind);
    if (k->kernel.kind == KernelKind::Rbf) out << " width " << k->kernel.rbf_width;
    out << '\n';
    out << "objective " << k->objective << '\n';
    out << "centers c_neg_hat " << k->c_neg_hat << " c_pos_hat " << k->c_pos_hat << " gap "
        << k->c_pos_hat - k->c_neg_hat << '\n';
    describe_slacks(out, k->epsilons, k->sigma);
    out << "lp iterations " << k->lp_iterations << '\n';
  } else if (const auto* q = std::get_if<FqccModel>(&file.model.model)) {
    out << "objective " << q->objective_achieved << '\n';
    out << "centers c_neg_hat " << q->c_neg_hat << " c_pos_hat " << q->c_pos_hat << '\n';
  }
  out << "model " << f.out << '\n';
  return kExitOk;
}

// ---- predict / roc ----------------------------------------------------------

struct PredictFlags {
  std::string model;
  std::string data;
  std::size_t label_column = 0;
  bool header = false;
  bool unlabeled = false;
  std::string out;
};

int cmd_predict(const PredictFlags& f, std::ostream& out, std::ostream& err) {
  const ModelFile file = load_model(f.model);
  Eigen::MatrixXd x;
  std::vector<Label> truth;
  if (f.unlabeled) {
    x = load_csv_features(f.data, f.header);
  } else {
    Dataset d = load_csv(f.data, CsvOptions{f.label_column, f.header});
    x = std::move(d.features);
    truth = std::move(d.labels);
  }
  Eigen::VectorXd scores;
  std::vector<Label> labels;
  if (x.rows() > 0) {
    scores = file.scores(x);
    labels = file.predict(x);
  }
  with_output(f.out, out, [&](std::ostream& o) {
    o << "label,score\n" << std::setprecision(17);
    for (std::size_t i = 0; i < labels.size(); ++i)
      o << static_cast<int>(labels[i]) << ',' << scores(static_cast<Eigen::Index>(i)) << '\n';
    if (!truth.empty()) err << "accuracy " << std::setprecision(10) << accuracy(labels, truth) << '\n';
  });
  return kExitOk;
}

int cmd_roc(const PredictFlags& f, std::ostream& out, std::ostream& err) {
  const ModelFile file = load_model(f.model);
  const Dataset d = load_csv(f.data, CsvOptions{f.label_column, f.header});
  const Eigen::VectorXd scores = file.scores(d.features);
  const RocResult roc = roc_auc(std::span<const double>(scores.data(), d.size()), d.labels);
  with_output(f.out, out, [&](std::ostream& o) {
    o << "fpr,tpr\n" << std::setprecision(17);
    for (const auto& [fpr, tpr] : roc.curve) o << fpr << ',' << tpr << '\n';
  });
  (f.out.empty() ? err : out) << "auc " << std::setprecision(10) << roc.auc << '\n';
  return kExitOk;
}

// ---- benchmark --------------------------------------------------------------

struct BenchmarkFlags {
  std::vector<std::string> data;
  std::vector<std::string> gen;
  std::size_t label_column = 0;
  bool header = false;
  ModelFlags model;
  std::string methods = "lcc,lda,svm";
  int procedure = 1;
  std::size_t runs = 100;
  std::size_t folds = 10;
  std::uint64_t seed = 42;
  std::string out;
};

int cmd_benchmark(const BenchmarkFlags& f, std::ostream& out) {
  if (f.out.empty()) throw UsageError("--out <directory> is required");
  if (f.data.empty() && f.gen.empty()) throw UsageError("at least one --data or --gen is required");
  if (f.procedure != 1 && f.procedure != 2) throw UsageError("--procedure must be 1 or 2");

  BenchmarkConfig config;
  config.procedure = f.procedure;
  config.runs = f.runs;
  config.folds = f.folds;
  config.methods = parse_methods(f.methods);
  config.settings = settings_from(f.model);
  config.seed = f.seed;
  if (f.model.rbf_width == "cv") config.rbf_width_multipliers = kRbfWidthMultipliers;

  std::vector<NamedDataset> datasets;
  for (const auto& path : f.data)
    datasets.push_back({fs::path(path).stem().string(), load_csv(path, CsvOptions{f.label_column, f.header})});
  for (const auto& spec : f.gen) datasets.push_back({spec, generate(parse_generator_spec(spec), f.seed)});

  const EvalReport report = run_benchmark(datasets, config);
  const fs::path dir(f.out);
  fs::create_directories(dir);
  if (report.procedure == 1) {
    auto csv = open_output(dir / "report.csv");
    write_report_csv(csv, report);
    auto timings = open_output(dir / "timings.csv");
    write_timings_csv(timings, report);
  } else {
    auto csv = open_output(dir / "tuning.csv");
    write_tuning_csv(csv, report);
  }
  auto summary = open_output(dir / "summary.txt");
  write_summary(summary, report);
  write_summary(out, report);
  return kExitOk;
}

// ---- demo -------------------------------------------------------------------

struct DemoFlags {
  std::size_t m_per_class = 100;
  std::size_t bins = 30;
  double lambda = 2.0;
  double sigma = -0.01;
  std::uint64_t seed = 42;
  std::string out;
};

struct Support {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
};

void write_histogram(std::ostream& o, const std::string& projection, const Eigen::VectorXd& values,
                     const std::vector<Label>& labels, std::size_t bins) {
  const double lo = values.minCoeff();
  const double hi = values.maxCoeff();
  const double width = hi > lo ? (hi - lo) / static_cast<double>(bins) : 1.0;
  std::vector<std::size_t> neg(bins, 0);
  std::vector<std::size_t> pos(bins, 0);
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    auto b = static_cast<std::size_t>((values(i) - lo) / width);
    b = std::min(b, bins - 1);
    (labels[static_cast<std::size_t>(i)] == Label::Negative ? neg : pos)[b] += 1;
  }
  o << "# projection: " << projection << '\n';
  o << "bin_low,bin_high,count_neg,count_pos\n" << std::setprecision(17);
  for (std::size_t b = 0; b < bins; ++b) {
    o << lo + width * static_cast<double>(b) << ',' << lo + width * static_cast<double>(b + 1) << ',' << neg[b]
      << ',' << pos[b] << '\n';
  }
}

bool supports_overlap(const Eigen::VectorXd& values, const std::vector<Label>& labels) {
  Support s[2];
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    auto& t = s[labels[static_cast<std::size_t>(i)] == Label::Positive ? 1 : 0];
    t.lo = std::min(t.lo, values(i));
    t.hi = std::max(t.hi, values(i));
  }
  return s[0].lo <= s[1].hi && s[1].lo <= s[0].hi;
}

std::string format_vector(const Eigen::VectorXd& v) {
  std::ostringstream o;
  o << std::setprecision(10) << '(';
  for (Eigen::Index j = 0; j < v.size(); ++j) o << (j ? ", " : "") << v(j);
  o << ')';
  return o.str();
}

int cmd_demo(const DemoFlags& f, std::ostream& out) {
  if (f.out.empty()) throw UsageError("--out <directory> is required");
  if (f.bins == 0) throw UsageError("--bins must be positive");
  const GaussianDemo demo;
  const Dataset data =
      gen_gaussian_pair(demo.mean_neg, demo.cov_neg, demo.mean_pos, demo.cov_pos, f.m_per_class, f.seed);
  const ClassCenters centers = class_centers(data);
  const Eigen::VectorXd diff = centers.positive - centers.negative;
  const double inf_norm = diff.lpNorm<Eigen::Infinity>();
  if (!(inf_norm > 0.0)) throw NumericError("class centers coincide; no initial projection");
  const Eigen::VectorXd beta0 = diff / inf_norm;
  const LccModel model = train_lcc(data, LccParams{f.lambda, f.sigma});

  const Eigen::VectorXd before = data.features * beta0;
  const Eigen::VectorXd after = model.transform_rows(data.features);
  const fs::path dir(f.out);
  fs::create_directories(dir);
  {
    auto o = open_output(dir / "before.csv");
    write_histogram(o, "beta0 = (C_1 - C_-1) / ||C_1 - C_-1||_inf = " + format_vector(beta0), before, data.labels,
                    f.bins);
  }
  {
    auto o = open_output(dir / "after.csv");
    write_histogram(o, "optimized beta = " + format_vector(model.beta), after, data.labels, f.bins);
  }
  {
    auto o = open_output(dir / "points.csv");
    o << "label,x1,x2,before,after\n" << std::setprecision(17);
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      o << static_cast<int>(data.labels[i]) << ',' << data.features(ii, 0) << ',' << data.features(ii, 1) << ','
        << before(ii) << ',' << after(ii) << '\n';
    }
  }
  out << "beta0 " << format_vector(beta0) << " supports overlap: " << (supports_overlap(before, data.labels) ? "yes" : "no")
      << '\n';
  out << "beta  " << format_vector(model.beta) << " supports overlap: "
      << (supports_overlap(after, data.labels) ? "yes" : "no") << '\n';
  out << "histograms " << (dir / "before.csv").string() << ' ' << (dir / "after.csv").string() << '\n';
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Linear centralization classifier toolkit", "lcc"};
  app.require_subcommand(1);

  TrainFlags train;
  auto* train_cmd = app.add_subcommand("train", "train one model and write a model file");
  add_source_flags(*train_cmd, train.source);
  add_model_flags(*train_cmd, train.model, true);
  train_cmd->add_option("--seed", train.seed, "seed for generators and stochastic trainers")->capture_default_str();
  train_cmd->add_flag("--no-normalize", train.no_normalize, "skip z-scoring of the features");
  train_cmd->add_option("--out", train.out, "model file to write");
  train_cmd->add_option("--dump-lp", train.dump_lp, "write the assembled LP as a tab-separated table");

  PredictFlags predict;
  auto* predict_cmd = app.add_subcommand("predict", "score a CSV with a saved model");
  predict_cmd->add_option("--model", predict.model, "model file")->required();
  predict_cmd->add_option("--data", predict.data, "CSV to score")->required();
  predict_cmd->add_option("--label-column", predict.label_column, "0-based label column")->capture_default_str();
  predict_cmd->add_flag("--header", predict.header, "CSV has a header line");
  predict_cmd->add_flag("--unlabeled", predict.unlabeled, "CSV has no label column");
  predict_cmd->add_option("--out", predict.out, "predictions CSV (default: stdout)");

  PredictFlags roc;
  auto* roc_cmd = app.add_subcommand("roc", "ROC curve and AUC of a saved model on a labeled CSV");
  roc_cmd->add_option("--model", roc.model, "model file")->required();
  roc_cmd->add_option("--data", roc.data, "labeled CSV")->required();
  roc_cmd->add_option("--label-column", roc.label_column, "0-based label column")->capture_default_str();
  roc_cmd->add_flag("--header", roc.header, "CSV has a header line");
  roc_cmd->add_option("--out", roc.out, "curve CSV (default: stdout)");

  BenchmarkFlags bench;
  auto* bench_cmd = app.add_subcommand("benchmark", "compare methods over repeated splits or k-fold grid search");
  bench_cmd->add_option("--data", bench.data, "CSV dataset (repeatable)");
  bench_cmd->add_option("--gen", bench.gen, "generator spec (repeatable)");
  bench_cmd->add_option("--label-column", bench.label_column, "0-based label column")->capture_default_str();
  bench_cmd->add_flag("--header", bench.header, "CSV files have a header line");
  bench_cmd->add_option("--method", bench.methods, "comma-separated methods")->capture_default_str();
  add_model_flags(*bench_cmd, bench.model, false);
  bench_cmd->add_option("--procedure", bench.procedure, "1: repeated 70/30 splits, 2: k-fold grid search")
      ->capture_default_str();
  bench_cmd->add_option("--runs", bench.runs, "procedure 1 run count")->capture_default_str();
  bench_cmd->add_option("--folds", bench.folds, "procedure 2 fold count")->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed, "base seed")->capture_default_str();
  bench_cmd->add_option("--out", bench.out, "output directory");

  DemoFlags demo;
  auto* demo_cmd = app.add_subcommand("demo", "two-Gaussian example: projected histograms before and after training");
  demo_cmd->add_option("--m", demo.m_per_class, "instances per class")->capture_default_str();
  demo_cmd->add_option("--bins", demo.bins, "histogram bins")->capture_default_str();
  demo_cmd->add_option("--lambda", demo.lambda, "slack weight")->capture_default_str();
  demo_cmd->add_option("--sigma", demo.sigma, "margin (< 0)")->capture_default_str();
  demo_cmd->add_option("--seed", demo.seed, "sampling seed")->capture_default_str();
  demo_cmd->add_option("--out", demo.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (train_cmd->parsed()) return cmd_train(train, out);
    if (predict_cmd->parsed()) return cmd_predict(predict, out, err);
    if (roc_cmd->parsed()) return cmd_roc(roc, out, err);
    if (bench_cmd->parsed()) return cmd_benchmark(bench, out);
    if (demo_cmd->parsed()) return cmd_demo(demo, out);
  } catch (const NumericError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace lcc::cli
