#include "lcc/benchmark.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "lcc/error.hpp"
#include "lcc/eval.hpp"
#include "lcc/generators.hpp"

namespace lcc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <class T>
T parse_number(std::string_view key, std::string_view text) {
  std::istringstream in{std::string(text)};
  T value{};
  if (!(in >> value) || !in.eof()) {
    throw DataError("generator spec: cannot parse " + std::string(key) + "='" + std::string(text) + "'");
  }
  return value;
}

std::uint64_t run_seed(std::uint64_t base, std::size_t run) { return base + run; }

double mean_of(const std::vector<double>& v) {
  return v.empty() ? kNaN : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double mu = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - mu) * (x - mu);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double measure_of(const RunRecord& r, Measure m) {
  switch (m) {
    case Measure::TrainAuc: return r.train_auc;
    case Measure::TestAuc: return r.test_auc;
    case Measure::TimeMs: return r.time_ms;
  }
  return kNaN;
}

std::vector<double> values_of(const EvalReport& report, const std::string& dataset, Method method, Measure m) {
  std::vector<double> out;
  for (const auto& r : report.records)
    if (!r.failed && r.dataset == dataset && r.method == method) out.push_back(measure_of(r, m));
  return out;
}

constexpr Measure kMeasures[] = {Measure::TrainAuc, Measure::TestAuc, Measure::TimeMs};

}  // namespace

GeneratorSpec parse_generator_spec(std::string_view text) {
  GeneratorSpec spec;
  std::size_t start = 0;
  bool first = true;
  while (true) {
    const auto colon = text.find(':', start);
    const auto part = text.substr(start, colon == std::string_view::npos ? std::string_view::npos : colon - start);
    if (first) {
      spec.name = std::string(part);
      first = false;
    } else {
      const auto eq = part.find('=');
      if (eq == std::string_view::npos) throw DataError("generator spec: expected key=value, got '" + std::string(part) + "'");
      const auto key = part.substr(0, eq);
      const auto value = part.substr(eq + 1);
      if (key == "m") {
        spec.m = parse_number<std::size_t>(key, value);
      } else if (key == "noise") {
        spec.noise = parse_number<double>(key, value);
      } else if (key == "seed") {
        spec.seed = parse_number<std::uint64_t>(key, value);
      } else {
        throw DataError("generator spec: unknown key '" + std::string(key) + "' (expected m, noise, seed)");
      }
    }
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  if (spec.name.empty()) throw DataError("generator spec: missing generator name");
  return spec;
}

Dataset generate(const GeneratorSpec& spec, std::uint64_t default_seed) {
  const std::uint64_t seed = spec.seed.value_or(default_seed);
  if (spec.name == "gaussian") {
    const GaussianDemo demo;
    const std::size_t m = spec.m.value_or(200);
    if (m < 2) throw DataError("gaussian generator needs m >= 2");
    return gen_gaussian_pair(demo.mean_neg, demo.cov_neg, demo.mean_pos, demo.cov_pos, m / 2, seed);
  }
  const Shape shape = parse_shape(spec.name);
  return gen_shape(shape, spec.m.value_or(300), spec.noise.value_or(default_noise(shape)), seed);
}

std::string_view measure_name(Measure measure) {
  switch (measure) {
    case Measure::TrainAuc: return "train_auc";
    case Measure::TestAuc: return "test_auc";
    case Measure::TimeMs: return "time_ms";
  }
  return "unknown";
}

std::vector<double> parameter_grid(Method method) {
  std::vector<double> grid;
  switch (method) {
    case Method::Lcc:
    case Method::Fqcc:
    case Method::Klcc:
      for (int e = -7; e <= 7; ++e) grid.push_back(-std::ldexp(1.0, e));
      break;
    case Method::Lda:
      for (int k = 1; k <= 15; ++k) grid.push_back(k / 15.0);
      break;
    case Method::Svm:
      for (int e = -30; e <= 26; e += 4) grid.push_back(std::pow(10.0, e / 15.0));
      break;
  }
  return grid;
}

std::string_view tuned_parameter(Method method) {
  switch (method) {
    case Method::Lcc:
    case Method::Fqcc:
    case Method::Klcc:
      return "sigma";
    case Method::Lda:
    case Method::Svm:
      return "lambda";
  }
  return "unknown";
}

MethodSettings with_parameter(Method method, MethodSettings settings, double value) {
  switch (method) {
    case Method::Lcc:
    case Method::Fqcc:
    case Method::Klcc:
      settings.lcc.sigma = value;
      break;
    case Method::Lda:
      settings.lda_lambda = value;
      break;
    case Method::Svm:
      settings.svm_lambda = value;
      break;
  }
  return settings;
}

std::vector<double> descending_ranks(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  const auto key = [&](std::size_t i) { return std::isnan(values[i]) ? -std::numeric_limits<double>::infinity() : values[i]; };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key(a) > key(b); });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && key(order[j + 1]) == key(order[i])) ++j;
    const double rank = 0.5 * static_cast<double>(i + j);
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

RunRecord evaluate_split(const Dataset& train, const Dataset& test, Method method, const MethodSettings& settings,
                         std::uint64_t seed) {
  const Normalizer norm = fit_normalizer(train);
  const Dataset train_n = apply_normalizer(norm, train);
  const Dataset test_n = apply_normalizer(norm, test);

  RunRecord rec;
  rec.method = method;
  const auto start = std::chrono::steady_clock::now();
  const TrainedModel model = train_method(method, train_n, settings, seed);
  const auto stop = std::chrono::steady_clock::now();
  rec.time_ms = std::chrono::duration<double, std::milli>(stop - start).count();

  const Eigen::VectorXd train_scores = model.scores(train_n.features);
  const Eigen::VectorXd test_scores = model.scores(test_n.features);
  rec.train_auc = roc_auc(std::span<const double>(train_scores.data(), train.size()), train.labels).auc;
  rec.test_auc = roc_auc(std::span<const double>(test_scores.data(), test.size()), test.labels).auc;
  rec.train_accuracy = accuracy(model.predict(train_n.features), train.labels);
  rec.test_accuracy = accuracy(model.predict(test_n.features), test.labels);
  return rec;
}

namespace {

// Width selection runs on the normalized train split and is not timed.
MethodSettings settings_for_split(Method method, const Dataset& train, const BenchmarkConfig& config,
                                  std::uint64_t seed) {
  MethodSettings s = config.settings;
  if (method == Method::Klcc && s.kernel == KernelKind::Rbf && !config.rbf_width_multipliers.empty()) {
    const Dataset train_n = apply_normalizer(fit_normalizer(train), train);
    s.rbf_width = select_rbf_width(train_n, s, config.rbf_width_multipliers, config.rbf_width_folds, seed);
  }
  return s;
}

void run_procedure_1(const NamedDataset& named, const Dataset& data, const BenchmarkConfig& config,
                     EvalReport& report) {
  for (std::size_t run = 0; run < config.runs; ++run) {
    const std::uint64_t seed = run_seed(config.seed, run);
    const Split split = stratified_split(data, config.train_fraction, seed);
    const Dataset train = data.subset(split.train);
    const Dataset test = data.subset(split.test);
    for (Method method : config.methods) {
      RunRecord rec;
      try {
        rec = evaluate_split(train, test, method, settings_for_split(method, train, config, seed), seed);
      } catch (const std::exception& e) {
        rec = RunRecord{};
        rec.failed = true;
        rec.error = e.what();
        rec.train_auc = rec.test_auc = rec.train_accuracy = rec.test_accuracy = kNaN;
      }
      rec.dataset = named.name;
      rec.method = method;
      rec.run = run;
      report.records.push_back(std::move(rec));
    }
  }
  for (Method method : config.methods) {
    if (method == config.reference) continue;
    for (Measure m : kMeasures) {
      const auto ours = values_of(report, named.name, method, m);
      const auto ref = values_of(report, named.name, config.reference, m);
      Comparison c;
      c.dataset = named.name;
      c.method = method;
      c.measure = m;
      if (ours.empty() || ref.empty()) {
        c.p_value = kNaN;
        c.flag = '?';
      } else {
        c.p_value = rank_sum_test(ours, ref);
        const bool higher = mean_of(ours) > mean_of(ref);
        const bool better = m == Measure::TimeMs ? !higher : higher;
        c.flag = c.p_value > config.alpha ? '-' : (better ? '+' : '*');
      }
      report.comparisons.push_back(c);
    }
  }
}

double cv_mean_auc(const Dataset& data, const std::vector<std::vector<std::size_t>>& folds, Method method,
                   const BenchmarkConfig& config, std::uint64_t seed) {
  double total = 0.0;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    std::vector<std::size_t> train_rows;
    for (std::size_t g = 0; g < folds.size(); ++g)
      if (g != f) train_rows.insert(train_rows.end(), folds[g].begin(), folds[g].end());
    try {
      const Dataset train = data.subset(train_rows);
      total += evaluate_split(train, data.subset(folds[f]), method, settings_for_split(method, train, config, seed),
                              seed)
                   .test_auc;
    } catch (const std::exception&) {
      return kNaN;
    }
  }
  return total / static_cast<double>(folds.size());
}

void run_procedure_2(const NamedDataset& named, const Dataset& data, const BenchmarkConfig& config,
                     EvalReport& report) {
  const auto folds = stratified_kfold(data, config.folds, config.seed);
  std::vector<double> best;
  const std::size_t first = report.tuning.size();
  for (Method method : config.methods) {
    TuningResult t;
    t.dataset = named.name;
    t.method = method;
    t.parameter = std::string(tuned_parameter(method));
    t.best_auc = kNaN;
    for (double value : parameter_grid(method)) {
      BenchmarkConfig point = config;
      point.settings = with_parameter(method, config.settings, value);
      const double auc = cv_mean_auc(data, folds, method, point, config.seed);
      t.grid.push_back({value, auc});
      if (!std::isnan(auc) && (std::isnan(t.best_auc) || auc > t.best_auc)) {
        t.best_auc = auc;
        t.best_value = value;
      }
    }
    best.push_back(t.best_auc);
    report.tuning.push_back(std::move(t));
  }
  const auto ranks = descending_ranks(best);
  for (std::size_t k = 0; k < ranks.size(); ++k) report.tuning[first + k].rank = ranks[k];
}

}  // namespace

EvalReport run_benchmark(const std::vector<NamedDataset>& datasets, const BenchmarkConfig& config) {
  if (config.methods.empty()) throw DataError("benchmark needs at least one method");
  if (config.procedure != 1 && config.procedure != 2) throw DataError("procedure must be 1 or 2");
  if (config.procedure == 1 && config.runs == 0) throw DataError("benchmark needs at least one run");

  EvalReport report;
  report.procedure = config.procedure;
  report.methods = config.methods;
  report.reference = config.reference;
  for (const auto& named : datasets) {
    require_both_classes(named.data, "benchmark dataset");
    const Dataset data = drop_zero_variance(named.data).data;
    report.datasets.push_back(named.name);
    if (config.procedure == 1) {
      run_procedure_1(named, data, config, report);
    } else {
      run_procedure_2(named, data, config, report);
    }
  }
  if (config.procedure == 2) {
    report.average_ranks.assign(config.methods.size(), 0.0);
    for (const auto& t : report.tuning) {
      const auto k = static_cast<std::size_t>(
          std::find(config.methods.begin(), config.methods.end(), t.method) - config.methods.begin());
      report.average_ranks[k] += t.rank / static_cast<double>(datasets.size());
    }
  }
  return report;
}

double select_rbf_width(const Dataset& train, const MethodSettings& settings, const std::vector<double>& multipliers,
                        std::size_t folds, std::uint64_t seed) {
  if (multipliers.empty()) throw DataError("select_rbf_width: no candidate widths");
  const double median = median_pairwise_distance(train.features);
  const auto split = stratified_kfold(train, folds, seed);
  double best_width = 0.0;
  double best_accuracy = -1.0;
  for (double mult : multipliers) {
    const double width = mult * median;
    MethodSettings s = settings;
    s.kernel = KernelKind::Rbf;
    s.rbf_width = width;
    double total = 0.0;
    for (std::size_t f = 0; f < split.size(); ++f) {
      std::vector<std::size_t> rows;
      for (std::size_t g = 0; g < split.size(); ++g)
        if (g != f) rows.insert(rows.end(), split[g].begin(), split[g].end());
      const Dataset fold_test = train.subset(split[f]);
      try {
        const TrainedModel model = train_method(Method::Klcc, train.subset(rows), s, seed);
        total += accuracy(model.predict(fold_test.features), fold_test.labels);
      } catch (const NumericError&) {
        // Infeasible fold contributes zero accuracy.
      }
    }
    const double acc = total / static_cast<double>(split.size());
    if (acc > best_accuracy || (acc == best_accuracy && width > best_width)) {
      best_accuracy = acc;
      best_width = width;
    }
  }
  return best_width;
}

void write_report_csv(std::ostream& out, const EvalReport& report) {
  const auto flags = out.flags();
  const auto precision = out.precision(17);
  out << "dataset,method,run,train_auc,test_auc,train_accuracy,test_accuracy,failed,error\n";
  for (const auto& r : report.records) {
    std::string error = r.error;
    std::replace(error.begin(), error.end(), ',', ';');
    std::replace(error.begin(), error.end(), '\n', ' ');
    out << r.dataset << ',' << method_name(r.method) << ',' << r.run << ',' << r.train_auc << ',' << r.test_auc << ','
        << r.train_accuracy << ',' << r.test_accuracy << ',' << (r.failed ? 1 : 0) << ',' << error << '\n';
  }
  out.precision(precision);
  out.flags(flags);
}

void write_timings_csv(std::ostream& out, const EvalReport& report) {
  const auto flags = out.flags();
  const auto precision = out.precision(6);
  out << std::fixed;
  out << "dataset,method,run,time_ms\n";
  for (const auto& r : report.records)
    out << r.dataset << ',' << method_name(r.method) << ',' << r.run << ',' << r.time_ms << '\n';
  out.precision(precision);
  out.flags(flags);
}

void write_tuning_csv(std::ostream& out, const EvalReport& report) {
  const auto flags = out.flags();
  const auto precision = out.precision(17);
  out << "dataset,method,parameter,best_value,best_auc,rank\n";
  for (const auto& t : report.tuning)
    out << t.dataset << ',' << method_name(t.method) << ',' << t.parameter << ',' << t.best_value << ','
        << t.best_auc << ',' << t.rank << '\n';
  out.precision(precision);
  out.flags(flags);
}

void write_summary(std::ostream& out, const EvalReport& report) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::fixed;
  if (report.procedure == 1) {
    out << "procedure 1: mean +- std over runs; flags vs " << method_name(report.reference)
        << " (* worse, - same, + better, rank-sum at 0.05)\n";
    for (const auto& dataset : report.datasets) {
      out << '\n' << dataset << '\n';
      out << std::left << std::setw(8) << "method" << std::setw(22) << "train AUC (%)" << std::setw(22)
          << "test AUC (%)" << std::setw(24) << "time (ms)" << "failed\n";
      for (Method method : report.methods) {
        out << std::setw(8) << method_name(method);
        for (Measure m : kMeasures) {
          const auto v = values_of(report, dataset, method, m);
          const double scale = m == Measure::TimeMs ? 1.0 : 100.0;
          std::ostringstream cell;
          cell << std::fixed << std::setprecision(2) << scale * mean_of(v) << " +- " << scale * std_of(v);
          for (const auto& c : report.comparisons)
            if (c.dataset == dataset && c.method == method && c.measure == m) cell << ' ' << c.flag;
          out << std::setw(m == Measure::TimeMs ? 24 : 22) << cell.str();
        }
        std::size_t failed = 0;
        for (const auto& r : report.records) failed += r.dataset == dataset && r.method == method && r.failed;
        out << failed << '\n';
      }
    }
  } else {
    out << "procedure 2: best mean fold AUC (%) per method; rank 0 is best\n";
    for (const auto& dataset : report.datasets) {
      out << '\n' << dataset << '\n';
      for (const auto& t : report.tuning) {
        if (t.dataset != dataset) continue;
        out << std::left << std::setw(8) << method_name(t.method) << std::right << std::setprecision(2)
            << std::setw(8) << 100.0 * t.best_auc << "  rank " << std::setprecision(1) << t.rank << "  "
            << t.parameter << " = " << std::defaultfloat << std::setprecision(6) << t.best_value << std::fixed
            << '\n';
      }
    }
    out << "\naverage rank\n";
    for (std::size_t k = 0; k < report.methods.size(); ++k)
      out << std::left << std::setw(8) << method_name(report.methods[k]) << std::right << std::setprecision(2)
          << report.average_ranks[k] << '\n';
  }
  out.precision(precision);
  out.flags(flags);
}

}  // namespace lcc
