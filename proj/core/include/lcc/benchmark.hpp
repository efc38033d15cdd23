#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lcc/classifier.hpp"
#include "lcc/dataset.hpp"

namespace lcc {

/// Parsed form of "name[:m=<count>][:noise=<real>][:seed=<int>]" where name is
/// gaussian, circles, spiral, jain_like or flame_like.
struct GeneratorSpec {
  std::string name;
  std::optional<std::size_t> m;
  std::optional<double> noise;
  std::optional<std::uint64_t> seed;
};

GeneratorSpec parse_generator_spec(std::string_view text);

/// gaussian uses the two-Gaussian demonstration parameters with m/2 rows per
/// class (default m = 200); shapes default to m = 300 and their default noise.
/// `default_seed` applies when the spec carries no seed.
Dataset generate(const GeneratorSpec& spec, std::uint64_t default_seed);

struct NamedDataset {
  std::string name;
  Dataset data;
};

struct BenchmarkConfig {
  int procedure = 1;              // 1: repeated splits, 2: k-fold grid search
  std::size_t runs = 100;         // procedure 1
  double train_fraction = 0.7;    // procedure 1
  std::size_t folds = 10;         // procedure 2
  std::vector<Method> methods{Method::Lcc, Method::Lda, Method::Svm};
  Method reference = Method::Lcc;
  MethodSettings settings;
  std::uint64_t seed = 42;
  double alpha = 0.05;            // significance level of the rank-sum comparisons
  /// When nonempty, each klcc training split picks its RBF width with
  /// select_rbf_width over these multipliers of the median distance.
  std::vector<double> rbf_width_multipliers;
  std::size_t rbf_width_folds = 3;
};

inline const std::vector<double> kRbfWidthMultipliers{1.0, 0.5, 0.25, 0.125, 0.0625};

struct RunRecord {
  std::string dataset;
  Method method = Method::Lcc;
  std::size_t run = 0;
  double train_auc = 0.0;
  double test_auc = 0.0;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  double time_ms = 0.0;           // training only
  bool failed = false;
  std::string error;
};

enum class Measure { TrainAuc, TestAuc, TimeMs };
std::string_view measure_name(Measure measure);

/// Rank-sum comparison of one method against the reference on one dataset.
/// flag: '*' significantly worse than the reference, '-' no significant
/// difference, '+' significantly better. Lower is better for time.
struct Comparison {
  std::string dataset;
  Method method = Method::Lcc;
  Measure measure = Measure::TestAuc;
  double p_value = 1.0;
  char flag = '-';
};

struct GridPoint {
  double value = 0.0;
  double mean_auc = 0.0;          // NaN if any fold failed
};

struct TuningResult {
  std::string dataset;
  Method method = Method::Lcc;
  std::string parameter;          // "sigma" or "lambda"
  std::vector<GridPoint> grid;
  double best_value = 0.0;
  double best_auc = 0.0;          // NaN if every grid point failed
  double rank = 0.0;              // 0 is best; ties share the mean rank
};

struct EvalReport {
  int procedure = 1;
  std::vector<std::string> datasets;
  std::vector<Method> methods;
  Method reference = Method::Lcc;
  std::vector<RunRecord> records;          // procedure 1
  std::vector<Comparison> comparisons;     // procedure 1
  std::vector<TuningResult> tuning;        // procedure 2
  std::vector<double> average_ranks;       // procedure 2, parallel to `methods`
};

/// Grid searched in procedure 2 and the name of the tuned parameter.
std::vector<double> parameter_grid(Method method);
std::string_view tuned_parameter(Method method);
MethodSettings with_parameter(Method method, MethodSettings settings, double value);

/// 0-indexed ranks, highest value first; tied values share the mean of the
/// ranks they span. NaN entries are ranked last.
std::vector<double> descending_ranks(const std::vector<double>& values);

/// Trains and scores one method on a split. Normalization is fitted on
/// `train` only. Throws on failure.
RunRecord evaluate_split(const Dataset& train, const Dataset& test, Method method, const MethodSettings& settings,
                         std::uint64_t seed);

/// Zero-variance columns are removed once over each whole dataset. Per-method
/// failures are recorded in the report rather than aborting the run.
EvalReport run_benchmark(const std::vector<NamedDataset>& datasets, const BenchmarkConfig& config);

/// Chooses the RBF width among `multipliers` times the median pairwise
/// distance of `train` by stratified k-fold accuracy of kernel LCC. Ties go to
/// the larger width.
double select_rbf_width(const Dataset& train, const MethodSettings& settings, const std::vector<double>& multipliers,
                        std::size_t folds, std::uint64_t seed);

/// One row per method and run; contains no timings, so it is reproducible.
void write_report_csv(std::ostream& out, const EvalReport& report);
void write_timings_csv(std::ostream& out, const EvalReport& report);
/// Procedure 2: per-dataset tuning results.
void write_tuning_csv(std::ostream& out, const EvalReport& report);
/// Human-readable table: mean +- std per measure, flagged against the reference.
void write_summary(std::ostream& out, const EvalReport& report);

}  // namespace lcc
