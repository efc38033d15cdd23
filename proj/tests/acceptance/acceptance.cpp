// One PASS/FAIL/SKIP line per acceptance criterion. With no arguments every
// criterion runs; otherwise only the named ones. Exit status is 0 when nothing
// failed, 77 when everything selected was skipped, 1 otherwise.

#include <algorithm>
#include <array>
#include <cmath>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "lcc/benchmark.hpp"
#include "lcc/classifier.hpp"
#include "lcc/error.hpp"
#include "lcc/eval.hpp"
#include "lcc/generators.hpp"
#include "lcc/kernel.hpp"
#include "lcc/lcc.hpp"
#include "lcc/lp.hpp"
#include "lcc/rng.hpp"
#include "oracles.hpp"

using namespace lcc;

namespace {

enum class Verdict { Pass, Fail, Skip };

struct Outcome {
  Verdict verdict;
  std::string detail;
};

Outcome verdict(bool ok, std::string detail) { return {ok ? Verdict::Pass : Verdict::Fail, std::move(detail)}; }

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / double(v.size()); }

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

Outcome lp_oracle() {
  Stopwatch clock;
  Rng rng(2718);
  double worst = 0.0;
  int mismatched = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t d = 1 + rng.index(4);
    const std::size_t r = rng.index(7);
    const LpProblem lp = oracle::random_feasible_lp(rng, d, r);
    const LpSolution sol = solve(lp);
    const auto brute = oracle::vertex_enumeration(lp);
    if (sol.status != LpStatus::Optimal || !brute) {
      ++mismatched;
      continue;
    }
    const double diff = std::abs(sol.objective_value - *brute);
    worst = std::max(worst, diff);
    if (diff > 1e-6) ++mismatched;
  }
  const double secs = clock.seconds();
  return verdict(mismatched == 0 && secs < 5.0,
                 fmt("200 LPs, %d mismatches, max |diff| %.3g, %.2f s", mismatched, worst, secs));
}

Outcome linearization_lemma() {
  Rng rng(1618);
  int violations = 0;
  int tested = 0;
  while (tested < 10000) {
    const double a = rng.uniform(-100, 100);
    double b = rng.uniform(-100, 100);
    double c = rng.uniform(-100, 100);
    if (b == c) continue;
    if (b > c) std::swap(b, c);
    ++tested;
    if ((std::abs(a - b) < std::abs(a - c)) != (a < (b + c) / 2.0)) ++violations;
  }
  return verdict(violations == 0, fmt("%d triples, %d violations", tested, violations));
}

Outcome lp_shape() {
  Rng rng(31);
  int bad = 0;
  int checked = 0;
  for (std::size_t m = 2; m <= 40; m += 2) {
    for (std::size_t n = 1; n <= 6; ++n) {
      const Dataset d = oracle::random_dataset(rng, m, n, 1.0);
      const LpProblem lp = assemble_lcc_lp(d, LccParams{});
      const bool inequalities = std::all_of(lp.relations.begin(), lp.relations.end(),
                                            [](Relation r) { return r != Relation::Equal; });
      if (lp.num_rows() != m + 1 || lp.num_variables() != m + n || lp.num_bounded_variables() != m + n ||
          !inequalities)
        ++bad;
      const LpProblem k = assemble_klcc_lp(gram(KernelSpec{}, d), d.labels, LccParams{});
      if (k.num_rows() != m + 1 || k.num_variables() != 2 * m) ++bad;
      checked += 2;
    }
  }
  return verdict(bad == 0, fmt("%d LPs checked, %d with wrong shape", checked, bad));
}

Outcome scale_invariance() {
  Rng rng(4242);
  int differing = 0;
  for (int t = 0; t < 100; ++t) {
    const Dataset d = oracle::random_dataset(rng, 30, 1 + rng.index(5), rng.uniform(1.0, 3.0));
    const LccModel model = train_lcc(d);
    const double c = std::exp(rng.uniform(-5.0, 5.0));
    const LccModel scaled = rescaled(model, c);
    const Dataset probe = oracle::random_dataset(rng, 100, d.dims(), 0.5);
    if (model.predict_rows(probe.features) != scaled.predict_rows(probe.features) ||
        model.predict_rows(d.features) != scaled.predict_rows(d.features))
      ++differing;
  }
  return verdict(differing == 0, fmt("100 models, %d with differing label vectors", differing));
}

Outcome gaussian_demo() {
  Stopwatch clock;
  const GaussianDemo demo;
  std::vector<double> aucs;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Dataset d = gen_gaussian_pair(demo.mean_neg, demo.cov_neg, demo.mean_pos, demo.cov_pos, 100, seed);
    const Split split = stratified_split(d, 0.7, seed);
    const RunRecord rec = evaluate_split(d.subset(split.train), d.subset(split.test), Method::Lcc, MethodSettings{}, seed);
    aucs.push_back(rec.test_auc);
  }
  const double secs = clock.seconds();
  const double m = mean(aucs);
  return verdict(m >= 0.99 && secs < 10.0,
                 fmt("mean test AUC %.4f (min %.4f) over 20 seeds, %.2f s", m,
                     *std::min_element(aucs.begin(), aucs.end()), secs));
}

Outcome kernel_experiments() {
  Stopwatch clock;
  MethodSettings settings;
  settings.kernel = KernelKind::Rbf;
  std::ostringstream detail;
  bool ok = true;
  const struct {
    Shape shape;
    double train_min;
    double test_min;
  } cases[] = {{Shape::Circles, 0.98, 0.98}, {Shape::Spiral, 0.98, 0.98}, {Shape::JainLike, 0.0, 0.95}};
  for (const auto& c : cases) {
    std::vector<double> train_acc;
    std::vector<double> test_acc;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const Dataset d = gen_shape(c.shape, 300, default_noise(c.shape), seed);
      const Split split = stratified_split(d, 0.7, seed);
      const Dataset train = d.subset(split.train);
      MethodSettings s = settings;
      s.rbf_width = select_rbf_width(apply_normalizer(fit_normalizer(train), train), settings, kRbfWidthMultipliers, 3, seed);
      const RunRecord rec = evaluate_split(train, d.subset(split.test), Method::Klcc, s, seed);
      train_acc.push_back(rec.train_accuracy);
      test_acc.push_back(rec.test_accuracy);
    }
    const double tr = mean(train_acc);
    const double te = mean(test_acc);
    ok = ok && tr >= c.train_min && te >= c.test_min;
    detail << shape_name(c.shape) << " train " << fmt("%.4f", tr) << " test " << fmt("%.4f", te) << " (min "
           << fmt("%.4f", *std::min_element(test_acc.begin(), test_acc.end())) << "); ";
  }
  const double secs = clock.seconds();
  detail << fmt("%.1f s", secs);
  return verdict(ok && secs < 60.0, detail.str());
}

Outcome fqcc_equivalence() {
  std::vector<NamedDataset> datasets;
  for (const char* spec : {"gaussian:m=200", "circles", "spiral", "jain_like", "flame_like"})
    datasets.push_back({spec, generate(parse_generator_spec(spec), 11)});
  BenchmarkConfig config;
  config.runs = 20;
  config.seed = 7;
  config.methods = {Method::Lcc, Method::Fqcc};
  const EvalReport report = run_benchmark(datasets, config);

  bool ok = true;
  double min_p = 1.0;
  for (const Comparison& c : report.comparisons) {
    if (c.method != Method::Fqcc || c.measure != Measure::TestAuc) continue;
    min_p = std::min(min_p, c.p_value);
    ok = ok && c.p_value > 0.05;
  }
  std::vector<double> lcc_ms;
  std::vector<double> fqcc_ms;
  int failed = 0;
  for (const RunRecord& r : report.records) {
    failed += r.failed;
    (r.method == Method::Lcc ? lcc_ms : fqcc_ms).push_back(r.time_ms);
  }
  const double ml = median(lcc_ms);
  const double mf = median(fqcc_ms);
  ok = ok && failed == 0 && ml < mf;
  return verdict(ok, fmt("min test-AUC p %.3f over 5 datasets x 20 runs, %d failed runs; median time lcc %.3f ms, "
                         "fqcc %.3f ms",
                         min_p, failed, ml, mf));
}

Outcome auc_oracle() {
  Rng rng(1729);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 2 + rng.index(49);
    std::vector<double> s;
    std::vector<Label> y;
    for (std::size_t i = 0; i < n; ++i) {
      s.push_back(t % 2 == 0 ? rng.normal() : std::round(rng.normal() * 2.0));
      y.push_back(rng.uniform() < 0.5 ? Label::Negative : Label::Positive);
    }
    // Both classes present at two distinct random positions.
    const std::size_t i = rng.index(n);
    y[i] = Label::Negative;
    y[(i + 1 + rng.index(n - 1)) % n] = Label::Positive;
    worst = std::max(worst, std::abs(roc_auc(s, y).auc - oracle::pairwise_auc(s, y)));
  }
  return verdict(worst <= 1e-12, fmt("1000 vectors, max |diff| %.3g", worst));
}

Outcome rank_sum_accuracy() {
  // Every split of the ranks 1..n into groups of sizes (na, nb).
  int failing_pairs = 0;
  int pairs = 0;
  double worst = 0.0;
  std::string worst_pair;
  for (std::size_t total = 2; total <= 12; ++total) {
    for (std::size_t na = 1; na < total; ++na) {
      const std::size_t nb = total - na;
      std::vector<bool> pick(total, false);
      std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(na), true);
      double pair_worst = 0.0;
      do {
        std::vector<double> a;
        std::vector<double> b;
        for (std::size_t i = 0; i < total; ++i) (pick[i] ? a : b).push_back(double(i + 1));
        pair_worst = std::max(pair_worst, std::abs(rank_sum_normal_p(a, b) - rank_sum_exact_p(a, b)));
      } while (std::prev_permutation(pick.begin(), pick.end()));
      ++pairs;
      if (pair_worst > 0.03) ++failing_pairs;
      if (pair_worst > worst) {
        worst = pair_worst;
        worst_pair = std::to_string(na) + "+" + std::to_string(nb);
      }
    }
  }
  return verdict(failing_pairs == 0, fmt("%d of %d size pairs exceed 0.03, worst %.4f at %s", failing_pairs, pairs,
                                         worst, worst_pair.c_str()));
}

// Raw UCI file: id, nine integer attributes ('?' when missing), class 2 or 4.
// Missing cells take the median of the observed values of their column.
Dataset load_uci_breast_cancer(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  constexpr int kAttributes = 9;
  std::vector<std::array<double, kAttributes>> rows;
  std::vector<Label> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() != kAttributes + 2) throw DataError("line " + std::to_string(line_no) + ": expected 11 fields");
    std::array<double, kAttributes> row{};
    for (int j = 0; j < kAttributes; ++j) {
      const std::string& c = cells[static_cast<std::size_t>(j) + 1];
      row[static_cast<std::size_t>(j)] = c == "?" ? std::nan("") : std::stod(c);
    }
    const int cls = std::stoi(cells.back());
    if (cls != 2 && cls != 4) throw DataError("line " + std::to_string(line_no) + ": class must be 2 or 4");
    rows.push_back(row);
    labels.push_back(cls == 4 ? Label::Positive : Label::Negative);
  }
  Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), kAttributes);
  for (int j = 0; j < kAttributes; ++j) {
    std::vector<double> observed;
    for (const auto& r : rows)
      if (!std::isnan(r[static_cast<std::size_t>(j)])) observed.push_back(r[static_cast<std::size_t>(j)]);
    const double fill = observed.empty() ? 0.0 : median(observed);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const double v = rows[i][static_cast<std::size_t>(j)];
      x(static_cast<Eigen::Index>(i), j) = std::isnan(v) ? fill : v;
    }
  }
  return Dataset(std::move(x), std::move(labels));
}

Outcome breast_cancer() {
  const char* path = std::getenv("LCC_BREAST_CANCER_DATA");
  if (path == nullptr || *path == '\0') return {Verdict::Skip, "LCC_BREAST_CANCER_DATA not set"};
  Stopwatch clock;
  const Dataset data = load_uci_breast_cancer(path);
  BenchmarkConfig config;
  config.runs = 50;
  config.methods = {Method::Lcc};
  const EvalReport report = run_benchmark({{"breast_cancer", data}}, config);
  std::vector<double> aucs;
  std::vector<double> accuracies;
  for (const RunRecord& r : report.records) {
    if (r.failed) continue;
    aucs.push_back(r.test_auc);
    accuracies.push_back(r.test_accuracy);
  }
  const double secs = clock.seconds();
  if (aucs.empty()) return {Verdict::Fail, "every run failed"};
  const double m = mean(aucs);
  return verdict(std::abs(m - 0.9558) <= 0.03 && secs < 120.0,
                 fmt("%zu rows, mean test AUC %.4f over %zu runs (target 0.9558 +- 0.03; mean test accuracy %.4f), "
                     "%.1f s",
                     data.size(), m, aucs.size(), mean(accuracies), secs));
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"lp_oracle", lp_oracle},
      {"linearization_lemma", linearization_lemma},
      {"lp_shape", lp_shape},
      {"scale_invariance", scale_invariance},
      {"gaussian_demo", gaussian_demo},
      {"kernel_experiments", kernel_experiments},
      {"fqcc_equivalence", fqcc_equivalence},
      {"auc_oracle", auc_oracle},
      {"rank_sum_accuracy", rank_sum_accuracy},
      {"breast_cancer", breast_cancer},
  };
  std::vector<std::string> selected(argv + 1, argv + argc);
  for (const auto& name : selected) {
    if (std::none_of(criteria.begin(), criteria.end(), [&](const auto& c) { return c.first == name; })) {
      std::cerr << "unknown criterion '" << name << "'\n";
      return 2;
    }
  }
  int passed = 0;
  int failed = 0;
  int skipped = 0;
  for (const auto& [name, check] : criteria) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), name) == selected.end()) continue;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {Verdict::Fail, std::string("exception: ") + e.what()};
    }
    const char* tag = o.verdict == Verdict::Pass ? "PASS" : o.verdict == Verdict::Fail ? "FAIL" : "SKIP";
    std::cout << tag << ' ' << name << ": " << o.detail << std::endl;
    (o.verdict == Verdict::Pass ? passed : o.verdict == Verdict::Fail ? failed : skipped) += 1;
  }
  if (failed > 0) return 1;
  return passed == 0 && skipped > 0 ? 77 : 0;
}
