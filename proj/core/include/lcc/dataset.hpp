#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace lcc {

enum class Label : int { Negative = -1, Positive = 1 };

inline constexpr double sign_of(Label y) { return static_cast<double>(static_cast<int>(y)); }
inline constexpr Label flipped(Label y) {
  return y == Label::Negative ? Label::Positive : Label::Negative;
}

/// m labeled instances in R^n; row i of `features` is instance i.
struct Dataset {
  Eigen::MatrixXd features;
  std::vector<Label> labels;

  Dataset() = default;
  /// Validates shape agreement and finiteness; throws DataError otherwise.
  Dataset(Eigen::MatrixXd x, std::vector<Label> y);

  std::size_t size() const { return labels.size(); }
  std::size_t dims() const { return static_cast<std::size_t>(features.cols()); }
  std::size_t count(Label y) const;
  bool has_both_classes() const { return count(Label::Negative) > 0 && count(Label::Positive) > 0; }

  Eigen::VectorXd row(std::size_t i) const { return features.row(static_cast<Eigen::Index>(i)).transpose(); }

  /// Rows in the given order (indices may repeat).
  Dataset subset(std::span<const std::size_t> rows) const;
  /// Columns in the given order.
  Dataset select_columns(std::span<const std::size_t> columns) const;
};

/// Throws DataError unless both classes are present.
void require_both_classes(const Dataset& data, const char* what);

struct CsvOptions {
  std::size_t label_column = 0;
  bool has_header = false;
};

/// Reads a comma-separated file. Labels must be -1/+1 or 0/1 (0 maps to -1).
/// Every other column is a feature. Errors name the 1-based file line and
/// 0-based column of the offending cell.
Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});

/// Feature matrix of a CSV without a label column, e.g. for prediction.
Eigen::MatrixXd load_csv_features(const std::filesystem::path& path, bool has_header);

void write_csv(const std::filesystem::path& path, const Dataset& data);

/// Per-column z-score mapping fitted on a training set.
struct Normalizer {
  Eigen::VectorXd means;
  Eigen::VectorXd stds;

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const;
  Eigen::MatrixXd invert(const Eigen::MatrixXd& z) const;
};

/// Population standard deviation (m denominator). Throws DataError for a
/// column with zero spread; prune with drop_zero_variance first.
Normalizer fit_normalizer(const Dataset& train);
Dataset apply_normalizer(const Normalizer& norm, const Dataset& data);

inline constexpr double kVarianceTolerance = 1e-12;

struct PrunedDataset {
  Dataset data;
  std::vector<std::size_t> kept_columns;
};

/// Removes columns whose variance over the whole dataset is <= 1e-12.
PrunedDataset drop_zero_variance(const Dataset& data);

}  // namespace lcc
