#include "lcc/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <string_view>

#include "lcc/error.hpp"

namespace lcc {

Dataset::Dataset(Eigen::MatrixXd x, std::vector<Label> y) : features(std::move(x)), labels(std::move(y)) {
  if (static_cast<std::size_t>(features.rows()) != labels.size()) {
    throw DataError("dataset has " + std::to_string(features.rows()) + " rows but " +
                    std::to_string(labels.size()) + " labels");
  }
  if (!features.allFinite()) throw DataError("dataset contains non-finite feature values");
}

std::size_t Dataset::count(Label y) const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), y));
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), features.cols());
  std::vector<Label> y;
  y.reserve(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] >= size()) throw DataError("row index out of range");
    x.row(static_cast<Eigen::Index>(k)) = features.row(static_cast<Eigen::Index>(rows[k]));
    y.push_back(labels[rows[k]]);
  }
  return Dataset(std::move(x), std::move(y));
}

Dataset Dataset::select_columns(std::span<const std::size_t> columns) const {
  Eigen::MatrixXd x(features.rows(), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t k = 0; k < columns.size(); ++k) {
    if (columns[k] >= dims()) throw DataError("column index out of range");
    x.col(static_cast<Eigen::Index>(k)) = features.col(static_cast<Eigen::Index>(columns[k]));
  }
  return Dataset(std::move(x), labels);
}

void require_both_classes(const Dataset& data, const char* what) {
  if (!data.has_both_classes()) {
    throw DataError(std::string(what) + ": both classes (-1 and +1) must be present");
  }
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                            : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

bool parse_double(std::string_view cell, double& out) {
  if (cell.empty()) return false;
  if (cell.front() == '+') cell.remove_prefix(1);
  const auto* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

std::string cell_error(std::size_t line, std::size_t column, std::string_view cell, const char* why) {
  std::ostringstream msg;
  msg << "row " << line << ", column " << column << ": " << why << " '" << cell << "'";
  return msg.str();
}

struct RawTable {
  std::vector<std::vector<double>> rows;
  std::vector<Label> labels;
};

RawTable read_table(const std::filesystem::path& path, bool has_header, const std::size_t* label_column) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());

  RawTable table;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  bool header_pending = has_header;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    const auto cells = split_commas(line);
    if (width == 0) {
      width = cells.size();
      if (label_column && *label_column >= width) {
        throw DataError("label column " + std::to_string(*label_column) + " out of range for " +
                        std::to_string(width) + " columns");
      }
    } else if (cells.size() != width) {
      throw DataError("row " + std::to_string(line_no) + ": expected " + std::to_string(width) +
                      " columns, found " + std::to_string(cells.size()));
    }

    std::vector<double> values;
    values.reserve(width);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (label_column && c == *label_column) {
        if (cells[c].empty()) throw DataError(cell_error(line_no, c, cells[c], "missing label"));
        double v = 0.0;
        if (!parse_double(cells[c], v) || !(v == -1.0 || v == 0.0 || v == 1.0)) {
          throw DataError(cell_error(line_no, c, cells[c], "label must be -1/+1 or 0/1, got"));
        }
        table.labels.push_back(v > 0.0 ? Label::Positive : Label::Negative);
        continue;
      }
      double v = 0.0;
      if (!parse_double(cells[c], v)) throw DataError(cell_error(line_no, c, cells[c], "cannot parse number"));
      values.push_back(v);
    }
    table.rows.push_back(std::move(values));
  }
  return table;
}

Eigen::MatrixXd to_matrix(const std::vector<std::vector<double>>& rows) {
  const auto n = rows.empty() ? 0 : rows.front().size();
  Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < n; ++j) x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return x;
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  auto table = read_table(path, options.has_header, &options.label_column);
  return Dataset(to_matrix(table.rows), std::move(table.labels));
}

Eigen::MatrixXd load_csv_features(const std::filesystem::path& path, bool has_header) {
  return to_matrix(read_table(path, has_header, nullptr).rows);
}

void write_csv(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << std::setprecision(17);
  for (std::size_t i = 0; i < data.size(); ++i) {
    out << static_cast<int>(data.labels[i]);
    for (Eigen::Index j = 0; j < data.features.cols(); ++j) out << ',' << data.features(static_cast<Eigen::Index>(i), j);
    out << '\n';
  }
}

Eigen::VectorXd Normalizer::apply(const Eigen::VectorXd& x) const {
  if (x.size() != means.size()) throw DataError("normalizer dimension mismatch");
  return ((x - means).array() / stds.array()).matrix();
}

Eigen::MatrixXd Normalizer::apply(const Eigen::MatrixXd& x) const {
  if (x.cols() != means.size()) throw DataError("normalizer dimension mismatch");
  return ((x.rowwise() - means.transpose()).array().rowwise() / stds.transpose().array()).matrix();
}

Eigen::MatrixXd Normalizer::invert(const Eigen::MatrixXd& z) const {
  if (z.cols() != means.size()) throw DataError("normalizer dimension mismatch");
  return ((z.array().rowwise() * stds.transpose().array()).rowwise() + means.transpose().array()).matrix();
}

Normalizer fit_normalizer(const Dataset& train) {
  if (train.size() == 0) throw DataError("cannot fit a normalizer on an empty dataset");
  Normalizer norm;
  norm.means = train.features.colwise().mean().transpose();
  const Eigen::MatrixXd centered = train.features.rowwise() - norm.means.transpose();
  norm.stds = (centered.colwise().squaredNorm() / static_cast<double>(train.size())).cwiseSqrt().transpose();
  for (Eigen::Index j = 0; j < norm.stds.size(); ++j) {
    if (!(norm.stds(j) * norm.stds(j) > kVarianceTolerance)) {
      throw DataError("column " + std::to_string(j) +
                      " has zero standard deviation; apply drop_zero_variance before normalizing");
    }
  }
  return norm;
}

Dataset apply_normalizer(const Normalizer& norm, const Dataset& data) {
  return Dataset(norm.apply(data.features), data.labels);
}

PrunedDataset drop_zero_variance(const Dataset& data) {
  std::vector<std::size_t> kept;
  const auto m = static_cast<double>(data.size());
  for (std::size_t j = 0; j < data.dims(); ++j) {
    const auto col = data.features.col(static_cast<Eigen::Index>(j));
    const double variance = m > 0 ? (col.array() - col.mean()).square().sum() / m : 0.0;
    if (variance > kVarianceTolerance) kept.push_back(j);
  }
  if (kept.empty()) throw DataError("all columns have zero variance");
  return {data.select_columns(kept), std::move(kept)};
}

}  // namespace lcc
