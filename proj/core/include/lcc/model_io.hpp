#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "lcc/classifier.hpp"
#include "lcc/dataset.hpp"

namespace lcc {

/// Column pruning and z-scoring applied to raw inputs before the model sees them.
struct Preprocessing {
  std::size_t input_dims = 0;
  std::vector<std::size_t> kept_columns;
  std::optional<Normalizer> normalizer;

  /// Throws DataError naming the expected width when `raw` has the wrong column count.
  Eigen::MatrixXd apply(const Eigen::MatrixXd& raw) const;
};

struct ModelFile {
  Preprocessing preprocessing;
  TrainedModel model;

  Eigen::VectorXd scores(const Eigen::MatrixXd& raw) const { return model.scores(preprocessing.apply(raw)); }
  std::vector<Label> predict(const Eigen::MatrixXd& raw) const { return model.predict(preprocessing.apply(raw)); }
};

inline constexpr int kModelFormatVersion = 1;

/// Line-oriented "key value..." text. Reals are written as hexfloats, so a
/// save/load cycle reproduces every double bit for bit.
void write_model(std::ostream& out, const ModelFile& file);
ModelFile read_model(std::istream& in);

void save_model(const std::filesystem::path& path, const ModelFile& file);
ModelFile load_model(const std::filesystem::path& path);

}  // namespace lcc
