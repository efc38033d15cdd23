#include "lcc/model_io.hpp"

#include <cstdlib>
#include <fstream>
#include <ios>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "lcc/error.hpp"

namespace lcc {

Eigen::MatrixXd Preprocessing::apply(const Eigen::MatrixXd& raw) const {
  if (static_cast<std::size_t>(raw.cols()) != input_dims) {
    throw DataError("input has " + std::to_string(raw.cols()) + " feature columns, model expects n = " +
                    std::to_string(input_dims));
  }
  Eigen::MatrixXd x(raw.rows(), static_cast<Eigen::Index>(kept_columns.size()));
  for (std::size_t k = 0; k < kept_columns.size(); ++k)
    x.col(static_cast<Eigen::Index>(k)) = raw.col(static_cast<Eigen::Index>(kept_columns[k]));
  return normalizer ? normalizer->apply(x) : x;
}

namespace {

constexpr const char* kMagic = "lcc-model";

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) { out_ << std::hexfloat; }

  void text(const char* key, std::string_view value) { out_ << key << ' ' << value << '\n'; }
  void count(const char* key, std::size_t value) { out_ << key << ' ' << value << '\n'; }
  void real(const char* key, double value) { out_ << key << ' ' << value << '\n'; }
  void vector(const char* key, const Eigen::VectorXd& v) {
    out_ << key << ' ' << v.size();
    for (Eigen::Index i = 0; i < v.size(); ++i) out_ << ' ' << v(i);
    out_ << '\n';
  }
  void matrix(const char* key, const Eigen::MatrixXd& m) {
    out_ << key << ' ' << m.rows() << ' ' << m.cols();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) out_ << ' ' << m(i, j);
    out_ << '\n';
  }
  void indices(const char* key, const std::vector<std::size_t>& v) {
    out_ << key << ' ' << v.size();
    for (auto i : v) out_ << ' ' << i;
    out_ << '\n';
  }
  void labels(const char* key, const std::vector<Label>& v) {
    out_ << key << ' ' << v.size();
    for (auto y : v) out_ << ' ' << static_cast<int>(y);
    out_ << '\n';
  }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      std::istringstream tokens(line);
      std::string key;
      tokens >> key;
      std::vector<std::string> values;
      for (std::string t; tokens >> t;) values.push_back(t);
      if (!entries_.emplace(key, std::move(values)).second) {
        throw DataError("model file line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
      }
    }
  }

  bool has(const std::string& key) const { return entries_.count(key) > 0; }

  std::string text(const std::string& key) const {
    const auto& v = values(key);
    if (v.size() != 1) malformed(key);
    return v[0];
  }
  std::size_t count(const std::string& key) const { return to_count(key, text(key)); }
  double real(const std::string& key) const { return to_real(key, text(key)); }

  Eigen::VectorXd vector(const std::string& key) const {
    const auto& v = values(key);
    const std::size_t n = sized(key, v, 1);
    Eigen::VectorXd out(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) out(static_cast<Eigen::Index>(i)) = to_real(key, v[1 + i]);
    return out;
  }
  Eigen::MatrixXd matrix(const std::string& key) const {
    const auto& v = values(key);
    if (v.size() < 2) malformed(key);
    const std::size_t rows = to_count(key, v[0]);
    const std::size_t cols = to_count(key, v[1]);
    if (v.size() != 2 + rows * cols) malformed(key);
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j)
        out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = to_real(key, v[2 + i * cols + j]);
    return out;
  }
  std::vector<std::size_t> indices(const std::string& key) const {
    const auto& v = values(key);
    const std::size_t n = sized(key, v, 1);
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(to_count(key, v[1 + i]));
    return out;
  }
  std::vector<Label> labels(const std::string& key) const {
    const auto& v = values(key);
    const std::size_t n = sized(key, v, 1);
    std::vector<Label> out;
    for (std::size_t i = 0; i < n; ++i) {
      if (v[1 + i] == "1") {
        out.push_back(Label::Positive);
      } else if (v[1 + i] == "-1") {
        out.push_back(Label::Negative);
      } else {
        malformed(key);
      }
    }
    return out;
  }

 private:
  [[noreturn]] static void malformed(const std::string& key) {
    throw DataError("model file: malformed value for '" + key + "'");
  }
  const std::vector<std::string>& values(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw DataError("model file: missing key '" + key + "'");
    return it->second;
  }
  static std::size_t sized(const std::string& key, const std::vector<std::string>& v, std::size_t header) {
    if (v.empty()) malformed(key);
    const std::size_t n = to_count(key, v[0]);
    if (v.size() != header + n) malformed(key);
    return n;
  }
  static double to_real(const std::string& key, const std::string& s) {
    char* end = nullptr;
    const double value = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) malformed(key);
    return value;
  }
  static std::size_t to_count(const std::string& key, const std::string& s) {
    char* end = nullptr;
    const unsigned long long value = std::strtoull(s.c_str(), &end, 10);
    if (s.empty() || s[0] == '-' || end != s.c_str() + s.size()) malformed(key);
    return static_cast<std::size_t>(value);
  }

  std::map<std::string, std::vector<std::string>> entries_;
};

void write_discriminator(Writer& w, const Discriminator& d) {
  w.text("discriminator", discriminator_name(d.kind));
  w.real("disc_threshold", d.threshold);
  w.real("disc_h", d.h);
  w.real("disc_scale", d.scale);
  w.real("disc_weight", d.weight);
  w.real("disc_intercept", d.intercept);
  w.vector("disc_nn_values", Eigen::Map<const Eigen::VectorXd>(d.nn_values.data(),
                                                               static_cast<Eigen::Index>(d.nn_values.size())));
  w.labels("disc_nn_labels", d.nn_labels);
  w.indices("disc_nn_index", d.nn_index);
}

Discriminator read_discriminator(const Reader& r) {
  Discriminator d;
  d.kind = parse_discriminator(r.text("discriminator"));
  d.threshold = r.real("disc_threshold");
  d.h = r.real("disc_h");
  d.scale = r.real("disc_scale");
  d.weight = r.real("disc_weight");
  d.intercept = r.real("disc_intercept");
  const Eigen::VectorXd values = r.vector("disc_nn_values");
  d.nn_values.assign(values.data(), values.data() + values.size());
  d.nn_labels = r.labels("disc_nn_labels");
  d.nn_index = r.indices("disc_nn_index");
  if (d.nn_labels.size() != d.nn_values.size() || d.nn_index.size() != d.nn_values.size()) {
    throw DataError("model file: 1nn tables differ in length");
  }
  return d;
}

}  // namespace

void write_model(std::ostream& out, const ModelFile& file) {
  const auto flags = out.flags();
  Writer w(out);
  out << kMagic << ' ' << kModelFormatVersion << '\n';
  w.text("method", method_name(file.model.method));
  w.count("input_dims", file.preprocessing.input_dims);
  w.indices("kept_columns", file.preprocessing.kept_columns);
  w.count("normalized", file.preprocessing.normalizer ? 1 : 0);
  if (file.preprocessing.normalizer) {
    w.vector("norm_means", file.preprocessing.normalizer->means);
    w.vector("norm_stds", file.preprocessing.normalizer->stds);
  }
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LccModel>) {
          w.vector("beta", m.beta);
          w.vector("center_neg", m.center_neg);
          w.vector("center_pos", m.center_pos);
          w.real("c_neg_hat", m.c_neg_hat);
          w.real("c_pos_hat", m.c_pos_hat);
          w.real("threshold", m.threshold);
          w.real("lambda", m.lambda);
          w.real("sigma", m.sigma);
          w.vector("epsilons", m.epsilons);
          w.real("objective", m.objective);
          w.count("lp_iterations", m.lp_iterations);
        } else if constexpr (std::is_same_v<T, FqccModel>) {
          w.vector("beta", m.beta);
          w.real("c_neg_hat", m.c_neg_hat);
          w.real("c_pos_hat", m.c_pos_hat);
          w.real("threshold", m.threshold);
          w.real("lambda", m.lambda);
          w.real("sigma", m.sigma);
          w.real("objective", m.objective_achieved);
        } else if constexpr (std::is_same_v<T, KernelLccModel>) {
          w.text("kernel", kernel_name(m.kernel.kind));
          w.real("rbf_width", m.kernel.rbf_width);
          w.vector("alphas", m.alphas);
          w.matrix("training", m.training);
          w.real("c_neg_hat", m.c_neg_hat);
          w.real("c_pos_hat", m.c_pos_hat);
          w.real("threshold", m.threshold);
          w.real("lambda", m.lambda);
          w.real("sigma", m.sigma);
          w.vector("epsilons", m.epsilons);
          w.real("objective", m.objective);
          w.count("lp_iterations", m.lp_iterations);
        } else if constexpr (std::is_same_v<T, LdaModel>) {
          w.vector("weight", m.weight);
          w.real("threshold", m.threshold);
          w.real("lambda", m.lambda_reg);
        } else {
          w.vector("weight", m.weight);
          w.real("intercept", m.intercept);
          w.real("lambda", m.lambda);
        }
      },
      file.model.model);
  if (file.model.discriminator) write_discriminator(w, *file.model.discriminator);
  out << "end\n";
  out.flags(flags);
}

ModelFile read_model(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw DataError("model file is empty");
  std::istringstream head(header);
  std::string magic;
  int version = 0;
  head >> magic >> version;
  if (magic != kMagic) throw DataError("not an lcc model file (missing '" + std::string(kMagic) + "' header)");
  if (version != kModelFormatVersion) {
    throw DataError("unsupported model format version " + std::to_string(version) + " (expected " +
                    std::to_string(kModelFormatVersion) + ")");
  }
  const Reader r(in);
  if (!r.has("end")) throw DataError("model file is truncated (no 'end' line)");

  ModelFile file;
  file.preprocessing.input_dims = r.count("input_dims");
  file.preprocessing.kept_columns = r.indices("kept_columns");
  for (auto c : file.preprocessing.kept_columns)
    if (c >= file.preprocessing.input_dims) throw DataError("model file: kept column out of range");
  if (r.count("normalized") != 0) file.preprocessing.normalizer = Normalizer{r.vector("norm_means"), r.vector("norm_stds")};

  TrainedModel& t = file.model;
  t.method = parse_method(r.text("method"));
  switch (t.method) {
    case Method::Lcc: {
      LccModel m;
      m.beta = r.vector("beta");
      m.center_neg = r.vector("center_neg");
      m.center_pos = r.vector("center_pos");
      m.c_neg_hat = r.real("c_neg_hat");
      m.c_pos_hat = r.real("c_pos_hat");
      m.threshold = r.real("threshold");
      m.lambda = r.real("lambda");
      m.sigma = r.real("sigma");
      m.epsilons = r.vector("epsilons");
      m.objective = r.real("objective");
      m.lp_iterations = r.count("lp_iterations");
      t.model = std::move(m);
      break;
    }
    case Method::Fqcc: {
      FqccModel m;
      m.beta = r.vector("beta");
      m.c_neg_hat = r.real("c_neg_hat");
      m.c_pos_hat = r.real("c_pos_hat");
      m.threshold = r.real("threshold");
      m.lambda = r.real("lambda");
      m.sigma = r.real("sigma");
      m.objective_achieved = r.real("objective");
      t.model = std::move(m);
      break;
    }
    case Method::Klcc: {
      KernelLccModel m;
      m.kernel.kind = parse_kernel(r.text("kernel"));
      m.kernel.rbf_width = r.real("rbf_width");
      m.alphas = r.vector("alphas");
      m.training = r.matrix("training");
      if (m.training.rows() != m.alphas.size()) throw DataError("model file: alphas and training rows differ");
      m.c_neg_hat = r.real("c_neg_hat");
      m.c_pos_hat = r.real("c_pos_hat");
      m.threshold = r.real("threshold");
      m.lambda = r.real("lambda");
      m.sigma = r.real("sigma");
      m.epsilons = r.vector("epsilons");
      m.objective = r.real("objective");
      m.lp_iterations = r.count("lp_iterations");
      t.model = std::move(m);
      break;
    }
    case Method::Lda: {
      LdaModel m;
      m.weight = r.vector("weight");
      m.threshold = r.real("threshold");
      m.lambda_reg = r.real("lambda");
      t.model = std::move(m);
      break;
    }
    case Method::Svm: {
      SvmModel m;
      m.weight = r.vector("weight");
      m.intercept = r.real("intercept");
      m.lambda = r.real("lambda");
      t.model = std::move(m);
      break;
    }
  }
  if (r.has("discriminator")) t.discriminator = read_discriminator(r);
  if (t.dims() != file.preprocessing.kept_columns.size()) {
    throw DataError("model file: model width does not match kept columns");
  }
  return file;
}

void save_model(const std::filesystem::path& path, const ModelFile& file) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  write_model(out, file);
  if (!out) throw DataError("failed writing " + path.string());
}

ModelFile load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return read_model(in);
}

}  // namespace lcc
