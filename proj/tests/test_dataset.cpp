#include <gtest/gtest.h>

#include "lcc/dataset.hpp"
#include "lcc/error.hpp"
#include "lcc/generators.hpp"
#include "lcc/rng.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace lcc;

TEST(LoadCsv, ParsesRowsInFileOrder) {
  const auto dir = testutil::scratch_dir();
  const auto path = testutil::write_text(dir / "a.csv", "1,0.5,2\n-1,1.5,-2\n1,3,4\n");
  const Dataset d = load_csv(path);
  ASSERT_EQ(d.size(), 3u);
  ASSERT_EQ(d.dims(), 2u);
  EXPECT_EQ(d.labels, (std::vector<Label>{Label::Positive, Label::Negative, Label::Positive}));
  EXPECT_DOUBLE_EQ(d.features(1, 0), 1.5);
  EXPECT_DOUBLE_EQ(d.features(2, 1), 4.0);
}

TEST(LoadCsv, RemapsZeroOneLabels) {
  const auto dir = testutil::scratch_dir();
  const auto path = testutil::write_text(dir / "a.csv", "x,label\n1.0,0\n2.0,1\n");
  const Dataset d = load_csv(path, CsvOptions{1, true});
  EXPECT_EQ(d.labels, (std::vector<Label>{Label::Negative, Label::Positive}));
  EXPECT_DOUBLE_EQ(d.features(1, 0), 2.0);
}

TEST(LoadCsv, BadCellNamesRowAndColumn) {
  const auto dir = testutil::scratch_dir();
  const auto path = testutil::write_text(dir / "a.csv", "1,0.5\n-1,abc\n");
  try {
    load_csv(path);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("row 2, column 1"), std::string::npos) << e.what();
  }
}

TEST(LoadCsv, MissingLabelIsAnError) {
  const auto dir = testutil::scratch_dir();
  const auto path = testutil::write_text(dir / "a.csv", "1,0.5\n,1.0\n");
  EXPECT_THROW(load_csv(path), DataError);
}

TEST(LoadCsv, RejectsOtherLabelValues) {
  const auto dir = testutil::scratch_dir();
  EXPECT_THROW(load_csv(testutil::write_text(dir / "a.csv", "2,0.5\n")), DataError);
}

TEST(LoadCsv, RaggedRowIsAnError) {
  const auto dir = testutil::scratch_dir();
  EXPECT_THROW(load_csv(testutil::write_text(dir / "a.csv", "1,0.5,1\n-1,1\n")), DataError);
}

TEST(LoadCsv, WriteThenLoadRoundTrips) {
  const auto dir = testutil::scratch_dir();
  Rng rng(3);
  const Dataset d = oracle::random_dataset(rng, 9, 3, 1.0);
  write_csv(dir / "d.csv", d);
  const Dataset back = load_csv(dir / "d.csv");
  EXPECT_EQ(back.labels, d.labels);
  EXPECT_EQ(back.features, d.features);
}

TEST(Dataset, RejectsNonFiniteFeatures) {
  Eigen::MatrixXd x(1, 1);
  x(0, 0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(Dataset(x, {Label::Positive}), DataError);
}

TEST(Normalizer, FittingSetHasZeroMeanUnitStd) {
  Rng rng(11);
  Dataset d = oracle::random_dataset(rng, 40, 4, 3.0);
  d.features.col(2) *= 250.0;
  const Dataset z = apply_normalizer(fit_normalizer(d), d);
  for (Eigen::Index j = 0; j < z.features.cols(); ++j) {
    const auto col = z.features.col(j);
    const double mean = col.mean();
    const double std = std::sqrt((col.array() - mean).square().mean());
    EXPECT_NEAR(mean, 0.0, 1e-9);
    EXPECT_NEAR(std, 1.0, 1e-9);
  }
}

TEST(Normalizer, TwoValueColumn) {
  Eigen::MatrixXd x(2, 1);
  x << 2.0, 4.0;
  const Normalizer n = fit_normalizer(Dataset(x, {Label::Negative, Label::Positive}));
  EXPECT_DOUBLE_EQ(n.means(0), 3.0);
  EXPECT_DOUBLE_EQ(n.stds(0), 1.0);
}

TEST(Normalizer, MeanVectorMapsToZero) {
  Rng rng(5);
  const Dataset d = oracle::random_dataset(rng, 20, 3, 1.0);
  const Normalizer n = fit_normalizer(d);
  EXPECT_LT(n.apply(Eigen::VectorXd(n.means)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Normalizer, InvertRoundTrips) {
  Rng rng(6);
  const Dataset d = oracle::random_dataset(rng, 30, 5, 2.0);
  const Normalizer n = fit_normalizer(d);
  const Eigen::MatrixXd back = n.invert(n.apply(d.features));
  EXPECT_LT((back - d.features).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Normalizer, ZeroStdColumnPointsToPruning) {
  Eigen::MatrixXd x(3, 2);
  x << 1, 5, 2, 5, 3, 5;
  try {
    fit_normalizer(Dataset(x, {Label::Negative, Label::Positive, Label::Positive}));
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("drop_zero_variance"), std::string::npos);
  }
}

TEST(DropZeroVariance, RemovesConstantColumn) {
  Rng rng(8);
  const Dataset d = oracle::random_dataset(rng, 12, 2, 1.0);
  Eigen::MatrixXd x(12, 3);
  x << d.features.col(0), Eigen::VectorXd::Constant(12, 7.0), d.features.col(1);
  const PrunedDataset p = drop_zero_variance(Dataset(x, d.labels));
  EXPECT_EQ(p.kept_columns, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(p.data.features, d.features);
}

TEST(DropZeroVariance, NoConstantColumnsIsIdentity) {
  Rng rng(9);
  const Dataset d = oracle::random_dataset(rng, 12, 4, 1.0);
  const PrunedDataset p = drop_zero_variance(d);
  EXPECT_EQ(p.kept_columns, (std::vector<std::size_t>{0, 1, 2, 3}));
  EXPECT_EQ(p.data.features, d.features);
}

TEST(DropZeroVariance, Idempotent) {
  Eigen::MatrixXd x(4, 3);
  x << 1, 0, 2, 1, 1, 3, 1, 0, 5, 1, 1, 7;
  const Dataset d(x, {Label::Negative, Label::Positive, Label::Negative, Label::Positive});
  const PrunedDataset once = drop_zero_variance(d);
  const PrunedDataset twice = drop_zero_variance(once.data);
  EXPECT_EQ(twice.data.features, once.data.features);
  EXPECT_EQ(twice.kept_columns, (std::vector<std::size_t>{0, 1}));
}

TEST(DropZeroVariance, AllConstantIsAnError) {
  Eigen::MatrixXd x(2, 2);
  x << 1, 2, 1, 2;
  EXPECT_THROW(drop_zero_variance(Dataset(x, {Label::Negative, Label::Positive})), DataError);
}

TEST(GaussianPair, SampleMeansNearRequested) {
  const GaussianDemo demo;
  const std::size_t m = 2000;
  const Dataset d = gen_gaussian_pair(demo.mean_neg, demo.cov_neg, demo.mean_pos, demo.cov_pos, m, 17);
  ASSERT_EQ(d.size(), 2 * m);
  EXPECT_EQ(d.labels.front(), Label::Negative);
  EXPECT_EQ(d.labels.back(), Label::Positive);
  const Eigen::Matrix2d cov[2] = {nearest_psd(demo.cov_neg), nearest_psd(demo.cov_pos)};
  const Eigen::Vector2d mean[2] = {demo.mean_neg, demo.mean_pos};
  for (int c = 0; c < 2; ++c) {
    const Eigen::Vector2d sample = d.features.middleRows(c * static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m))
                                       .colwise()
                                       .mean()
                                       .transpose();
    for (int j = 0; j < 2; ++j) {
      const double sd = std::sqrt(std::max(cov[c](j, j), 0.0));
      EXPECT_LE(std::abs(sample(j) - mean[c](j)), 3.0 * sd / std::sqrt(double(m)) + 1e-12);
    }
  }
}

TEST(GaussianPair, ZeroCovarianceGivesPointMasses) {
  const Eigen::Vector2d mu(1.5, -2.0);
  const Dataset d = gen_gaussian_pair(mu, Eigen::Matrix2d::Zero(), mu, Eigen::Matrix2d::Zero(), 5, 1);
  for (Eigen::Index i = 0; i < d.features.rows(); ++i) EXPECT_EQ(Eigen::Vector2d(d.features.row(i)), mu);
}

TEST(GaussianPair, SameSeedIsBitIdentical) {
  const GaussianDemo demo;
  const Dataset a = gen_gaussian_pair(demo.mean_neg, demo.cov_neg, demo.mean_pos, demo.cov_pos, 50, 4);
  const Dataset b = gen_gaussian_pair(demo.mean_neg, demo.cov_neg, demo.mean_pos, demo.cov_pos, 50, 4);
  EXPECT_EQ(a.features, b.features);
}

TEST(GaussianPair, ZeroCountIsAnError) {
  EXPECT_THROW(gen_gaussian_pair({0, 0}, Eigen::Matrix2d::Identity(), {1, 1}, Eigen::Matrix2d::Identity(), 0, 1),
               DataError);
}

TEST(GaussianPair, ProjectionIsSymmetricPsd) {
  const GaussianDemo demo;
  for (const Eigen::Matrix2d& m : {demo.cov_neg, demo.cov_pos}) {
    const Eigen::Matrix2d p = nearest_psd(m);
    EXPECT_LT((p - p.transpose()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_GE(Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(p).eigenvalues().minCoeff(), -1e-12);
  }
}

TEST(Shapes, NoiselessCirclesAreRadiallySeparable) {
  const Dataset d = gen_shape(Shape::Circles, 200, 0.0, 3);
  double inner_max = 0.0;
  double outer_min = 1e9;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double r = d.row(i).norm();
    if (d.labels[i] == Label::Negative) {
      inner_max = std::max(inner_max, r);
    } else {
      outer_min = std::min(outer_min, r);
    }
  }
  EXPECT_LT(inner_max, outer_min);
}

TEST(Shapes, DeterministicAndTwoClass) {
  for (Shape s : {Shape::Circles, Shape::Spiral, Shape::JainLike, Shape::FlameLike}) {
    const Dataset a = gen_shape(s, 200, default_noise(s), 12);
    const Dataset b = gen_shape(s, 200, default_noise(s), 12);
    EXPECT_EQ(a.features, b.features) << shape_name(s);
    EXPECT_EQ(a.dims(), 2u);
    EXPECT_EQ(a.count(Label::Negative), 100u);
    EXPECT_EQ(a.count(Label::Positive), 100u);
  }
}

TEST(Shapes, OddCountGivesExtraRowToNegativeClass) {
  const Dataset d = gen_shape(Shape::Spiral, 7, 0.0, 1);
  EXPECT_EQ(d.count(Label::Negative), 4u);
  EXPECT_EQ(d.count(Label::Positive), 3u);
}

TEST(Shapes, BadArguments) {
  EXPECT_THROW(parse_shape("moons"), DataError);
  EXPECT_THROW(gen_shape(Shape::Circles, 3, 0.0, 1), DataError);
  EXPECT_THROW(gen_shape(Shape::Circles, 10, -1.0, 1), DataError);
  EXPECT_EQ(parse_shape("jain"), Shape::JainLike);
  EXPECT_EQ(parse_shape("flame_like"), Shape::FlameLike);
}
