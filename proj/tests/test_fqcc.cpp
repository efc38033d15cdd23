#include <gtest/gtest.h>

#include "lcc/error.hpp"
#include "lcc/fqcc.hpp"
#include "lcc/lcc.hpp"
#include "lcc/rng.hpp"
#include "oracles.hpp"

using namespace lcc;

TEST(Fqcc, DescentNeverWorseThanStart) {
  Rng rng(5);
  const LccParams params;
  for (int t = 0; t < 20; ++t) {
    const Dataset d = oracle::random_dataset(rng, 30, 3, 0.7);
    const ClassCenters c = class_centers(d);
    const Eigen::VectorXd start = (c.positive - c.negative).cwiseMax(-1.0).cwiseMin(1.0);
    const Eigen::VectorXd best = descend_fqcc(d, c, start, params, FqccOptions{});
    EXPECT_LE(fqcc_objective(d, c, best, params), fqcc_objective(d, c, start, params));
    EXPECT_LE(best.cwiseAbs().maxCoeff(), 1.0);
  }
}

TEST(Fqcc, ModelInvariants) {
  Rng rng(6);
  const Dataset d = oracle::random_dataset(rng, 40, 4, 1.0);
  const FqccModel model = train_fqcc(d);
  EXPECT_LE(model.beta.cwiseAbs().maxCoeff(), 1.0);
  EXPECT_LE(model.c_neg_hat, model.c_pos_hat);
  EXPECT_DOUBLE_EQ(model.objective_achieved, fqcc_objective(d, class_centers(d), model.beta, LccParams{}));
}

TEST(Fqcc, MatchesLccOnSeparableOneDimensionalData) {
  Rng rng(9);
  for (int t = 0; t < 10; ++t) {
    const Dataset d = oracle::random_dataset(rng, 20, 1, 10.0);
    const FqccModel fq = train_fqcc(d);
    const LccModel lin = train_lcc(d);
    Rng probe(static_cast<std::uint64_t>(100 + t));
    const Dataset q = oracle::random_dataset(probe, 40, 1, 10.0);
    EXPECT_EQ(fq.predict_rows(d.features), lin.predict_rows(d.features));
    EXPECT_EQ(fq.predict_rows(q.features), lin.predict_rows(q.features));
  }
}

TEST(Fqcc, DeterministicGivenSeed) {
  Rng rng(10);
  const Dataset d = oracle::random_dataset(rng, 25, 3, 0.5);
  EXPECT_EQ(train_fqcc(d).beta, train_fqcc(d).beta);
}

TEST(Fqcc, ZeroRestartsIsAnError) {
  Rng rng(11);
  const Dataset d = oracle::random_dataset(rng, 10, 2, 1.0);
  FqccOptions options;
  options.restarts = 0;
  EXPECT_THROW(train_fqcc(d, LccParams{}, options), DataError);
}
