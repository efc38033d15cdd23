#include <gtest/gtest.h>

#include <sstream>

#include "lcc/error.hpp"
#include "lcc/lp.hpp"
#include "lcc/rng.hpp"
#include "oracles.hpp"

using namespace lcc;

namespace {

LpProblem box_only(Eigen::VectorXd c, Eigen::VectorXd lo, Eigen::VectorXd hi) {
  LpProblem lp;
  lp.objective = std::move(c);
  lp.constraints.resize(0, lp.objective.size());
  lp.rhs.resize(0);
  lp.lower = std::move(lo);
  lp.upper = std::move(hi);
  return lp;
}

void expect_feasible(const LpProblem& lp, const LpSolution& sol) {
  ASSERT_EQ(sol.status, LpStatus::Optimal);
  for (Eigen::Index j = 0; j < sol.x.size(); ++j) {
    EXPECT_GE(sol.x(j), lp.lower(j) - 1e-9);
    EXPECT_LE(sol.x(j), lp.upper(j) + 1e-9);
  }
  const Eigen::VectorXd ax = lp.constraints * sol.x;
  for (Eigen::Index i = 0; i < ax.size(); ++i) {
    const auto rel = lp.relations[static_cast<std::size_t>(i)];
    if (rel != Relation::GreaterEqual) {
      EXPECT_LE(ax(i), lp.rhs(i) + 1e-7);
    }
    if (rel != Relation::LessEqual) {
      EXPECT_GE(ax(i), lp.rhs(i) - 1e-7);
    }
  }
}

}  // namespace

TEST(LpSolve, SingleVariableAtUpperBound) {
  const LpProblem lp = box_only(Eigen::VectorXd::Constant(1, -1.0), Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1));
  const LpSolution sol = solve(lp);
  ASSERT_EQ(sol.status, LpStatus::Optimal);
  EXPECT_DOUBLE_EQ(sol.x(0), 1.0);
  EXPECT_DOUBLE_EQ(sol.objective_value, -1.0);
}

TEST(LpSolve, ContradictoryRowsAreInfeasible) {
  LpProblem lp;
  lp.objective = Eigen::VectorXd::Ones(1);
  lp.constraints = Eigen::MatrixXd::Ones(2, 1);
  lp.relations = {Relation::GreaterEqual, Relation::LessEqual};
  lp.rhs = Eigen::Vector2d(2.0, 1.0);
  lp.lower = Eigen::VectorXd::Constant(1, -kInf);
  lp.upper = Eigen::VectorXd::Constant(1, kInf);
  EXPECT_EQ(solve(lp).status, LpStatus::Infeasible);
}

TEST(LpSolve, UnboundedIsReported) {
  LpProblem lp;
  lp.objective = Eigen::Vector2d(-1.0, 0.0);
  lp.constraints = Eigen::RowVector2d(1.0, -1.0);
  lp.relations = {Relation::LessEqual};
  lp.rhs = Eigen::VectorXd::Constant(1, 1.0);
  lp.lower = Eigen::Vector2d::Zero();
  lp.upper = Eigen::Vector2d::Constant(kInf);
  EXPECT_EQ(solve(lp).status, LpStatus::Unbounded);
}

TEST(LpSolve, FreeVariablesAndEqualityRows) {
  // min x + 2y  s.t. x + y = 3, x - y >= -1, x, y free  ->  x = 3, y = 0 is not
  // optimal; the optimum sits where y is as small as allowed by x - y >= -1
  // after substituting x = 3 - y: 3 - 2y >= -1 -> y <= 2, objective 3 + y, so y
  // goes to -inf: unbounded. Add y >= -5 to make it bounded.
  LpProblem lp;
  lp.objective = Eigen::Vector2d(1.0, 2.0);
  lp.constraints.resize(2, 2);
  lp.constraints << 1, 1, 1, -1;
  lp.relations = {Relation::Equal, Relation::GreaterEqual};
  lp.rhs = Eigen::Vector2d(3.0, -1.0);
  lp.lower = Eigen::Vector2d(-kInf, -5.0);
  lp.upper = Eigen::Vector2d(kInf, kInf);
  const LpSolution sol = solve(lp);
  expect_feasible(lp, sol);
  EXPECT_NEAR(sol.x(0), 8.0, 1e-9);
  EXPECT_NEAR(sol.x(1), -5.0, 1e-9);
  EXPECT_NEAR(sol.objective_value, -2.0, 1e-9);
}

TEST(LpSolve, DualsSatisfyStrongDuality) {
  // min c.x, A x >= b, x >= 0: the dual optimum b.y equals c.x.
  Rng rng(21);
  for (int t = 0; t < 50; ++t) {
    LpProblem lp;
    lp.objective = Eigen::VectorXd(3);
    for (int j = 0; j < 3; ++j) lp.objective(j) = rng.uniform(0.5, 2.0);
    lp.constraints.resize(2, 3);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 3; ++j) lp.constraints(i, j) = rng.uniform(0.1, 1.0);
    lp.relations = {Relation::GreaterEqual, Relation::GreaterEqual};
    lp.rhs = Eigen::Vector2d(rng.uniform(0.5, 1.5), rng.uniform(0.5, 1.5));
    lp.lower = Eigen::VectorXd::Zero(3);
    lp.upper = Eigen::VectorXd::Constant(3, kInf);
    const LpSolution sol = solve(lp);
    expect_feasible(lp, sol);
    EXPECT_NEAR(lp.rhs.dot(sol.duals), sol.objective_value, 1e-9);
    EXPECT_GE(sol.duals.minCoeff(), -1e-12);
  }
}

TEST(LpSolve, MatchesVertexEnumeration) {
  Rng rng(1234);
  for (int t = 0; t < 300; ++t) {
    const std::size_t d = 1 + rng.index(4);
    const std::size_t r = rng.index(7);
    const LpProblem lp = oracle::random_feasible_lp(rng, d, r);
    const LpSolution sol = solve(lp);
    expect_feasible(lp, sol);
    const auto brute = oracle::vertex_enumeration(lp);
    ASSERT_TRUE(brute.has_value());
    EXPECT_NEAR(sol.objective_value, *brute, 1e-6) << "trial " << t;
    // No vertex is better than the solver's answer.
    EXPECT_GE(*brute, sol.objective_value - 1e-6);
  }
}

TEST(LpSolve, InfeasibleRandomProblemsAgreeWithOracle) {
  Rng rng(77);
  int infeasible = 0;
  for (int t = 0; t < 300; ++t) {
    const std::size_t d = 1 + rng.index(3);
    LpProblem lp = oracle::random_feasible_lp(rng, d, 3);
    lp.rhs *= -3.0;  // usually breaks the interior point
    const auto brute = oracle::vertex_enumeration(lp, 1e-9);
    const LpSolution sol = solve(lp);
    if (!brute) {
      ++infeasible;
      EXPECT_EQ(sol.status, LpStatus::Infeasible) << "trial " << t;
    } else {
      ASSERT_EQ(sol.status, LpStatus::Optimal) << "trial " << t;
      EXPECT_NEAR(sol.objective_value, *brute, 1e-6);
    }
  }
  EXPECT_GT(infeasible, 0);
}

TEST(LpSolve, DegenerateProblemTerminates) {
  // Many redundant constraints through the same vertex.
  LpProblem lp;
  const int r = 30;
  lp.objective = Eigen::Vector3d(-1.0, -1.0, -1.0);
  lp.constraints.resize(r, 3);
  Rng rng(5);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < 3; ++j) lp.constraints(i, j) = rng.uniform(0.0, 1.0);
  lp.relations.assign(r, Relation::LessEqual);
  lp.rhs = Eigen::VectorXd::Zero(r);
  lp.lower = Eigen::Vector3d::Zero();
  lp.upper = Eigen::Vector3d::Ones();
  const LpSolution sol = solve(lp);
  expect_feasible(lp, sol);
  EXPECT_NEAR(sol.objective_value, 0.0, 1e-12);
}

TEST(LpSolve, DeterministicBitForBit) {
  Rng rng(99);
  const LpProblem lp = oracle::random_feasible_lp(rng, 4, 6);
  const LpSolution a = solve(lp);
  const LpSolution b = solve(lp);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.objective_value, b.objective_value);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(LpSolve, IterationCapThrows) {
  Rng rng(4);
  const LpProblem lp = oracle::random_feasible_lp(rng, 4, 6);
  LpOptions options;
  options.max_iterations = 1;
  // Either the first pivot is already optimal or the cap triggers.
  try {
    const LpSolution sol = solve(lp, options);
    EXPECT_LE(sol.iterations, 1u);
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("cycling suspected"), std::string::npos);
  }
}

TEST(LpSolve, ValidatesInput) {
  LpProblem lp = box_only(Eigen::VectorXd::Ones(2), Eigen::VectorXd::Ones(2), Eigen::VectorXd::Zero(2));
  EXPECT_THROW(solve(lp), DataError);
  lp = box_only(Eigen::VectorXd::Ones(2), Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(2));
  EXPECT_THROW(solve(lp), DataError);
}

TEST(WriteLp, TabularDump) {
  LpProblem lp;
  lp.objective = Eigen::Vector2d(1.0, -1.0);
  lp.constraints = Eigen::RowVector2d(2.0, 3.0);
  lp.relations = {Relation::LessEqual};
  lp.rhs = Eigen::VectorXd::Constant(1, 4.0);
  lp.lower = Eigen::Vector2d(-1.0, 0.0);
  lp.upper = Eigen::Vector2d(1.0, kInf);
  std::ostringstream out;
  write_lp(out, lp);
  const std::string text = out.str();
  EXPECT_NE(text.find("rows=1 vars=2"), std::string::npos);
  EXPECT_NE(text.find("r0\t2\t3\t<=\t4"), std::string::npos);
  EXPECT_NE(text.find("upper\t1\tinf"), std::string::npos);
}
