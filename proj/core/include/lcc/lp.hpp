#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace lcc {

enum class Relation { LessEqual, GreaterEqual, Equal };

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// minimize c^T x  subject to  A_i x (<= | >= | =) b_i,  lower <= x <= upper.
/// Bounds may be infinite.
struct LpProblem {
  Eigen::VectorXd objective;
  Eigen::MatrixXd constraints;
  std::vector<Relation> relations;
  Eigen::VectorXd rhs;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  std::size_t num_variables() const { return static_cast<std::size_t>(objective.size()); }
  std::size_t num_rows() const { return static_cast<std::size_t>(constraints.rows()); }
  /// Number of variables with at least one finite bound.
  std::size_t num_bounded_variables() const;

  /// Throws DataError on inconsistent dimensions, lower > upper, or NaNs.
  void validate() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

const char* to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Eigen::VectorXd x;      // empty unless optimal
  Eigen::VectorXd duals;  // row multipliers y = B^-T c_B of the optimal basis
  double objective_value = 0.0;
  std::size_t iterations = 0;
};

struct LpOptions {
  double pivot_tolerance = 1e-9;
  double feasibility_tolerance = 1e-7;
  double optimality_tolerance = 1e-9;
  /// 0 selects the default cap of 10 * (rows + vars) * 100.
  std::size_t max_iterations = 0;
  /// Basis inverse is rebuilt from scratch this often.
  std::size_t refactor_interval = 64;
};

/// Bounded-variable revised simplex.
///
/// Nonbasic variables rest at a finite bound (or at zero when free). Phase 1
/// minimizes the sum of artificial variables placed on rows whose initial
/// slack would violate its bounds. Pricing is Dantzig's largest reduced cost and
/// switches to Bland's rule after 3 * (rows + vars) iterations without an
/// objective improvement. Infeasible and unbounded problems are reported via
/// the status; exceeding the iteration cap throws NumericError.
LpSolution solve(const LpProblem& problem, const LpOptions& options = {});

/// Plain-text tabular dump, one row per constraint plus objective and bounds.
void write_lp(std::ostream& out, const LpProblem& problem);

}  // namespace lcc
