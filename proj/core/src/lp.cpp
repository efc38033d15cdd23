#include "lcc/lp.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

#include "lcc/error.hpp"

namespace lcc {

std::size_t LpProblem::num_bounded_variables() const {
  std::size_t count = 0;
  for (Eigen::Index j = 0; j < lower.size(); ++j)
    if (std::isfinite(lower(j)) || std::isfinite(upper(j))) ++count;
  return count;
}

void LpProblem::validate() const {
  const auto d = objective.size();
  const auto r = constraints.rows();
  if (constraints.cols() != d && r > 0) throw DataError("LP constraint matrix has wrong column count");
  if (rhs.size() != r || static_cast<Eigen::Index>(relations.size()) != r)
    throw DataError("LP rhs/relations size does not match constraint rows");
  if (lower.size() != d || upper.size() != d) throw DataError("LP bound vectors have wrong size");
  if (!objective.allFinite() || !constraints.allFinite() || !rhs.allFinite())
    throw DataError("LP data contains non-finite coefficients");
  for (Eigen::Index j = 0; j < d; ++j) {
    if (std::isnan(lower(j)) || std::isnan(upper(j)) || lower(j) > upper(j) || lower(j) == kInf ||
        upper(j) == -kInf) {
      throw DataError("LP variable " + std::to_string(j) + " has invalid bounds");
    }
  }
}

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "unknown";
}

namespace {

enum class VarState : unsigned char { Basic, AtLower, AtUpper, Free };

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

// Variables are laid out as [structural | one slack per row | artificials].
// Slack and artificial columns are signed unit vectors.
class BoundedSimplex {
 public:
  BoundedSimplex(const LpProblem& problem, const LpOptions& options)
      : p_(problem),
        opt_(options),
        d_(problem.num_variables()),
        r_(problem.num_rows()) {
    cap_ = opt_.max_iterations ? opt_.max_iterations : 10 * (r_ + d_) * 100;
    refactor_every_ = opt_.refactor_interval ? opt_.refactor_interval : 64;
    refactor_every_ = std::max(refactor_every_, r_);
    init_basis();
  }

  LpSolution run() {
    LpSolution out;
    if (num_artificials_ > 0) {
      Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(total_));
      for (std::size_t k = d_ + r_; k < total_; ++k) phase1(static_cast<Eigen::Index>(k)) = 1.0;
      iterate(phase1);
      refactor();
      double infeasibility = 0.0;
      for (std::size_t k = d_ + r_; k < total_; ++k) infeasibility += std::max(0.0, x_(static_cast<Eigen::Index>(k)));
      const double scale = 1.0 + (p_.rhs.size() ? p_.rhs.cwiseAbs().maxCoeff() : 0.0);
      if (infeasibility > opt_.feasibility_tolerance * scale) {
        out.status = LpStatus::Infeasible;
        out.iterations = iterations_;
        return out;
      }
      // Pin artificials at zero; fixed variables never re-enter.
      for (std::size_t k = d_ + r_; k < total_; ++k) {
        hi_[k] = 0.0;
        if (state_[k] != VarState::Basic) {
          state_[k] = VarState::AtLower;
          x_(static_cast<Eigen::Index>(k)) = 0.0;
        }
      }
      compute_basic_values();
    }

    Eigen::VectorXd cost = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(total_));
    cost.head(static_cast<Eigen::Index>(d_)) = p_.objective;
    if (!iterate(cost)) {
      out.status = LpStatus::Unbounded;
      out.iterations = iterations_;
      return out;
    }
    refactor();
    for (std::size_t i = 0; i < r_; ++i) {
      const auto b = basis_[i];
      auto& v = x_(static_cast<Eigen::Index>(b));
      v = std::clamp(v, lo_[b], hi_[b]);
    }
    out.status = LpStatus::Optimal;
    out.x = x_.head(static_cast<Eigen::Index>(d_));
    out.objective_value = p_.objective.dot(out.x);
    out.duals = row_multipliers(cost);
    out.iterations = iterations_;
    return out;
  }

 private:
  void init_basis() {
    total_ = d_ + 2 * r_;  // upper bound; trimmed below
    lo_.assign(total_, 0.0);
    hi_.assign(total_, kInf);
    unit_row_.assign(total_, 0);
    unit_sign_.assign(total_, 1.0);
    state_.assign(total_, VarState::AtLower);
    x_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(total_));
    basis_.assign(r_, kNone);

    for (std::size_t j = 0; j < d_; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      lo_[j] = p_.lower(jj);
      hi_[j] = p_.upper(jj);
      if (std::isfinite(lo_[j])) {
        state_[j] = VarState::AtLower;
        x_(jj) = lo_[j];
      } else if (std::isfinite(hi_[j])) {
        state_[j] = VarState::AtUpper;
        x_(jj) = hi_[j];
      } else {
        state_[j] = VarState::Free;
        x_(jj) = 0.0;
      }
    }

    const Eigen::VectorXd residual =
        r_ ? Eigen::VectorXd(p_.rhs - p_.constraints * x_.head(static_cast<Eigen::Index>(d_)))
           : Eigen::VectorXd();
    std::size_t next_artificial = d_ + r_;
    binv_ = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(r_), static_cast<Eigen::Index>(r_));
    for (std::size_t i = 0; i < r_; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      const std::size_t slack = d_ + i;
      const Relation rel = p_.relations[i];
      lo_[slack] = rel == Relation::LessEqual ? 0.0 : (rel == Relation::Equal ? 0.0 : -kInf);
      hi_[slack] = rel == Relation::GreaterEqual ? 0.0 : (rel == Relation::Equal ? 0.0 : kInf);
      unit_row_[slack] = i;
      const double res = residual(ii);
      if (res >= lo_[slack] && res <= hi_[slack]) {
        state_[slack] = VarState::Basic;
        x_(static_cast<Eigen::Index>(slack)) = res;
        basis_[i] = slack;
        continue;
      }
      state_[slack] = rel == Relation::GreaterEqual ? VarState::AtUpper : VarState::AtLower;
      x_(static_cast<Eigen::Index>(slack)) = 0.0;
      const std::size_t art = next_artificial++;
      unit_row_[art] = i;
      unit_sign_[art] = res > 0.0 ? 1.0 : -1.0;
      lo_[art] = 0.0;
      hi_[art] = kInf;
      state_[art] = VarState::Basic;
      x_(static_cast<Eigen::Index>(art)) = std::abs(res);
      basis_[i] = art;
      binv_(ii, ii) = unit_sign_[art];
    }
    total_ = next_artificial;
    num_artificials_ = total_ - d_ - r_;
    x_.conservativeResize(static_cast<Eigen::Index>(total_));
  }

  double dot_column(const Eigen::VectorXd& y, std::size_t j) const {
    if (j < d_) return y.dot(p_.constraints.col(static_cast<Eigen::Index>(j)));
    return unit_sign_[j] * y(static_cast<Eigen::Index>(unit_row_[j]));
  }

  void ftran(std::size_t j, Eigen::VectorXd& out) const {
    if (j < d_) {
      out.noalias() = binv_ * p_.constraints.col(static_cast<Eigen::Index>(j));
    } else {
      out = unit_sign_[j] * binv_.col(static_cast<Eigen::Index>(unit_row_[j]));
    }
  }

  void refactor() {
    if (r_ == 0) return;
    const auto r = static_cast<Eigen::Index>(r_);
    Eigen::MatrixXd basis_matrix = Eigen::MatrixXd::Zero(r, r);
    for (std::size_t i = 0; i < r_; ++i) {
      const auto j = basis_[i];
      const auto ii = static_cast<Eigen::Index>(i);
      if (j < d_) {
        basis_matrix.col(ii) = p_.constraints.col(static_cast<Eigen::Index>(j));
      } else {
        basis_matrix(static_cast<Eigen::Index>(unit_row_[j]), ii) = unit_sign_[j];
      }
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_matrix);
    binv_ = lu.inverse();
    if (!binv_.allFinite()) throw NumericError("LP basis became singular");
    since_refactor_ = 0;
    compute_basic_values();
  }

  Eigen::VectorXd row_multipliers(const Eigen::VectorXd& cost) const {
    Eigen::VectorXd cb(static_cast<Eigen::Index>(r_));
    for (std::size_t i = 0; i < r_; ++i) cb(static_cast<Eigen::Index>(i)) = cost(static_cast<Eigen::Index>(basis_[i]));
    return binv_.transpose() * cb;
  }

  void compute_basic_values() {
    if (r_ == 0) return;
    Eigen::VectorXd rhs = p_.rhs;
    for (std::size_t j = 0; j < total_; ++j) {
      if (state_[j] == VarState::Basic) continue;
      const double v = x_(static_cast<Eigen::Index>(j));
      if (v == 0.0) continue;
      if (j < d_) {
        rhs.noalias() -= v * p_.constraints.col(static_cast<Eigen::Index>(j));
      } else {
        rhs(static_cast<Eigen::Index>(unit_row_[j])) -= unit_sign_[j] * v;
      }
    }
    const Eigen::VectorXd xb = binv_ * rhs;
    for (std::size_t i = 0; i < r_; ++i) x_(static_cast<Eigen::Index>(basis_[i])) = xb(static_cast<Eigen::Index>(i));
  }

  // Returns false when the problem is unbounded in the given cost.
  bool iterate(const Eigen::VectorXd& cost) {
    const auto r = static_cast<Eigen::Index>(r_);
    Eigen::VectorXd cb(r), y(r), alpha(r);
    bool bland = false;
    double best = cost.dot(x_);
    std::size_t stall = 0;
    const std::size_t stall_limit = 3 * (r_ + d_);

    while (true) {
      if (iterations_ >= cap_) {
        throw NumericError("LP iteration cap of " + std::to_string(cap_) + " exceeded: cycling suspected");
      }
      if (since_refactor_ >= refactor_every_) refactor();

      for (std::size_t i = 0; i < r_; ++i) cb(static_cast<Eigen::Index>(i)) = cost(static_cast<Eigen::Index>(basis_[i]));
      y.noalias() = binv_.transpose() * cb;

      // Pricing.
      std::size_t entering = kNone;
      double direction = 0.0;
      double best_score = 0.0;
      for (std::size_t j = 0; j < total_; ++j) {
        const auto st = state_[j];
        if (st == VarState::Basic || lo_[j] == hi_[j]) continue;
        const double reduced = cost(static_cast<Eigen::Index>(j)) - dot_column(y, j);
        double dir = 0.0;
        if (st == VarState::AtLower && reduced < -opt_.optimality_tolerance) {
          dir = 1.0;
        } else if (st == VarState::AtUpper && reduced > opt_.optimality_tolerance) {
          dir = -1.0;
        } else if (st == VarState::Free && std::abs(reduced) > opt_.optimality_tolerance) {
          dir = reduced < 0.0 ? 1.0 : -1.0;
        }
        if (dir == 0.0) continue;
        if (bland) {
          entering = j;
          direction = dir;
          break;
        }
        if (std::abs(reduced) > best_score) {
          best_score = std::abs(reduced);
          entering = j;
          direction = dir;
        }
      }
      if (entering == kNone) return true;

      // Ratio test. The entering variable's own bound range caps the step.
      ftran(entering, alpha);
      const double range = hi_[entering] - lo_[entering];
      double step = std::isfinite(range) ? range : kInf;
      std::size_t leaving_row = kNone;
      double leaving_pivot = 0.0;
      bool leaving_to_upper = false;
      for (std::size_t i = 0; i < r_; ++i) {
        const double a = direction * alpha(static_cast<Eigen::Index>(i));
        if (std::abs(a) <= opt_.pivot_tolerance) continue;
        const auto b = basis_[i];
        const double xb = x_(static_cast<Eigen::Index>(b));
        double t = 0.0;
        bool to_upper = false;
        if (a > 0.0) {
          if (!std::isfinite(lo_[b])) continue;
          t = std::max(0.0, xb - lo_[b]) / a;
        } else {
          if (!std::isfinite(hi_[b])) continue;
          t = std::max(0.0, hi_[b] - xb) / -a;
          to_upper = true;
        }
        const double eps = 1e-12 * (std::isfinite(step) ? std::max(1.0, step) : 1.0);
        bool take = false;
        if (t < step - eps) {
          take = true;
        } else if (leaving_row != kNone && t <= step + eps) {
          take = bland ? b < basis_[leaving_row] : std::abs(a) > std::abs(leaving_pivot);
        }
        if (take) {
          step = t;
          leaving_row = i;
          leaving_pivot = a;
          leaving_to_upper = to_upper;
        }
      }
      if (leaving_row == kNone && !std::isfinite(step)) return false;

      x_(static_cast<Eigen::Index>(entering)) += direction * step;
      for (std::size_t i = 0; i < r_; ++i)
        x_(static_cast<Eigen::Index>(basis_[i])) -= direction * step * alpha(static_cast<Eigen::Index>(i));

      if (leaving_row == kNone) {
        state_[entering] = direction > 0.0 ? VarState::AtUpper : VarState::AtLower;
        x_(static_cast<Eigen::Index>(entering)) = direction > 0.0 ? hi_[entering] : lo_[entering];
      } else {
        const auto lr = static_cast<Eigen::Index>(leaving_row);
        const auto leaving = basis_[leaving_row];
        state_[leaving] = leaving_to_upper ? VarState::AtUpper : VarState::AtLower;
        x_(static_cast<Eigen::Index>(leaving)) = leaving_to_upper ? hi_[leaving] : lo_[leaving];

        const Eigen::RowVectorXd pivot_row = binv_.row(lr) / alpha(lr);
        binv_.noalias() -= alpha * pivot_row;
        binv_.row(lr) = pivot_row;
        basis_[leaving_row] = entering;
        state_[entering] = VarState::Basic;
        ++since_refactor_;
      }
      ++iterations_;

      const double obj = cost.dot(x_);
      if (obj < best - 1e-12 * (1.0 + std::abs(best))) {
        best = obj;
        stall = 0;
      } else if (!bland && ++stall >= stall_limit) {
        bland = true;
      }
    }
  }

  const LpProblem& p_;
  LpOptions opt_;
  std::size_t d_;
  std::size_t r_;
  std::size_t total_ = 0;
  std::size_t num_artificials_ = 0;
  std::size_t cap_ = 0;
  std::size_t refactor_every_ = 64;
  std::size_t since_refactor_ = 0;
  std::size_t iterations_ = 0;

  std::vector<double> lo_;
  std::vector<double> hi_;
  std::vector<std::size_t> unit_row_;
  std::vector<double> unit_sign_;
  std::vector<VarState> state_;
  std::vector<std::size_t> basis_;
  Eigen::VectorXd x_;
  Eigen::MatrixXd binv_;
};

}  // namespace

LpSolution solve(const LpProblem& problem, const LpOptions& options) {
  problem.validate();
  return BoundedSimplex(problem, options).run();
}

namespace {

const char* relation_symbol(Relation rel) {
  switch (rel) {
    case Relation::LessEqual: return "<=";
    case Relation::GreaterEqual: return ">=";
    case Relation::Equal: return "=";
  }
  return "?";
}

}  // namespace

void write_lp(std::ostream& out, const LpProblem& problem) {
  const auto d = problem.objective.size();
  out << "# lp rows=" << problem.num_rows() << " vars=" << d << '\n' << std::setprecision(17);
  out << "min";
  for (Eigen::Index j = 0; j < d; ++j) out << '\t' << problem.objective(j);
  out << '\n';
  for (Eigen::Index i = 0; i < problem.constraints.rows(); ++i) {
    out << 'r' << i;
    for (Eigen::Index j = 0; j < d; ++j) out << '\t' << problem.constraints(i, j);
    out << '\t' << relation_symbol(problem.relations[static_cast<std::size_t>(i)]) << '\t'
        << problem.rhs(i) << '\n';
  }
  out << "lower";
  for (Eigen::Index j = 0; j < d; ++j) out << '\t' << problem.lower(j);
  out << "\nupper";
  for (Eigen::Index j = 0; j < d; ++j) out << '\t' << problem.upper(j);
  out << '\n';
}

}  // namespace lcc
