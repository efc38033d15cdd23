#include "lcc/generators.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lcc/error.hpp"
#include "lcc/rng.hpp"

namespace lcc {

Eigen::Matrix2d nearest_psd(const Eigen::Matrix2d& m) {
  const Eigen::Matrix2d sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(sym);
  const Eigen::Vector2d clamped = eig.eigenvalues().cwiseMax(0.0);
  return eig.eigenvectors() * clamped.asDiagonal() * eig.eigenvectors().transpose();
}

namespace {

// Square-root factor L with L L^T = cov for a PSD covariance.
Eigen::Matrix2d sqrt_factor(const Eigen::Matrix2d& cov) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(cov);
  const Eigen::Vector2d roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * roots.asDiagonal();
}

}  // namespace

Dataset gen_gaussian_pair(const Eigen::Vector2d& mean_neg, const Eigen::Matrix2d& cov_neg,
                          const Eigen::Vector2d& mean_pos, const Eigen::Matrix2d& cov_pos,
                          std::size_t m_per_class, std::uint64_t seed) {
  if (m_per_class == 0) throw DataError("gen_gaussian_pair: m_per_class must be positive");
  const Eigen::Matrix2d factors[2] = {sqrt_factor(nearest_psd(cov_neg)), sqrt_factor(nearest_psd(cov_pos))};
  const Eigen::Vector2d means[2] = {mean_neg, mean_pos};

  Rng rng(seed);
  const auto m = static_cast<Eigen::Index>(2 * m_per_class);
  Eigen::MatrixXd x(m, 2);
  std::vector<Label> y(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    const int c = i < static_cast<Eigen::Index>(m_per_class) ? 0 : 1;
    Eigen::Vector2d z;
    z(0) = rng.normal();
    z(1) = rng.normal();
    x.row(i) = (means[c] + factors[c] * z).transpose();
    y[static_cast<std::size_t>(i)] = c == 0 ? Label::Negative : Label::Positive;
  }
  return Dataset(std::move(x), std::move(y));
}

Shape parse_shape(std::string_view name) {
  if (name == "circles") return Shape::Circles;
  if (name == "spiral") return Shape::Spiral;
  if (name == "jain_like" || name == "jain") return Shape::JainLike;
  if (name == "flame_like" || name == "flame") return Shape::FlameLike;
  throw DataError("unknown shape '" + std::string(name) + "' (expected circles, spiral, jain_like, flame_like)");
}

std::string_view shape_name(Shape shape) {
  switch (shape) {
    case Shape::Circles: return "circles";
    case Shape::Spiral: return "spiral";
    case Shape::JainLike: return "jain_like";
    case Shape::FlameLike: return "flame_like";
  }
  return "unknown";
}

double default_noise(Shape shape) {
  switch (shape) {
    case Shape::Circles: return 0.05;
    case Shape::Spiral: return 0.03;
    case Shape::JainLike: return 0.08;
    case Shape::FlameLike: return 0.05;
  }
  return 0.0;
}

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::Vector2d sample_point(Shape shape, bool negative, Rng& rng) {
  switch (shape) {
    case Shape::Circles: {
      const double angle = rng.uniform(0.0, 2.0 * kPi);
      const double radius = negative ? 0.5 : 1.0;
      return {radius * std::cos(angle), radius * std::sin(angle)};
    }
    case Shape::Spiral: {
      // sqrt keeps the density along the arm roughly uniform.
      const double t = std::sqrt(rng.uniform());
      const double theta = 0.5 * kPi + 3.0 * kPi * t;
      const double radius = theta / (3.5 * kPi);
      const double sgn = negative ? 1.0 : -1.0;
      return {sgn * radius * std::cos(theta), sgn * radius * std::sin(theta)};
    }
    case Shape::JainLike: {
      const double angle = rng.uniform(0.0, kPi);
      if (negative) return {std::cos(angle), std::sin(angle)};
      return {1.0 - std::cos(angle), 0.5 - std::sin(angle)};
    }
    case Shape::FlameLike: {
      if (negative) {
        const double angle = rng.uniform(0.0, 2.0 * kPi);
        const double radius = 0.45 * std::sqrt(rng.uniform());
        return {radius * std::cos(angle), 1.0 + radius * std::sin(angle)};
      }
      const double angle = rng.uniform(1.1 * kPi, 1.9 * kPi);
      return {1.8 * std::cos(angle), 1.4 + 1.8 * std::sin(angle)};
    }
  }
  return {0.0, 0.0};
}

}  // namespace

Dataset gen_shape(Shape shape, std::size_t m, double noise, std::uint64_t seed) {
  if (m < 4) throw DataError("gen_shape: need at least 4 instances");
  if (!(noise >= 0.0) || !std::isfinite(noise)) throw DataError("gen_shape: noise must be finite and >= 0");
  const std::size_t m_neg = (m + 1) / 2;

  Rng rng(seed);
  Eigen::MatrixXd x(static_cast<Eigen::Index>(m), 2);
  std::vector<Label> y(m);
  for (std::size_t i = 0; i < m; ++i) {
    const bool negative = i < m_neg;
    Eigen::Vector2d p = sample_point(shape, negative, rng);
    if (noise > 0.0) {
      p(0) += noise * rng.normal();
      p(1) += noise * rng.normal();
    }
    x.row(static_cast<Eigen::Index>(i)) = p.transpose();
    y[i] = negative ? Label::Negative : Label::Positive;
  }
  return Dataset(std::move(x), std::move(y));
}

}  // namespace lcc
