#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include <Eigen/Dense>

#include "lcc/dataset.hpp"

namespace lcc {

/// Two 2-D Gaussian classes; class -1 rows come first.
///
/// Each covariance is symmetrized as (M + M^T)/2 and projected onto the PSD
/// cone by clamping negative eigenvalues to zero before sampling.
Dataset gen_gaussian_pair(const Eigen::Vector2d& mean_neg, const Eigen::Matrix2d& cov_neg,
                          const Eigen::Vector2d& mean_pos, const Eigen::Matrix2d& cov_pos,
                          std::size_t m_per_class, std::uint64_t seed);

/// Symmetrize then clamp eigenvalues at zero.
Eigen::Matrix2d nearest_psd(const Eigen::Matrix2d& m);

/// Parameters of the two-Gaussian demonstration set (class -1 then class +1).
struct GaussianDemo {
  Eigen::Vector2d mean_neg{4.0, 5.0};
  Eigen::Matrix2d cov_neg = (Eigen::Matrix2d() << 0.94, 0.34, -0.34, 3.76).finished();
  Eigen::Vector2d mean_pos{-7.0, -1.0};
  Eigen::Matrix2d cov_pos = (Eigen::Matrix2d() << -2.57, -0.77, 0.767, -0.64).finished();
};

enum class Shape { Circles, Spiral, JainLike, FlameLike };

/// Accepts "circles", "spiral", "jain_like"/"jain", "flame_like"/"flame".
Shape parse_shape(std::string_view name);
std::string_view shape_name(Shape shape);

/// Noise level used when the caller does not pick one; classes stay
/// separable with high probability at this level.
double default_noise(Shape shape);

/// Synthetic 2-D two-class shapes. Class -1 holds ceil(m/2) rows and comes
/// first. `noise` is the std of isotropic Gaussian jitter added to every point.
///
///   circles    - concentric rings, radius 0.5 (class -1) and 1.0 (class +1)
///   spiral     - two interleaved Archimedean arms, 1.5 turns each
///   jain_like  - two offset crescents
///   flame_like - a round blob (class -1) over a bowl-shaped arc (class +1)
Dataset gen_shape(Shape shape, std::size_t m, double noise, std::uint64_t seed);

}  // namespace lcc
