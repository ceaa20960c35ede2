#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "betacurv/kdtree.hpp"

namespace betacurv {

// Closed ball {y : |y - center| <= radius}.
struct Ball {
  Ball(Eigen::VectorXd center_in, double radius_in);
  Eigen::VectorXd center;
  double radius;
};

// Half-open axis-aligned cube {y : lower <= y < lower + side} (per axis).
class CubeRegion {
 public:
  CubeRegion(Eigen::VectorXd lower, double side);

  const Eigen::VectorXd& lower() const { return lower_; }
  double side() const { return side_; }
  Eigen::VectorXd upper() const { return lower_.array() + side_; }
  Eigen::VectorXd center() const { return lower_.array() + 0.5 * side_; }
  int ambient_dim() const { return static_cast<int>(lower_.size()); }

  bool contains(const Eigen::VectorXd& y) const;

  // Concentric scaling: same center, side length factor * side().
  CubeRegion expanded(double factor) const;

 private:
  Eigen::VectorXd lower_;
  double side_;
};

// Dyadic cube 2^-level * (corner + [0,1)^n). Side lengths are exact powers of
// two, so membership tests are exact for any representable corner.
class DyadicCube {
 public:
  DyadicCube(int level, std::vector<std::int64_t> corner);

  int level() const { return level_; }
  const std::vector<std::int64_t>& corner() const { return corner_; }
  int ambient_dim() const { return static_cast<int>(corner_.size()); }
  double side() const { return std::ldexp(1.0, -level_); }

  Eigen::VectorXd lower() const;
  Eigen::VectorXd center() const;
  bool contains(const Eigen::VectorXd& y) const;
  CubeRegion region() const;

  // The level-`level` cube containing the point.
  static DyadicCube containing(const Eigen::VectorXd& point, int level);

  bool operator==(const DyadicCube& other) const {
    return level_ == other.level_ && corner_ == other.corner_;
  }

 private:
  int level_;
  std::vector<std::int64_t> corner_;
};

// Finite atomic measure sum_i w_i * delta(y_i) with nonnegative weights.
// Atom order is part of the value: restrictions preserve it and every
// accumulation runs in this order, so results are reproducible.
class PointCloudMeasure {
 public:
  PointCloudMeasure(Eigen::MatrixXd positions, Eigen::VectorXd weights);

  // The spatial index points into positions_, so copies and moves must
  // re-aim it at the destination's matrix.
  PointCloudMeasure(const PointCloudMeasure& other);
  PointCloudMeasure(PointCloudMeasure&& other) noexcept;
  PointCloudMeasure& operator=(const PointCloudMeasure& other);
  PointCloudMeasure& operator=(PointCloudMeasure&& other) noexcept;

  static PointCloudMeasure empty(int ambient_dim);

  int ambient_dim() const { return static_cast<int>(positions_.rows()); }
  int atom_count() const { return static_cast<int>(positions_.cols()); }
  double total_mass() const { return total_mass_; }

  const Eigen::MatrixXd& positions() const { return positions_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  Eigen::Ref<const Eigen::VectorXd> position(int i) const { return positions_.col(i); }
  double weight(int i) const { return weights_[i]; }

  // Indices of atoms inside the region, ascending (original atom order).
  std::vector<int> ball_indices(const Ball& ball) const;
  std::vector<int> cube_indices(const CubeRegion& cube) const;
  std::vector<int> cube_indices(const DyadicCube& cube) const;

  PointCloudMeasure restrict_to(std::span<const int> indices) const;

  double mass_of(std::span<const int> indices) const;
  double mass_in(const Ball& ball) const;
  double mass_in(const CubeRegion& cube) const;
  double mass_in(const DyadicCube& cube) const;

 private:
  Eigen::MatrixXd positions_;  // ambient_dim x atom_count, column per atom
  Eigen::VectorXd weights_;
  double total_mass_ = 0.0;
  KdTree index_;
};

PointCloudMeasure ball_restrict(const PointCloudMeasure& mu, const Ball& ball);
PointCloudMeasure cube_restrict(const PointCloudMeasure& mu, const CubeRegion& cube);
PointCloudMeasure cube_restrict(const PointCloudMeasure& mu, const DyadicCube& cube);

// m-dimensional density mu(B(x,r)) / (omega_m r^m), omega_m the unit m-ball
// volume. Zero when the ball holds no atoms.
double theta_ball(const PointCloudMeasure& mu, const Eigen::VectorXd& x, double r, int m);

// Cube variant mu(Q) / side^m (no volume normalization).
double theta_cube(const PointCloudMeasure& mu, const DyadicCube& cube, int m);

// All level-k dyadic cubes holding at least one atom, sorted by corner.
std::vector<DyadicCube> dyadic_cubes_touching(const PointCloudMeasure& mu, int level);

// Concentric enlargement of a dyadic cube (factor 3 gives the usual 3Q).
CubeRegion expand_cube(const DyadicCube& cube, double factor);

// y -> scale * rotation * y + translation, weights scaled by
// scale^weight_exponent. rotation must be orthogonal to 1e-12.
PointCloudMeasure similarity_transform(const PointCloudMeasure& mu, double scale,
                                       const Eigen::MatrixXd& rotation,
                                       const Eigen::VectorXd& translation,
                                       double weight_exponent);

}  // namespace betacurv
