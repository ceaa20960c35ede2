#pragma once

#include <optional>
#include <span>
#include <vector>

#include "betacurv/affine.hpp"
#include "betacurv/measure.hpp"

namespace betacurv {

struct BetaParams {
  int m = 1;           // plane dimension, 0 < m < ambient dim
  double p = 2.0;      // moment exponent, p >= 1
  bool centred = false;  // restrict competitor planes to pass through x
};

// beta_{mu,p}(x, r, L) = (1/r) * (r^-m * integral over the closed ball of
// dist(y, L)^p dmu)^(1/p). Zero when the ball holds no atoms. This is the
// fixed-plane value; beta_ball optimizes over planes.
double beta_given_plane(const PointCloudMeasure& mu, const Eigen::VectorXd& x, double r,
                        const AffinePlane& plane, const BetaParams& params);

// Cube variant with the side length in place of the radius.
double beta_cube_given_plane(const PointCloudMeasure& mu, const CubeRegion& cube,
                             const AffinePlane& plane, const BetaParams& params);

struct PlaneFit {
  AffinePlane plane;
  double residual;  // min over planes of sum_i w_i dist(y_i, plane)^2
};

// Weighted least squares m-plane. Unconstrained fits go through the weighted
// centroid with the covariance's top eigenvectors; fits through a prescribed
// point use second moments about that point. The residual is the sum of the
// n-m smallest eigenvalues, which is the exact optimum for p = 2.
PlaneFit best_plane_l2(const PointCloudMeasure& mu, int m,
                       const std::optional<Eigen::VectorXd>& through = std::nullopt);
PlaneFit best_plane_l2(const PointCloudMeasure& mu, std::span<const int> indices, int m,
                       const std::optional<Eigen::VectorXd>& through = std::nullopt);

struct BetaValue {
  double value;
  bool exact;  // true when the plane infimum is attained exactly (p = 2, or empty)
};

// Optimal-plane beta number over the closed ball B(x, r). p = 2 is solved
// exactly; other p run iteratively reweighted least squares and report an
// upper bound on the infimum with exact = false.
BetaValue beta_ball(const PointCloudMeasure& mu, const Eigen::VectorXd& x, double r,
                    const BetaParams& params);

struct CubeBeta {
  double value;
  bool exact;
  AffinePlane plane;  // minimizing plane; for empty cubes, axes through the center
};

CubeBeta beta_cube(const PointCloudMeasure& mu, const CubeRegion& cube,
                   const BetaParams& params);
CubeBeta beta_cube(const PointCloudMeasure& mu, const DyadicCube& cube,
                   const BetaParams& params);

// One radius range on which the ball around the profile center holds a fixed
// atom set: mass and the beta numerator C = inf_L sum w dist^p are constant,
// so beta(x,r)^p = C * r^(-p-m) exactly on [r_lo, r_hi).
struct ScaleInterval {
  double r_lo;
  double r_hi;
  double mass;
  double beta_numerator;
  bool exact;
};

// Piecewise description of r -> (mass, beta numerator) on (0, rho]. The
// breakpoints are the distinct atom distances from the center; intervals
// cover (0, rho] in order with no gaps.
class ScaleProfile {
 public:
  ScaleProfile(Eigen::VectorXd center, BetaParams params, double rho,
               std::vector<double> breakpoints, std::vector<ScaleInterval> intervals);

  const Eigen::VectorXd& center() const { return center_; }
  const BetaParams& params() const { return params_; }
  double rho() const { return rho_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<ScaleInterval>& intervals() const { return intervals_; }

  const ScaleInterval& interval_at(double r) const;
  double mass_at(double r) const;
  double beta_numerator_at(double r) const;
  double theta_at(double r) const;  // density with the profile's m
  double beta_at(double r) const;

 private:
  Eigen::VectorXd center_;
  BetaParams params_;
  double rho_;
  std::vector<double> breakpoints_;
  std::vector<ScaleInterval> intervals_;
};

// Build the profile for radii in (0, rho]; rho may be infinite.
ScaleProfile scale_profile(const PointCloudMeasure& mu, const Eigen::VectorXd& x, double rho,
                           const BetaParams& params);

}  // namespace betacurv
