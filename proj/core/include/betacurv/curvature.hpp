#pragma once

#include <cstdint>
#include <limits>
#include <span>

#include "betacurv/measure.hpp"

namespace betacurv {

struct CurvatureParams {
  int m = 1;        // plane dimension, 0 < m < ambient dim
  double p = 2.0;   // moment exponent, p >= 1
  double alpha = 0.0;
  double radius = std::numeric_limits<double>::infinity();  // R, may be infinite
};

// Integrand of the pointwise curvature functional on an (m+2)-point tuple:
// h_min^p / diam^(m(m+1) + (1+alpha)p). Degenerate tuples (zero diameter or
// a vertex inside the hull of the rest) contribute exactly 0.
double k_integrand(const Eigen::MatrixXd& tuple, const CurvatureParams& params);
double k_integrand(std::span<const Eigen::VectorXd> tuple, const CurvatureParams& params);

struct CurvatureEstimate {
  double value;
  double std_error;        // 0 for exact evaluation
  std::uint64_t terms;     // tuples enumerated, or Monte Carlo samples
  bool exact;
};

// K^alpha_{mu,p}(x, R): the first tuple point is pinned at x, the remaining
// m+1 integrate over atoms of the closed ball B(x, R). Exact enumeration of
// all ordered tuples (repeats included, they contribute 0), refused with
// BudgetError when the tuple count would exceed `budget`.
CurvatureEstimate curvature_exact(const PointCloudMeasure& mu, const Eigen::VectorXd& x,
                                  const CurvatureParams& params, double budget = 1.0e8);

// Inner integral of the layered representation: ordered m-tuples z with
// |z_j - x| <= |y - x| of k_integrand(x, y, z_1..z_m). The comparison uses
// squared distances, matching the ball membership predicate exactly.
double e_integrand(const PointCloudMeasure& mu, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& y, const CurvatureParams& params);

// Monte Carlo estimate: m+1 iid atom draws proportional to weight per
// sample, scaled by (ball mass)^(m+1). Deterministic for a fixed seed.
CurvatureEstimate curvature_mc(const PointCloudMeasure& mu, const Eigen::VectorXd& x,
                               const CurvatureParams& params, std::uint64_t samples,
                               std::uint64_t seed);

// Global Menger-type energy: sum over ordered (m+2)-tuples of
// (simplex volume / diam^(m+1))^p / diam^p, weights multiplied through.
double m_p_functional(const PointCloudMeasure& mu, double p, int m, double budget = 1.0e8);

}  // namespace betacurv
