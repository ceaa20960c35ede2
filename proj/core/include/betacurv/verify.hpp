#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "betacurv/beta.hpp"
#include "betacurv/curvature.hpp"
#include "betacurv/measure.hpp"

namespace betacurv {

// Parameters of the multiscale integral
//   int_0^rho Theta(x,r)^gamma * beta_{m,p}(x,r)^q * r^(-alpha q) dr / r.
struct MultiscaleParams {
  int m = 1;            // plane dimension, 0 < m < ambient dim
  double p = 2.0;       // beta moment exponent, p >= 1
  double q = 2.0;       // beta power in the integrand, 1 <= q <= p
  double gamma = 0.0;   // density exponent, >= 0
  double alpha = 0.0;   // scale weight exponent, in [0, 1]
  double rho = 1.0;     // upper integration limit, may be infinite
  bool centred = false;
};

// Constant of the pointwise curvature bound:
// 2(m+1)(m+2) * omega_m^m * 4^(m + (1+alpha)p + m^2 + 1).
double gamma_lemma1(int m, double p, double alpha);

struct Lemma2Constants {
  double delta1;
  double delta2;
  double product;
};

// Constants of the centred-to-plain transfer bound:
// delta1 = 6^(q + mq/p + gamma m) * 2^(2 + alpha q),
// delta2 = 3^n * (2 sqrt n)^(gamma m + alpha q + mq/p + q) / ln 2.
Lemma2Constants gamma_lemma2(int n, int m, double p, double q, double alpha, double gamma);

// One radius interval of a multiscale integral with its closed-form value.
struct ScaleRow {
  double r_lo;
  double r_hi;
  double mass;
  double beta_numerator;
  double contribution;
};

// Per-interval contributions on (0, params.rho]; their sum is the integral.
// The profile must match params in m, p, centred and reach at least rho.
std::vector<ScaleRow> multiscale_breakdown(const ScaleProfile& profile,
                                           const MultiscaleParams& params);

// Exact value of the multiscale integral: on each interval the integrand is
// the power function (M/omega_m)^gamma * C^(q/p) * r^e, integrated in closed
// form (with the log branch when e = -1). Intervals with beta numerator 0
// contribute 0, which also covers the radii below the first atom distance.
double multiscale_integral(const ScaleProfile& profile, const MultiscaleParams& params);
double multiscale_integral(const PointCloudMeasure& mu, const Eigen::VectorXd& x,
                           const MultiscaleParams& params);

// Relative slack granted to the right side when deciding pass/fail.
inline constexpr double kVerifyRelTol = 1.0e-9;

// Per-atom diagnostic for cube-integrated verifications. Terms are weighted
// and exclude the multiplicative constant; atoms outside the respective
// region carry 0.
struct AtomRow {
  int atom;
  double weight;
  double lhs_term;
  double rhs_term;
};

struct VerificationReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;       // includes the constant factor
  double constant = 1.0;
  double ratio = 0.0;     // lhs / rhs, 0 when both sides vanish
  bool pass = false;
  std::vector<std::pair<std::string, double>> params;
  std::vector<ScaleRow> scale_rows;
  std::vector<AtomRow> atom_rows;
};

// Pointwise bound at x: curvature K(x, R) against
// gamma_lemma1 * int_0^2R Theta^m * (centred beta)^p * r^(-alpha p) dr / r.
VerificationReport verify_lemma1(const PointCloudMeasure& mu, const Eigen::VectorXd& x,
                                 double R, int m, double p, double alpha,
                                 double budget = 1.0e8);

// Cube-integrated transfer bound: the weighted sum over atoms in Q of the
// centred integral to rho against gamma_lemma2.product times the weighted
// sum over atoms in the closed 3Q of the plain integral to 12 rho sqrt(n).
// params supplies m, p, q, gamma, alpha; its rho and centred are ignored.
VerificationReport verify_lemma2(const PointCloudMeasure& mu, const DyadicCube& q_cube,
                                 double rho, const MultiscaleParams& params);

// Combined bound: weighted curvature over atoms in Q against the product of
// both constants times plain multiscale integrals to 24 R sqrt(n) over 3Q.
VerificationReport verify_corollary_lw11(const PointCloudMeasure& mu,
                                         const DyadicCube& q_cube, double R, int m,
                                         double p, double alpha, double budget = 1.0e8);

// Randomized check of four elementary bounds: the minimal height against
// 2(m+2) max dist(x_i, L), the diameter against max |x_i - x_0|, and the
// (s/t)^(m+p) and (s/t)^m growth bounds for fixed-plane beta and density.
// lhs is the worst lhs/rhs ratio seen, compared against 1.
VerificationReport verify_pointwise_bounds(std::uint64_t samples, std::uint64_t seed);

}  // namespace betacurv
