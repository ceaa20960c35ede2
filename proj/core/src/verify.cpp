#include "betacurv/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/QR>

#include "betacurv/affine.hpp"
#include "betacurv/numeric.hpp"
#include "betacurv/rng.hpp"

namespace betacurv {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_multiscale(const MultiscaleParams& params, int ambient_dim) {
  if (params.m <= 0 || params.m >= ambient_dim)
    throw std::invalid_argument("multiscale: need 0 < m < ambient dimension");
  if (!(params.p >= 1.0) || !std::isfinite(params.p))
    throw std::invalid_argument("multiscale: p must be finite and >= 1");
  if (!(params.q >= 1.0) || !(params.q <= params.p))
    throw std::invalid_argument("multiscale: q must satisfy 1 <= q <= p");
  if (!(params.gamma >= 0.0) || !std::isfinite(params.gamma))
    throw std::invalid_argument("multiscale: gamma must be finite and >= 0");
  if (!(params.alpha >= 0.0) || !(params.alpha <= 1.0))
    throw std::invalid_argument("multiscale: alpha must lie in [0, 1]");
  if (std::isnan(params.rho) || params.rho <= 0.0)
    throw std::invalid_argument("multiscale: rho must be positive");
}

// int_a^b r^e dr with the log branch and a convergent infinite tail.
double power_integral(double a, double b, double e) {
  const double ep1 = e + 1.0;
  if (std::isinf(b)) {
    if (ep1 >= 0.0) throw std::invalid_argument("multiscale: divergent tail integral");
    return -std::pow(a, ep1) / ep1;
  }
  if (ep1 == 0.0) return std::log(b / a);
  return (std::pow(b, ep1) - std::pow(a, ep1)) / ep1;
}

VerificationReport finalize(VerificationReport report) {
  if (report.rhs == 0.0) {
    report.pass = report.lhs == 0.0;
    report.ratio = report.pass ? 0.0 : kInf;
  } else {
    report.pass = report.lhs <= report.rhs * (1.0 + kVerifyRelTol);
    report.ratio = report.lhs / report.rhs;
  }
  return report;
}

// Closed membership in the concentric enlargement; boundary atoms count, so
// the right side can only grow.
bool in_closed_cube(const CubeRegion& cube, const Eigen::VectorXd& y) {
  for (Eigen::Index a = 0; a < y.size(); ++a) {
    if (!(y[a] >= cube.lower()[a] && y[a] <= cube.lower()[a] + cube.side())) return false;
  }
  return true;
}

}  // namespace

double gamma_lemma1(int m, double p, double alpha) {
  if (m <= 0) throw std::invalid_argument("gamma_lemma1: m must be positive");
  if (!(p >= 1.0) || !(alpha >= 0.0))
    throw std::invalid_argument("gamma_lemma1: need p >= 1 and alpha >= 0");
  const double md = static_cast<double>(m);
  return 2.0 * (md + 1.0) * (md + 2.0) * std::pow(unit_ball_volume(m), md) *
         std::pow(4.0, md + (1.0 + alpha) * p + md * md + 1.0);
}

Lemma2Constants gamma_lemma2(int n, int m, double p, double q, double alpha, double gamma) {
  if (m <= 0 || n <= m) throw std::invalid_argument("gamma_lemma2: need 0 < m < n");
  if (!(q >= 1.0) || !(q <= p))
    throw std::invalid_argument("gamma_lemma2: need 1 <= q <= p");
  if (!(alpha >= 0.0) || !(gamma >= 0.0))
    throw std::invalid_argument("gamma_lemma2: need alpha >= 0 and gamma >= 0");
  const double md = static_cast<double>(m);
  const double exponent = gamma * md + alpha * q + md * q / p + q;
  Lemma2Constants c;
  c.delta1 = std::pow(6.0, q + md * q / p + gamma * md) * std::pow(2.0, 2.0 + alpha * q);
  c.delta2 = std::pow(3.0, n) * std::pow(2.0 * std::sqrt(static_cast<double>(n)), exponent) /
             std::log(2.0);
  c.product = c.delta1 * c.delta2;
  return c;
}

std::vector<ScaleRow> multiscale_breakdown(const ScaleProfile& profile,
                                           const MultiscaleParams& params) {
  validate_multiscale(params, static_cast<int>(profile.center().size()));
  if (profile.params().m != params.m || profile.params().p != params.p ||
      profile.params().centred != params.centred)
    throw std::invalid_argument("multiscale: profile was built with different beta parameters");
  if (params.rho > profile.rho())
    throw std::invalid_argument("multiscale: profile does not reach rho");

  const double md = static_cast<double>(params.m);
  const double exponent =
      -(params.gamma * md + params.q + md * params.q / params.p + params.alpha * params.q) - 1.0;
  const double omega = unit_ball_volume(params.m);

  std::vector<ScaleRow> rows;
  rows.reserve(profile.intervals().size());
  for (const ScaleInterval& iv : profile.intervals()) {
    if (iv.r_lo >= params.rho) break;
    const double hi = std::min(iv.r_hi, params.rho);
    ScaleRow row{iv.r_lo, hi, iv.mass, iv.beta_numerator, 0.0};
    if (iv.beta_numerator > 0.0) {
      const double coeff = std::pow(iv.mass / omega, params.gamma) *
                           std::pow(iv.beta_numerator, params.q / params.p);
      row.contribution = coeff * power_integral(iv.r_lo, hi, exponent);
    }
    rows.push_back(row);
  }
  return rows;
}

double multiscale_integral(const ScaleProfile& profile, const MultiscaleParams& params) {
  KahanSum acc;
  for (const ScaleRow& row : multiscale_breakdown(profile, params)) acc.add(row.contribution);
  return acc.value();
}

double multiscale_integral(const PointCloudMeasure& mu, const Eigen::VectorXd& x,
                           const MultiscaleParams& params) {
  validate_multiscale(params, mu.ambient_dim());
  const ScaleProfile profile =
      scale_profile(mu, x, params.rho, BetaParams{params.m, params.p, params.centred});
  return multiscale_integral(profile, params);
}

VerificationReport verify_lemma1(const PointCloudMeasure& mu, const Eigen::VectorXd& x,
                                 double R, int m, double p, double alpha, double budget) {
  const CurvatureParams cp{m, p, alpha, R};
  const CurvatureEstimate k = curvature_exact(mu, x, cp, budget);

  MultiscaleParams ms;
  ms.m = m;
  ms.p = p;
  ms.q = p;
  ms.gamma = static_cast<double>(m);
  ms.alpha = alpha;
  ms.rho = 2.0 * R;
  ms.centred = true;
  const ScaleProfile profile = scale_profile(mu, x, ms.rho, BetaParams{m, p, true});

  VerificationReport report;
  report.name = "lemma1";
  report.scale_rows = multiscale_breakdown(profile, ms);
  KahanSum integral;
  for (const ScaleRow& row : report.scale_rows) integral.add(row.contribution);

  report.lhs = k.value;
  report.constant = gamma_lemma1(m, p, alpha);
  report.rhs = report.constant * integral.value();
  report.params = {{"m", static_cast<double>(m)}, {"p", p},     {"alpha", alpha},
                   {"R", R},                      {"rho", ms.rho},
                   {"terms", static_cast<double>(k.terms)}};
  return finalize(std::move(report));
}

VerificationReport verify_lemma2(const PointCloudMeasure& mu, const DyadicCube& q_cube,
                                 double rho, const MultiscaleParams& params) {
  if (!std::isfinite(rho) || rho <= 0.0)
    throw std::invalid_argument("verify_lemma2: rho must be positive and finite");
  const int n = mu.ambient_dim();
  MultiscaleParams lhs_params = params;
  lhs_params.rho = rho;
  lhs_params.centred = true;
  validate_multiscale(lhs_params, n);

  MultiscaleParams rhs_params = lhs_params;
  rhs_params.rho = 12.0 * rho * std::sqrt(static_cast<double>(n));
  rhs_params.centred = false;

  const Lemma2Constants constants =
      gamma_lemma2(n, params.m, params.p, params.q, params.alpha, params.gamma);
  const CubeRegion triple = q_cube.region().expanded(3.0);

  VerificationReport report;
  report.name = "lemma2";
  KahanSum lhs_sum;
  KahanSum rhs_sum;
  for (int i = 0; i < mu.atom_count(); ++i) {
    const Eigen::VectorXd pos = mu.positions().col(i);
    const double w = mu.weights()[i];
    AtomRow row{i, w, 0.0, 0.0};
    if (q_cube.contains(pos)) {
      row.lhs_term = w * multiscale_integral(mu, pos, lhs_params);
      lhs_sum.add(row.lhs_term);
    }
    if (in_closed_cube(triple, pos)) {
      row.rhs_term = w * multiscale_integral(mu, pos, rhs_params);
      rhs_sum.add(row.rhs_term);
    }
    if (row.lhs_term != 0.0 || row.rhs_term != 0.0 || q_cube.contains(pos))
      report.atom_rows.push_back(row);
  }

  report.lhs = lhs_sum.value();
  report.constant = constants.product;
  report.rhs = report.constant * rhs_sum.value();
  report.params = {{"n", static_cast<double>(n)},
                   {"m", static_cast<double>(params.m)},
                   {"p", params.p},
                   {"q", params.q},
                   {"gamma", params.gamma},
                   {"alpha", params.alpha},
                   {"rho", rho},
                   {"rhs_rho", rhs_params.rho},
                   {"delta1", constants.delta1},
                   {"delta2", constants.delta2},
                   {"cube_level", static_cast<double>(q_cube.level())}};
  return finalize(std::move(report));
}

VerificationReport verify_corollary_lw11(const PointCloudMeasure& mu,
                                         const DyadicCube& q_cube, double R, int m,
                                         double p, double alpha, double budget) {
  if (!std::isfinite(R) || R <= 0.0)
    throw std::invalid_argument("verify_corollary_lw11: R must be positive and finite");
  const int n = mu.ambient_dim();
  const CurvatureParams cp{m, p, alpha, R};

  MultiscaleParams ms;
  ms.m = m;
  ms.p = p;
  ms.q = p;
  ms.gamma = static_cast<double>(m);
  ms.alpha = alpha;
  ms.rho = 24.0 * R * std::sqrt(static_cast<double>(n));
  ms.centred = false;
  validate_multiscale(ms, n);

  const double g1 = gamma_lemma1(m, p, alpha);
  const Lemma2Constants g2 = gamma_lemma2(n, m, p, p, alpha, static_cast<double>(m));
  const CubeRegion triple = q_cube.region().expanded(3.0);

  VerificationReport report;
  report.name = "corollary_lw11";
  KahanSum lhs_sum;
  KahanSum rhs_sum;
  for (int i = 0; i < mu.atom_count(); ++i) {
    const Eigen::VectorXd pos = mu.positions().col(i);
    const double w = mu.weights()[i];
    AtomRow row{i, w, 0.0, 0.0};
    if (q_cube.contains(pos)) {
      row.lhs_term = w * curvature_exact(mu, pos, cp, budget).value;
      lhs_sum.add(row.lhs_term);
    }
    if (in_closed_cube(triple, pos)) {
      row.rhs_term = w * multiscale_integral(mu, pos, ms);
      rhs_sum.add(row.rhs_term);
    }
    if (row.lhs_term != 0.0 || row.rhs_term != 0.0 || q_cube.contains(pos))
      report.atom_rows.push_back(row);
  }

  report.lhs = lhs_sum.value();
  report.constant = g1 * g2.product;
  report.rhs = report.constant * rhs_sum.value();
  report.params = {{"n", static_cast<double>(n)},
                   {"m", static_cast<double>(m)},
                   {"p", p},
                   {"alpha", alpha},
                   {"R", R},
                   {"rhs_rho", ms.rho},
                   {"gamma1", g1},
                   {"gamma2", g2.product},
                   {"cube_level", static_cast<double>(q_cube.level())}};
  return finalize(std::move(report));
}

namespace {

Eigen::MatrixXd random_orthonormal(SplitMix64& rng, int n, int m) {
  while (true) {
    Eigen::MatrixXd g(n, m);
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < n; ++i) g(i, j) = rng.normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    const Eigen::MatrixXd r = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
    bool ok = true;
    for (int j = 0; j < m; ++j) ok = ok && std::abs(r(j, j)) > 1.0e-12;
    if (!ok) continue;
    return qr.householderQ() * Eigen::MatrixXd::Identity(n, m);
  }
}

Eigen::VectorXd random_point(SplitMix64& rng, int n, double halfwidth) {
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) y[i] = halfwidth * (2.0 * rng.uniform() - 1.0);
  return y;
}

struct WorstRatio {
  double worst = 0.0;
  std::uint64_t violations = 0;

  void observe(double lhs, double rhs) {
    double ratio;
    if (rhs == 0.0) {
      ratio = lhs == 0.0 ? 0.0 : kInf;
    } else {
      ratio = lhs / rhs;
    }
    worst = std::max(worst, ratio);
    if (ratio > 1.0 + kVerifyRelTol) ++violations;
  }
};

}  // namespace

VerificationReport verify_pointwise_bounds(std::uint64_t samples, std::uint64_t seed) {
  if (samples == 0)
    throw std::invalid_argument("verify_pointwise_bounds: need at least one sample");
  SplitMix64 rng(seed);
  WorstRatio height;
  WorstRatio diameter;
  WorstRatio beta_growth;
  WorstRatio density_growth;

  for (std::uint64_t trial = 0; trial < samples; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(2));
    const int m = 1 + static_cast<int>(n == 3 ? rng.below(2) : 0);

    Eigen::MatrixXd tuple(n, m + 2);
    for (int j = 0; j < m + 2; ++j) tuple.col(j) = random_point(rng, n, 1.5);
    if (trial % 97 == 1) tuple.col(1) = tuple.col(0);  // degenerate tuples must hold too
    const AffinePlane plane(random_point(rng, n, 1.5), random_orthonormal(rng, n, m));

    double max_dist = 0.0;
    double max_from_first = 0.0;
    for (int j = 0; j < m + 2; ++j) {
      max_dist = std::max(max_dist, plane.distance_to(tuple.col(j)));
      max_from_first = std::max(max_from_first, (tuple.col(j) - tuple.col(0)).norm());
    }
    height.observe(h_min(tuple, m), 2.0 * (m + 2) * max_dist);
    diameter.observe(max_from_first, diam(tuple));

    const int count = 3 + static_cast<int>(rng.below(8));
    Eigen::MatrixXd positions(n, count);
    Eigen::VectorXd weights(count);
    for (int i = 0; i < count; ++i) {
      positions.col(i) = random_point(rng, n, 1.5);
      weights[i] = 2.0 * rng.uniform_open();
    }
    const PointCloudMeasure mu(positions, weights);
    const Eigen::VectorXd x =
        rng.below(2) == 0 ? Eigen::VectorXd(positions.col(0)) : random_point(rng, n, 1.5);

    const double s = 0.5 + 1.5 * rng.uniform();
    const double t = trial % 89 == 1 ? s : s * (0.5 + 0.5 * rng.uniform());
    const double p = 1.0 + static_cast<double>(rng.below(3));
    const BetaParams bp{m, p, false};
    const AffinePlane fixed(random_point(rng, n, 1.5), random_orthonormal(rng, n, m));

    const double beta_t = beta_given_plane(mu, x, t, fixed, bp);
    const double beta_s = beta_given_plane(mu, x, s, fixed, bp);
    beta_growth.observe(std::pow(beta_t, p),
                        std::pow(s / t, m + p) * std::pow(beta_s, p));

    // The optimal-plane variant inherits the same growth bound.
    const BetaParams opt{m, 2.0, false};
    beta_growth.observe(std::pow(beta_ball(mu, x, t, opt).value, 2.0),
                        std::pow(s / t, m + 2.0) * std::pow(beta_ball(mu, x, s, opt).value, 2.0));

    density_growth.observe(theta_ball(mu, x, t, m),
                           std::pow(s / t, m) * theta_ball(mu, x, s, m));
  }

  VerificationReport report;
  report.name = "pointwise_bounds";
  report.lhs = std::max({height.worst, diameter.worst, beta_growth.worst,
                         density_growth.worst});
  report.rhs = 1.0;
  report.constant = 1.0;
  report.params = {
      {"samples", static_cast<double>(samples)},
      {"seed", static_cast<double>(seed)},
      {"worst_height_ratio", height.worst},
      {"worst_diameter_ratio", diameter.worst},
      {"worst_beta_ratio", beta_growth.worst},
      {"worst_density_ratio", density_growth.worst},
      {"violations", static_cast<double>(height.violations + diameter.violations +
                                         beta_growth.violations + density_growth.violations)}};
  return finalize(std::move(report));
}

}  // namespace betacurv
