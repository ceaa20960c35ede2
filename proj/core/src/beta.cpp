#include "betacurv/beta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "betacurv/kdtree.hpp"
#include "betacurv/numeric.hpp"

namespace betacurv {

namespace {

void require(bool condition, const char* message) {
  if (!condition) throw std::invalid_argument(message);
}

void validate_params(const BetaParams& params, int ambient_dim) {
  require(params.m > 0 && params.m < ambient_dim,
          "beta: need 0 < m < ambient dimension");
  require(std::isfinite(params.p) && params.p >= 1.0, "beta: need finite p >= 1");
}

// Shared normalization: beta = (1/s) * (s^-m * numerator)^(1/p) where s is
// the radius or the cube side. Every path producing a beta value goes
// through here so closed-form and direct evaluations agree bit for bit.
double beta_from_numerator(double numerator, double s, int m, double p) {
  if (numerator <= 0.0) return 0.0;
  return (1.0 / s) * std::pow(numerator / std::pow(s, m), 1.0 / p);
}

double moment_sum(const PointCloudMeasure& mu, std::span<const int> idx,
                  const AffinePlane& plane, double p) {
  KahanSum sum;
  for (int i : idx) {
    const double w = mu.weight(i);
    if (w == 0.0) continue;
    const double dist = plane.distance_to(mu.position(i));
    if (dist == 0.0) continue;
    sum.add(w * std::pow(dist, p));
  }
  return sum.value();
}

// Weighted least squares fit over a selection, optionally with override
// weights (the IRLS loop) and optionally constrained through a point.
PlaneFit fit_l2(const PointCloudMeasure& mu, std::span<const int> idx,
                const std::vector<double>* override_w, int m,
                const std::optional<Eigen::VectorXd>& through) {
  const int n = mu.ambient_dim();
  require(!idx.empty(), "best_plane_l2: empty input");
  if (through) require(through->size() == n, "best_plane_l2: through-point dimension mismatch");

  const auto weight = [&](std::size_t k) {
    return override_w ? (*override_w)[k] : mu.weight(idx[k]);
  };

  Eigen::VectorXd origin;
  if (through) {
    origin = *through;
  } else {
    // Weighted centroid, then moments about it (two passes for accuracy).
    KahanSum total;
    std::vector<KahanSum> coord(static_cast<std::size_t>(n));
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const double w = weight(k);
      total.add(w);
      const auto y = mu.position(idx[k]);
      for (int d = 0; d < n; ++d) coord[static_cast<std::size_t>(d)].add(w * y[d]);
    }
    const double mass = total.value();
    if (mass <= 0.0) {
      // All-zero weights: every plane is optimal.
      return PlaneFit{AffinePlane::span_axes(mu.position(idx[0]), m), 0.0};
    }
    origin.resize(n);
    for (int d = 0; d < n; ++d) origin[d] = coord[static_cast<std::size_t>(d)].value() / mass;
  }

  std::vector<KahanSum> moments(static_cast<std::size_t>(n * n));
  Eigen::VectorXd diff(n);
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const double w = weight(k);
    if (w == 0.0) continue;
    diff = mu.position(idx[k]) - origin;
    for (int a = 0; a < n; ++a) {
      for (int b = a; b < n; ++b) {
        moments[static_cast<std::size_t>(a * n + b)].add(w * diff[a] * diff[b]);
      }
    }
  }
  Eigen::MatrixXd second(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      const double v = moments[static_cast<std::size_t>(a * n + b)].value();
      second(a, b) = v;
      second(b, a) = v;
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(second);
  require(eig.info() == Eigen::Success, "best_plane_l2: eigensolver failed");
  // Eigenvalues ascending: the plane keeps the top m directions, the
  // residual is what the discarded directions carry. A computed eigenvalue
  // below the solver's own noise level carries no information, so it counts
  // as exactly zero; otherwise a two-atom ball reports a residual of 1e-18
  // at one radius and 0 at another, growth ratios blow up, and rigid motions
  // stop being exact symmetries of the zero set.
  const double top = std::max(eig.eigenvalues()[n - 1], 0.0);
  const double noise_floor =
      64.0 * static_cast<double>(n) * std::numeric_limits<double>::epsilon() * top;
  KahanSum residual;
  for (int d = 0; d < n - m; ++d) {
    const double lambda = eig.eigenvalues()[d];
    if (lambda > noise_floor) residual.add(lambda);
  }
  return PlaneFit{AffinePlane(origin, eig.eigenvectors().rightCols(m)),
                  residual.value()};
}

struct IrlsResult {
  AffinePlane plane;
  double objective;  // sum w dist^p at `plane`
};

// Iteratively reweighted least squares for p != 2. Upper bound on the
// infimum: we track the best true objective over all iterates, so the
// returned value is always attained by a concrete plane.
IrlsResult irls_fit(const PointCloudMeasure& mu, std::span<const int> idx, int m, double p,
                    const std::optional<Eigen::VectorXd>& through) {
  constexpr double kDistFloor = 1.0e-12;
  constexpr double kRelTol = 1.0e-10;
  constexpr int kMaxIter = 200;

  PlaneFit fit = fit_l2(mu, idx, nullptr, m, through);
  AffinePlane plane = fit.plane;
  double objective = moment_sum(mu, idx, plane, p);
  AffinePlane best_plane = plane;
  double best_objective = objective;

  std::vector<double> reweights(idx.size());
  for (int iter = 0; iter < kMaxIter; ++iter) {
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const double dist = std::max(plane.distance_to(mu.position(idx[k])), kDistFloor);
      reweights[k] = mu.weight(idx[k]) * std::pow(dist, p - 2.0);
    }
    plane = fit_l2(mu, idx, &reweights, m, through).plane;
    const double next = moment_sum(mu, idx, plane, p);
    if (next < best_objective) {
      best_objective = next;
      best_plane = plane;
    }
    if (std::abs(next - objective) <= kRelTol * std::max(objective, 1.0e-300)) break;
    objective = next;
  }
  return IrlsResult{best_plane, best_objective};
}

}  // namespace

double beta_given_plane(const PointCloudMeasure& mu, const Eigen::VectorXd& x, double r,
                        const AffinePlane& plane, const BetaParams& params) {
  validate_params(params, mu.ambient_dim());
  require(plane.dim() == params.m, "beta_given_plane: plane dimension != m");
  require(plane.ambient_dim() == mu.ambient_dim(), "beta_given_plane: dimension mismatch");
  const auto idx = mu.ball_indices(Ball(x, r));
  return beta_from_numerator(moment_sum(mu, idx, plane, params.p), r, params.m, params.p);
}

double beta_cube_given_plane(const PointCloudMeasure& mu, const CubeRegion& cube,
                             const AffinePlane& plane, const BetaParams& params) {
  validate_params(params, mu.ambient_dim());
  require(plane.dim() == params.m, "beta_cube_given_plane: plane dimension != m");
  require(plane.ambient_dim() == mu.ambient_dim(), "beta_cube_given_plane: dimension mismatch");
  const auto idx = mu.cube_indices(cube);
  return beta_from_numerator(moment_sum(mu, idx, plane, params.p), cube.side(), params.m,
                             params.p);
}

PlaneFit best_plane_l2(const PointCloudMeasure& mu, int m,
                       const std::optional<Eigen::VectorXd>& through) {
  std::vector<int> all(static_cast<std::size_t>(mu.atom_count()));
  for (int i = 0; i < mu.atom_count(); ++i) all[static_cast<std::size_t>(i)] = i;
  return best_plane_l2(mu, all, m, through);
}

PlaneFit best_plane_l2(const PointCloudMeasure& mu, std::span<const int> indices, int m,
                       const std::optional<Eigen::VectorXd>& through) {
  require(m > 0 && m < mu.ambient_dim(), "best_plane_l2: need 0 < m < ambient dimension");
  return fit_l2(mu, indices, nullptr, m, through);
}

BetaValue beta_ball(const PointCloudMeasure& mu, const Eigen::VectorXd& x, double r,
                    const BetaParams& params) {
  validate_params(params, mu.ambient_dim());
  const auto idx = mu.ball_indices(Ball(x, r));
  if (idx.empty()) return BetaValue{0.0, true};
  const std::optional<Eigen::VectorXd> through =
      params.centred ? std::optional<Eigen::VectorXd>(x) : std::nullopt;
  if (params.p == 2.0) {
    const PlaneFit fit = fit_l2(mu, idx, nullptr, params.m, through);
    return BetaValue{beta_from_numerator(fit.residual, r, params.m, params.p), true};
  }
  const IrlsResult irls = irls_fit(mu, idx, params.m, params.p, through);
  return BetaValue{beta_from_numerator(irls.objective, r, params.m, params.p), false};
}

CubeBeta beta_cube(const PointCloudMeasure& mu, const CubeRegion& cube,
                   const BetaParams& params) {
  validate_params(params, mu.ambient_dim());
  require(!params.centred, "beta_cube: cube beta has no centred variant");
  const auto idx = mu.cube_indices(cube);
  if (idx.empty()) {
    return CubeBeta{0.0, true, AffinePlane::span_axes(cube.center(), params.m)};
  }
  if (params.p == 2.0) {
    PlaneFit fit = fit_l2(mu, idx, nullptr, params.m, std::nullopt);
    return CubeBeta{beta_from_numerator(fit.residual, cube.side(), params.m, params.p), true,
                    std::move(fit.plane)};
  }
  IrlsResult irls = irls_fit(mu, idx, params.m, params.p, std::nullopt);
  return CubeBeta{beta_from_numerator(irls.objective, cube.side(), params.m, params.p), false,
                  std::move(irls.plane)};
}

CubeBeta beta_cube(const PointCloudMeasure& mu, const DyadicCube& cube,
                   const BetaParams& params) {
  return beta_cube(mu, cube.region(), params);
}

ScaleProfile::ScaleProfile(Eigen::VectorXd center, BetaParams params, double rho,
                           std::vector<double> breakpoints,
                           std::vector<ScaleInterval> intervals)
    : center_(std::move(center)),
      params_(params),
      rho_(rho),
      breakpoints_(std::move(breakpoints)),
      intervals_(std::move(intervals)) {
  require(!intervals_.empty(), "ScaleProfile: no intervals");
  require(intervals_.size() == breakpoints_.size() + 1, "ScaleProfile: interval count mismatch");
}

const ScaleInterval& ScaleProfile::interval_at(double r) const {
  require(std::isfinite(r) && r > 0.0 && r <= rho_, "ScaleProfile: radius out of range");
  // Number of breakpoints <= r indexes the covering interval; a radius
  // exactly on a breakpoint belongs to the interval opening there.
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), r);
  return intervals_[static_cast<std::size_t>(it - breakpoints_.begin())];
}

double ScaleProfile::mass_at(double r) const { return interval_at(r).mass; }

double ScaleProfile::beta_numerator_at(double r) const { return interval_at(r).beta_numerator; }

double ScaleProfile::theta_at(double r) const {
  const double mass = mass_at(r);
  if (mass == 0.0) return 0.0;
  return mass / (unit_ball_volume(params_.m) * std::pow(r, params_.m));
}

double ScaleProfile::beta_at(double r) const {
  return beta_from_numerator(beta_numerator_at(r), r, params_.m, params_.p);
}

ScaleProfile scale_profile(const PointCloudMeasure& mu, const Eigen::VectorXd& x, double rho,
                           const BetaParams& params) {
  validate_params(params, mu.ambient_dim());
  require(x.size() == mu.ambient_dim(), "scale_profile: center dimension mismatch");
  require(rho > 0.0, "scale_profile: rho must be positive");  // +inf allowed

  const int n = mu.ambient_dim();
  const int count = mu.atom_count();

  // Sort atoms by squared distance from x (the ball predicate's quantity),
  // then by index so groups come out in original atom order.
  std::vector<std::pair<double, int>> by_dist;
  by_dist.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    by_dist.emplace_back(squared_distance(mu.position(i).data(), x.data(), n), i);
  }
  std::sort(by_dist.begin(), by_dist.end());

  const std::optional<Eigen::VectorXd> through =
      params.centred ? std::optional<Eigen::VectorXd>(x) : std::nullopt;

  // Numerator for a fixed cumulative selection (ascending atom order).
  const auto numerator_for = [&](std::span<const int> sel, bool& exact) -> double {
    exact = true;
    if (sel.empty()) return 0.0;
    if (params.p == 2.0) return fit_l2(mu, sel, nullptr, params.m, through).residual;
    exact = false;
    return irls_fit(mu, sel, params.m, params.p, through).objective;
  };

  std::vector<double> breakpoints;
  std::vector<ScaleInterval> intervals;
  std::vector<int> selection;  // cumulative, ascending indices
  std::vector<int> group, merged;

  std::size_t pos = 0;
  // Atoms sitting exactly at x belong to every ball.
  while (pos < by_dist.size() && by_dist[pos].first == 0.0) {
    selection.push_back(by_dist[pos].second);
    ++pos;
  }
  std::sort(selection.begin(), selection.end());

  double prev_edge = 0.0;  // leading interval opens at 0 (exclusive)

  const auto close_interval = [&](double upper) {
    bool exact = true;
    const double mass = mu.mass_of(selection);
    const double numerator = numerator_for(selection, exact);
    intervals.push_back(ScaleInterval{prev_edge, upper, mass, numerator, exact});
  };

  while (pos < by_dist.size()) {
    const double sq = by_dist[pos].first;
    const double dist = std::sqrt(sq);
    if (dist > rho) break;

    group.clear();
    while (pos < by_dist.size() && by_dist[pos].first == sq) {
      group.push_back(by_dist[pos].second);
      ++pos;
    }
    std::sort(group.begin(), group.end());

    // Distinct squared distances can round to the same radius; they share
    // one breakpoint then.
    if (breakpoints.empty() || dist != breakpoints.back()) {
      close_interval(dist);
      breakpoints.push_back(dist);
      prev_edge = dist;
    }

    merged.clear();
    std::merge(selection.begin(), selection.end(), group.begin(), group.end(),
               std::back_inserter(merged));
    selection.swap(merged);
  }
  close_interval(rho);  // trailing interval reaches rho (possibly infinite)

  return ScaleProfile(x, params, rho, std::move(breakpoints), std::move(intervals));
}

}  // namespace betacurv
