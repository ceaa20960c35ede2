#include "betacurv/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "betacurv/affine.hpp"
#include "betacurv/errors.hpp"
#include "betacurv/kdtree.hpp"
#include "betacurv/numeric.hpp"
#include "betacurv/rng.hpp"

namespace betacurv {
namespace {

Eigen::MatrixXd pack_columns(std::span<const Eigen::VectorXd> points) {
  if (points.empty()) return Eigen::MatrixXd(0, 0);
  Eigen::MatrixXd out(points[0].size(), static_cast<Eigen::Index>(points.size()));
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    if (points[static_cast<std::size_t>(j)].size() != out.rows())
      throw std::invalid_argument("tuple points must share one dimension");
    out.col(j) = points[static_cast<std::size_t>(j)];
  }
  return out;
}

void check_params(const CurvatureParams& params, int ambient_dim) {
  if (params.m <= 0 || params.m >= ambient_dim)
    throw std::invalid_argument("curvature: need 0 < m < ambient dimension");
  if (!(params.p >= 1.0) || !std::isfinite(params.p))
    throw std::invalid_argument("curvature: p must be finite and >= 1");
  if (!(params.alpha >= 0.0) || !std::isfinite(params.alpha))
    throw std::invalid_argument("curvature: alpha must be finite and >= 0");
  if (std::isnan(params.radius) || params.radius <= 0.0)
    throw std::invalid_argument("curvature: radius must be positive");
}

// Atoms of the closed ball B(x, R), all of them when R is infinite.
std::vector<int> ball_atoms(const PointCloudMeasure& mu, const Eigen::VectorXd& x,
                            double radius) {
  if (std::isinf(radius)) {
    std::vector<int> idx(static_cast<std::size_t>(mu.atom_count()));
    for (int i = 0; i < mu.atom_count(); ++i) idx[static_cast<std::size_t>(i)] = i;
    return idx;
  }
  return mu.ball_indices(Ball(x, radius));
}

double tuple_count(std::size_t base, int exponent) {
  return std::pow(static_cast<double>(base), exponent);
}

}  // namespace

double k_integrand(const Eigen::MatrixXd& tuple, const CurvatureParams& params) {
  if (tuple.cols() != params.m + 2)
    throw std::invalid_argument("k_integrand: tuple must have m + 2 points");
  const double d = diam(tuple);
  if (d == 0.0) return 0.0;
  const double h = h_min(tuple, params.m);
  if (h == 0.0) return 0.0;
  const double exponent =
      static_cast<double>(params.m) * (params.m + 1) + (1.0 + params.alpha) * params.p;
  return std::pow(h, params.p) / std::pow(d, exponent);
}

double k_integrand(std::span<const Eigen::VectorXd> tuple, const CurvatureParams& params) {
  return k_integrand(pack_columns(tuple), params);
}

CurvatureEstimate curvature_exact(const PointCloudMeasure& mu, const Eigen::VectorXd& x,
                                  const CurvatureParams& params, double budget) {
  check_params(params, mu.ambient_dim());
  if (x.size() != mu.ambient_dim())
    throw std::invalid_argument("curvature_exact: center dimension mismatch");

  const std::vector<int> idx = ball_atoms(mu, x, params.radius);
  const int k = params.m + 1;  // free tuple slots, the first point is pinned at x
  const double required = tuple_count(idx.size(), k);
  if (required > budget)
    throw BudgetError("curvature_exact: " + std::to_string(required) +
                          " tuples exceed the budget, use the Monte Carlo estimator",
                      required, budget);
  if (idx.empty()) return {0.0, 0.0, 0, true};

  Eigen::MatrixXd tuple(mu.ambient_dim(), params.m + 2);
  tuple.col(0) = x;
  std::vector<int> digit(static_cast<std::size_t>(k), 0);
  for (int j = 0; j < k; ++j) tuple.col(j + 1) = mu.positions().col(idx[0]);

  PairwiseSum acc;
  std::uint64_t terms = 0;
  const int base = static_cast<int>(idx.size());
  while (true) {
    double wprod = 1.0;
    for (int j = 0; j < k; ++j) wprod *= mu.weights()[idx[static_cast<std::size_t>(digit[static_cast<std::size_t>(j)])]];
    if (wprod != 0.0) acc.add(wprod * k_integrand(tuple, params));
    ++terms;

    // Odometer step; only refill the columns whose digit moved.
    int pos = k - 1;
    while (pos >= 0) {
      auto& d = digit[static_cast<std::size_t>(pos)];
      if (++d < base) {
        tuple.col(pos + 1) = mu.positions().col(idx[static_cast<std::size_t>(d)]);
        break;
      }
      d = 0;
      tuple.col(pos + 1) = mu.positions().col(idx[0]);
      --pos;
    }
    if (pos < 0) break;
  }
  return {acc.value(), 0.0, terms, true};
}

double e_integrand(const PointCloudMeasure& mu, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& y, const CurvatureParams& params) {
  check_params(params, mu.ambient_dim());
  if (x.size() != mu.ambient_dim() || y.size() != mu.ambient_dim())
    throw std::invalid_argument("e_integrand: point dimension mismatch");
  const double sq_xy = squared_distance(y.data(), x.data(), static_cast<int>(x.size()));
  if (sq_xy == 0.0) throw std::invalid_argument("e_integrand: y must differ from x");

  // Same squared-distance predicate as ball membership, so atoms exactly at
  // distance |y - x| are kept.
  std::vector<int> idx;
  for (int i = 0; i < mu.atom_count(); ++i) {
    if (squared_distance(mu.positions().col(i).data(), x.data(), mu.ambient_dim()) <= sq_xy)
      idx.push_back(i);
  }

  Eigen::MatrixXd tuple(mu.ambient_dim(), params.m + 2);
  tuple.col(0) = x;
  tuple.col(1) = y;
  if (idx.empty()) return 0.0;

  std::vector<int> digit(static_cast<std::size_t>(params.m), 0);
  for (int j = 0; j < params.m; ++j) tuple.col(j + 2) = mu.positions().col(idx[0]);

  PairwiseSum acc;
  const int base = static_cast<int>(idx.size());
  while (true) {
    double wprod = 1.0;
    for (int j = 0; j < params.m; ++j) wprod *= mu.weights()[idx[static_cast<std::size_t>(digit[static_cast<std::size_t>(j)])]];
    if (wprod != 0.0) acc.add(wprod * k_integrand(tuple, params));

    int pos = params.m - 1;
    while (pos >= 0) {
      auto& d = digit[static_cast<std::size_t>(pos)];
      if (++d < base) {
        tuple.col(pos + 2) = mu.positions().col(idx[static_cast<std::size_t>(d)]);
        break;
      }
      d = 0;
      tuple.col(pos + 2) = mu.positions().col(idx[0]);
      --pos;
    }
    if (pos < 0) break;
  }
  return acc.value();
}

CurvatureEstimate curvature_mc(const PointCloudMeasure& mu, const Eigen::VectorXd& x,
                               const CurvatureParams& params, std::uint64_t samples,
                               std::uint64_t seed) {
  check_params(params, mu.ambient_dim());
  if (x.size() != mu.ambient_dim())
    throw std::invalid_argument("curvature_mc: center dimension mismatch");
  if (samples == 0) throw std::invalid_argument("curvature_mc: need at least one sample");

  const std::vector<int> idx = ball_atoms(mu, x, params.radius);
  KahanSum mass;
  std::vector<double> cumulative;
  cumulative.reserve(idx.size());
  for (int i : idx) {
    mass.add(mu.weights()[i]);
    cumulative.push_back(mass.value());
  }
  const double total = mass.value();
  if (idx.empty() || total <= 0.0) return {0.0, 0.0, samples, false};

  SplitMix64 rng(seed);
  const int k = params.m + 1;
  Eigen::MatrixXd tuple(mu.ambient_dim(), params.m + 2);
  tuple.col(0) = x;

  // Welford accumulation keeps the variance stable for long runs.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    for (int j = 0; j < k; ++j) {
      const double u = rng.uniform() * total;
      const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u);
      const std::size_t pick = std::min<std::size_t>(
          static_cast<std::size_t>(it - cumulative.begin()), idx.size() - 1);
      tuple.col(j + 1) = mu.positions().col(idx[pick]);
    }
    const double f = k_integrand(tuple, params);
    const double delta = f - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (f - mean);
  }

  const double scale = std::pow(total, k);
  double se = 0.0;
  if (samples > 1) {
    const double variance = m2 / static_cast<double>(samples - 1);
    se = scale * std::sqrt(variance / static_cast<double>(samples));
  }
  return {scale * mean, se, samples, false};
}

double m_p_functional(const PointCloudMeasure& mu, double p, int m, double budget) {
  CurvatureParams probe{m, p, 0.0, std::numeric_limits<double>::infinity()};
  check_params(probe, mu.ambient_dim());

  const int k = m + 2;
  const double required = tuple_count(static_cast<std::size_t>(mu.atom_count()), k);
  if (required > budget)
    throw BudgetError("m_p_functional: " + std::to_string(required) +
                          " tuples exceed the budget",
                      required, budget);
  if (mu.atom_count() == 0) return 0.0;

  Eigen::MatrixXd tuple(mu.ambient_dim(), k);
  std::vector<int> digit(static_cast<std::size_t>(k), 0);
  for (int j = 0; j < k; ++j) tuple.col(j) = mu.positions().col(0);

  PairwiseSum acc;
  const int base = mu.atom_count();
  while (true) {
    double wprod = 1.0;
    for (int j = 0; j < k; ++j) wprod *= mu.weights()[digit[static_cast<std::size_t>(j)]];
    if (wprod != 0.0) {
      const double d = diam(tuple);
      if (d > 0.0) {
        const double kap = kappa(tuple, m);
        if (kap > 0.0) acc.add(wprod * std::pow(kap, p) / std::pow(d, p));
      }
    }

    int pos = k - 1;
    while (pos >= 0) {
      auto& dgt = digit[static_cast<std::size_t>(pos)];
      if (++dgt < base) {
        tuple.col(pos) = mu.positions().col(dgt);
        break;
      }
      dgt = 0;
      tuple.col(pos) = mu.positions().col(0);
      --pos;
    }
    if (pos < 0) break;
  }
  return acc.value();
}

}  // namespace betacurv
