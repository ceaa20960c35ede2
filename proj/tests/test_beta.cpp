#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "betacurv/beta.hpp"
#include "betacurv/measure.hpp"
#include "betacurv/rng.hpp"
#include "betacurv/synth.hpp"

using namespace betacurv;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("fixed plane beta against the direct formula") {
  Eigen::MatrixXd pts(2, 2);
  pts << 0.0, 0.0,
         1.0, -1.0;
  const PointCloudMeasure mu(pts, Eigen::VectorXd::Ones(2));
  const AffinePlane axis = AffinePlane::span_axes(Eigen::Vector2d(0.0, 0.0), 1);
  const BetaParams params{1, 2.0, false};
  // (1/2) * (2^-1 * (1 + 1))^(1/2) = 1/2
  CHECK(beta_given_plane(mu, Eigen::Vector2d(0.0, 0.0), 2.0, axis, params) ==
        doctest::Approx(0.5).epsilon(1e-14));
  // empty ball
  CHECK(beta_given_plane(mu, Eigen::Vector2d(9.0, 9.0), 0.5, axis, params) == 0.0);
}

TEST_CASE("cube beta normalizes by the side length") {
  Eigen::MatrixXd pts(2, 1);
  pts << 0.5, 0.5;
  const PointCloudMeasure mu(pts, Eigen::VectorXd::Ones(1));
  const AffinePlane axis = AffinePlane::span_axes(Eigen::Vector2d(0.0, 0.0), 1);
  const CubeRegion unit(Eigen::Vector2d(0.0, 0.0), 1.0);
  CHECK(beta_cube_given_plane(mu, unit, axis, BetaParams{1, 2.0, false}) ==
        doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("least squares plane of the triangle") {
  const PointCloudMeasure tri = make_triangle();
  const PlaneFit fit = best_plane_l2(tri, 1);
  // scatter about the centroid has eigenvalues 1/3 and 1
  CHECK(fit.residual == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(std::abs(fit.plane.basis()(0, 0)) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-10));
  CHECK(fit.plane.distance_to(Eigen::Vector2d(1.0 / 3.0, 1.0 / 3.0)) < 1e-14);

  const PlaneFit pinned = best_plane_l2(tri, 1, Eigen::VectorXd(Eigen::Vector2d::Zero()));
  // second moments about the origin are the identity, so every direction
  // leaves residual 2 - 1 = 1
  CHECK(pinned.residual == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pinned.plane.distance_to(Eigen::Vector2d::Zero()) < 1e-14);
}

TEST_CASE("ball beta numbers of the triangle") {
  const PointCloudMeasure tri = make_triangle();
  const Eigen::Vector2d origin(0.0, 0.0);
  const BetaValue plain = beta_ball(tri, origin, 2.0, BetaParams{1, 2.0, false});
  CHECK(plain.exact);
  CHECK(plain.value == doctest::Approx(0.5 / std::sqrt(6.0)).epsilon(1e-12));
  const BetaValue through = beta_ball(tri, origin, 2.0, BetaParams{1, 2.0, true});
  CHECK(through.exact);
  CHECK(through.value == doctest::Approx(0.5 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(through.value >= plain.value);
  // a ball with no atoms
  CHECK(beta_ball(tri, Eigen::Vector2d(9.0, 9.0), 1.0, BetaParams{1, 2.0, false}).value == 0.0);
}

TEST_CASE("cube beta solves the same least squares problem") {
  const PointCloudMeasure tri = make_triangle();
  const CubeRegion box(Eigen::Vector2d(-0.25, -0.25), 1.5);
  const CubeBeta cb = beta_cube(tri, box, BetaParams{1, 2.0, false});
  CHECK(cb.exact);
  const double expected = (1.0 / 1.5) * std::sqrt((1.0 / 1.5) * (1.0 / 3.0));
  CHECK(cb.value == doctest::Approx(expected).epsilon(1e-12));

  // the unit dyadic square holds one atom only, which any line fits exactly
  const CubeBeta flat = beta_cube(tri, DyadicCube(0, {0, 0}), BetaParams{1, 2.0, false});
  CHECK(flat.value == 0.0);
}

TEST_CASE("iterative fits for general p stay above the plane infimum witness") {
  SplitMix64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    RandomCloudSpec spec;
    spec.ambient_dim = 2 + trial % 2;
    spec.count = 8;
    const PointCloudMeasure mu = synthesize_random_cloud(spec, rng.next());
    const Eigen::VectorXd x = mu.position(0);
    const double r = 1.0 + 2.0 * rng.uniform();
    const double p = trial % 2 == 0 ? 1.5 : 3.0;
    const BetaParams params{1, p, false};
    const BetaValue val = beta_ball(mu, x, r, params);
    CHECK(!val.exact);
    CHECK(val.value >= 0.0);
    // an upper bound for the infimum can only undercut sampled planes
    for (int k = 0; k < 50; ++k) {
      Eigen::VectorXd base(mu.ambient_dim());
      Eigen::MatrixXd dir(mu.ambient_dim(), 1);
      for (int i = 0; i < mu.ambient_dim(); ++i) {
        base[i] = 3.0 * rng.uniform() - 1.5;
        dir(i, 0) = rng.normal();
      }
      dir.col(0).normalize();
      const double given = beta_given_plane(mu, x, r, AffinePlane(base, dir), params);
      CHECK(val.value <= given * (1.0 + 1e-9) + 1e-12);
    }
  }
}

TEST_CASE("scale profile of the triangle") {
  const PointCloudMeasure tri = make_triangle();
  const Eigen::Vector2d origin(0.0, 0.0);
  const ScaleProfile prof = scale_profile(tri, origin, 2.0, BetaParams{1, 2.0, true});
  CHECK(prof.breakpoints() == std::vector<double>{1.0});
  REQUIRE(prof.intervals().size() == 2);
  CHECK(prof.intervals()[0].r_lo == 0.0);
  CHECK(prof.intervals()[0].r_hi == 1.0);
  CHECK(prof.intervals()[0].mass == 1.0);
  CHECK(prof.intervals()[0].beta_numerator == 0.0);
  CHECK(prof.intervals()[1].r_lo == 1.0);
  CHECK(prof.intervals()[1].r_hi == 2.0);
  CHECK(prof.intervals()[1].mass == 3.0);
  CHECK(prof.intervals()[1].beta_numerator == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(prof.intervals()[0].exact);
  CHECK(prof.intervals()[1].exact);

  CHECK(prof.mass_at(0.5) == 1.0);
  CHECK(prof.theta_at(1.5) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(prof.beta_at(1.5) == doctest::Approx(std::pow(1.5, -1.5)).epsilon(1e-12));
  // a radius exactly on the breakpoint belongs to the interval opening there
  CHECK(prof.mass_at(1.0) == 3.0);
}

TEST_CASE("profiles agree with direct evaluation at sampled radii") {
  SplitMix64 rng(31);
  for (int trial = 0; trial < 8; ++trial) {
    RandomCloudSpec spec;
    spec.ambient_dim = 2 + trial % 2;
    spec.count = 9;
    const PointCloudMeasure mu = synthesize_random_cloud(spec, rng.next());
    const Eigen::VectorXd x = mu.position(static_cast<int>(rng.below(9)));
    const BetaParams params{1, 2.0, trial % 2 == 0};
    const ScaleProfile prof = scale_profile(mu, x, 4.0, params);
    for (int k = 0; k < 12; ++k) {
      const double r = 0.05 + 3.9 * rng.uniform();
      CHECK(prof.mass_at(r) == doctest::Approx(mu.mass_in(Ball(x, r))).epsilon(1e-12));
      CHECK(prof.beta_at(r) ==
            doctest::Approx(beta_ball(mu, x, r, params).value).epsilon(1e-9));
      CHECK(prof.theta_at(r) == doctest::Approx(theta_ball(mu, x, r, 1)).epsilon(1e-12));
    }
  }
}

TEST_CASE("profiles extend to infinite rho") {
  const PointCloudMeasure tri = make_triangle();
  const ScaleProfile prof = scale_profile(tri, Eigen::Vector2d(0.0, 0.0), kInf,
                                          BetaParams{1, 2.0, true});
  REQUIRE(!prof.intervals().empty());
  CHECK(prof.intervals().back().r_hi == kInf);
  CHECK(prof.intervals().back().mass == 3.0);
}
