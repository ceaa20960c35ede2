#include <doctest.h>

#include <cmath>

#include "betacurv/affine.hpp"
#include "betacurv/rng.hpp"

using namespace betacurv;

TEST_CASE("diameter of the 3-4-5 triangle") {
  Eigen::MatrixXd pts(2, 3);
  pts << 0.0, 3.0, 0.0,
         0.0, 0.0, 4.0;
  CHECK(diam(pts) == 5.0);
  CHECK(diam(pts.leftCols(1)) == 0.0);
}

TEST_CASE("minimal height of a right triangle") {
  // heights 3, 4 and 12/5; the smallest is the one onto the hypotenuse
  Eigen::MatrixXd pts(2, 3);
  pts << 0.0, 4.0, 0.0,
         0.0, 0.0, 3.0;
  CHECK(h_min(pts, 1) == doctest::Approx(2.4).epsilon(1e-12));
}

TEST_CASE("minimal height of the unit corner simplex") {
  Eigen::MatrixXd pts(3, 4);
  pts << 0.0, 1.0, 0.0, 0.0,
         0.0, 0.0, 1.0, 0.0,
         0.0, 0.0, 0.0, 1.0;
  // the origin sits 1/sqrt(3) from the plane x+y+z=1, the other heights are 1
  CHECK(h_min(pts, 2) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("height vanishes exactly for degenerate tuples") {
  Eigen::MatrixXd flat(2, 3);
  flat << 0.0, 1.0, 2.0,
          0.0, 0.0, 0.0;
  CHECK(h_min(flat, 1) == 0.0);
  Eigen::MatrixXd repeated(2, 3);
  repeated << 0.0, 1.0, 0.0,
              0.0, 0.0, 0.0;
  CHECK(h_min(repeated, 1) == 0.0);
}

TEST_CASE("simplex measures of the unit corners") {
  Eigen::MatrixXd tri(2, 3);
  tri << 0.0, 1.0, 0.0,
         0.0, 0.0, 1.0;
  CHECK(simplex_measure(tri) == doctest::Approx(0.5).epsilon(1e-14));

  Eigen::MatrixXd tet(3, 4);
  tet << 0.0, 1.0, 0.0, 0.0,
         0.0, 0.0, 1.0, 0.0,
         0.0, 0.0, 0.0, 1.0;
  CHECK(simplex_measure(tet) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));

  Eigen::MatrixXd seg(3, 2);
  seg << 0.0, 2.0,
         0.0, 1.0,
         0.0, 2.0;
  CHECK(simplex_measure(seg) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("menger curvature is the inverse circumradius") {
  const Eigen::Vector2d a(0.0, 0.0), b(1.0, 0.0), c(0.0, 1.0);
  // right triangle: circumradius is half the hypotenuse, sqrt(2)/2
  CHECK(menger_c(a, b, c) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  // equilateral with side 2: circumradius 2/sqrt(3)
  const Eigen::Vector2d d(2.0, 0.0), e(1.0, std::sqrt(3.0));
  CHECK(menger_c(a, d, e) == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));
  CHECK(menger_c(a, b, Eigen::Vector2d(2.0, 0.0)) == 0.0);
  CHECK(menger_c(a, a, b) == 0.0);
}

TEST_CASE("normalized simplex size of an equilateral tuple") {
  Eigen::MatrixXd pts(2, 3);
  pts << 0.0, 1.0, 0.5,
         0.0, 0.0, std::sqrt(3.0) / 2.0;
  CHECK(kappa(pts, 1) == doctest::Approx(std::sqrt(3.0) / 4.0).epsilon(1e-12));
}

TEST_CASE("affine hull of exactly planar points keeps exact zeros") {
  Eigen::MatrixXd pts(3, 4);
  pts << 0.0, 1.0, 0.25, -2.0,
         0.0, 0.5, 1.0, 0.75,
         0.0, 0.0, 0.0, 0.0;
  const AffinePlane hull = affine_hull(pts);
  REQUIRE(hull.dim() == 2);
  // the off-plane coordinate must survive the projection untouched
  CHECK(hull.distance_to(Eigen::Vector3d(0.3, -0.7, 0.25)) == 0.25);
  CHECK(hull.distance_to(Eigen::Vector3d(1.0, 0.5, 0.0)) == 0.0);
}

TEST_CASE("affine hull ranks degenerate configurations") {
  Eigen::MatrixXd line(3, 4);
  line << 0.0, 1.0, 2.0, 3.0,
          0.0, 1.0, 2.0, 3.0,
          0.0, 0.0, 0.0, 0.0;
  const AffinePlane hull = affine_hull(line);
  REQUIRE(hull.dim() == 1);
  CHECK(hull.distance_to(Eigen::Vector3d(1.0, 0.0, 0.0)) ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));

  Eigen::MatrixXd point(2, 3);
  point << 0.5, 0.5, 0.5,
           0.25, 0.25, 0.25;
  const AffinePlane trivial = affine_hull(point);
  CHECK(trivial.dim() == 0);
  CHECK(trivial.distance_to(Eigen::Vector2d(0.5, 1.25)) == doctest::Approx(1.0));
}

TEST_CASE("projection splits points orthogonally") {
  SplitMix64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 3;
    const int m = 1 + trial % (n - 1 > 0 ? n - 1 : 1);
    Eigen::MatrixXd pts(n, m + 1);
    for (int j = 0; j <= m; ++j)
      for (int i = 0; i < n; ++i) pts(i, j) = 2.0 * rng.uniform() - 1.0;
    const AffinePlane hull = affine_hull(pts);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) y[i] = 3.0 * rng.uniform() - 1.5;
    const Eigen::VectorXd foot = hull.project(y);
    CHECK(hull.distance_to(y) == doctest::Approx((y - foot).norm()).epsilon(1e-12));
    CHECK(hull.distance_to(foot) < 1e-10);
    // the hull contains its defining points
    for (int j = 0; j <= m; ++j)
      CHECK(hull.distance_to(pts.col(j)) < 1e-10);
  }
}

TEST_CASE("span_axes planes measure the dropped coordinates") {
  const AffinePlane xy = AffinePlane::span_axes(Eigen::Vector3d::Zero(), 2);
  CHECK(xy.distance_to(Eigen::Vector3d(4.0, -7.0, 3.0)) == 3.0);
  const AffinePlane origin = AffinePlane::span_axes(Eigen::Vector2d(1.0, 1.0), 0);
  CHECK(origin.distance_to(Eigen::Vector2d(4.0, 5.0)) == 5.0);
}
