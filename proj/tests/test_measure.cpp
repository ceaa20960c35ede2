#include <doctest.h>

#include <cmath>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "betacurv/csv.hpp"
#include "betacurv/errors.hpp"
#include "betacurv/measure.hpp"
#include "betacurv/rng.hpp"
#include "betacurv/synth.hpp"

using namespace betacurv;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("densities of the three atom triangle") {
  const PointCloudMeasure tri = make_triangle();
  const Eigen::Vector2d origin(0.0, 0.0);
  // atoms at distance exactly 1 belong to the closed ball
  CHECK(theta_ball(tri, origin, 1.0, 1) == 1.5);
  CHECK(theta_ball(tri, origin, 0.5, 1) == 1.0);
  CHECK(theta_ball(tri, origin, 1.0, 2) == doctest::Approx(3.0 / kPi).epsilon(1e-15));
  CHECK(theta_ball(tri, Eigen::Vector2d(5.0, 5.0), 1.0, 1) == 0.0);
}

TEST_CASE("cube density counts the half open cube") {
  const PointCloudMeasure tri = make_triangle();
  // [0,1)^2 holds only the origin atom; (1,0) and (0,1) sit on excluded faces
  const DyadicCube unit(0, {0, 0});
  CHECK(tri.mass_in(unit) == 1.0);
  CHECK(theta_cube(tri, unit, 1) == 1.0);
  CHECK(theta_cube(tri, DyadicCube(-1, {0, 0}), 1) == 1.5);
}

TEST_CASE("ball queries match a linear scan") {
  SplitMix64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    RandomCloudSpec spec;
    spec.ambient_dim = 2 + trial % 2;
    spec.count = 12;
    const PointCloudMeasure mu = synthesize_random_cloud(spec, rng.next());
    const Eigen::VectorXd x = mu.position(static_cast<int>(rng.below(12)));
    // a radius equal to an atom distance exercises the closed boundary
    const double r = trial % 3 == 0
                         ? (mu.position(static_cast<int>(rng.below(12))) - x).norm()
                         : 2.0 * rng.uniform();
    std::vector<int> expected;
    for (int i = 0; i < mu.atom_count(); ++i)
      if (squared_distance(mu.positions().col(i).data(), x.data(), mu.ambient_dim()) <= r * r)
        expected.push_back(i);
    CHECK(mu.ball_indices(Ball(x, r)) == expected);
  }
}

TEST_CASE("cube queries match a linear scan") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    RandomCloudSpec spec;
    spec.ambient_dim = 2 + trial % 2;
    spec.count = 14;
    const PointCloudMeasure mu = synthesize_random_cloud(spec, rng.next());
    const DyadicCube cube =
        DyadicCube::containing(mu.position(static_cast<int>(rng.below(14))), trial % 3 - 1);
    std::vector<int> expected;
    for (int i = 0; i < mu.atom_count(); ++i) {
      bool inside = true;
      for (int d = 0; d < mu.ambient_dim() && inside; ++d) {
        const double lo = cube.lower()[d];
        const double v = mu.positions()(d, i);
        inside = lo <= v && v < lo + cube.side();
      }
      if (inside) expected.push_back(i);
    }
    CHECK(mu.cube_indices(cube) == expected);
  }
}

TEST_CASE("dyadic cubes are half open with exact power of two sides") {
  const DyadicCube unit(0, {0, 0});
  CHECK(unit.contains(Eigen::Vector2d(0.0, 0.0)));
  CHECK(unit.contains(Eigen::Vector2d(0.999, 0.5)));
  CHECK(!unit.contains(Eigen::Vector2d(1.0, 0.0)));
  CHECK(!unit.contains(Eigen::Vector2d(0.5, -1e-300)));
  CHECK(DyadicCube(3, {0, 0}).side() == 0.125);
  CHECK(DyadicCube(-2, {0, 0}).side() == 4.0);
  CHECK(DyadicCube::containing(Eigen::Vector2d(0.3, 0.7), 1) == DyadicCube(1, {0, 1}));
  CHECK(DyadicCube::containing(Eigen::Vector2d(-0.25, 0.5), 0) == DyadicCube(0, {-1, 0}));
}

TEST_CASE("concentric enlargement of the unit cube") {
  const CubeRegion big = expand_cube(DyadicCube(0, {0, 0}), 3.0);
  CHECK(big.side() == 3.0);
  CHECK(big.lower()[0] == -1.0);
  CHECK(big.lower()[1] == -1.0);
  CHECK(big.center()[0] == 0.5);
  CHECK(big.center()[1] == 0.5);
}

TEST_CASE("touched dyadic cubes enumerate occupied cells") {
  Eigen::MatrixXd pts(2, 2);
  pts << 0.25, 0.75, 0.25, 0.75;
  const PointCloudMeasure mu(pts, Eigen::VectorXd::Ones(2));
  const std::vector<DyadicCube> cubes = dyadic_cubes_touching(mu, 1);
  REQUIRE(cubes.size() == 2);
  CHECK(cubes[0] == DyadicCube(1, {0, 0}));
  CHECK(cubes[1] == DyadicCube(1, {1, 1}));
}

TEST_CASE("similarity transform moves atoms and scales weights") {
  const PointCloudMeasure tri = make_triangle();
  Eigen::Matrix2d rot;
  rot << 0.0, -1.0, 1.0, 0.0;
  const Eigen::Vector2d shift(3.0, -1.0);
  const PointCloudMeasure nu = similarity_transform(tri, 2.0, rot, shift, 1.0);
  CHECK(nu.total_mass() == 6.0);
  // (1,0) -> 2 * (0,1) + (3,-1) = (3,1)
  CHECK(nu.position(1)[0] == 3.0);
  CHECK(nu.position(1)[1] == 1.0);

  Eigen::Matrix2d skew;
  skew << 1.0, 1.0, 0.0, 1.0;
  CHECK_THROWS(similarity_transform(tri, 1.0, skew, shift, 0.0));
}

TEST_CASE("restrictions preserve atom order and weights") {
  const PointCloudMeasure tri = make_triangle();
  const PointCloudMeasure inside = ball_restrict(tri, Ball(Eigen::Vector2d(0.0, 0.0), 1.0));
  CHECK(inside.atom_count() == 3);
  const PointCloudMeasure tight = ball_restrict(tri, Ball(Eigen::Vector2d(0.0, 0.0), 0.5));
  REQUIRE(tight.atom_count() == 1);
  CHECK(tight.position(0)[0] == 0.0);
  CHECK(tight.total_mass() == 1.0);
}

TEST_CASE("copies and moves keep the spatial index usable") {
  // regression: the index holds a pointer into the owner's storage, so a
  // relocated measure must not leave it aimed at the old object
  std::optional<PointCloudMeasure> holder;
  {
    const PointCloudMeasure tri = make_triangle();
    holder = tri;
  }
  CHECK(holder->ball_indices(Ball(Eigen::Vector2d(0.0, 0.0), 1.0)).size() == 3);

  const PointCloudMeasure moved = std::move(*holder);
  CHECK(moved.ball_indices(Ball(Eigen::Vector2d(0.0, 0.0), 0.5)).size() == 1);

  std::vector<PointCloudMeasure> bag;
  for (int i = 0; i < 5; ++i) bag.push_back(make_triangle());
  CHECK(bag.front().ball_indices(Ball(Eigen::Vector2d(1.0, 0.0), 0.25)).size() == 1);
  CHECK(bag.back().mass_in(Ball(Eigen::Vector2d(0.0, 1.0), 0.1)) == 1.0);
}

TEST_CASE("measure construction validates its input") {
  Eigen::MatrixXd pts(2, 2);
  pts << 0.0, 1.0, 0.0, 0.0;
  CHECK_THROWS(PointCloudMeasure(pts, Eigen::VectorXd::Constant(2, -1.0)));
  CHECK_THROWS(PointCloudMeasure(pts, Eigen::VectorXd::Ones(3)));
}

TEST_CASE("csv round trip is bit exact") {
  RandomCloudSpec spec;
  spec.ambient_dim = 3;
  spec.count = 7;
  const PointCloudMeasure mu = synthesize_random_cloud(spec, 99);
  std::istringstream in(to_csv(mu));
  const PointCloudMeasure back = load_csv(in);
  REQUIRE(back.atom_count() == mu.atom_count());
  REQUIRE(back.ambient_dim() == mu.ambient_dim());
  CHECK((back.positions().array() == mu.positions().array()).all());
  CHECK((back.weights().array() == mu.weights().array()).all());
}

TEST_CASE("csv without a weight column defaults to unit weights") {
  std::istringstream in("x0,x1\n0,0\n1,0\n");
  const PointCloudMeasure mu = load_csv(in);
  CHECK(mu.total_mass() == 2.0);
}

TEST_CASE("csv errors name the offending line") {
  std::istringstream missing_header("");
  CHECK_THROWS_AS(load_csv(missing_header), InputError);
  std::istringstream bad_header("a,b\n0,0\n");
  CHECK_THROWS_AS(load_csv(bad_header), InputError);
  std::istringstream short_row("x0,x1\n1\n");
  CHECK_THROWS_AS(load_csv(short_row), InputError);
  std::istringstream bad_number("x0,x1\n1,2\noops,4\n");
  CHECK_THROWS_AS(load_csv(bad_number), InputError);
  std::istringstream negative_weight("x0,w\n0,-1\n");
  CHECK_THROWS_AS(load_csv(negative_weight), InputError);
  try {
    std::istringstream again("x0,x1\n1,2\noops,4\n");
    load_csv(again);
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("flat generators place atoms with exactly zero off plane parts") {
  SegmentSpec seg;
  seg.ambient_dim = 3;
  seg.count = 9;
  const PointCloudMeasure s = synthesize_segment(seg);
  CHECK((s.positions().row(1).array() == 0.0).all());
  CHECK((s.positions().row(2).array() == 0.0).all());

  PlaneGridSpec grid;
  grid.per_side = 3;
  const PointCloudMeasure g = synthesize_plane_grid(grid);
  CHECK(g.atom_count() == 9);
  CHECK((g.positions().row(2).array() == 0.0).all());
}

TEST_CASE("noise displaces atoms by no more than the amplitude") {
  const PointCloudMeasure tri = make_triangle();
  const PointCloudMeasure noisy = add_isotropic_noise(tri, 0.01, 5);
  REQUIRE(noisy.atom_count() == 3);
  for (int i = 0; i < 3; ++i)
    CHECK((noisy.position(i) - tri.position(i)).norm() < 0.01);
  const PointCloudMeasure same = add_isotropic_noise(tri, 0.0, 5);
  CHECK((same.positions().array() == tri.positions().array()).all());
}
