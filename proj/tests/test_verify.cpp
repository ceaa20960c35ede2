#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "betacurv/measure.hpp"
#include "betacurv/synth.hpp"
#include "betacurv/verify.hpp"

using namespace betacurv;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;

PointCloudMeasure worked_triangle() {
  Eigen::MatrixXd pts(2, 3);
  pts << 0.0, 1.0, 0.5,
         0.0, 0.0, 0.5;
  return PointCloudMeasure(pts, Eigen::VectorXd::Ones(3));
}

double find_param(const VerificationReport& rep, const std::string& key) {
  for (const auto& [name, value] : rep.params)
    if (name == key) return value;
  FAIL(("missing param " + key));
  return 0.0;
}

}  // namespace

TEST_CASE("pointwise constant closed form") {
  // 2(m+1)(m+2) omega_m^m 4^(m + (1+alpha)p + m^2 + 1)
  CHECK(gamma_lemma1(1, 2.0, 0.0) == 24576.0);
  CHECK(gamma_lemma1(1, 2.0, 1.0) == 393216.0);
  CHECK(gamma_lemma1(2, 2.0, 0.0) ==
        doctest::Approx(24.0 * kPi * kPi * 262144.0).epsilon(1e-13));
  CHECK_THROWS_AS(gamma_lemma1(0, 2.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(gamma_lemma1(1, 0.5, 0.0), std::invalid_argument);
}

TEST_CASE("transfer constants at the reference parameters") {
  const Lemma2Constants c = gamma_lemma2(2, 1, 2.0, 2.0, 0.0, 1.0);
  // 6^(2+1+1) * 2^2 and 3^2 * (2 sqrt 2)^4 / ln 2
  CHECK(c.delta1 == doctest::Approx(5184.0).epsilon(1e-13));
  CHECK(c.delta2 == doctest::Approx(576.0 / std::log(2.0)).epsilon(1e-13));
  CHECK(c.product == doctest::Approx(c.delta1 * c.delta2).epsilon(1e-13));
  CHECK_THROWS_AS(gamma_lemma2(2, 1, 2.0, 3.0, 0.0, 1.0), std::invalid_argument);  // q > p
  CHECK_THROWS_AS(gamma_lemma2(1, 1, 2.0, 2.0, 0.0, 1.0), std::invalid_argument);  // m >= n
}

TEST_CASE("multiscale closed form on the triangle") {
  const PointCloudMeasure tri = make_triangle();
  const Eigen::Vector2d origin(0.0, 0.0);
  MultiscaleParams params;
  params.m = 1;
  params.p = 2.0;
  params.q = 2.0;
  params.alpha = 0.0;
  params.rho = 2.0;
  params.centred = true;
  params.gamma = 0.0;
  // integral of r^-4 over [1,2]
  CHECK(multiscale_integral(tri, origin, params) ==
        doctest::Approx(7.0 / 24.0).epsilon(1e-12));
  params.gamma = 1.0;
  // extra density factor 3/(2r)
  CHECK(multiscale_integral(tri, origin, params) ==
        doctest::Approx(45.0 / 128.0).epsilon(1e-12));
}

TEST_CASE("multiscale breakdown rows sum to the integral") {
  const PointCloudMeasure tri = make_triangle();
  const Eigen::Vector2d origin(0.0, 0.0);
  MultiscaleParams params;
  params.rho = 2.0;
  params.centred = true;
  const ScaleProfile prof = scale_profile(tri, origin, 2.0, BetaParams{1, 2.0, true});
  const std::vector<ScaleRow> rows = multiscale_breakdown(prof, params);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].contribution == 0.0);  // one atom at the center fits exactly
  CHECK(rows[1].contribution == doctest::Approx(7.0 / 24.0).epsilon(1e-12));
  CHECK(rows[0].r_hi == 1.0);
  CHECK(rows[1].mass == 3.0);
}

TEST_CASE("multiscale tails converge for infinite rho") {
  const PointCloudMeasure tri = make_triangle();
  const Eigen::Vector2d origin(0.0, 0.0);
  MultiscaleParams params;
  params.rho = kInf;
  params.centred = true;
  // integral of r^-4 from 1 to infinity
  CHECK(multiscale_integral(tri, origin, params) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("multiscale parameter validation") {
  const PointCloudMeasure tri = make_triangle();
  const Eigen::Vector2d origin(0.0, 0.0);
  MultiscaleParams params;
  params.q = 3.0;  // q must stay <= p
  CHECK_THROWS_AS(multiscale_integral(tri, origin, params), std::invalid_argument);
  MultiscaleParams bad_alpha;
  bad_alpha.alpha = 2.0;
  CHECK_THROWS_AS(multiscale_integral(tri, origin, bad_alpha), std::invalid_argument);
  // a profile narrower than the requested integral is refused
  const ScaleProfile prof = scale_profile(tri, origin, 1.0, BetaParams{1, 2.0, false});
  MultiscaleParams wide;
  wide.rho = 2.0;
  CHECK_THROWS_AS(multiscale_integral(prof, wide), std::invalid_argument);
  // mismatched centred flag
  MultiscaleParams flipped;
  flipped.rho = 1.0;
  flipped.centred = true;
  CHECK_THROWS_AS(multiscale_integral(prof, flipped), std::invalid_argument);
}

TEST_CASE("pointwise curvature bound on the worked triangle") {
  const PointCloudMeasure tri = worked_triangle();
  const Eigen::Vector2d origin(0.0, 0.0);
  const VerificationReport rep = verify_lemma1(tri, origin, 2.0, 1, 2.0, 0.0);
  CHECK(rep.pass);
  CHECK(rep.name == "lemma1");
  CHECK(rep.lhs == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(rep.constant == 24576.0);
  MultiscaleParams ms;
  ms.m = 1;
  ms.p = 2.0;
  ms.q = 2.0;
  ms.gamma = 1.0;
  ms.alpha = 0.0;
  ms.rho = 4.0;
  ms.centred = true;
  CHECK(rep.rhs ==
        doctest::Approx(24576.0 * multiscale_integral(tri, origin, ms)).epsilon(1e-12));
  CHECK(rep.ratio == doctest::Approx(rep.lhs / rep.rhs).epsilon(1e-12));
  CHECK(!rep.scale_rows.empty());
  CHECK(find_param(rep, "rho") == 4.0);
}

TEST_CASE("degenerate inputs give a vacuous pass") {
  Eigen::MatrixXd one(2, 1);
  one << 0.0, 0.0;
  const PointCloudMeasure lonely(one, Eigen::VectorXd::Ones(1));
  const VerificationReport rep =
      verify_lemma1(lonely, Eigen::Vector2d(0.0, 0.0), kInf, 1, 2.0, 0.0);
  CHECK(rep.pass);
  CHECK(rep.lhs == 0.0);
  CHECK(rep.rhs == 0.0);
  CHECK(rep.ratio == 0.0);
}

TEST_CASE("transfer bound on the unit square") {
  const PointCloudMeasure tri = make_triangle();
  MultiscaleParams params;
  params.m = 1;
  params.p = 2.0;
  params.q = 2.0;
  params.gamma = 1.0;
  params.alpha = 0.0;
  const VerificationReport rep = verify_lemma2(tri, DyadicCube(0, {0, 0}), 1.0, params);
  CHECK(rep.name == "lemma2");
  CHECK(rep.pass);
  CHECK(rep.constant ==
        doctest::Approx(5184.0 * 576.0 / std::log(2.0)).epsilon(1e-12));
  CHECK(rep.rhs > 0.0);
  // all three atoms sit inside the closed enlargement
  CHECK(rep.atom_rows.size() == 3);
  CHECK(find_param(rep, "rhs_rho") == doctest::Approx(12.0 * std::sqrt(2.0)));
  CHECK_THROWS_AS(verify_lemma2(tri, DyadicCube(0, {0, 0}), kInf, params),
                  std::invalid_argument);
}

TEST_CASE("combined bound on the unit square") {
  const PointCloudMeasure tri = make_triangle();
  const VerificationReport rep =
      verify_corollary_lw11(tri, DyadicCube(0, {0, 0}), 2.0, 1, 2.0, 0.0);
  CHECK(rep.name == "corollary_lw11");
  CHECK(rep.pass);
  const double expected_constant =
      gamma_lemma1(1, 2.0, 0.0) * gamma_lemma2(2, 1, 2.0, 2.0, 0.0, 1.0).product;
  CHECK(rep.constant == doctest::Approx(expected_constant).epsilon(1e-12));
  CHECK(find_param(rep, "rhs_rho") == doctest::Approx(48.0 * std::sqrt(2.0)));
}

TEST_CASE("elementary bound battery runs clean") {
  const VerificationReport rep = verify_pointwise_bounds(2000, 424242);
  CHECK(rep.pass);
  CHECK(rep.name == "pointwise_bounds");
  CHECK(rep.lhs <= 1.0 + 1e-9);
  CHECK(find_param(rep, "violations") == 0.0);
  // deterministic for a fixed seed
  const VerificationReport again = verify_pointwise_bounds(2000, 424242);
  CHECK(rep.lhs == again.lhs);
}
