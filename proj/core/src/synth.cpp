#include "betacurv/synth.hpp"

#include <cmath>
#include <stdexcept>

#include "betacurv/rng.hpp"

namespace betacurv {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require(bool condition, const char* message) {
  if (!condition) throw std::invalid_argument(message);
}

}  // namespace

PointCloudMeasure synthesize_segment(const SegmentSpec& spec) {
  require(spec.count >= 1, "segment: count must be >= 1");
  require(spec.ambient_dim >= 2, "segment: ambient_dim must be >= 2");
  require(std::isfinite(spec.length) && spec.length > 0.0, "segment: bad length");
  Eigen::MatrixXd pos = Eigen::MatrixXd::Zero(spec.ambient_dim, spec.count);
  for (int i = 0; i < spec.count; ++i) {
    pos(0, i) = spec.count == 1 ? 0.0 : spec.length * i / (spec.count - 1);
  }
  return PointCloudMeasure(std::move(pos), Eigen::VectorXd::Ones(spec.count));
}

PointCloudMeasure synthesize_circle(const CircleSpec& spec) {
  require(spec.count >= 1, "circle: count must be >= 1");
  require(std::isfinite(spec.radius) && spec.radius > 0.0, "circle: bad radius");
  Eigen::MatrixXd pos(2, spec.count);
  for (int i = 0; i < spec.count; ++i) {
    const double angle = 2.0 * kPi * i / spec.count;
    pos(0, i) = spec.radius * std::cos(angle);
    pos(1, i) = spec.radius * std::sin(angle);
  }
  return PointCloudMeasure(std::move(pos), Eigen::VectorXd::Ones(spec.count));
}

PointCloudMeasure synthesize_plane_grid(const PlaneGridSpec& spec) {
  require(spec.per_side >= 1, "plane grid: per_side must be >= 1");
  require(spec.ambient_dim >= 3, "plane grid: ambient_dim must be >= 3");
  require(std::isfinite(spec.side) && spec.side > 0.0, "plane grid: bad side");
  const int count = spec.per_side * spec.per_side;
  Eigen::MatrixXd pos = Eigen::MatrixXd::Zero(spec.ambient_dim, count);
  int k = 0;
  for (int i = 0; i < spec.per_side; ++i) {
    for (int j = 0; j < spec.per_side; ++j, ++k) {
      pos(0, k) = spec.side * i / spec.per_side;
      pos(1, k) = spec.side * j / spec.per_side;
    }
  }
  return PointCloudMeasure(std::move(pos), Eigen::VectorXd::Ones(count));
}

PointCloudMeasure synthesize_sphere(const SphereSpec& spec) {
  require(spec.count >= 1, "sphere: count must be >= 1");
  require(std::isfinite(spec.radius) && spec.radius > 0.0, "sphere: bad radius");
  // Fibonacci lattice: even coverage without randomness.
  const double golden_angle = kPi * (3.0 - std::sqrt(5.0));
  Eigen::MatrixXd pos(3, spec.count);
  for (int i = 0; i < spec.count; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / spec.count;
    const double ring = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double angle = golden_angle * i;
    pos(0, i) = spec.radius * ring * std::cos(angle);
    pos(1, i) = spec.radius * ring * std::sin(angle);
    pos(2, i) = spec.radius * z;
  }
  return PointCloudMeasure(std::move(pos), Eigen::VectorXd::Ones(spec.count));
}

PointCloudMeasure synthesize_random_cloud(const RandomCloudSpec& spec, std::uint64_t seed) {
  require(spec.count >= 1, "random cloud: count must be >= 1");
  require(spec.ambient_dim >= 2, "random cloud: ambient_dim must be >= 2");
  require(spec.weight_hi > spec.weight_lo && spec.weight_lo >= 0.0,
          "random cloud: bad weight range");
  SplitMix64 rng(seed);
  Eigen::MatrixXd pos(spec.ambient_dim, spec.count);
  Eigen::VectorXd wts(spec.count);
  for (int i = 0; i < spec.count; ++i) {
    for (int d = 0; d < spec.ambient_dim; ++d) {
      pos(d, i) = rng.uniform(-spec.box_halfwidth, spec.box_halfwidth);
    }
    // uniform_open keeps weights strictly above weight_lo.
    wts[i] = spec.weight_lo + (spec.weight_hi - spec.weight_lo) * rng.uniform_open();
  }
  return PointCloudMeasure(std::move(pos), std::move(wts));
}

PointCloudMeasure make_triangle() {
  Eigen::MatrixXd pos(2, 3);
  pos << 0.0, 1.0, 0.0,
         0.0, 0.0, 1.0;
  return PointCloudMeasure(std::move(pos), Eigen::VectorXd::Ones(3));
}

PointCloudMeasure add_isotropic_noise(const PointCloudMeasure& mu, double amplitude,
                                      std::uint64_t seed) {
  require(std::isfinite(amplitude) && amplitude >= 0.0, "noise: bad amplitude");
  if (amplitude == 0.0 || mu.atom_count() == 0) {
    return PointCloudMeasure(mu.positions(), mu.weights());
  }
  SplitMix64 rng(seed);
  const int n = mu.ambient_dim();
  Eigen::MatrixXd pos = mu.positions();
  Eigen::VectorXd dir(n);
  for (int i = 0; i < mu.atom_count(); ++i) {
    double norm = 0.0;
    do {
      for (int d = 0; d < n; ++d) dir[d] = rng.normal();
      norm = dir.norm();
    } while (norm == 0.0);
    pos.col(i) += (amplitude * rng.uniform() / norm) * dir;
  }
  return PointCloudMeasure(std::move(pos), mu.weights());
}

}  // namespace betacurv
