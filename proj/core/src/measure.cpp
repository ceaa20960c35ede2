#include "betacurv/measure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "betacurv/numeric.hpp"

namespace betacurv {

namespace {

void require(bool condition, const char* message) {
  if (!condition) throw std::invalid_argument(message);
}

}  // namespace

Ball::Ball(Eigen::VectorXd center_in, double radius_in)
    : center(std::move(center_in)), radius(radius_in) {
  require(center.size() > 0, "Ball: empty center");
  require(center.allFinite(), "Ball: non-finite center");
  require(std::isfinite(radius) && radius > 0.0, "Ball: radius must be positive and finite");
}

CubeRegion::CubeRegion(Eigen::VectorXd lower, double side)
    : lower_(std::move(lower)), side_(side) {
  require(lower_.size() > 0, "CubeRegion: empty corner");
  require(lower_.allFinite(), "CubeRegion: non-finite corner");
  require(std::isfinite(side_) && side_ > 0.0, "CubeRegion: side must be positive and finite");
}

bool CubeRegion::contains(const Eigen::VectorXd& y) const {
  require(y.size() == lower_.size(), "CubeRegion::contains: dimension mismatch");
  for (int i = 0; i < lower_.size(); ++i) {
    if (!(y[i] >= lower_[i] && y[i] < lower_[i] + side_)) return false;
  }
  return true;
}

CubeRegion CubeRegion::expanded(double factor) const {
  require(std::isfinite(factor) && factor > 0.0, "CubeRegion::expanded: bad factor");
  const double grow = 0.5 * (factor - 1.0) * side_;
  return CubeRegion(lower_.array() - grow, factor * side_);
}

DyadicCube::DyadicCube(int level, std::vector<std::int64_t> corner)
    : level_(level), corner_(std::move(corner)) {
  require(!corner_.empty(), "DyadicCube: empty corner");
  require(level_ > -1000 && level_ < 1000, "DyadicCube: level out of range");
}

Eigen::VectorXd DyadicCube::lower() const {
  Eigen::VectorXd lo(corner_.size());
  for (std::size_t i = 0; i < corner_.size(); ++i) {
    lo[static_cast<int>(i)] = std::ldexp(static_cast<double>(corner_[i]), -level_);
  }
  return lo;
}

Eigen::VectorXd DyadicCube::center() const {
  Eigen::VectorXd c(corner_.size());
  for (std::size_t i = 0; i < corner_.size(); ++i) {
    c[static_cast<int>(i)] = std::ldexp(static_cast<double>(corner_[i]) + 0.5, -level_);
  }
  return c;
}

bool DyadicCube::contains(const Eigen::VectorXd& y) const {
  require(y.size() == static_cast<Eigen::Index>(corner_.size()),
          "DyadicCube::contains: dimension mismatch");
  // ldexp is exact, so both faces are the exact dyadic rationals and the
  // half-open comparison has no rounding slop.
  for (std::size_t i = 0; i < corner_.size(); ++i) {
    const double lo = std::ldexp(static_cast<double>(corner_[i]), -level_);
    const double hi = std::ldexp(static_cast<double>(corner_[i]) + 1.0, -level_);
    const double v = y[static_cast<int>(i)];
    if (!(v >= lo && v < hi)) return false;
  }
  return true;
}

CubeRegion DyadicCube::region() const { return CubeRegion(lower(), side()); }

DyadicCube DyadicCube::containing(const Eigen::VectorXd& point, int level) {
  require(point.allFinite(), "DyadicCube::containing: non-finite point");
  std::vector<std::int64_t> corner(point.size());
  for (int i = 0; i < point.size(); ++i) {
    const double scaled = std::ldexp(point[i], level);
    require(std::abs(scaled) < 9.0e15, "DyadicCube::containing: coordinate too large for level");
    corner[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(std::floor(scaled));
  }
  return DyadicCube(level, std::move(corner));
}

PointCloudMeasure::PointCloudMeasure(Eigen::MatrixXd positions, Eigen::VectorXd weights)
    : positions_(std::move(positions)), weights_(std::move(weights)) {
  require(positions_.rows() > 0, "PointCloudMeasure: ambient dimension must be positive");
  require(positions_.cols() == weights_.size(),
          "PointCloudMeasure: positions/weights size mismatch");
  require(positions_.allFinite(), "PointCloudMeasure: non-finite coordinate");
  for (int i = 0; i < weights_.size(); ++i) {
    require(std::isfinite(weights_[i]) && weights_[i] >= 0.0,
            "PointCloudMeasure: weights must be finite and nonnegative");
  }
  KahanSum mass;
  for (int i = 0; i < weights_.size(); ++i) mass.add(weights_[i]);
  total_mass_ = mass.value();
  index_.build(positions_);
}

PointCloudMeasure::PointCloudMeasure(const PointCloudMeasure& other)
    : positions_(other.positions_),
      weights_(other.weights_),
      total_mass_(other.total_mass_),
      index_(other.index_) {
  index_.rebind(positions_);
}

PointCloudMeasure::PointCloudMeasure(PointCloudMeasure&& other) noexcept
    : positions_(std::move(other.positions_)),
      weights_(std::move(other.weights_)),
      total_mass_(other.total_mass_),
      index_(std::move(other.index_)) {
  index_.rebind(positions_);
}

PointCloudMeasure& PointCloudMeasure::operator=(const PointCloudMeasure& other) {
  if (this != &other) {
    positions_ = other.positions_;
    weights_ = other.weights_;
    total_mass_ = other.total_mass_;
    index_ = other.index_;
    index_.rebind(positions_);
  }
  return *this;
}

PointCloudMeasure& PointCloudMeasure::operator=(PointCloudMeasure&& other) noexcept {
  if (this != &other) {
    positions_ = std::move(other.positions_);
    weights_ = std::move(other.weights_);
    total_mass_ = other.total_mass_;
    index_ = std::move(other.index_);
    index_.rebind(positions_);
  }
  return *this;
}

PointCloudMeasure PointCloudMeasure::empty(int ambient_dim) {
  return PointCloudMeasure(Eigen::MatrixXd(ambient_dim, 0), Eigen::VectorXd(0));
}

std::vector<int> PointCloudMeasure::ball_indices(const Ball& ball) const {
  require(ball.center.size() == positions_.rows(), "ball_indices: dimension mismatch");
  std::vector<int> out;
  index_.ball_query(ball.center, ball.radius, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> PointCloudMeasure::cube_indices(const CubeRegion& cube) const {
  require(cube.ambient_dim() == ambient_dim(), "cube_indices: dimension mismatch");
  std::vector<int> out;
  index_.box_query(cube.lower(), cube.upper(), out);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> PointCloudMeasure::cube_indices(const DyadicCube& cube) const {
  require(cube.ambient_dim() == ambient_dim(), "cube_indices: dimension mismatch");
  // Route the coarse query through the kd-tree, then confirm with the exact
  // dyadic membership test (identical arithmetic to DyadicCube::contains).
  std::vector<int> out;
  index_.box_query(cube.lower(), cube.region().upper(), out);
  std::vector<int> confirmed;
  confirmed.reserve(out.size());
  for (int idx : out) {
    if (cube.contains(positions_.col(idx))) confirmed.push_back(idx);
  }
  std::sort(confirmed.begin(), confirmed.end());
  return confirmed;
}

PointCloudMeasure PointCloudMeasure::restrict_to(std::span<const int> indices) const {
  Eigen::MatrixXd pos(positions_.rows(), static_cast<Eigen::Index>(indices.size()));
  Eigen::VectorXd wts(static_cast<Eigen::Index>(indices.size()));
  Eigen::Index col = 0;
  for (int idx : indices) {
    require(idx >= 0 && idx < atom_count(), "restrict_to: index out of range");
    pos.col(col) = positions_.col(idx);
    wts[col] = weights_[idx];
    ++col;
  }
  return PointCloudMeasure(std::move(pos), std::move(wts));
}

double PointCloudMeasure::mass_of(std::span<const int> indices) const {
  KahanSum mass;
  for (int idx : indices) mass.add(weights_[idx]);
  return mass.value();
}

double PointCloudMeasure::mass_in(const Ball& ball) const {
  const auto idx = ball_indices(ball);
  return mass_of(idx);
}

double PointCloudMeasure::mass_in(const CubeRegion& cube) const {
  const auto idx = cube_indices(cube);
  return mass_of(idx);
}

double PointCloudMeasure::mass_in(const DyadicCube& cube) const {
  const auto idx = cube_indices(cube);
  return mass_of(idx);
}

PointCloudMeasure ball_restrict(const PointCloudMeasure& mu, const Ball& ball) {
  const auto idx = mu.ball_indices(ball);
  return mu.restrict_to(idx);
}

PointCloudMeasure cube_restrict(const PointCloudMeasure& mu, const CubeRegion& cube) {
  const auto idx = mu.cube_indices(cube);
  return mu.restrict_to(idx);
}

PointCloudMeasure cube_restrict(const PointCloudMeasure& mu, const DyadicCube& cube) {
  const auto idx = mu.cube_indices(cube);
  return mu.restrict_to(idx);
}

double theta_ball(const PointCloudMeasure& mu, const Eigen::VectorXd& x, double r, int m) {
  require(m > 0 && m <= mu.ambient_dim(), "theta_ball: need 0 < m <= ambient dimension");
  require(std::isfinite(r) && r > 0.0, "theta_ball: radius must be positive and finite");
  const double mass = mu.mass_in(Ball(x, r));
  if (mass == 0.0) return 0.0;
  return mass / (unit_ball_volume(m) * std::pow(r, m));
}

double theta_cube(const PointCloudMeasure& mu, const DyadicCube& cube, int m) {
  require(m > 0 && m <= mu.ambient_dim(), "theta_cube: need 0 < m <= ambient dimension");
  const double mass = mu.mass_in(cube);
  if (mass == 0.0) return 0.0;
  return mass / std::pow(cube.side(), m);
}

std::vector<DyadicCube> dyadic_cubes_touching(const PointCloudMeasure& mu, int level) {
  std::vector<std::vector<std::int64_t>> corners;
  corners.reserve(mu.atom_count());
  for (int i = 0; i < mu.atom_count(); ++i) {
    corners.push_back(DyadicCube::containing(mu.position(i), level).corner());
  }
  std::sort(corners.begin(), corners.end());
  corners.erase(std::unique(corners.begin(), corners.end()), corners.end());

  std::vector<DyadicCube> cubes;
  cubes.reserve(corners.size());
  for (auto& corner : corners) cubes.emplace_back(level, std::move(corner));
  return cubes;
}

CubeRegion expand_cube(const DyadicCube& cube, double factor) {
  return cube.region().expanded(factor);
}

PointCloudMeasure similarity_transform(const PointCloudMeasure& mu, double scale,
                                       const Eigen::MatrixXd& rotation,
                                       const Eigen::VectorXd& translation,
                                       double weight_exponent) {
  const int n = mu.ambient_dim();
  require(std::isfinite(scale) && scale > 0.0, "similarity_transform: scale must be positive");
  require(rotation.rows() == n && rotation.cols() == n,
          "similarity_transform: rotation shape mismatch");
  require(translation.size() == n, "similarity_transform: translation size mismatch");
  const double defect =
      (rotation.transpose() * rotation - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  require(defect <= 1.0e-12, "similarity_transform: rotation is not orthogonal");

  Eigen::MatrixXd pos = scale * (rotation * mu.positions());
  pos.colwise() += translation;
  Eigen::VectorXd wts = std::pow(scale, weight_exponent) * mu.weights();
  return PointCloudMeasure(std::move(pos), std::move(wts));
}

}  // namespace betacurv
