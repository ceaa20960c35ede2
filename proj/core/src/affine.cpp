#include "betacurv/affine.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/QR>

namespace betacurv {

namespace {

void require(bool condition, const char* message) {
  if (!condition) throw std::invalid_argument(message);
}

Eigen::MatrixXd pack_columns(std::span<const Eigen::VectorXd> points) {
  require(!points.empty(), "empty point list");
  const Eigen::Index n = points.front().size();
  Eigen::MatrixXd m(n, static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    require(points[i].size() == n, "point dimension mismatch");
    m.col(static_cast<Eigen::Index>(i)) = points[i];
  }
  return m;
}

// Factorial up to the simplex orders we meet (k <= ambient dim).
double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

AffinePlane::AffinePlane(Eigen::VectorXd base, Eigen::MatrixXd basis)
    : base_(std::move(base)), basis_(std::move(basis)) {
  require(base_.size() > 0, "AffinePlane: empty base point");
  require(basis_.rows() == base_.size(), "AffinePlane: basis/base dimension mismatch");
  require(basis_.cols() <= basis_.rows(), "AffinePlane: too many basis vectors");
  require(base_.allFinite() && basis_.allFinite(), "AffinePlane: non-finite input");
  if (basis_.cols() > 0) {
    const Eigen::MatrixXd gram = basis_.transpose() * basis_;
    const double defect =
        (gram - Eigen::MatrixXd::Identity(basis_.cols(), basis_.cols())).cwiseAbs().maxCoeff();
    require(defect <= 1.0e-12, "AffinePlane: basis is not orthonormal");
  }
}

AffinePlane AffinePlane::span_axes(Eigen::VectorXd base, int dim) {
  require(dim >= 0 && dim <= base.size(), "AffinePlane::span_axes: bad dimension");
  const Eigen::Index n = base.size();
  return AffinePlane(std::move(base),
                     Eigen::MatrixXd::Identity(n, n).leftCols(dim));
}

Eigen::VectorXd AffinePlane::project(const Eigen::VectorXd& y) const {
  require(y.size() == base_.size(), "AffinePlane::project: dimension mismatch");
  if (basis_.cols() == 0) return base_;
  return base_ + basis_ * (basis_.transpose() * (y - base_));
}

double AffinePlane::distance_to(const Eigen::VectorXd& y) const {
  require(y.size() == base_.size(), "AffinePlane::distance_to: dimension mismatch");
  Eigen::VectorXd d = y - base_;
  const Eigen::Index r = basis_.cols();
  if (r == 0) return d.norm();
  const Eigen::Index n = base_.size();
  if (r >= n) return 0.0;

  // Householder-triangularize a copy of the basis, dragging d along, then
  // read the orthogonal component off the tail of d. Unlike the projection
  // formula d - B B^T d this keeps structural zeros exact: a point lying in
  // the plane at coordinates the basis spans exactly comes out at distance
  // exactly 0, which downstream exact-flatness guarantees rely on.
  Eigen::MatrixXd t = basis_;
  for (Eigen::Index j = 0; j < r; ++j) {
    const Eigen::Index len = n - j;
    Eigen::VectorXd v = t.col(j).tail(len);
    const double norm = v.norm();
    if (norm == 0.0) continue;
    v[0] += v[0] >= 0.0 ? norm : -norm;
    const double vsq = v.squaredNorm();
    if (vsq == 0.0) continue;
    for (Eigen::Index c = j; c < r; ++c) {
      auto col = t.col(c).tail(len);
      col -= (2.0 * v.dot(col) / vsq) * v;
    }
    auto dcol = d.tail(len);
    dcol -= (2.0 * v.dot(dcol) / vsq) * v;
  }
  return d.tail(n - r).norm();
}

double dist_to_plane(const Eigen::VectorXd& y, const AffinePlane& plane) {
  return plane.distance_to(y);
}

AffinePlane affine_hull(const Eigen::MatrixXd& points) {
  require(points.cols() >= 1, "affine_hull: need at least one point");
  require(points.allFinite(), "affine_hull: non-finite input");
  const Eigen::Index n = points.rows();
  const Eigen::Index k = points.cols();
  Eigen::VectorXd base = points.col(0);
  if (k == 1) return AffinePlane(std::move(base), Eigen::MatrixXd(n, 0));

  Eigen::MatrixXd diff(n, k - 1);
  for (Eigen::Index j = 1; j < k; ++j) diff.col(j - 1) = points.col(j) - base;

  // Rank-revealing QR of the difference vectors. Two properties matter here:
  // the rank can never exceed the number of differences (a scatter-matrix
  // spectrum loses that guarantee once eigensolver noise outgrows a squared
  // threshold, and three points would occasionally "span" all of R^3), and
  // Householder reflectors never mix in a coordinate axis that is
  // identically zero in the input, so axis-aligned flat data keeps exact
  // zeros in the basis and exact distances downstream.
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(diff);
  qr.setThreshold(1.0e-10);  // relative to the largest pivot
  const Eigen::Index rank = qr.rank();
  if (rank == 0) return AffinePlane(std::move(base), Eigen::MatrixXd(n, 0));
  Eigen::MatrixXd basis = qr.householderQ() * Eigen::MatrixXd::Identity(n, rank);
  return AffinePlane(std::move(base), std::move(basis));
}

AffinePlane affine_hull(std::span<const Eigen::VectorXd> points) {
  return affine_hull(pack_columns(points));
}

double diam(const Eigen::MatrixXd& points) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < points.cols(); ++i) {
    for (Eigen::Index j = i + 1; j < points.cols(); ++j) {
      best = std::max(best, (points.col(i) - points.col(j)).norm());
    }
  }
  return best;
}

double diam(std::span<const Eigen::VectorXd> points) {
  if (points.empty()) return 0.0;
  return diam(pack_columns(points));
}

double h_min(const Eigen::MatrixXd& points, int m) {
  require(m >= 1, "h_min: m must be >= 1");
  require(points.cols() == m + 2, "h_min: tuple must hold m+2 points");
  // The minimum is zero exactly when the tuple spans at most an m-plane
  // (then some vertex sits in the hull of the rest, and conversely). Deciding
  // that once on the full tuple, with the same rank threshold the per-vertex
  // hulls use, returns the zero exactly even when the degeneracy is not axis
  // aligned: repeated points, or collinear subsets along a slanted line,
  // would otherwise leak rounding-sized distances from the fitted hulls.
  if (affine_hull(points).dim() <= m) return 0.0;
  const Eigen::Index n = points.rows();
  const Eigen::Index k = points.cols();
  double best = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd rest(n, k - 1);
  for (Eigen::Index j = 0; j < k; ++j) {
    Eigen::Index col = 0;
    for (Eigen::Index i = 0; i < k; ++i) {
      if (i != j) rest.col(col++) = points.col(i);
    }
    best = std::min(best, affine_hull(rest).distance_to(points.col(j)));
    if (best == 0.0) return 0.0;
  }
  return best;
}

double h_min(std::span<const Eigen::VectorXd> points, int m) {
  return h_min(pack_columns(points), m);
}

double simplex_measure(const Eigen::MatrixXd& points) {
  require(points.cols() >= 1, "simplex_measure: need at least one point");
  const Eigen::Index k = points.cols() - 1;
  if (k == 0) return 0.0;
  Eigen::MatrixXd edges(points.rows(), k);
  for (Eigen::Index j = 1; j < points.cols(); ++j) {
    edges.col(j - 1) = points.col(j) - points.col(0);
  }
  if (k > points.rows()) return 0.0;  // more directions than dimensions
  const double gram_det = (edges.transpose() * edges).determinant();
  if (gram_det <= 0.0) return 0.0;  // degenerate (clamps rounding noise too)
  return std::sqrt(gram_det) / factorial(static_cast<int>(k));
}

double simplex_measure(std::span<const Eigen::VectorXd> points) {
  return simplex_measure(pack_columns(points));
}

double menger_c(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& z) {
  const double a = (x - y).norm();
  const double b = (y - z).norm();
  const double c = (z - x).norm();
  if (a == 0.0 || b == 0.0 || c == 0.0) return 0.0;
  Eigen::MatrixXd pts(x.size(), 3);
  pts.col(0) = x;
  pts.col(1) = y;
  pts.col(2) = z;
  const double area = simplex_measure(pts);
  return 4.0 * area / (a * b * c);
}

double kappa(const Eigen::MatrixXd& points, int m) {
  require(m >= 1, "kappa: m must be >= 1");
  require(points.cols() == m + 2, "kappa: tuple must hold m+2 points");
  const double d = diam(points);
  if (d == 0.0) return 0.0;
  return simplex_measure(points) / std::pow(d, m + 1);
}

double kappa(std::span<const Eigen::VectorXd> points, int m) {
  return kappa(pack_columns(points), m);
}

}  // namespace betacurv
