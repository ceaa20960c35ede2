#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

namespace betacurv {

// Affine m-plane given by a base point and an orthonormal basis of the
// direction space (columns). dim 0 is a point, dim n-1 a hyperplane.
class AffinePlane {
 public:
  AffinePlane(Eigen::VectorXd base, Eigen::MatrixXd basis);

  // Plane through `base` spanned by the first `dim` coordinate axes.
  static AffinePlane span_axes(Eigen::VectorXd base, int dim);

  int ambient_dim() const { return static_cast<int>(base_.size()); }
  int dim() const { return static_cast<int>(basis_.cols()); }
  const Eigen::VectorXd& base() const { return base_; }
  const Eigen::MatrixXd& basis() const { return basis_; }

  Eigen::VectorXd project(const Eigen::VectorXd& y) const;
  double distance_to(const Eigen::VectorXd& y) const;

 private:
  Eigen::VectorXd base_;
  Eigen::MatrixXd basis_;
};

// Exact Euclidean distance from y to the plane.
double dist_to_plane(const Eigen::VectorXd& y, const AffinePlane& plane);

// Smallest affine plane containing the points. Rank decisions use the
// singular value threshold 1e-10 * (largest singular value + 1), so exactly
// degenerate inputs produce genuinely lower-dimensional hulls.
AffinePlane affine_hull(const Eigen::MatrixXd& points);
AffinePlane affine_hull(std::span<const Eigen::VectorXd> points);

// Largest pairwise distance; 0 for fewer than two points.
double diam(const Eigen::MatrixXd& points);
double diam(std::span<const Eigen::VectorXd> points);

// Minimal vertex height of an (m+2)-point tuple: min over j of the distance
// from points[j] to the affine hull of the remaining points. Zero exactly
// when some vertex lies in the hull of the rest.
double h_min(const Eigen::MatrixXd& points, int m);
double h_min(std::span<const Eigen::VectorXd> points, int m);

// k-dimensional volume of the simplex spanned by k+1 points,
// sqrt(det(G^T G)) / k!; 0 for degenerate simplices.
double simplex_measure(const Eigen::MatrixXd& points);
double simplex_measure(std::span<const Eigen::VectorXd> points);

// Menger curvature of a point triple: 4 * area / product of side lengths,
// the inverse circumradius. 0 when the points are collinear or coincide.
double menger_c(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& z);

// Normalized simplex size of an (m+2)-point tuple:
// volume of the (m+1)-simplex / diam^(m+1). 0 when diam is 0.
double kappa(const Eigen::MatrixXd& points, int m);
double kappa(std::span<const Eigen::VectorXd> points, int m);

}  // namespace betacurv
