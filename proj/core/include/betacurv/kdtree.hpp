#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

namespace betacurv {

// Distance evaluated axis by axis in ascending order. The kd-tree box bound
// below uses the same loop shape; floating point rounding is monotone, so a
// box lower bound can never exceed the distance of a point inside the box and
// boundary atoms (|y - c| == r exactly) are never pruned away.
inline double squared_distance(const double* a, const double* b, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

// Median-split kd-tree over the columns of a dim x count matrix. Queries are
// exact: closed balls, half-open axis boxes. Returned indices are in tree
// order; callers that need the original atom order sort afterwards.
class KdTree {
 public:
  KdTree() = default;

  void build(const Eigen::MatrixXd& points) {
    points_ = &points;
    const int count = static_cast<int>(points.cols());
    order_.resize(count);
    std::iota(order_.begin(), order_.end(), 0);
    nodes_.clear();
    if (count > 0) build_node(0, count);
  }

  // The tree keeps a pointer into the caller's matrix. When the owner copies
  // or moves, the matrix relocates but its values do not, so the node
  // structure stays valid and only the pointer needs updating.
  void rebind(const Eigen::MatrixXd& points) { points_ = &points; }

  void ball_query(const Eigen::VectorXd& center, double radius,
                  std::vector<int>& out) const {
    out.clear();
    if (nodes_.empty()) return;
    ball_recurse(0, center.data(), radius * radius, out);
  }

  void box_query(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                 std::vector<int>& out) const {
    out.clear();
    if (nodes_.empty()) return;
    box_recurse(0, lo, hi, out);
  }

 private:
  static constexpr int kLeafSize = 8;

  struct Node {
    Eigen::VectorXd box_lo, box_hi;
    int begin = 0, end = 0;     // range in order_ (leaves only)
    int left = -1, right = -1;  // children (internal only)
    int axis = -1;
    double split = 0.0;
  };

  int build_node(int begin, int end) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    Node& node = nodes_.back();
    node.begin = begin;
    node.end = end;

    const int dim = static_cast<int>(points_->rows());
    node.box_lo = Eigen::VectorXd::Constant(dim, std::numeric_limits<double>::infinity());
    node.box_hi = Eigen::VectorXd::Constant(dim, -std::numeric_limits<double>::infinity());
    for (int i = begin; i < end; ++i) {
      const auto p = points_->col(order_[i]);
      node.box_lo = node.box_lo.cwiseMin(p);
      node.box_hi = node.box_hi.cwiseMax(p);
    }

    if (end - begin <= kLeafSize) return id;

    int axis = 0;
    (node.box_hi - node.box_lo).maxCoeff(&axis);
    if (node.box_hi[axis] == node.box_lo[axis]) return id;  // all points equal

    const int mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid,
                     order_.begin() + end, [&](int a, int b) {
                       const double pa = (*points_)(axis, a);
                       const double pb = (*points_)(axis, b);
                       return pa != pb ? pa < pb : a < b;
                     });

    // Index of `id` into nodes_ can dangle across the recursive calls below
    // (vector reallocation), so finish writing through the reference last.
    const int axis_copy = axis;
    const double split_copy = (*points_)(axis, order_[mid]);
    const int left = build_node(begin, mid);
    const int right = build_node(mid, end);
    Node& fixed = nodes_[id];
    fixed.axis = axis_copy;
    fixed.split = split_copy;
    fixed.left = left;
    fixed.right = right;
    fixed.begin = fixed.end = 0;
    return id;
  }

  double box_min_squared_distance(const Node& node, const double* c) const {
    const int dim = static_cast<int>(points_->rows());
    double s = 0.0;
    for (int i = 0; i < dim; ++i) {
      double d = 0.0;
      if (c[i] < node.box_lo[i]) {
        d = node.box_lo[i] - c[i];
      } else if (c[i] > node.box_hi[i]) {
        d = c[i] - node.box_hi[i];
      }
      s += d * d;
    }
    return s;
  }

  void ball_recurse(int id, const double* c, double r2, std::vector<int>& out) const {
    const Node& node = nodes_[id];
    if (box_min_squared_distance(node, c) > r2) return;
    if (node.left < 0) {
      const int dim = static_cast<int>(points_->rows());
      for (int i = node.begin; i < node.end; ++i) {
        const int idx = order_[i];
        if (squared_distance(points_->col(idx).data(), c, dim) <= r2) out.push_back(idx);
      }
      return;
    }
    ball_recurse(node.left, c, r2, out);
    ball_recurse(node.right, c, r2, out);
  }

  void box_recurse(int id, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                   std::vector<int>& out) const {
    const Node& node = nodes_[id];
    const int dim = static_cast<int>(points_->rows());
    for (int i = 0; i < dim; ++i) {
      if (node.box_lo[i] >= hi[i] || node.box_hi[i] < lo[i]) return;
    }
    if (node.left < 0) {
      for (int i = node.begin; i < node.end; ++i) {
        const int idx = order_[i];
        bool inside = true;
        for (int d = 0; d < dim && inside; ++d) {
          const double y = (*points_)(d, idx);
          inside = y >= lo[d] && y < hi[d];
        }
        if (inside) out.push_back(idx);
      }
      return;
    }
    box_recurse(node.left, lo, hi, out);
    box_recurse(node.right, lo, hi, out);
  }

  const Eigen::MatrixXd* points_ = nullptr;
  std::vector<int> order_;
  std::vector<Node> nodes_;
};

}  // namespace betacurv
