#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "elast/mesh.hpp"

namespace elast {

using Barycentric = std::array<double, 3>;

/// Symmetric rule on the reference triangle. Weights sum to one; multiply by
/// the physical area at the use site.
struct QuadRule {
  std::vector<Barycentric> points;
  std::vector<double> weights;
  int degree = 0;
};

/// Degrees 1 (centroid), 2 (3 points), 3 (6 points) and 5 (7 points).
const QuadRule& quadrature_rule(int degree);

/// Two-point Gauss rule on an edge, as parameters in [0,1] with weights
/// summing to one. Exact for cubics.
struct EdgeRule {
  std::array<double, 2> points;
  std::array<double, 2> weights;
};
const EdgeRule& edge_gauss_rule();

struct P1Eval {
  std::array<double, 3> values;
  /// Gradients with respect to the reference coordinates (xi, eta), where
  /// phi_0 = 1 - xi - eta, phi_1 = xi, phi_2 = eta.
  std::array<Eigen::Vector2d, 3> ref_gradients;
};

P1Eval p1_eval(const Barycentric& point);

/// Affine geometry of one triangle: area, physical barycentric gradients and
/// the map from barycentric to physical coordinates.
struct TriangleGeometry {
  std::array<Eigen::Vector2d, 3> vertices;
  std::array<Eigen::Vector2d, 3> grad_lambda;
  double area = 0.0;

  [[nodiscard]] Eigen::Vector2d map(const Barycentric& b) const {
    return b[0] * vertices[0] + b[1] * vertices[1] + b[2] * vertices[2];
  }
  /// Length of local edge i (opposite vertex i).
  [[nodiscard]] double edge_length(int i) const {
    return (vertices[(i + 1) % 3] - vertices[(i + 2) % 3]).norm();
  }
  /// Unit normal of local edge i pointing out of the triangle.
  [[nodiscard]] Eigen::Vector2d outward_normal(int i) const;
};

/// Throws AssemblyError for nonpositive area.
TriangleGeometry triangle_geometry(const Mesh& mesh, int t);

/// Bubble space on one triangle: one quadratic bubble 4 l_a l_b per interior
/// edge (endpoints a, b) followed by the cubic bubble 27 l_0 l_1 l_2.
class LocalBubbleSpace {
 public:
  /// `interior_edge` flags local edges (edge i opposite vertex i). At least
  /// two must be interior; otherwise EstimatorError.
  LocalBubbleSpace(const TriangleGeometry& geom, std::array<bool, 3> interior_edge);

  [[nodiscard]] int basis_count() const { return static_cast<int>(edges_.size()) + 1; }
  /// Local edge index of basis function k, or -1 for the cubic bubble.
  [[nodiscard]] int edge_of(int k) const {
    return k < static_cast<int>(edges_.size()) ? edges_[k] : -1;
  }
  [[nodiscard]] const std::vector<int>& edge_ids() const { return edges_; }

  [[nodiscard]] double value(int k, const Barycentric& b) const;
  [[nodiscard]] Eigen::Vector2d gradient(int k, const Barycentric& b) const;

 private:
  std::array<Eigen::Vector2d, 3> grad_lambda_;
  std::vector<int> edges_;
};

}  // namespace elast
