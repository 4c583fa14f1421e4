#include "elast/fem_basis.hpp"

#include <cmath>
#include <string>

#include "elast/errors.hpp"

namespace elast {

namespace {

void add_orbit3(QuadRule& rule, double a, double w) {
  const double b = 1.0 - 2.0 * a;
  rule.points.push_back({a, a, b});
  rule.points.push_back({a, b, a});
  rule.points.push_back({b, a, a});
  for (int i = 0; i < 3; ++i) rule.weights.push_back(w);
}

QuadRule make_rule(int degree) {
  QuadRule rule;
  rule.degree = degree;
  switch (degree) {
    case 1:
      rule.points = {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}};
      rule.weights = {1.0};
      break;
    case 2:
      add_orbit3(rule, 1.0 / 6.0, 1.0 / 3.0);
      break;
    case 3: {
      // Strang-Fix six point rule, all permutations of (a, b, c)
      const double a = 0.659027622374092, b = 0.231933368553031, c = 0.109039009072877;
      rule.points = {{a, b, c}, {a, c, b}, {b, a, c}, {b, c, a}, {c, a, b}, {c, b, a}};
      rule.weights.assign(6, 1.0 / 6.0);
      break;
    }
    case 5: {
      const double s = std::sqrt(15.0);
      rule.points = {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}};
      rule.weights = {9.0 / 40.0};
      add_orbit3(rule, (6.0 - s) / 21.0, (155.0 - s) / 1200.0);
      add_orbit3(rule, (6.0 + s) / 21.0, (155.0 + s) / 1200.0);
      break;
    }
    default:
      throw std::invalid_argument("unsupported quadrature degree " + std::to_string(degree));
  }
  return rule;
}

}  // namespace

const QuadRule& quadrature_rule(int degree) {
  static const QuadRule deg1 = make_rule(1);
  static const QuadRule deg2 = make_rule(2);
  static const QuadRule deg3 = make_rule(3);
  static const QuadRule deg5 = make_rule(5);
  switch (degree) {
    case 1: return deg1;
    case 2: return deg2;
    case 3: return deg3;
    case 5: return deg5;
    default:
      throw std::invalid_argument("unsupported quadrature degree " + std::to_string(degree));
  }
}

const EdgeRule& edge_gauss_rule() {
  static const EdgeRule rule = [] {
    const double d = 0.5 / std::sqrt(3.0);
    return EdgeRule{{0.5 - d, 0.5 + d}, {0.5, 0.5}};
  }();
  return rule;
}

P1Eval p1_eval(const Barycentric& point) {
  return P1Eval{point,
                {Eigen::Vector2d(-1.0, -1.0), Eigen::Vector2d(1.0, 0.0),
                 Eigen::Vector2d(0.0, 1.0)}};
}

Eigen::Vector2d TriangleGeometry::outward_normal(int i) const {
  const Eigen::Vector2d d = vertices[(i + 2) % 3] - vertices[(i + 1) % 3];
  // counterclockwise vertices: the edge traversed from i+1 to i+2 has the
  // domain on its left, so the outward normal is the right-hand normal
  return Eigen::Vector2d(d.y(), -d.x()).normalized();
}

TriangleGeometry triangle_geometry(const Mesh& mesh, int t) {
  TriangleGeometry g;
  for (int i = 0; i < 3; ++i) {
    const Point p = mesh.vertices[mesh.triangles[t][i]];
    g.vertices[i] = Eigen::Vector2d(p.x, p.y);
  }
  const Eigen::Vector2d e1 = g.vertices[1] - g.vertices[0];
  const Eigen::Vector2d e2 = g.vertices[2] - g.vertices[0];
  const double det = e1.x() * e2.y() - e1.y() * e2.x();
  if (!(det > 0.0)) {
    throw AssemblyError("triangle " + std::to_string(t) + " is degenerate or clockwise");
  }
  g.area = 0.5 * det;
  // grad lambda_i is the inward edge normal scaled by 1/height
  for (int i = 0; i < 3; ++i) {
    const Eigen::Vector2d d = g.vertices[(i + 2) % 3] - g.vertices[(i + 1) % 3];
    g.grad_lambda[i] = Eigen::Vector2d(-d.y(), d.x()) / det;
  }
  return g;
}

LocalBubbleSpace::LocalBubbleSpace(const TriangleGeometry& geom,
                                   std::array<bool, 3> interior_edge)
    : grad_lambda_(geom.grad_lambda) {
  for (int i = 0; i < 3; ++i) {
    if (interior_edge[i]) edges_.push_back(i);
  }
  if (edges_.size() < 2) {
    throw EstimatorError("bubble space needs at least two interior edges, got " +
                         std::to_string(edges_.size()));
  }
}

double LocalBubbleSpace::value(int k, const Barycentric& b) const {
  const int e = edge_of(k);
  if (e < 0) return 27.0 * b[0] * b[1] * b[2];
  return 4.0 * b[(e + 1) % 3] * b[(e + 2) % 3];
}

Eigen::Vector2d LocalBubbleSpace::gradient(int k, const Barycentric& b) const {
  const int e = edge_of(k);
  if (e < 0) {
    return 27.0 * (b[1] * b[2] * grad_lambda_[0] + b[0] * b[2] * grad_lambda_[1] +
                   b[0] * b[1] * grad_lambda_[2]);
  }
  const int i = (e + 1) % 3, j = (e + 2) % 3;
  return 4.0 * (b[j] * grad_lambda_[i] + b[i] * grad_lambda_[j]);
}

}  // namespace elast
