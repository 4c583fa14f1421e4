#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Cholesky>

#include "elast/errors.hpp"
#include "elast/fem_basis.hpp"

using namespace elast;

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

// int_T l1^a l2^b l3^c = a! b! c! 2 |T| / (a+b+c+2)!
double moment(int a, int b, int c, double area) {
  return factorial(a) * factorial(b) * factorial(c) * 2.0 * area / factorial(a + b + c + 2);
}

Mesh one_triangle(Point a, Point b, Point c) {
  Mesh m;
  m.vertices = {a, b, c};
  m.on_boundary = {1, 1, 1};
  m.triangles = {{0, 1, 2}};
  m.parent = {-1};
  m.kind = {RefinementKind::root};
  return m;
}

Barycentric random_bary(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double a = u(rng), b = u(rng);
  if (a + b > 1.0) {
    a = 1.0 - a;
    b = 1.0 - b;
  }
  return {1.0 - a - b, a, b};
}

}  // namespace

TEST_CASE("p1 evaluation") {
  const P1Eval v = p1_eval({1.0, 0.0, 0.0});
  CHECK(v.values[0] == 1.0);
  CHECK(v.values[1] == 0.0);
  const P1Eval c = p1_eval({1.0 / 3, 1.0 / 3, 1.0 / 3});
  for (double x : c.values) CHECK(x == doctest::Approx(1.0 / 3));
  std::mt19937 rng(1);
  for (int i = 0; i < 10; ++i) {
    const P1Eval e = p1_eval(random_bary(rng));
    CHECK(e.values[0] + e.values[1] + e.values[2] == doctest::Approx(1.0).epsilon(1e-15));
    const Eigen::Vector2d s = e.ref_gradients[0] + e.ref_gradients[1] + e.ref_gradients[2];
    CHECK(s.norm() == 0.0);
  }
}

TEST_CASE("physical gradients of barycentric coordinates") {
  const Mesh m = one_triangle({0.1, 0.2}, {1.3, 0.4}, {0.5, 1.7});
  const TriangleGeometry g = triangle_geometry(m, 0);
  CHECK((g.grad_lambda[0] + g.grad_lambda[1] + g.grad_lambda[2]).norm() < 1e-14);
  // grad lambda_i . (x_j - x_k) = delta_ij - delta_ik
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double d = g.grad_lambda[i].dot(g.vertices[j] - g.vertices[0]);
      CHECK(d == doctest::Approx((i == j ? 1.0 : 0.0) - (i == 0 ? 1.0 : 0.0)).epsilon(1e-13));
    }
  }
  CHECK(g.area == doctest::Approx(m.signed_area(0)));
  // outward normals point away from the opposite vertex
  for (int i = 0; i < 3; ++i) {
    const Eigen::Vector2d mid = 0.5 * (g.vertices[(i + 1) % 3] + g.vertices[(i + 2) % 3]);
    CHECK(g.outward_normal(i).dot(mid - g.vertices[i]) > 0.0);
    CHECK(g.outward_normal(i).norm() == doctest::Approx(1.0));
  }
  const Mesh cw = one_triangle({0, 0}, {0, 1}, {1, 0});
  CHECK_THROWS_AS(triangle_geometry(cw, 0), AssemblyError);
}

TEST_CASE("quadrature weights and unsupported degrees") {
  for (int d : {1, 2, 3, 5}) {
    const QuadRule& r = quadrature_rule(d);
    double s = 0.0;
    for (double w : r.weights) {
      CHECK(w > 0.0);
      s += w;
    }
    CHECK(s == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r.degree == d);
  }
  CHECK(quadrature_rule(1).points.size() == 1);
  CHECK(quadrature_rule(2).points.size() == 3);
  CHECK(quadrature_rule(5).points.size() == 7);
  CHECK_THROWS_AS(quadrature_rule(4), std::invalid_argument);
  CHECK_THROWS_AS(quadrature_rule(0), std::invalid_argument);
}

TEST_CASE("quadrature exactness against barycentric moments") {
  const double area = 0.5;  // reference triangle
  CHECK(area * quadrature_rule(1).weights[0] == doctest::Approx(0.5));
  // x^2 on the reference triangle is lambda_1^2
  double x2 = 0.0;
  const QuadRule& r2 = quadrature_rule(2);
  for (std::size_t q = 0; q < r2.points.size(); ++q) x2 += area * r2.weights[q] * std::pow(r2.points[q][1], 2);
  CHECK(x2 == doctest::Approx(1.0 / 12.0).epsilon(1e-15));

  for (int d : {1, 2, 3, 5}) {
    const QuadRule& r = quadrature_rule(d);
    for (int a = 0; a <= d; ++a) {
      for (int b = 0; a + b <= d; ++b) {
        for (int c = 0; a + b + c <= d; ++c) {
          double s = 0.0;
          for (std::size_t q = 0; q < r.points.size(); ++q) {
            s += r.weights[q] * std::pow(r.points[q][0], a) * std::pow(r.points[q][1], b) *
                 std::pow(r.points[q][2], c);
          }
          CHECK(area * s == doctest::Approx(moment(a, b, c, area)).epsilon(1e-13));
        }
      }
    }
  }
  // spec example: l1^2 l2^2 l3 with the degree 5 rule
  const QuadRule& r5 = quadrature_rule(5);
  double s = 0.0;
  for (std::size_t q = 0; q < r5.points.size(); ++q) {
    const auto& p = r5.points[q];
    s += r5.weights[q] * p[0] * p[0] * p[1] * p[1] * p[2];
  }
  CHECK(s * 2.0 == doctest::Approx(moment(2, 2, 1, 2.0)).epsilon(1e-14));
}

TEST_CASE("edge gauss rule is exact for cubics") {
  const EdgeRule& e = edge_gauss_rule();
  for (int k = 0; k <= 3; ++k) {
    double s = 0.0;
    for (int q = 0; q < 2; ++q) s += e.weights[q] * std::pow(e.points[q], k);
    CHECK(s == doctest::Approx(1.0 / (k + 1)).epsilon(1e-15));
  }
}

TEST_CASE("bubble space size and preconditions") {
  const Mesh m = one_triangle({0, 0}, {1, 0}, {0, 1});
  const TriangleGeometry g = triangle_geometry(m, 0);
  CHECK(LocalBubbleSpace(g, {true, true, true}).basis_count() == 4);
  CHECK(LocalBubbleSpace(g, {true, false, true}).basis_count() == 3);
  CHECK_THROWS_AS(LocalBubbleSpace(g, {true, false, false}), EstimatorError);
  CHECK_THROWS_AS(LocalBubbleSpace(g, {false, false, false}), EstimatorError);
  const LocalBubbleSpace s(g, {false, true, true});
  CHECK(s.edge_ids() == std::vector<int>{1, 2});
  CHECK(s.edge_of(2) == -1);
}

TEST_CASE("bubble values and vanishing edges") {
  const Mesh m = one_triangle({0.2, 0.1}, {1.1, 0.3}, {0.4, 0.9});
  const TriangleGeometry g = triangle_geometry(m, 0);
  const LocalBubbleSpace s(g, {true, true, true});
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < s.basis_count(); ++k) {
    const int own = s.edge_of(k);
    if (own >= 0) {
      Barycentric mid{0.5, 0.5, 0.5};
      mid[own] = 0.0;
      CHECK(s.value(k, mid) == doctest::Approx(1.0).epsilon(1e-15));
    } else {
      CHECK(s.value(k, {1.0 / 3, 1.0 / 3, 1.0 / 3}) == doctest::Approx(1.0).epsilon(1e-15));
    }
    for (int edge = 0; edge < 3; ++edge) {
      if (edge == own) continue;
      for (int i = 0; i < 10; ++i) {
        const double t = u(rng);
        Barycentric b{0.0, 0.0, 0.0};
        b[(edge + 1) % 3] = 1.0 - t;
        b[(edge + 2) % 3] = t;
        CHECK(std::abs(s.value(k, b)) <= 1e-14);
      }
    }
  }
}

TEST_CASE("bubble gradients match finite differences and the basis is independent") {
  const Mesh m = one_triangle({0.2, 0.1}, {1.1, 0.3}, {0.4, 0.9});
  const TriangleGeometry g = triangle_geometry(m, 0);
  const LocalBubbleSpace s(g, {true, true, true});
  // barycentric coordinates of a physical point
  auto bary = [&](const Eigen::Vector2d& x) {
    Barycentric b;
    for (int i = 0; i < 3; ++i) b[i] = g.grad_lambda[i].dot(x - g.vertices[(i + 1) % 3]);
    return b;
  };
  const Eigen::Vector2d x0 = g.map({0.3, 0.45, 0.25});
  const double h = 1e-6;
  for (int k = 0; k < 4; ++k) {
    const Eigen::Vector2d grad = s.gradient(k, bary(x0));
    for (int c = 0; c < 2; ++c) {
      Eigen::Vector2d dx = Eigen::Vector2d::Zero();
      dx[c] = h;
      const double fd = (s.value(k, bary(x0 + dx)) - s.value(k, bary(x0 - dx))) / (2 * h);
      CHECK(grad[c] == doctest::Approx(fd).epsilon(1e-7));
    }
  }
  Eigen::Matrix4d gram = Eigen::Matrix4d::Zero();
  const QuadRule& r = quadrature_rule(5);
  for (std::size_t q = 0; q < r.points.size(); ++q) {
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        gram(i, j) += r.weights[q] * s.gradient(i, r.points[q]).dot(s.gradient(j, r.points[q]));
      }
    }
  }
  CHECK(Eigen::LLT<Eigen::Matrix4d>(gram).info() == Eigen::Success);
}
