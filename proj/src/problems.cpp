#include "elast/problems.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "elast/errors.hpp"
#include "elast/fem_basis.hpp"

namespace elast {

namespace {

constexpr double pi = std::numbers::pi;

ProblemSpec make_test1(const MaterialParams& m) {
  ProblemSpec spec;
  spec.id = ProblemId::test1;
  spec.domain = Domain::unit_square;
  const double mu = m.mu;
  spec.body_force = [mu](const Vec2& x) {
    const double c = 2.0 * mu * pi * pi * pi;
    return Vec2(-c * std::cos(pi * x.y()) * std::sin(pi * x.y()) * (2.0 * std::cos(2.0 * pi * x.x()) - 1.0),
                c * std::cos(pi * x.x()) * std::sin(pi * x.x()) * (2.0 * std::cos(2.0 * pi * x.y()) - 1.0));
  };
  spec.boundary_data = [](const Vec2&) { return Vec2::Zero().eval(); };

  ExactSolution ex;
  ex.u = [](const Vec2& x) {
    const double sx = std::sin(pi * x.x()), sy = std::sin(pi * x.y());
    return Vec2(pi * std::cos(pi * x.y()) * sx * sx * sy,
                -pi * std::cos(pi * x.x()) * sy * sy * sx);
  };
  ex.grad = [](const Vec2& x) {
    const double sx = std::sin(pi * x.x()), sy = std::sin(pi * x.y());
    const double s2x = std::sin(2.0 * pi * x.x()), s2y = std::sin(2.0 * pi * x.y());
    Mat2 g;
    g(0, 0) = 0.5 * pi * pi * s2x * s2y;
    g(0, 1) = pi * pi * sx * sx * std::cos(2.0 * pi * x.y());
    g(1, 0) = -pi * pi * std::cos(2.0 * pi * x.x()) * sy * sy;
    g(1, 1) = -0.5 * pi * pi * s2x * s2y;
    return g;
  };
  ex.p = [](const Vec2&) { return 0.0; };
  spec.exact = ex;
  return spec;
}

ProblemSpec make_test2() {
  ProblemSpec spec;
  spec.id = ProblemId::test2;
  spec.domain = Domain::unit_square;
  spec.body_force = [](const Vec2&) { return Vec2::Zero().eval(); };
  spec.boundary_data = [](const Vec2& x) {
    if (std::abs(x.y() - 1.0) > 1e-12) return Vec2::Zero().eval();
    const double base = std::max(0.0, 1.0 - 4.0 * (x.x() - 0.5) * (x.x() - 0.5));
    return Vec2(std::pow(base, 0.5 + kTopEdgeAlpha), 0.0);
  };
  return spec;
}

// Corner singularity of the L-shape in polar components (u_r, u_phi), with
// phi measured from the bisector of the domain so the re-entrant edges sit at
// phi = +-3pi/4.
struct CornerSolution {
  double alpha, mu, c1, c2;

  static CornerSolution make(const MaterialParams& m) {
    const double a = kCornerExponent;
    const double w = 3.0 * pi / 4.0;
    return {a, m.mu, -std::cos((a + 1.0) * w) / std::cos((a - 1.0) * w),
            2.0 * (m.lambda + 2.0 * m.mu) / (m.lambda + m.mu)};
  }

  static void polar(const Vec2& x, double& r, double& theta) {
    r = std::max(std::hypot(x.x(), x.y()), 1e-12);
    theta = std::atan2(x.y(), x.x());
    // the domain covers theta in [-pi/2, pi]; -0.0 on the negative x axis
    if (theta < -0.5 * pi - 1e-12) theta += 2.0 * pi;
  }

  // angular profiles F (radial) and G (angular) and their phi-derivatives
  void profiles(double phi, double& F, double& dF, double& G, double& dG) const {
    const double a = alpha;
    const double kr = (c2 - a - 1.0) * c1;
    const double kt = (c2 + a - 1.0) * c1;
    F = -(a + 1.0) * std::cos((a + 1.0) * phi) + kr * std::cos((a - 1.0) * phi);
    dF = (a + 1.0) * (a + 1.0) * std::sin((a + 1.0) * phi) - kr * (a - 1.0) * std::sin((a - 1.0) * phi);
    G = (a + 1.0) * std::sin((a + 1.0) * phi) + kt * std::sin((a - 1.0) * phi);
    dG = (a + 1.0) * (a + 1.0) * std::cos((a + 1.0) * phi) + kt * (a - 1.0) * std::cos((a - 1.0) * phi);
  }

  Vec2 u(const Vec2& x) const {
    double r, theta, F, dF, G, dG;
    polar(x, r, theta);
    profiles(theta - 0.25 * pi, F, dF, G, dG);
    const double s = std::pow(r, alpha) / (2.0 * mu);
    const double ur = s * F, ut = s * G;
    return Vec2(ur * std::cos(theta) - ut * std::sin(theta),
                ur * std::sin(theta) + ut * std::cos(theta));
  }

  Mat2 grad(const Vec2& x) const {
    double r, theta, F, dF, G, dG;
    polar(x, r, theta);
    profiles(theta - 0.25 * pi, F, dF, G, dG);
    const double s = std::pow(r, alpha) / (2.0 * mu);
    const double c = std::cos(theta), sn = std::sin(theta);
    // cartesian components as functions of (r, theta)
    const double ux = s * (F * c - G * sn), uy = s * (F * sn + G * c);
    const double dux_dr = alpha * ux / r, duy_dr = alpha * uy / r;
    const double dux_dt = s * (dF * c - F * sn - dG * sn - G * c);
    const double duy_dt = s * (dF * sn + F * c + dG * c - G * sn);
    Mat2 g;
    g(0, 0) = c * dux_dr - sn / r * dux_dt;
    g(0, 1) = sn * dux_dr + c / r * dux_dt;
    g(1, 0) = c * duy_dr - sn / r * duy_dt;
    g(1, 1) = sn * duy_dr + c / r * duy_dt;
    return g;
  }
};

ProblemSpec make_test3(const MaterialParams& m) {
  ProblemSpec spec;
  spec.id = ProblemId::test3;
  spec.domain = Domain::l_shape;
  spec.body_force = [](const Vec2&) { return Vec2::Zero().eval(); };
  const CornerSolution corner = CornerSolution::make(m);
  const double kappa = m.kappa;
  ExactSolution ex;
  ex.u = [corner](const Vec2& x) { return corner.u(x); };
  ex.grad = [corner](const Vec2& x) { return corner.grad(x); };
  ex.p = [corner, kappa](const Vec2& x) { return -kappa * corner.grad(x).trace(); };
  spec.boundary_data = ex.u;
  spec.exact = ex;
  return spec;
}

ProblemSpec make_patch() {
  ProblemSpec spec;
  spec.id = ProblemId::patch;
  spec.domain = Domain::unit_square;
  spec.body_force = [](const Vec2&) { return Vec2::Zero().eval(); };
  ExactSolution ex;
  ex.u = [](const Vec2& x) { return Vec2(x.x(), -x.y()); };
  ex.grad = [](const Vec2&) { return Mat2{{1.0, 0.0}, {0.0, -1.0}}; };
  ex.p = [](const Vec2&) { return 0.0; };
  spec.boundary_data = ex.u;
  spec.exact = ex;
  return spec;
}

}  // namespace

std::string_view to_string(ProblemId id) {
  switch (id) {
    case ProblemId::test1: return "1";
    case ProblemId::test2: return "2";
    case ProblemId::test3: return "3";
    case ProblemId::patch: return "patch";
  }
  return "patch";
}

ProblemId problem_from_string(std::string_view name) {
  if (name == "1" || name == "test1") return ProblemId::test1;
  if (name == "2" || name == "test2") return ProblemId::test2;
  if (name == "3" || name == "test3") return ProblemId::test3;
  if (name == "patch") return ProblemId::patch;
  throw ConfigError("unknown problem '" + std::string(name) + "'");
}

ProblemSpec make_problem(ProblemId id, const MaterialParams& material) {
  switch (id) {
    case ProblemId::test1: return make_test1(material);
    case ProblemId::test2: return make_test2();
    case ProblemId::test3: return make_test3(material);
    case ProblemId::patch: return make_patch();
  }
  throw ConfigError("unknown problem id");
}

MaterialParams default_material(ProblemId id, Formulation formulation) {
  switch (id) {
    case ProblemId::test1: return material_from_shear(100.0, 0.4, formulation);
    case ProblemId::test2: return material_from_shear(1.0, 0.4, formulation);
    case ProblemId::test3: return material_from_engineering(1e5, 0.4, formulation);
    case ProblemId::patch: return material_from_shear(1.0, 0.3, formulation);
  }
  throw ConfigError("unknown problem id");
}

Mat2 exact_gradient(const ProblemSpec& problem, const Vec2& x) {
  if (!problem.exact) {
    throw NoExactSolutionError("problem " + std::string(to_string(problem.id)) +
                               " has no exact solution");
  }
  return problem.exact->grad(x);
}

EnergyError energy_error(const Mesh& mesh, const MixedSolution& solution,
                         const ProblemSpec& problem, const MaterialParams& material,
                         ExecPolicy policy) {
  if (!problem.exact) {
    throw NoExactSolutionError("problem " + std::string(to_string(problem.id)) +
                               " has no exact solution");
  }
  if (static_cast<int>(solution.displacement.size()) != mesh.num_vertices() ||
      static_cast<int>(solution.pressure.size()) != mesh.num_triangles()) {
    throw EstimatorError("solution does not belong to this mesh");
  }
  const ExactSolution& ex = *problem.exact;
  const QuadRule& rule = quadrature_rule(5);
  const int nt = mesh.num_triangles();
  std::vector<double> grad_part(nt), p_part(nt);

  for_each_index(nt, policy, [&](int t) {
    const TriangleGeometry g = triangle_geometry(mesh, t);
    Mat2 grad_h = Mat2::Zero();
    for (int i = 0; i < 3; ++i) {
      grad_h += solution.displacement[mesh.triangles[t][i]] * g.grad_lambda[i].transpose();
    }
    const double ph = solution.pressure[t];
    double gsum = 0.0, psum = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Vec2 x = g.map(rule.points[q]);
      gsum += rule.weights[q] * (ex.grad(x) - grad_h).squaredNorm();
      const double dp = ex.p(x) - ph;
      psum += rule.weights[q] * dp * dp;
    }
    grad_part[t] = g.area * gsum;
    p_part[t] = g.area * psum;
  });

  double grad_sq = 0.0, p_sq = 0.0;
  for (int t = 0; t < nt; ++t) {
    grad_sq += grad_part[t];
    p_sq += p_part[t];
  }
  EnergyError err;
  err.displacement = 2.0 * material.mu * grad_sq;
  err.pressure_mu = p_sq / (2.0 * material.mu);
  err.pressure_kappa = p_sq / material.kappa;
  err.total = std::sqrt(err.displacement + err.pressure_mu + err.pressure_kappa);
  return err;
}

}  // namespace elast
