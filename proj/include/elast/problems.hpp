#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "elast/assembly.hpp"
#include "elast/execution.hpp"
#include "elast/linear_solve.hpp"
#include "elast/mesh.hpp"

namespace elast {

enum class ProblemId { test1, test2, test3, patch };

std::string_view to_string(ProblemId id);
/// Accepts "1", "2", "3", "patch" and the "test1".."test3" spellings.
ProblemId problem_from_string(std::string_view name);

/// Exponent of the L-shape corner singularity: the positive root of
/// a sin(2w) + sin(2wa) = 0 with w = 3pi/4.
inline constexpr double kCornerExponent = 0.544483736782;
/// Boundary-data exponent of test 2 is 1/2 + kTopEdgeAlpha.
inline constexpr double kTopEdgeAlpha = 0.1;

struct ExactSolution {
  std::function<Vec2(const Vec2&)> u;
  /// grad(i, j) = d u_i / d x_j
  std::function<Mat2(const Vec2&)> grad;
  std::function<double(const Vec2&)> p;
};

struct ProblemSpec {
  ProblemId id = ProblemId::patch;
  Domain domain = Domain::unit_square;
  VectorField body_force;
  VectorField boundary_data;
  std::optional<ExactSolution> exact;
};

/// Test 1: smooth solution on the unit square with p = 0 and g = 0.
/// Test 2: f = 0, nonzero tangential data on the top edge only; no exact
/// solution. Test 3: corner singularity on the L-shape, g = trace of u.
/// Patch: u = (x, -y), p = 0, f = 0.
ProblemSpec make_problem(ProblemId id, const MaterialParams& material);

/// Default material per problem: test 1 mu = 100, test 2 mu = 1 (both with
/// nu = 0.4), test 3 E = 1e5 with nu = 0.4, patch mu = 1 with nu = 0.3.
MaterialParams default_material(ProblemId id, Formulation formulation);

/// Throws NoExactSolutionError for test 2.
Mat2 exact_gradient(const ProblemSpec& problem, const Vec2& x);

struct EnergyError {
  double total = 0.0;
  /// 2 mu ||grad(u - u_h)||^2
  double displacement = 0.0;
  /// (2 mu)^-1 ||p - p_h||^2
  double pressure_mu = 0.0;
  /// kappa^-1 ||p - p_h||^2
  double pressure_kappa = 0.0;
};

/// Energy norm of the error by the degree 5 rule on every triangle.
EnergyError energy_error(const Mesh& mesh, const MixedSolution& solution,
                         const ProblemSpec& problem, const MaterialParams& material,
                         ExecPolicy policy = ExecPolicy::parallel);

}  // namespace elast
