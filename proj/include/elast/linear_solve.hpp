#pragma once

#include <vector>

#include "elast/assembly.hpp"
#include "elast/mesh.hpp"

namespace elast {

/// P1 displacement at every vertex (boundary values included) and one P0
/// pressure per triangle.
struct MixedSolution {
  std::vector<Vec2> displacement;
  std::vector<double> pressure;
};

struct SolveReport {
  /// ||K x - b|| / ||b|| of the reduced indefinite system.
  double relative_residual = 0.0;
  /// min |d_i| / max |d_i| over the LDL^T pivots.
  double pivot_ratio = 1.0;
  bool conditioning_warning = false;
  int refinement_steps = 0;
  bool used_lu_fallback = false;
};

inline constexpr double kSolveTolerance = 1e-9;
inline constexpr double kPivotWarning = 1e-12;

/// Sparse LDL^T factorisation of the reduced quasi-definite system with
/// iterative refinement; falls back to sparse LU when the residual stays
/// above kSolveTolerance. Throws SolverError on a singular factorisation.
MixedSolution solve_direct(const SaddleSystem& system, SolveReport* report = nullptr);

/// |int p_h + kappa int_{dOmega} u_h . n ds|, where u_h on the boundary is
/// the interpolated boundary data. Vanishes for the discrete solution because
/// the stabilisation annihilates constant pressures.
double pressure_mean_check(const Mesh& mesh, const EdgeTopology& topo,
                           const MixedSolution& solution, const MaterialParams& params);

}  // namespace elast
