#include "elast/linear_solve.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "elast/errors.hpp"
#include "elast/fem_basis.hpp"

namespace elast {

namespace {

double relative_residual(const SparseMatrix& K, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& b) {
  const double nb = b.norm();
  const double nr = (b - K * x).norm();
  return nb > 0.0 ? nr / nb : nr;
}

}  // namespace

MixedSolution solve_direct(const SaddleSystem& system, SolveReport* report) {
  const ReducedSystem red = apply_dirichlet(system);
  const SparseMatrix K = red.kkt();
  const Eigen::VectorXd b = red.kkt_rhs();
  SolveReport rep;

  Eigen::VectorXd x = Eigen::VectorXd::Zero(b.size());
  if (b.size() > 0 && b.norm() > 0.0) {
    Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt;
    ldlt.compute(K);
    if (ldlt.info() != Eigen::Success) throw SolverError("LDL^T factorisation failed");
    const Eigen::VectorXd d = ldlt.vectorD().cwiseAbs();
    const double dmax = d.maxCoeff();
    const double dmin = d.minCoeff();
    if (dmin == 0.0) {
      throw SolverError("singular saddle-point system (zero pivot); is nu too close to 1/2?");
    }
    rep.pivot_ratio = dmin / dmax;
    rep.conditioning_warning = rep.pivot_ratio < kPivotWarning;

    x = ldlt.solve(b);
    rep.relative_residual = relative_residual(K, x, b);
    // a few steps of refinement recover accuracy lost to tiny pivots
    for (int step = 0; step < 4 && rep.relative_residual > 1e-14; ++step) {
      const double before = rep.relative_residual;
      const Eigen::VectorXd dx = ldlt.solve(b - K * x);
      const Eigen::VectorXd candidate = x + dx;
      const double after = relative_residual(K, candidate, b);
      if (!(after < before)) break;
      x = candidate;
      rep.relative_residual = after;
      ++rep.refinement_steps;
    }
    if (!(rep.relative_residual <= kSolveTolerance)) {
      Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
      lu.compute(K);
      if (lu.info() != Eigen::Success) throw SolverError("sparse LU factorisation failed");
      x = lu.solve(b);
      rep.relative_residual = relative_residual(K, x, b);
      rep.used_lu_fallback = true;
    }
    if (!std::isfinite(rep.relative_residual) || rep.relative_residual > kSolveTolerance) {
      throw SolverError("direct solve residual " + std::to_string(rep.relative_residual) +
                        " exceeds tolerance");
    }
  }

  const int nu = red.num_displacement_dofs;
  const int nf = static_cast<int>(red.free_dofs.size());
  Eigen::VectorXd u = Eigen::VectorXd::Zero(nu);
  for (int i = 0; i < nf; ++i) u[red.free_dofs[i]] = x[i];
  for (const auto& [dof, value] : red.boundary_values) u[dof] = value;

  MixedSolution sol;
  sol.displacement.resize(nu / 2);
  for (int v = 0; v < nu / 2; ++v) {
    sol.displacement[v] = Vec2(u[displacement_dof(v, 0)], u[displacement_dof(v, 1)]);
  }
  const int np = static_cast<int>(red.rhs_p.size());
  sol.pressure.resize(np);
  for (int k = 0; k < np; ++k) sol.pressure[k] = x[nf + k];
  if (report) *report = rep;
  return sol;
}

double pressure_mean_check(const Mesh& mesh, const EdgeTopology& topo,
                           const MixedSolution& solution, const MaterialParams& params) {
  double mean = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) mean += mesh.signed_area(t) * solution.pressure[t];

  const EdgeRule& rule = edge_gauss_rule();
  double flux = 0.0;
  for (int e = 0; e < topo.num_edges(); ++e) {
    if (!topo.is_boundary(e)) continue;
    const int t = topo.edge_triangles[e][0];
    const TriangleGeometry g = triangle_geometry(mesh, t);
    int local = 0;
    while (topo.triangle_edges[t][local] != e) ++local;
    const Vec2 n = g.outward_normal(local);
    const int va = mesh.triangles[t][(local + 1) % 3];
    const int vb = mesh.triangles[t][(local + 2) % 3];
    for (int q = 0; q < 2; ++q) {
      const double s = rule.points[q];
      const Vec2 gq = (1.0 - s) * solution.displacement[va] + s * solution.displacement[vb];
      flux += topo.length[e] * rule.weights[q] * gq.dot(n);
    }
  }
  return std::abs(mean + params.kappa * flux);
}

}  // namespace elast
