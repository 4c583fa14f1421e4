#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "elast/execution.hpp"
#include "elast/mesh.hpp"

namespace elast {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using VectorField = std::function<Vec2(const Vec2&)>;

enum class Formulation { herrmann, hydrostatic };

std::string_view to_string(Formulation f);

/// Lame parameters plus the pressure penalty kappa, which is lambda for the
/// Herrmann formulation and mu + lambda for the Hydrostatic one.
struct MaterialParams {
  double E = 0.0;
  double nu = 0.0;
  double mu = 0.0;
  double lambda = 0.0;
  double kappa = 0.0;
  Formulation formulation = Formulation::herrmann;
};

/// Requires E > 0 and 0 < nu < 1/2; nu >= 1/2 is rejected because the
/// pressure block becomes singular.
MaterialParams material_from_engineering(double E, double nu, Formulation formulation);
/// Same, with the shear modulus given instead of E.
MaterialParams material_from_shear(double mu, double nu, Formulation formulation);

/// Stress of a displacement gradient and pressure: 2 mu eps(u) - p I, with
/// the extra -mu (div u) I deviatoric correction in the Hydrostatic case.
inline Mat2 stress_tensor(const Mat2& grad_u, double p, const MaterialParams& params) {
  const Mat2 eps = 0.5 * (grad_u + grad_u.transpose());
  Mat2 sigma = 2.0 * params.mu * eps - p * Mat2::Identity();
  if (params.formulation == Formulation::hydrostatic) {
    sigma -= params.mu * grad_u.trace() * Mat2::Identity();
  }
  return sigma;
}

/// Displacement dof of component `comp` (0 = x, 1 = y) at vertex `v`.
constexpr int displacement_dof(int v, int comp) { return 2 * v + comp; }

/// Blocks of the stabilised system
///   [ A   B^T    ] [u]   [rhs_u]
///   [ B  -(C+S)  ] [p] = [rhs_p]
/// before boundary elimination. B(K, j) = -int_K p_K div(phi_j).
struct SaddleSystem {
  SparseMatrix A;
  SparseMatrix B;
  SparseMatrix C;
  SparseMatrix S;
  Eigen::VectorXd rhs_u;
  Eigen::VectorXd rhs_p;
  /// Boundary displacement dof -> prescribed value.
  std::map<int, double> dirichlet;

  [[nodiscard]] int num_displacement_dofs() const { return static_cast<int>(A.rows()); }
  [[nodiscard]] int num_pressure_dofs() const { return static_cast<int>(C.rows()); }
  [[nodiscard]] SparseMatrix Bt() const { return B.transpose(); }
};

/// Local contributions of one triangle; displacement dofs ordered
/// (v0x, v0y, v1x, v1y, v2x, v2y).
struct ElementBlocks {
  Eigen::Matrix<double, 6, 6> A;
  Eigen::Matrix<double, 1, 6> B;
  Eigen::Matrix<double, 6, 1> load;
  double C = 0.0;
};

/// Per-element kernel behind assemble_saddle_system. The load uses the
/// degree 2 rule.
std::vector<ElementBlocks> compute_element_blocks(const Mesh& mesh,
                                                  const MaterialParams& params,
                                                  const VectorField& body_force,
                                                  ExecPolicy policy = ExecPolicy::parallel);

/// (1/2mu) sum_M sum_{E in Gamma_M} h_E int_E [p][q]: for P0 pressures each
/// edge adds h_E^2/(2mu) [[1,-1],[-1,1]] on its two triangles.
SparseMatrix assemble_stabilisation(const EdgeTopology& topo, const MacroPartition& macros,
                                    double mu);

SaddleSystem assemble_saddle_system(const Mesh& mesh, const EdgeTopology& topo,
                                    const MacroPartition& macros,
                                    const MaterialParams& params,
                                    const VectorField& body_force,
                                    const VectorField& boundary_data,
                                    ExecPolicy policy = ExecPolicy::parallel);

/// System restricted to the free displacement dofs; all pressure dofs stay.
struct ReducedSystem {
  SparseMatrix A;
  SparseMatrix B;
  SparseMatrix C;
  SparseMatrix S;
  Eigen::VectorXd rhs_u;
  Eigen::VectorXd rhs_p;
  std::vector<int> free_dofs;
  std::map<int, double> boundary_values;
  int num_displacement_dofs = 0;

  /// Symmetric indefinite matrix [[A, B^T], [B, -(C+S)]].
  [[nodiscard]] SparseMatrix kkt() const;
  [[nodiscard]] Eigen::VectorXd kkt_rhs() const;
};

/// Eliminates boundary rows and columns symmetrically, moving -A_fb g_b and
/// -B_b g_b to the right-hand sides. `boundary_values` must cover exactly the
/// dofs in system.dirichlet.
ReducedSystem apply_dirichlet(const SaddleSystem& system,
                              const std::map<int, double>& boundary_values);
ReducedSystem apply_dirichlet(const SaddleSystem& system);

/// MatrixMarket coordinate dump (general, real).
void write_matrix_market(std::ostream& out, const SparseMatrix& m);
void write_matrix_market(const std::string& path, const SparseMatrix& m);

}  // namespace elast
