#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "elast/assembly.hpp"
#include "elast/execution.hpp"
#include "elast/linear_solve.hpp"
#include "elast/mesh.hpp"

namespace elast {

struct EstimatorWeights {
  /// h_K / sqrt(2 mu), h_K the longest edge of K
  std::vector<double> rho_K;
  /// h_E / (2 mu)
  std::vector<double> rho_E;
  /// 1 / (1/kappa + 1/(2 mu))
  double rho_d = 0.0;
};

EstimatorWeights estimator_weights(const Mesh& mesh, const EdgeTopology& topo,
                                   const MaterialParams& params);

struct LoadProjection {
  /// Elementwise mean of f (degree 5 rule).
  std::vector<Vec2> f_h;
  /// rho_K ||f - f_h||_K
  std::vector<double> theta;
};

LoadProjection project_load(const VectorField& body_force, const Mesh& mesh, double mu,
                            ExecPolicy policy = ExecPolicy::parallel);

/// All residuals are constant per element or per edge for P1-P0.
struct ElementResiduals {
  std::vector<Vec2> R_vec;
  /// div u_h + p_h / kappa
  std::vector<double> R_div;
  /// 1/2 (sigma_1 - sigma_2) n, with n the outward normal of the first
  /// adjacent triangle of the edge; zero on boundary edges.
  std::vector<Vec2> R_edge;
};

ElementResiduals element_residuals(const Mesh& mesh, const EdgeTopology& topo,
                                   const MixedSolution& solution,
                                   const std::vector<Vec2>& f_h,
                                   const MaterialParams& params,
                                   ExecPolicy policy = ExecPolicy::parallel);

struct ErrorIndicators {
  std::vector<double> eta_RK;
  std::vector<double> eta_EK;
  std::vector<double> eta_JK;
  std::vector<double> theta_K;
  std::vector<double> eta_K;
  double global_eta = 0.0;
  double global_theta = 0.0;
};

/// Each interior edge adds its full rho_E ||R_E||^2 to both neighbours.
ErrorIndicators residual_indicator(const Mesh& mesh, const EdgeTopology& topo,
                                   const ElementResiduals& residuals,
                                   const EstimatorWeights& weights,
                                   const std::vector<double>& theta,
                                   ExecPolicy policy = ExecPolicy::parallel);

struct PoissonIndicators {
  std::vector<double> eta_PK;
  double global_eta_P = 0.0;
};

/// Local problems 2 mu (grad e, grad v)_K = (R_vec, v)_K - sum_E <R_E, v>_E
/// over the bubble space of K, one per displacement component, plus the
/// divergence part rho_d ||R_div||^2. Throws EstimatorError naming the
/// triangle when it has fewer than two interior edges.
PoissonIndicators poisson_indicator(const Mesh& mesh, const EdgeTopology& topo,
                                    const ElementResiduals& residuals,
                                    const EstimatorWeights& weights,
                                    const MaterialParams& params,
                                    ExecPolicy policy = ExecPolicy::parallel);

/// CSV with header triangle_id,eta_RK,eta_EK,eta_JK,theta_K,eta_K,eta_PK.
/// `poisson` may be null, leaving the last column empty.
void write_indicators_csv(std::ostream& out, const ErrorIndicators& residual,
                          const PoissonIndicators* poisson);
void write_indicators_csv(const std::string& path, const ErrorIndicators& residual,
                          const PoissonIndicators* poisson);

}  // namespace elast
