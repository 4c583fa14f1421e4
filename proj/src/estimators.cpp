#include "elast/estimators.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <string>

#include <Eigen/Cholesky>

#include "elast/errors.hpp"
#include "elast/fem_basis.hpp"

namespace elast {

namespace {

int local_edge_index(const EdgeTopology& topo, int t, int e) {
  for (int i = 0; i < 3; ++i) {
    if (topo.triangle_edges[t][i] == e) return i;
  }
  throw EstimatorError("edge " + std::to_string(e) + " is not an edge of triangle " +
                       std::to_string(t));
}

Mat2 element_gradient(const Mesh& mesh, const TriangleGeometry& g, const MixedSolution& sol,
                      int t) {
  Mat2 grad = Mat2::Zero();
  for (int i = 0; i < 3; ++i) {
    grad += sol.displacement[mesh.triangles[t][i]] * g.grad_lambda[i].transpose();
  }
  return grad;
}

}  // namespace

EstimatorWeights estimator_weights(const Mesh& mesh, const EdgeTopology& topo,
                                   const MaterialParams& params) {
  EstimatorWeights w;
  const double two_mu = 2.0 * params.mu;
  w.rho_K.resize(mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) w.rho_K[t] = mesh.diameter(t) / std::sqrt(two_mu);
  w.rho_E.resize(topo.num_edges());
  for (int e = 0; e < topo.num_edges(); ++e) w.rho_E[e] = topo.length[e] / two_mu;
  w.rho_d = 1.0 / (1.0 / params.kappa + 1.0 / two_mu);
  return w;
}

LoadProjection project_load(const VectorField& body_force, const Mesh& mesh, double mu,
                            ExecPolicy policy) {
  const int nt = mesh.num_triangles();
  const QuadRule& rule = quadrature_rule(5);
  const std::size_t nq = rule.points.size();
  LoadProjection out;
  out.f_h.resize(nt);
  out.theta.resize(nt);
  for_each_index(nt, policy, [&](int t) {
    const TriangleGeometry g = triangle_geometry(mesh, t);
    std::vector<Vec2> fq(nq);
    Vec2 mean = Vec2::Zero();
    for (std::size_t q = 0; q < nq; ++q) {
      fq[q] = body_force(g.map(rule.points[q]));
      mean += rule.weights[q] * fq[q];
    }
    double osc = 0.0;
    for (std::size_t q = 0; q < nq; ++q) osc += rule.weights[q] * (fq[q] - mean).squaredNorm();
    out.f_h[t] = mean;
    out.theta[t] = mesh.diameter(t) / std::sqrt(2.0 * mu) * std::sqrt(g.area * osc);
  });
  return out;
}

ElementResiduals element_residuals(const Mesh& mesh, const EdgeTopology& topo,
                                   const MixedSolution& solution,
                                   const std::vector<Vec2>& f_h,
                                   const MaterialParams& params, ExecPolicy policy) {
  const int nt = mesh.num_triangles();
  if (static_cast<int>(solution.displacement.size()) != mesh.num_vertices() ||
      static_cast<int>(solution.pressure.size()) != nt ||
      static_cast<int>(f_h.size()) != nt ||
      static_cast<int>(topo.triangle_edges.size()) != nt) {
    throw EstimatorError("solution, load projection and topology do not match the mesh");
  }
  ElementResiduals res;
  res.R_vec = f_h;
  res.R_div.resize(nt);
  std::vector<Mat2> sigma(nt);
  for_each_index(nt, policy, [&](int t) {
    const TriangleGeometry g = triangle_geometry(mesh, t);
    const Mat2 grad = element_gradient(mesh, g, solution, t);
    res.R_div[t] = grad.trace() + solution.pressure[t] / params.kappa;
    sigma[t] = stress_tensor(grad, solution.pressure[t], params);
  });

  const int ne = topo.num_edges();
  res.R_edge.assign(ne, Vec2::Zero());
  for_each_index(ne, policy, [&](int e) {
    if (topo.is_boundary(e)) return;
    const auto [k1, k2] = topo.edge_triangles[e];
    const TriangleGeometry g = triangle_geometry(mesh, k1);
    const Vec2 n = g.outward_normal(local_edge_index(topo, k1, e));
    res.R_edge[e] = 0.5 * (sigma[k1] - sigma[k2]) * n;
  });
  return res;
}

ErrorIndicators residual_indicator(const Mesh& mesh, const EdgeTopology& topo,
                                   const ElementResiduals& residuals,
                                   const EstimatorWeights& weights,
                                   const std::vector<double>& theta, ExecPolicy policy) {
  const int nt = mesh.num_triangles();
  ErrorIndicators ind;
  ind.eta_RK.resize(nt);
  ind.eta_EK.resize(nt);
  ind.eta_JK.resize(nt);
  ind.eta_K.resize(nt);
  ind.theta_K = theta;
  for_each_index(nt, policy, [&](int t) {
    const double area = mesh.signed_area(t);
    const double r2 = weights.rho_K[t] * weights.rho_K[t] * residuals.R_vec[t].squaredNorm() * area;
    const double j2 = weights.rho_d * residuals.R_div[t] * residuals.R_div[t] * area;
    double e2 = 0.0;
    for (int e : topo.triangle_edges[t]) {
      if (topo.is_boundary(e)) continue;
      e2 += weights.rho_E[e] * residuals.R_edge[e].squaredNorm() * topo.length[e];
    }
    ind.eta_RK[t] = std::sqrt(r2);
    ind.eta_EK[t] = std::sqrt(e2);
    ind.eta_JK[t] = std::sqrt(j2);
    ind.eta_K[t] = std::sqrt(r2 + e2 + j2);
  });
  double eta2 = 0.0, theta2 = 0.0;
  for (int t = 0; t < nt; ++t) {
    eta2 += ind.eta_K[t] * ind.eta_K[t];
    theta2 += theta[t] * theta[t];
  }
  ind.global_eta = std::sqrt(eta2);
  ind.global_theta = std::sqrt(theta2);
  return ind;
}

PoissonIndicators poisson_indicator(const Mesh& mesh, const EdgeTopology& topo,
                                    const ElementResiduals& residuals,
                                    const EstimatorWeights& weights,
                                    const MaterialParams& params, ExecPolicy policy) {
  const int nt = mesh.num_triangles();
  const QuadRule& rule = quadrature_rule(5);
  const EdgeRule& erule = edge_gauss_rule();
  const double two_mu = 2.0 * params.mu;
  PoissonIndicators out;
  out.eta_PK.resize(nt);

  for_each_index(nt, policy, [&](int t) {
    const TriangleGeometry g = triangle_geometry(mesh, t);
    std::array<bool, 3> interior{};
    for (int i = 0; i < 3; ++i) interior[i] = !topo.is_boundary(topo.triangle_edges[t][i]);
    std::optional<LocalBubbleSpace> space;
    try {
      space.emplace(g, interior);
    } catch (const EstimatorError& err) {
      throw EstimatorError("triangle " + std::to_string(t) + ": " + err.what());
    }
    const int nb = space->basis_count();

    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(nb, nb);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(nb, 2);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Barycentric& b = rule.points[q];
      const double w = g.area * rule.weights[q];
      for (int i = 0; i < nb; ++i) {
        const Vec2 gi = space->gradient(i, b);
        for (int j = 0; j <= i; ++j) M(i, j) += w * two_mu * gi.dot(space->gradient(j, b));
        const double vi = w * space->value(i, b);
        rhs(i, 0) += vi * residuals.R_vec[t].x();
        rhs(i, 1) += vi * residuals.R_vec[t].y();
      }
    }
    for (int le : space->edge_ids()) {
      const int e = topo.triangle_edges[t][le];
      const Vec2& R = residuals.R_edge[e];
      for (int q = 0; q < 2; ++q) {
        Barycentric b{0.0, 0.0, 0.0};
        b[(le + 1) % 3] = 1.0 - erule.points[q];
        b[(le + 2) % 3] = erule.points[q];
        const double w = topo.length[e] * erule.weights[q];
        for (int i = 0; i < nb; ++i) {
          const double vi = w * space->value(i, b);
          rhs(i, 0) -= vi * R.x();
          rhs(i, 1) -= vi * R.y();
        }
      }
    }
    M.triangularView<Eigen::StrictlyUpper>() = M.transpose();

    const Eigen::LLT<Eigen::MatrixXd> llt(M);
    if (llt.info() != Eigen::Success) {
      throw EstimatorError("local Poisson matrix of triangle " + std::to_string(t) +
                           " is not positive definite");
    }
    const Eigen::MatrixXd e = llt.solve(rhs);
    double eta2 = 0.0;
    for (int c = 0; c < 2; ++c) eta2 += e.col(c).dot(M * e.col(c));
    eta2 += weights.rho_d * residuals.R_div[t] * residuals.R_div[t] * g.area;
    out.eta_PK[t] = std::sqrt(eta2);
  });

  double sum = 0.0;
  for (int t = 0; t < nt; ++t) sum += out.eta_PK[t] * out.eta_PK[t];
  out.global_eta_P = std::sqrt(sum);
  return out;
}

void write_indicators_csv(std::ostream& out, const ErrorIndicators& residual,
                          const PoissonIndicators* poisson) {
  out << "triangle_id,eta_RK,eta_EK,eta_JK,theta_K,eta_K,eta_PK\n";
  out << std::setprecision(12);
  for (std::size_t t = 0; t < residual.eta_K.size(); ++t) {
    out << t << ',' << residual.eta_RK[t] << ',' << residual.eta_EK[t] << ','
        << residual.eta_JK[t] << ',' << residual.theta_K[t] << ',' << residual.eta_K[t] << ',';
    if (poisson) out << poisson->eta_PK[t];
    out << '\n';
  }
}

void write_indicators_csv(const std::string& path, const ErrorIndicators& residual,
                          const PoissonIndicators* poisson) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw EstimatorError("cannot open '" + path + "' for writing");
  write_indicators_csv(out, residual, poisson);
}

}  // namespace elast
