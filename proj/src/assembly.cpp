#include "elast/assembly.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>

#include "elast/errors.hpp"
#include "elast/fem_basis.hpp"

namespace elast {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

ElementBlocks element_blocks(const Mesh& mesh, int t, const MaterialParams& params,
                             const VectorField& body_force) {
  const TriangleGeometry g = triangle_geometry(mesh, t);
  const double mu = params.mu;
  const bool hydrostatic = params.formulation == Formulation::hydrostatic;

  ElementBlocks blk;
  for (int i = 0; i < 3; ++i) {
    for (int a = 0; a < 2; ++a) {
      const int row = 2 * i + a;
      for (int j = 0; j < 3; ++j) {
        for (int b = 0; b < 2; ++b) {
          // 2 mu eps(phi_i e_a) : eps(phi_j e_b)
          double v = g.grad_lambda[i][b] * g.grad_lambda[j][a];
          if (a == b) v += g.grad_lambda[i].dot(g.grad_lambda[j]);
          if (hydrostatic) v -= g.grad_lambda[i][a] * g.grad_lambda[j][b];
          blk.A(row, 2 * j + b) = mu * g.area * v;
        }
      }
      blk.B(0, row) = -g.area * g.grad_lambda[i][a];
    }
  }
  blk.C = g.area / params.kappa;

  blk.load.setZero();
  const QuadRule& rule = quadrature_rule(2);
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const Vec2 f = body_force(g.map(rule.points[q]));
    for (int i = 0; i < 3; ++i) {
      const double w = g.area * rule.weights[q] * rule.points[q][i];
      blk.load(2 * i) += w * f.x();
      blk.load(2 * i + 1) += w * f.y();
    }
  }
  return blk;
}

}  // namespace

std::string_view to_string(Formulation f) {
  return f == Formulation::herrmann ? "herrmann" : "hydrostatic";
}

MaterialParams material_from_engineering(double E, double nu, Formulation formulation) {
  if (!(E > 0.0)) throw std::invalid_argument("Young's modulus must be positive");
  if (!(nu > 0.0)) throw std::invalid_argument("Poisson ratio must be positive");
  if (!(nu < 0.5)) {
    throw std::invalid_argument("Poisson ratio must be below 1/2 (singular pressure block)");
  }
  MaterialParams p;
  p.E = E;
  p.nu = nu;
  p.mu = E / (2.0 * (1.0 + nu));
  p.lambda = E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
  p.kappa = formulation == Formulation::herrmann ? p.lambda : p.mu + p.lambda;
  p.formulation = formulation;
  return p;
}

MaterialParams material_from_shear(double mu, double nu, Formulation formulation) {
  if (!(mu > 0.0)) throw std::invalid_argument("shear modulus must be positive");
  MaterialParams p = material_from_engineering(2.0 * mu * (1.0 + nu), nu, formulation);
  p.mu = mu;  // keep the given value exactly
  return p;
}

std::vector<ElementBlocks> compute_element_blocks(const Mesh& mesh,
                                                  const MaterialParams& params,
                                                  const VectorField& body_force,
                                                  ExecPolicy policy) {
  std::vector<ElementBlocks> blocks(mesh.num_triangles());
  for_each_index(mesh.num_triangles(), policy, [&](int t) {
    blocks[t] = element_blocks(mesh, t, params, body_force);
  });
  return blocks;
}

SparseMatrix assemble_stabilisation(const EdgeTopology& topo, const MacroPartition& macros,
                                    double mu) {
  const int nt = static_cast<int>(macros.macro_of.size());
  Triplets trip;
  for (int m = 0; m < macros.num_macros(); ++m) {
    for (int e : macros.interior_edges[m]) {
      if (topo.is_boundary(e)) {
        throw AssemblyError("macroelement " + std::to_string(m) + " lists boundary edge " +
                            std::to_string(e));
      }
      const auto [k1, k2] = topo.edge_triangles[e];
      const double h = topo.length[e];
      const double w = h * h / (2.0 * mu);
      trip.emplace_back(k1, k1, w);
      trip.emplace_back(k2, k2, w);
      trip.emplace_back(k1, k2, -w);
      trip.emplace_back(k2, k1, -w);
    }
  }
  SparseMatrix S(nt, nt);
  S.setFromTriplets(trip.begin(), trip.end());
  return S;
}

SaddleSystem assemble_saddle_system(const Mesh& mesh, const EdgeTopology& topo,
                                    const MacroPartition& macros,
                                    const MaterialParams& params,
                                    const VectorField& body_force,
                                    const VectorField& boundary_data, ExecPolicy policy) {
  const int nv = mesh.num_vertices();
  const int nt = mesh.num_triangles();
  const int nu = 2 * nv;
  const std::vector<ElementBlocks> blocks =
      compute_element_blocks(mesh, params, body_force, policy);

  SaddleSystem sys;
  sys.rhs_u = Eigen::VectorXd::Zero(nu);
  sys.rhs_p = Eigen::VectorXd::Zero(nt);
  Triplets ta, tb, tc;
  ta.reserve(36 * static_cast<std::size_t>(nt));
  tb.reserve(6 * static_cast<std::size_t>(nt));
  tc.reserve(nt);
  for (int t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangles[t];
    const ElementBlocks& blk = blocks[t];
    std::array<int, 6> dofs{};
    for (int i = 0; i < 3; ++i) {
      dofs[2 * i] = displacement_dof(tri[i], 0);
      dofs[2 * i + 1] = displacement_dof(tri[i], 1);
    }
    for (int r = 0; r < 6; ++r) {
      for (int c = 0; c < 6; ++c) ta.emplace_back(dofs[r], dofs[c], blk.A(r, c));
      tb.emplace_back(t, dofs[r], blk.B(0, r));
      sys.rhs_u[dofs[r]] += blk.load(r);
    }
    tc.emplace_back(t, t, blk.C);
  }
  sys.A.resize(nu, nu);
  sys.A.setFromTriplets(ta.begin(), ta.end());
  sys.B.resize(nt, nu);
  sys.B.setFromTriplets(tb.begin(), tb.end());
  sys.C.resize(nt, nt);
  sys.C.setFromTriplets(tc.begin(), tc.end());
  sys.S = assemble_stabilisation(topo, macros, params.mu);

  for (int v = 0; v < nv; ++v) {
    if (!mesh.on_boundary[v]) continue;
    const Vec2 g = boundary_data(Vec2(mesh.vertices[v].x, mesh.vertices[v].y));
    sys.dirichlet[displacement_dof(v, 0)] = g.x();
    sys.dirichlet[displacement_dof(v, 1)] = g.y();
  }
  return sys;
}

SparseMatrix ReducedSystem::kkt() const {
  const int nf = static_cast<int>(A.rows());
  const int np = static_cast<int>(C.rows());
  Triplets trip;
  trip.reserve(A.nonZeros() + 2 * B.nonZeros() + C.nonZeros() + S.nonZeros());
  for (int k = 0; k < A.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(A, k); it; ++it) trip.emplace_back(it.row(), it.col(), it.value());
  }
  for (int k = 0; k < B.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(B, k); it; ++it) {
      trip.emplace_back(nf + it.row(), it.col(), it.value());
      trip.emplace_back(it.col(), nf + it.row(), it.value());
    }
  }
  for (const SparseMatrix* m : {&C, &S}) {
    for (int k = 0; k < m->outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(*m, k); it; ++it) {
        trip.emplace_back(nf + it.row(), nf + it.col(), -it.value());
      }
    }
  }
  SparseMatrix K(nf + np, nf + np);
  K.setFromTriplets(trip.begin(), trip.end());
  return K;
}

Eigen::VectorXd ReducedSystem::kkt_rhs() const {
  Eigen::VectorXd b(rhs_u.size() + rhs_p.size());
  b << rhs_u, rhs_p;
  return b;
}

ReducedSystem apply_dirichlet(const SaddleSystem& system,
                              const std::map<int, double>& boundary_values) {
  for (const auto& [dof, value] : system.dirichlet) {
    if (!boundary_values.contains(dof)) {
      throw AssemblyError("missing boundary value for displacement dof " + std::to_string(dof));
    }
  }
  for (const auto& [dof, value] : boundary_values) {
    if (!system.dirichlet.contains(dof)) {
      throw AssemblyError("dof " + std::to_string(dof) + " is not a boundary dof");
    }
  }

  const int nu = system.num_displacement_dofs();
  ReducedSystem red;
  red.num_displacement_dofs = nu;
  red.boundary_values = boundary_values;
  std::vector<int> to_free(nu, -1);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(nu);
  for (int d = 0; d < nu; ++d) {
    if (auto it = boundary_values.find(d); it != boundary_values.end()) {
      g[d] = it->second;
    } else {
      to_free[d] = static_cast<int>(red.free_dofs.size());
      red.free_dofs.push_back(d);
    }
  }
  const int nf = static_cast<int>(red.free_dofs.size());

  const Eigen::VectorXd Ag = system.A * g;
  const Eigen::VectorXd Bg = system.B * g;
  red.rhs_u.resize(nf);
  for (int i = 0; i < nf; ++i) red.rhs_u[i] = system.rhs_u[red.free_dofs[i]] - Ag[red.free_dofs[i]];
  red.rhs_p = system.rhs_p - Bg;

  Triplets ta, tb;
  for (int k = 0; k < system.A.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(system.A, k); it; ++it) {
      const int r = to_free[it.row()], c = to_free[it.col()];
      if (r >= 0 && c >= 0) ta.emplace_back(r, c, it.value());
    }
  }
  for (int k = 0; k < system.B.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(system.B, k); it; ++it) {
      const int c = to_free[it.col()];
      if (c >= 0) tb.emplace_back(it.row(), c, it.value());
    }
  }
  red.A.resize(nf, nf);
  red.A.setFromTriplets(ta.begin(), ta.end());
  red.B.resize(system.B.rows(), nf);
  red.B.setFromTriplets(tb.begin(), tb.end());
  red.C = system.C;
  red.S = system.S;
  return red;
}

ReducedSystem apply_dirichlet(const SaddleSystem& system) {
  return apply_dirichlet(system, system.dirichlet);
}

void write_matrix_market(std::ostream& out, const SparseMatrix& m) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
  out << std::setprecision(17);
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
    }
  }
}

void write_matrix_market(const std::string& path, const SparseMatrix& m) {
  std::ofstream out(path);
  if (!out) throw AssemblyError("cannot open '" + path + "' for writing");
  write_matrix_market(out, m);
}

}  // namespace elast
