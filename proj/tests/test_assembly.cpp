#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "elast/assembly.hpp"
#include "elast/errors.hpp"
#include "elast/problems.hpp"

using namespace elast;

namespace {

Mesh right_triangle(double h) {
  Mesh m;
  m.vertices = {{0, 0}, {h, 0}, {0, h}};
  m.on_boundary = {1, 1, 1};
  m.triangles = {{0, 1, 2}};
  m.parent = {-1};
  m.kind = {RefinementKind::root};
  return m;
}

struct Discrete {
  Mesh mesh;
  EdgeTopology topo;
  MacroPartition macros;
};

Discrete discrete(Domain d, int level) {
  Discrete out{generate_initial_mesh(d, level), {}, {}};
  out.topo = build_edge_topology(out.mesh);
  out.macros = derive_macroelements(out.mesh, out.topo);
  return out;
}

const VectorField zero_field = [](const Vec2&) { return Vec2::Zero().eval(); };

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("material parameters") {
  const MaterialParams a = material_from_engineering(1.0, 0.25, Formulation::herrmann);
  CHECK(a.mu == doctest::Approx(0.4));
  CHECK(a.lambda == doctest::Approx(0.4));
  CHECK(a.kappa == doctest::Approx(0.4));

  const MaterialParams b = material_from_engineering(1e5, 0.4, Formulation::hydrostatic);
  CHECK(b.mu == doctest::Approx(1e5 / 2.8));
  CHECK(b.lambda == doctest::Approx(4e4 / 0.28));
  CHECK(b.kappa == doctest::Approx(b.mu + b.lambda));

  // 0.49999 / (1.49999 * 0.00002) = 4999900000 / 299998 = 16666.4444429...
  const MaterialParams c = material_from_engineering(1.0, 0.49999, Formulation::herrmann);
  // 1 - 2 nu loses ~5 digits to cancellation
  CHECK(c.lambda == doctest::Approx(4999900000.0 / 299998.0).epsilon(1e-9));

  CHECK_THROWS_AS(material_from_engineering(1.0, 0.5, Formulation::herrmann), std::invalid_argument);
  CHECK_THROWS_AS(material_from_engineering(1.0, 0.7, Formulation::herrmann), std::invalid_argument);
  CHECK_THROWS_AS(material_from_engineering(0.0, 0.3, Formulation::herrmann), std::invalid_argument);
  CHECK_THROWS_AS(material_from_engineering(1.0, 0.0, Formulation::herrmann), std::invalid_argument);

  const MaterialParams s = material_from_shear(100.0, 0.4, Formulation::herrmann);
  CHECK(s.mu == 100.0);
  CHECK(s.E == doctest::Approx(280.0));
}

TEST_CASE("element blocks against a hand-integrated right triangle") {
  const double h = 0.3;
  const Mesh m = right_triangle(h);
  for (Formulation f : {Formulation::herrmann, Formulation::hydrostatic}) {
    const MaterialParams p = material_from_shear(0.7, 0.3, f);
    const ElementBlocks blk = compute_element_blocks(m, p, zero_field, ExecPolicy::serial)[0];
    // strain-displacement matrix in Voigt form (exx, eyy, gxy)
    const double gx[3] = {-1 / h, 1 / h, 0}, gy[3] = {-1 / h, 0, 1 / h};
    Eigen::Matrix<double, 3, 6> Bv = Eigen::Matrix<double, 3, 6>::Zero();
    Eigen::Matrix<double, 1, 6> div;
    for (int i = 0; i < 3; ++i) {
      Bv(0, 2 * i) = gx[i];
      Bv(1, 2 * i + 1) = gy[i];
      Bv(2, 2 * i) = gy[i];
      Bv(2, 2 * i + 1) = gx[i];
      div(2 * i) = gx[i];
      div(2 * i + 1) = gy[i];
    }
    const double area = 0.5 * h * h;
    const Eigen::Matrix3d D = Eigen::Vector3d(2 * p.mu, 2 * p.mu, p.mu).asDiagonal();
    Eigen::Matrix<double, 6, 6> A = area * Bv.transpose() * D * Bv;
    if (f == Formulation::hydrostatic) A -= p.mu * area * div.transpose() * div;
    CHECK(max_abs(blk.A - A) <= 1e-12 * max_abs(A));
    CHECK(max_abs(blk.B + area * div) <= 1e-14);
    CHECK(blk.C == doctest::Approx(area / p.kappa));
  }
  // closed form of one entry: A(v0x, v0x) = mu * (h^2/2) * (2/h^2 + 1/h^2)
  const MaterialParams p = material_from_shear(2.0, 0.3, Formulation::herrmann);
  CHECK(compute_element_blocks(m, p, zero_field)[0].A(0, 0) == doctest::Approx(1.5 * 2.0));
}

TEST_CASE("pressure mass entry") {
  // triangle of area 0.02 with kappa = 2
  Mesh m = right_triangle(0.2);
  MaterialParams p = material_from_shear(1.0, 0.3, Formulation::herrmann);
  p.kappa = 2.0;
  CHECK(compute_element_blocks(m, p, zero_field)[0].C == doctest::Approx(0.01));
}

TEST_CASE("load vector integrates linear forces exactly") {
  const Mesh m = right_triangle(1.0);
  const MaterialParams p = material_from_shear(1.0, 0.3, Formulation::herrmann);
  const VectorField f = [](const Vec2& x) { return Vec2(x.x(), 2.0); };
  const ElementBlocks blk = compute_element_blocks(m, p, f)[0];
  // int x l_i = area * (1 + delta) / 12 * ... via moments: int l_1 l_i
  const double area = 0.5;
  CHECK(blk.load(0) == doctest::Approx(area / 12.0));       // int l_1 l_0
  CHECK(blk.load(2) == doctest::Approx(area / 6.0));        // int l_1^2
  CHECK(blk.load(4) == doctest::Approx(area / 12.0));
  for (int i = 0; i < 3; ++i) CHECK(blk.load(2 * i + 1) == doctest::Approx(2.0 * area / 3.0));
}

TEST_CASE("stabilisation block properties") {
  const Discrete d = discrete(Domain::l_shape, 1);
  Mesh m = refine_rgb(d.mesh, mark_dorfler(std::vector<double>(d.mesh.num_triangles(), 1.0), 0.3));
  const EdgeTopology topo = build_edge_topology(m);
  const MacroPartition mp = derive_macroelements(m, topo);
  const SparseMatrix S = assemble_stabilisation(topo, mp, 0.5);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(S.rows());
  CHECK((S * ones).cwiseAbs().maxCoeff() == 0.0);
  CHECK((Eigen::MatrixXd(S) - Eigen::MatrixXd(S).transpose()).norm() == 0.0);
  std::mt19937 rng(5);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    Eigen::VectorXd x(S.rows());
    for (auto& v : x) v = n(rng);
    CHECK(x.dot(S * x) >= 0.0);
  }
  const SparseMatrix S2 = assemble_stabilisation(topo, mp, 1.0);
  CHECK((Eigen::MatrixXd(S2) * 2.0 - Eigen::MatrixXd(S)).norm() <= 1e-15 * Eigen::MatrixXd(S).norm());
}

TEST_CASE("single-edge stabilisation example") {
  // two triangles sharing an edge of length 0.5
  Mesh m;
  m.vertices = {{0, 0}, {0.5, 0}, {0.25, 0.5}, {0.25, -0.5}};
  m.on_boundary = {1, 1, 1, 1};
  m.triangles = {{0, 1, 2}, {1, 0, 3}};
  m.parent = {0, 0};
  m.kind = {RefinementKind::green, RefinementKind::green};
  const EdgeTopology topo = build_edge_topology(m);
  const MacroPartition mp = derive_macroelements(m, topo);
  REQUIRE(mp.num_macros() == 1);
  REQUIRE(mp.interior_edges[0].size() == 1);
  const SparseMatrix S = assemble_stabilisation(topo, mp, 0.5);
  const Eigen::Vector2d p(1.0, -1.0);  // jump 2
  CHECK(p.dot(S * p) == doctest::Approx(1.0).epsilon(1e-12));
  const Eigen::Vector2d c(3.0, 3.0);
  CHECK(c.dot(S * c) == 0.0);

  MacroPartition bad = mp;
  for (int e = 0; e < topo.num_edges(); ++e) {
    if (topo.is_boundary(e)) {
      bad.interior_edges[0].push_back(e);
      break;
    }
  }
  CHECK_THROWS_AS(assemble_stabilisation(topo, bad, 0.5), AssemblyError);
}

TEST_CASE("assembled blocks: symmetry, definiteness, hydrostatic difference, scaling") {
  const Discrete d = discrete(Domain::unit_square, 2);
  const MaterialParams ph = material_from_engineering(3.0, 0.35, Formulation::herrmann);
  const MaterialParams ps = material_from_engineering(3.0, 0.35, Formulation::hydrostatic);
  const SaddleSystem h = assemble_saddle_system(d.mesh, d.topo, d.macros, ph, zero_field, zero_field);
  const SaddleSystem s = assemble_saddle_system(d.mesh, d.topo, d.macros, ps, zero_field, zero_field);
  const Eigen::MatrixXd A = h.A;
  CHECK((A - A.transpose()).norm() <= 1e-13 * A.norm());
  const ReducedSystem red = apply_dirichlet(h);
  CHECK(Eigen::LLT<Eigen::MatrixXd>(Eigen::MatrixXd(red.A)).info() == Eigen::Success);

  // divergence Gram matrix, independently from the B block: B^T diag(1/area) B
  Eigen::VectorXd inv_area(d.mesh.num_triangles());
  for (int t = 0; t < d.mesh.num_triangles(); ++t) inv_area[t] = 1.0 / d.mesh.signed_area(t);
  const Eigen::MatrixXd B = h.B;
  const Eigen::MatrixXd gram = B.transpose() * inv_area.asDiagonal() * B;
  CHECK((Eigen::MatrixXd(s.A) - (A - ph.mu * gram)).norm() <= 1e-12 * A.norm());

  const MaterialParams p2 = material_from_engineering(3.0 * 7.0, 0.35, Formulation::herrmann);
  const SaddleSystem h2 = assemble_saddle_system(d.mesh, d.topo, d.macros, p2, zero_field, zero_field);
  CHECK((Eigen::MatrixXd(h2.A) - 7.0 * A).norm() <= 1e-13 * 7.0 * A.norm());
  CHECK((Eigen::MatrixXd(h2.S) * 7.0 - Eigen::MatrixXd(h.S)).norm() <= 1e-13 * Eigen::MatrixXd(h.S).norm());
  CHECK((Eigen::MatrixXd(h2.C) * 7.0 - Eigen::MatrixXd(h.C)).norm() <= 1e-13 * Eigen::MatrixXd(h.C).norm());

  Mesh cw = right_triangle(1.0);
  std::swap(cw.triangles[0][1], cw.triangles[0][2]);
  CHECK_THROWS_AS(compute_element_blocks(cw, ph, zero_field), AssemblyError);
}

TEST_CASE("patch test: interpolated exact solution has zero residual") {
  for (Formulation f : {Formulation::herrmann, Formulation::hydrostatic}) {
    const Discrete d = discrete(Domain::unit_square, 2);
    const MaterialParams p = material_from_shear(1.0, 0.3, f);
    const ProblemSpec prob = make_problem(ProblemId::patch, p);
    const SaddleSystem sys = assemble_saddle_system(d.mesh, d.topo, d.macros, p, prob.body_force,
                                                    prob.boundary_data);
    Eigen::VectorXd u(2 * d.mesh.num_vertices());
    for (int v = 0; v < d.mesh.num_vertices(); ++v) {
      const Vec2 x = prob.exact->u(Vec2(d.mesh.vertices[v].x, d.mesh.vertices[v].y));
      u[2 * v] = x.x();
      u[2 * v + 1] = x.y();
    }
    const Eigen::VectorXd ru = sys.A * u - sys.rhs_u;  // p = 0
    for (int v = 0; v < d.mesh.num_vertices(); ++v) {
      if (d.mesh.on_boundary[v]) continue;
      CHECK(std::abs(ru[2 * v]) <= 1e-12);
      CHECK(std::abs(ru[2 * v + 1]) <= 1e-12);
    }
    CHECK((sys.B * u - sys.rhs_p).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("dirichlet elimination: hand example") {
  // 3 displacement dofs, dof 1 free, one pressure
  SaddleSystem sys;
  Eigen::Matrix3d A;
  A << 4, 1, 0.5, 1, 3, 2, 0.5, 2, 5;
  sys.A = A.sparseView();
  Eigen::Matrix<double, 1, 3> B;
  B << 1, -2, 3;
  sys.B = Eigen::MatrixXd(B).sparseView();
  sys.C = Eigen::MatrixXd::Constant(1, 1, 0.25).sparseView();
  sys.S = SparseMatrix(1, 1);
  sys.rhs_u = Eigen::Vector3d(1, 2, 3);
  sys.rhs_p = Eigen::VectorXd::Constant(1, 0.5);
  sys.dirichlet = {{0, 2.0}, {2, -1.0}};
  const ReducedSystem r = apply_dirichlet(sys);
  REQUIRE(r.free_dofs == std::vector<int>{1});
  CHECK(r.A.coeff(0, 0) == 3.0);
  CHECK(r.B.coeff(0, 0) == -2.0);
  CHECK(r.rhs_u[0] == doctest::Approx(2 - 1 * 2.0 - 2 * (-1.0)));
  CHECK(r.rhs_p[0] == doctest::Approx(0.5 - (1 * 2.0 + 3 * (-1.0))));
  CHECK(r.C.coeff(0, 0) == 0.25);

  CHECK_THROWS_AS(apply_dirichlet(sys, {{0, 2.0}}), AssemblyError);
  CHECK_THROWS_AS(apply_dirichlet(sys, {{0, 2.0}, {1, 0.0}, {2, -1.0}}), AssemblyError);

  // g = 0 leaves the right-hand side alone
  const ReducedSystem z = apply_dirichlet(sys, {{0, 0.0}, {2, 0.0}});
  CHECK(z.rhs_u[0] == 2.0);
  CHECK(z.rhs_p[0] == 0.5);
}

TEST_CASE("dirichlet elimination agrees with a dense constrained solve") {
  const Discrete d = discrete(Domain::unit_square, 1);
  const MaterialParams p = material_from_shear(1.0, 0.3, Formulation::herrmann);
  const ProblemSpec prob = make_problem(ProblemId::test3, p);  // non-affine g
  const SaddleSystem sys = assemble_saddle_system(d.mesh, d.topo, d.macros, p,
                                                  [](const Vec2& x) { return Vec2(x.y(), 1.0); },
                                                  prob.boundary_data);
  const int nu = sys.num_displacement_dofs(), np = sys.num_pressure_dofs();

  // full system with identity rows for the prescribed dofs
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(nu + np, nu + np);
  K.topLeftCorner(nu, nu) = Eigen::MatrixXd(sys.A);
  K.topRightCorner(nu, np) = Eigen::MatrixXd(sys.B).transpose();
  K.bottomLeftCorner(np, nu) = Eigen::MatrixXd(sys.B);
  K.bottomRightCorner(np, np) = -Eigen::MatrixXd(sys.C) - Eigen::MatrixXd(sys.S);
  Eigen::VectorXd b(nu + np);
  b << sys.rhs_u, sys.rhs_p;
  for (const auto& [dof, val] : sys.dirichlet) {
    K.row(dof).setZero();
    K(dof, dof) = 1.0;
    b[dof] = val;
  }
  const Eigen::VectorXd full = K.partialPivLu().solve(b);

  const ReducedSystem red = apply_dirichlet(sys);
  const Eigen::VectorXd x = Eigen::MatrixXd(red.kkt()).partialPivLu().solve(red.kkt_rhs());
  const int nf = static_cast<int>(red.free_dofs.size());
  for (int i = 0; i < nf; ++i) CHECK(x[i] == doctest::Approx(full[red.free_dofs[i]]).epsilon(1e-10));
  for (int k = 0; k < np; ++k) CHECK(x[nf + k] == doctest::Approx(full[nu + k]).epsilon(1e-10));
}

TEST_CASE("matrix market dump") {
  Eigen::MatrixXd m(2, 2);
  m << 1.5, 0, 0, -2;
  std::ostringstream out;
  write_matrix_market(out, m.sparseView());
  CHECK(out.str() == "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.5\n2 2 -2\n");
}
