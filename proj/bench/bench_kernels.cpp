// Serial reference vs OpenMP loops for the per-element kernels.
// Arg(0) = serial, Arg(1) = parallel.

#include <benchmark/benchmark.h>

#include "elast/adaptive.hpp"
#include "elast/assembly.hpp"
#include "elast/estimators.hpp"
#include "elast/linear_solve.hpp"
#include "elast/problems.hpp"

using namespace elast;

namespace {

struct Fixture {
  Mesh mesh;
  EdgeTopology topo;
  MaterialParams mat;
  ProblemSpec prob;
  MixedSolution sol;
  LoadProjection load;
  ElementResiduals res;
  EstimatorWeights w;
};

// uniform test 1 mesh, level 6 (16k triangles)
const Fixture& fixture() {
  static const Fixture f = [] {
    Fixture x;
    x.mesh = generate_initial_mesh(Domain::unit_square, 6);
    x.topo = build_edge_topology(x.mesh);
    x.mat = material_from_shear(100.0, 0.49999, Formulation::herrmann);
    x.prob = make_problem(ProblemId::test1, x.mat);
    const SaddleSystem sys = assemble_saddle_system(x.mesh, x.topo, derive_macroelements(x.mesh, x.topo),
                                                    x.mat, x.prob.body_force, x.prob.boundary_data);
    x.sol = solve_direct(sys);
    x.load = project_load(x.prob.body_force, x.mesh, x.mat.mu);
    x.res = element_residuals(x.mesh, x.topo, x.sol, x.load.f_h, x.mat);
    x.w = estimator_weights(x.mesh, x.topo, x.mat);
    return x;
  }();
  return f;
}

ExecPolicy policy_of(const benchmark::State& s) {
  return s.range(0) == 0 ? ExecPolicy::serial : ExecPolicy::parallel;
}

void BM_element_blocks(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_element_blocks(f.mesh, f.mat, f.prob.body_force, policy_of(state)));
  }
  state.SetItemsProcessed(state.iterations() * f.mesh.num_triangles());
}

void BM_load_projection(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(project_load(f.prob.body_force, f.mesh, f.mat.mu, policy_of(state)));
  }
  state.SetItemsProcessed(state.iterations() * f.mesh.num_triangles());
}

void BM_residuals(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(element_residuals(f.mesh, f.topo, f.sol, f.load.f_h, f.mat, policy_of(state)));
  }
  state.SetItemsProcessed(state.iterations() * f.mesh.num_triangles());
}

void BM_residual_indicator(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(residual_indicator(f.mesh, f.topo, f.res, f.w, f.load.theta, policy_of(state)));
  }
  state.SetItemsProcessed(state.iterations() * f.mesh.num_triangles());
}

void BM_poisson_indicator(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(poisson_indicator(f.mesh, f.topo, f.res, f.w, f.mat, policy_of(state)));
  }
  state.SetItemsProcessed(state.iterations() * f.mesh.num_triangles());
}

void BM_energy_error(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(energy_error(f.mesh, f.sol, f.prob, f.mat, policy_of(state)));
  }
  state.SetItemsProcessed(state.iterations() * f.mesh.num_triangles());
}

void BM_adaptive_run(benchmark::State& state) {
  RunConfig c;
  c.problem = ProblemId::test1;
  c.max_dof = 30000;
  c.policy = policy_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(adaptive_loop(c));
}

}  // namespace

BENCHMARK(BM_element_blocks)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_load_projection)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_residuals)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_residual_indicator)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_poisson_indicator)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_energy_error)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_adaptive_run)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
