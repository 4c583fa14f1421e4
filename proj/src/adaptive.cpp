#include "elast/adaptive.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "elast/errors.hpp"

namespace elast {

namespace {

// rethrow with the level in front, keeping the error category
[[noreturn]] void rethrow_at_level(int level) {
  const std::string where = "level " + std::to_string(level) + ": ";
  try {
    throw;
  } catch (const SolverError& e) {
    throw SolverError(where + e.what());
  } catch (const EstimatorError& e) {
    throw EstimatorError(where + e.what());
  } catch (const AssemblyError& e) {
    throw AssemblyError(where + e.what());
  } catch (const PartitionError& e) {
    throw PartitionError(where + e.what());
  } catch (const TopologyError& e) {
    throw TopologyError(where + e.what());
  } catch (const MeshError& e) {
    throw MeshError(where + e.what());
  }
}

void write_cell(std::ostream& out, const std::optional<double>& v) {
  if (v) out << *v;
}

}  // namespace

std::string_view to_string(EstimatorKind k) {
  return k == EstimatorKind::residual ? "residual" : "poisson";
}

std::string_view to_string(RefinementMode m) {
  return m == RefinementMode::uniform ? "uniform" : "adaptive";
}

EstimatorKind estimator_from_string(std::string_view name) {
  if (name == "residual") return EstimatorKind::residual;
  if (name == "poisson") return EstimatorKind::poisson;
  throw ConfigError("unknown estimator '" + std::string(name) + "'");
}

RefinementMode refinement_from_string(std::string_view name) {
  if (name == "uniform") return RefinementMode::uniform;
  if (name == "adaptive") return RefinementMode::adaptive;
  throw ConfigError("unknown refinement '" + std::string(name) + "'");
}

int default_initial_level(Domain domain) { return domain == Domain::unit_square ? 3 : 2; }

ConvergenceTable adaptive_loop(const RunConfig& config, const LevelObserver& observer) {
  if (!(config.theta > 0.0 && config.theta <= 1.0)) {
    throw ConfigError("theta must lie in (0, 1]");
  }
  const MaterialParams material =
      config.material ? *config.material : default_material(config.problem, config.formulation);
  if (material.formulation != config.formulation) {
    throw ConfigError("material formulation does not match the run formulation");
  }
  const ProblemSpec problem = make_problem(config.problem, material);
  const int initial_level = config.initial_level.value_or(default_initial_level(problem.domain));
  if (initial_level < 1) throw ConfigError("initial level must be at least 1");

  Mesh mesh = generate_initial_mesh(problem.domain, initial_level);
  if (mesh.dof_count() > config.max_dof) {
    throw ConfigError("max_dof " + std::to_string(config.max_dof) +
                      " is below the initial dof count " + std::to_string(mesh.dof_count()));
  }
  const bool want_poisson =
      config.estimator == EstimatorKind::poisson || config.record_both_estimators;

  ConvergenceTable table;
  for (int level = 0;; ++level) {
    ConvergenceRow row;
    MarkedSet marked;
    try {
      const EdgeTopology topo = build_edge_topology(mesh);
      const MacroPartition macros = derive_macroelements(mesh, topo);
      const SaddleSystem sys = assemble_saddle_system(mesh, topo, macros, material, problem.body_force,
                                                      problem.boundary_data, config.policy);
      SolveReport report;
      const MixedSolution sol = solve_direct(sys, &report);

      const LoadProjection load = project_load(problem.body_force, mesh, material.mu, config.policy);
      const EstimatorWeights weights = estimator_weights(mesh, topo, material);
      const ElementResiduals res =
          element_residuals(mesh, topo, sol, load.f_h, material, config.policy);
      const ErrorIndicators ind = residual_indicator(mesh, topo, res, weights, load.theta, config.policy);
      std::optional<PoissonIndicators> pind;
      if (want_poisson) pind = poisson_indicator(mesh, topo, res, weights, material, config.policy);

      row.level = level;
      row.dof = mesh.dof_count();
      row.num_triangles = mesh.num_triangles();
      row.eta_residual = ind.global_eta;
      if (pind) row.eta_poisson = pind->global_eta_P;
      row.eta = config.estimator == EstimatorKind::poisson ? pind->global_eta_P : ind.global_eta;
      row.theta_osc = ind.global_theta;
      if (problem.exact) {
        row.exact_error = energy_error(mesh, sol, problem, material, config.policy).total;
        if (*row.exact_error > 0.0) row.effectivity = row.eta / *row.exact_error;
      }
      row.pressure_mean_residual = pressure_mean_check(mesh, topo, sol, material);

      if (observer) {
        observer(LevelState{level, mesh, topo, sol, ind, pind ? &*pind : nullptr, report, row});
      }
      table.rows.push_back(row);

      if (row.dof >= config.max_dof || level + 1 >= config.max_levels) break;
      if (config.refinement == RefinementMode::uniform) {
        mesh = refine_uniform(mesh);
        continue;
      }
      std::vector<double> squares(mesh.num_triangles());
      for (int t = 0; t < mesh.num_triangles(); ++t) {
        const double v = config.estimator == EstimatorKind::poisson ? pind->eta_PK[t] : ind.eta_K[t];
        squares[t] = v * v;
      }
      marked = mark_dorfler(squares, config.theta);
    } catch (const Error&) {
      rethrow_at_level(level);
    }
    // nothing left to mark: the discrete solution is exact as far as the
    // estimator can tell
    if (marked.all_zero || marked.marked.empty()) break;
    mesh = refine_rgb(mesh, marked);
  }

  if (table.rows.size() >= 2) compute_rates(table);
  return table;
}

double local_rate(long n0, double e0, long n1, double e1) {
  return -std::log(e1 / e0) / std::log(static_cast<double>(n1) / static_cast<double>(n0));
}

double tail_rate(const std::vector<long>& dofs, const std::vector<double>& errors, int count) {
  if (dofs.size() != errors.size()) throw std::invalid_argument("tail_rate: size mismatch");
  const int n = static_cast<int>(dofs.size());
  if (n < 2) throw std::invalid_argument("tail_rate needs at least two points");
  const int first = std::max(0, n - count);
  const int m = n - first;
  double sx = 0.0, sy = 0.0;
  for (int i = first; i < n; ++i) {
    sx += std::log(static_cast<double>(dofs[i]));
    sy += std::log(errors[i]);
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0.0, sxy = 0.0;
  for (int i = first; i < n; ++i) {
    const double dx = std::log(static_cast<double>(dofs[i])) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(errors[i]) - my);
  }
  return -sxy / sxx;
}

void compute_rates(ConvergenceTable& table) {
  auto& rows = table.rows;
  if (rows.size() < 2) throw std::invalid_argument("compute_rates needs at least two rows");
  bool exact = true;
  for (const auto& r : rows) exact = exact && r.exact_error.has_value();
  auto err = [exact](const ConvergenceRow& r) { return exact ? *r.exact_error : r.eta; };

  rows[0].rate.reset();
  std::vector<long> dofs{rows[0].dof};
  std::vector<double> errs{err(rows[0])};
  for (std::size_t i = 1; i < rows.size(); ++i) {
    rows[i].rate = local_rate(rows[i - 1].dof, err(rows[i - 1]), rows[i].dof, err(rows[i]));
    dofs.push_back(rows[i].dof);
    errs.push_back(err(rows[i]));
  }
  table.tail_rate = tail_rate(dofs, errs, 4);
}

void emit_csv(std::ostream& out, const ConvergenceTable& table) {
  if (table.rows.empty()) throw std::invalid_argument("emit_csv: empty table");
  std::ostringstream buf;
  buf << std::setprecision(12);
  buf << "level,dof,eta,theta_osc,exact_error,effectivity,rate\n";
  for (const auto& r : table.rows) {
    buf << r.level << ',' << r.dof << ',' << r.eta << ',' << r.theta_osc << ',';
    write_cell(buf, r.exact_error);
    buf << ',';
    write_cell(buf, r.effectivity);
    buf << ',';
    write_cell(buf, r.rate);
    buf << '\n';
  }
  out << buf.str();
}

void emit_csv(const std::string& path, const ConvergenceTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  emit_csv(out, table);
  if (!out) throw ConfigError("failed writing '" + path + "'");
}

}  // namespace elast
