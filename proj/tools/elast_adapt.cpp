// Adaptive solve -> estimate -> mark -> refine driver writing a convergence
// table as CSV.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "elast/adaptive.hpp"
#include "elast/errors.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive stabilised P1-P0 solver for nearly incompressible plane elasticity"};

  std::string problem = "1";
  std::string formulation = "herrmann";
  std::string estimator = "poisson";
  std::string refinement = "adaptive";
  std::optional<double> nu, mu, young;
  double theta = 0.5;
  long max_dof = 100000;
  std::optional<int> initial_level;
  std::string out_path;
  std::string dump_mesh, dump_indicators;
  bool serial = false;

  app.add_option("--problem", problem, "Test problem")
      ->check(CLI::IsMember({"1", "2", "3", "patch"}));
  app.add_option("--formulation", formulation)->check(CLI::IsMember({"herrmann", "hydrostatic"}));
  app.add_option("--estimator", estimator)->check(CLI::IsMember({"residual", "poisson"}));
  app.add_option("--refinement", refinement)->check(CLI::IsMember({"uniform", "adaptive"}));
  app.add_option("--nu", nu, "Poisson ratio");
  auto* mu_opt = app.add_option("--mu", mu, "Shear modulus");
  auto* e_opt = app.add_option("--E", young, "Young's modulus");
  mu_opt->excludes(e_opt);
  app.add_option("--theta", theta, "Dorfler bulk parameter");
  app.add_option("--max-dof", max_dof, "Stop once a level has at least this many dofs");
  app.add_option("--initial-level", initial_level, "Red refinements of the initial mesh");
  app.add_option("--out", out_path, "Convergence table CSV")->required();
  app.add_option("--dump-mesh", dump_mesh, "Write the last mesh");
  app.add_option("--dump-indicators", dump_indicators, "Write the last per-element indicators");
  app.add_flag("--serial", serial, "Use the serial reference kernels");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    elast::RunConfig cfg;
    cfg.problem = elast::problem_from_string(problem);
    cfg.formulation = formulation == "herrmann" ? elast::Formulation::herrmann
                                                : elast::Formulation::hydrostatic;
    cfg.estimator = elast::estimator_from_string(estimator);
    cfg.refinement = elast::refinement_from_string(refinement);
    cfg.theta = theta;
    cfg.max_dof = max_dof;
    cfg.initial_level = initial_level;
    cfg.record_both_estimators = !dump_indicators.empty();
    cfg.policy = serial ? elast::ExecPolicy::serial : elast::ExecPolicy::parallel;

    if (nu || mu || young) {
      elast::MaterialParams base = elast::default_material(cfg.problem, cfg.formulation);
      const double v = nu.value_or(base.nu);
      try {
        if (young) {
          cfg.material = elast::material_from_engineering(*young, v, cfg.formulation);
        } else {
          cfg.material = elast::material_from_shear(mu.value_or(base.mu), v, cfg.formulation);
        }
      } catch (const std::invalid_argument& e) {
        throw elast::ConfigError(e.what());
      }
    }

    auto observer = [&](const elast::LevelState& s) {
      if (s.report.conditioning_warning) {
        std::cerr << "warning: level " << s.level << ": pivot ratio " << s.report.pivot_ratio
                  << " below " << elast::kPivotWarning << '\n';
      }
      if (!dump_mesh.empty()) elast::write_mesh(dump_mesh, s.mesh);
      if (!dump_indicators.empty()) elast::write_indicators_csv(dump_indicators, s.residual, s.poisson);
    };
    const elast::ConvergenceTable table = elast::adaptive_loop(cfg, observer);
    elast::emit_csv(out_path, table);
    const auto& last = table.rows.back();
    std::cout << "levels " << table.rows.size() << ", final dof " << last.dof << ", eta "
              << last.eta;
    if (last.exact_error) std::cout << ", error " << *last.exact_error;
    if (table.tail_rate) std::cout << ", tail rate " << *table.tail_rate;
    std::cout << '\n';
  } catch (const elast::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const elast::SolverError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
