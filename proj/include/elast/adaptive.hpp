#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "elast/assembly.hpp"
#include "elast/estimators.hpp"
#include "elast/execution.hpp"
#include "elast/linear_solve.hpp"
#include "elast/mesh.hpp"
#include "elast/problems.hpp"

namespace elast {

enum class EstimatorKind { residual, poisson };
enum class RefinementMode { uniform, adaptive };

std::string_view to_string(EstimatorKind k);
std::string_view to_string(RefinementMode m);
EstimatorKind estimator_from_string(std::string_view name);
RefinementMode refinement_from_string(std::string_view name);

/// 3 on the unit square (N = 546), 2 on the L-shape (N = 418).
int default_initial_level(Domain domain);

struct RunConfig {
  ProblemId problem = ProblemId::test1;
  Formulation formulation = Formulation::herrmann;
  EstimatorKind estimator = EstimatorKind::poisson;
  RefinementMode refinement = RefinementMode::adaptive;
  double theta = 0.5;
  /// Unset means the problem default.
  std::optional<MaterialParams> material;
  long max_dof = 100000;
  /// Unset means default_initial_level of the problem domain.
  std::optional<int> initial_level;
  /// Safety stop in case max_dof is never reached.
  int max_levels = 60;
  /// Evaluate the estimator that is not driving the loop as well.
  bool record_both_estimators = false;
  ExecPolicy policy = ExecPolicy::parallel;
};

struct ConvergenceRow {
  int level = 0;
  long dof = 0;
  /// Estimator selected by the config (eta or eta_P).
  double eta = 0.0;
  double theta_osc = 0.0;
  std::optional<double> exact_error;
  std::optional<double> effectivity;
  std::optional<double> rate;

  double eta_residual = 0.0;
  /// Only filled when the Poisson estimator was evaluated.
  std::optional<double> eta_poisson;
  double pressure_mean_residual = 0.0;
  int num_triangles = 0;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  /// Least-squares rate over the last four rows; set by compute_rates.
  std::optional<double> tail_rate;
};

/// Everything known about one level, handed to the observer after the
/// estimators ran and before marking.
struct LevelState {
  int level = 0;
  const Mesh& mesh;
  const EdgeTopology& topo;
  const MixedSolution& solution;
  const ErrorIndicators& residual;
  const PoissonIndicators* poisson;
  const SolveReport& report;
  const ConvergenceRow& row;
};

using LevelObserver = std::function<void(const LevelState&)>;

/// Solve, estimate, mark, refine until the dof count reaches max_dof. Errors
/// from the modules are rethrown with the level prepended.
ConvergenceTable adaptive_loop(const RunConfig& config, const LevelObserver& observer = {});

/// Local rate -log(e_l/e_{l-1}) / log(N_l/N_{l-1}).
double local_rate(long n0, double e0, long n1, double e1);
/// Negated least-squares slope of log e against log N over the last `count`
/// points (all of them if fewer). Needs at least two points.
double tail_rate(const std::vector<long>& dofs, const std::vector<double>& errors, int count = 4);

/// Fills the per-row rates, using the exact error where every row has one and
/// the estimate otherwise. Throws std::invalid_argument for fewer than two rows.
void compute_rates(ConvergenceTable& table);

/// level,dof,eta,theta_osc,exact_error,effectivity,rate with 12 significant
/// digits; absent values are empty cells.
void emit_csv(std::ostream& out, const ConvergenceTable& table);
void emit_csv(const std::string& path, const ConvergenceTable& table);

}  // namespace elast
