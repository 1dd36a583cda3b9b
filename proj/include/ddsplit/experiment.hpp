#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ddsplit/analysis.hpp"
#include "ddsplit/decomposition.hpp"
#include "ddsplit/grid.hpp"
#include "ddsplit/linsolve.hpp"
#include "ddsplit/operators.hpp"
#include "ddsplit/schemes.hpp"

namespace ddsplit {

enum class ProblemKind { Heat, ConvDiff };

const char* to_string(ProblemKind p);
ProblemKind parse_problem(const std::string& name);

struct ExperimentConfig {
  ProblemKind problem = ProblemKind::Heat;
  SchemeKind scheme = SchemeKind::Weighted;
  double sigma = 1.0;
  int cells1 = 32;
  int cells2 = 32;
  double final_time = 0.01;
  int steps = 10;
  int mode1 = 2;  // exact-solution mode numbers, also the initial data
  int mode2 = 1;
  double v1 = 1.0;  // constant velocities (convdiff only)
  double v2 = 0.5;
  Axis axis = Axis::X1;
  int strips = 4;
  int groups = 2;
  OverlapVariant overlap = OverlapVariant::IntegerNode;
  std::vector<int> interfaces;  // empty: equal strips
  SolverConfig solver;

  double tau() const { return steps > 0 ? final_time / steps : 0.0; }
  DecompositionSpec decomposition(const Grid& grid) const;
  void validate() const;
};

// Grid, operators and partition assembled from a config. The heat problem uses
// the five-point Laplacian; convdiff adds a constant-velocity convection term.
// Its reference solution is a Crank-Nicolson run with kReferenceSubsteps
// substeps per step, since no closed form exists.
class Experiment {
public:
  static constexpr int kReferenceSubsteps = 32;

  explicit Experiment(ExperimentConfig config);

  const ExperimentConfig& config() const { return config_; }
  const Grid& grid() const { return grid_; }
  const PartitionOfUnity& partition() const { return partition_; }
  const SplitProblem& problem() const { return problem_; }
  const LinearGridOperator& symmetric_part() const { return symmetric_; }
  const LinearGridOperator& skew_part() const { return skew_; }
  const EdgeOperator& gradient() const { return gradient_; }

  SchemeConfig scheme() const;
  GridFunction initial() const;

  // Runs the configured scheme from the initial data and records eps(t^n).
  ErrorReport run() const;
  // Full trajectory, for diagnostics that need every component.
  std::vector<SchemeState> trajectory() const;

  double transition_norm(double tau, double sigma) const;
  double max_eigenvalue() const;
  std::vector<std::size_t> exchange_volume() const;

private:
  ExperimentConfig config_;
  Grid grid_;
  LinearGridOperator symmetric_;
  LinearGridOperator skew_;
  EdgeOperator gradient_;
  PartitionOfUnity partition_;
  SplitProblem problem_;
};

struct CompareRow {
  std::string scheme;
  std::string overlap;
  int groups = 0;
  double final_error = 0.0;
  std::optional<double> transition_norm;
  std::size_t exchange = 0;  // summed over groups; 0 for undecomposed schemes
};

// Runs every config (concurrently) and returns rows sorted by final error.
// All configs must share problem, grid and time parameters.
std::vector<CompareRow> compare(std::span<const ExperimentConfig> configs, bool with_norm);

// `scheme,overlap,p,eps_T,transition_norm,exchange`
void write_compare_csv(std::ostream& out, std::span<const CompareRow> rows);

inline constexpr double kStabilitySlack = 1e-8;

struct StabilityRow {
  SchemeKind scheme;
  double sigma;
  double tau;
  double norm;
  bool flagged() const { return norm > 1.0 + kStabilitySlack; }
};

std::vector<StabilityRow> stability_table(const ExperimentConfig& base, std::span<const SchemeKind> schemes,
                                          std::span<const double> sigmas, std::span<const double> taus);

// `scheme,sigma,tau,norm`
void write_stability_csv(std::ostream& out, std::span<const StabilityRow> rows);

}  // namespace ddsplit
