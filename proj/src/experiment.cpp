#include "ddsplit/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <ostream>

#include "ddsplit/errors.hpp"
#include "format.hpp"

namespace ddsplit {

const char* to_string(ProblemKind p) { return p == ProblemKind::Heat ? "heat" : "convdiff"; }

ProblemKind parse_problem(const std::string& name) {
  if (name == "heat") return ProblemKind::Heat;
  if (name == "convdiff") return ProblemKind::ConvDiff;
  throw ConfigError("unknown problem '" + name + "' (expected heat or convdiff)");
}

DecompositionSpec ExperimentConfig::decomposition(const Grid& grid) const {
  if (groups == 1 && strips <= 1) return DecompositionSpec{axis, 1, 1, overlap, {}};
  DecompositionSpec spec = DecompositionSpec::equal_strips(grid, axis, strips, groups, overlap);
  if (!interfaces.empty()) spec.interfaces = interfaces;
  return spec;
}

void ExperimentConfig::validate() const {
  if (!(final_time > 0.0)) throw ConfigError("final time must be positive");
  if (steps < 0) throw ConfigError("number of steps must be nonnegative");
  if (mode1 < 1 || mode2 < 1) throw ConfigError("mode numbers must be natural numbers");
  if (strips < 1 || groups < 1) throw ConfigError("strip and group counts must be positive");
  if (!std::isfinite(v1) || !std::isfinite(v2)) throw ConfigError("velocities must be finite");
  solver.validate();
}

namespace {

LinearGridOperator problem_operator(const ExperimentConfig& c, const Grid& grid) {
  LinearGridOperator a = assemble_laplacian(grid);
  if (c.problem == ProblemKind::ConvDiff) {
    a = a + assemble_convection(grid, NodalField::constant(grid, c.v1), NodalField::constant(grid, c.v2));
  }
  return a;
}

Grid validated_grid(const ExperimentConfig& c) {
  c.validate();
  return Grid::build(c.cells1, c.cells2, 1.0, 1.0);
}

}  // namespace

Experiment::Experiment(ExperimentConfig config)
    : config_(std::move(config)),
      grid_(validated_grid(config_)),
      symmetric_(LinearGridOperator::zero(grid_)),
      skew_(LinearGridOperator::zero(grid_, Symmetry::Skew)),
      gradient_(gradient_factorization(grid_)),
      partition_(build_partition(grid_, config_.decomposition(grid_))),
      problem_{LinearGridOperator::zero(grid_), {}} {
  const LinearGridOperator a = problem_operator(config_, grid_);
  auto [d, c] = split_symmetric_skew(a);
  symmetric_ = std::move(d);
  skew_ = std::move(c);
  problem_.parts = decompose(symmetric_, skew_, gradient_, partition_);
  problem_.whole = a;
}

SchemeConfig Experiment::scheme() const {
  SchemeConfig s;
  s.kind = config_.scheme;
  s.sigma = config_.sigma;
  s.tau = config_.tau();
  s.steps = config_.steps;
  return s;
}

GridFunction Experiment::initial() const { return sample_exact(grid_, 0.0, config_.mode1, config_.mode2); }

std::vector<SchemeState> Experiment::trajectory() const {
  return ddsplit::run(initial(), scheme(), problem_, SourceTerm{}, config_.solver);
}

ErrorReport Experiment::run() const {
  const SchemeConfig s = scheme();
  ErrorReport report{to_string(s.kind),
                     std::to_string(config_.cells1) + "x" + std::to_string(config_.cells2),
                     uses_decomposition(s.kind) ? to_string(config_.overlap) : "none",
                     s.sigma,
                     s.tau,
                     {},
                     {},
                     GridFunction(grid_)};

  // Convdiff reference: Crank-Nicolson substeps advanced alongside the run.
  std::optional<SchemeState> reference;
  if (config_.problem == ProblemKind::ConvDiff) reference.emplace(SchemeState::initial(initial()));
  const double fine_tau = s.tau / kReferenceSubsteps;

  auto exact_at = [&](const SchemeState& state) {
    const double t = state.step() * s.tau;
    if (!reference) return sample_exact(grid_, t, config_.mode1, config_.mode2);
    while (reference->step() < state.step() * kReferenceSubsteps) {
      reference = step_weighted(*reference, problem_.whole, 0.5, fine_tau, GridFunction(grid_), config_.solver);
    }
    return reference->component(0);
  };

  const StepObserver observer = [&](const SchemeState& state) {
    const GridFunction err = state.scalar() - exact_at(state);
    report.times.push_back(state.step() * s.tau);
    report.errors.push_back(norm(err));
    report.local_error = err;
  };
  ddsplit::run(initial(), s, problem_, SourceTerm{}, config_.solver, observer);
  return report;
}

double Experiment::transition_norm(double tau, double sigma) const {
  SchemeConfig s = scheme();
  s.tau = tau;
  s.sigma = sigma;
  s.steps = 1;
  return ddsplit::transition_norm(s, problem_, config_.solver);
}

double Experiment::max_eigenvalue() const { return ddsplit::max_eigenvalue(symmetric_); }

std::vector<std::size_t> Experiment::exchange_volume() const { return interface_exchange_volume(partition_); }

std::vector<CompareRow> compare(std::span<const ExperimentConfig> configs, bool with_norm) {
  if (configs.empty()) throw ConfigError("nothing to compare");
  const ExperimentConfig& first = configs.front();
  for (const auto& c : configs) {
    if (c.problem != first.problem || c.cells1 != first.cells1 || c.cells2 != first.cells2 ||
        c.final_time != first.final_time || c.steps != first.steps || c.mode1 != first.mode1 ||
        c.mode2 != first.mode2 || c.v1 != first.v1 || c.v2 != first.v2) {
      throw ConfigError("compared configs must share problem, grid and time parameters");
    }
  }

  std::vector<std::future<CompareRow>> pending;
  for (const auto& c : configs) {
    pending.push_back(std::async(std::launch::async, [&c, with_norm] {
      const Experiment e(c);
      CompareRow row;
      row.scheme = to_string(c.scheme);
      const bool split = uses_decomposition(c.scheme);
      row.overlap = split ? to_string(c.overlap) : "none";
      row.groups = split ? e.partition().group_count() : 1;
      row.final_error = e.run().final_error();
      if (with_norm) row.transition_norm = e.transition_norm(c.tau(), c.sigma);
      if (split) {
        const auto v = e.exchange_volume();
        row.exchange = std::accumulate(v.begin(), v.end(), std::size_t{0});
      }
      return row;
    }));
  }
  std::vector<CompareRow> rows;
  for (auto& f : pending) rows.push_back(f.get());
  std::stable_sort(rows.begin(), rows.end(),
                   [](const CompareRow& a, const CompareRow& b) { return a.final_error < b.final_error; });
  return rows;
}

void write_compare_csv(std::ostream& out, std::span<const CompareRow> rows) {
  out << "scheme,overlap,p,eps_T,transition_norm,exchange\n";
  for (const auto& r : rows) {
    out << r.scheme << ',' << r.overlap << ',' << r.groups << ',' << fmt17(r.final_error) << ','
        << (r.transition_norm ? fmt17(*r.transition_norm) : "") << ',' << r.exchange << '\n';
  }
}

std::vector<StabilityRow> stability_table(const ExperimentConfig& base, std::span<const SchemeKind> schemes,
                                          std::span<const double> sigmas, std::span<const double> taus) {
  std::vector<StabilityRow> rows;
  for (SchemeKind kind : schemes) {
    ExperimentConfig c = base;
    c.scheme = kind;
    const Experiment e(c);
    if (e.grid().interior_count() > kDenseLimit) {
      throw ConfigError("stability table needs a grid with at most " + std::to_string(kDenseLimit) + " unknowns");
    }
    for (double sigma : sigmas) {
      for (double tau : taus) rows.push_back({kind, sigma, tau, e.transition_norm(tau, sigma)});
    }
  }
  return rows;
}

void write_stability_csv(std::ostream& out, std::span<const StabilityRow> rows) {
  out << "scheme,sigma,tau,norm\n";
  for (const auto& r : rows) {
    out << to_string(r.scheme) << ',' << fmt17(r.sigma) << ',' << fmt17(r.tau) << ',' << fmt17(r.norm) << '\n';
  }
}

}  // namespace ddsplit
