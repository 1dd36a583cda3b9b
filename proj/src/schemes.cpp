#include "ddsplit/schemes.hpp"

#include <cmath>

#include "ddsplit/errors.hpp"

namespace ddsplit {

const char* to_string(SchemeKind k) {
  switch (k) {
    case SchemeKind::Explicit: return "explicit";
    case SchemeKind::Weighted: return "weighted";
    case SchemeKind::RegAdditive: return "regadd";
    case SchemeKind::RegMultiplicative: return "regmult";
    case SchemeKind::VectorAdditive: return "vector";
  }
  return "?";
}

SchemeKind parse_scheme(const std::string& name) {
  for (SchemeKind k : {SchemeKind::Explicit, SchemeKind::Weighted, SchemeKind::RegAdditive,
                       SchemeKind::RegMultiplicative, SchemeKind::VectorAdditive}) {
    if (name == to_string(k)) return k;
  }
  throw ConfigError("unknown scheme '" + name + "' (expected explicit, weighted, regadd, regmult or vector)");
}

bool uses_decomposition(SchemeKind k) {
  return k == SchemeKind::RegAdditive || k == SchemeKind::RegMultiplicative || k == SchemeKind::VectorAdditive;
}

void SchemeConfig::validate(std::size_t parts) const {
  if (steps < 0) throw ConfigError("number of steps must be nonnegative");
  if (steps > 0 && !(tau > 0.0 && std::isfinite(tau))) throw ConfigError("time step must be positive");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ConfigError("weight sigma must be nonnegative");
  if (uses_decomposition(kind) && parts == 0) throw ConfigError("scheme needs at least one operator part");
  if (!weights.empty()) {
    if (weights.size() != parts) throw ConfigError("need one recombination weight per part");
    for (double c : weights) {
      if (!(c >= 0.0)) throw ConfigError("recombination weights must be nonnegative");
    }
  }
}

double SchemeConfig::source_time(int n) const {
  double theta = sigma;
  if (kind == SchemeKind::Explicit) theta = 0.0;
  if (kind == SchemeKind::VectorAdditive) theta = 1.0;
  return (n + theta) * tau;
}

SchemeState::SchemeState(int step, std::vector<GridFunction> components)
    : step_(step), fields_(std::move(components)) {
  if (fields_.empty()) throw ConfigError("scheme state needs at least one component");
  for (const auto& f : fields_) {
    if (!(f.grid() == fields_.front().grid())) throw ConfigError("state components live on different grids");
  }
}

SchemeState SchemeState::initial(const GridFunction& u0, std::size_t components) {
  return SchemeState(0, std::vector<GridFunction>(components, u0));
}

GridFunction SchemeState::scalar(std::span<const double> weights) const {
  if (fields_.size() == 1 && weights.empty()) return fields_.front();
  if (!weights.empty() && weights.size() != fields_.size()) {
    throw ConfigError("need one recombination weight per component");
  }
  GridFunction out(fields_.front().grid());
  const double uniform = 1.0 / static_cast<double>(fields_.size());
  for (std::size_t a = 0; a < fields_.size(); ++a) {
    const double c = weights.empty() ? uniform : weights[a];
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += c * fields_[a][k];
  }
  return out;
}

GridFunction SourceTerm::at(const Grid& grid, double t) const {
  if (!f_) return GridFunction(grid);
  GridFunction phi = f_(t);
  if (!(phi.grid() == grid)) throw ConfigError("source term returned a field on a different grid");
  return phi;
}

namespace {

const GridFunction& scalar_field(const SchemeState& state) {
  if (state.component_count() != 1) throw ConfigError("scheme expects a scalar state");
  return state.component(0);
}

void check_parts(std::span<const LinearGridOperator> parts, const GridFunction& y) {
  if (parts.empty()) throw ConfigError("at least one operator part is required");
  for (const auto& a : parts) {
    if (!(a.grid() == y.grid())) throw ConfigError("operator part lives on a different grid");
  }
}

// x = (E + shift A)^{-1} b
GridFunction solve_shifted(const LinearGridOperator& a, double shift, const GridFunction& b,
                           const SolverConfig& solver) {
  GridFunction x(b.grid());
  solve(ShiftedOperator(a, shift), b.values(), x.values(), solver);
  return x;
}

}  // namespace

SchemeState step_explicit(const SchemeState& state, const LinearGridOperator& a, double tau,
                          const GridFunction& phi) {
  const GridFunction& y = scalar_field(state);
  const GridFunction ay = a.apply(y);
  GridFunction next(y);
  for (std::size_t k = 0; k < next.size(); ++k) next[k] += tau * (phi[k] - ay[k]);
  return SchemeState(state.step() + 1, {std::move(next)});
}

SchemeState step_weighted(const SchemeState& state, const LinearGridOperator& a, double sigma, double tau,
                          const GridFunction& phi, const SolverConfig& solver) {
  const GridFunction& y = scalar_field(state);
  const GridFunction ay = a.apply(y);
  GridFunction rhs(y);
  for (std::size_t k = 0; k < rhs.size(); ++k) rhs[k] += tau * (phi[k] - (1.0 - sigma) * ay[k]);
  return SchemeState(state.step() + 1, {solve_shifted(a, sigma * tau, rhs, solver)});
}

SchemeState step_reg_additive(const SchemeState& state, std::span<const LinearGridOperator> parts, double sigma,
                              double tau, const GridFunction& phi, const SolverConfig& solver) {
  const GridFunction& y = scalar_field(state);
  check_parts(parts, y);
  const double p = static_cast<double>(parts.size());
  // Each part gets phi / p, so y_a = y - p tau w_a + tau phi and the mean of
  // the y_a is accumulated directly.
  GridFunction next(y.grid());
  for (const auto& part : parts) {
    const GridFunction w = solve_shifted(part, sigma * p * tau, part.apply(y), solver);
    for (std::size_t k = 0; k < next.size(); ++k) next[k] += y[k] - p * tau * w[k] + tau * phi[k];
  }
  for (std::size_t k = 0; k < next.size(); ++k) next[k] /= p;
  return SchemeState(state.step() + 1, {std::move(next)});
}

SchemeState step_reg_multiplicative(const SchemeState& state, std::span<const LinearGridOperator> parts,
                                    double sigma, double tau, const GridFunction& phi,
                                    const SolverConfig& solver) {
  GridFunction y = scalar_field(state);
  check_parts(parts, y);
  for (std::size_t a = 0; a < parts.size(); ++a) {
    const GridFunction w = solve_shifted(parts[a], sigma * tau, parts[a].apply(y), solver);
    const bool last = a + 1 == parts.size();
    for (std::size_t k = 0; k < y.size(); ++k) y[k] += -tau * w[k] + (last ? tau * phi[k] : 0.0);
  }
  return SchemeState(state.step() + 1, {std::move(y)});
}

SchemeState step_vector(const SchemeState& state, std::span<const LinearGridOperator> parts, double tau,
                        const GridFunction& phi, const SolverConfig& solver) {
  if (state.component_count() != parts.size()) {
    throw ConfigError("vector scheme needs one state component per operator part");
  }
  check_parts(parts, state.component(0));
  const std::size_t p = parts.size();
  // Products A_b y_b at the newest available level; entry b is refreshed as
  // soon as component b is updated.
  std::vector<GridFunction> applied;
  applied.reserve(p);
  for (std::size_t b = 0; b < p; ++b) applied.push_back(parts[b].apply(state.component(b)));

  std::vector<GridFunction> next;
  next.reserve(p);
  for (std::size_t a = 0; a < p; ++a) {
    GridFunction rhs(state.component(a));
    for (std::size_t k = 0; k < rhs.size(); ++k) {
      double coupling = 0.0;
      for (std::size_t b = 0; b < p; ++b) {
        if (b != a) coupling += applied[b][k];
      }
      rhs[k] += tau * (phi[k] - coupling);
    }
    next.push_back(solve_shifted(parts[a], tau, rhs, solver));
    applied[a] = parts[a].apply(next.back());
  }
  return SchemeState(state.step() + 1, std::move(next));
}

SchemeState advance(const SchemeState& state, const SchemeConfig& scheme, const SplitProblem& problem,
                    const GridFunction& phi, const SolverConfig& solver) {
  switch (scheme.kind) {
    case SchemeKind::Explicit: return step_explicit(state, problem.whole, scheme.tau, phi);
    case SchemeKind::Weighted: return step_weighted(state, problem.whole, scheme.sigma, scheme.tau, phi, solver);
    case SchemeKind::RegAdditive:
      return step_reg_additive(state, problem.parts, scheme.sigma, scheme.tau, phi, solver);
    case SchemeKind::RegMultiplicative:
      return step_reg_multiplicative(state, problem.parts, scheme.sigma, scheme.tau, phi, solver);
    case SchemeKind::VectorAdditive: return step_vector(state, problem.parts, scheme.tau, phi, solver);
  }
  throw ConfigError("unknown scheme");
}

std::size_t state_components(SchemeKind kind, std::size_t parts) {
  return kind == SchemeKind::VectorAdditive ? parts : 1;
}

std::vector<SchemeState> run(const GridFunction& u0, const SchemeConfig& scheme, const SplitProblem& problem,
                             const SourceTerm& source, const SolverConfig& solver, const StepObserver& observer) {
  scheme.validate(problem.parts.size());
  if (!(problem.whole.grid() == u0.grid())) throw ConfigError("initial data lives on a different grid");
  std::vector<SchemeState> trajectory;
  trajectory.reserve(static_cast<std::size_t>(scheme.steps) + 1);
  trajectory.push_back(SchemeState::initial(u0, state_components(scheme.kind, problem.parts.size())));
  if (observer) observer(trajectory.back());
  for (int n = 0; n < scheme.steps; ++n) {
    const GridFunction phi = source.at(u0.grid(), scheme.source_time(n));
    trajectory.push_back(advance(trajectory.back(), scheme, problem, phi, solver));
    if (observer) observer(trajectory.back());
  }
  return trajectory;
}

}  // namespace ddsplit
