#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ddsplit/grid.hpp"
#include "ddsplit/linsolve.hpp"
#include "ddsplit/operators.hpp"

namespace ddsplit {

enum class SchemeKind { Explicit, Weighted, RegAdditive, RegMultiplicative, VectorAdditive };

const char* to_string(SchemeKind k);
SchemeKind parse_scheme(const std::string& name);
bool uses_decomposition(SchemeKind k);

struct SchemeConfig {
  SchemeKind kind = SchemeKind::Weighted;
  double sigma = 1.0;
  double tau = 0.0;
  int steps = 0;
  // Recombination weights c_a >= 0 for the vector scheme; empty means 1/p.
  std::vector<double> weights;

  void validate(std::size_t parts) const;
  // Time at which the source is evaluated for the step n -> n+1.
  double source_time(int n) const;
};

// y^n for scalar schemes, or the p components y_a^n of the vector scheme.
class SchemeState {
public:
  SchemeState(int step, std::vector<GridFunction> components);
  static SchemeState initial(const GridFunction& u0, std::size_t components = 1);

  int step() const { return step_; }
  std::size_t component_count() const { return fields_.size(); }
  const GridFunction& component(std::size_t a) const { return fields_.at(a); }
  const std::vector<GridFunction>& components() const { return fields_; }

  // The single field, or sum_a c_a y_a (c_a = 1/p when weights is empty).
  GridFunction scalar(std::span<const double> weights = {}) const;

private:
  int step_;
  std::vector<GridFunction> fields_;
};

// Right-hand side f(t). A default-constructed source is identically zero.
class SourceTerm {
public:
  SourceTerm() = default;
  explicit SourceTerm(std::function<GridFunction(double)> f) : f_(std::move(f)) {}

  bool is_zero() const { return !f_; }
  GridFunction at(const Grid& grid, double t) const;

private:
  std::function<GridFunction(double)> f_;
};

// The problem operator A and its decomposition A = sum_a A_a.
struct SplitProblem {
  LinearGridOperator whole;
  std::vector<LinearGridOperator> parts;
};

// y^{n+1} = y^n - tau A y^n + tau phi
SchemeState step_explicit(const SchemeState& state, const LinearGridOperator& a, double tau,
                          const GridFunction& phi);

// (E + sigma tau A) y^{n+1} = (E - (1 - sigma) tau A) y^n + tau phi
SchemeState step_weighted(const SchemeState& state, const LinearGridOperator& a, double sigma, double tau,
                          const GridFunction& phi, const SolverConfig& solver = {});

// Regularized additive scheme: y^{n+1} is the mean of the p independent
// updates y_a = y^n - p tau (E + sigma p tau A_a)^{-1} A_a y^n + tau phi.
SchemeState step_reg_additive(const SchemeState& state, std::span<const LinearGridOperator> parts, double sigma,
                              double tau, const GridFunction& phi, const SolverConfig& solver = {});

// Regularized multiplicative scheme: sequential substeps
// y <- y - tau (E + sigma tau A_a)^{-1} A_a y, with tau phi added after the last.
SchemeState step_reg_multiplicative(const SchemeState& state, std::span<const LinearGridOperator> parts,
                                    double sigma, double tau, const GridFunction& phi,
                                    const SolverConfig& solver = {});

// Vector additive scheme, components updated in order a = 1..p:
// (E + tau A_a) y_a^{n+1} = y_a^n + tau phi - tau sum_{b<a} A_b y_b^{n+1} - tau sum_{b>a} A_b y_b^n
SchemeState step_vector(const SchemeState& state, std::span<const LinearGridOperator> parts, double tau,
                        const GridFunction& phi, const SolverConfig& solver = {});

// One step of the configured scheme (phi evaluated by the caller).
SchemeState advance(const SchemeState& state, const SchemeConfig& scheme, const SplitProblem& problem,
                    const GridFunction& phi, const SolverConfig& solver = {});

// Number of components a scheme carries over a problem with p parts.
std::size_t state_components(SchemeKind kind, std::size_t parts);

using StepObserver = std::function<void(const SchemeState&)>;

// Applies scheme.steps steps from u0 (copied into every component for the
// vector scheme). The observer sees every state, the initial one included.
std::vector<SchemeState> run(const GridFunction& u0, const SchemeConfig& scheme, const SplitProblem& problem,
                             const SourceTerm& source = {}, const SolverConfig& solver = {},
                             const StepObserver& observer = {});

}  // namespace ddsplit
