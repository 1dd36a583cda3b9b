#pragma once

#include <span>

#include "ddsplit/grid.hpp"
#include "ddsplit/operators.hpp"

namespace ddsplit {

enum class KrylovMethod { Auto, CG, BiCGStab };

struct SolverConfig {
  double tolerance = 1e-12;  // on ||M x - b|| / ||b||
  int max_iterations = 0;    // 0 means 10 * dimension
  KrylovMethod method = KrylovMethod::Auto;

  void validate() const;
  int iteration_limit(std::size_t dimension) const;
};

// M = identity * E + shift * A. Never owns A.
class ShiftedOperator {
public:
  ShiftedOperator(const LinearGridOperator& op, double shift, double identity = 1.0);

  const LinearGridOperator& base() const { return *op_; }
  double shift() const { return shift_; }
  double identity() const { return identity_; }
  std::size_t dimension() const { return op_->dimension(); }
  // CG applies when A is symmetric or the shift vanishes.
  bool symmetric() const { return shift_ == 0.0 || op_->symmetry() == Symmetry::Symmetric; }

  void apply(std::span<const double> x, std::span<double> out) const;

private:
  const LinearGridOperator* op_;
  double shift_;
  double identity_;
};

// Conjugate gradients from a zero initial guess. M must be SPD.
GridFunction solve_spd(const ShiftedOperator& m, const GridFunction& b, const SolverConfig& cfg = {});

// BiCGStab from a zero initial guess; one restart from a perturbed guess on
// breakdown.
GridFunction solve_general(const ShiftedOperator& m, const GridFunction& b, const SolverConfig& cfg = {});

// Picks CG or BiCGStab from cfg.method, or from the operator's symmetry tag
// when cfg.method is Auto. Writes the solution into x.
void solve(const ShiftedOperator& m, std::span<const double> b, std::span<double> x, const SolverConfig& cfg = {});

}  // namespace ddsplit
