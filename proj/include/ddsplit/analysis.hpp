#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ddsplit/decomposition.hpp"
#include "ddsplit/grid.hpp"
#include "ddsplit/linsolve.hpp"
#include "ddsplit/schemes.hpp"

namespace ddsplit {

// Grids above this many unknowns are rejected by the dense norm path.
inline constexpr std::size_t kDenseLimit = 1024;

using LinearMap = std::function<void(std::span<const double>, std::span<double>)>;

// Row-major square matrix.
struct DenseMatrix {
  std::size_t n = 0;
  std::vector<double> data;

  double operator()(std::size_t i, std::size_t j) const { return data[i * n + j]; }
};

// Column j is map(e_j).
DenseMatrix materialize(std::size_t n, const LinearMap& map);

// Lanczos on the power sequence v, Bv, B^2 v, ... of a symmetric map B, with
// full reorthogonalization. Stops once the Ritz residual of the top pair is
// below tolerance * eigenvalue.
struct EigenIteration {
  double tolerance = 1e-8;
  int max_iterations = 10000;
  std::uint64_t seed = 12;
};

// Largest singular value, from the top eigenvalue of M^T M.
double spectral_norm(const DenseMatrix& m, const EigenIteration& cfg = {});

// One source-free step of the scheme as a map on the stacked state (p * n
// unknowns for the vector scheme, n otherwise).
LinearMap transition_map(const SchemeConfig& scheme, const SplitProblem& problem, const SolverConfig& solver = {});
std::size_t transition_dimension(const SchemeConfig& scheme, const SplitProblem& problem);

// ||S~|| of one source-free step; grids are limited to kDenseLimit unknowns.
double transition_norm(const SchemeConfig& scheme, const SplitProblem& problem, const SolverConfig& solver = {},
                       const EigenIteration& cfg = {});

// Extreme eigenvalues of a symmetric nonnegative operator: Lanczos on A
// for the top, Lanczos on A^{-1} (CG inner solves) for the bottom.
double max_eigenvalue(const LinearGridOperator& a, const EigenIteration& cfg = {});
double min_eigenvalue(const LinearGridOperator& a, const EigenIteration& cfg = {});

// || y - u(., t) || against the exact mode solution on the unit square.
double error_norm(const GridFunction& y, double t, int n1, int n2);

struct ErrorReport {
  std::string scheme;
  std::string grid;
  std::string overlap;
  double sigma = 0.0;
  double tau = 0.0;
  std::vector<double> times;
  std::vector<double> errors;  // eps(t^n), n = 0..N
  GridFunction local_error;    // y^N - u(., T)

  double final_error() const { return errors.back(); }
};

// CSV `step,t,eps`.
void write_error_csv(std::ostream& out, const ErrorReport& report);

// Least-squares slope of log(error) against log(step).
double convergence_order(std::span<const double> steps, std::span<const double> errors);

struct LocalizationStats {
  double max_inside = 0.0;
  double max_outside = 0.0;
  std::size_t argmax = 0;  // node slot of max |error|
  bool argmax_inside = false;
  std::vector<char> band;  // per node: inside the dilated overlap band
};

// Band: nodes where some chi_a lies strictly in (0, 1), dilated by `margin`
// cells along the decomposition axis.
LocalizationStats localization_stats(const GridFunction& error, const PartitionOfUnity& pou, int margin = 2);

}  // namespace ddsplit
