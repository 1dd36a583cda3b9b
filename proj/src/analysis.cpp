#include "ddsplit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include <Eigen/Dense>

#include "ddsplit/errors.hpp"
#include "format.hpp"

namespace ddsplit {

DenseMatrix materialize(std::size_t n, const LinearMap& map) {
  DenseMatrix m{n, std::vector<double>(n * n, 0.0)};
  std::vector<double> unit(n, 0.0), column(n);
  for (std::size_t j = 0; j < n; ++j) {
    unit[j] = 1.0;
    map(unit, column);
    unit[j] = 0.0;
    for (std::size_t i = 0; i < n; ++i) m.data[i * n + j] = column[i];
  }
  return m;
}

namespace {

std::vector<double> random_unit(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> v(n);
  double s = 0.0;
  for (double& x : v) {
    x = normal(rng);
    s += x * x;
  }
  s = std::sqrt(s);
  for (double& x : v) x /= s;
  return v;
}

// Largest eigenvalue of a symmetric positive semidefinite map.
double top_eigenvalue(std::size_t n, const LinearMap& apply, const EigenIteration& cfg, const char* what) {
  if (n == 0) return 0.0;
  const int limit = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(std::max(cfg.max_iterations, 1)), n));
  std::vector<std::vector<double>> basis;
  std::vector<double> alpha, beta;
  basis.push_back(random_unit(n, cfg.seed));
  std::vector<double> w(n);
  double theta = 0.0, ritz_residual = 0.0;
  for (int j = 0; j < limit; ++j) {
    const std::vector<double>& v = basis.back();
    apply(v, w);
    double a = 0.0;
    for (std::size_t k = 0; k < n; ++k) a += v[k] * w[k];
    alpha.push_back(a);
    // full reorthogonalization, twice
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : basis) {
        double c = 0.0;
        for (std::size_t k = 0; k < n; ++k) c += q[k] * w[k];
        for (std::size_t k = 0; k < n; ++k) w[k] -= c * q[k];
      }
    }
    double b = 0.0;
    for (double x : w) b += x * x;
    b = std::sqrt(b);

    const auto m = static_cast<Eigen::Index>(alpha.size());
    Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), m);
    Eigen::VectorXd sub = m > 1 ? Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(beta.data(), m - 1))
                                : Eigen::VectorXd(0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (tri.info() != Eigen::Success) throw NumericalError(std::string(what) + ": tridiagonal eigensolve failed", 0.0);
    theta = tri.eigenvalues()(m - 1);
    ritz_residual = b * std::abs(tri.eigenvectors()(m - 1, m - 1));
    if (theta <= 0.0 && b == 0.0) return 0.0;
    if (ritz_residual <= cfg.tolerance * std::abs(theta) || j + 1 == static_cast<int>(n) || b == 0.0) return theta;

    beta.push_back(b);
    for (double& x : w) x /= b;
    basis.push_back(w);
  }
  throw NumericalError(std::string(what) + ": Lanczos iteration did not converge in " + std::to_string(limit) +
                           " iterations (Ritz residual " + std::to_string(ritz_residual) + ")",
                       ritz_residual);
}

}  // namespace

double spectral_norm(const DenseMatrix& m, const EigenIteration& cfg) {
  const std::size_t n = m.n;
  std::vector<double> tmp(n);
  const LinearMap gram = [&](std::span<const double> x, std::span<double> out) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += m.data[i * n + j] * x[j];
      tmp[i] = s;
    }
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) out[j] += m.data[i * n + j] * tmp[i];
    }
  };
  return std::sqrt(std::max(0.0, top_eigenvalue(n, gram, cfg, "spectral norm")));
}

std::size_t transition_dimension(const SchemeConfig& scheme, const SplitProblem& problem) {
  return problem.whole.dimension() * state_components(scheme.kind, problem.parts.size());
}

LinearMap transition_map(const SchemeConfig& scheme, const SplitProblem& problem, const SolverConfig& solver) {
  scheme.validate(problem.parts.size());
  const Grid grid = problem.whole.grid();
  const std::size_t n = grid.interior_count();
  const std::size_t comps = state_components(scheme.kind, problem.parts.size());
  return [scheme, &problem, solver, grid, n, comps](std::span<const double> x, std::span<double> out) {
    std::vector<GridFunction> fields;
    for (std::size_t a = 0; a < comps; ++a) {
      fields.emplace_back(grid, std::vector<double>(x.begin() + static_cast<std::ptrdiff_t>(a * n),
                                                    x.begin() + static_cast<std::ptrdiff_t>((a + 1) * n)));
    }
    const SchemeState next = advance(SchemeState(0, std::move(fields)), scheme, problem, GridFunction(grid), solver);
    for (std::size_t a = 0; a < comps; ++a) {
      std::copy(next.component(a).values().begin(), next.component(a).values().end(),
                out.begin() + static_cast<std::ptrdiff_t>(a * n));
    }
  };
}

double transition_norm(const SchemeConfig& scheme, const SplitProblem& problem, const SolverConfig& solver,
                       const EigenIteration& cfg) {
  if (problem.whole.dimension() > kDenseLimit) {
    throw ConfigError("dense transition norm is limited to " + std::to_string(kDenseLimit) + " unknowns, grid has " +
                      std::to_string(problem.whole.dimension()));
  }
  const DenseMatrix s = materialize(transition_dimension(scheme, problem), transition_map(scheme, problem, solver));
  return spectral_norm(s, cfg);
}

double max_eigenvalue(const LinearGridOperator& a, const EigenIteration& cfg) {
  if (a.symmetry() != Symmetry::Symmetric) throw ConfigError("eigenvalue estimate needs a symmetric operator");
  return top_eigenvalue(a.dimension(), [&](auto x, auto out) { a.apply(x, out); }, cfg, "max eigenvalue");
}

double min_eigenvalue(const LinearGridOperator& a, const EigenIteration& cfg) {
  if (a.symmetry() != Symmetry::Symmetric) throw ConfigError("eigenvalue estimate needs a symmetric operator");
  const ShiftedOperator pure(a, 1.0, 0.0);
  SolverConfig inner;
  inner.tolerance = 1e-13;
  const double mu = top_eigenvalue(
      a.dimension(), [&](auto x, auto out) { solve(pure, x, out, inner); }, cfg, "min eigenvalue");
  if (!(mu > 0.0)) throw NumericalError("inverse iteration produced a nonpositive estimate", mu);
  return 1.0 / mu;
}

double error_norm(const GridFunction& y, double t, int n1, int n2) {
  return norm(y - sample_exact(y.grid(), t, n1, n2));
}

void write_error_csv(std::ostream& out, const ErrorReport& report) {
  out << "step,t,eps\n";
  for (std::size_t n = 0; n < report.errors.size(); ++n) {
    out << n << ',' << fmt17(report.times[n]) << ',' << fmt17(report.errors[n]) << '\n';
  }
}

double convergence_order(std::span<const double> steps, std::span<const double> errors) {
  if (steps.size() != errors.size()) throw ConfigError("need one error per step size");
  if (steps.size() < 3) throw ConfigError("convergence order needs at least three refinements");
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    if (!(errors[k] > 0.0) || !(steps[k] > 0.0)) throw ConfigError("errors and steps must be positive");
    lx.push_back(std::log(steps[k]));
    ly.push_back(std::log(errors[k]));
  }
  const double m = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    mx += lx[k] / m;
    my += ly[k] / m;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sxy += (lx[k] - mx) * (ly[k] - my);
    sxx += (lx[k] - mx) * (lx[k] - mx);
  }
  if (sxx == 0.0) throw ConfigError("step sizes must not all be equal");
  return sxy / sxx;
}

LocalizationStats localization_stats(const GridFunction& error, const PartitionOfUnity& pou, int margin) {
  const Grid& grid = pou.grid();
  if (!(error.grid() == grid)) throw ConfigError("error field and partition live on different grids");
  if (margin < 0) throw ConfigError("band margin must be nonnegative");
  const Axis axis = pou.spec().axis;
  const int cells = grid.cells(axis);

  // Overlap positions along the axis, then dilate.
  std::vector<char> overlap(static_cast<std::size_t>(cells + 1), 0);
  for (int a = 0; a < pou.group_count(); ++a) {
    const auto chi = pou.node_weights(a);
    for (std::size_t k = 0; k < chi.size(); ++k) {
      if (chi[k] > 0.0 && chi[k] < 1.0) {
        const auto [i1, i2] = grid.node(k);
        overlap[static_cast<std::size_t>(axis == Axis::X1 ? i1 : i2)] = 1;
      }
    }
  }
  std::vector<char> dilated(overlap.size(), 0);
  for (int i = 0; i <= cells; ++i) {
    if (!overlap[static_cast<std::size_t>(i)]) continue;
    for (int j = std::max(0, i - margin); j <= std::min(cells, i + margin); ++j) dilated[static_cast<std::size_t>(j)] = 1;
  }

  LocalizationStats stats;
  stats.band.assign(grid.interior_count(), 0);
  double best = -1.0;
  for (std::size_t k = 0; k < error.size(); ++k) {
    const auto [i1, i2] = grid.node(k);
    const bool inside = dilated[static_cast<std::size_t>(axis == Axis::X1 ? i1 : i2)] != 0;
    stats.band[k] = inside;
    const double e = std::abs(error[k]);
    if (inside) {
      stats.max_inside = std::max(stats.max_inside, e);
    } else {
      stats.max_outside = std::max(stats.max_outside, e);
    }
    if (e > best) {
      best = e;
      stats.argmax = k;
      stats.argmax_inside = inside;
    }
  }
  return stats;
}

}  // namespace ddsplit
