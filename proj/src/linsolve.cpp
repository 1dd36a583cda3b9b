#include "ddsplit/linsolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "ddsplit/errors.hpp"

namespace ddsplit {

void SolverConfig::validate() const {
  if (!(tolerance > 0.0 && tolerance < 1.0)) throw ConfigError("solver tolerance must lie in (0, 1)");
  if (max_iterations < 0) throw ConfigError("solver iteration limit must be positive");
}

int SolverConfig::iteration_limit(std::size_t dimension) const {
  return max_iterations > 0 ? max_iterations : static_cast<int>(10 * std::max<std::size_t>(dimension, 1));
}

ShiftedOperator::ShiftedOperator(const LinearGridOperator& op, double shift, double identity)
    : op_(&op), shift_(shift), identity_(identity) {
  if (!(shift >= 0.0) || !std::isfinite(shift)) throw ConfigError("shift must be finite and nonnegative");
  if (!(identity >= 0.0) || !std::isfinite(identity)) throw ConfigError("identity coefficient must be nonnegative");
}

void ShiftedOperator::apply(std::span<const double> x, std::span<double> out) const {
  if (shift_ == 0.0) {
    for (std::size_t k = 0; k < x.size(); ++k) out[k] = identity_ * x[k];
    return;
  }
  op_->apply(x, out);
  for (std::size_t k = 0; k < x.size(); ++k) out[k] = identity_ * x[k] + shift_ * out[k];
}

namespace {

using Vec = std::vector<double>;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

// r = b - M x, returns ||r||
double residual(const ShiftedOperator& m, std::span<const double> b, std::span<const double> x, Vec& r) {
  m.apply(x, r);
  for (std::size_t k = 0; k < r.size(); ++k) r[k] = b[k] - r[k];
  return norm2(r);
}

[[noreturn]] void fail(const char* method, double relative_residual, int iterations) {
  throw NumericalError(std::string(method) + " did not converge in " + std::to_string(iterations) +
                           " iterations (relative residual " + std::to_string(relative_residual) + ")",
                       relative_residual);
}

void conjugate_gradient(const ShiftedOperator& m, std::span<const double> b, std::span<double> x,
                        const SolverConfig& cfg) {
  const std::size_t n = b.size();
  const double bnorm = norm2(b);
  std::fill(x.begin(), x.end(), 0.0);
  if (bnorm == 0.0) return;
  const double target = cfg.tolerance * bnorm;
  const int limit = cfg.iteration_limit(n);

  Vec r(n), p(n), mp(n);
  int iterations = 0;
  double rnorm = residual(m, b, x, r);
  // The recurrence residual drifts from the true one; accept only after the
  // true residual confirms convergence, otherwise restart from the current x.
  while (true) {
    if (rnorm <= target) return;
    p = r;
    double rr = rnorm * rnorm;
    while (iterations < limit) {
      ++iterations;
      m.apply(p, mp);
      const double pmp = dot(p, mp);
      if (!(pmp > 0.0)) break;
      const double alpha = rr / pmp;
      for (std::size_t k = 0; k < n; ++k) {
        x[k] += alpha * p[k];
        r[k] -= alpha * mp[k];
      }
      const double rr_next = dot(r, r);
      if (std::sqrt(rr_next) <= target) break;
      const double beta = rr_next / rr;
      rr = rr_next;
      for (std::size_t k = 0; k < n; ++k) p[k] = r[k] + beta * p[k];
    }
    const double true_norm = residual(m, b, x, r);
    if (true_norm <= target) return;
    if (iterations >= limit || true_norm >= rnorm) fail("CG", true_norm / bnorm, iterations);
    rnorm = true_norm;
  }
}

// Returns true on convergence, false on breakdown; throws when out of iterations.
bool bicgstab_from(const ShiftedOperator& m, std::span<const double> b, std::span<double> x, double target,
                   double bnorm, int limit, int& iterations) {
  const std::size_t n = b.size();
  Vec r(n), shadow(n), p(n, 0.0), v(n, 0.0), s(n), t(n);
  double rnorm = residual(m, b, x, r);
  while (true) {
    if (rnorm <= target) return true;
    shadow = r;
    double rho = 1.0, alpha = 1.0, omega = 1.0;
    std::fill(p.begin(), p.end(), 0.0);
    std::fill(v.begin(), v.end(), 0.0);
    const double tiny = std::numeric_limits<double>::epsilon() * std::numeric_limits<double>::epsilon();
    while (iterations < limit) {
      ++iterations;
      const double rho_next = dot(shadow, r);
      if (std::abs(rho_next) <= tiny * dot(shadow, shadow)) return false;
      const double beta = (rho_next / rho) * (alpha / omega);
      rho = rho_next;
      for (std::size_t k = 0; k < n; ++k) p[k] = r[k] + beta * (p[k] - omega * v[k]);
      m.apply(p, v);
      const double sv = dot(shadow, v);
      if (sv == 0.0) return false;
      alpha = rho / sv;
      for (std::size_t k = 0; k < n; ++k) s[k] = r[k] - alpha * v[k];
      if (norm2(s) <= target) {
        for (std::size_t k = 0; k < n; ++k) x[k] += alpha * p[k];
        break;
      }
      m.apply(s, t);
      const double tt = dot(t, t);
      if (tt == 0.0) return false;
      omega = dot(t, s) / tt;
      if (omega == 0.0) return false;
      for (std::size_t k = 0; k < n; ++k) {
        x[k] += alpha * p[k] + omega * s[k];
        r[k] = s[k] - omega * t[k];
      }
      if (norm2(r) <= target) break;
    }
    const double true_norm = residual(m, b, x, r);
    if (true_norm <= target) return true;
    if (iterations >= limit || true_norm >= rnorm) fail("BiCGStab", true_norm / bnorm, iterations);
    rnorm = true_norm;
  }
}

void bicgstab(const ShiftedOperator& m, std::span<const double> b, std::span<double> x, const SolverConfig& cfg) {
  const std::size_t n = b.size();
  const double bnorm = norm2(b);
  std::fill(x.begin(), x.end(), 0.0);
  if (bnorm == 0.0) return;
  const double target = cfg.tolerance * bnorm;
  const int limit = cfg.iteration_limit(n);
  int iterations = 0;
  if (bicgstab_from(m, b, x, target, bnorm, limit, iterations)) return;

  // Deterministic perturbation of the current iterate, then one more attempt.
  const double scale = 1e-3 * bnorm / std::sqrt(static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k) x[k] += scale * std::sin(1.0 + static_cast<double>(k));
  if (bicgstab_from(m, b, x, target, bnorm, limit, iterations)) return;
  Vec r(n);
  fail("BiCGStab (after restart)", residual(m, b, x, r) / bnorm, iterations);
}

// CGLS: conjugate gradients on M^T M x = M^T b, used for shifts of skew
// operators where M^T M = E + shift^2 C^T C is symmetric positive definite.
void normal_equations_cg(const ShiftedOperator& m, std::span<const double> b, std::span<double> x,
                         const SolverConfig& cfg) {
  const std::size_t n = b.size();
  const double bnorm = norm2(b);
  std::fill(x.begin(), x.end(), 0.0);
  if (bnorm == 0.0) return;
  const double target = cfg.tolerance * bnorm;
  const int limit = cfg.iteration_limit(n);
  const SparseMatrix& a = m.base().matrix();
  auto apply_transpose = [&](std::span<const double> y, std::span<double> out) {
    a.multiply_transpose(y, out);
    for (std::size_t k = 0; k < n; ++k) out[k] = m.identity() * y[k] + m.shift() * out[k];
  };

  Vec r(n), s(n), p(n), q(n);
  int iterations = 0;
  double rnorm = residual(m, b, x, r);
  while (true) {
    if (rnorm <= target) return;
    apply_transpose(r, s);
    p = s;
    double gamma = dot(s, s);
    while (iterations < limit) {
      ++iterations;
      m.apply(p, q);
      const double qq = dot(q, q);
      if (!(qq > 0.0)) break;
      const double alpha = gamma / qq;
      for (std::size_t k = 0; k < n; ++k) {
        x[k] += alpha * p[k];
        r[k] -= alpha * q[k];
      }
      if (norm2(r) <= target) break;
      apply_transpose(r, s);
      const double gamma_next = dot(s, s);
      const double beta = gamma_next / gamma;
      gamma = gamma_next;
      for (std::size_t k = 0; k < n; ++k) p[k] = s[k] + beta * p[k];
    }
    const double true_norm = residual(m, b, x, r);
    if (true_norm <= target) return;
    if (iterations >= limit || true_norm >= rnorm) fail("CGLS", true_norm / bnorm, iterations);
    rnorm = true_norm;
  }
}

// E scaled by the identity coefficient, no iteration needed.
bool trivial(const ShiftedOperator& m, std::span<const double> b, std::span<double> x) {
  if (m.shift() != 0.0) return false;
  if (m.identity() == 0.0) throw ConfigError("shifted operator is identically zero");
  for (std::size_t k = 0; k < b.size(); ++k) x[k] = b[k] / m.identity();
  return true;
}

void check_operands(const ShiftedOperator& m, const GridFunction& b) {
  if (!(m.base().grid() == b.grid())) throw ConfigError("right-hand side lives on a different grid");
}

}  // namespace

GridFunction solve_spd(const ShiftedOperator& m, const GridFunction& b, const SolverConfig& cfg) {
  cfg.validate();
  check_operands(m, b);
  GridFunction x(b.grid());
  if (!trivial(m, b.values(), x.values())) conjugate_gradient(m, b.values(), x.values(), cfg);
  return x;
}

GridFunction solve_general(const ShiftedOperator& m, const GridFunction& b, const SolverConfig& cfg) {
  cfg.validate();
  check_operands(m, b);
  GridFunction x(b.grid());
  if (trivial(m, b.values(), x.values())) return x;
  if (m.base().symmetry() == Symmetry::Skew) {
    normal_equations_cg(m, b.values(), x.values(), cfg);
  } else {
    bicgstab(m, b.values(), x.values(), cfg);
  }
  return x;
}

void solve(const ShiftedOperator& m, std::span<const double> b, std::span<double> x, const SolverConfig& cfg) {
  cfg.validate();
  if (b.size() != m.dimension() || x.size() != m.dimension()) throw ConfigError("solve operand size mismatch");
  if (trivial(m, b, x)) return;
  const bool use_cg = cfg.method == KrylovMethod::CG || (cfg.method == KrylovMethod::Auto && m.symmetric());
  if (use_cg) {
    conjugate_gradient(m, b, x, cfg);
  } else if (cfg.method == KrylovMethod::Auto && m.base().symmetry() == Symmetry::Skew) {
    normal_equations_cg(m, b, x, cfg);
  } else {
    bicgstab(m, b, x, cfg);
  }
}

}  // namespace ddsplit
