#include <cmath>
#include <numbers>
#include <random>

#include "dense_oracle.hpp"
#include "doctest.h"
#include "ddsplit/analysis.hpp"
#include "ddsplit/decomposition.hpp"
#include "ddsplit/errors.hpp"
#include "ddsplit/schemes.hpp"
#include "random_fields.hpp"

using namespace ddsplit;

namespace {

double mode_eigenvalue(const Grid& g, int n1, int n2) {
  const auto term = [](double h, int n) {
    const double s = std::sin(n * std::numbers::pi * h / 2.0);
    return 4.0 / (h * h) * s * s;
  };
  return term(g.h1(), n1) + term(g.h2(), n2);
}

SplitProblem model(const Grid& g, OverlapVariant v, int p, bool convection = false) {
  auto a = assemble_laplacian(g);
  auto c = LinearGridOperator::zero(g, Symmetry::Skew);
  if (convection) c = assemble_convection(g, NodalField::constant(g, 1.0), NodalField::constant(g, 0.5));
  const auto pou = p == 1 ? trivial_partition(g)
                          : build_partition(g, DecompositionSpec::equal_strips(g, Axis::X1, 4, p, v));
  auto parts = decompose(a, c, gradient_factorization(g), pou);
  return {a + c, std::move(parts)};
}

SchemeState one(const GridFunction& y) { return SchemeState::initial(y); }

GridFunction smooth_source(const Grid& g, double t) {
  return GridFunction::sample(g, [t](double x1, double x2) { return (1.0 + t) * x1 * (1.0 - x2) + std::cos(3 * x2); });
}

}  // namespace

TEST_SUITE("schemes") {

TEST_CASE("explicit step") {
  const Grid g = Grid::build(8, 8, 1.0, 1.0);
  const GridFunction y = sample_exact(g, 0.0, 2, 1);
  const GridFunction zero(g);
  const auto none = LinearGridOperator::zero(g);
  CHECK(max_abs(step_explicit(one(y), none, 0.1, zero).component(0) - y) == 0.0);

  const auto a = assemble_laplacian(g);
  const double tau = 1e-3, lambda = mode_eigenvalue(g, 2, 1);
  const GridFunction next = step_explicit(one(y), a, tau, zero).component(0);
  CHECK(max_abs(next - (1.0 - tau * lambda) * y) <= 1e-13);
}

TEST_CASE("explicit step is unstable beyond 2 / lambda_max") {
  const Grid g = Grid::build(8, 8, 1.0, 1.0);
  const auto a = assemble_laplacian(g);
  const double lmax = mode_eigenvalue(g, 7, 7);
  GridFunction y = sample_exact(g, 0.0, 7, 7);
  const double tau = 2.2 / lmax;
  for (int n = 0; n < 5; ++n) {
    const GridFunction next = step_explicit(one(y), a, tau, GridFunction(g)).component(0);
    CHECK(norm(next) > norm(y));
    y = next;
  }
}

TEST_CASE("weighted step") {
  const Grid single = Grid::build(2, 2, 1.0, 1.0);
  const LinearGridOperator two(single, SparseMatrix(1, 1, {{0, 0, 2.0}}), Symmetry::Symmetric);
  const GridFunction y0(single, {1.5});
  CHECK(step_weighted(one(y0), two, 1.0, 1.0, GridFunction(single)).component(0)[0] ==
        doctest::Approx(0.5).epsilon(1e-14));

  const Grid g = Grid::build(16, 16, 1.0, 1.0);
  const auto a = assemble_laplacian(g);
  const GridFunction y = sample_exact(g, 0.0, 2, 1);
  const double lambda = mode_eigenvalue(g, 2, 1);
  for (double sigma : {0.0, 0.5, 0.75, 1.0}) {
    for (double tau : {1e-4, 1e-2, 1.0}) {
      if (sigma == 0.0 && tau > 1e-3) continue;
      const double amp = (1.0 - (1.0 - sigma) * tau * lambda) / (1.0 + sigma * tau * lambda);
      const GridFunction next = step_weighted(one(y), a, sigma, tau, GridFunction(g)).component(0);
      CHECK(max_abs(next - amp * y) <= 1e-11);
    }
  }
}

TEST_CASE("stable schemes never grow the norm without sources") {
  std::mt19937_64 rng(11);
  const Grid g = Grid::build(16, 16, 1.0, 1.0);
  for (bool conv : {false, true}) {
    const SplitProblem pr = model(g, OverlapVariant::HalfInteger, 2, conv);
    for (double sigma : {0.5, 1.0}) {
      for (double tau : {1e-3, 0.1, 10.0}) {
        GridFunction y = testing_support::random_field(g, rng);
        const GridFunction zero(g);
        for (int n = 0; n < 3; ++n) {
          const double before = norm(y);
          const GridFunction w = step_weighted(one(y), pr.whole, sigma, tau, zero).component(0);
          const GridFunction ra = step_reg_additive(one(y), pr.parts, sigma, tau, zero).component(0);
          const GridFunction rm = step_reg_multiplicative(one(y), pr.parts, sigma, tau, zero).component(0);
          CHECK(norm(w) <= before * (1.0 + 1e-11));
          CHECK(norm(ra) <= before * (1.0 + 1e-11));
          CHECK(norm(rm) <= before * (1.0 + 1e-11));
          y = rm;
        }
      }
    }
  }
}

TEST_CASE("single part reduces to the weighted scheme") {
  std::mt19937_64 rng(12);
  const Grid g = Grid::build(16, 16, 1.0, 1.0);
  for (bool conv : {false, true}) {
    const SplitProblem pr = model(g, OverlapVariant::IntegerNode, 1, conv);
    const GridFunction y = testing_support::random_field(g, rng), zero(g);
    for (double sigma : {0.5, 1.0}) {
      const GridFunction w = step_weighted(one(y), pr.whole, sigma, 0.01, zero).component(0);
      CHECK(max_abs(step_reg_additive(one(y), pr.parts, sigma, 0.01, zero).component(0) - w) <= 1e-10 * max_abs(y));
      CHECK(max_abs(step_reg_multiplicative(one(y), pr.parts, sigma, 0.01, zero).component(0) - w) <=
            1e-10 * max_abs(y));
    }
    const GridFunction w1 = step_weighted(one(y), pr.whole, 1.0, 0.01, zero).component(0);
    CHECK(max_abs(step_vector(SchemeState::initial(y, 1), pr.parts, 0.01, zero).component(0) - w1) <=
          1e-10 * max_abs(y));
  }
}

TEST_CASE("zero parts only add the source") {
  const Grid g = Grid::build(6, 6, 1.0, 1.0);
  const std::vector<LinearGridOperator> zeros{LinearGridOperator::zero(g), LinearGridOperator::zero(g)};
  const GridFunction y = sample_exact(g, 0.0, 1, 2), phi = smooth_source(g, 0.3);
  const double tau = 0.05;
  const GridFunction expect = y + tau * phi;
  CHECK(max_abs(step_reg_additive(one(y), zeros, 1.0, tau, phi).component(0) - expect) <= 1e-15);
  CHECK(max_abs(step_reg_multiplicative(one(y), zeros, 1.0, tau, phi).component(0) - expect) <= 1e-15);
  const SchemeState v = step_vector(SchemeState::initial(y, 2), zeros, tau, phi);
  CHECK(max_abs(v.component(0) - expect) <= 1e-15);
  CHECK(max_abs(v.component(1) - expect) <= 1e-15);
}

TEST_CASE("multiplicative factors for commuting diagonal parts") {
  const Grid g = Grid::build(4, 2, 1.0, 1.0);
  const LinearGridOperator a1(g, SparseMatrix(3, 3, {{0, 0, 1.0}, {1, 1, 4.0}, {2, 2, 0.0}}), Symmetry::Symmetric);
  const LinearGridOperator a2(g, SparseMatrix(3, 3, {{0, 0, 2.0}, {1, 1, 0.5}, {2, 2, 9.0}}), Symmetry::Symmetric);
  const std::vector<LinearGridOperator> parts{a1, a2};
  const GridFunction y(g, {1.0, -2.0, 0.5});
  const double tau = 0.3;
  for (double sigma : {0.5, 1.0}) {
    const auto factor = [&](double l) { return (1.0 - (1.0 - sigma) * tau * l) / (1.0 + sigma * tau * l); };
    const GridFunction out = step_reg_multiplicative(one(y), parts, sigma, tau, GridFunction(g)).component(0);
    CHECK(out[0] == doctest::Approx(factor(1.0) * factor(2.0) * 1.0).epsilon(1e-12));
    CHECK(out[1] == doctest::Approx(factor(4.0) * factor(0.5) * -2.0).epsilon(1e-12));
    CHECK(out[2] == doctest::Approx(factor(0.0) * factor(9.0) * 0.5).epsilon(1e-12));
  }
}

TEST_CASE("vector scheme telescoping identity") {
  const Grid g = Grid::build(16, 16, 1.0, 1.0);
  for (bool conv : {false, true}) {
    const SplitProblem pr = model(g, OverlapVariant::IntegerNode, 4, conv);
    const double tau = 1e-3;
    SchemeState s = SchemeState::initial(sample_exact(g, 0.0, 2, 1), 4);
    for (int n = 0; n < 3; ++n) {
      const SchemeState next = step_vector(s, pr.parts, tau, GridFunction(g));
      for (std::size_t a = 0; a + 1 < 4; ++a) {
        const GridFunction d_next = next.component(a + 1) - s.component(a + 1);
        const GridFunction d_prev = next.component(a) - s.component(a);
        const GridFunction lhs = d_next + tau * pr.parts[a + 1].apply(d_next);
        CHECK(max_abs(lhs - d_prev) <= 1e-10);
        CHECK(norm(d_next) <= norm(d_prev) + 1e-10);
      }
      s = next;
    }
  }
}

TEST_CASE("one step of every scheme matches the dense oracle") {
  const Grid g = Grid::build(4, 4, 1.0, 1.0);
  for (bool conv : {false, true}) {
    const SplitProblem pr = model(g, OverlapVariant::IntegerNode, 2, conv);
    const oracle::Mat a = oracle::dense(pr.whole);
    const auto parts = oracle::dense(pr.parts);
    const GridFunction y = sample_exact(g, 0.0, 2, 1);
    const oracle::Vec yv = oracle::vec(y);
    for (bool with_source : {false, true}) {
      const GridFunction phi = with_source ? smooth_source(g, 0.01) : GridFunction(g);
      const oracle::Vec pv = oracle::vec(phi);
      for (double tau : {1e-3, 0.1}) {
        for (double sigma : {0.5, 1.0}) {
          CHECK(oracle::max_diff(step_explicit(one(y), pr.whole, tau, phi).component(0),
                                 oracle::explicit_step(a, tau, yv, pv)) <= 1e-10);
          CHECK(oracle::max_diff(step_weighted(one(y), pr.whole, sigma, tau, phi).component(0),
                                 oracle::weighted_step(a, sigma, tau, yv, pv)) <= 1e-10);
          CHECK(oracle::max_diff(step_reg_additive(one(y), pr.parts, sigma, tau, phi).component(0),
                                 oracle::reg_additive_step(parts, sigma, tau, yv, pv)) <= 1e-10);
          CHECK(oracle::max_diff(step_reg_multiplicative(one(y), pr.parts, sigma, tau, phi).component(0),
                                 oracle::reg_multiplicative_step(parts, sigma, tau, yv, pv)) <= 1e-10);
        }
        const SchemeState v = step_vector(SchemeState::initial(y, 2), pr.parts, tau, phi);
        const auto ref = oracle::vector_step(parts, tau, {yv, yv}, pv);
        CHECK(oracle::max_diff(v.component(0), ref[0]) <= 1e-10);
        CHECK(oracle::max_diff(v.component(1), ref[1]) <= 1e-10);
      }
    }
  }
}

TEST_CASE("one-step defect of the symmetric weighted scheme") {
  const Grid g = Grid::build(16, 16, 1.0, 1.0);
  const auto a = assemble_laplacian(g);
  const GridFunction y = sample_exact(g, 0.0, 1, 1);
  const double lambda = mode_eigenvalue(g, 1, 1);
  std::vector<double> taus, defects;
  for (double tau = 4e-3; tau > 2e-4; tau /= 2) {
    const GridFunction next = step_weighted(one(y), a, 0.5, tau, GridFunction(g)).component(0);
    taus.push_back(tau);
    defects.push_back(norm(next - std::exp(-lambda * tau) * y));
  }
  CHECK(convergence_order(taus, defects) >= 1.9);
}

TEST_CASE("run") {
  const Grid g = Grid::build(8, 8, 1.0, 1.0);
  const SplitProblem pr = model(g, OverlapVariant::HalfInteger, 2);
  const GridFunction u0 = sample_exact(g, 0.0, 2, 1);

  SchemeConfig s;
  s.kind = SchemeKind::VectorAdditive;
  s.tau = 1e-3;
  s.steps = 0;
  auto traj = run(u0, s, pr);
  REQUIRE(traj.size() == 1);
  CHECK(traj[0].component_count() == 2);
  CHECK(max_abs(traj[0].component(0) - u0) == 0.0);
  CHECK(max_abs(traj[0].component(1) - u0) == 0.0);

  s.steps = 4;
  int seen = 0;
  traj = run(u0, s, pr, {}, {}, [&](const SchemeState& st) { CHECK(st.step() == seen++); });
  CHECK(seen == 5);
  CHECK(traj.size() == 5);
  const GridFunction mean = traj.back().scalar();
  CHECK(max_abs(mean - 0.5 * (traj.back().component(0) + traj.back().component(1))) <= 1e-15);
  const std::vector<double> c{0.25, 0.75};
  CHECK(max_abs(traj.back().scalar(c) - (0.25 * traj.back().component(0) + 0.75 * traj.back().component(1))) <=
        1e-15);
}

TEST_CASE("source evaluation times") {
  SchemeConfig s;
  s.tau = 0.1;
  s.sigma = 0.5;
  s.kind = SchemeKind::Weighted;
  CHECK(s.source_time(3) == doctest::Approx(0.35));
  s.kind = SchemeKind::Explicit;
  CHECK(s.source_time(3) == doctest::Approx(0.3));
  s.kind = SchemeKind::VectorAdditive;
  CHECK(s.source_time(3) == doctest::Approx(0.4));
}

TEST_CASE("run passes time-dependent sources") {
  const Grid g = Grid::build(4, 4, 1.0, 1.0);
  const SplitProblem pr = model(g, OverlapVariant::IntegerNode, 2);
  const GridFunction u0 = sample_exact(g, 0.0, 1, 1);
  const SourceTerm f([&](double t) { return smooth_source(g, t); });
  SchemeConfig s;
  s.kind = SchemeKind::RegAdditive;
  s.sigma = 0.75;
  s.tau = 0.05;
  s.steps = 2;
  const auto traj = run(u0, s, pr, f);
  const auto parts = oracle::dense(pr.parts);
  oracle::Vec y = oracle::vec(u0);
  for (int n = 0; n < 2; ++n) y = oracle::reg_additive_step(parts, 0.75, 0.05, y, oracle::vec(smooth_source(g, (n + 0.75) * 0.05)));
  CHECK(oracle::max_diff(traj.back().component(0), y) <= 1e-10);
}

TEST_CASE("configuration errors") {
  const Grid g = Grid::build(6, 6, 1.0, 1.0);
  const SplitProblem pr = model(g, OverlapVariant::IntegerNode, 2);
  const GridFunction u0 = sample_exact(g, 0.0, 1, 1);
  SchemeConfig s;
  s.steps = 2;
  s.tau = 0.0;
  CHECK_THROWS_AS(run(u0, s, pr), ConfigError);
  s.tau = 0.1;
  s.sigma = -0.5;
  CHECK_THROWS_AS(run(u0, s, pr), ConfigError);
  s.sigma = 0.25;  // accepted, outside the stable range
  CHECK_NOTHROW(run(u0, s, pr));
  s.kind = SchemeKind::VectorAdditive;
  s.weights = {1.0};
  CHECK_THROWS_AS(run(u0, s, pr), ConfigError);
  CHECK_THROWS_AS(step_vector(SchemeState::initial(u0, 3), pr.parts, 0.1, GridFunction(g)), ConfigError);
  CHECK_THROWS_AS(step_weighted(SchemeState::initial(u0, 2), pr.whole, 1.0, 0.1, GridFunction(g)), ConfigError);
  CHECK_THROWS_AS(run(sample_exact(Grid::build(4, 4, 1.0, 1.0), 0.0, 1, 1), s, pr), ConfigError);
  CHECK_THROWS_AS(parse_scheme("implicit"), ConfigError);
  CHECK(parse_scheme("regmult") == SchemeKind::RegMultiplicative);
}

}
