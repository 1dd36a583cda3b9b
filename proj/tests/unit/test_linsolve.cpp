#include <random>

#include "dense_oracle.hpp"
#include "doctest.h"
#include "ddsplit/errors.hpp"
#include "ddsplit/linsolve.hpp"
#include "random_fields.hpp"

using namespace ddsplit;

namespace {

// row of n interior nodes
Grid chain(int n) { return Grid::build(n + 1, 2, 1.0, 1.0); }

LinearGridOperator from_dense(const Grid& g, const oracle::Mat& m) {
  std::vector<Triplet> t;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      t.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), m(i, j)});
    }
  }
  return LinearGridOperator::with_inferred_symmetry(
      g, SparseMatrix(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()), std::move(t)));
}

oracle::Mat random_dense(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  oracle::Mat m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = u(rng);
  }
  return m;
}

double relative_residual(const ShiftedOperator& m, const GridFunction& b, const GridFunction& x) {
  GridFunction mx(b.grid());
  m.apply(x.values(), mx.values());
  return norm(mx - b) / norm(b);
}

}  // namespace

TEST_SUITE("linsolve") {

TEST_CASE("zero shift is the identity") {
  std::mt19937_64 rng(1);
  const Grid g = Grid::build(5, 5, 1.0, 1.0);
  const auto a = assemble_laplacian(g);
  const GridFunction b = testing_support::random_field(g, rng);
  const GridFunction x = solve_spd(ShiftedOperator(a, 0.0), b);
  for (std::size_t k = 0; k < b.size(); ++k) CHECK(x[k] == b[k]);
}

TEST_CASE("diagonal systems") {
  const Grid g = chain(4);
  const LinearGridOperator d(g, SparseMatrix(4, 4, {{0, 0, 1.0}, {1, 1, 3.0}, {2, 2, 0.5}, {3, 3, 7.0}}),
                             Symmetry::Symmetric);
  const GridFunction b(g, {1.0, 2.0, 3.0, 4.0});
  const GridFunction x = solve_spd(ShiftedOperator(d, 1.0, 0.0), b);
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(x[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(x[2] == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(x[3] == doctest::Approx(4.0 / 7.0).epsilon(1e-14));
}

TEST_CASE("random SPD system matches a dense solve") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 10; ++trial) {
    const Grid g = chain(5);
    const oracle::Mat r = random_dense(5, rng);
    const oracle::Mat spd = r * r.transpose() + 0.1 * oracle::Mat::Identity(5, 5);
    const auto a = from_dense(g, spd);
    REQUIRE(a.symmetry() == Symmetry::Symmetric);
    const GridFunction b = testing_support::random_field(g, rng);
    const GridFunction x = solve_spd(ShiftedOperator(a, 1.0, 0.0), b);
    CHECK(oracle::max_diff(x, spd.partialPivLu().solve(oracle::vec(b))) <= 1e-10);
  }
}

TEST_CASE("random general shifted system matches dense LU") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    const Grid g = chain(6);
    const oracle::Mat r = random_dense(6, rng);
    // nonnegative: symmetric part PSD, skew part arbitrary
    const oracle::Mat a = r * r.transpose() + (r - r.transpose());
    const auto op = from_dense(g, a);
    const double tau = 0.37;
    const GridFunction b = testing_support::random_field(g, rng);
    const ShiftedOperator m(op, tau);
    const GridFunction x = solve_general(m, b);
    CHECK(oracle::max_diff(x, oracle::shifted_solve(a, tau, oracle::vec(b))) <= 1e-9);
    CHECK(relative_residual(m, b, x) <= 1e-12);
  }
}

TEST_CASE("methods agree on symmetric problems") {
  std::mt19937_64 rng(3);
  const Grid g = Grid::build(12, 12, 1.0, 1.0);
  const auto a = assemble_laplacian(g);
  const GridFunction b = testing_support::random_field(g, rng);
  const ShiftedOperator m(a, 0.01);
  const GridFunction x1 = solve_spd(m, b), x2 = solve_general(m, b);
  CHECK(max_abs(x1 - x2) <= 1e-10);
}

TEST_CASE("skew shift never amplifies") {
  std::mt19937_64 rng(4);
  const Grid g = Grid::build(16, 16, 1.0, 1.0);
  const auto c = assemble_convection(g, NodalField::constant(g, 1.0), NodalField::constant(g, 0.5));
  for (double tau : {1e-3, 0.1, 10.0}) {
    const GridFunction b = testing_support::random_field(g, rng);
    const ShiftedOperator m(c, tau);
    CHECK_FALSE(m.symmetric());
    GridFunction x(g);
    solve(m, b.values(), x.values());
    CHECK(relative_residual(m, b, x) <= 1e-12);
    CHECK(norm(x) <= norm(b) * (1.0 + 1e-12));
  }
}

TEST_CASE("shifted convection-diffusion at large steps") {
  std::mt19937_64 rng(5);
  const Grid g = Grid::build(16, 16, 1.0, 1.0);
  const auto a = assemble_laplacian(g) + assemble_convection(g, NodalField::constant(g, 1.0), NodalField::constant(g, 0.5));
  const oracle::Mat ad = oracle::dense(a);
  for (double tau : {1e-3, 0.1, 10.0}) {
    const GridFunction b = testing_support::random_field(g, rng);
    GridFunction x(g);
    solve(ShiftedOperator(a, tau), b.values(), x.values());
    const oracle::Vec ref = oracle::shifted_solve(ad, tau, oracle::vec(b));
    CHECK(oracle::max_diff(x, ref) <= 1e-9 * ref.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("deterministic output") {
  std::mt19937_64 rng(6);
  const Grid g = Grid::build(10, 10, 1.0, 1.0);
  const auto a = assemble_laplacian(g) + assemble_convection(g, NodalField::constant(g, 2.0), NodalField::constant(g, 0.0));
  const GridFunction b = testing_support::random_field(g, rng);
  const ShiftedOperator m(a, 0.05);
  const GridFunction x1 = solve_general(m, b), x2 = solve_general(m, b);
  for (std::size_t k = 0; k < b.size(); ++k) CHECK(x1[k] == x2[k]);
}

TEST_CASE("non-convergence is reported with the residual") {
  std::mt19937_64 rng(8);
  const Grid g = Grid::build(16, 16, 1.0, 1.0);
  const auto a = assemble_laplacian(g);
  const GridFunction b = testing_support::random_field(g, rng);
  SolverConfig cfg;
  cfg.max_iterations = 2;
  try {
    (void)solve_spd(ShiftedOperator(a, 1.0), b, cfg);
    FAIL("expected a NumericalError");
  } catch (const NumericalError& e) {
    CHECK(e.residual() > cfg.tolerance);
  }
  CHECK_THROWS_AS((void)solve_general(ShiftedOperator(a, 1.0), b, cfg), NumericalError);
}

TEST_CASE("config validation") {
  SolverConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.iteration_limit(50) == 500);
  cfg.tolerance = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.tolerance = 1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.tolerance = 1e-8;
  cfg.max_iterations = -1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  const Grid g = Grid::build(4, 4, 1.0, 1.0);
  const auto a = assemble_laplacian(g);
  CHECK_THROWS_AS(ShiftedOperator(a, -1.0), ConfigError);
}

}
