#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "dense_oracle.hpp"
#include "doctest.h"
#include "ddsplit/analysis.hpp"
#include "ddsplit/errors.hpp"
#include "ddsplit/operators.hpp"
#include "random_fields.hpp"

using namespace ddsplit;

namespace {

double mode_eigenvalue(const Grid& g, int n1, int n2) {
  const double pi = std::numbers::pi;
  const auto term = [&](double h, int n) {
    const double s = std::sin(n * pi * h / 2.0);
    return 4.0 / (h * h) * s * s;
  };
  return term(g.h1(), n1) + term(g.h2(), n2);
}

LinearGridOperator convection(const Grid& g, double v1, double v2) {
  return assemble_convection(g, NodalField::constant(g, v1), NodalField::constant(g, v2));
}

}  // namespace

TEST_SUITE("operators") {

TEST_CASE("single node laplacian") {
  const LinearGridOperator a = assemble_laplacian(Grid::build(2, 2, 1.0, 1.0));
  REQUIRE(a.dimension() == 1);
  CHECK(a.matrix().entry(0, 0) == 16.0);
  CHECK(a.symmetry() == Symmetry::Symmetric);
}

TEST_CASE("laplacian stencil on 4x4") {
  const Grid g = Grid::build(4, 4, 1.0, 1.0);
  const auto m = assemble_laplacian(g).matrix();
  const std::size_t c = g.index(2, 2);
  CHECK(m.entry(c, c) == 64.0);
  CHECK(m.entry(c, g.index(1, 2)) == -16.0);
  CHECK(m.entry(c, g.index(3, 2)) == -16.0);
  CHECK(m.entry(c, g.index(2, 1)) == -16.0);
  CHECK(m.entry(c, g.index(2, 3)) == -16.0);
  CHECK(m.entry(c, g.index(1, 1)) == 0.0);
  CHECK(m.nonzeros() == 9 + 2 * 12);
}

TEST_CASE("fourier modes are discrete eigenfunctions") {
  for (auto [n1c, n2c] : {std::pair{8, 8}, std::pair{12, 7}, std::pair{32, 32}}) {
    const Grid g = Grid::build(n1c, n2c, 1.0, 1.0);
    const LinearGridOperator a = assemble_laplacian(g);
    for (auto [m1, m2] : {std::pair{1, 1}, std::pair{2, 1}, std::pair{3, 5}}) {
      if (m1 >= n1c || m2 >= n2c) continue;
      const GridFunction y = sample_exact(g, 0.0, m1, m2);
      const GridFunction r = a.apply(y) - mode_eigenvalue(g, m1, m2) * y;
      CHECK(norm(r) / norm(y) <= 1e-12);
    }
  }
}

TEST_CASE("smallest laplacian eigenvalue") {
  const Grid g = Grid::build(16, 12, 1.0, 1.0);
  const double delta = mode_eigenvalue(g, 1, 1);
  CHECK(min_eigenvalue(assemble_laplacian(g)) >= delta - 1e-10);
  CHECK(min_eigenvalue(assemble_laplacian(g)) == doctest::Approx(delta).epsilon(1e-7));
}

TEST_CASE("zero velocity gives a zero operator") {
  const auto c = convection(Grid::build(6, 5, 1.0, 1.0), 0.0, 0.0);
  CHECK(c.matrix().nonzeros() == 0);
  CHECK(c.symmetry() == Symmetry::Skew);
}

TEST_CASE("convection is exactly skew for variable velocity") {
  const Grid g = Grid::build(9, 7, 1.0, 1.0);
  std::vector<double> v1, v2;
  for (int i2 = 0; i2 <= 7; ++i2) {
    for (int i1 = 0; i1 <= 9; ++i1) {
      v1.push_back(std::sin(1.0 + i1 * 0.7 + i2 * 0.3));
      v2.push_back(std::cos(0.2 * i1 - 0.9 * i2));
    }
  }
  const auto c = assemble_convection(g, NodalField(g, v1), NodalField(g, v2));
  const oracle::Mat m = oracle::dense(c);
  CHECK((m + m.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(m.cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("convection chain on 4x2") {
  const Grid g = Grid::build(4, 2, 1.0, 1.0);
  const auto m = convection(g, 1.0, 0.0).matrix();
  CHECK(m.entry(0, 1) == 2.0);
  CHECK(m.entry(1, 2) == 2.0);
  CHECK(m.entry(1, 0) == -2.0);
  CHECK(m.entry(2, 1) == -2.0);
  CHECK(m.entry(0, 2) == 0.0);
  CHECK(m.nonzeros() == 4);
}

TEST_CASE("velocity field size is checked") {
  const Grid g = Grid::build(4, 4, 1.0, 1.0);
  CHECK_THROWS_AS(NodalField(g, std::vector<double>(16, 1.0)), ConfigError);
}

TEST_CASE("symmetric and skew split") {
  const Grid g = Grid::build(6, 6, 1.0, 1.0);
  const auto lap = assemble_laplacian(g);
  const auto conv = convection(g, 1.0, 0.5);

  const auto s1 = split_symmetric_skew(lap);
  CHECK(max_abs_difference(s1.symmetric.matrix(), lap.matrix()) == 0.0);
  CHECK(s1.skew.matrix().max_abs() == 0.0);

  const auto s2 = split_symmetric_skew(conv);
  CHECK(s2.symmetric.matrix().max_abs() == 0.0);
  CHECK(max_abs_difference(s2.skew.matrix(), conv.matrix()) == 0.0);

  const auto a = lap + conv;
  const auto s3 = split_symmetric_skew(a);
  CHECK(s3.symmetric.symmetry() == Symmetry::Symmetric);
  CHECK(s3.skew.symmetry() == Symmetry::Skew);
  CHECK(max_abs_difference(s3.symmetric.matrix(), lap.matrix()) == 0.0);
  CHECK(max_abs_difference(s3.skew.matrix(), conv.matrix()) == 0.0);
  CHECK(max_abs_difference(combine(1.0, s3.symmetric.matrix(), 1.0, s3.skew.matrix()), a.matrix()) == 0.0);
}

TEST_CASE("symmetry tags are checked at construction") {
  const Grid g = Grid::build(4, 4, 1.0, 1.0);
  CHECK_THROWS_AS(LinearGridOperator(g, convection(g, 1.0, 0.0).matrix(), Symmetry::Symmetric), ConfigError);
  CHECK_THROWS_AS(LinearGridOperator(g, assemble_laplacian(g).matrix(), Symmetry::Skew), ConfigError);
  CHECK_THROWS_AS(LinearGridOperator(g, SparseMatrix(9, 8, {}), Symmetry::General), ConfigError);
}

TEST_CASE("gradient factorization reproduces the laplacian") {
  for (auto [n1c, n2c] : {std::pair{2, 2}, std::pair{5, 4}, std::pair{16, 16}}) {
    const Grid g = Grid::build(n1c, n2c, 1.0, 1.0);
    const auto d = gradient_factorization(g).gram();
    const auto lap = assemble_laplacian(g);
    CHECK(max_abs_difference(d.matrix(), lap.matrix()) <= 1e-12 * lap.matrix().max_abs());
  }
}

TEST_CASE("gradient on the single-node grid") {
  const Grid g = Grid::build(2, 2, 1.0, 1.0);
  const EdgeOperator gr = gradient_factorization(g);
  const auto m = oracle::dense(gr.matrix());
  REQUIRE(m.rows() == 4);
  const std::size_t left = g.edge_index(Axis::X1, 1, 1), right = g.edge_index(Axis::X1, 2, 1);
  CHECK(m(static_cast<Eigen::Index>(left), 0) == 2.0);
  CHECK(m(static_cast<Eigen::Index>(right), 0) == -2.0);
  CHECK(oracle::dense(gr.gram())(0, 0) == 16.0);
}

TEST_CASE("edge diffusivity enters as flux weights") {
  const Grid g = Grid::build(4, 3, 1.0, 1.0);
  std::vector<double> k(g.edge_count());
  for (std::size_t e = 0; e < k.size(); ++e) k[e] = 1.0 + 0.25 * static_cast<double>(e % 5);
  const auto d = oracle::dense(gradient_factorization(g, k).gram());
  // direct flux-form assembly
  oracle::Mat ref = oracle::Mat::Zero(d.rows(), d.cols());
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const auto ed = g.edge(e);
    const double h = g.step(ed.axis);
    const int t1 = ed.axis == Axis::X1 ? ed.head1 - 1 : ed.head1;
    const int t2 = ed.axis == Axis::X2 ? ed.head2 - 1 : ed.head2;
    const double w = k[e] / (h * h);
    const bool head_in = g.is_interior(ed.head1, ed.head2), tail_in = g.is_interior(t1, t2);
    const auto hi = static_cast<Eigen::Index>(head_in ? g.index(ed.head1, ed.head2) : 0);
    const auto ti = static_cast<Eigen::Index>(tail_in ? g.index(t1, t2) : 0);
    if (head_in) ref(hi, hi) += w;
    if (tail_in) ref(ti, ti) += w;
    if (head_in && tail_in) {
      ref(hi, ti) -= w;
      ref(ti, hi) -= w;
    }
  }
  CHECK((d - ref).cwiseAbs().maxCoeff() <= 1e-12 * ref.cwiseAbs().maxCoeff());
  CHECK_THROWS_AS(gradient_factorization(g, std::vector<double>(g.edge_count(), 0.0)), ConfigError);
}

TEST_CASE("energy identity and nonnegativity") {
  std::mt19937_64 rng(31);
  const Grid g = Grid::build(10, 9, 1.0, 1.0);
  const EdgeOperator gr = gradient_factorization(g);
  const auto d = gr.gram();
  const auto a = assemble_laplacian(g) + convection(g, 1.0, 0.5);
  for (int trial = 0; trial < 100; ++trial) {
    const GridFunction y = testing_support::random_field(g, rng);
    const auto gy = gr.apply(y);
    double edge_energy = 0.0;
    for (double v : gy) edge_energy += v * v;
    edge_energy *= g.cell_measure();
    CHECK(edge_energy == doctest::Approx(inner_product(d.apply(y), y)).epsilon(1e-12));
    CHECK(inner_product(a.apply(y), y) == doctest::Approx(inner_product(d.apply(y), y)).epsilon(1e-11));
    CHECK(inner_product(a.apply(y), y) >= 0.0);
  }
}

TEST_CASE("adjoint matches transpose") {
  std::mt19937_64 rng(5);
  const Grid g = Grid::build(6, 5, 1.0, 1.0);
  const EdgeOperator gr = gradient_factorization(g);
  const GridFunction y = testing_support::random_field(g, rng);
  const auto z = testing_support::random_vector(g.edge_count(), rng);
  const auto gy = gr.apply(y);
  double lhs = 0.0;
  for (std::size_t e = 0; e < z.size(); ++e) lhs += gy[e] * z[e];
  const GridFunction gtz = gr.apply_adjoint(z);
  double rhs = 0.0;
  for (std::size_t k = 0; k < y.size(); ++k) rhs += y[k] * gtz[k];
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("coordinate list dump") {
  const auto m = assemble_laplacian(Grid::build(3, 2, 1.0, 1.0)).matrix();
  std::ostringstream out;
  write_coordinate_list(out, m);
  CHECK(out.str() == "0 0 26\n0 1 -9\n1 0 -9\n1 1 26\n");
}

}
