#include <doctest.h>

#include <array>
#include <set>

#include "mindiff/errors.hpp"
#include "mindiff/polyalg.hpp"

using namespace mindiff;

TEST_CASE("dimension of polynomial spaces") {
  CHECK(dim_poly_space(2, 7) == 28);
  CHECK(dim_poly_space(2, 8) == 36);
  CHECK(dim_poly_space(2, 0) == 0);
  CHECK(dim_poly_space(3, 0) == 0);
  CHECK(dim_poly_space(1, 5) == 5);
  CHECK(dim_poly_space(3, 3) == 10);
}

TEST_CASE("factorials") {
  CHECK(factorial(0) == 1);
  CHECK(factorial(5) == 120);
  CHECK(factorial(20) == 2432902008176640000ULL);
  CHECK_THROWS_AS(factorial(21), Error);
  CHECK(MultiIndex{2, 3}.factorial() == 12);
}

TEST_CASE("basis enumeration") {
  SUBCASE("univariate") {
    const PolyBasis b = enumerate_basis(1, 3);
    REQUIRE(b.size() == 3);
    for (int i = 0; i < 3; ++i) CHECK(b[i] == MultiIndex{i});
  }
  SUBCASE("degree one in the plane") {
    const PolyBasis b = enumerate_basis(2, 2);
    REQUIRE(b.size() == 3);
    CHECK(b[0] == MultiIndex{0, 0});
    std::set<std::vector<int>> rest{b[1].entries(), b[2].entries()};
    CHECK(rest == std::set<std::vector<int>>{{1, 0}, {0, 1}});
  }
  SUBCASE("order seven has 28 distinct indices in graded order") {
    const PolyBasis b = enumerate_basis(2, 7);
    REQUIRE(b.size() == 28);
    std::set<std::vector<int>> seen;
    for (int i = 0; i < b.size(); ++i) {
      CHECK(b[i].order() < 7);
      seen.insert(b[i].entries());
      if (i > 0) {
        CHECK(b[i - 1] < b[i]);
        CHECK(b[i - 1].order() <= b[i].order());
      }
      CHECK(b.position(b[i]) == i);
    }
    CHECK(seen.size() == 28);
    CHECK(b.position(MultiIndex{7, 0}) == -1);
  }
  SUBCASE("q = 0 is rejected") { CHECK_THROWS_AS(enumerate_basis(2, 0), Error); }
}

TEST_CASE("monomial evaluation") {
  const std::array<double, 2> y{3.0, 5.0};
  CHECK(monomial_eval(MultiIndex{2, 0}, y) == 9.0);
  CHECK(monomial_eval(MultiIndex{0, 0}, std::array<double, 2>{0.0, 0.0}) == 1.0);
  CHECK(monomial_eval(MultiIndex{1, 1}, std::array<double, 2>{0.0, 7.0}) == 0.0);
  CHECK(monomial_eval(MultiIndex{1, 2}, y) == 75.0);

  Eigen::MatrixXd Y(2, 2);
  Y << 3, 5, -1, 2;
  const Eigen::MatrixXd A = monomial_matrix(enumerate_basis(2, 3), Y);
  CHECK(A.rows() == 6);
  CHECK(A.cols() == 2);
  CHECK((A.row(0).array() == 1.0).all());
}

TEST_CASE("operator right-hand side") {
  const DiffOperator lap = DiffOperator::laplacian(2);
  CHECK(lap.order() == 2);
  CHECK(lap.homogeneous());
  const PolyBasis basis = enumerate_basis(2, 3);
  for (double h : {1.0, 0.5}) {
    const Eigen::VectorXd b = op_rhs(lap, basis, h);
    for (int i = 0; i < basis.size(); ++i) {
      const bool second = basis[i] == MultiIndex{2, 0} || basis[i] == MultiIndex{0, 2};
      CHECK(b(i) == doctest::Approx(second ? 2.0 : 0.0));
    }
  }
  const Eigen::VectorXd id = op_rhs(DiffOperator::identity(2), enumerate_basis(2, 4), 1.0);
  CHECK(id(0) == 1.0);
  CHECK(id.tail(id.size() - 1).isZero());

  // Inhomogeneous operator: lower-order terms pick up powers of h.
  const DiffOperator mixed(2, {{MultiIndex{2, 0}, 1.0}, {MultiIndex{1, 0}, 3.0}});
  CHECK_FALSE(mixed.homogeneous());
  const Eigen::VectorXd bm = op_rhs(mixed, basis, 0.5);
  CHECK(bm(basis.position(MultiIndex{1, 0})) == doctest::Approx(3.0 * 0.5));
  CHECK(bm(basis.position(MultiIndex{2, 0})) == doctest::Approx(2.0));
}

TEST_CASE("operators reject degenerate input") {
  CHECK_THROWS_AS(DiffOperator(2, {{MultiIndex{2, 0}, 0.0}}), Error);
  CHECK_THROWS_AS(DiffOperator(2, {{MultiIndex{1, 0, 0}, 1.0}}), Error);
  CHECK(DiffOperator::laplacian(2).apply_to_monomial_at_origin(MultiIndex{0, 2}) == 2.0);
  CHECK(DiffOperator::laplacian(2).apply_to_monomial_at_origin(MultiIndex{1, 1}) == 0.0);
}
