#include <doctest.h>

#include "mindiff/lp.hpp"
#include "support.hpp"

using namespace mindiff;
using lp::Status;

namespace {

lp::StandardLP make(std::initializer_list<std::initializer_list<double>> rows, std::initializer_list<double> b,
                    std::initializer_list<double> c) {
  lp::StandardLP p;
  p.A.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(c.size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double v : r) p.A(i, j++) = v;
    ++i;
  }
  p.b = Eigen::Map<const Eigen::VectorXd>(b.begin(), static_cast<Eigen::Index>(b.size()));
  p.c = Eigen::Map<const Eigen::VectorXd>(c.begin(), static_cast<Eigen::Index>(c.size()));
  return p;
}

int nonzeros(const Eigen::VectorXd& x) { return static_cast<int>((x.array().abs() > 1e-12).count()); }

void check_optimal_invariants(const lp::StandardLP& p, const lp::Result& r) {
  REQUIRE(r.status == Status::optimal);
  CHECK(r.x.minCoeff() >= -1e-9);
  CHECK(r.residual <= 1e-9 * (1 + p.b.cwiseAbs().maxCoeff()));
  CHECK(nonzeros(r.x) <= p.A.rows());
  for (Eigen::Index j = 0; j < r.x.size(); ++j) {
    if (std::abs(r.x(j)) > 1e-12) CHECK(std::find(r.basis.begin(), r.basis.end(), j) != r.basis.end());
  }
  // Dual feasibility and zero gap.
  CHECK(((p.c - p.A.transpose() * r.dual).array() >= -1e-8).all());
  CHECK(p.b.dot(r.dual) == doctest::Approx(r.objective).epsilon(1e-9));
}

}  // namespace

TEST_CASE("single constraint") {
  const lp::StandardLP p = make({{1, 1}}, {1}, {1, 1});
  const lp::Result r = lp::solve_lp(p);
  check_optimal_invariants(p, r);
  CHECK(r.objective == doctest::Approx(1.0));
  CHECK(nonzeros(r.x) == 1);
}

TEST_CASE("infeasible") {
  const lp::Result r = lp::solve_lp(make({{1, 1}}, {-1}, {1, 1}));
  CHECK(r.status == Status::infeasible);
  CHECK(r.phase1_objective > 1e-9);
}

TEST_CASE("unbounded") {
  // x1 - x2 = 1 with cost -x1: x1 grows without limit along (1, 1).
  CHECK(lp::solve_lp(make({{1, -1}}, {1}, {-1, 0})).status == Status::unbounded);
}

TEST_CASE("redundant rows are dropped") {
  const lp::StandardLP p = make({{1, 1, 0}, {2, 2, 0}, {0, 1, 1}}, {1, 2, 1}, {1, 2, 3});
  const lp::Result r = lp::solve_lp(p);
  check_optimal_invariants(p, r);
  CHECK(r.objective == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.x(1) == doctest::Approx(1.0));
  CHECK(r.basis.size() == 2);
}

TEST_CASE("matches an independent LP solver") {
  // Optimum from a HiGHS run on the same data.
  const lp::StandardLP p = make(
      {{1.22, 1.23, 0.06, -0.86, -1.78, -0.47, -0.37, -1.82, -1.8},
       {2.0, 0.61, -1.06, -0.26, 1.9, 1.59, 1.38, -0.43, -0.03},
       {0.71, -1.76, 0.22, -0.91, 1.52, -1.74, 0.72, 1.48, -1.09},
       {1.58, 1.49, -1.93, 0.83, -2.0, 0.01, -0.25, -1.19, -0.7}},
      {-2.4994, 3.7708, -1.5257, 0.1553}, {1.57, 1.57, 0.78, 0.14, 2.81, 0.35, 2.55, 1.17, 2.86});
  const lp::Result r = lp::solve_lp(p);
  check_optimal_invariants(p, r);
  CHECK(r.objective == doctest::Approx(3.140038465600936).epsilon(1e-10));
  CHECK(r.x(0) == doctest::Approx(0.694834592978854).epsilon(1e-9));
  CHECK(r.x(5) == doctest::Approx(1.8802714827030038).epsilon(1e-9));
  CHECK(r.dual(0) == doctest::Approx(-0.5885469485827259).epsilon(1e-9));

  lp::Options capped;
  capped.max_iterations = 1;
  CHECK(lp::solve_lp(p, capped).status == Status::stalled);
}

TEST_CASE("random feasible problems") {
  testing::Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const int m = 3 + trial % 5;
    const int n = 2 * m + 3;
    lp::StandardLP p;
    p.A = Eigen::MatrixXd::NullaryExpr(m, n, [&] { return rng.uniform(); });
    const Eigen::VectorXd x0 = Eigen::VectorXd::NullaryExpr(n, [&] { return rng.uniform(0.0, 1.0); });
    p.b = p.A * x0;
    p.c = Eigen::VectorXd::NullaryExpr(n, [&] { return rng.uniform(0.1, 2.0); });
    const lp::Result r = lp::solve_lp(p);
    check_optimal_invariants(p, r);
    CHECK(r.objective <= p.c.dot(x0) + 1e-9);

    // Weak duality against a scaled-down dual point.
    const Eigen::VectorXd y = Eigen::VectorXd::NullaryExpr(m, [&] { return rng.uniform(); });
    const double slack = (p.A.transpose() * y - p.c).maxCoeff();
    if (slack <= 0) CHECK(r.objective >= p.b.dot(y) - 1e-9);

    const lp::Result again = lp::solve_lp(p);
    CHECK(again.basis == r.basis);
    CHECK(again.x == r.x);
  }
}

TEST_CASE("input validation") {
  lp::StandardLP p = make({{1, 1}}, {1}, {1, 1});
  p.c.resize(3);
  p.c.setOnes();
  CHECK_THROWS(lp::solve_lp(p));
  p = make({{1, NAN}}, {1}, {1, 1});
  CHECK_THROWS(lp::solve_lp(p));
}
