#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mindiff/errors.hpp"
#include "mindiff/exactness.hpp"
#include "mindiff/l1_minimal.hpp"
#include "mindiff/pointsets.hpp"
#include "support.hpp"

using namespace mindiff;
using testing::star;

namespace {

const DiffOperator kLap = DiffOperator::laplacian(2);

std::vector<double> sorted(const Eigen::VectorXd& v) {
  std::vector<double> s(v.data(), v.data() + v.size());
  std::sort(s.begin(), s.end());
  return s;
}

void check_star_weights(const Eigen::VectorXd& w) {
  const std::vector<double> got = sorted(w);
  const std::vector<double> want{-4, 1, 1, 1, 1};
  for (std::size_t i = 0; i < want.size(); ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-9));
}

}  // namespace

TEST_CASE("five-point star") {
  for (int q : {3, 4}) {
    CAPTURE(q);
    const L1Solution sol = solve_l1(star(), kLap, q, 2.0);
    check_star_weights(sol.w.values);
    CHECK(sol.objective == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(sol.objective == doctest::Approx(tau(kLap)).epsilon(1e-9));
    CHECK(sol.residual_ok);
    CHECK(sol.support_size <= dim_poly_space(2, q));
    CHECK(sol.w.provenance == Provenance::l1min);

    const GrowthReport g = growth_primal(star(), kLap, q, 2.0);
    CHECK(g.value == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(g.route == GrowthRoute::primal_sup);
  }
}

TEST_CASE("second difference on the line") {
  const DiffOperator d2 = DiffOperator::partial(MultiIndex{2});
  for (double mu : {0.0, 1.0, 3.0}) {
    const L1Solution sol = solve_l1(testing::line3(), d2, 3, mu);
    CHECK(sol.w.values(0) == doctest::Approx(1.0));
    CHECK(sol.w.values(1) == doctest::Approx(-2.0));
    CHECK(sol.w.values(2) == doctest::Approx(1.0));
  }
}

TEST_CASE("no formula on a single point") {
  const CenterSet only_z(Eigen::Vector2d::Zero(), Eigen::RowVector2d(0, 0));
  try {
    solve_l1(only_z, kLap, 3, 2.0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::no_formula);
  }
  CHECK(std::isinf(growth_primal(only_z, kLap, 3, 2.0).value));
  CHECK_THROWS_AS(solve_l1(star(), kLap, 3, -1.0), Error);
  CHECK_THROWS_AS(solve_l1(star(), kLap, 2, 2.0), Error);
}

TEST_CASE("tau") {
  CHECK(tau(DiffOperator::laplacian(2)) == 4.0);
  CHECK(tau(DiffOperator::laplacian(3)) == 6.0);
  CHECK(tau(DiffOperator::partial(MultiIndex{2, 0})) == 2.0);
  CHECK_THROWS_AS(tau(DiffOperator::partial(MultiIndex{1, 0})), Error);
}

TEST_CASE("positive formulas") {
  const auto four = solve_positive(star(), kLap, 4);
  REQUIRE(four.has_value());
  check_star_weights(four->w.values);
  CHECK(four->w.values(0) == doctest::Approx(-4.0));
  const auto three = solve_positive(star(), kLap, 3);
  REQUIRE(three.has_value());
  CHECK(three->objective == doctest::Approx(4.0).epsilon(1e-9));
  CHECK_FALSE(solve_positive(star(), kLap, 5).has_value());

  testing::Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const CenterSet S = testing::random_set(rng, 30, true);
    CHECK_FALSE(solve_positive(S, kLap, 5).has_value());
    // The LP itself agrees when asked directly.
    CHECK_FALSE(solve_sign_constrained(S, kLap, 5).has_value());
  }
  CHECK_THROWS_AS(solve_positive(testing::random_set(rng, 10), kLap, 4), Error);
}

TEST_CASE("strong duality on random sets") {
  testing::Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const CenterSet S = testing::random_set(rng, 15, trial % 2 == 0);
    for (double mu : {0.0, 2.0, 3.0}) {
      const L1Solution sol = solve_l1(S, kLap, 3, mu);
      const GrowthReport g = growth_primal(S, kLap, 3, mu);
      CHECK(std::abs(sol.objective - g.value) <= 1e-7 * (1 + g.value));
      CHECK(sol.support_size <= 6);
    }
  }
}

TEST_CASE("primal certificate is admissible") {
  testing::Rng rng(5);
  const CenterSet S = testing::random_set(rng, 20);
  const double mu = 2.0;
  const GrowthReport g = growth_primal(S, kLap, 4, mu);
  const ExactnessSystem sys = build_exactness_system(S, kLap, 4);
  // p(x_j) = sum_alpha b_alpha y_j^alpha must stay below ||x_j - z||^mu.
  const Eigen::VectorXd p = sys.A.transpose() * g.certificate;
  for (int j = 0; j < S.size(); ++j) CHECK(std::abs(p(j)) <= distance_power(S.distance(j), mu) * (1 + 1e-9));
}

TEST_CASE("scaling of the growth function") {
  testing::Rng rng(8);
  const CenterSet S = testing::random_set(rng, 25, true);
  for (double mu : {0.0, 2.0, 4.0}) {
    const double base = solve_l1(S, kLap, 4, mu).objective;
    for (double h : {0.5, 0.25}) {
      const double scaled = solve_l1(S.scaled(h), kLap, 4, mu).objective;
      CHECK(scaled / base == doctest::Approx(std::pow(h, mu - 2.0)).epsilon(1e-8));
    }
  }
}

TEST_CASE("order seven on a 150-point set") {
  // Reference optima from HiGHS on the same points.
  const CenterSet S = generate({Family::x5, 1, 1.0, {}});
  const L1Solution s0 = solve_l1(S, kLap, 7, 0.0);
  CHECK(s0.objective == doctest::Approx(48.653398337803665).epsilon(1e-8));
  CHECK(s0.support_size <= 28);
  const L1Solution s7 = solve_l1(S, kLap, 7, 7.0);
  CHECK(s7.objective == doctest::Approx(0.3528515396063375).epsilon(1e-7));
  CHECK(s7.support_size <= 28);
  CHECK(s7.residual_ok);
}

TEST_CASE("deterministic output") {
  testing::Rng rng(2);
  const CenterSet S = testing::random_set(rng, 40);
  const L1Solution a = solve_l1(S, kLap, 5, 5.0);
  const L1Solution b = solve_l1(S, kLap, 5, 5.0);
  CHECK(a.w.values == b.w.values);
}
