#pragma once

#include <Eigen/Dense>

namespace mindiff {

enum class GrowthFamily { one_mu, two_mu, custom };
enum class GrowthRoute {
  dual_inf,    // value of a minimal weight vector
  primal_sup,  // sup of Dp(z) over polynomials bounded on X
};

const char* to_string(GrowthFamily f);
const char* to_string(GrowthRoute r);

/// Value of the growth function rho_{q,D}(z, X, seminorm) plus the data that
/// certifies it. `value` is +inf when no exact formula of order q exists.
struct GrowthReport {
  double value = 0.0;
  GrowthFamily family = GrowthFamily::one_mu;
  double mu = 0.0;
  GrowthRoute route = GrowthRoute::dual_inf;
  // primal_sup: coefficients b of p(x) = sum_alpha b_alpha ((x - z)/h)^alpha
  // over the graded basis, scaled so that |p(x_j)| <= ||x_j - z||^mu.
  // dual_inf: the minimal weight vector.
  Eigen::VectorXd certificate;
  double h = 0.0;  // h(z, X) used by the polynomial certificate
};

}  // namespace mindiff
