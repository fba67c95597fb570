#pragma once

// Error bounds for exact differentiation formulas applied to functions with
// Hoelder continuous derivatives of order r (seminorm |f|_{r,gamma}).

#include <vector>

#include "mindiff/geometry.hpp"
#include "mindiff/polyalg.hpp"

namespace mindiff {

struct SmoothnessClass {
  enum class Kind { hoelder, sobolev_inf };
  Kind kind = Kind::sobolev_inf;
  int r = 0;
  double gamma = 1.0;  // fixed to 1 for sobolev_inf

  double order() const { return r + gamma; }
};

struct BoundReport {
  double bd_w1 = 0.0;
  double bd_gr1 = 0.0;
  double bd_gr2 = 0.0;
  int q = 0;
  double mu = 0.0;
  int r = 0;
  double gamma = 1.0;
  double seminorm = 0.0;  // the |f| factor multiplied into each bound
};

/// f_seminorm * sum_j |w_j| ||x_j - z||^(q - 1 + gamma)
double bound_w1(const CenterSet& S, const Eigen::VectorXd& w, int q, double f_seminorm, double gamma);

/// rho_1 times 1, h_{z,X_w}^(r+gamma-mu) or s_{z,X_w}^(r+gamma-mu) depending on
/// the sign of r + gamma - mu. `support` lists the centers with nonzero weight.
double bound_growth_l1(const CenterSet& S, double rho1, double mu, int r, double gamma,
                       const std::vector<int>& support);

/// rho_2 (sum_{x_j != z} ||x_j - z||^(2(r+gamma-mu)))^(1/2), or sqrt(N) rho_2
/// when mu = r + gamma.
double bound_growth_l2(const CenterSet& S, double rho2, double mu, int r, double gamma);

/// sqrt(N) rho_2 max{h^(r+gamma-mu), s^(r+gamma-mu)} over the whole set.
double bound_l1_via_rho2(const CenterSet& S, double rho2, double mu, int r, double gamma);

/// |e^(x1+x2)|_{inf,m} = 2^(m/2)/m! times the max of e^(x1+x2) over X and z.
double f2_seminorm(const CenterSet& S, int m);

/// max over |alpha| = k, c_alpha != 0 of alpha! |c_alpha| h^-k.
double stability_floor(const DiffOperator& D, const CenterSet& S);

}  // namespace mindiff
