#pragma once

// Weighted l1-minimal differentiation formulas:
//
//   minimize  sum_j |w_j| ||x_j - z||^mu  subject to  D p(z) = sum_j w_j p(x_j)
//   for all p of total degree < q.
//
// The LP is assembled on the set rescaled into the unit ball around z and
// solved by the vertex simplex of lp.hpp, so the returned weights have at
// most dim_poly_space(d, q) nonzeros.

#include <optional>

#include "mindiff/geometry.hpp"
#include "mindiff/growth.hpp"
#include "mindiff/lp.hpp"
#include "mindiff/polyalg.hpp"

namespace mindiff {

/// Normalized-frame exactness residual accepted without a quality warning.
inline constexpr double kExactnessResidualTol = 1e-8;

struct L1Solution {
  WeightVector w;
  double objective = 0.0;  // ||w||_{1,mu} in the original frame
  double mu = 0.0;
  int support_size = 0;
  double residual = 0.0;   // ||A v - b||_inf with v = h^k w on the unit-ball set
  bool residual_ok = true;
  double h = 0.0;
  int lp_iterations = 0;
};

/// Throws Error(no_formula) when no formula of order q exists on X and
/// Error(stalled) when the simplex hits its iteration cap.
L1Solution solve_l1(const CenterSet& S, const DiffOperator& D, int q, double mu, const lp::Options& lp_options = {});

/// rho_{q,D}(z, X, 1, mu) as sup{ Dp(z) : |p(x_j)| <= ||x_j - z||^mu }.
/// Returns +inf when the LP is unbounded.
GrowthReport growth_primal(const CenterSet& S, const DiffOperator& D, int q, double mu,
                           const lp::Options& lp_options = {});

/// tau_D = 2 sum_i c_{2 e_i} for a second order operator.
double tau(const DiffOperator& D);

/// Formula with w_z <= 0 at the center coinciding with z and w_j >= 0
/// elsewhere, minimizing ||w||_{1,2}. Runs the LP for any q. Weights are
/// reported in the input ordering. Throws if z is not one of the centers.
std::optional<L1Solution> solve_sign_constrained(const CenterSet& S, const DiffOperator& D, int q,
                                                 const lp::Options& lp_options = {});

/// Positive formula for a second order elliptic D; none exists for q >= 5.
std::optional<L1Solution> solve_positive(const CenterSet& S, const DiffOperator& D, int q,
                                         const lp::Options& lp_options = {});

}  // namespace mindiff
