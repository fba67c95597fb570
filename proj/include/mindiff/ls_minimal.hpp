#pragma once

// Weighted least-squares differentiation formulas. The formula applies D to
// the theta-weighted least-squares polynomial fit of order q,
//
//   minimize sum_j theta_j (p(x_j) - f(x_j))^2  over p of total degree < q,
//
// which is the exact formula minimizing sum_j w_j^2 / theta_j.

#include "mindiff/geometry.hpp"
#include "mindiff/growth.hpp"
#include "mindiff/polyalg.hpp"

namespace mindiff {

/// Relative singular value cutoff for the rank test.
inline constexpr double kRankCutoff = 1e-11;

/// One value in [0, +inf] per center. Zero drops the center, +inf pins the
/// fit to interpolate there and is only allowed at a center equal to z.
struct ThetaWeights {
  Eigen::VectorXd values;
};

struct LSSolution {
  WeightVector w;
  /// Fit operator: coefficients of the fitted polynomial in the basis
  /// ((x - z)/h)^alpha are fit_operator * f(X). Rows follow the graded basis.
  Eigen::MatrixXd fit_operator;
  double growth = 0.0;  // sqrt(sum_j w_j^2 / theta_j); ||w||_{2,mu} for solve_ls
  int rank = 0;
  double min_singular_value = 0.0;  // smallest kept, relative to the largest
  double residual = 0.0;            // normalized-frame exactness residual
  bool residual_ok = true;
  double h = 0.0;
  bool pinned = false;  // the fit interpolates at z
};

/// theta_j = ||x_j - z||^(-2 mu); pins the fit at z when mu > 0 and z is a
/// center. Throws Error(not_unisolvent) if the weighted system loses rank.
LSSolution solve_ls(const CenterSet& S, const DiffOperator& D, int q, double mu);

LSSolution solve_ls_general(const CenterSet& S, const DiffOperator& D, int q, const ThetaWeights& theta);

/// rho_{q,D}(z, X, 2, mu) read off the least-squares weights.
GrowthReport growth_2mu(const CenterSet& S, const DiffOperator& D, int q, double mu);

/// ||w||_1 of the least-squares weights.
double lebesgue_value(const LSSolution& sol);

/// Coefficients of the fitted polynomial for data f(X).
Eigen::VectorXd fit_coefficients(const LSSolution& sol, const Eigen::VectorXd& f_values);

}  // namespace mindiff
