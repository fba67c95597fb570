#pragma once

// Matern kernels, the worst-case error of a differentiation formula over the
// unit ball of the kernel's native space, and the test functions f1, f2.
//
// The quadratic form cancels terms of size ||w||^2 M(0) down to the much
// smaller squared error, so its kernel values are evaluated in quad precision.

#include <memory>

#include "mindiff/geometry.hpp"
#include "mindiff/polyalg.hpp"

namespace mindiff {

/// K_nu(r) for integer or half-integer nu and r > 0. Throws
/// Error(invalid_argument) for r <= 0 or other orders.
double bessel_k(double nu, double r);
long double bessel_k_ld(long double nu, long double r);

/// r^mu K_mu(r), with the limit 2^(mu-1) Gamma(mu) at r = 0 for mu > 0
/// (+inf for mu <= 0).
long double g_function(long double mu, long double r);

/// M(x) = ||x||^nu K_nu(||x||) / (2^(rho-1) Gamma(rho)) with nu = rho - d/2,
/// the reproducing kernel of the Sobolev space H^rho(R^d).
class MaternKernel {
 public:
  MaternKernel(double rho, int d);

  double rho() const { return rho_; }
  int dim() const { return d_; }
  double nu() const { return nu_; }
  long double normalization() const { return norm_; }

  long double value_ld(long double r) const;
  /// d^order/dr^order M along a ray, order 0..4.
  long double radial_derivative_ld(long double r, int order) const;
  long double laplacian_ld(long double r) const;
  long double bilaplacian_at_zero_ld() const;

  double value(double r) const { return static_cast<double>(value_ld(r)); }
  double radial_derivative(double r, int order) const {
    return static_cast<double>(radial_derivative_ld(r, order));
  }
  double laplacian(double r) const { return static_cast<double>(laplacian_ld(r)); }
  double bilaplacian_at_zero() const { return static_cast<double>(bilaplacian_at_zero_ld()); }

  int twice_nu() const { return twice_nu_; }
  int twice_rho() const { return twice_rho_; }

 private:
  // L^j M = (-1)^j g_{nu-j} / C with L = (1/r) d/dr.
  long double lowered(long double r, int j) const;

  double rho_;
  int d_;
  double nu_;
  int twice_nu_;
  int twice_rho_;
  long double norm_;
};

struct WceReport {
  double Q = 0.0;
  double wce = 0.0;       // sqrt(max(Q, 0))
  double diagonal = 0.0;  // D D~ M(0)
  double cross = 0.0;     // sum_j w_j D M(z - x_j)
  double gram = 0.0;      // sum_ij w_i w_j M(x_i - x_j)
  bool precision_ok = true;  // false when Q < -1e-9 |diagonal|
};

/// Gram condition numbers beyond this raise Error(ill_conditioned).
inline constexpr double kMaxGramCondition = 1e14;

/// Q(w) = D D~ M(0) - 2 sum_j w_j D M(z - x_j) + sum_ij w_i w_j M(x_i - x_j)
/// for D the Laplacian, with the kernel data of one center set precomputed
/// so that many weight vectors can be scored cheaply.
class KernelQuadraticForm {
 public:
  KernelQuadraticForm(const CenterSet& S, const DiffOperator& D, const MaternKernel& K);
  ~KernelQuadraticForm();
  KernelQuadraticForm(KernelQuadraticForm&&) noexcept;
  KernelQuadraticForm& operator=(KernelQuadraticForm&&) noexcept;

  int size() const;
  WceReport evaluate(const Eigen::VectorXd& w) const;
  /// Minimizer of Q: solves [M(x_i - x_j)] w = [D M(z - x_j)].
  WeightVector optimal_weights() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

WceReport q_form(const CenterSet& S, const DiffOperator& D, const Eigen::VectorXd& w, const MaternKernel& K);
WeightVector optimal_weights(const CenterSet& S, const DiffOperator& D, const MaternKernel& K);

/// Wendland-based test function phi_{3,2}(r)(x1 + x2) + phi_{3,3}(r).
double test_f1(double x1, double x2);
double laplacian_f1(double x1, double x2);
double laplacian_f1_at_origin();
/// e^(x1 + x2)
double test_f2(double x1, double x2);
double laplacian_f2(double x1, double x2);

/// Extended-precision versions, for error sums whose weights are large.
long double test_f1_ld(long double x1, long double x2);
long double laplacian_f1_ld(long double x1, long double x2);
long double test_f2_ld(long double x1, long double x2);
long double laplacian_f2_ld(long double x1, long double x2);

}  // namespace mindiff
