#pragma once

#include "mindiff/geometry.hpp"
#include "mindiff/polyalg.hpp"

namespace mindiff {

/// Polynomial exactness conditions A v = b on the unit-ball rescaling
/// Y = (X - z)/h: A(alpha, j) = y_j^alpha, b = op_rhs(D, basis, h).
/// A weight vector v on Y corresponds to w = h^-k v on X.
struct ExactnessSystem {
  PolyBasis basis;
  NormalizedSet frame;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  int k = 0;

  double to_original_scale() const;  // h^-k
};

ExactnessSystem build_exactness_system(const CenterSet& S, const DiffOperator& D, int q);

/// ||A v - b||_inf for v = h^k w.
double exactness_residual(const ExactnessSystem& sys, const Eigen::VectorXd& w);

}  // namespace mindiff
