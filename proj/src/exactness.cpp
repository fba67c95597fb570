#include "mindiff/exactness.hpp"

#include <cmath>

#include "mindiff/errors.hpp"

namespace mindiff {

double ExactnessSystem::to_original_scale() const { return std::pow(frame.h, -k); }

ExactnessSystem build_exactness_system(const CenterSet& S, const DiffOperator& D, int q) {
  if (S.dim() != D.dim()) throw Error(ErrorKind::invalid_argument, "center set and operator differ in dimension");
  if (q <= D.order()) throw Error(ErrorKind::invalid_argument, "exactness order q must exceed the operator order");
  PolyBasis basis = enumerate_basis(S.dim(), q);
  // X = {z} has nothing to rescale; the unit frame keeps the system well defined.
  NormalizedSet frame =
      h_radius(S) > 0.0 ? normalize(S) : NormalizedSet{Eigen::MatrixXd::Zero(S.size(), S.dim()), 1.0};
  Eigen::MatrixXd A = monomial_matrix(basis, frame.Y);
  Eigen::VectorXd b = op_rhs(D, basis, frame.h);
  return ExactnessSystem{std::move(basis), std::move(frame), std::move(A), std::move(b), D.order()};
}

double exactness_residual(const ExactnessSystem& sys, const Eigen::VectorXd& w) {
  const Eigen::VectorXd v = w / sys.to_original_scale();
  return (sys.A * v - sys.b).cwiseAbs().maxCoeff();
}

}  // namespace mindiff
