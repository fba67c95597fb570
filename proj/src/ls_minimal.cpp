#include "mindiff/ls_minimal.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "mindiff/errors.hpp"
#include "mindiff/exactness.hpp"

namespace mindiff {

namespace {

struct Pinv {
  Eigen::MatrixXd op;  // (delta W)^+ delta
  int rank = 0;
  double min_sv = 0.0;
};

// (delta W)^+ delta for full column rank W, with unit-norm column scaling
// before the SVD so that the rank test sees the geometry rather than the
// monomial magnitudes.
Pinv weighted_pinv(const Eigen::MatrixXd& W, const Eigen::VectorXd& delta, int q) {
  Pinv out;
  const Eigen::Index m = W.cols();
  if (m == 0) {
    out.op = Eigen::MatrixXd::Zero(0, W.rows());
    out.min_sv = 1.0;
    return out;
  }
  Eigen::MatrixXd B = delta.asDiagonal() * W;
  Eigen::VectorXd colscale(m);
  for (Eigen::Index a = 0; a < m; ++a) {
    const double nrm = B.col(a).norm();
    if (nrm == 0.0) throw Error(ErrorKind::not_unisolvent, "not unisolvent for order " + std::to_string(q));
    colscale(a) = 1.0 / nrm;
    B.col(a) *= colscale(a);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(B, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cutoff = kRankCutoff * sv(0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) ++rank;
  }
  out.rank = rank;
  if (rank < m) {
    throw Error(ErrorKind::not_unisolvent,
                "not unisolvent for order " + std::to_string(q) + ": rank " + std::to_string(rank) + " < " +
                    std::to_string(m));
  }
  out.min_sv = sv(m - 1) / sv(0);
  const Eigen::MatrixXd pinv =
      svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().transpose();
  out.op = colscale.asDiagonal() * pinv * delta.asDiagonal();
  return out;
}

void validate_theta(const CenterSet& S, const ThetaWeights& theta) {
  if (theta.values.size() != S.size()) throw Error(ErrorKind::invalid_argument, "theta length differs from the center count");
  for (int j = 0; j < S.size(); ++j) {
    const double t = theta.values(j);
    if (std::isnan(t) || t < 0.0) throw Error(ErrorKind::invalid_argument, "theta values must lie in [0, +inf]");
    if (std::isinf(t) && S.distance(j) != 0.0) {
      throw Error(ErrorKind::invalid_argument, "infinite theta is only allowed at a center equal to z");
    }
  }
}

// Core solve on the normalized frame; theta is only used up to a common factor.
LSSolution solve_core(const CenterSet& S, const DiffOperator& D, int q, const Eigen::VectorXd& theta) {
  const ExactnessSystem sys = build_exactness_system(S, D, q);
  const int n = S.size();
  const int m = sys.basis.size();
  const Eigen::MatrixXd W = sys.A.transpose();

  int pin = -1;
  double tmax = 0.0;
  for (int j = 0; j < n; ++j) {
    if (std::isinf(theta(j))) {
      pin = j;
    } else {
      tmax = std::max(tmax, theta(j));
    }
  }
  if (tmax == 0.0 && pin < 0) throw Error(ErrorKind::not_unisolvent, "all theta values vanish");
  Eigen::VectorXd delta(n);
  for (int j = 0; j < n; ++j) delta(j) = std::isinf(theta(j)) ? 0.0 : std::sqrt(theta(j) / (tmax > 0.0 ? tmax : 1.0));

  LSSolution sol;
  sol.h = sys.frame.h;
  sol.fit_operator = Eigen::MatrixXd::Zero(m, n);
  if (pin < 0) {
    Pinv p = weighted_pinv(W, delta, q);
    sol.fit_operator = p.op;
    sol.rank = p.rank;
    sol.min_singular_value = p.min_sv;
  } else {
    // Constant coefficient pinned to f(z); the rest fits f - f(z) on X \ {z}.
    if (sys.basis[0].order() != 0) throw Error(ErrorKind::invalid_argument, "basis must start with the constant");
    std::vector<int> rows;
    for (int j = 0; j < n; ++j) {
      if (j != pin) rows.push_back(j);
    }
    const int nr = static_cast<int>(rows.size());
    Eigen::MatrixXd Wr(nr, m - 1);
    Eigen::VectorXd dr(nr);
    for (int i = 0; i < nr; ++i) {
      Wr.row(i) = W.row(rows[i]).tail(m - 1);
      dr(i) = delta(rows[i]);
    }
    Pinv p = weighted_pinv(Wr, dr, q);
    sol.fit_operator(0, pin) = 1.0;
    for (int i = 0; i < nr; ++i) sol.fit_operator.block(1, rows[i], m - 1, 1) = p.op.col(i);
    sol.fit_operator.block(1, pin, m - 1, 1) = -p.op.rowwise().sum();
    sol.rank = p.rank + 1;
    sol.min_singular_value = p.min_sv;
    sol.pinned = true;
  }

  // A P^T = I on a unisolvent set, so P^T also corrects rounding in A v = b.
  Eigen::VectorXd v = sol.fit_operator.transpose() * sys.b;
  for (int sweep = 0; sweep < 2; ++sweep) v += sol.fit_operator.transpose() * (sys.b - sys.A * v);
  sol.w.values = v * sys.to_original_scale();
  sol.w.provenance = Provenance::l2min;
  sol.w.exactness_order = q;
  sol.residual = (sys.A * v - sys.b).cwiseAbs().maxCoeff();
  sol.residual_ok = sol.residual <= 1e-8;
  return sol;
}

}  // namespace

LSSolution solve_ls(const CenterSet& S, const DiffOperator& D, int q, double mu) {
  if (mu < 0.0) throw Error(ErrorKind::invalid_argument, "mu must be >= 0");
  const double h = h_radius(S);
  Eigen::VectorXd theta(S.size());
  for (int j = 0; j < S.size(); ++j) {
    const double y = h > 0.0 ? S.distance(j) / h : 0.0;
    if (mu == 0.0) {
      theta(j) = 1.0;
    } else if (y == 0.0) {
      theta(j) = std::numeric_limits<double>::infinity();
    } else {
      theta(j) = std::pow(y, -2.0 * mu);
    }
  }
  LSSolution sol = solve_core(S, D, q, theta);
  sol.growth = seminorm_2mu(sol.w.values, S, mu);
  return sol;
}

LSSolution solve_ls_general(const CenterSet& S, const DiffOperator& D, int q, const ThetaWeights& theta) {
  validate_theta(S, theta);
  LSSolution sol = solve_core(S, D, q, theta.values);
  double acc = 0.0;
  for (int j = 0; j < S.size(); ++j) {
    const double t = theta.values(j);
    if (std::isinf(t)) continue;
    const double wj = sol.w.values(j);
    if (t == 0.0) continue;  // the fit ignores the center, so w_j = 0
    acc += wj * wj / t;
  }
  sol.growth = std::sqrt(acc);
  return sol;
}

GrowthReport growth_2mu(const CenterSet& S, const DiffOperator& D, int q, double mu) {
  LSSolution sol = solve_ls(S, D, q, mu);
  GrowthReport rep;
  rep.value = sol.growth;
  rep.family = GrowthFamily::two_mu;
  rep.mu = mu;
  rep.route = GrowthRoute::dual_inf;
  rep.certificate = sol.w.values;
  rep.h = sol.h;
  return rep;
}

double lebesgue_value(const LSSolution& sol) { return sol.w.values.lpNorm<1>(); }

Eigen::VectorXd fit_coefficients(const LSSolution& sol, const Eigen::VectorXd& f_values) {
  if (f_values.size() != sol.fit_operator.cols()) {
    throw Error(ErrorKind::invalid_argument, "data length differs from the center count");
  }
  return sol.fit_operator * f_values;
}

}  // namespace mindiff
