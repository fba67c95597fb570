#include "mindiff/l1_minimal.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "mindiff/errors.hpp"
#include "mindiff/exactness.hpp"

namespace mindiff {

const char* to_string(GrowthFamily f) {
  switch (f) {
    case GrowthFamily::one_mu: return "one_mu";
    case GrowthFamily::two_mu: return "two_mu";
    case GrowthFamily::custom: return "custom";
  }
  return "unknown";
}

const char* to_string(GrowthRoute r) {
  switch (r) {
    case GrowthRoute::dual_inf: return "dual_inf";
    case GrowthRoute::primal_sup: return "primal_sup";
  }
  return "unknown";
}

namespace {

Eigen::VectorXd unit_ball_costs(const ExactnessSystem& sys, double mu) {
  const Eigen::Index n = sys.frame.Y.rows();
  Eigen::VectorXd c(n);
  for (Eigen::Index j = 0; j < n; ++j) c(j) = distance_power(sys.frame.Y.row(j).norm(), mu);
  return c;
}

void throw_on_failure(const lp::Result& res, const char* what) {
  if (res.status == lp::Status::stalled) {
    throw Error(ErrorKind::stalled, std::string(what) + ": simplex stalled after " + std::to_string(res.iterations) + " pivots");
  }
}

L1Solution finish(const ExactnessSystem& sys, const CenterSet& S, Eigen::VectorXd v, double mu, Provenance prov,
                  int q, int iterations) {
  L1Solution sol;
  sol.w.values = v * sys.to_original_scale();
  sol.w.provenance = prov;
  sol.w.exactness_order = q;
  sol.mu = mu;
  sol.objective = seminorm_1mu(sol.w.values, S, mu);
  sol.support_size = sol.w.support_size();
  sol.residual = (sys.A * v - sys.b).cwiseAbs().maxCoeff();
  sol.residual_ok = sol.residual <= kExactnessResidualTol;
  sol.h = sys.frame.h;
  sol.lp_iterations = iterations;
  return sol;
}

}  // namespace

L1Solution solve_l1(const CenterSet& S, const DiffOperator& D, int q, double mu, const lp::Options& lp_options) {
  if (mu < 0.0) throw Error(ErrorKind::invalid_argument, "mu must be >= 0");
  const ExactnessSystem sys = build_exactness_system(S, D, q);
  const Eigen::Index n = S.size();
  const Eigen::Index m = sys.basis.size();

  // w = w+ - w-, both halves non-negative.
  lp::StandardLP lp;
  lp.A.resize(m, 2 * n);
  lp.A << sys.A, -sys.A;
  lp.b = sys.b;
  const Eigen::VectorXd c = unit_ball_costs(sys, mu);
  lp.c.resize(2 * n);
  lp.c << c, c;

  const lp::Result res = lp::solve_lp(lp, lp_options);
  throw_on_failure(res, "solve_l1");
  if (res.status == lp::Status::infeasible) {
    throw Error(ErrorKind::no_formula, "no formula of exactness order " + std::to_string(q) + " exists on X");
  }
  if (res.status != lp::Status::optimal) {
    throw Error(ErrorKind::precision, "solve_l1: LP with non-negative costs reported unbounded");
  }
  Eigen::VectorXd v = res.x.head(n) - res.x.tail(n);
  return finish(sys, S, std::move(v), mu, Provenance::l1min, q, res.iterations);
}

GrowthReport growth_primal(const CenterSet& S, const DiffOperator& D, int q, double mu, const lp::Options& lp_options) {
  if (mu < 0.0) throw Error(ErrorKind::invalid_argument, "mu must be >= 0");
  const ExactnessSystem sys = build_exactness_system(S, D, q);
  const Eigen::Index n = S.size();
  const Eigen::Index m = sys.basis.size();
  const Eigen::VectorXd u = unit_ball_costs(sys, mu);

  // Columns: b+ (m), b- (m), upper slacks (n), lower slacks (n).
  //   +sum_alpha b_alpha y_j^alpha + s+_j = u_j
  //   -sum_alpha b_alpha y_j^alpha + s-_j = u_j
  lp::StandardLP lp;
  const Eigen::MatrixXd At = sys.A.transpose();
  lp.A = Eigen::MatrixXd::Zero(2 * n, 2 * m + 2 * n);
  lp.A.block(0, 0, n, m) = At;
  lp.A.block(0, m, n, m) = -At;
  lp.A.block(n, 0, n, m) = -At;
  lp.A.block(n, m, n, m) = At;
  lp.A.block(0, 2 * m, 2 * n, 2 * n).setIdentity();
  lp.b.resize(2 * n);
  lp.b << u, u;
  lp.c = Eigen::VectorXd::Zero(2 * m + 2 * n);
  lp.c.head(m) = -sys.b;
  lp.c.segment(m, m) = sys.b;

  const lp::Result res = lp::solve_lp(lp, lp_options);
  throw_on_failure(res, "growth_primal");

  GrowthReport rep;
  rep.family = GrowthFamily::one_mu;
  rep.mu = mu;
  rep.route = GrowthRoute::primal_sup;
  rep.h = sys.frame.h;
  const double scale = std::pow(sys.frame.h, mu - sys.k);
  if (res.status == lp::Status::unbounded) {
    rep.value = std::numeric_limits<double>::infinity();
    return rep;
  }
  if (res.status != lp::Status::optimal) {
    throw Error(ErrorKind::precision, "growth_primal: LP with a feasible origin reported infeasible");
  }
  rep.value = -res.objective * scale;
  rep.certificate = (res.x.head(m) - res.x.segment(m, m)) * distance_power(sys.frame.h, mu);
  return rep;
}

double tau(const DiffOperator& D) {
  if (D.order() != 2) throw Error(ErrorKind::invalid_argument, "tau needs a second order operator");
  double t = 0.0;
  for (int i = 0; i < D.dim(); ++i) t += D.coeff(MultiIndex::unit(D.dim(), i, 2));
  return 2.0 * t;
}

std::optional<L1Solution> solve_sign_constrained(const CenterSet& S, const DiffOperator& D, int q,
                                                 const lp::Options& lp_options) {
  if (D.order() != 2) throw Error(ErrorKind::invalid_argument, "positive formulas need a second order operator");
  const int iz = S.index_of_z();
  if (iz < 0) throw Error(ErrorKind::invalid_argument, "positive formulas need z to be one of the centers");
  const ExactnessSystem sys = build_exactness_system(S, D, q);
  const Eigen::Index n = S.size();

  // Column 0 carries -w_z, the remaining columns w_j for j != z in input order.
  std::vector<int> order{iz};
  for (int j = 0; j < n; ++j) {
    if (j != iz) order.push_back(j);
  }
  const Eigen::VectorXd c = unit_ball_costs(sys, 2.0);
  lp::StandardLP lp;
  lp.A.resize(sys.A.rows(), n);
  lp.c.resize(n);
  for (Eigen::Index col = 0; col < n; ++col) {
    const int j = order[static_cast<std::size_t>(col)];
    lp.A.col(col) = (col == 0 ? -1.0 : 1.0) * sys.A.col(j);
    lp.c(col) = c(j);
  }
  lp.b = sys.b;

  const lp::Result res = lp::solve_lp(lp, lp_options);
  throw_on_failure(res, "solve_sign_constrained");
  if (res.status == lp::Status::infeasible) return std::nullopt;
  if (res.status != lp::Status::optimal) {
    throw Error(ErrorKind::precision, "solve_sign_constrained: unexpected LP status");
  }
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  for (Eigen::Index col = 0; col < n; ++col) {
    v(order[static_cast<std::size_t>(col)]) = (col == 0 ? -1.0 : 1.0) * res.x(col);
  }
  return finish(sys, S, std::move(v), 2.0, Provenance::l1min, q, res.iterations);
}

std::optional<L1Solution> solve_positive(const CenterSet& S, const DiffOperator& D, int q, const lp::Options& lp_options) {
  if (D.order() != 2) throw Error(ErrorKind::invalid_argument, "positive formulas need a second order operator");
  if (S.index_of_z() < 0) throw Error(ErrorKind::invalid_argument, "positive formulas need z to be one of the centers");
  // Exactness on ||x - z||^4 would force sum_j w_j ||x_j - z||^4 = 0.
  if (q >= 5) return std::nullopt;
  return solve_sign_constrained(S, D, q, lp_options);
}

}  // namespace mindiff
