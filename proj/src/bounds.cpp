#include "mindiff/bounds.hpp"

#include <cmath>

#include "mindiff/errors.hpp"

namespace mindiff {

namespace {

// Exact comparison is intended: callers pass mu = r + gamma literally.
bool same_order(double mu, double order) { return std::abs(mu - order) <= 1e-14 * (1.0 + std::abs(order)); }

}  // namespace

double bound_w1(const CenterSet& S, const Eigen::VectorXd& w, int q, double f_seminorm, double gamma) {
  if (w.size() != S.size()) throw Error(ErrorKind::invalid_argument, "weight length differs from the center count");
  const double p = q - 1 + gamma;
  double acc = 0.0;
  for (int j = 0; j < S.size(); ++j) acc += std::abs(w(j)) * distance_power(S.distance(j), p);
  return f_seminorm * acc;
}

double bound_growth_l1(const CenterSet& S, double rho1, double mu, int r, double gamma,
                       const std::vector<int>& support) {
  const double e = r + gamma - mu;
  if (same_order(mu, r + gamma)) return rho1;
  const CenterSet Xw = S.subset(support);
  if (e > 0.0) return rho1 * std::pow(h_radius(Xw), e);
  return rho1 * std::pow(s_radius(Xw), e);
}

double bound_growth_l2(const CenterSet& S, double rho2, double mu, int r, double gamma) {
  if (same_order(mu, r + gamma)) return std::sqrt(static_cast<double>(S.size())) * rho2;
  const double e = 2.0 * (r + gamma - mu);
  double acc = 0.0;
  for (int j = 0; j < S.size(); ++j) {
    const double dj = S.distance(j);
    if (dj > 0.0) acc += std::pow(dj, e);
  }
  return rho2 * std::sqrt(acc);
}

double bound_l1_via_rho2(const CenterSet& S, double rho2, double mu, int r, double gamma) {
  const double e = r + gamma - mu;
  const double factor = std::max(std::pow(h_radius(S), e), std::pow(s_radius(S), e));
  return std::sqrt(static_cast<double>(S.size())) * rho2 * factor;
}

double f2_seminorm(const CenterSet& S, int m) {
  if (S.dim() != 2) throw Error(ErrorKind::invalid_argument, "f2_seminorm needs d = 2");
  if (m < 0) throw Error(ErrorKind::invalid_argument, "f2_seminorm needs m >= 0");
  double best = S.z()(0) + S.z()(1);
  for (int j = 0; j < S.size(); ++j) best = std::max(best, S.points()(j, 0) + S.points()(j, 1));
  return std::pow(2.0, 0.5 * m) / std::tgamma(m + 1.0) * std::exp(best);
}

double stability_floor(const DiffOperator& D, const CenterSet& S) {
  const int k = D.order();
  if (k < 1) throw Error(ErrorKind::invalid_argument, "stability_floor needs an operator of order >= 1");
  double best = 0.0;
  for (const auto& [alpha, c] : D.terms()) {
    if (alpha.order() != k) continue;
    best = std::max(best, static_cast<double>(alpha.factorial()) * std::abs(c));
  }
  return best * std::pow(h_radius(S), -k);
}

}  // namespace mindiff
