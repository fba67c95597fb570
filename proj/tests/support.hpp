#pragma once

// Fixtures shared by the unit tests.

#include <random>

#include "mindiff/geometry.hpp"

namespace mindiff::testing {

/// z = 0 and the five-point star, center first.
inline CenterSet star() {
  Eigen::MatrixXd P(5, 2);
  P << 0, 0, 1, 0, -1, 0, 0, 1, 0, -1;
  return CenterSet(Eigen::Vector2d::Zero(), P);
}

inline Eigen::VectorXd star_weights() {
  Eigen::VectorXd w(5);
  w << -4, 1, 1, 1, 1;
  return w;
}

/// {-1, 0, 1} on the line with z = 0.
inline CenterSet line3() {
  Eigen::MatrixXd P(3, 1);
  P << -1, 0, 1;
  return CenterSet(Eigen::VectorXd::Zero(1), P);
}

class Rng {
 public:
  explicit Rng(unsigned seed) : gen_(seed) {}
  double uniform(double lo = -1.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  Eigen::VectorXd vector(int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = uniform();
    return v;
  }

 private:
  std::mt19937_64 gen_;
};

/// n points in [-1, 1]^2 around z = 0; the first one is z itself when
/// `with_z` is set.
inline CenterSet random_set(Rng& rng, int n, bool with_z = false) {
  Eigen::MatrixXd P(n, 2);
  for (int j = 0; j < n; ++j) {
    P(j, 0) = rng.uniform();
    P(j, 1) = rng.uniform();
  }
  if (with_z) P.row(0).setZero();
  return CenterSet(Eigen::Vector2d::Zero(), P);
}

}  // namespace mindiff::testing
