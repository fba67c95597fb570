#pragma once

// Multi-indices, monomial bases of the polynomial space of order q (total
// degree < q) and linear differential operators with coefficients frozen at
// the evaluation point.

#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace mindiff {

class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries);
  MultiIndex(std::initializer_list<int> entries);

  static MultiIndex zero(int d) { return MultiIndex(std::vector<int>(d, 0)); }
  static MultiIndex unit(int d, int i, int power = 1);

  int dim() const { return static_cast<int>(entries_.size()); }
  int order() const;  // |alpha|
  int operator[](int i) const { return entries_[i]; }
  const std::vector<int>& entries() const { return entries_; }

  /// alpha! = prod alpha_i!, exact in 64 bits. Throws on overflow.
  std::uint64_t factorial() const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  /// Graded lexicographic: total degree first, then entries lexicographically.
  friend bool operator<(const MultiIndex& a, const MultiIndex& b);

 private:
  std::vector<int> entries_;
};

/// n! over exact 64-bit integers; throws Error(invalid_argument) past 20!.
std::uint64_t factorial(int n);

/// dim of the space of d-variate polynomials of total degree < q,
/// i.e. C(d+q-1, d); 0 for q = 0.
std::int64_t dim_poly_space(int d, int q);

class PolyBasis {
 public:
  PolyBasis(int d, int q, std::vector<MultiIndex> indices)
      : d_(d), q_(q), indices_(std::move(indices)) {}

  int dim() const { return d_; }
  int order() const { return q_; }
  int size() const { return static_cast<int>(indices_.size()); }
  const MultiIndex& operator[](int i) const { return indices_[i]; }
  const std::vector<MultiIndex>& indices() const { return indices_; }

  /// Position of alpha in the basis, or -1.
  int position(const MultiIndex& alpha) const;

 private:
  int d_;
  int q_;
  std::vector<MultiIndex> indices_;
};

/// All multi-indices with |alpha| < q in graded lexicographic order.
PolyBasis enumerate_basis(int d, int q);

/// prod y_i^alpha_i with 0^0 = 1.
double monomial_eval(const MultiIndex& alpha, std::span<const double> y);
double monomial_eval(const MultiIndex& alpha, const Eigen::VectorXd& y);

/// Collocation matrix A(i, j) = y_j^alpha_i for the points stored as rows of Y.
Eigen::MatrixXd monomial_matrix(const PolyBasis& basis, const Eigen::MatrixXd& Y);

/// D = sum_{|alpha| <= k} c_alpha d^alpha with every c_alpha already evaluated
/// at the evaluation point z (the shifted operator D_z).
class DiffOperator {
 public:
  using Term = std::pair<MultiIndex, double>;

  DiffOperator(int d, std::vector<Term> terms);

  static DiffOperator laplacian(int d);
  static DiffOperator partial(const MultiIndex& alpha, double coeff = 1.0);
  static DiffOperator identity(int d);

  int dim() const { return d_; }
  int order() const { return k_; }
  bool homogeneous() const { return homogeneous_; }
  const std::vector<Term>& terms() const { return terms_; }

  /// c_alpha, 0 when absent.
  double coeff(const MultiIndex& alpha) const;

  /// D applied to the monomial x^beta, evaluated at x = 0.
  double apply_to_monomial_at_origin(const MultiIndex& beta) const;

 private:
  int d_;
  int k_ = 0;
  bool homogeneous_ = true;
  std::vector<Term> terms_;
};

/// Right-hand side of the exactness system on the set rescaled by h:
/// b_alpha = alpha! c_alpha h^(k - |alpha|). Weights v solving A v = b give
/// w = h^-k v on the original set.
Eigen::VectorXd op_rhs(const DiffOperator& D, const PolyBasis& basis, double h);

}  // namespace mindiff
