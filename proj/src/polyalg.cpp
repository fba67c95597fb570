#include "mindiff/polyalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "mindiff/errors.hpp"

namespace mindiff {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::no_formula: return "no_formula";
    case ErrorKind::not_unisolvent: return "not_unisolvent";
    case ErrorKind::stalled: return "stalled";
    case ErrorKind::ill_conditioned: return "ill_conditioned";
    case ErrorKind::precision: return "precision";
  }
  return "unknown";
}

MultiIndex::MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
  for (int a : entries_) {
    if (a < 0) throw Error(ErrorKind::invalid_argument, "multi-index entries must be non-negative");
  }
}

MultiIndex::MultiIndex(std::initializer_list<int> entries)
    : MultiIndex(std::vector<int>(entries)) {}

MultiIndex MultiIndex::unit(int d, int i, int power) {
  std::vector<int> e(d, 0);
  e.at(i) = power;
  return MultiIndex(std::move(e));
}

int MultiIndex::order() const { return std::accumulate(entries_.begin(), entries_.end(), 0); }

std::uint64_t MultiIndex::factorial() const {
  std::uint64_t out = 1;
  for (int a : entries_) {
    const std::uint64_t f = mindiff::factorial(a);
    if (out > std::numeric_limits<std::uint64_t>::max() / f) {
      throw Error(ErrorKind::invalid_argument, "multi-index factorial overflows 64 bits");
    }
    out *= f;
  }
  return out;
}

bool operator<(const MultiIndex& a, const MultiIndex& b) {
  const int oa = a.order(), ob = b.order();
  if (oa != ob) return oa < ob;
  return a.entries() < b.entries();
}

std::uint64_t factorial(int n) {
  if (n < 0) throw Error(ErrorKind::invalid_argument, "factorial of a negative number");
  if (n > 20) throw Error(ErrorKind::invalid_argument, "factorial overflows 64 bits: " + std::to_string(n));
  std::uint64_t out = 1;
  for (int i = 2; i <= n; ++i) out *= static_cast<std::uint64_t>(i);
  return out;
}

std::int64_t dim_poly_space(int d, int q) {
  if (d < 1 || q < 0) throw Error(ErrorKind::invalid_argument, "dim_poly_space needs d >= 1, q >= 0");
  if (q == 0) return 0;
  // C(d+q-1, d) = C(d+q-1, q-1), built incrementally so intermediates stay exact.
  const int n = d + q - 1;
  const int k = std::min(d, q - 1);
  std::int64_t c = 1;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

int PolyBasis::position(const MultiIndex& alpha) const {
  auto it = std::lower_bound(indices_.begin(), indices_.end(), alpha);
  if (it == indices_.end() || !(*it == alpha)) return -1;
  return static_cast<int>(it - indices_.begin());
}

namespace {

// Lexicographically ascending compositions of `total` into d parts.
void compositions(int d, int total, std::vector<int>& prefix, std::vector<MultiIndex>& out) {
  const int slot = static_cast<int>(prefix.size());
  if (slot == d - 1) {
    prefix.push_back(total);
    out.emplace_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int a = 0; a <= total; ++a) {
    prefix.push_back(a);
    compositions(d, total - a, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

PolyBasis enumerate_basis(int d, int q) {
  if (d < 1 || q < 1) throw Error(ErrorKind::invalid_argument, "enumerate_basis needs d >= 1, q >= 1");
  std::vector<MultiIndex> out;
  out.reserve(static_cast<std::size_t>(dim_poly_space(d, q)));
  std::vector<int> prefix;
  for (int degree = 0; degree < q; ++degree) compositions(d, degree, prefix, out);
  return PolyBasis(d, q, std::move(out));
}

double monomial_eval(const MultiIndex& alpha, std::span<const double> y) {
  if (static_cast<int>(y.size()) != alpha.dim()) {
    throw Error(ErrorKind::invalid_argument, "monomial_eval: dimension mismatch");
  }
  double out = 1.0;
  for (int i = 0; i < alpha.dim(); ++i) {
    for (int p = 0; p < alpha[i]; ++p) out *= y[i];
  }
  return out;
}

double monomial_eval(const MultiIndex& alpha, const Eigen::VectorXd& y) {
  return monomial_eval(alpha, std::span<const double>(y.data(), static_cast<std::size_t>(y.size())));
}

Eigen::MatrixXd monomial_matrix(const PolyBasis& basis, const Eigen::MatrixXd& Y) {
  if (Y.cols() != basis.dim()) throw Error(ErrorKind::invalid_argument, "monomial_matrix: dimension mismatch");
  Eigen::MatrixXd A(basis.size(), Y.rows());
  for (Eigen::Index j = 0; j < Y.rows(); ++j) {
    const Eigen::VectorXd y = Y.row(j).transpose();
    for (int i = 0; i < basis.size(); ++i) A(i, j) = monomial_eval(basis[i], y);
  }
  return A;
}

DiffOperator::DiffOperator(int d, std::vector<Term> terms) : d_(d) {
  if (d < 1) throw Error(ErrorKind::invalid_argument, "operator dimension must be >= 1");
  for (auto& [alpha, c] : terms) {
    if (alpha.dim() != d) throw Error(ErrorKind::invalid_argument, "operator term has wrong dimension");
    if (!std::isfinite(c)) throw Error(ErrorKind::invalid_argument, "operator coefficient is not finite");
    if (c == 0.0) continue;
    auto it = std::find_if(terms_.begin(), terms_.end(), [&](const Term& t) { return t.first == alpha; });
    if (it != terms_.end()) {
      it->second += c;
    } else {
      terms_.emplace_back(alpha, c);
    }
  }
  std::erase_if(terms_, [](const Term& t) { return t.second == 0.0; });
  if (terms_.empty()) throw Error(ErrorKind::invalid_argument, "operator has no nonzero term");
  std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
  k_ = terms_.back().first.order();
  homogeneous_ = terms_.front().first.order() == k_;
}

DiffOperator DiffOperator::laplacian(int d) {
  std::vector<Term> t;
  for (int i = 0; i < d; ++i) t.emplace_back(MultiIndex::unit(d, i, 2), 1.0);
  return DiffOperator(d, std::move(t));
}

DiffOperator DiffOperator::partial(const MultiIndex& alpha, double coeff) {
  return DiffOperator(alpha.dim(), {{alpha, coeff}});
}

DiffOperator DiffOperator::identity(int d) { return DiffOperator(d, {{MultiIndex::zero(d), 1.0}}); }

double DiffOperator::coeff(const MultiIndex& alpha) const {
  for (const auto& [a, c] : terms_) {
    if (a == alpha) return c;
  }
  return 0.0;
}

double DiffOperator::apply_to_monomial_at_origin(const MultiIndex& beta) const {
  // d^alpha x^beta at 0 is beta! when alpha == beta and 0 otherwise.
  return static_cast<double>(beta.factorial()) * coeff(beta);
}

Eigen::VectorXd op_rhs(const DiffOperator& D, const PolyBasis& basis, double h) {
  if (basis.dim() != D.dim()) throw Error(ErrorKind::invalid_argument, "op_rhs: dimension mismatch");
  if (basis.order() <= D.order()) throw Error(ErrorKind::invalid_argument, "op_rhs: need q > k");
  if (!(h > 0.0)) throw Error(ErrorKind::invalid_argument, "op_rhs: h must be positive");
  Eigen::VectorXd b = Eigen::VectorXd::Zero(basis.size());
  for (const auto& [alpha, c] : D.terms()) {
    const int pos = basis.position(alpha);
    if (pos < 0) continue;
    const int shift = D.order() - alpha.order();
    b(pos) = static_cast<double>(alpha.factorial()) * c * (shift == 0 ? 1.0 : std::pow(h, shift));
  }
  return b;
}

}  // namespace mindiff
