#include "mindiff/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mindiff/errors.hpp"

namespace mindiff::lp {

const char* to_string(Status s) {
  switch (s) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::unbounded: return "unbounded";
    case Status::stalled: return "stalled";
  }
  return "unknown";
}

namespace {

enum class PhaseOutcome { optimal, unbounded, stalled };

constexpr int kDegenerateRunLimit = 50;
constexpr double kProgressTol = 1e-14;
// Artificials left at zero level are only swapped for columns with a pivot
// this large; smaller ones mark the row as redundant.
constexpr double kArtificialPivotTol = 1e-9;

// Full simplex tableau T = B^-1 A with the basic solution rhs = B^-1 b and
// reduced costs for the current phase objective.
class Tableau {
 public:
  Tableau(Eigen::MatrixXd A, Eigen::VectorXd b, std::vector<int> basis, const Options& opt)
      : A_(std::move(A)), b_(std::move(b)), basis_(std::move(basis)), opt_(opt) {
    is_basic_.assign(static_cast<std::size_t>(A_.cols()), false);
    for (int j : basis_) is_basic_[static_cast<std::size_t>(j)] = true;
  }

  int rows() const { return static_cast<int>(A_.rows()); }
  int cols() const { return static_cast<int>(A_.cols()); }
  const std::vector<int>& basis() const { return basis_; }
  const Eigen::MatrixXd& A() const { return A_; }
  const Eigen::VectorXd& b() const { return b_; }
  const Eigen::VectorXd& rhs() const { return rhs_; }
  double objective() const { return objective_; }
  double entry(int i, int j) const { return T_(i, j); }

  void set_cost(Eigen::VectorXd cost) {
    cost_ = std::move(cost);
    reinvert();
  }

  // Recomputes the tableau from the original rows; clears accumulated
  // pivoting error. Keeps the incremental tableau if B is numerically singular.
  void reinvert() {
    const int m = rows();
    Eigen::MatrixXd B(m, m);
    for (int i = 0; i < m; ++i) B.col(i) = A_.col(basis_[static_cast<std::size_t>(i)]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
    if (lu.rank() == m || T_.size() == 0) {
      T_ = lu.solve(A_);
      rhs_ = lu.solve(b_);
      for (int i = 0; i < m; ++i) {
        T_.col(basis_[static_cast<std::size_t>(i)]).setZero();
        T_(i, basis_[static_cast<std::size_t>(i)]) = 1.0;
      }
    }
    refresh_costs();
  }

  void refresh_costs() {
    Eigen::VectorXd cb(rows());
    for (int i = 0; i < rows(); ++i) cb(i) = cost_(basis_[static_cast<std::size_t>(i)]);
    rc_ = cost_ - T_.transpose() * cb;
    for (int j : basis_) rc_(j) = 0.0;
    objective_ = cb.dot(rhs_);
  }

  void pivot(int r, int e) {
    const double p = T_(r, e);
    T_.row(r) /= p;
    rhs_(r) /= p;
    for (int i = 0; i < rows(); ++i) {
      if (i == r) continue;
      const double f = T_(i, e);
      if (f == 0.0) continue;
      T_.row(i) -= f * T_.row(r);
      rhs_(i) -= f * rhs_(r);
    }
    const double f = rc_(e);
    rc_ -= f * T_.row(r).transpose();
    objective_ += f * rhs_(r);
    T_.col(e).setZero();
    T_(r, e) = 1.0;
    rc_(e) = 0.0;
    is_basic_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(r)])] = false;
    is_basic_[static_cast<std::size_t>(e)] = true;
    basis_[static_cast<std::size_t>(r)] = e;
  }

  // Dantzig pricing with a Bland fallback: after a run of degenerate pivots the
  // lowest-index improving column enters and ties in the ratio test go to the
  // lowest basic index, which rules out cycling. The ratio test is the
  // two-pass Harris variant, so among near-tied rows the largest pivot wins.
  PhaseOutcome run(int allowed_cols, int& iterations, int max_iterations) {
    int since_reinvert = 0;
    int degenerate_run = 0;
    bool verified = false;
    for (;;) {
      const bool bland = degenerate_run >= kDegenerateRunLimit;
      int e = -1;
      double most = -opt_.reduced_cost_tol;
      for (int j = 0; j < allowed_cols; ++j) {
        if (is_basic_[static_cast<std::size_t>(j)] || rc_(j) >= most) continue;
        e = j;
        if (bland) break;
        most = rc_(j);
      }
      if (e < 0) {
        // Confirm against a fresh factorization before declaring optimality.
        if (verified || since_reinvert == 0) return PhaseOutcome::optimal;
        reinvert();
        since_reinvert = 0;
        verified = true;
        continue;
      }
      verified = false;
      if (iterations >= max_iterations) return PhaseOutcome::stalled;

      const double delta = opt_.feasibility_tol;
      double step_cap = std::numeric_limits<double>::infinity();
      for (int i = 0; i < rows(); ++i) {
        const double a = T_(i, e);
        if (a > opt_.pivot_tol) step_cap = std::min(step_cap, (std::max(rhs_(i), 0.0) + delta) / a);
      }
      if (!std::isfinite(step_cap)) return PhaseOutcome::unbounded;
      int r = -1;
      for (int i = 0; i < rows(); ++i) {
        const double a = T_(i, e);
        if (a <= opt_.pivot_tol || std::max(rhs_(i), 0.0) / a > step_cap) continue;
        if (r < 0) {
          r = i;
        } else if (bland) {
          if (basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(r)]) r = i;
        } else if (a > T_(r, e)) {
          r = i;
        }
      }

      const double step = std::max(rhs_(r), 0.0) / T_(r, e);
      degenerate_run = step * std::abs(rc_(e)) > kProgressTol ? 0 : degenerate_run + 1;
      pivot(r, e);
      ++iterations;
      if (++since_reinvert >= opt_.reinvert_every) {
        reinvert();
        since_reinvert = 0;
      }
    }
  }

  // Drops the given rows and every column at or beyond `keep_cols`.
  void shrink(const std::vector<int>& drop_rows, int keep_cols) {
    std::vector<int> keep;
    for (int i = 0; i < rows(); ++i) {
      if (std::find(drop_rows.begin(), drop_rows.end(), i) == drop_rows.end()) keep.push_back(i);
    }
    Eigen::MatrixXd A(static_cast<Eigen::Index>(keep.size()), keep_cols);
    Eigen::VectorXd b(static_cast<Eigen::Index>(keep.size()));
    std::vector<int> basis;
    for (std::size_t k = 0; k < keep.size(); ++k) {
      A.row(static_cast<Eigen::Index>(k)) = A_.row(keep[k]).leftCols(keep_cols);
      b(static_cast<Eigen::Index>(k)) = b_(keep[k]);
      basis.push_back(basis_[static_cast<std::size_t>(keep[k])]);
    }
    A_ = std::move(A);
    b_ = std::move(b);
    basis_ = std::move(basis);
    is_basic_.assign(static_cast<std::size_t>(keep_cols), false);
    for (int j : basis_) is_basic_[static_cast<std::size_t>(j)] = true;
    T_.resize(0, 0);
  }

 private:
  Eigen::MatrixXd A_;
  Eigen::VectorXd b_;
  std::vector<int> basis_;
  std::vector<bool> is_basic_;
  const Options& opt_;
  Eigen::MatrixXd T_;
  Eigen::VectorXd rhs_;
  Eigen::VectorXd cost_;
  Eigen::VectorXd rc_;
  double objective_ = 0.0;
};

}  // namespace

Result solve_lp(const StandardLP& p, const Options& opt) {
  const int m = static_cast<int>(p.A.rows());
  const int n = static_cast<int>(p.A.cols());
  if (p.b.size() != m || p.c.size() != n) throw Error(ErrorKind::invalid_argument, "solve_lp: inconsistent dimensions");
  if (!p.A.allFinite() || !p.b.allFinite() || !p.c.allFinite()) {
    throw Error(ErrorKind::invalid_argument, "solve_lp: non-finite data");
  }
  const int max_iterations = opt.max_iterations > 0 ? opt.max_iterations : 50 * (n + m);

  Result res;
  res.x = Eigen::VectorXd::Zero(n);
  res.dual = Eigen::VectorXd::Zero(m);
  if (m == 0) {
    // No constraints: bounded iff c >= 0, with x = 0 optimal.
    res.status = (p.c.array() < -opt.reduced_cost_tol).any() ? Status::unbounded : Status::optimal;
    return res;
  }

  // Orient rows so that b >= 0.
  Eigen::VectorXd sign = Eigen::VectorXd::Ones(m);
  for (int i = 0; i < m; ++i) {
    if (p.b(i) < 0.0) sign(i) = -1.0;
  }
  const Eigen::MatrixXd Aflip = sign.asDiagonal() * p.A;
  const Eigen::VectorXd bflip = sign.cwiseProduct(p.b);

  // Reuse existing unit columns as the starting basis; add artificials for the rest.
  std::vector<int> start(static_cast<std::size_t>(m), -1);
  for (int j = 0; j < n; ++j) {
    int hit = -1;
    bool unit = true;
    for (int i = 0; i < m && unit; ++i) {
      const double a = Aflip(i, j);
      if (a == 0.0) continue;
      if (a == 1.0 && hit < 0) {
        hit = i;
      } else {
        unit = false;
      }
    }
    if (unit && hit >= 0 && start[static_cast<std::size_t>(hit)] < 0) start[static_cast<std::size_t>(hit)] = j;
  }
  int n_art = 0;
  for (int i = 0; i < m; ++i) {
    if (start[static_cast<std::size_t>(i)] < 0) ++n_art;
  }
  Eigen::MatrixXd Afull = Eigen::MatrixXd::Zero(m, n + n_art);
  Afull.leftCols(n) = Aflip;
  {
    int a = 0;
    for (int i = 0; i < m; ++i) {
      if (start[static_cast<std::size_t>(i)] < 0) {
        Afull(i, n + a) = 1.0;
        start[static_cast<std::size_t>(i)] = n + a;
        ++a;
      }
    }
  }

  Tableau tab(std::move(Afull), bflip, start, opt);
  const double feas_tol = opt.feasibility_tol * (1.0 + p.b.cwiseAbs().maxCoeff());
  std::vector<int> dropped;

  if (n_art > 0) {
    Eigen::VectorXd cost1 = Eigen::VectorXd::Zero(n + n_art);
    cost1.tail(n_art).setOnes();
    tab.set_cost(std::move(cost1));
    const PhaseOutcome out = tab.run(n, res.iterations, max_iterations);
    res.phase1_objective = tab.objective();
    if (out == PhaseOutcome::stalled) {
      res.status = Status::stalled;
      return res;
    }
    tab.reinvert();
    res.phase1_objective = tab.objective();
    if (tab.objective() > feas_tol) {
      res.status = Status::infeasible;
      return res;
    }
    // Pivot remaining (zero-level) artificials out; rows where that is
    // impossible are linearly dependent on the others.
    for (int i = 0; i < tab.rows(); ++i) {
      if (tab.basis()[static_cast<std::size_t>(i)] < n) continue;
      int best_j = -1;
      double best_a = kArtificialPivotTol;
      for (int j = 0; j < n; ++j) {
        if (std::find(tab.basis().begin(), tab.basis().end(), j) != tab.basis().end()) continue;
        const double a = std::abs(tab.entry(i, j));
        if (a > best_a) {
          best_a = a;
          best_j = j;
        }
      }
      if (best_j >= 0) {
        tab.pivot(i, best_j);
      } else {
        dropped.push_back(i);
      }
    }
    tab.shrink(dropped, n);
  }

  // Row indices of the original problem that survived.
  std::vector<int> kept;
  for (int i = 0; i < m; ++i) {
    if (std::find(dropped.begin(), dropped.end(), i) == dropped.end()) kept.push_back(i);
  }

  if (tab.rows() == 0) {
    res.status = (p.c.array() < -opt.reduced_cost_tol).any() ? Status::unbounded : Status::optimal;
    if (res.status == Status::optimal) res.residual = p.b.cwiseAbs().maxCoeff();
    return res;
  }

  tab.set_cost(p.c);
  const PhaseOutcome out = tab.run(n, res.iterations, max_iterations);
  if (out == PhaseOutcome::stalled) {
    res.status = Status::stalled;
    return res;
  }
  if (out == PhaseOutcome::unbounded) {
    res.status = Status::unbounded;
    return res;
  }

  // Basic solution from a fresh factorization plus two refinement sweeps.
  const int mk = tab.rows();
  Eigen::MatrixXd B(mk, mk);
  for (int i = 0; i < mk; ++i) B.col(i) = tab.A().col(tab.basis()[static_cast<std::size_t>(i)]);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
  Eigen::VectorXd xb = tab.rhs();
  for (int sweep = 0; sweep < 2; ++sweep) {
    Eigen::VectorXd r = tab.b() - B * xb;
    xb += lu.solve(r);
  }
  for (int i = 0; i < mk; ++i) res.x(tab.basis()[static_cast<std::size_t>(i)]) = xb(i);

  Eigen::VectorXd cb(mk);
  for (int i = 0; i < mk; ++i) cb(i) = p.c(tab.basis()[static_cast<std::size_t>(i)]);
  const Eigen::VectorXd y = lu.transpose().solve(cb);
  for (int k = 0; k < mk; ++k) res.dual(kept[static_cast<std::size_t>(k)]) = sign(kept[static_cast<std::size_t>(k)]) * y(k);

  res.basis = tab.basis();
  res.objective = p.c.dot(res.x);
  res.residual = (p.A * res.x - p.b).cwiseAbs().maxCoeff();
  res.status = Status::optimal;
  return res;
}

}  // namespace mindiff::lp
