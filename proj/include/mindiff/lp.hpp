#pragma once

// Dense standard-form linear programming:
//
//   minimize c^T x  subject to  A x = b,  x >= 0.
//
// Two-phase primal simplex on a full tableau with Bland's smallest-index
// rule, so every optimum returned is a vertex with at most rows(A) nonzero
// components and identical inputs always produce the same basis.

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mindiff::lp {

struct StandardLP {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
};

enum class Status { optimal, infeasible, unbounded, stalled };
const char* to_string(Status s);

struct Options {
  double feasibility_tol = 1e-9;   // scaled by (1 + ||b||_inf)
  double reduced_cost_tol = 1e-10;
  double pivot_tol = 1e-11;
  int max_iterations = 0;          // 0 selects 50 * (n + M)
  int reinvert_every = 64;         // pivots between tableau re-factorizations
};

struct Result {
  Status status = Status::stalled;
  Eigen::VectorXd x;          // primal solution (valid when optimal)
  Eigen::VectorXd dual;       // y with A^T y <= c at optimality; 0 on dropped redundant rows
  double objective = 0.0;
  std::vector<int> basis;     // basic columns, one per non-redundant row
  int iterations = 0;
  double residual = 0.0;      // ||A x - b||_inf
  double phase1_objective = 0.0;
};

Result solve_lp(const StandardLP& problem, const Options& options = {});

}  // namespace mindiff::lp
